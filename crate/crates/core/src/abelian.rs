//! Finite Abelian groups: invariant factors, typing from element orders,
//! Smith normal form and groups given by integer relation matrices.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::parse::{content_lines, parse_num, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianError {
    #[error("not an Abelian group order profile: {0}")]
    NotAProfile(String),
    #[error("invariant factors must be >= 2 and each divide the next: {0:?}")]
    BadFactors(Vec<u64>),
    #[error("integer overflow")]
    Overflow,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("matrix shape {rows}x{cols} does not match {len} entries")]
    Shape { rows: usize, cols: usize, len: usize },
}

/// C_{n_1} x ... x C_{n_t} with n_1 | n_2 | ... | n_t, all n_i >= 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct AbelianType {
    factors: Vec<u64>,
}

impl AbelianType {
    pub fn trivial() -> AbelianType {
        AbelianType { factors: Vec::new() }
    }

    pub fn from_invariant_factors(factors: Vec<u64>) -> Result<AbelianType, AbelianError> {
        let ok = factors.iter().all(|&f| f >= 2) && factors.windows(2).all(|w| w[1] % w[0] == 0);
        if ok {
            Ok(AbelianType { factors })
        } else {
            Err(AbelianError::BadFactors(factors))
        }
    }

    /// Normalize any product of cyclic groups (orders 1 are ignored).
    pub fn from_cyclic_orders(orders: &[u64]) -> AbelianType {
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &c in orders.iter().filter(|&&c| c > 1) {
            for (p, e) in factorize(c) {
                by_prime.entry(p).or_default().push(e);
            }
        }
        AbelianType::from_prime_powers(&by_prime).expect("divisor products fit in u64")
    }

    /// Assemble invariant factors from exponent lists per prime.
    pub fn from_prime_powers(by_prime: &BTreeMap<u64, Vec<u32>>) -> Result<AbelianType, AbelianError> {
        let t = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; t];
        for (&p, exps) in by_prime {
            let mut exps = exps.clone();
            exps.retain(|&e| e > 0);
            exps.sort_unstable_by(|a, b| b.cmp(a));
            // largest power of each prime goes to the largest factor
            for (i, &e) in exps.iter().enumerate() {
                let pe = p.checked_pow(e).ok_or(AbelianError::Overflow)?;
                let slot = &mut factors[t - 1 - i];
                *slot = slot.checked_mul(pe).ok_or(AbelianError::Overflow)?;
            }
        }
        factors.retain(|&f| f > 1);
        Ok(AbelianType { factors })
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, &f| acc.checked_mul(f))
    }

    /// Prime-power cyclic factors (p, e), sorted by prime then decreasing e.
    pub fn prime_power_factors(&self) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = self.factors.iter().flat_map(|&f| factorize(f)).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        out
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }
}

impl fmt::Display for AbelianType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("trivial");
        }
        let parts: Vec<String> = self.factors.iter().map(|n| format!("C{n}")).collect();
        f.write_str(&parts.join(" x "))
    }
}

/// Trial-division factorization, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// Multiset of element orders: order -> number of elements.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OrderProfile {
    counts: BTreeMap<u64, u64>,
}

impl OrderProfile {
    pub fn from_orders(orders: impl IntoIterator<Item = u64>) -> OrderProfile {
        let mut counts = BTreeMap::new();
        for o in orders {
            *counts.entry(o).or_insert(0) += 1;
        }
        OrderProfile { counts }
    }

    pub fn from_counts(counts: BTreeMap<u64, u64>) -> OrderProfile {
        OrderProfile { counts: counts.into_iter().filter(|&(_, c)| c > 0).collect() }
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn group_order(&self) -> u64 {
        self.counts.values().sum()
    }

    /// #{x : o(x) divides d}.
    fn dividing(&self, d: u64) -> u64 {
        self.counts.iter().filter(|(&o, _)| d.is_multiple_of(o)).map(|(_, &c)| c).sum()
    }
}

/// Exact base-p logarithm when `x` is a power of p.
fn log_exact(x: u64, p: u64) -> Option<u32> {
    let mut e = 0;
    let mut v = 1u64;
    while v < x {
        v = v.checked_mul(p)?;
        e += 1;
    }
    (v == x).then_some(e)
}

/// Per prime p with p^a || |G|: t_0 = 0, t_1, ... until t_k = a.
fn t_sequences(profile: &OrderProfile) -> Result<BTreeMap<u64, Vec<u32>>, AbelianError> {
    let bad = |m: String| AbelianError::NotAProfile(m);
    let n = profile.group_order();
    if n == 0 {
        return Err(bad("no elements".into()));
    }
    if profile.counts.get(&1) != Some(&1) {
        return Err(bad("exactly one element must have order 1".into()));
    }
    if let Some((&o, _)) = profile.counts.iter().find(|(&o, _)| o == 0 || !n.is_multiple_of(o)) {
        return Err(bad(format!("order {o} does not divide the group order {n}")));
    }
    let mut out = BTreeMap::new();
    for (p, a) in factorize(n) {
        let mut t = vec![0u32];
        let mut pk = 1u64;
        while *t.last().expect("non-empty") < a {
            pk = pk.checked_mul(p).ok_or(AbelianError::Overflow)?;
            let c = profile.dividing(pk);
            let tk = log_exact(c, p)
                .ok_or_else(|| bad(format!("{c} elements of order dividing {pk}, not a power of {p}")))?;
            if tk <= *t.last().expect("non-empty") {
                return Err(bad(format!("no new elements of order dividing {pk}")));
            }
            t.push(tk);
        }
        out.insert(p, t);
    }
    Ok(out)
}

/// Check every count against the counts implied by the t-sequences: an
/// element of order prod p^{k_p} arises in prod (p^{t_k} - p^{t_{k-1}}) ways.
fn check_profile(profile: &OrderProfile, ts: &BTreeMap<u64, Vec<u32>>) -> Result<(), AbelianError> {
    let mut expected: BTreeMap<u64, u64> = BTreeMap::from([(1, 1)]);
    for (&p, t) in ts {
        let mut next = BTreeMap::new();
        for (&d, &c) in &expected {
            for k in 0..t.len() {
                let ways = if k == 0 { 1 } else { p.pow(t[k]) - p.pow(t[k - 1]) };
                let order = d * p.pow(k as u32);
                *next.entry(order).or_insert(0) += c * ways;
            }
        }
        expected = next;
    }
    if expected == profile.counts {
        Ok(())
    } else {
        Err(AbelianError::NotAProfile("element counts do not match any Abelian group".into()))
    }
}

/// Identify the group from its order statistics with s_k = 2t_k - t_{k+1} - t_{k-1}.
pub fn order_statistics_type(profile: &OrderProfile) -> Result<AbelianType, AbelianError> {
    let ts = t_sequences(profile)?;
    check_profile(profile, &ts)?;
    let mut by_prime = BTreeMap::new();
    for (&p, t) in &ts {
        let top = t.len() - 1;
        let at = |k: usize| i64::from(t[k.min(top)]);
        let mut exps = Vec::new();
        for k in 1..=top {
            let s = 2 * at(k) - at(k + 1) - at(k - 1);
            if s < 0 {
                return Err(AbelianError::NotAProfile(format!("negative factor count at {p}^{k}")));
            }
            exps.extend(std::iter::repeat_n(k as u32, s as usize));
        }
        by_prime.insert(p, exps);
    }
    AbelianType::from_prime_powers(&by_prime)
}

/// The same identification, level by level: at level k the count
/// p^{t_k} = p^{closed} * (p^k)^i * (p^{k-1})^{open-i} fixes how many of the
/// still-open factors have exponent >= k.
pub fn order_statistics_type_incremental(profile: &OrderProfile) -> Result<AbelianType, AbelianError> {
    let ts = t_sequences(profile)?;
    check_profile(profile, &ts)?;
    let mut by_prime = BTreeMap::new();
    for (&p, t) in &ts {
        let mut closed: Vec<u32> = Vec::new();
        let mut open = i64::from(t[1]);
        for k in 2..t.len() {
            let closed_sum: i64 = closed.iter().map(|&e| i64::from(e)).sum();
            let i = i64::from(t[k]) - closed_sum - (k as i64 - 1) * open;
            if i < 0 || i > open {
                return Err(AbelianError::NotAProfile(format!("inconsistent level {k} at prime {p}")));
            }
            closed.extend(std::iter::repeat_n(k as u32 - 1, (open - i) as usize));
            open = i;
        }
        closed.extend(std::iter::repeat_n(t.len() as u32 - 1, open as usize));
        by_prime.insert(p, closed);
    }
    AbelianType::from_prime_powers(&by_prime)
}

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<IntMatrix, AbelianError> {
        if data.len() != rows * cols {
            return Err(AbelianError::Shape { rows, cols, len: data.len() });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<IntMatrix, AbelianError> {
        let cols = rows.first().map_or(0, Vec::len);
        let data: Vec<i64> = rows.iter().flatten().copied().collect();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(AbelianError::Shape { rows: rows.len(), cols, len: data.len() });
        }
        IntMatrix::new(rows.len(), cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    fn at(&mut self, i: usize, j: usize) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[i64]>::to_vec).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, AbelianError> {
        if self.cols != other.rows {
            return Err(AbelianError::Shape { rows: self.cols, cols: other.rows, len: 0 });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i64 = 0;
                for k in 0..self.cols {
                    let t = self.get(i, k).checked_mul(other.get(k, j)).ok_or(AbelianError::Overflow)?;
                    acc = acc.checked_add(t).ok_or(AbelianError::Overflow)?;
                }
                *out.at(i, j) = acc;
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<i64, AbelianError> {
        if self.rows != self.cols {
            return Err(AbelianError::Shape { rows: self.rows, cols: self.cols, len: self.data.len() });
        }
        let n = self.rows;
        let mut a: Vec<i128> = self.data.iter().map(|&x| i128::from(x)).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k * n + k] == 0 {
                let Some(r) = (k + 1..n).find(|&r| a[r * n + k] != 0) else { return Ok(0) };
                for j in 0..n {
                    a.swap(k * n + j, r * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i * n + j]
                        .checked_mul(a[k * n + k])
                        .and_then(|x| x.checked_sub(a[i * n + k].checked_mul(a[k * n + j])?))
                        .ok_or(AbelianError::Overflow)?;
                    a[i * n + j] = v / prev;
                }
            }
            prev = a[k * n + k];
        }
        let det = if n == 0 { 1 } else { sign * a[n * n - 1] };
        i64::try_from(det).map_err(|_| AbelianError::Overflow)
    }

    /// `m n` header, then m rows of n integers.
    pub fn parse(text: &str) -> Result<IntMatrix, ParseError> {
        let mut lines = content_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| ParseError::new("empty matrix file"))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        if dims.len() != 2 {
            return Err(ParseError::at(ln, "header must be `rows cols`"));
        }
        let rows: usize = parse_num(dims[0], "row count").map_err(|e| e.with_line(ln))?;
        let cols: usize = parse_num(dims[1], "column count").map_err(|e| e.with_line(ln))?;
        let mut data = Vec::with_capacity(rows * cols);
        let mut seen = 0;
        for (ln, line) in lines {
            let row = line
                .split_whitespace()
                .map(|t| parse_num::<i64>(t, "integer"))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.with_line(ln))?;
            if row.len() != cols {
                return Err(ParseError::at(ln, format!("expected {cols} entries, found {}", row.len())));
            }
            data.extend(row);
            seen += 1;
        }
        if seen != rows {
            return Err(ParseError::new(format!("expected {rows} rows, found {seen}")));
        }
        Ok(IntMatrix { rows, cols, data })
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.data.iter().map(|x| x.to_string().len()).max().unwrap_or(1);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:>width$}", self.get(i, j))).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// D = C·A·B with D diagonal (d_i | d_{i+1}, d_i >= 0), C and B unimodular.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Snf {
    pub d: IntMatrix,
    pub c: IntMatrix,
    pub b: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i)).collect()
    }
}

struct SnfWork {
    a: IntMatrix,
    c: IntMatrix,
    b: IntMatrix,
}

impl SnfWork {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for m in [&mut self.a, &mut self.c] {
                for k in 0..m.cols {
                    m.data.swap(i * m.cols + k, j * m.cols + k);
                }
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for m in [&mut self.a, &mut self.b] {
                for k in 0..m.rows {
                    m.data.swap(k * m.cols + i, k * m.cols + j);
                }
            }
        }
    }

    /// row_i += q * row_j
    fn add_row(&mut self, i: usize, j: usize, q: i64) -> Result<(), AbelianError> {
        for m in [&mut self.a, &mut self.c] {
            for k in 0..m.cols {
                let v = m.get(j, k).checked_mul(q).and_then(|t| t.checked_add(m.get(i, k)));
                *m.at(i, k) = v.ok_or(AbelianError::Overflow)?;
            }
        }
        Ok(())
    }

    /// col_i += q * col_j
    fn add_col(&mut self, i: usize, j: usize, q: i64) -> Result<(), AbelianError> {
        for m in [&mut self.a, &mut self.b] {
            for k in 0..m.rows {
                let v = m.get(k, j).checked_mul(q).and_then(|t| t.checked_add(m.get(k, i)));
                *m.at(k, i) = v.ok_or(AbelianError::Overflow)?;
            }
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) -> Result<(), AbelianError> {
        for m in [&mut self.a, &mut self.c] {
            for k in 0..m.cols {
                *m.at(i, k) = m.get(i, k).checked_neg().ok_or(AbelianError::Overflow)?;
            }
        }
        Ok(())
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Result<Snf, AbelianError> {
    let (m, n) = (a.rows, a.cols);
    let mut w = SnfWork { a: a.clone(), c: IntMatrix::identity(m), b: IntMatrix::identity(n) };
    for t in 0..m.min(n) {
        loop {
            // smallest non-zero |entry| of the remaining block becomes the pivot
            let pivot = (t..m)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| w.a.get(i, j) != 0)
                .min_by_key(|&(i, j)| (w.a.get(i, j).unsigned_abs(), i, j));
            let Some((pi, pj)) = pivot else {
                return finish(w);
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let p = w.a.get(t, t);
            let mut dirty = false;
            for i in t + 1..m {
                let q = w.a.get(i, t) / p;
                if q != 0 {
                    w.add_row(i, t, -q)?;
                }
                dirty |= w.a.get(i, t) != 0;
            }
            for j in t + 1..n {
                let q = w.a.get(t, j) / p;
                if q != 0 {
                    w.add_col(j, t, -q)?;
                }
                dirty |= w.a.get(t, j) != 0;
            }
            if dirty {
                continue;
            }
            // the pivot must divide the rest of the block
            let offender =
                (t + 1..m).find(|&i| (t + 1..n).any(|j| w.a.get(i, j) % p != 0));
            match offender {
                Some(i) => w.add_row(t, i, 1)?,
                None => break,
            }
        }
        if w.a.get(t, t) < 0 {
            w.negate_row(t)?;
        }
    }
    finish(w)
}

fn finish(w: SnfWork) -> Result<Snf, AbelianError> {
    Ok(Snf { d: w.a, c: w.c, b: w.b })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RfagType {
    Finite { group: AbelianType },
    /// Z^rank x torsion.
    Infinite { free_rank: usize, torsion: AbelianType },
}

/// The Abelian group with one generator per column and one relation per row.
pub fn rfag_type(relations: &IntMatrix) -> Result<RfagType, AbelianError> {
    let snf = smith_normal_form(relations)?;
    let diag = snf.diagonal();
    let nonzero: Vec<u64> = diag.iter().filter(|&&d| d != 0).map(|&d| d as u64).collect();
    let free_rank = relations.cols - nonzero.len();
    let torsion = AbelianType::from_invariant_factors(nonzero.into_iter().filter(|&d| d > 1).collect())?;
    Ok(if free_rank == 0 {
        RfagType::Finite { group: torsion }
    } else {
        RfagType::Infinite { free_rank, torsion }
    })
}

/// Prime-power factors laid out by prime (columns) and by rank (rows); row
/// products are the invariant factors, largest first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorTable {
    pub t_min: usize,
    pub t_max: usize,
    pub primes: Vec<u64>,
    /// `rows[r][c]`: the r-th largest power of `primes[c]`, if any.
    pub rows: Vec<Vec<Option<u64>>>,
    pub row_products: Vec<u64>,
}

pub fn tmin_tmax(t: &AbelianType) -> FactorTable {
    let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for (p, e) in t.prime_power_factors() {
        by_prime.entry(p).or_default().push(p.pow(e));
    }
    let t_max = by_prime.values().map(Vec::len).sum();
    let t_min = t.factors.len();
    let primes: Vec<u64> = by_prime.keys().copied().collect();
    let rows: Vec<Vec<Option<u64>>> = (0..t_min)
        .map(|r| by_prime.values().map(|col| col.get(r).copied()).collect())
        .collect();
    let row_products = t.factors.iter().rev().copied().collect();
    FactorTable { t_min, t_max, primes, rows, row_products }
}

/// Number of Abelian groups of order p^n: the partition number of n.
pub fn count_abelian_groups_of_order(p: u64, n: u32) -> Result<u128, AbelianError> {
    if !is_prime(p) {
        return Err(AbelianError::NotPrime(p));
    }
    partition_count(n)
}

pub fn partition_count(n: u32) -> Result<u128, AbelianError> {
    let n = n as usize;
    let mut ways = vec![0u128; n + 1];
    ways[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            ways[total] = ways[total].checked_add(ways[total - part]).ok_or(AbelianError::Overflow)?;
        }
    }
    Ok(ways[n])
}
