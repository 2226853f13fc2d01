//! Finite commutative semigroups given by their Cayley tables.

use std::collections::HashMap;
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::parse::{content_lines, keyed, parse_num, ParseError};
use crate::rewriting::{RewriteError, RuleSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("a semigroup needs at least one element")]
    Empty,
    #[error("row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("entry ({row},{col}) = {value} is out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("not commutative: {a}*{b} != {b}*{a}")]
    NotCommutative { a: usize, b: usize },
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("{names} names for {n} elements")]
    NameCount { names: usize, n: usize },
    #[error("element {element} is out of range for a semigroup of size {size}")]
    InvalidElement { element: usize, size: usize },
    #[error("empty element set")]
    EmptySubset,
    #[error("{size} elements exceed the budget of {budget}")]
    TooLarge { size: u128, budget: usize },
    #[error("not an ideal: {element}*{multiplier} leaves the subset")]
    NotAnIdeal { element: usize, multiplier: usize },
    #[error("not closed under multiplication: {a}*{b} leaves the subset")]
    NotClosed { a: usize, b: usize },
    #[error("not a congruence: {a} ~ {b} but {a}*{c} !~ {b}*{c}")]
    NotACongruence { a: usize, b: usize, c: usize },
    #[error("partition covers {len} elements, semigroup has {n}")]
    PartitionSize { len: usize, n: usize },
    #[error("the semigroup has no identity")]
    NoIdentity,
    #[error("cyclic type needs index and period >= 1, got ({index},{period})")]
    InvalidCyclicType { index: u64, period: u64 },
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// Index m and period n of a cyclic semigroup C_{m,n}: a^{m+n} = a^m minimally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicType {
    pub index: u64,
    pub period: u64,
}

impl CyclicType {
    pub fn new(index: u64, period: u64) -> Result<CyclicType, SemigroupError> {
        if index == 0 || period == 0 {
            return Err(SemigroupError::InvalidCyclicType { index, period });
        }
        Ok(CyclicType { index, period })
    }

    /// |C_{m,n}| = m + n - 1.
    pub fn order(&self) -> u64 {
        self.index + self.period - 1
    }

    /// The exponent in `[1, m+n-1]` naming the same element as `a^k`, `k >= 1`.
    pub fn canonical(&self, k: u128) -> u64 {
        let m = u128::from(self.index);
        if k < m {
            k as u64
        } else {
            (m + (k - m) % u128::from(self.period)) as u64
        }
    }

    /// Exponent of the unique idempotent, in the body window `[m, m+n-1]`.
    pub fn idempotent_exponent(&self) -> u64 {
        let r = self.index % self.period;
        if r == 0 {
            self.index
        } else {
            self.index + self.period - r
        }
    }

    /// The Cayley table of C_{m,n} on elements `a, a^2, ..., a^{m+n-1}`.
    pub fn semigroup(&self, generator: &str) -> CayleySemigroup {
        let n = self.order() as usize;
        let mut table = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                table.push(self.canonical((i + j) as u128) as usize - 1);
            }
        }
        let names = (1..=n)
            .map(|i| if i == 1 { generator.to_string() } else { format!("{generator}^{i}") })
            .collect();
        CayleySemigroup::trusted(n, table, Some(names))
    }
}

impl fmt::Display for CyclicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C({},{})", self.index, self.period)
    }
}

/// Cyclic data of one element: its type, power-idempotent and order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CyclicInfo {
    pub kind: CyclicType,
    pub idempotent: usize,
    pub order: u64,
}

/// Finite commutative semigroup on ids `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleySemigroup {
    n: usize,
    table: Vec<usize>,
    names: Option<Vec<String>>,
}

/// Serialized form `{ size, table, names }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    pub size: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl Serialize for CayleySemigroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TableJson { size: self.n, table: self.rows(), names: self.names.clone() }.serialize(s)
    }
}

impl TryFrom<TableJson> for CayleySemigroup {
    type Error = SemigroupError;

    fn try_from(j: TableJson) -> Result<Self, SemigroupError> {
        if j.table.len() != j.size {
            return Err(SemigroupError::NotSquare { row: j.table.len(), len: 0, n: j.size });
        }
        let s = CayleySemigroup::from_table(j.table)?;
        match j.names {
            Some(names) => s.with_names(names),
            None => Ok(s),
        }
    }
}

/// A quotient semigroup together with the class of every original element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quotient {
    pub semigroup: CayleySemigroup,
    pub class_of: Vec<usize>,
}

/// Blocks of an equivalence on element ids; block ids follow first occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CongruencePartition {
    block: Vec<usize>,
}

impl CongruencePartition {
    /// Normalize arbitrary labels into first-occurrence block ids.
    pub fn from_labels<T: Eq + std::hash::Hash>(labels: &[T]) -> CongruencePartition {
        let mut seen = HashMap::new();
        let block = labels
            .iter()
            .map(|l| {
                let next = seen.len();
                *seen.entry(l).or_insert(next)
            })
            .collect();
        CongruencePartition { block }
    }

    pub fn singletons(n: usize) -> CongruencePartition {
        CongruencePartition { block: (0..n).collect() }
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block[x]
    }

    pub fn len(&self) -> usize {
        self.block.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.block.iter().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (x, &b) in self.block.iter().enumerate() {
            out[b].push(x);
        }
        out
    }
}

/// J-classes ordered by `[a] <= [b]` iff a is a multiple of b.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassPoset {
    pub classes: Vec<Vec<usize>>,
    /// `leq[i][j]`: class i lies below class j.
    pub leq: Vec<Vec<bool>>,
    /// Cover pairs (lower, upper) of class indices.
    pub covers: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", content = "elements", rename_all = "lowercase")]
pub enum RetractSearch {
    Found(Vec<usize>),
    /// Every transversal was examined and none is closed.
    NotFound,
    /// The node budget ran out.
    Unknown,
}

impl CayleySemigroup {
    /// Validate a square table for range, commutativity and associativity.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<CayleySemigroup, SemigroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(SemigroupError::Empty);
        }
        let mut table = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(SemigroupError::NotSquare { row, len: r.len(), n });
            }
            for (col, &value) in r.iter().enumerate() {
                if value >= n {
                    return Err(SemigroupError::OutOfRange { row, col, value });
                }
            }
            table.extend_from_slice(r);
        }
        let s = CayleySemigroup { n, table, names: None };
        s.validate()?;
        Ok(s)
    }

    /// Build from a product function, validating the result.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<CayleySemigroup, SemigroupError> {
        CayleySemigroup::from_table((0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect())
    }

    /// Constructions that are associative by design skip the cubic check.
    pub(crate) fn trusted(n: usize, table: Vec<usize>, names: Option<Vec<String>>) -> CayleySemigroup {
        debug_assert_eq!(table.len(), n * n);
        CayleySemigroup { n, table, names }
    }

    pub fn validate(&self) -> Result<(), SemigroupError> {
        let n = self.n;
        for a in 0..n {
            for b in a + 1..n {
                if self.mul(a, b) != self.mul(b, a) {
                    return Err(SemigroupError::NotCommutative { a, b });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                let row_ab = &self.table[ab * n..(ab + 1) * n];
                let row_b = &self.table[b * n..(b + 1) * n];
                for c in 0..n {
                    if row_ab[c] != self.mul(a, row_b[c]) {
                        return Err(SemigroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<CayleySemigroup, SemigroupError> {
        if names.len() != self.n {
            return Err(SemigroupError::NameCount { names: names.len(), n: self.n });
        }
        self.names = Some(names);
        Ok(self)
    }

    /// Elements are the military-sorted normal forms, multiplied by reducing
    /// the concatenation.
    pub fn from_presentation(completed: &RuleSystem) -> Result<CayleySemigroup, SemigroupError> {
        let nfs = completed.enumerate_normal_forms()?;
        let index: HashMap<&[u32], usize> =
            nfs.iter().enumerate().map(|(i, w)| (w.exponents(), i)).collect();
        let n = nfs.len();
        let mut table = vec![0; n * n];
        for i in 0..n {
            for j in i..n {
                let p = nfs[i].mul(&nfs[j]).map_err(RewriteError::from)?;
                let r = completed.reduce(&p)?;
                let id = *index.get(r.exponents()).ok_or(SemigroupError::NotClosed { a: i, b: j })?;
                table[i * n + j] = id;
                table[j * n + i] = id;
            }
        }
        let names = nfs.iter().map(|w| w.display(completed.names()).to_string()).collect();
        let s = CayleySemigroup { n, table, names: Some(names) };
        s.validate()?;
        Ok(s)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn row(&self, a: usize) -> &[usize] {
        &self.table[a * self.n..(a + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|a| self.row(a).to_vec()).collect()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display name, falling back to the id.
    pub fn name(&self, x: usize) -> String {
        match &self.names {
            Some(names) => names[x].clone(),
            None => x.to_string(),
        }
    }

    /// Product of a non-empty list of elements.
    pub fn product(&self, elems: &[usize]) -> Option<usize> {
        elems.iter().copied().reduce(|a, b| self.mul(a, b))
    }

    fn check_elements(&self, elems: &[usize]) -> Result<(), SemigroupError> {
        match elems.iter().find(|&&x| x >= self.n) {
            Some(&element) => Err(SemigroupError::InvalidElement { element, size: self.n }),
            None => Ok(()),
        }
    }

    /// Direct product with tuple ids, the first factor most significant.
    pub fn direct_product(
        factors: &[&CayleySemigroup],
        max_elements: usize,
    ) -> Result<CayleySemigroup, SemigroupError> {
        let sizes: Vec<usize> = factors.iter().map(|f| f.n).collect();
        if sizes.is_empty() {
            return Err(SemigroupError::Empty);
        }
        let total = sizes.iter().try_fold(1u128, |acc, &s| acc.checked_mul(s as u128));
        let total = match total {
            Some(t) if t <= max_elements as u128 => t as usize,
            Some(t) => return Err(SemigroupError::TooLarge { size: t, budget: max_elements }),
            None => return Err(SemigroupError::TooLarge { size: u128::MAX, budget: max_elements }),
        };
        let coords: Vec<Vec<usize>> = (0..total).map(|id| product_coordinates(&sizes, id)).collect();
        let mut table = vec![0; total * total];
        let mut tuple = vec![0; sizes.len()];
        for x in 0..total {
            for y in x..total {
                for (i, f) in factors.iter().enumerate() {
                    tuple[i] = f.mul(coords[x][i], coords[y][i]);
                }
                let z = product_index(&sizes, &tuple);
                table[x * total + y] = z;
                table[y * total + x] = z;
            }
        }
        let names = coords
            .iter()
            .map(|c| {
                let parts: Vec<String> = c.iter().zip(factors).map(|(&x, f)| f.name(x)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        Ok(CayleySemigroup::trusted(total, table, Some(names)))
    }

    /// Closure of `subset` under multiplication, sorted.
    pub fn subsemigroup_generated(&self, subset: &[usize]) -> Result<Vec<usize>, SemigroupError> {
        if subset.is_empty() {
            return Err(SemigroupError::EmptySubset);
        }
        self.check_elements(subset)?;
        let mut span = Span::new(self.n);
        for &g in subset {
            span.add(self, g);
        }
        let mut out = span.elements;
        out.sort_unstable();
        Ok(out)
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.n).filter(|&e| self.mul(e, e) == e).collect()
    }

    pub fn is_idempotent(&self, e: usize) -> bool {
        self.mul(e, e) == e
    }

    pub fn cyclic_type(&self, x: usize) -> CyclicInfo {
        let mut first_seen = vec![0u64; self.n];
        let mut p = x;
        let mut k = 1u64;
        while first_seen[p] == 0 {
            first_seen[p] = k;
            p = self.mul(p, x);
            k += 1;
        }
        let m = first_seen[p];
        let kind = CyclicType { index: m, period: k - m };
        let mut e = x;
        for _ in 1..kind.idempotent_exponent() {
            e = self.mul(e, x);
        }
        CyclicInfo { kind, idempotent: e, order: kind.order() }
    }

    /// The powers x, x^2, ..., x^{m+n-1}.
    pub fn powers(&self, x: usize) -> Vec<usize> {
        let order = self.cyclic_type(x).order as usize;
        let mut out = Vec::with_capacity(order);
        let mut p = x;
        for _ in 0..order {
            out.push(p);
            p = self.mul(p, x);
        }
        out
    }

    pub fn zero(&self) -> Option<usize> {
        (0..self.n).find(|&z| self.row(z).iter().all(|&v| v == z))
    }

    pub fn identity(&self) -> Option<usize> {
        (0..self.n).find(|&u| self.row(u).iter().enumerate().all(|(x, &v)| v == x))
    }

    /// K(S) = e'S for e' the product of all idempotents.
    pub fn kernel(&self) -> Vec<usize> {
        let e = self.product(&self.idempotents()).expect("finite semigroups have idempotents");
        let mut k: Vec<usize> = self.row(e).to_vec();
        k.sort_unstable();
        k.dedup();
        debug_assert!(self.is_ideal(&k));
        k
    }

    /// The first (element, multiplier) pair leaving the subset.
    pub fn ideal_witness(&self, subset: &[usize]) -> Option<(usize, usize)> {
        let mut member = vec![false; self.n];
        for &x in subset {
            member[x] = true;
        }
        subset
            .iter()
            .find_map(|&x| (0..self.n).find(|&s| !member[self.mul(x, s)]).map(|s| (x, s)))
    }

    pub fn is_ideal(&self, subset: &[usize]) -> bool {
        !subset.is_empty() && subset.iter().all(|&x| x < self.n) && self.ideal_witness(subset).is_none()
    }

    /// S/I on `{0} ∪ (S \ I)`; the collapsed ideal gets id 0.
    pub fn rees_quotient(&self, ideal: &[usize]) -> Result<Quotient, SemigroupError> {
        if ideal.is_empty() {
            return Err(SemigroupError::EmptySubset);
        }
        self.check_elements(ideal)?;
        if let Some((element, multiplier)) = self.ideal_witness(ideal) {
            return Err(SemigroupError::NotAnIdeal { element, multiplier });
        }
        let mut labels: Vec<usize> = (0..self.n).map(|x| x + 1).collect();
        for &x in ideal {
            labels[x] = 0;
        }
        let zero = ideal[0];
        // Put the ideal's class first so it receives id 0.
        let mut order: Vec<usize> = vec![zero];
        order.extend((0..self.n).filter(|x| labels[*x] != 0));
        let mut class = vec![0; self.n];
        for (i, &x) in order.iter().enumerate() {
            if labels[x] != 0 {
                class[x] = i;
            }
        }
        let m = order.len();
        let mut table = vec![0; m * m];
        for i in 0..m {
            for j in 0..m {
                table[i * m + j] = class[self.mul(order[i], order[j])];
            }
        }
        let names = self.names.as_ref().map(|names| {
            let mut out = vec![zero_name(names)];
            out.extend(order[1..].iter().map(|&x| names[x].clone()));
            out
        });
        Ok(Quotient { semigroup: CayleySemigroup::trusted(m, table, names), class_of: class })
    }

    pub fn is_nil(&self) -> bool {
        match self.zero() {
            Some(z) => self.idempotents() == [z],
            None => false,
        }
    }

    pub fn is_group(&self) -> bool {
        self.idempotents().len() == 1 && self.identity().is_some()
    }

    pub fn is_semilattice(&self) -> bool {
        (0..self.n).all(|e| self.is_idempotent(e))
    }

    pub fn is_archimedean(&self) -> bool {
        self.idempotents().len() == 1
    }

    pub fn is_cancellative(&self) -> bool {
        (0..self.n).all(|a| {
            let mut seen = vec![false; self.n];
            self.row(a).iter().all(|&v| !std::mem::replace(&mut seen[v], true))
        })
    }

    pub fn units(&self) -> Result<Vec<usize>, SemigroupError> {
        let one = self.identity().ok_or(SemigroupError::NoIdentity)?;
        Ok((0..self.n).filter(|&a| self.row(a).contains(&one)).collect())
    }

    /// a <=_J b: a = b or a is a multiple of b.
    pub fn j_leq(&self, a: usize, b: usize) -> bool {
        a == b || self.row(b).contains(&a)
    }

    /// `m[b * n + a]`: a lies in bS.
    fn multiple_matrix(&self) -> Vec<bool> {
        let mut m = vec![false; self.n * self.n];
        for b in 0..self.n {
            for &a in self.row(b) {
                m[b * self.n + a] = true;
            }
        }
        m
    }

    pub fn j_classes(&self) -> CongruencePartition {
        let m = self.multiple_matrix();
        let mut uf = UnionFind::<usize>::new(self.n);
        for a in 0..self.n {
            for &b in self.row(a) {
                // b is a multiple of a; merge when a is also a multiple of b
                if m[b * self.n + a] {
                    uf.union(a, b);
                }
            }
        }
        CongruencePartition::from_labels(&uf.into_labeling())
    }

    pub fn j_poset(&self) -> ClassPoset {
        let m = self.multiple_matrix();
        let classes = self.j_classes().blocks();
        let c = classes.len();
        let mut leq = vec![vec![false; c]; c];
        for (i, ci) in classes.iter().enumerate() {
            for (j, cj) in classes.iter().enumerate() {
                leq[i][j] = i == j || m[cj[0] * self.n + ci[0]];
            }
        }
        for i in 0..c {
            for j in 0..c {
                assert!(i == j || !(leq[i][j] && leq[j][i]), "J-quotient order is antisymmetric");
            }
        }
        let covers = cover_pairs(&leq);
        ClassPoset { classes, leq, covers }
    }

    /// The first (a, b, c) with a ~ b but ac !~ bc.
    pub fn congruence_witness(&self, theta: &CongruencePartition) -> Option<(usize, usize, usize)> {
        let blocks = theta.blocks();
        for block in &blocks {
            let a = block[0];
            for &b in &block[1..] {
                for c in 0..self.n {
                    if theta.block_of(self.mul(a, c)) != theta.block_of(self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn quotient(&self, theta: &CongruencePartition) -> Result<Quotient, SemigroupError> {
        if theta.len() != self.n {
            return Err(SemigroupError::PartitionSize { len: theta.len(), n: self.n });
        }
        if let Some((a, b, c)) = self.congruence_witness(theta) {
            return Err(SemigroupError::NotACongruence { a, b, c });
        }
        let blocks = theta.blocks();
        let m = blocks.len();
        let mut table = vec![0; m * m];
        for i in 0..m {
            for j in 0..m {
                table[i * m + j] = theta.block_of(self.mul(blocks[i][0], blocks[j][0]));
            }
        }
        let names = blocks
            .iter()
            .map(|b| if b.len() == 1 { self.name(b[0]) } else { format!("[{}]", self.name(b[0])) })
            .collect();
        Ok(Quotient {
            semigroup: CayleySemigroup::trusted(m, table, Some(names)),
            class_of: (0..self.n).map(|x| theta.block_of(x)).collect(),
        })
    }

    /// Least congruence containing the given pairs.
    pub fn smallest_congruence(&self, pairs: &[(usize, usize)]) -> Result<CongruencePartition, SemigroupError> {
        for &(a, b) in pairs {
            self.check_elements(&[a, b])?;
        }
        let mut uf = UnionFind::<usize>::new(self.n);
        let mut work: Vec<(usize, usize)> = pairs.to_vec();
        while let Some((a, b)) = work.pop() {
            if uf.union(a, b) {
                // The new identification must be closed under multiplication.
                for c in 0..self.n {
                    work.push((self.mul(a, c), self.mul(b, c)));
                }
            }
        }
        Ok(CongruencePartition::from_labels(&uf.into_labeling()))
    }

    /// Search for a transversal of the J-classes closed under multiplication,
    /// trying representatives in increasing id order with closure pruning.
    pub fn j_retract_search(&self, budget: u64) -> RetractSearch {
        let part = self.j_classes();
        let classes = part.blocks();
        let mut chosen: Vec<Option<usize>> = vec![None; classes.len()];
        let mut nodes = 0u64;
        match self.retract_dfs(&part, &classes, 0, &mut chosen, &mut nodes, budget) {
            Some(true) => {
                let mut reps: Vec<usize> = chosen.into_iter().map(|c| c.expect("complete")).collect();
                reps.sort_unstable();
                RetractSearch::Found(reps)
            }
            Some(false) => RetractSearch::NotFound,
            None => RetractSearch::Unknown,
        }
    }

    fn retract_dfs(
        &self,
        part: &CongruencePartition,
        classes: &[Vec<usize>],
        depth: usize,
        chosen: &mut Vec<Option<usize>>,
        nodes: &mut u64,
        budget: u64,
    ) -> Option<bool> {
        if depth == classes.len() {
            return Some(true);
        }
        for &cand in &classes[depth] {
            *nodes += 1;
            if *nodes > budget {
                return None;
            }
            chosen[depth] = Some(cand);
            // Any chosen pair whose product falls in a decided class must hit its rep.
            let picked: Vec<usize> = chosen[..=depth].iter().flatten().copied().collect();
            let consistent = picked.iter().enumerate().all(|(i, &x)| {
                picked[i..].iter().all(|&y| {
                    let p = self.mul(x, y);
                    chosen[part.block_of(p)].is_none_or(|rep| rep == p)
                })
            });
            if consistent {
                match self.retract_dfs(part, classes, depth + 1, chosen, nodes, budget) {
                    Some(true) => return Some(true),
                    Some(false) => {}
                    None => return None,
                }
            }
            chosen[depth] = None;
        }
        Some(false)
    }

    /// Restrict to a multiplicatively closed subset; returns the
    /// subsemigroup and the original id of each new element.
    pub fn restrict(&self, subset: &[usize]) -> Result<(CayleySemigroup, Vec<usize>), SemigroupError> {
        if subset.is_empty() {
            return Err(SemigroupError::EmptySubset);
        }
        self.check_elements(subset)?;
        let mut elems = subset.to_vec();
        elems.sort_unstable();
        elems.dedup();
        let mut pos = vec![usize::MAX; self.n];
        for (i, &x) in elems.iter().enumerate() {
            pos[x] = i;
        }
        let m = elems.len();
        let mut table = vec![0; m * m];
        for i in 0..m {
            for j in 0..m {
                let p = pos[self.mul(elems[i], elems[j])];
                if p == usize::MAX {
                    return Err(SemigroupError::NotClosed { a: elems[i], b: elems[j] });
                }
                table[i * m + j] = p;
            }
        }
        let names = self.names.as_ref().map(|n| elems.iter().map(|&x| n[x].clone()).collect());
        Ok((CayleySemigroup::trusted(m, table, names), elems))
    }

    /// Text table format: `n`, then n rows, then optionally one `name:` line
    /// per element in id order.
    pub fn parse_table(text: &str) -> Result<CayleySemigroup, ParseError> {
        let mut lines = content_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| ParseError::new("empty table file"))?;
        let n: usize = parse_num(header, "element count").map_err(|e| e.with_line(ln))?;
        let mut rows = Vec::with_capacity(n);
        let mut names: Option<(usize, Vec<String>)> = None;
        for (ln, line) in lines {
            if let Some(rest) = keyed(line, "name") {
                names.get_or_insert((ln, Vec::new())).1.push(rest.to_string());
                continue;
            }
            if names.is_some() {
                return Err(ParseError::at(ln, "rows after the `name:` lines"));
            }
            let row = line
                .split_whitespace()
                .map(|t| parse_num::<usize>(t, "element id"))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.with_line(ln))?;
            rows.push((ln, row));
        }
        if rows.len() != n {
            return Err(ParseError::new(format!("expected {n} rows, found {}", rows.len())));
        }
        let lines_of: Vec<usize> = rows.iter().map(|(l, _)| *l).collect();
        let s = CayleySemigroup::from_table(rows.into_iter().map(|(_, r)| r).collect()).map_err(|e| {
            let line = match e {
                SemigroupError::NotSquare { row, .. } | SemigroupError::OutOfRange { row, .. } => {
                    Some(lines_of[row])
                }
                _ => None,
            };
            ParseError { line, message: e.to_string() }
        })?;
        match names {
            Some((ln, list)) => s.with_names(list).map_err(|e| ParseError::at(ln, e.to_string())),
            None => Ok(s),
        }
    }

    pub fn to_table_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for a in 0..self.n {
            let row: Vec<String> = self.row(a).iter().map(usize::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        for name in self.names.iter().flatten() {
            out.push_str(&format!("name: {name}\n"));
        }
        out
    }

    /// Generators chosen greedily: elements outside S·S first (they are
    /// unavoidable), then by decreasing cyclic order.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut is_product = vec![false; self.n];
        for &v in &self.table {
            is_product[v] = true;
        }
        let orders: Vec<u64> = (0..self.n).map(|x| self.cyclic_type(x).order).collect();
        let mut cand: Vec<usize> = (0..self.n).collect();
        cand.sort_by_key(|&x| (is_product[x], std::cmp::Reverse(orders[x]), x));
        let mut span = Span::new(self.n);
        let mut gens = Vec::new();
        for x in cand {
            if !span.member[x] {
                gens.push(x);
                span.add(self, x);
            }
        }
        gens
    }
}

fn zero_name(names: &[String]) -> String {
    let mut z = "0".to_string();
    while names.contains(&z) {
        z.push('*');
    }
    z
}

/// Mixed-radix coordinates of a tuple id, first factor most significant.
pub fn product_coordinates(sizes: &[usize], mut id: usize) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for (slot, &s) in out.iter_mut().zip(sizes).rev() {
        *slot = id % s;
        id /= s;
    }
    out
}

pub fn product_index(sizes: &[usize], coords: &[usize]) -> usize {
    coords.iter().zip(sizes).fold(0, |acc, (&c, &s)| acc * s + c)
}

/// Cover pairs (lower, upper) of a reflexive partial order matrix.
pub(crate) fn cover_pairs(leq: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let c = leq.len();
    let mut covers = Vec::new();
    for lo in 0..c {
        for hi in 0..c {
            if lo != hi
                && leq[lo][hi]
                && !(0..c).any(|m| m != lo && m != hi && leq[lo][m] && leq[m][hi])
            {
                covers.push((lo, hi));
            }
        }
    }
    covers
}

/// Incrementally maintained subsemigroup.
struct Span {
    member: Vec<bool>,
    elements: Vec<usize>,
}

impl Span {
    fn new(n: usize) -> Span {
        Span { member: vec![false; n], elements: Vec::new() }
    }

    fn add(&mut self, s: &CayleySemigroup, x: usize) {
        let mut queue = vec![x];
        while let Some(y) = queue.pop() {
            if self.member[y] {
                continue;
            }
            self.member[y] = true;
            self.elements.push(y);
            for &z in &self.elements {
                let p = s.mul(y, z);
                if !self.member[p] {
                    queue.push(p);
                }
            }
        }
    }
}

/// An isomorphism `a -> b` as an id map, found by backtracking over images
/// of a generating set with invariant pruning; `None` if there is none.
pub fn isomorphism(a: &CayleySemigroup, b: &CayleySemigroup) -> Option<Vec<usize>> {
    let n = a.size();
    if n != b.size() {
        return None;
    }
    let inv = |s: &CayleySemigroup, x: usize| {
        let c = s.cyclic_type(x);
        let mut row = s.row(x).to_vec();
        row.sort_unstable();
        row.dedup();
        (c.kind, row.len(), s.is_idempotent(x))
    };
    let ia: Vec<_> = (0..n).map(|x| inv(a, x)).collect();
    let ib: Vec<_> = (0..n).map(|x| inv(b, x)).collect();
    let (mut sa, mut sb) = (ia.clone(), ib.clone());
    sa.sort();
    sb.sort();
    if sa != sb {
        return None;
    }
    let gens = a.generating_set();
    let mut state = IsoState { map: vec![None; n], used: vec![false; n], assigned: Vec::new() };
    if iso_dfs(a, b, &gens, &ia, &ib, &mut state) {
        let map: Vec<usize> = state.map.into_iter().map(|m| m.expect("total")).collect();
        debug_assert!((0..n).all(|x| (0..n).all(|y| map[a.mul(x, y)] == b.mul(map[x], map[y]))));
        Some(map)
    } else {
        None
    }
}

#[derive(Clone)]
struct IsoState {
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    assigned: Vec<usize>,
}

impl IsoState {
    /// Assign g -> h and close under products; false on any conflict.
    fn extend(&mut self, a: &CayleySemigroup, b: &CayleySemigroup, g: usize, h: usize) -> bool {
        let mut queue = vec![(g, h)];
        while let Some((x, y)) = queue.pop() {
            match self.map[x] {
                Some(prev) if prev == y => continue,
                Some(_) => return false,
                None => {}
            }
            if self.used[y] {
                return false;
            }
            self.map[x] = Some(y);
            self.used[y] = true;
            self.assigned.push(x);
            for &z in &self.assigned {
                let fz = self.map[z].expect("assigned");
                queue.push((a.mul(x, z), b.mul(y, fz)));
            }
        }
        true
    }
}

fn iso_dfs<I: PartialEq>(
    a: &CayleySemigroup,
    b: &CayleySemigroup,
    gens: &[usize],
    ia: &[I],
    ib: &[I],
    state: &mut IsoState,
) -> bool {
    let Some((&g, rest)) = gens.split_first() else {
        return state.assigned.len() == a.size();
    };
    if state.map[g].is_some() {
        return iso_dfs(a, b, rest, ia, ib, state);
    }
    for h in 0..b.size() {
        if state.used[h] || ia[g] != ib[h] {
            continue;
        }
        let mut next = state.clone();
        if next.extend(a, b, g, h) && iso_dfs(a, b, rest, ia, ib, &mut next) {
            *state = next;
            return true;
        }
    }
    false
}
