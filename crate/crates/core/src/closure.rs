//! Implications, closure systems as disjoint 012-rows, and relatively free
//! semilattices on the non-empty closed sets.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::parse::{content_lines, is_identifier, keyed, ParseError};
use crate::semigroup::{CayleySemigroup, SemigroupError};

/// Ground sets are bitmasks, so at most this many elements.
pub const MAX_GROUND: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("ground set of {0} elements exceeds {MAX_GROUND}")]
    GroundTooLarge(usize),
    #[error("implication premises must be non-empty")]
    EmptyPremise,
    #[error("more than {0} rows or closed sets")]
    Budget(u64),
    #[error("not a semilattice")]
    NotSemilattice,
    #[error("element {0} out of range")]
    OutOfRange(usize),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

/// premise -> conclusion, as bitmasks over the ground set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Implication {
    pub premise: u64,
    pub conclusion: u64,
}

impl Implication {
    pub fn new(premise: u64, conclusion: u64) -> Result<Implication, ClosureError> {
        if premise == 0 {
            return Err(ClosureError::EmptyPremise);
        }
        Ok(Implication { premise, conclusion })
    }

    pub fn holds_in(&self, u: u64) -> bool {
        self.premise & !u != 0 || self.conclusion & !u == 0
    }
}

/// Least Σ-closed superset of `u`.
pub fn sigma_closure(u: u64, sigma: &[Implication]) -> u64 {
    let mut u = u;
    loop {
        let next = sigma.iter().filter(|i| i.premise & !u == 0).fold(u, |acc, i| acc | i.conclusion);
        if next == u {
            return u;
        }
        u = next;
    }
}

pub fn is_closed(u: u64, sigma: &[Implication]) -> bool {
    sigma.iter().all(|i| i.holds_in(u))
}

/// One symbol per ground element: 0, 1 or 2 (don't care).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "String")]
pub struct Row012 {
    symbols: Vec<u8>,
}

impl Row012 {
    pub fn parse(text: &str) -> Option<Row012> {
        let symbols: Option<Vec<u8>> = text
            .chars()
            .map(|c| match c {
                '0' => Some(0),
                '1' => Some(1),
                '2' => Some(2),
                _ => None,
            })
            .collect();
        symbols.map(|symbols| Row012 { symbols })
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn count(&self) -> u128 {
        1u128 << self.symbols.iter().filter(|&&s| s == 2).count()
    }

    pub fn contains(&self, u: u64) -> bool {
        self.symbols.iter().enumerate().all(|(i, &s)| s == 2 || u64::from(s) == (u >> i) & 1)
    }

    /// All member sets, ascending as integers.
    pub fn expand(&self) -> Vec<u64> {
        let ones: u64 = self.mask(1);
        let free: Vec<usize> = (0..self.symbols.len()).filter(|&i| self.symbols[i] == 2).collect();
        (0u64..1 << free.len())
            .map(|bits| {
                free.iter().enumerate().fold(ones, |acc, (b, &i)| acc | (((bits >> b) & 1) << i))
            })
            .collect()
    }

    fn mask(&self, sym: u8) -> u64 {
        self.symbols.iter().enumerate().filter(|x| *x.1 == sym).fold(0, |acc, (i, _)| acc | 1 << i)
    }

    /// Rows are disjoint iff some position has 0 in one and 1 in the other.
    pub fn disjoint(&self, other: &Row012) -> bool {
        self.symbols.iter().zip(&other.symbols).any(|(&a, &b)| a != 2 && b != 2 && a != b)
    }
}

impl fmt::Display for Row012 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl From<Row012> for String {
    fn from(r: Row012) -> String {
        r.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureCover {
    pub rows: Vec<Row012>,
    pub count: u128,
}

impl ClosureCover {
    pub fn closed_sets(&self) -> Vec<u64> {
        let mut sets: Vec<u64> = self.rows.iter().flat_map(Row012::expand).collect();
        sets.sort_unstable();
        sets
    }
}

struct CoverSearch<'a> {
    k: usize,
    sigma: &'a [Implication],
    rows: Vec<Row012>,
    max_rows: u64,
}

impl CoverSearch<'_> {
    fn run(&mut self, mut ones: u64, mut zeros: u64) -> Result<(), ClosureError> {
        // unit propagation in both directions
        loop {
            let mut changed = false;
            for imp in self.sigma {
                if imp.premise & zeros != 0 {
                    continue;
                }
                if imp.premise & !ones == 0 {
                    if imp.conclusion & zeros != 0 {
                        return Ok(());
                    }
                    if imp.conclusion & !ones != 0 {
                        ones |= imp.conclusion;
                        changed = true;
                    }
                } else if imp.conclusion & zeros != 0 {
                    let open = imp.premise & !ones;
                    if open.count_ones() == 1 {
                        zeros |= open;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let constraining = self
            .sigma
            .iter()
            .find(|i| i.premise & zeros == 0 && i.conclusion & !ones != 0);
        match constraining {
            None => {
                if self.rows.len() as u64 >= self.max_rows {
                    return Err(ClosureError::Budget(self.max_rows));
                }
                let symbols = (0..self.k)
                    .map(|i| match ((ones >> i) & 1, (zeros >> i) & 1) {
                        (1, _) => 1,
                        (_, 1) => 0,
                        _ => 2,
                    })
                    .collect();
                self.rows.push(Row012 { symbols });
                Ok(())
            }
            Some(imp) => {
                let open = (imp.premise | imp.conclusion) & !ones & !zeros;
                let bit = open & open.wrapping_neg();
                self.run(ones, zeros | bit)?;
                self.run(ones | bit, zeros)
            }
        }
    }
}

/// Disjoint rows covering exactly the Σ-closed subsets of a k-element set.
pub fn closure_cover(k: usize, sigma: &[Implication], max_rows: u64) -> Result<ClosureCover, ClosureError> {
    if k > MAX_GROUND {
        return Err(ClosureError::GroundTooLarge(k));
    }
    if sigma.iter().any(|i| i.premise == 0) {
        return Err(ClosureError::EmptyPremise);
    }
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let clipped: Vec<Implication> = sigma
        .iter()
        .map(|i| Implication { premise: i.premise & full, conclusion: i.conclusion & full })
        .collect();
    let mut search = CoverSearch { k, sigma: &clipped, rows: Vec::new(), max_rows };
    search.run(0, 0)?;
    let mut rows = search.rows;
    rows.sort();
    let count = rows.iter().map(Row012::count).sum();
    Ok(ClosureCover { rows, count })
}

/// Join term over the ground set, e.g. `b | c`.
pub type JoinTerm = u64;

/// u = v becomes supp(u) -> supp(v) and back; conclusions drop the premise
/// and implications with nothing left to conclude are omitted.
pub fn semilattice_relations_to_implications(relations: &[(JoinTerm, JoinTerm)]) -> Result<Vec<Implication>, ClosureError> {
    let mut out = Vec::new();
    for &(u, v) in relations {
        for (p, c) in [(u, v), (v, u)] {
            let imp = Implication::new(p, c & !p)?;
            if imp.conclusion != 0 && !out.contains(&imp) {
                out.push(imp);
            }
        }
    }
    Ok(out)
}

/// A ground set with implications, as read from `base:`/`imp:`/`rel:` lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImplicationFamily {
    pub base: Vec<String>,
    pub implications: Vec<Implication>,
    pub relations: Vec<(JoinTerm, JoinTerm)>,
}

impl ImplicationFamily {
    pub fn parse(text: &str) -> Result<ImplicationFamily, ClosureError> {
        let mut base: Option<Vec<String>> = None;
        let mut implications = Vec::new();
        let mut relations = Vec::new();
        for (ln, line) in content_lines(text) {
            if let Some(rest) = keyed(line, "base") {
                if base.is_some() {
                    return Err(ParseError::at(ln, "second `base:` line").into());
                }
                let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if let Some(bad) = names.iter().find(|n| !is_identifier(n)) {
                    return Err(ParseError::at(ln, format!("bad element name `{bad}`")).into());
                }
                if names.len() > MAX_GROUND {
                    return Err(ClosureError::GroundTooLarge(names.len()));
                }
                for (i, n) in names.iter().enumerate() {
                    if names[..i].contains(n) {
                        return Err(ParseError::at(ln, format!("`{n}` listed twice")).into());
                    }
                }
                base = Some(names);
                continue;
            }
            let names = base.as_ref().ok_or_else(|| ParseError::at(ln, "`base:` must come first"))?;
            let set = |s: &str, sep: Option<char>| -> Result<u64, ClosureError> {
                let toks: Vec<&str> = match sep {
                    Some(c) => s.split(c).map(str::trim).collect(),
                    None => s.split_whitespace().collect(),
                };
                toks.iter().filter(|t| !t.is_empty() || sep.is_some()).try_fold(0u64, |acc, t| {
                    let i = names
                        .iter()
                        .position(|n| n == t)
                        .ok_or_else(|| ParseError::at(ln, format!("unknown element `{t}`")))?;
                    Ok(acc | 1 << i)
                })
            };
            if let Some(rest) = keyed(line, "imp") {
                let (p, c) = rest.split_once("->").ok_or_else(|| ParseError::at(ln, "expected `imp: A -> B`"))?;
                let imp = Implication::new(set(p, None)?, set(c, None)?)
                    .map_err(|_| ParseError::at(ln, "empty premise"))?;
                implications.push(imp);
            } else if let Some(rest) = keyed(line, "rel") {
                let (u, v) = rest.split_once('=').ok_or_else(|| ParseError::at(ln, "expected `rel: u = v`"))?;
                let (u, v) = (set(u, Some('|'))?, set(v, Some('|'))?);
                if u == 0 || v == 0 {
                    return Err(ParseError::at(ln, "empty join term").into());
                }
                relations.push((u, v));
            } else {
                return Err(ParseError::at(ln, format!("unrecognized line `{line}`")).into());
            }
        }
        let base = base.ok_or_else(|| ParseError::new("missing `base:` line"))?;
        Ok(ImplicationFamily { base, implications, relations })
    }

    /// Explicit implications plus the translated relations.
    pub fn sigma(&self) -> Result<Vec<Implication>, ClosureError> {
        let mut all = self.implications.clone();
        for imp in semilattice_relations_to_implications(&self.relations)? {
            if !all.contains(&imp) {
                all.push(imp);
            }
        }
        Ok(all)
    }

    pub fn set_name(&self, u: u64) -> String {
        let sep = if self.base.iter().all(|n| n.chars().count() == 1) { "" } else { " " };
        let parts: Vec<&str> =
            (0..self.base.len()).filter(|&i| (u >> i) & 1 == 1).map(|i| self.base[i].as_str()).collect();
        if parts.is_empty() {
            "{}".to_string()
        } else {
            parts.join(sep)
        }
    }

    pub fn display_implication(&self, imp: &Implication) -> String {
        let side = |u: u64| {
            let v: Vec<&str> = (0..self.base.len()).filter(|&i| (u >> i) & 1 == 1).map(|i| self.base[i].as_str()).collect();
            v.join(" ")
        };
        format!("{} -> {}", side(imp.premise), side(imp.conclusion))
    }
}

/// Military order on subsets: fewer elements first, then by the earliest
/// element where they differ (present before absent).
pub fn military_subset_cmp(a: u64, b: u64) -> Ordering {
    a.count_ones().cmp(&b.count_ones()).then_with(|| {
        let diff = a ^ b;
        if diff == 0 {
            Ordering::Equal
        } else if a & diff & diff.wrapping_neg() != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rfsl {
    /// Element i is the closed set `sets[i]`.
    pub sets: Vec<u64>,
    /// Military-least generating subset of each closed set.
    pub generators: Vec<u64>,
    pub semigroup: CayleySemigroup,
}

/// (C(Σ) \ {∅}, ∨) with U ∨ V = cl(U ∪ V); elements ordered by their names.
pub fn rfsl(family: &ImplicationFamily, max_elements: u64) -> Result<Rfsl, ClosureError> {
    let k = family.base.len();
    let sigma = family.sigma()?;
    let cover = closure_cover(k, &sigma, max_elements)?;
    if cover.count > u128::from(max_elements) + 1 {
        return Err(ClosureError::Budget(max_elements));
    }
    let closed: Vec<u64> = cover.closed_sets().into_iter().filter(|&u| u != 0).collect();
    // name each closed set by the least subset generating it
    let mut named: Vec<(u64, u64)> = closed
        .iter()
        .map(|&u| {
            let mut best: Option<u64> = None;
            let mut sub = u;
            while sub != 0 {
                if sigma_closure(sub, &sigma) == u
                    && best.is_none_or(|b| military_subset_cmp(sub, b) == Ordering::Less)
                {
                    best = Some(sub);
                }
                sub = (sub - 1) & u;
            }
            (best.expect("u generates itself"), u)
        })
        .collect();
    named.sort_by(|x, y| military_subset_cmp(x.0, y.0));
    let sets: Vec<u64> = named.iter().map(|x| x.1).collect();
    let generators: Vec<u64> = named.iter().map(|x| x.0).collect();
    let n = sets.len();
    let index = |u: u64| sets.iter().position(|&s| s == u).expect("closure of a union is closed");
    let rows: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).map(|j| index(sigma_closure(sets[i] | sets[j], &sigma))).collect()).collect();
    let names = generators.iter().map(|&g| family.set_name(g)).collect();
    let semigroup = CayleySemigroup::from_table(rows)?.with_names(names)?;
    Ok(Rfsl { sets, generators, semigroup })
}

/// y ↦ {i : y_i ≤ y} where y_i ≤ y means y_i·y = y_i.
pub fn embed_into_powerset(y: &CayleySemigroup) -> Result<Vec<Vec<bool>>, ClosureError> {
    if !y.is_semilattice() {
        return Err(ClosureError::NotSemilattice);
    }
    let n = y.size();
    let image: Vec<Vec<bool>> = (0..n).map(|p| (0..n).map(|i| y.mul(i, p) == i).collect()).collect();
    for a in 0..n {
        for b in 0..n {
            if a != b && image[a] == image[b] {
                return Err(ClosureError::NotSemilattice);
            }
            let meet: Vec<bool> = image[a].iter().zip(&image[b]).map(|(&x, &z)| x && z).collect();
            if image[y.mul(a, b)] != meet {
                return Err(ClosureError::NotSemilattice);
            }
        }
    }
    Ok(image)
}

/// Largest T ⊆ pool whose product is x, if any subset of the pool multiplies to x.
pub fn largest_fiber(y: &CayleySemigroup, x: usize, pool: &[usize]) -> Result<Option<Vec<usize>>, ClosureError> {
    if !y.is_semilattice() {
        return Err(ClosureError::NotSemilattice);
    }
    if let Some(&bad) = pool.iter().chain(std::iter::once(&x)).find(|&&p| p >= y.size()) {
        return Err(ClosureError::OutOfRange(bad));
    }
    let mut t: Vec<usize> = pool.iter().copied().filter(|&p| y.mul(p, x) == x).collect();
    t.sort_unstable();
    t.dedup();
    Ok((y.product(&t) == Some(x)).then_some(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SIGMA1: &str = "base: a b c d\nimp: a b -> c\nimp: c -> a\nimp: b -> d\n";
    const SIGMA2: &str = "base: a b c d e\nimp: a -> b\nimp: b c -> e\nimp: a e -> b d\nimp: d -> c\n";
    const RF4: &str = "base: a b c d\nrel: a | c = c\nrel: b | d = b\nrel: b | c = a | b\n";
    const RF5: &str =
        "base: a b c d e\nrel: a | b = a\nrel: b | c | e = b | c\nrel: a | b | d | e = a | e\nrel: c | d = d\n";

    fn family(text: &str) -> ImplicationFamily {
        ImplicationFamily::parse(text).unwrap()
    }

    fn set(f: &ImplicationFamily, s: &str) -> u64 {
        s.chars().map(|c| 1u64 << f.base.iter().position(|n| n == &c.to_string()).unwrap()).fold(0, |a, b| a | b)
    }

    fn brute_closed(k: usize, sigma: &[Implication]) -> Vec<u64> {
        (0u64..1 << k).filter(|&u| is_closed(u, sigma)).collect()
    }

    #[test]
    fn closures() {
        let f = family(SIGMA1);
        assert_eq!(sigma_closure(set(&f, "ad"), &f.implications), set(&f, "ad"));
        assert_eq!(sigma_closure(set(&f, "ab"), &f.implications), set(&f, "abcd"));
        assert_eq!(sigma_closure(0, &f.implications), 0);
    }

    #[test]
    fn sigma1_cover() {
        let f = family(SIGMA1);
        let cover = closure_cover(4, &f.implications, 1000).unwrap();
        let mut expect: Vec<u64> =
            ["", "a", "d", "ad", "ac", "acd", "bd", "abcd"].iter().map(|s| set(&f, s)).collect();
        expect.sort_unstable();
        assert_eq!(cover.closed_sets(), expect);
        assert_eq!(cover.count, 8);
    }

    #[test]
    fn sigma2_cover() {
        let f = family(SIGMA2);
        let cover = closure_cover(5, &f.implications, 1000).unwrap();
        let rows: Vec<Row012> =
            ["00122", "00002", "01002", "01121", "11000", "11111"].iter().map(|r| Row012::parse(r).unwrap()).collect();
        let mut from_rows: Vec<u64> = rows.iter().flat_map(Row012::expand).collect();
        from_rows.sort_unstable();
        assert_eq!(cover.closed_sets(), from_rows);
        assert_eq!(cover.count, 12);
        for (i, a) in cover.rows.iter().enumerate() {
            for b in &cover.rows[i + 1..] {
                assert!(a.disjoint(b));
            }
        }
    }

    #[test]
    fn empty_family() {
        let cover = closure_cover(5, &[], 10).unwrap();
        assert_eq!(cover.rows, [Row012::parse("22222").unwrap()]);
        assert_eq!(cover.count, 32);
    }

    #[test]
    fn translations() {
        let f = family(RF4);
        let sigma = f.sigma().unwrap();
        assert_eq!(sigma.len(), 4);
        assert_eq!(closure_cover(4, &sigma, 100).unwrap().closed_sets(), closure_cover(4, &family(SIGMA1).implications, 100).unwrap().closed_sets());
        let f5 = family(RF5);
        let mut got = f5.sigma().unwrap();
        let mut expect = family(SIGMA2).implications;
        got.sort();
        expect.sort();
        assert_eq!(got, expect);
        assert!(semilattice_relations_to_implications(&[(3, 3)]).unwrap().is_empty());
    }

    #[test]
    fn rfsl_examples() {
        let r = rfsl(&family(RF4), 1000).unwrap();
        let names: Vec<String> = (0..r.semigroup.size()).map(|x| r.semigroup.name(x)).collect();
        assert_eq!(names, ["a", "b", "c", "d", "ab", "ad", "cd"]);
        assert!(r.semigroup.is_semilattice());
        let r5 = rfsl(&family(RF5), 1000).unwrap();
        let f5 = family(RF5);
        assert_eq!(r5.semigroup.size() as u64, brute_closed(5, &f5.sigma().unwrap()).len() as u64 - 1);
        assert_eq!(r5.semigroup.size(), 11);
        let free = rfsl(&family("base: x y z\n"), 100).unwrap();
        assert_eq!(free.semigroup.size(), 7);
    }

    #[test]
    fn fibers() {
        let r = rfsl(&family(RF4), 1000).unwrap();
        let s = &r.semigroup;
        let id = |n: &str| (0..s.size()).find(|&x| s.name(x) == n).unwrap();
        let gens: Vec<usize> = ["a", "b", "c", "d"].iter().map(|g| id(g)).collect();
        let names = |t: Vec<usize>| t.into_iter().map(|x| s.name(x)).collect::<Vec<_>>();
        assert_eq!(names(largest_fiber(s, id("b"), &gens).unwrap().unwrap()), ["b", "d"]);
        assert_eq!(names(largest_fiber(s, id("ad"), &gens).unwrap().unwrap()), ["a", "d"]);
        assert_eq!(names(largest_fiber(s, id("ab"), &gens).unwrap().unwrap()).len(), 4);
        let free = rfsl(&family("base: x y z\n"), 100).unwrap();
        let top = (0..7).find(|&x| free.semigroup.name(x) == "xyz").unwrap();
        assert_eq!(largest_fiber(&free.semigroup, top, &[0, 1, 2]).unwrap(), Some(vec![0, 1, 2]));
    }

    #[test]
    fn powerset_embedding() {
        let sigma1 = family(SIGMA1);
        let closed = closure_cover(4, &sigma1.implications, 100).unwrap().closed_sets();
        // (C, ∩)
        let n = closed.len();
        let ix = |u: u64| closed.iter().position(|&c| c == u).unwrap();
        let y = CayleySemigroup::from_fn(n, |a, b| ix(closed[a] & closed[b])).unwrap();
        let image = embed_into_powerset(&y).unwrap();
        assert_eq!(image.len(), 8);
        let chain = CayleySemigroup::from_fn(2, |a, b| a.min(b)).unwrap();
        let img = embed_into_powerset(&chain).unwrap();
        assert_eq!(img, [vec![true, false], vec![true, true]]);
        let free = rfsl(&family("base: x y\n"), 10).unwrap();
        let img = embed_into_powerset(&free.semigroup).unwrap();
        assert_eq!(img.len(), 3);
        let z3 = CayleySemigroup::from_fn(3, |a, b| (a + b) % 3).unwrap();
        assert_eq!(embed_into_powerset(&z3), Err(ClosureError::NotSemilattice));
    }

    #[test]
    fn lattice_operations_on_closed_sets() {
        let f = family(SIGMA2);
        let closed = brute_closed(5, &f.implications);
        for &a in &closed {
            for &b in &closed {
                assert!(closed.contains(&(a & b)));
                let join = sigma_closure(a | b, &f.implications);
                let uppers: Vec<u64> = closed.iter().copied().filter(|&c| c & (a | b) == a | b).collect();
                assert!(uppers.iter().all(|&c| c & join == join));
            }
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(ImplicationFamily::parse("imp: a -> b\n"), Err(ClosureError::Parse(_))));
        let e = ImplicationFamily::parse("base: a b\nimp: -> a\n").unwrap_err();
        assert!(matches!(e, ClosureError::Parse(ParseError { line: Some(2), .. })));
        assert!(ImplicationFamily::parse("base: a b\nrel: a | z = b\n").is_err());
        assert_eq!(Implication::new(0, 1), Err(ClosureError::EmptyPremise));
    }

    fn arb_sigma(k: usize) -> impl Strategy<Value = Vec<Implication>> {
        let full = (1u64 << k) - 1;
        prop::collection::vec((1..=full, 0..=full), 0..6)
            .prop_map(|v| v.into_iter().map(|(p, c)| Implication { premise: p, conclusion: c }).collect())
    }

    proptest! {
        #[test]
        fn closure_operator_laws(sigma in arb_sigma(6), u in 0u64..64, v in 0u64..64) {
            let cu = sigma_closure(u, &sigma);
            prop_assert_eq!(cu & u, u);
            prop_assert_eq!(sigma_closure(cu, &sigma), cu);
            prop_assert!(is_closed(cu, &sigma));
            let cuv = sigma_closure(u | v, &sigma);
            prop_assert_eq!(cu & cuv, cu);
        }

        #[test]
        fn cover_matches_brute_force(k in 1usize..=9, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let full = (1u64 << k) - 1;
            let sigma: Vec<Implication> = (0..rng.random_range(0..8))
                .map(|_| Implication { premise: rng.random_range(1..=full), conclusion: rng.random_range(0..=full) })
                .collect();
            let cover = closure_cover(k, &sigma, 100_000).unwrap();
            prop_assert_eq!(cover.closed_sets(), brute_closed(k, &sigma));
            prop_assert_eq!(cover.count, brute_closed(k, &sigma).len() as u128);
            for (i, a) in cover.rows.iter().enumerate() {
                for b in &cover.rows[i + 1..] {
                    prop_assert!(a.disjoint(b));
                }
            }
        }
    }
}
