//! Morphisms between finite cyclic semigroups, composition along frames and
//! strong semilattices of cyclic semigroups.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::parse::{content_lines, is_identifier, keyed, parse_num, ParseError};
use crate::semigroup::{cover_pairs, CayleySemigroup, CyclicType, SemigroupError};
use crate::structure::{archimedean_components, idempotent_semilattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclicError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("node `{0}` declared twice")]
    DuplicateNode(String),
    #[error("frame is empty")]
    EmptyFrame,
    #[error("edges form a cycle through `{0}`")]
    Cycle(String),
    #[error("edge {upper} > {lower} is not a covering")]
    NotCovering { upper: String, lower: String },
    #[error("`{a}` and `{b}` have no meet")]
    NoMeet { a: String, b: String },
    #[error("edge {upper} > {lower} has no exponent")]
    MissingExponent { upper: String, lower: String },
    #[error("k={k} is not exquisite for {upper} > {lower}")]
    NotExquisite { upper: String, lower: String, k: u64 },
    #[error("paths from {from} to {to} disagree: exponents {first} and {second}")]
    PathDisagreement { from: String, to: String, first: u64, second: u64 },
    #[error("exponent sets do not compose: target {left:?} differs from source {right:?}")]
    TypeMismatch { left: CyclicType, right: CyclicType },
    #[error("frame is not a four-element diamond")]
    NotDiamond,
    #[error("component of idempotent {0} is not cyclic")]
    NotCyclic(usize),
    #[error("k must be at least 1")]
    ZeroExponent,
}

/// Theorem 1 conditions: m' <= km and n' | kn.
pub fn is_morphism_exponent(src: CyclicType, dst: CyclicType, k: u64) -> bool {
    let (m, n) = (u128::from(src.index), u128::from(src.period));
    let (m2, n2) = (u128::from(dst.index), u128::from(dst.period));
    let k = u128::from(k);
    k >= 1 && m2 <= k * m && (k * n) % n2 == 0
}

pub fn idempotent_exponent(t: CyclicType) -> u64 {
    t.idempotent_exponent()
}

/// Exquisite exponents k in [1, m'+n'-1] for morphisms a -> b^k.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExqSet {
    pub source: CyclicType,
    pub target: CyclicType,
    pub exponents: Vec<u64>,
}

pub fn exq(src: CyclicType, dst: CyclicType) -> ExqSet {
    let exponents = (1..=dst.order()).filter(|&k| is_morphism_exponent(src, dst, k)).collect();
    ExqSet { source: src, target: dst, exponents }
}

impl ExqSet {
    pub fn contains(&self, k: u64) -> bool {
        self.exponents.binary_search(&k).is_ok()
    }
}

fn canonical_product(t: CyclicType, a: u64, b: u64) -> u64 {
    t.canonical(u128::from(a) * u128::from(b))
}

pub fn compose_exq(ab: &ExqSet, bd: &ExqSet) -> Result<ExqSet, CyclicError> {
    if ab.target != bd.source {
        return Err(CyclicError::TypeMismatch { left: ab.target, right: bd.source });
    }
    let set: BTreeSet<u64> = ab
        .exponents
        .iter()
        .flat_map(|&k1| bd.exponents.iter().map(move |&k2| canonical_product(bd.target, k1, k2)))
        .collect();
    Ok(ExqSet { source: ab.source, target: bd.target, exponents: set.into_iter().collect() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrameNode {
    pub name: String,
    pub kind: CyclicType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrameEdge {
    pub upper: usize,
    pub lower: usize,
    pub k: Option<u64>,
}

/// A finite meet-semilattice with a cyclic type per node and, optionally,
/// an exponent per covering edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Frame {
    nodes: Vec<FrameNode>,
    edges: Vec<FrameEdge>,
    #[serde(skip)]
    leq: Vec<Vec<bool>>,
    #[serde(skip)]
    meet: Vec<Vec<usize>>,
}

impl Frame {
    pub fn new(nodes: Vec<FrameNode>, edges: Vec<FrameEdge>) -> Result<Frame, CyclicError> {
        let n = nodes.len();
        if n == 0 {
            return Err(CyclicError::EmptyFrame);
        }
        for (i, node) in nodes.iter().enumerate() {
            if nodes[..i].iter().any(|o| o.name == node.name) {
                return Err(CyclicError::DuplicateNode(node.name.clone()));
            }
        }
        let name = |i: usize| nodes[i].name.clone();
        if let Some(e) = edges.iter().find(|e| e.upper >= n || e.lower >= n) {
            return Err(CyclicError::UnknownNode(format!("#{}", e.upper.max(e.lower))));
        }
        if edges.iter().any(|e| e.k == Some(0)) {
            return Err(CyclicError::ZeroExponent);
        }
        // leq[b][a]: b <= a
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for e in &edges {
            if e.upper == e.lower {
                return Err(CyclicError::Cycle(name(e.upper)));
            }
            leq[e.lower][e.upper] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| (0..n).any(|j| i != j && leq[i][j] && leq[j][i])) {
            return Err(CyclicError::Cycle(name(i)));
        }
        let covers = cover_pairs(&leq);
        for (i, e) in edges.iter().enumerate() {
            let dup = edges[..i].iter().any(|o| (o.upper, o.lower) == (e.upper, e.lower));
            if dup || !covers.contains(&(e.lower, e.upper)) {
                return Err(CyclicError::NotCovering { upper: name(e.upper), lower: name(e.lower) });
            }
        }
        let mut meet = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&c| leq[c][a] && leq[c][b]).collect();
                let top = lower.iter().copied().find(|&c| lower.iter().all(|&d| leq[d][c]));
                meet[a][b] = top.ok_or_else(|| CyclicError::NoMeet { a: name(a), b: name(b) })?;
            }
        }
        Ok(Frame { nodes, edges, leq, meet })
    }

    /// `node: NAME` followed by `type: m n`; `edge: A > B` with optional `k=K`.
    pub fn parse(text: &str) -> Result<Frame, CyclicError> {
        let mut nodes: Vec<(String, Option<CyclicType>)> = Vec::new();
        let mut raw_edges: Vec<(usize, String, String, Option<u64>)> = Vec::new();
        for (ln, line) in content_lines(text) {
            if let Some(rest) = keyed(line, "node") {
                if !is_identifier(rest) {
                    return Err(ParseError::at(ln, format!("bad node name `{rest}`")).into());
                }
                nodes.push((rest.to_string(), None));
            } else if let Some(rest) = keyed(line, "type") {
                let nums = rest
                    .split_whitespace()
                    .map(|t| parse_num::<u64>(t, "integer"))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| e.with_line(ln))?;
                let [m, n] = nums[..] else {
                    return Err(ParseError::at(ln, "expected `type: m n`").into());
                };
                let kind = CyclicType::new(m, n).map_err(|e| ParseError::at(ln, e.to_string()))?;
                match nodes.last_mut() {
                    Some((_, slot @ None)) => *slot = Some(kind),
                    Some((name, Some(_))) => {
                        return Err(ParseError::at(ln, format!("node `{name}` already has a type")).into())
                    }
                    None => return Err(ParseError::at(ln, "`type:` before any `node:`").into()),
                }
            } else if let Some(rest) = keyed(line, "edge") {
                let (lhs, rhs) = rest
                    .split_once('>')
                    .ok_or_else(|| ParseError::at(ln, "expected `edge: A > B [k=K]`"))?;
                let mut toks = rhs.split_whitespace();
                let lower = toks.next().ok_or_else(|| ParseError::at(ln, "missing lower node"))?;
                let k = match toks.next() {
                    None => None,
                    Some(t) => {
                        let v = t.strip_prefix("k=").ok_or_else(|| ParseError::at(ln, format!("expected `k=K`, found `{t}`")))?;
                        Some(parse_num::<u64>(v, "exponent").map_err(|e| e.with_line(ln))?)
                    }
                };
                if toks.next().is_some() {
                    return Err(ParseError::at(ln, "trailing tokens after edge").into());
                }
                raw_edges.push((ln, lhs.trim().to_string(), lower.to_string(), k));
            } else {
                return Err(ParseError::at(ln, format!("unrecognized line `{line}`")).into());
            }
        }
        let mut frame_nodes = Vec::new();
        for (name, kind) in nodes {
            let kind = kind.ok_or_else(|| ParseError::new(format!("node `{name}` has no `type:` line")))?;
            frame_nodes.push(FrameNode { name, kind });
        }
        let find = |ln: usize, s: &str| {
            frame_nodes
                .iter()
                .position(|n| n.name == s)
                .ok_or_else(|| CyclicError::Parse(ParseError::at(ln, format!("unknown node `{s}`"))))
        };
        let mut edges = Vec::new();
        for (ln, upper, lower, k) in &raw_edges {
            edges.push(FrameEdge { upper: find(*ln, upper)?, lower: find(*ln, lower)?, k: *k });
        }
        Frame::new(frame_nodes, edges)
    }

    pub fn nodes(&self) -> &[FrameNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[FrameEdge] {
        &self.edges
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn node(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.name == name)
    }

    pub fn with_exponents(&self, ks: &[u64]) -> Result<Frame, CyclicError> {
        let edges = self.edges.iter().zip(ks).map(|(e, &k)| FrameEdge { k: Some(k), ..e.clone() }).collect();
        Frame::new(self.nodes.clone(), edges)
    }

    /// sigma[a][b] for b <= a: canonical exponent of the composite morphism.
    pub fn composites(&self) -> Result<Vec<Vec<Option<u64>>>, CyclicError> {
        let n = self.nodes.len();
        let name = |i: usize| self.nodes[i].name.clone();
        for e in &self.edges {
            let (up, lo) = (name(e.upper), name(e.lower));
            let k = e.k.ok_or_else(|| CyclicError::MissingExponent { upper: up.clone(), lower: lo.clone() })?;
            if !is_morphism_exponent(self.nodes[e.upper].kind, self.nodes[e.lower].kind, k) {
                return Err(CyclicError::NotExquisite { upper: up, lower: lo, k });
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| (0..n).filter(|&b| self.leq[b][a]).count());
        let mut sigma = vec![vec![None; n]; n];
        for &a in &order {
            sigma[a][a] = Some(1);
            for e in self.edges.iter().filter(|e| e.upper == a) {
                let k = e.k.expect("checked above");
                for b in 0..n {
                    let Some(inner) = sigma[e.lower][b] else { continue };
                    let value = canonical_product(self.nodes[b].kind, k, inner);
                    match sigma[a][b] {
                        Some(prev) if prev != value => {
                            return Err(CyclicError::PathDisagreement {
                                from: name(a),
                                to: name(b),
                                first: prev,
                                second: value,
                            })
                        }
                        _ => sigma[a][b] = Some(value),
                    }
                }
            }
        }
        Ok(sigma)
    }

    /// First element id of each node's block.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.nodes
            .iter()
            .map(|nd| {
                let o = acc;
                acc += nd.kind.order() as usize;
                o
            })
            .collect()
    }
}

/// Elements are the blocks a..a^{m+n-1} of the nodes in frame order.
pub fn build_strong_semilattice(f: &Frame) -> Result<CayleySemigroup, CyclicError> {
    let sigma = f.composites()?;
    let offsets = f.offsets();
    let mut elems: Vec<(usize, u64)> = Vec::new();
    let mut names = Vec::new();
    for (v, nd) in f.nodes.iter().enumerate() {
        for i in 1..=nd.kind.order() {
            elems.push((v, i));
            names.push(if i == 1 { nd.name.clone() } else { format!("{}^{i}", nd.name) });
        }
    }
    let table: Vec<Vec<usize>> = elems
        .iter()
        .map(|&(a, i)| {
            elems
                .iter()
                .map(|&(b, j)| {
                    let g = f.meet[a][b];
                    let ka = u128::from(sigma[a][g].expect("g <= a"));
                    let kb = u128::from(sigma[b][g].expect("g <= b"));
                    let e = f.nodes[g].kind.canonical(ka * u128::from(i) + kb * u128::from(j));
                    offsets[g] + e as usize - 1
                })
                .collect()
        })
        .collect();
    Ok(CayleySemigroup::from_table(table)?.with_names(names)?)
}

/// Four-element frame: top > left, right > bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Diamond {
    pub top: CyclicType,
    pub left: CyclicType,
    pub right: CyclicType,
    pub bottom: CyclicType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongCount {
    /// Exponents of top -> bottom reachable through both sides.
    pub is_set: Vec<u64>,
    /// (k, choices through left, choices through right).
    pub choices: Vec<(u64, u64, u64)>,
    pub total: u128,
}

impl Diamond {
    pub fn from_frame(f: &Frame) -> Result<Diamond, CyclicError> {
        if f.nodes.len() != 4 {
            return Err(CyclicError::NotDiamond);
        }
        let all = |v: usize, up: bool| (0..4).all(|w| if up { f.leq[w][v] } else { f.leq[v][w] });
        let top = (0..4).find(|&v| all(v, true)).ok_or(CyclicError::NotDiamond)?;
        let bottom = (0..4).find(|&v| all(v, false)).ok_or(CyclicError::NotDiamond)?;
        let mid: Vec<usize> = (0..4).filter(|&v| v != top && v != bottom).collect();
        if f.leq[mid[0]][mid[1]] || f.leq[mid[1]][mid[0]] {
            return Err(CyclicError::NotDiamond);
        }
        let t = |v: usize| f.nodes[v].kind;
        Ok(Diamond { top: t(top), left: t(mid[0]), right: t(mid[1]), bottom: t(bottom) })
    }

    fn side(&self, mid: CyclicType) -> (ExqSet, ExqSet) {
        (exq(self.top, mid), exq(mid, self.bottom))
    }

    fn choices(&self, mid: CyclicType, k: u64) -> u64 {
        let (up, down) = self.side(mid);
        let mut count = 0;
        for &k1 in &up.exponents {
            for &k2 in &down.exponents {
                if canonical_product(self.bottom, k1, k2) == k {
                    count += 1;
                }
            }
        }
        count
    }
}

pub fn count_strong_semilattices(d: &Diamond) -> StrongCount {
    let through = |mid: CyclicType| {
        let (up, down) = d.side(mid);
        compose_exq(&up, &down).expect("types line up").exponents
    };
    let left = through(d.left);
    let right = through(d.right);
    let is_set: Vec<u64> = left.into_iter().filter(|k| right.contains(k)).collect();
    let choices: Vec<(u64, u64, u64)> =
        is_set.iter().map(|&k| (k, d.choices(d.left, k), d.choices(d.right, k))).collect();
    let total = choices.iter().map(|&(_, l, r)| u128::from(l) * u128::from(r)).sum();
    StrongCount { is_set, choices, total }
}

/// One cyclic Archimedean component: its idempotent, a generator and type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicComponent {
    pub idempotent: usize,
    pub generator: usize,
    pub kind: CyclicType,
    /// powers[i] = generator^{i+1}
    pub powers: Vec<usize>,
}

/// Split S into its Archimedean components, each of which must be cyclic.
pub fn cyclic_decomposition(s: &CayleySemigroup) -> Result<Vec<CyclicComponent>, CyclicError> {
    let labels = archimedean_components(s);
    let mut out = Vec::new();
    for e in s.idempotents() {
        let members: Vec<usize> = (0..s.size()).filter(|&x| labels[x] == e).collect();
        let generator = members
            .iter()
            .copied()
            .find(|&g| s.powers(g).len() == members.len())
            .ok_or(CyclicError::NotCyclic(e))?;
        out.push(CyclicComponent {
            idempotent: e,
            generator,
            kind: s.cyclic_type(generator).kind,
            powers: s.powers(generator),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum StrongCheck {
    /// Exponent per covering (upper idempotent, lower idempotent, k).
    Strong { exponents: Vec<(usize, usize, u64)> },
    NotStrong { reason: String },
}

impl StrongCheck {
    pub fn is_strong(&self) -> bool {
        matches!(self, StrongCheck::Strong { .. })
    }
}

/// Decide whether S is a strong semilattice of its cyclic components.
pub fn is_strong_decomposition(
    s: &CayleySemigroup,
    comps: &[CyclicComponent],
) -> Result<StrongCheck, CyclicError> {
    let sl = idempotent_semilattice(s);
    if sl.elements != comps.iter().map(|c| c.idempotent).collect::<Vec<_>>() {
        return Err(CyclicError::NotCyclic(sl.elements.first().copied().unwrap_or(0)));
    }
    let mut locate = vec![(usize::MAX, 0u64); s.size()];
    for (v, c) in comps.iter().enumerate() {
        for (i, &x) in c.powers.iter().enumerate() {
            locate[x] = (v, i as u64 + 1);
        }
    }
    if locate.iter().any(|l| l.0 == usize::MAX) {
        return Err(CyclicError::NotCyclic(comps.first().map_or(0, |c| c.idempotent)));
    }
    let mut candidates = Vec::new();
    for &(lo, hi) in &sl.covers {
        let (a, b) = (&comps[hi], &comps[lo]);
        let (v, exp) = locate[s.mul(a.generator, b.generator)];
        if v != lo {
            return Ok(StrongCheck::NotStrong {
                reason: format!("{}·{} leaves the lower component", s.name(a.generator), s.name(b.generator)),
            });
        }
        let ks: Vec<u64> = exq(a.kind, b.kind)
            .exponents
            .into_iter()
            .filter(|&k| b.kind.canonical(u128::from(k) + 1) == exp)
            .collect();
        if ks.is_empty() {
            return Ok(StrongCheck::NotStrong {
                reason: format!(
                    "no morphism {} -> {} matches {}·{}",
                    s.name(a.idempotent),
                    s.name(b.idempotent),
                    s.name(a.generator),
                    s.name(b.generator)
                ),
            });
        }
        candidates.push(ks);
    }
    let nodes = comps
        .iter()
        .map(|c| FrameNode { name: format!("e{}", c.idempotent), kind: c.kind })
        .collect::<Vec<_>>();
    let skeleton: Vec<FrameEdge> =
        sl.covers.iter().map(|&(lo, hi)| FrameEdge { upper: hi, lower: lo, k: None }).collect();
    let frame = Frame::new(nodes, skeleton)?;
    let mut choice = vec![0usize; candidates.len()];
    let mut last_reason: String;
    loop {
        let ks: Vec<u64> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        match frame.with_exponents(&ks)?.composites() {
            Err(CyclicError::PathDisagreement { from, to, first, second }) => {
                last_reason = format!("paths {from} -> {to} give exponents {first} and {second}");
            }
            Err(e) => return Err(e),
            Ok(sigma) => match complies(s, &frame, comps, &locate, &sigma) {
                None => {
                    let exponents = sl
                        .covers
                        .iter()
                        .zip(&ks)
                        .map(|(&(lo, hi), &k)| (sl.elements[hi], sl.elements[lo], k))
                        .collect();
                    return Ok(StrongCheck::Strong { exponents });
                }
                Some(reason) => last_reason = reason,
            },
        }
        // odometer over candidate choices
        let Some(pos) = (0..choice.len()).find(|&i| choice[i] + 1 < candidates[i].len()) else {
            return Ok(StrongCheck::NotStrong { reason: last_reason });
        };
        choice[pos] += 1;
        for c in &mut choice[..pos] {
            *c = 0;
        }
    }
}

/// First product that disagrees with the strong-semilattice rule, if any.
fn complies(
    s: &CayleySemigroup,
    f: &Frame,
    comps: &[CyclicComponent],
    locate: &[(usize, u64)],
    sigma: &[Vec<Option<u64>>],
) -> Option<String> {
    for x in 0..s.size() {
        for y in 0..s.size() {
            let ((a, i), (b, j)) = (locate[x], locate[y]);
            let g = f.meet(a, b);
            let (ka, kb) = (sigma[a][g]?, sigma[b][g]?);
            let e = comps[g].kind.canonical(u128::from(ka) * u128::from(i) + u128::from(kb) * u128::from(j));
            if comps[g].powers[e as usize - 1] != s.mul(x, y) {
                return Some(format!("{}·{} does not factor through the morphisms", s.name(x), s.name(y)));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(m: u64, n: u64) -> CyclicType {
        CyclicType::new(m, n).unwrap()
    }

    const DIAMOND: &str = "node: alpha\ntype: 2 4\nnode: beta\ntype: 4 1\nnode: gamma\ntype: 1 6\nnode: delta\ntype: 5 3\n\
        edge: alpha > beta\nedge: alpha > gamma\nedge: beta > delta\nedge: gamma > delta\n";

    #[test]
    fn morphism_exponents() {
        assert!(is_morphism_exponent(t(2, 10), t(13, 6), 9));
        assert!(!is_morphism_exponent(t(2, 10), t(13, 6), 6));
        for k in 1..20 {
            assert!(is_morphism_exponent(t(3, 7), t(1, 1), k));
        }
        assert!(!is_morphism_exponent(t(1, 1), t(1, 1), 0));
        assert_eq!(idempotent_exponent(t(13, 6)), 18);
        assert_eq!(idempotent_exponent(t(1, 7)), 7);
        assert_eq!(idempotent_exponent(t(4, 1)), 4);
    }

    #[test]
    fn exq_sets() {
        assert_eq!(exq(t(2, 10), t(13, 6)).exponents, [9, 12, 15, 18]);
        assert_eq!(exq(t(2, 4), t(4, 1)).exponents, [2, 3, 4]);
        assert_eq!(exq(t(4, 1), t(5, 3)).exponents, [3, 6]);
        assert_eq!(exq(t(2, 4), t(1, 6)).exponents, [3, 6]);
        assert_eq!(exq(t(1, 6), t(5, 3)).exponents, [5, 6, 7]);
        assert_eq!(exq(t(2, 4), t(5, 3)).exponents, [3, 6]);
    }

    #[test]
    fn compositions() {
        let ab = exq(t(2, 4), t(4, 1));
        let bd = exq(t(4, 1), t(5, 3));
        let ag = exq(t(2, 4), t(1, 6));
        let gd = exq(t(1, 6), t(5, 3));
        assert_eq!(compose_exq(&ab, &bd).unwrap().exponents, [6]);
        assert_eq!(compose_exq(&ag, &gd).unwrap().exponents, [6]);
        let id = ExqSet { source: t(2, 4), target: t(2, 4), exponents: vec![1] };
        assert_eq!(compose_exq(&id, &ag).unwrap(), ag);
        assert!(matches!(compose_exq(&ab, &gd), Err(CyclicError::TypeMismatch { .. })));
    }

    /// The map a^i -> b^{ki} as an explicit table, if well defined and multiplicative.
    fn explicit_map(src: CyclicType, dst: CyclicType, k: u64) -> Option<Vec<u64>> {
        let map: Vec<u64> = (1..=src.order()).map(|i| dst.canonical(u128::from(k * i))).collect();
        for i in 1..=src.order() {
            for j in 1..=src.order() {
                let prod = src.canonical(u128::from(i + j));
                let img = dst.canonical(u128::from(map[i as usize - 1] + map[j as usize - 1]));
                if map[prod as usize - 1] != img {
                    return None;
                }
            }
        }
        // well defined on repeated powers
        let far = src.order() + src.period;
        (1..=far).all(|i| map[src.canonical(u128::from(i)) as usize - 1] == dst.canonical(u128::from(k * i))).then_some(map)
    }

    #[test]
    fn theorem_one_brute_force() {
        let types: Vec<CyclicType> = (1..=5).flat_map(|m| (1..=5).map(move |n| t(m, n))).collect();
        for &a in &types {
            for &b in &types {
                let set = exq(a, b);
                assert!(!set.exponents.is_empty());
                let brute: Vec<u64> =
                    (1..=b.order()).filter(|&k| explicit_map(a, b, k).is_some()).collect();
                assert_eq!(set.exponents, brute, "{a:?} -> {b:?}");
            }
        }
    }

    #[test]
    fn composition_brute_force() {
        let types: Vec<CyclicType> = (1..=4).flat_map(|m| (1..=4).map(move |n| t(m, n))).collect();
        for &a in &types {
            for &b in &types {
                for &d in types.iter().step_by(3) {
                    let mut brute = BTreeSet::new();
                    for &k1 in &exq(a, b).exponents {
                        for &k2 in &exq(b, d).exponents {
                            let f = explicit_map(a, b, k1).unwrap();
                            let g = explicit_map(b, d, k2).unwrap();
                            brute.insert(g[f[0] as usize - 1]);
                        }
                    }
                    let composed = compose_exq(&exq(a, b), &exq(b, d)).unwrap();
                    assert_eq!(composed.exponents, brute.into_iter().collect::<Vec<_>>());
                }
            }
        }
    }

    #[test]
    fn diamond_count() {
        let f = Frame::parse(DIAMOND).unwrap();
        let d = Diamond::from_frame(&f).unwrap();
        let c = count_strong_semilattices(&d);
        assert_eq!(c.is_set, [6]);
        assert_eq!(c.choices, [(6, 6, 6)]);
        assert_eq!(c.total, 36);
        let trivial = Diamond { top: t(1, 1), left: t(1, 1), right: t(1, 1), bottom: t(1, 1) };
        assert_eq!(count_strong_semilattices(&trivial).total, 1);
    }

    #[test]
    fn is_set_always_holds_the_idempotent() {
        let types: Vec<CyclicType> = (1..=3).flat_map(|m| (1..=3).map(move |n| t(m, n))).collect();
        for &top in &types {
            for &left in &types {
                for &right in &types {
                    for &bottom in &types {
                        let c = count_strong_semilattices(&Diamond { top, left, right, bottom });
                        assert!(c.is_set.contains(&bottom.idempotent_exponent()));
                        assert!(c.total >= 1);
                    }
                }
            }
        }
    }

    #[test]
    fn build_diamond() {
        let f = Frame::parse(DIAMOND).unwrap();
        let built = f.with_exponents(&[2, 3, 3, 5]).unwrap();
        let s = build_strong_semilattice(&built).unwrap();
        assert_eq!(s.size(), 5 + 4 + 6 + 7);
        let comps = cyclic_decomposition(&s).unwrap();
        assert!(is_strong_decomposition(&s, &comps).unwrap().is_strong());
        // every admissible choice builds; the count matches
        let mut built_ok = 0;
        for &k1 in &exq(t(2, 4), t(4, 1)).exponents {
            for &k2 in &exq(t(2, 4), t(1, 6)).exponents {
                for &k3 in &exq(t(4, 1), t(5, 3)).exponents {
                    for &k4 in &exq(t(1, 6), t(5, 3)).exponents {
                        if build_strong_semilattice(&f.with_exponents(&[k1, k2, k3, k4]).unwrap()).is_ok() {
                            built_ok += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(built_ok, 36);
    }

    #[test]
    fn path_disagreement() {
        let frame = "node: a\ntype: 1 6\nnode: b\ntype: 1 6\nnode: c\ntype: 1 6\nnode: d\ntype: 1 6\n\
            edge: a > b k=1\nedge: a > c k=5\nedge: b > d k=1\nedge: c > d k=1\n";
        let f = Frame::parse(frame).unwrap();
        match build_strong_semilattice(&f) {
            Err(CyclicError::PathDisagreement { from, to, .. }) => assert_eq!((from.as_str(), to.as_str()), ("a", "d")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn one_node_frame() {
        let f = Frame::parse("node: x\ntype: 3 4\n").unwrap();
        let s = build_strong_semilattice(&f).unwrap();
        assert_eq!(s.rows(), t(3, 4).semigroup("x").rows());
    }

    #[test]
    fn frame_validation() {
        assert!(matches!(Frame::parse("node: a\ntype: 1 1\nedge: a > b\n"), Err(CyclicError::Parse(_))));
        let two_tops = "node: a\ntype: 1 1\nnode: b\ntype: 1 1\n";
        assert!(matches!(Frame::parse(two_tops), Err(CyclicError::NoMeet { .. })));
        let cyc = "node: a\ntype: 1 1\nnode: b\ntype: 1 1\nedge: a > b\nedge: b > a\n";
        assert!(matches!(Frame::parse(cyc), Err(CyclicError::Cycle(_))));
        let chain = "node: a\ntype: 1 1\nnode: b\ntype: 1 1\nnode: c\ntype: 1 1\nedge: a > b\nedge: b > c\nedge: a > c\n";
        assert!(matches!(Frame::parse(chain), Err(CyclicError::NotCovering { .. })));
        let bad_k = "node: a\ntype: 2 4\nnode: b\ntype: 4 1\nedge: a > b k=1\n";
        assert!(matches!(build_strong_semilattice(&Frame::parse(bad_k).unwrap()), Err(CyclicError::NotExquisite { .. })));
        let e = Frame::parse("node: a\ntype: 1\n").unwrap_err();
        assert!(matches!(e, CyclicError::Parse(ParseError { line: Some(2), .. })));
    }

    #[test]
    fn semilattices_of_groups_are_strong() {
        for n in [6u64, 7, 10, 14, 22] {
            let s = crate::zn::zn_semigroup(n, 100).unwrap();
            let comps = cyclic_decomposition(&s).unwrap();
            assert!(comps.iter().all(|c| c.kind.index == 1));
            assert!(is_strong_decomposition(&s, &comps).unwrap().is_strong(), "Z_{n}");
        }
    }

    #[test]
    fn restriction_to_a_component() {
        let f = Frame::parse(DIAMOND).unwrap().with_exponents(&[4, 6, 6, 7]).unwrap();
        let s = build_strong_semilattice(&f).unwrap();
        for (v, off) in f.offsets().into_iter().enumerate() {
            let kind = f.nodes()[v].kind;
            let ids: Vec<usize> = (off..off + kind.order() as usize).collect();
            let (sub, _) = s.restrict(&ids).unwrap();
            assert_eq!(sub.rows(), kind.semigroup("x").rows());
        }
    }
}
