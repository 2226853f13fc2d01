//! Structure of a finite commutative semigroup as a semilattice of
//! Archimedean components: idempotents, kernels, nil posets, group types.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::abelian::{order_statistics_type, AbelianError, AbelianType, OrderProfile};
use crate::semigroup::{cover_pairs, CayleySemigroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("element {0} is not idempotent")]
    NotIdempotent(usize),
    #[error("kernel of the component of {idempotent} is not a group: {source}")]
    Kernel { idempotent: usize, source: AbelianError },
}

/// `label[x]` is the idempotent power of x.
pub fn archimedean_components(s: &CayleySemigroup) -> Vec<usize> {
    (0..s.size()).map(|x| s.cyclic_type(x).idempotent).collect()
}

fn component_of(s: &CayleySemigroup, e: usize) -> Vec<usize> {
    (0..s.size()).filter(|&x| s.cyclic_type(x).idempotent == e).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdempotentSemilattice {
    /// Idempotents in id order.
    pub elements: Vec<usize>,
    /// `meet[i][j]` is the index of elements[i]·elements[j].
    pub meet: Vec<Vec<usize>>,
    /// (lower, upper) index pairs of the cover relation.
    pub covers: Vec<(usize, usize)>,
}

impl IdempotentSemilattice {
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.meet[i][j] == i
    }
}

pub fn idempotent_semilattice(s: &CayleySemigroup) -> IdempotentSemilattice {
    let elements = s.idempotents();
    let index = |x: usize| elements.binary_search(&x).expect("products of idempotents are idempotent");
    let meet: Vec<Vec<usize>> =
        elements.iter().map(|&e| elements.iter().map(|&f| index(s.mul(e, f))).collect()).collect();
    let leq: Vec<Vec<bool>> =
        (0..elements.len()).map(|i| (0..elements.len()).map(|j| meet[i][j] == i).collect()).collect();
    IdempotentSemilattice { covers: cover_pairs(&leq), elements, meet }
}

/// {x in A_e : ex = x}.
pub fn component_kernel(s: &CayleySemigroup, e: usize) -> Result<Vec<usize>, StructureError> {
    if e >= s.size() || !s.is_idempotent(e) {
        return Err(StructureError::NotIdempotent(e));
    }
    Ok(component_of(s, e).into_iter().filter(|&x| s.mul(e, x) == x).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NilNode {
    Zero,
    Element(usize),
}

/// J-order of the nil quotient A_e / K(A_e); node 0 is the zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NilPoset {
    pub nodes: Vec<NilNode>,
    /// Proper multiples, as node indices.
    pub pm: Vec<Vec<usize>>,
    /// Layer 0 is the zero; layer i+1 holds the nodes all of whose
    /// proper multiples lie in earlier layers.
    pub layers: Vec<Vec<usize>>,
    /// (lower, upper) node pairs.
    pub covers: Vec<(usize, usize)>,
}

impl NilPoset {
    pub fn node_of(&self, x: usize) -> Option<usize> {
        self.nodes.iter().position(|&n| n == NilNode::Element(x))
    }

    pub fn upper_covers(&self, node: usize) -> Vec<usize> {
        self.covers.iter().filter(|c| c.0 == node).map(|c| c.1).collect()
    }
}

fn build_nil_poset(s: &CayleySemigroup, component: &[usize], kernel: &[usize]) -> NilPoset {
    let mut nodes = vec![NilNode::Zero];
    nodes.extend(component.iter().filter(|x| !kernel.contains(x)).map(|&x| NilNode::Element(x)));
    let node_of = |x: usize| match nodes.iter().position(|&n| n == NilNode::Element(x)) {
        Some(i) => i,
        None => 0,
    };
    let product = |i: usize, j: usize| match (nodes[i], nodes[j]) {
        (NilNode::Element(x), NilNode::Element(y)) => node_of(s.mul(x, y)),
        _ => 0,
    };
    let k = nodes.len();
    let pm: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            let mut m: Vec<usize> = (0..k).map(|j| product(i, j)).filter(|&p| p != i).collect();
            m.sort_unstable();
            m.dedup();
            m
        })
        .collect();
    let mut placed = vec![false; k];
    placed[0] = true;
    let mut layers = vec![vec![0]];
    loop {
        let layer: Vec<usize> =
            (1..k).filter(|&i| !placed[i] && pm[i].iter().all(|&j| placed[j])).collect();
        if layer.is_empty() {
            break;
        }
        for &i in &layer {
            placed[i] = true;
        }
        layers.push(layer);
    }
    let leq: Vec<Vec<bool>> =
        (0..k).map(|i| (0..k).map(|j| i == j || pm[j].contains(&i)).collect()).collect();
    NilPoset { covers: cover_pairs(&leq), nodes, pm, layers }
}

pub fn nil_poset(s: &CayleySemigroup, e: usize) -> Result<NilPoset, StructureError> {
    let kernel = component_kernel(s, e)?;
    Ok(build_nil_poset(s, &component_of(s, e), &kernel))
}

/// Nil poset of a semigroup that is itself nil.
pub fn nil_semigroup_poset(s: &CayleySemigroup) -> Option<NilPoset> {
    let zero = s.zero()?;
    s.is_nil().then(|| build_nil_poset(s, &(0..s.size()).collect::<Vec<_>>(), &[zero]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub idempotent: usize,
    pub elements: Vec<usize>,
    pub kernel: Vec<usize>,
    pub group_type: AbelianType,
    pub nil_poset: NilPoset,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub size: usize,
    /// Ordered by idempotent id.
    pub components: Vec<Component>,
    pub semilattice: IdempotentSemilattice,
}

pub fn kernel_group_type(s: &CayleySemigroup, e: usize, kernel: &[usize]) -> Result<AbelianType, StructureError> {
    let orders = kernel.iter().map(|&x| s.cyclic_type(x).kind.period);
    order_statistics_type(&OrderProfile::from_orders(orders))
        .map_err(|source| StructureError::Kernel { idempotent: e, source })
}

pub fn structure_report(s: &CayleySemigroup) -> Result<StructureReport, StructureError> {
    let labels = archimedean_components(s);
    let semilattice = idempotent_semilattice(s);
    let mut components = Vec::new();
    for &e in &semilattice.elements {
        let elements: Vec<usize> = (0..s.size()).filter(|&x| labels[x] == e).collect();
        let kernel: Vec<usize> = elements.iter().copied().filter(|&x| s.mul(e, x) == x).collect();
        let group_type = kernel_group_type(s, e, &kernel)?;
        let nil_poset = build_nil_poset(s, &elements, &kernel);
        components.push(Component { idempotent: e, elements, kernel, group_type, nil_poset });
    }
    Ok(StructureReport { size: s.size(), components, semilattice })
}

impl StructureReport {
    pub fn component_of(&self, x: usize) -> Option<&Component> {
        self.components.iter().find(|c| c.elements.binary_search(&x).is_ok())
    }

    pub fn to_text(&self, s: &CayleySemigroup) -> String {
        let set = |xs: &[usize]| xs.iter().map(|&x| s.name(x)).collect::<Vec<_>>().join(", ");
        let mut out = String::new();
        let _ = writeln!(out, "elements: {}", self.size);
        let _ = writeln!(out, "idempotents: {{{}}}", set(&self.semilattice.elements));
        for &(lo, hi) in &self.semilattice.covers {
            let (lo, hi) = (self.semilattice.elements[lo], self.semilattice.elements[hi]);
            let _ = writeln!(out, "  {} < {}", s.name(lo), s.name(hi));
        }
        for c in &self.components {
            let _ = writeln!(out, "component {} ({} elements): {{{}}}", s.name(c.idempotent), c.elements.len(), set(&c.elements));
            let _ = writeln!(out, "  kernel: {{{}}}  type: {}", set(&c.kernel), c.group_type);
            if c.nil_poset.nodes.len() > 1 {
                let node = |i: usize| nil_node_name(s, &c.nil_poset, i);
                let covers: Vec<String> =
                    c.nil_poset.covers.iter().map(|&(lo, hi)| format!("{} < {}", node(lo), node(hi))).collect();
                let _ = writeln!(out, "  nil quotient covers: {}", covers.join("; "));
            }
        }
        out
    }

    pub fn to_dot(&self, s: &CayleySemigroup) -> String {
        let mut out = String::from("digraph semilattice {\n  rankdir=BT;\n");
        for &e in &self.semilattice.elements {
            let _ = writeln!(out, "  e{e} [label=\"{}\"];", s.name(e));
        }
        for &(lo, hi) in &self.semilattice.covers {
            let _ = writeln!(out, "  e{} -> e{};", self.semilattice.elements[lo], self.semilattice.elements[hi]);
        }
        out.push_str("}\n");
        for c in &self.components {
            out.push_str(&nil_poset_dot(s, c.idempotent, &c.nil_poset));
        }
        out
    }
}

fn nil_node_name(s: &CayleySemigroup, p: &NilPoset, i: usize) -> String {
    match p.nodes[i] {
        NilNode::Zero => "0".to_string(),
        NilNode::Element(x) => s.name(x),
    }
}

pub fn nil_poset_dot(s: &CayleySemigroup, e: usize, p: &NilPoset) -> String {
    let mut out = format!("digraph nil_{e} {{\n  rankdir=BT;\n");
    for layer in &p.layers {
        let ids: Vec<String> = layer.iter().map(|i| format!("n{i}")).collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", ids.join("; "));
    }
    for i in 0..p.nodes.len() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", nil_node_name(s, p, i));
    }
    for &(lo, hi) in &p.covers {
        let _ = writeln!(out, "  n{lo} -> n{hi};");
    }
    out.push_str("}\n");
    out
}
