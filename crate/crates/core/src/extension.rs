//! Ideal extensions of a cyclic semigroup C_{m',n'} = <b> by C_{m,n} = <a>
//! with a zero adjoined, parametrized by ab = b^{k+1}.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::semigroup::{CayleySemigroup, CyclicType, SemigroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("k={k} is outside [0, {max}]")]
    KOutOfRange { k: u64, max: u64 },
    #[error("cyclic types need positive index and period")]
    BadType,
    #[error(
        "{q} is not realizable ({violated}): a^{i} and a^{i_shifted} name the same class, \
         but times b^{j} they give b^{left} and b^{right}"
    )]
    NotRealizable { q: Quintuple, violated: String, i: u64, i_shifted: u64, j: u64, left: u64, right: u64 },
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

/// (m, n, m', n'; k)
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Quintuple {
    pub m: u64,
    pub n: u64,
    pub m2: u64,
    pub n2: u64,
    pub k: u64,
}

impl fmt::Display for Quintuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{};{})", self.m, self.n, self.m2, self.n2, self.k)
    }
}

impl Quintuple {
    pub fn new(m: u64, n: u64, m2: u64, n2: u64, k: u64) -> Result<Quintuple, ExtensionError> {
        if m == 0 || n == 0 || m2 == 0 || n2 == 0 {
            return Err(ExtensionError::BadType);
        }
        let max = m2 + n2 - 1;
        if k > max {
            return Err(ExtensionError::KOutOfRange { k, max });
        }
        Ok(Quintuple { m, n, m2, n2, k })
    }

    pub fn upper(&self) -> CyclicType {
        CyclicType { index: self.m, period: self.n }
    }

    pub fn lower(&self) -> CyclicType {
        CyclicType { index: self.m2, period: self.n2 }
    }

    /// m' - 1 <= mk
    pub fn r1(&self) -> bool {
        u128::from(self.m2) - 1 <= u128::from(self.m) * u128::from(self.k)
    }

    /// n' | nk (shared by the ordinary and strong conditions)
    pub fn r2(&self) -> bool {
        (u128::from(self.n) * u128::from(self.k)) % u128::from(self.n2) == 0
    }

    /// m' <= mk
    pub fn sr1(&self) -> bool {
        u128::from(self.m2) <= u128::from(self.m) * u128::from(self.k)
    }
}

pub fn is_realizable(q: &Quintuple) -> bool {
    q.k == 0 || (q.r1() && q.r2())
}

pub fn is_strongly_realizable(q: &Quintuple) -> bool {
    q.k >= 1 && q.sr1() && q.r2()
}

/// An ideal extension with its two generators marked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    pub quintuple: Quintuple,
    pub semigroup: CayleySemigroup,
    /// id of a; a^i is `a + i - 1`
    pub a: usize,
    /// id of b; b^j is `b + j - 1`
    pub b: usize,
}

/// Class multiplication [a^i]*[b^j] = [b^{ik+j}], after checking that it
/// does not depend on the representative of [a^i].
pub fn realize(q: &Quintuple) -> Result<Realization, ExtensionError> {
    let (ta, tb) = (q.upper(), q.lower());
    let mix = |i: u64, j: u64| tb.canonical(u128::from(i) * u128::from(q.k) + u128::from(j));
    for i in q.m..q.m + q.n {
        for j in 1..=tb.order() {
            let (left, right) = (mix(i, j), mix(i + q.n, j));
            if left != right {
                let mut violated = Vec::new();
                if !q.r1() {
                    violated.push("m'-1 <= mk fails");
                }
                if !q.r2() {
                    violated.push("n' does not divide nk");
                }
                return Err(ExtensionError::NotRealizable {
                    q: *q,
                    violated: violated.join(", "),
                    i,
                    i_shifted: i + q.n,
                    j,
                    left,
                    right,
                });
            }
        }
    }
    let (na, nb) = (ta.order() as usize, tb.order() as usize);
    let elem = |x: usize| if x < na { (true, x as u64 + 1) } else { (false, (x - na) as u64 + 1) };
    let rows: Vec<Vec<usize>> = (0..na + nb)
        .map(|x| {
            (0..na + nb)
                .map(|y| match (elem(x), elem(y)) {
                    ((true, i), (true, j)) => ta.canonical(u128::from(i + j)) as usize - 1,
                    ((false, i), (false, j)) => na + tb.canonical(u128::from(i + j)) as usize - 1,
                    ((true, i), (false, j)) | ((false, j), (true, i)) => na + mix(i, j) as usize - 1,
                })
                .collect()
        })
        .collect();
    let names = (1..=na)
        .map(|i| if i == 1 { "a".to_string() } else { format!("a^{i}") })
        .chain((1..=nb).map(|j| if j == 1 { "b".to_string() } else { format!("b^{j}") }))
        .collect();
    let semigroup = CayleySemigroup::from_table(rows)?.with_names(names)?;
    Ok(Realization { quintuple: *q, semigroup, a: 0, b: na })
}

/// Check ⟨a,b⟩ = ⟨a⟩ ⊎ ⟨b⟩, the two cyclic types and ab = b^{k+1}.
pub fn verify_realizer(r: &Realization) -> Result<(), String> {
    let s = &r.semigroup;
    let q = &r.quintuple;
    let pa = s.powers(r.a);
    let pb = s.powers(r.b);
    if pa.iter().any(|x| pb.contains(x)) {
        return Err("<a> and <b> intersect".into());
    }
    if pa.len() + pb.len() != s.size() {
        return Err("<a> and <b> do not cover the semigroup".into());
    }
    if s.cyclic_type(r.a).kind != q.upper() {
        return Err(format!("<a> has type {:?}", s.cyclic_type(r.a).kind));
    }
    if s.cyclic_type(r.b).kind != q.lower() {
        return Err(format!("<b> has type {:?}", s.cyclic_type(r.b).kind));
    }
    let target = pb[q.lower().canonical(u128::from(q.k) + 1) as usize - 1];
    if s.mul(r.a, r.b) != target {
        return Err(format!("ab = {} instead of {}", s.name(s.mul(r.a, r.b)), s.name(target)));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KClass {
    pub k: u64,
    pub trivial: bool,
    pub ordinary: bool,
    pub strong: bool,
    /// Smaller k with the same realizer.
    pub duplicate_of: Option<u64>,
    /// The realizer is the trivial extension.
    pub trivial_realizer: bool,
}

/// Tag every k in [0, m'+n'-1].
pub fn classify(m: u64, n: u64, m2: u64, n2: u64) -> Result<Vec<KClass>, ExtensionError> {
    let top = m2 + n2 - 1;
    let mut out = Vec::new();
    for k in 0..=top {
        let q = Quintuple::new(m, n, m2, n2, k)?;
        out.push(KClass {
            k,
            trivial: k == 0,
            ordinary: is_realizable(&q),
            strong: is_strongly_realizable(&q),
            duplicate_of: None,
            trivial_realizer: k == 0,
        });
    }
    // b^{k+1} coincides only for k = m'-1 and k = m'+n'-1
    let first = (m2 - 1) as usize;
    if top as usize != first && out[first].ordinary && out[top as usize].ordinary {
        out[top as usize].duplicate_of = Some(m2 - 1);
        out[top as usize].trivial_realizer = m2 == 1;
    }
    Ok(out)
}
