//! The multiplicative semigroup (Z_n, ⊙): units, CRT, idempotents and the
//! Archimedean components, computed arithmetically.

use serde::Serialize;
use thiserror::Error;

use crate::abelian::{factorize, AbelianType};
use crate::semigroup::{CayleySemigroup, SemigroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZnError {
    #[error("modulus must be at least 2, got {0}")]
    Modulus(u64),
    #[error("table of size {n} exceeds the budget of {budget} elements")]
    TooLarge { n: u64, budget: u64 },
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

fn check(n: u64) -> Result<(), ZnError> {
    if n < 2 {
        Err(ZnError::Modulus(n))
    } else {
        Ok(())
    }
}

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    (u128::from(a) * u128::from(b) % u128::from(n)) as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Cayley table of ij mod n; element i is named by its residue.
pub fn zn_semigroup(n: u64, max_elements: u64) -> Result<CayleySemigroup, ZnError> {
    check(n)?;
    if n > max_elements {
        return Err(ZnError::TooLarge { n, budget: max_elements });
    }
    let size = n as usize;
    let mut table = Vec::with_capacity(size * size);
    for i in 0..n {
        table.extend((0..n).map(|j| mulmod(i, j, n) as usize));
    }
    let names = (0..n).map(|i| i.to_string()).collect();
    Ok(CayleySemigroup::trusted(size, table, Some(names)))
}

/// Extended Euclid; `None` iff gcd(x, n) > 1.
pub fn inverse_mod(x: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (i128::from(n), i128::from(x % n));
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(i128::from(n)) as u64)
}

pub fn units_zn(n: u64) -> Result<Vec<u64>, ZnError> {
    check(n)?;
    Ok((1..n).filter(|&x| gcd(x, n) == 1).collect())
}

pub fn phi(n: u64) -> u64 {
    factorize(n).iter().map(|&(p, g)| (p - 1) * p.pow(g - 1)).product()
}

/// Cyclic orders of the unit group of Z_{p^γ}.
fn prime_power_unit_orders(p: u64, g: u32) -> Vec<u64> {
    match (p, g) {
        (2, 1) => vec![],
        (2, 2) => vec![2],
        (2, _) => vec![2, 2u64.pow(g - 2)],
        _ => vec![(p - 1) * p.pow(g - 1)],
    }
}

pub fn unit_group_type(n: u64) -> Result<AbelianType, ZnError> {
    check(n)?;
    let orders: Vec<u64> =
        factorize(n).into_iter().flat_map(|(p, g)| prime_power_unit_orders(p, g)).collect();
    Ok(AbelianType::from_cyclic_orders(&orders))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrtContext {
    pub n: u64,
    pub primes: Vec<u64>,
    pub exponents: Vec<u32>,
    /// p_i^{γ_i}
    pub moduli: Vec<u64>,
    /// e_i ≡ 1 mod moduli[i], ≡ 0 mod the others
    pub basis: Vec<u64>,
}

pub fn crt_context(n: u64) -> Result<CrtContext, ZnError> {
    check(n)?;
    let f = factorize(n);
    let primes: Vec<u64> = f.iter().map(|t| t.0).collect();
    let exponents: Vec<u32> = f.iter().map(|t| t.1).collect();
    let moduli: Vec<u64> = f.iter().map(|&(p, g)| p.pow(g)).collect();
    let basis = moduli
        .iter()
        .map(|&q| {
            let cand = n / q;
            let inv = inverse_mod(cand % q, q).expect("coprime parts");
            mulmod(cand, inv, n)
        })
        .collect();
    Ok(CrtContext { n, primes, exponents, moduli, basis })
}

impl CrtContext {
    pub fn decompose(&self, x: u64) -> Vec<u64> {
        self.moduli.iter().map(|&q| x % q).collect()
    }

    pub fn recompose(&self, residues: &[u64]) -> u64 {
        residues
            .iter()
            .zip(&self.basis)
            .fold(0, |acc, (&a, &e)| (acc + mulmod(a, e, self.n)) % self.n)
    }

    /// 1 where x is a unit modulo p_i^{γ_i}, 0 where p_i divides x.
    pub fn signature(&self, x: u64) -> Vec<bool> {
        self.primes.iter().map(|&p| !x.is_multiple_of(p)).collect()
    }
}

/// All 2^t idempotents, ascending.
pub fn idempotents_zn(n: u64) -> Result<Vec<u64>, ZnError> {
    let ctx = crt_context(n)?;
    let t = ctx.moduli.len();
    let mut out: Vec<u64> = (0u64..1 << t)
        .map(|mask| {
            let bits: Vec<u64> = (0..t).map(|i| (mask >> i) & 1).collect();
            ctx.recompose(&bits)
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FactorKind {
    /// Units modulo p^γ.
    Group { group: AbelianType, size: u64 },
    /// The nilpotents p·Z_{p^γ}, of size p^{γ-1}.
    Nil { size: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentFactor {
    pub modulus: u64,
    #[serde(flatten)]
    pub kind: FactorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZnComponent {
    pub idempotent: u64,
    pub signature: Vec<bool>,
    pub size: u64,
    pub factors: Vec<ComponentFactor>,
    pub kernel_type: AbelianType,
    pub kernel_size: u64,
    pub is_group: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZnReport {
    pub n: u64,
    pub phi: u64,
    pub unit_group: AbelianType,
    pub crt: CrtContext,
    pub components: Vec<ZnComponent>,
}

/// One entry per idempotent, ascending. Element sets are listed only when
/// n <= `materialize_limit`.
pub fn component_report(n: u64, materialize_limit: u64) -> Result<ZnReport, ZnError> {
    let crt = crt_context(n)?;
    let mut components = Vec::new();
    for e in idempotents_zn(n)? {
        let signature = crt.signature(e);
        let mut factors = Vec::new();
        let mut unit_orders = Vec::new();
        for (i, &unit) in signature.iter().enumerate() {
            let (p, g, q) = (crt.primes[i], crt.exponents[i], crt.moduli[i]);
            let kind = if unit {
                unit_orders.extend(prime_power_unit_orders(p, g));
                FactorKind::Group {
                    group: AbelianType::from_cyclic_orders(&prime_power_unit_orders(p, g)),
                    size: phi(q),
                }
            } else {
                FactorKind::Nil { size: p.pow(g - 1) }
            };
            factors.push(ComponentFactor { modulus: q, kind });
        }
        let size = factors
            .iter()
            .map(|f| match f.kind {
                FactorKind::Group { size, .. } | FactorKind::Nil { size } => size,
            })
            .product();
        let kernel_type = AbelianType::from_cyclic_orders(&unit_orders);
        let kernel_size = kernel_type.order().expect("divides phi(n)");
        let (elements, kernel) = if n <= materialize_limit {
            let members: Vec<u64> = (0..n).filter(|&x| crt.signature(x) == signature).collect();
            let kernel = members.iter().copied().filter(|&x| mulmod(x, e, n) == x).collect();
            (Some(members), Some(kernel))
        } else {
            (None, None)
        };
        components.push(ZnComponent {
            idempotent: e,
            signature,
            size,
            factors,
            kernel_type,
            kernel_size,
            is_group: size == kernel_size,
            elements,
            kernel,
        });
    }
    Ok(ZnReport { n, phi: phi(n), unit_group: unit_group_type(n)?, crt, components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{order_statistics_type, OrderProfile};

    #[test]
    fn tables() {
        let s = zn_semigroup(18, 1000).unwrap();
        assert_eq!(s.size(), 18);
        assert_eq!(s.idempotents(), [0, 1, 9, 10]);
        let two = zn_semigroup(2, 10).unwrap();
        assert!(two.is_semilattice());
        let z16 = zn_semigroup(16, 100).unwrap();
        let evens: Vec<usize> = (0..16).step_by(2).collect();
        let (nil, _) = z16.restrict(&evens).unwrap();
        assert!(nil.is_nil());
        assert!(s.validate().is_ok());
        assert_eq!(zn_semigroup(1, 10), Err(ZnError::Modulus(1)));
        assert!(matches!(zn_semigroup(50, 10), Err(ZnError::TooLarge { .. })));
    }

    #[test]
    fn inverses() {
        assert_eq!(inverse_mod(30, 49), Some(18));
        assert_eq!(inverse_mod(1, 7), Some(1));
        assert_eq!(inverse_mod(6, 18), None);
        for n in 2..60u64 {
            for x in 0..n {
                match inverse_mod(x, n) {
                    Some(y) => assert_eq!(x * y % n, 1),
                    None => assert!(gcd(x, n) > 1),
                }
            }
        }
    }

    #[test]
    fn units_and_phi() {
        assert_eq!(units_zn(18).unwrap(), [1, 5, 7, 11, 13, 17]);
        assert_eq!(phi(18), 6);
        assert_eq!(units_zn(13).unwrap(), (1..13).collect::<Vec<_>>());
        assert_eq!(phi(3u64.pow(4)), 3u64.pow(4) - 3u64.pow(3));
        for n in 2..=300u64 {
            let s = zn_semigroup(n, 300).unwrap();
            let table: Vec<u64> = s.units().unwrap().into_iter().map(|u| u as u64).collect();
            // non-zerodivisors straight from the table
            let nzd: Vec<u64> = (1..n)
                .filter(|&x| (1..n).all(|y| s.mul(x as usize, y as usize) != 0))
                .collect();
            let arith = units_zn(n).unwrap();
            assert_eq!(arith, table, "n = {n}");
            assert_eq!(arith, nzd, "n = {n}");
            assert_eq!(arith.len() as u64, phi(n));
        }
    }

    #[test]
    fn unit_types() {
        let t504 = unit_group_type(504).unwrap();
        assert_eq!(t504, AbelianType::from_cyclic_orders(&[6, 2, 2, 6]));
        assert_eq!(t504.invariant_factors(), [2, 2, 6, 6]);
        assert_eq!(unit_group_type(16).unwrap().invariant_factors(), [2, 4]);
        assert_eq!(unit_group_type(49).unwrap().invariant_factors(), [42]);
        assert_eq!(unit_group_type(2).unwrap(), AbelianType::trivial());
        assert_eq!(unit_group_type(4).unwrap().invariant_factors(), [2]);
    }

    #[test]
    fn unit_types_against_tables() {
        for n in 2..=300u64 {
            let units = units_zn(n).unwrap();
            let orders = units.iter().map(|&u| {
                let mut x = u;
                let mut k = 1;
                while x != 1 {
                    x = x * u % n;
                    k += 1;
                }
                k
            });
            let t = order_statistics_type(&OrderProfile::from_orders(orders)).unwrap();
            assert_eq!(t, unit_group_type(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn crt() {
        let c = crt_context(60).unwrap();
        assert_eq!(c.moduli, [4, 3, 5]);
        let by_mod: Vec<(u64, u64)> = c.moduli.iter().copied().zip(c.basis.iter().copied()).collect();
        assert!(by_mod.contains(&(3, 40)) && by_mod.contains(&(4, 45)) && by_mod.contains(&(5, 36)));
        assert_eq!(c.decompose(29), [1, 2, 4]);
        for x in 0..60 {
            assert_eq!(c.recompose(&c.decompose(x)), x);
        }
    }

    #[test]
    fn idempotents() {
        let e = idempotents_zn(504).unwrap();
        assert_eq!(e.len(), 8);
        assert!(e.contains(&441));
        assert_eq!(idempotents_zn(343).unwrap(), [0, 1]);
        assert_eq!(idempotents_zn(18).unwrap(), [0, 1, 9, 10]);
        for n in 2..200u64 {
            let brute: Vec<u64> = (0..n).filter(|&x| x * x % n == x).collect();
            assert_eq!(idempotents_zn(n).unwrap(), brute);
        }
    }

    #[test]
    fn components() {
        let r = component_report(504, 1000).unwrap();
        let mut sizes: Vec<u64> = r.components.iter().map(|c| c.size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, [12, 12, 24, 24, 72, 72, 144, 144]);
        assert_eq!(sizes.iter().sum::<u64>(), 504);
        let a441 = r.components.iter().find(|c| c.idempotent == 441).unwrap();
        let els = a441.elements.as_ref().unwrap();
        assert_eq!(els.len(), 12);
        assert_eq!((els[0], els[1], *els.last().unwrap()), (21, 63, 483));
        assert_eq!(a441.kernel.as_deref(), Some(&[63, 189, 315, 441][..]));
        assert_eq!(a441.kernel_type.invariant_factors(), [2, 2]);
        for n in [30u64, 105, 2 * 3 * 5 * 7 * 11] {
            assert!(component_report(n, 0).unwrap().components.iter().all(|c| c.is_group));
        }
        assert!(!component_report(12, 0).unwrap().components.iter().all(|c| c.is_group));
        let big = component_report(1_000_000_007 * 4, 1000).unwrap();
        assert!(big.components.iter().all(|c| c.elements.is_none()));
    }
}
