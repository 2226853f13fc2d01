//! Shared generators and brute-force oracles for the integration tests.
#![allow(dead_code)]

use commsemi::rewriting::{CompletionBudget, Presentation};
use commsemi::words::default_names;
use commsemi::zn::zn_semigroup;
use commsemi::{CayleySemigroup, CyclicType, RuleSystem, Word};
use rand::rngs::StdRng;
use rand::Rng;

pub fn presented(text: &str) -> CayleySemigroup {
    let sys = Presentation::parse(text).unwrap().orient().unwrap();
    let done = sys.complete(&CompletionBudget::default()).unwrap();
    CayleySemigroup::from_presentation(&done.system).unwrap()
}

/// Non-empty word with every exponent at most `e_max`.
pub fn random_word(rng: &mut StdRng, k: usize, e_max: u32) -> Word {
    loop {
        let exps: Vec<u32> = (0..k).map(|_| rng.random_range(0..=e_max)).collect();
        if exps.iter().any(|&e| e > 0) {
            return Word::new(exps).unwrap();
        }
    }
}

/// Up to `r_max` relations with distinct sides over at most `k_max` generators.
pub fn random_presentation(rng: &mut StdRng, k_max: usize, r_max: usize, e_max: u32) -> RuleSystem {
    let k = rng.random_range(1..=k_max);
    let r = rng.random_range(1..=r_max);
    let mut rels = Vec::new();
    while rels.len() < r {
        let (u, v) = (random_word(rng, k, e_max), random_word(rng, k, e_max));
        if u != v {
            rels.push((u, v));
        }
    }
    RuleSystem::orient(default_names(k), &rels).unwrap()
}

/// A finite presentation: every generator gets a relation x^{m+n} = x^m,
/// plus a few random ones.
pub fn random_finite_presented(rng: &mut StdRng) -> Option<CayleySemigroup> {
    let k = rng.random_range(1..=3);
    let mut rels = Vec::new();
    for i in 0..k {
        let (m, n) = (rng.random_range(1..=3), rng.random_range(1..=3));
        rels.push((Word::power(k, i, m + n).unwrap(), Word::power(k, i, m).unwrap()));
    }
    for _ in 0..rng.random_range(0..=2) {
        let (u, v) = (random_word(rng, k, 3), random_word(rng, k, 3));
        if u != v {
            rels.push((u, v));
        }
    }
    let sys = RuleSystem::orient(default_names(k), &rels).ok()?;
    let budget = CompletionBudget { max_rules: 500, max_word_length: 64 };
    let done = sys.complete(&budget).ok()?;
    if done.system.enumerate_normal_forms().ok()?.len() > 400 {
        return None;
    }
    CayleySemigroup::from_presentation(&done.system).ok()
}

/// Random instance from one of several families.
pub fn random_semigroup(rng: &mut StdRng) -> CayleySemigroup {
    loop {
        let s = match rng.random_range(0..4) {
            0 => zn_semigroup(rng.random_range(2..=60), 100).unwrap(),
            1 => CyclicType::new(rng.random_range(1..=6), rng.random_range(1..=8)).unwrap().semigroup("a"),
            2 => {
                let a = zn_semigroup(rng.random_range(2..=8), 100).unwrap();
                let b = CyclicType::new(rng.random_range(1..=4), rng.random_range(1..=4)).unwrap().semigroup("b");
                CayleySemigroup::direct_product(&[&a, &b], 1000).unwrap()
            }
            _ => match random_finite_presented(rng) {
                Some(s) => s,
                None => continue,
            },
        };
        return s;
    }
}

pub fn brute_associative_commutative(s: &CayleySemigroup) -> bool {
    let n = s.size();
    (0..n).all(|a| {
        (0..n).all(|b| {
            s.mul(a, b) == s.mul(b, a) && (0..n).all(|c| s.mul(s.mul(a, b), c) == s.mul(a, s.mul(b, c)))
        })
    })
}

/// Closed, has an identity, every element has an inverse.
pub fn brute_is_group(s: &CayleySemigroup, elems: &[usize]) -> bool {
    let closed = elems.iter().all(|&a| elems.iter().all(|&b| elems.contains(&s.mul(a, b))));
    let Some(&id) = elems.iter().find(|&&e| elems.iter().all(|&x| s.mul(e, x) == x)) else {
        return false;
    };
    closed && elems.iter().all(|&x| elems.iter().any(|&y| s.mul(x, y) == id))
}

/// Smallest ideal, as the intersection of all principal ideals x·S¹.
pub fn brute_kernel(s: &CayleySemigroup) -> Vec<usize> {
    let n = s.size();
    (0..n)
        .filter(|&z| (0..n).all(|x| z == x || (0..n).any(|y| s.mul(x, y) == z)))
        .collect()
}

/// e with x^k = e for some k.
pub fn brute_power_idempotent(s: &CayleySemigroup, x: usize) -> usize {
    let mut p = x;
    for _ in 0..=s.size() {
        if s.mul(p, p) == p {
            return p;
        }
        p = s.mul(p, x);
    }
    unreachable!("finite semigroups have idempotent powers")
}
