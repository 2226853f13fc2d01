//! Words of the free commutative semigroup F_k, stored as exponent vectors.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::parse::{is_identifier, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("dimension mismatch: {left} vs {right} generators")]
    Dimension { left: usize, right: usize },
    #[error("the empty word is not an element of F_k")]
    Empty,
    #[error("at least one generator is required")]
    NoGenerators,
    #[error("exponent overflow")]
    Overflow,
}

/// A non-empty word `a_1^{e_1} ... a_k^{e_k}`.
///
/// `Ord` is the military order (length first, then lexicographic with
/// generator 1 first). Words over different alphabets compare by `k` first,
/// which only matters for heterogeneous collections.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Word {
    exps: Vec<u32>,
}

/// A word of F_k with the empty word adjoined (the identity of F_k^1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct AugmentedWord {
    exps: Vec<u32>,
}

fn check_dim(a: &[u32], b: &[u32]) -> Result<(), WordError> {
    if a.len() == b.len() {
        Ok(())
    } else {
        Err(WordError::Dimension { left: a.len(), right: b.len() })
    }
}

fn add_exps(a: &[u32], b: &[u32]) -> Result<Vec<u32>, WordError> {
    check_dim(a, b)?;
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_add(*y).ok_or(WordError::Overflow))
        .collect()
}

impl Word {
    pub fn new(exps: Vec<u32>) -> Result<Word, WordError> {
        if exps.is_empty() {
            return Err(WordError::NoGenerators);
        }
        if exps.iter().all(|&e| e == 0) {
            return Err(WordError::Empty);
        }
        Ok(Word { exps })
    }

    /// The generator `a_i^e` in F_k.
    pub fn power(k: usize, i: usize, e: u32) -> Result<Word, WordError> {
        if i >= k {
            return Err(WordError::Dimension { left: k, right: i + 1 });
        }
        let mut exps = vec![0; k];
        exps[i] = e;
        Word::new(exps)
    }

    pub fn generator(k: usize, i: usize) -> Result<Word, WordError> {
        Word::power(k, i, 1)
    }

    pub fn k(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn into_exponents(self) -> Vec<u32> {
        self.exps
    }

    /// Length |w|, the sum of exponents.
    pub fn len(&self) -> u64 {
        self.exps.iter().map(|&e| u64::from(e)).sum()
    }

    /// Always false: the empty word is not a `Word`.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Indices of generators occurring in the word.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    pub fn shares_support(&self, other: &Word) -> bool {
        self.exps.iter().zip(&other.exps).any(|(&a, &b)| a > 0 && b > 0)
    }

    pub fn mul(&self, other: &Word) -> Result<Word, WordError> {
        Ok(Word { exps: add_exps(&self.exps, &other.exps)? })
    }

    /// Componentwise order: `self` divides `other`.
    pub fn divides(&self, other: &Word) -> Result<bool, WordError> {
        check_dim(&self.exps, &other.exps)?;
        Ok(divides_exps(&self.exps, &other.exps))
    }

    pub fn lcm(&self, other: &Word) -> Result<Word, WordError> {
        check_dim(&self.exps, &other.exps)?;
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect();
        Ok(Word { exps })
    }

    pub fn military_cmp(&self, other: &Word) -> Result<Ordering, WordError> {
        check_dim(&self.exps, &other.exps)?;
        Ok(military(&self.exps, &other.exps))
    }

    /// `other / self` when `self` divides `other`.
    pub fn cofactor_in(&self, other: &Word) -> Result<Option<AugmentedWord>, WordError> {
        if !self.divides(other)? {
            return Ok(None);
        }
        let exps = other.exps.iter().zip(&self.exps).map(|(w, d)| w - d).collect();
        Ok(Some(AugmentedWord { exps }))
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { exps: &self.exps, names: Some(names) }
    }

    /// Parse `a^2 b c^3` (juxtaposed single-name tokens such as `ab^2` are
    /// accepted too when the names allow an unambiguous split).
    pub fn parse(text: &str, names: &[String]) -> Result<Word, ParseError> {
        let exps = parse_exps(text, names)?;
        Word::new(exps).map_err(|e| ParseError::new(format!("`{}`: {e}", text.trim())))
    }
}

impl AugmentedWord {
    pub fn identity(k: usize) -> AugmentedWord {
        AugmentedWord { exps: vec![0; k] }
    }

    pub fn new(exps: Vec<u32>) -> AugmentedWord {
        AugmentedWord { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn len(&self) -> u64 {
        self.exps.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    /// `self · w`, which is always a genuine word.
    pub fn mul_word(&self, w: &Word) -> Result<Word, WordError> {
        Ok(Word { exps: add_exps(&self.exps, &w.exps)? })
    }

    pub fn to_word(&self) -> Option<Word> {
        Word::new(self.exps.clone()).ok()
    }
}

impl From<Word> for AugmentedWord {
    fn from(w: Word) -> Self {
        AugmentedWord { exps: w.exps }
    }
}

pub(crate) fn divides_exps(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub(crate) fn military(a: &[u32], b: &[u32]) -> Ordering {
    let la: u64 = a.iter().map(|&e| u64::from(e)).sum();
    let lb: u64 = b.iter().map(|&e| u64::from(e)).sum();
    // At equal length, a larger exponent on the earliest generator comes first.
    la.cmp(&lb).then_with(|| b.cmp(a))
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.k().cmp(&other.k()).then_with(|| military(&self.exps, &other.exps))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `a, b, ..., z` for up to 26 generators, otherwise `x1, x2, ...`.
pub fn default_names(k: usize) -> Vec<String> {
    if k <= 26 {
        (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (1..=k).map(|i| format!("x{i}")).collect()
    }
}

pub struct WordDisplay<'a> {
    exps: &'a [u32],
    names: Option<&'a [String]>,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let defaults;
        let names = match self.names {
            Some(n) if n.len() == self.exps.len() => n,
            _ => {
                defaults = default_names(self.exps.len());
                &defaults[..]
            }
        };
        let mut first = true;
        for (name, &e) in names.iter().zip(self.exps) {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        WordDisplay { exps: &self.exps, names: None }.fmt(f)
    }
}

impl fmt::Display for AugmentedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        WordDisplay { exps: &self.exps, names: None }.fmt(f)
    }
}

fn parse_exps(text: &str, names: &[String]) -> Result<Vec<u32>, ParseError> {
    if names.is_empty() {
        return Err(ParseError::new("no generators declared"));
    }
    let mut exps = vec![0u32; names.len()];
    for tok in text.split_whitespace() {
        parse_token(tok, names, &mut exps)?;
    }
    Ok(exps)
}

fn parse_token(tok: &str, names: &[String], exps: &mut [u32]) -> Result<(), ParseError> {
    let mut rest = tok;
    while !rest.is_empty() {
        // Longest generator name that prefixes the remaining token.
        let (idx, name) = names
            .iter()
            .enumerate()
            .filter(|(_, n)| rest.starts_with(n.as_str()))
            .max_by_key(|(_, n)| n.len())
            .ok_or_else(|| ParseError::new(format!("unknown generator in `{tok}`")))?;
        rest = &rest[name.len()..];
        let mut e = 1u32;
        if let Some(after) = rest.strip_prefix('^') {
            let digits = after.len() - after.trim_start_matches(|c: char| c.is_ascii_digit()).len();
            if digits == 0 {
                return Err(ParseError::new(format!("missing exponent in `{tok}`")));
            }
            e = after[..digits]
                .parse()
                .map_err(|_| ParseError::new(format!("exponent too large in `{tok}`")))?;
            rest = &after[digits..];
        }
        exps[idx] = exps[idx]
            .checked_add(e)
            .ok_or_else(|| ParseError::new(format!("exponent overflow in `{tok}`")))?;
    }
    Ok(())
}

/// Validate a generator list as declared in a `gens:` line.
pub fn parse_generator_names(text: &str) -> Result<Vec<String>, ParseError> {
    let names: Vec<String> = text.split_whitespace().map(str::to_string).collect();
    if names.is_empty() {
        return Err(ParseError::new("at least one generator is required"));
    }
    for (i, n) in names.iter().enumerate() {
        if !is_identifier(n) {
            return Err(ParseError::new(format!("invalid generator name `{n}`")));
        }
        if names[..i].contains(n) {
            return Err(ParseError::new(format!("duplicate generator `{n}`")));
        }
    }
    Ok(names)
}

/// Number of words of length `n` in F_k: binomial(n+k-1, n).
pub fn count_words_of_length(n: u64, k: u64) -> Result<u64, WordError> {
    if k == 0 {
        return Err(WordError::NoGenerators);
    }
    if n == 0 {
        return Err(WordError::Empty);
    }
    let top = n.checked_add(k - 1).ok_or(WordError::Overflow)?;
    let r = n.min(k - 1);
    let mut c: u128 = 1;
    for i in 1..=u128::from(r) {
        let num = u128::from(top - r) + i;
        let g = gcd(c, i);
        c = (c / g).checked_mul(num / (i / g)).ok_or(WordError::Overflow)?;
    }
    u64::try_from(c).map_err(|_| WordError::Overflow)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// An axis-parallel box of exponent vectors, bounds inclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpBox {
    pub lower: Vec<u32>,
    pub upper: Vec<u32>,
}

impl ExpBox {
    pub fn contains(&self, exps: &[u32]) -> bool {
        exps.len() == self.lower.len()
            && exps.iter().zip(&self.lower).zip(&self.upper).all(|((e, l), u)| l <= e && e <= u)
    }

    /// Number of exponent vectors in the box (the zero vector included).
    pub fn volume(&self) -> Option<u64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .try_fold(1u64, |acc, (l, u)| acc.checked_mul(u64::from(u - l) + 1))
    }

    fn intersects(&self, other: &ExpBox) -> bool {
        (0..self.lower.len())
            .all(|i| self.lower[i].max(other.lower[i]) <= self.upper[i].min(other.upper[i]))
    }
}

/// Disjoint boxes covering a finite subset of N^k; as a subset of F_k the
/// zero vector is excluded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoxCover {
    pub k: usize,
    pub boxes: Vec<ExpBox>,
}

impl BoxCover {
    pub fn is_disjoint(&self) -> bool {
        self.boxes
            .iter()
            .enumerate()
            .all(|(i, a)| self.boxes[i + 1..].iter().all(|b| !a.intersects(b)))
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.boxes.iter().any(|b| b.contains(w.exponents()))
    }

    /// All non-empty words in the cover, box by box.
    pub fn words(&self) -> Vec<Word> {
        let mut out = Vec::new();
        for b in &self.boxes {
            let mut cur = b.lower.clone();
            'next: loop {
                if let Ok(w) = Word::new(cur.clone()) {
                    out.push(w);
                }
                // odometer step, last coordinate fastest
                for i in (0..self.k).rev() {
                    if cur[i] < b.upper[i] {
                        cur[i] += 1;
                        continue 'next;
                    }
                    cur[i] = b.lower[i];
                }
                break;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Complement {
    Finite { cover: BoxCover, cardinality: u64 },
    /// No generator is a pure power of this generator index, so all its
    /// powers lie outside the ideal.
    Infinite { unbounded_generator: usize },
}

impl Complement {
    pub fn cardinality(&self) -> Option<u64> {
        match self {
            Complement::Finite { cardinality, .. } => Some(*cardinality),
            Complement::Infinite { .. } => None,
        }
    }
}

/// The words of F_k divisible by none of `generators`, as a disjoint box cover.
pub fn ideal_complement(k: usize, generators: &[Word]) -> Result<Complement, WordError> {
    if k == 0 {
        return Err(WordError::NoGenerators);
    }
    for g in generators {
        check_dim(&vec![0; k], g.exponents())?;
    }
    let mut upper = vec![0u32; k];
    for (i, slot) in upper.iter_mut().enumerate() {
        let pure = generators
            .iter()
            .filter(|g| g.support().eq(std::iter::once(i)))
            .map(|g| g.exps[i])
            .min();
        match pure {
            Some(t) => *slot = t - 1,
            None => return Ok(Complement::Infinite { unbounded_generator: i }),
        }
    }
    let gens: Vec<&[u32]> = generators.iter().map(|g| g.exponents()).collect();
    let mut boxes = Vec::new();
    split_box(vec![0; k], upper, &gens, &mut boxes);
    let mut total: u64 = 0;
    for b in &boxes {
        total = total
            .checked_add(b.volume().ok_or(WordError::Overflow)?)
            .ok_or(WordError::Overflow)?;
    }
    // The zero vector is never in the ideal, so it lies in exactly one box.
    Ok(Complement::Finite { cover: BoxCover { k, boxes }, cardinality: total - 1 })
}

fn split_box(lower: Vec<u32>, upper: Vec<u32>, gens: &[&[u32]], out: &mut Vec<ExpBox>) {
    let relevant: Vec<&[u32]> =
        gens.iter().copied().filter(|g| divides_exps(g, &upper)).collect();
    if relevant.iter().any(|g| divides_exps(g, &lower)) {
        return;
    }
    let Some(g) = relevant.first() else {
        out.push(ExpBox { lower, upper });
        return;
    };
    // g <= upper but not g <= lower: cut along the first coordinate that differs.
    let i = (0..lower.len()).find(|&i| g[i] > lower[i]).expect("g exceeds lower somewhere");
    let mut below_upper = upper.clone();
    below_upper[i] = g[i] - 1;
    let mut above_lower = lower.clone();
    above_lower[i] = g[i];
    split_box(lower, below_upper, &relevant, out);
    split_box(above_lower, upper, &relevant, out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(e: &[u32]) -> Word {
        Word::new(e.to_vec()).unwrap()
    }

    #[test]
    fn military_examples() {
        assert_eq!(w(&[0, 2]).military_cmp(&w(&[3, 0])).unwrap(), Ordering::Less);
        assert_eq!(w(&[1, 1, 0]).military_cmp(&w(&[1, 0, 1])).unwrap(), Ordering::Less);
        let seq = [
            [1, 0, 0], [0, 1, 0], [0, 0, 1], [2, 0, 0], [1, 1, 0],
            [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2], [3, 0, 0],
        ];
        for pair in seq.windows(2) {
            assert!(w(&pair[0]) < w(&pair[1]), "{:?}", pair);
        }
    }

    #[test]
    fn basic_ops() {
        assert_eq!(w(&[1, 1, 0]).mul(&w(&[0, 1, 1])).unwrap(), w(&[1, 2, 1]));
        assert!(w(&[2, 2, 3]).divides(&w(&[2, 2, 4])).unwrap());
        assert!(!w(&[3, 0]).divides(&w(&[2, 5])).unwrap());
        assert_eq!(w(&[2, 1, 4]).lcm(&w(&[5, 0, 3])).unwrap(), w(&[5, 1, 4]));
        assert_eq!(
            w(&[1]).mul(&w(&[1, 0])),
            Err(WordError::Dimension { left: 1, right: 2 })
        );
        assert_eq!(Word::new(vec![0, 0]), Err(WordError::Empty));
        assert_eq!(w(&[u32::MAX]).mul(&w(&[1])), Err(WordError::Overflow));
    }

    #[test]
    fn word_counts() {
        assert_eq!(count_words_of_length(2, 3), Ok(6));
        assert_eq!(count_words_of_length(5, 2), Ok(6));
        assert_eq!(count_words_of_length(1, 7), Ok(7));
        assert_eq!(count_words_of_length(10, 1), Ok(1));
        assert_eq!(count_words_of_length(u64::MAX / 2, 40), Err(WordError::Overflow));
    }

    #[test]
    fn text_round_trip() {
        let names = default_names(3);
        let x = Word::parse("a^2 b c^3", &names).unwrap();
        assert_eq!(x, w(&[2, 1, 3]));
        assert_eq!(x.display(&names).to_string(), "a^2 b c^3");
        assert_eq!(Word::parse("ab^2", &names).unwrap(), w(&[1, 2, 0]));
        assert_eq!(Word::parse("a a", &names).unwrap(), w(&[2, 0, 0]));
        assert!(Word::parse("d", &names).is_err());
        assert!(Word::parse("a^", &names).is_err());
        assert!(Word::parse("", &names).is_err());
    }

    #[test]
    fn complement_examples() {
        let i1: Vec<Word> = [
            [3, 0, 0], [0, 4, 0], [0, 0, 5], [2, 2, 3], [1, 0, 4], [0, 3, 2], [1, 3, 0],
        ]
        .iter()
        .map(|e| w(e))
        .collect();
        let c = ideal_complement(3, &i1).unwrap();
        assert_eq!(c.cardinality(), Some(39));
        assert_eq!(ideal_complement(1, &[w(&[1])]).unwrap().cardinality(), Some(0));
        let c = ideal_complement(2, &[w(&[2, 0]), w(&[0, 3])]).unwrap();
        let Complement::Finite { cover, cardinality } = c else { panic!() };
        assert_eq!(cardinality, 5);
        let mut words = cover.words();
        words.sort();
        assert_eq!(words, vec![w(&[1, 0]), w(&[0, 1]), w(&[1, 1]), w(&[0, 2]), w(&[1, 2])]);
        assert_eq!(
            ideal_complement(2, &[w(&[2, 0]), w(&[1, 1])]).unwrap(),
            Complement::Infinite { unbounded_generator: 1 }
        );
    }

    fn arb_word(k: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(0u32..5, k)
            .prop_filter("non-empty", |e| e.iter().any(|&x| x > 0))
            .prop_map(|e| Word::new(e).unwrap())
    }

    proptest! {
        #[test]
        fn mul_assoc_comm((a, b, c) in (arb_word(3), arb_word(3), arb_word(3))) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(
                a.mul(&b).unwrap().mul(&c).unwrap(),
                a.mul(&b.mul(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn divides_antisymmetric((a, b) in (arb_word(3), arb_word(3))) {
            if a.divides(&b).unwrap() && b.divides(&a).unwrap() {
                prop_assert_eq!(&a, &b);
            }
            if a.divides(&b).unwrap() && a != b {
                prop_assert_eq!(a.military_cmp(&b).unwrap(), Ordering::Less);
            }
        }

        #[test]
        fn military_total((a, b, c) in (arb_word(3), arb_word(3), arb_word(3))) {
            let ab = a.military_cmp(&b).unwrap();
            prop_assert_eq!(ab.reverse(), b.military_cmp(&a).unwrap());
            prop_assert_eq!(ab == Ordering::Equal, a == b);
            if a < b && b < c {
                prop_assert!(a < c);
            }
        }

        #[test]
        fn complement_matches_brute_force(
            k in 1usize..4,
            raw in prop::collection::vec(prop::collection::vec(0u32..5, 3), 0..6),
        ) {
            let mut gens: Vec<Word> = (0..k).map(|i| Word::power(k, i, 2 + i as u32).unwrap()).collect();
            gens.extend(raw.iter().filter_map(|e| Word::new(e[..k].to_vec()).ok()));
            let Complement::Finite { cover, cardinality } = ideal_complement(k, &gens).unwrap() else {
                panic!("pure powers present");
            };
            prop_assert!(cover.is_disjoint());
            let mut expected = Vec::new();
            let mut cur = vec![0u32; k];
            loop {
                if let Ok(x) = Word::new(cur.clone()) {
                    if !gens.iter().any(|g| g.divides(&x).unwrap()) {
                        expected.push(x);
                    }
                }
                let mut i = 0;
                while i < k && cur[i] == 5 { cur[i] = 0; i += 1; }
                if i == k { break; }
                cur[i] += 1;
            }
            let mut got = cover.words();
            got.sort();
            expected.sort();
            prop_assert_eq!(cardinality as usize, expected.len());
            prop_assert_eq!(got, expected);
        }
    }
}
