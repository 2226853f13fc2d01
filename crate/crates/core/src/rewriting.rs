//! Oriented commutative rewriting systems over F_k.
//!
//! Rules point from the military-larger to the military-smaller side, so every
//! rewrite step strictly decreases a word in a well-order and reduction
//! always terminates.

use std::collections::HashMap;
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::Serialize;
use thiserror::Error;

use crate::parse::{content_lines, keyed, ParseError};
use crate::words::{self, divides_exps, ideal_complement, Complement, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("relation {index} has equal sides")]
    Degenerate { index: usize },
    #[error("rule {lhs} -> {rhs} is not oriented military-decreasing")]
    NotDecreasing { lhs: Word, rhs: Word },
    #[error("duplicate rule {lhs} -> {rhs}")]
    DuplicateRule { lhs: Word, rhs: Word },
    #[error("{names} generator names for words over {k} generators")]
    NameCount { names: usize, k: usize },
    #[error("completion budget exceeded: {reason}")]
    Budget { reason: String, partial: Box<RuleSystem> },
    #[error("infinitely many normal forms: no rule reduces powers of generator {generator}")]
    InfiniteNormalForms { generator: String },
    #[error("oracle budget exceeded: {words} words of length <= {bound}")]
    OracleBudget { words: u64, bound: u32 },
}

/// A rewrite rule `lhs -> rhs` with `rhs <_M lhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Word,
}

impl Rule {
    pub fn new(lhs: Word, rhs: Word) -> Result<Rule, RewriteError> {
        if rhs.military_cmp(&lhs)?.is_lt() {
            Ok(Rule { lhs, rhs })
        } else {
            Err(RewriteError::NotDecreasing { lhs, rhs })
        }
    }

    /// Orient an equation with the military-larger side on the left.
    pub fn orient(u: Word, v: Word) -> Result<Option<Rule>, RewriteError> {
        Ok(match u.military_cmp(&v)? {
            std::cmp::Ordering::Greater => Some(Rule { lhs: u, rhs: v }),
            std::cmp::Ordering::Less => Some(Rule { lhs: v, rhs: u }),
            std::cmp::Ordering::Equal => None,
        })
    }
}

/// Generator names plus an ordered list of rules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleSystem {
    names: Vec<String>,
    rules: Vec<Rule>,
}

/// The two one-step reducts of the lcm of two premises.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalPair {
    pub overlap: Word,
    pub left: Word,
    pub right: Word,
    /// Positions of the two rules in the system.
    pub rules: (usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletionBudget {
    pub max_rules: usize,
    pub max_word_length: u64,
}

impl Default for CompletionBudget {
    fn default() -> Self {
        CompletionBudget { max_rules: 10_000, max_word_length: 64 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletionStats {
    pub rounds: usize,
    pub rules_added: usize,
    pub rules_removed: usize,
    /// Upper bound on the word length needed to connect the two sides of any
    /// final rule by rewriting steps of the original system.
    pub witness_width: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Completion {
    pub system: RuleSystem,
    pub stats: CompletionStats,
}

impl RuleSystem {
    pub fn new(names: Vec<String>, rules: Vec<Rule>) -> Result<RuleSystem, RewriteError> {
        if names.is_empty() {
            return Err(WordError::NoGenerators.into());
        }
        for (i, r) in rules.iter().enumerate() {
            for w in [&r.lhs, &r.rhs] {
                if w.k() != names.len() {
                    return Err(RewriteError::NameCount { names: names.len(), k: w.k() });
                }
            }
            if !r.rhs.military_cmp(&r.lhs)?.is_lt() {
                return Err(RewriteError::NotDecreasing { lhs: r.lhs.clone(), rhs: r.rhs.clone() });
            }
            if rules[..i].contains(r) {
                return Err(RewriteError::DuplicateRule { lhs: r.lhs.clone(), rhs: r.rhs.clone() });
            }
        }
        Ok(RuleSystem { names, rules })
    }

    /// Orient each relation military-larger to military-smaller, dropping
    /// repeated rules.
    pub fn orient(names: Vec<String>, relations: &[(Word, Word)]) -> Result<RuleSystem, RewriteError> {
        let mut rules: Vec<Rule> = Vec::new();
        for (index, (u, v)) in relations.iter().enumerate() {
            let rule = Rule::orient(u.clone(), v.clone())?
                .ok_or(RewriteError::Degenerate { index })?;
            if !rules.contains(&rule) {
                rules.push(rule);
            }
        }
        RuleSystem::new(names, rules)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn k(&self) -> usize {
        self.names.len()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    fn check_word(&self, w: &Word) -> Result<(), RewriteError> {
        if w.k() == self.k() {
            Ok(())
        } else {
            Err(WordError::Dimension { left: self.k(), right: w.k() }.into())
        }
    }

    /// Repeatedly apply the first applicable rule in system order.
    pub fn reduce(&self, w: &Word) -> Result<Word, RewriteError> {
        self.check_word(w)?;
        Ok(reduce_with(&self.rules, w.exponents().to_vec(), |_| ()))
    }

    /// The full reduction chain starting at `w` (inclusive).
    pub fn reduction_trace(&self, w: &Word) -> Result<Vec<Word>, RewriteError> {
        self.check_word(w)?;
        let mut trace = vec![w.clone()];
        let nf = reduce_with(&self.rules, w.exponents().to_vec(), |exps| {
            trace.push(Word::new(exps.to_vec()).expect("reducts are non-empty"));
        });
        debug_assert_eq!(trace.last(), Some(&nf));
        Ok(trace)
    }

    pub fn is_irreducible(&self, w: &Word) -> bool {
        !self.rules.iter().any(|r| divides_exps(r.lhs.exponents(), w.exponents()))
    }

    /// One pair per unordered rule pair whose premises share a generator.
    pub fn critical_pairs(&self) -> Vec<CriticalPair> {
        let mut out = Vec::new();
        for i in 0..self.rules.len() {
            for j in i + 1..self.rules.len() {
                if let Some(p) = critical_pair(&self.rules, i, j) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// The first critical pair whose reducts do not join, if any.
    pub fn local_confluence_witness(&self) -> Option<CriticalPair> {
        self.critical_pairs().into_iter().find(|p| {
            reduce_with(&self.rules, p.left.exponents().to_vec(), |_| ())
                != reduce_with(&self.rules, p.right.exponents().to_vec(), |_| ())
        })
    }

    pub fn is_locally_confluent(&self) -> bool {
        self.local_confluence_witness().is_none()
    }

    pub fn complete(&self, budget: &CompletionBudget) -> Result<Completion, RewriteError> {
        Completer::new(self, *budget).run()
    }

    /// All irreducible words, military-sorted.
    pub fn enumerate_normal_forms(&self) -> Result<Vec<Word>, RewriteError> {
        let lhs: Vec<Word> = self.rules.iter().map(|r| r.lhs.clone()).collect();
        match ideal_complement(self.k(), &lhs)? {
            Complement::Finite { cover, .. } => {
                let mut words = cover.words();
                words.sort();
                Ok(words)
            }
            Complement::Infinite { unbounded_generator } => Err(RewriteError::InfiniteNormalForms {
                generator: self.names[unbounded_generator].clone(),
            }),
        }
    }

    /// Connected components of the rewriting digraph on all words of length
    /// at most `bound`. Rule arcs never lengthen a word, so the vertex set is
    /// closed under arcs.
    pub fn thue_oracle(&self, bound: u32, max_words: u64) -> Result<ThuePartition, RewriteError> {
        let mut total: u64 = 0;
        for n in 1..=u64::from(bound) {
            total = total.saturating_add(
                words::count_words_of_length(n, self.k() as u64).unwrap_or(u64::MAX),
            );
        }
        if total > max_words {
            return Err(RewriteError::OracleBudget { words: total, bound });
        }
        let mut all = Vec::with_capacity(total as usize);
        let mut cur = vec![0u32; self.k()];
        enumerate_up_to(&mut cur, 0, bound, &mut all);
        all.sort();
        let index: HashMap<Vec<u32>, usize> =
            all.iter().enumerate().map(|(i, w)| (w.exponents().to_vec(), i)).collect();
        let mut uf = UnionFind::<usize>::new(all.len());
        for (i, w) in all.iter().enumerate() {
            for r in &self.rules {
                if divides_exps(r.lhs.exponents(), w.exponents()) {
                    let next = apply(r, w.exponents()).expect("no overflow below the bound");
                    let j = index[&next];
                    uf.union(i, j);
                }
            }
        }
        let labels = uf.into_labeling();
        let mut renumber = HashMap::new();
        let class_of = labels
            .iter()
            .map(|l| {
                let next = renumber.len();
                *renumber.entry(*l).or_insert(next)
            })
            .collect();
        Ok(ThuePartition { index, words: all, class_of, classes: renumber.len() })
    }

    pub fn display_rule<'a>(&'a self, r: &'a Rule) -> impl fmt::Display + 'a {
        RuleDisplay { rule: r, names: &self.names }
    }
}

struct RuleDisplay<'a> {
    rule: &'a Rule,
    names: &'a [String],
}

impl fmt::Display for RuleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.rule.lhs.display(self.names), self.rule.rhs.display(self.names))
    }
}

impl fmt::Display for RuleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gens: {}", self.names.join(" "))?;
        for r in &self.rules {
            writeln!(f, "{}", self.display_rule(r))?;
        }
        Ok(())
    }
}

fn enumerate_up_to(cur: &mut Vec<u32>, pos: usize, budget: u32, out: &mut Vec<Word>) {
    if pos == cur.len() {
        if let Ok(w) = Word::new(cur.clone()) {
            out.push(w);
        }
        return;
    }
    for e in 0..=budget {
        cur[pos] = e;
        enumerate_up_to(cur, pos + 1, budget - e, out);
    }
    cur[pos] = 0;
}

/// Classes of the Thue congruence restricted to words of bounded length.
#[derive(Debug, Clone)]
pub struct ThuePartition {
    index: HashMap<Vec<u32>, usize>,
    /// All words up to the bound, military-sorted.
    pub words: Vec<Word>,
    /// Class id of each word; ids are numbered by first occurrence.
    pub class_of: Vec<usize>,
    pub classes: usize,
}

impl ThuePartition {
    pub fn class(&self, w: &Word) -> Option<usize> {
        self.index.get(w.exponents()).map(|&i| self.class_of[i])
    }

    pub fn members(&self) -> Vec<Vec<Word>> {
        let mut out = vec![Vec::new(); self.classes];
        for (w, &c) in self.words.iter().zip(&self.class_of) {
            out[c].push(w.clone());
        }
        out
    }
}

fn apply(r: &Rule, w: &[u32]) -> Option<Vec<u32>> {
    w.iter()
        .zip(r.lhs.exponents())
        .zip(r.rhs.exponents())
        .map(|((x, l), rr)| (x - l).checked_add(*rr))
        .collect()
}

/// Reduce with the first applicable rule at each step; `step` sees every
/// intermediate word after a rewrite.
fn reduce_with(rules: &[Rule], mut cur: Vec<u32>, mut step: impl FnMut(&[u32])) -> Word {
    while let Some(r) = rules.iter().find(|r| divides_exps(r.lhs.exponents(), &cur)) {
        cur = apply(r, &cur).expect("exponent overflow during reduction");
        step(&cur);
    }
    Word::new(cur).expect("reducts are non-empty")
}

fn critical_pair(rules: &[Rule], i: usize, j: usize) -> Option<CriticalPair> {
    let (a, b) = (&rules[i], &rules[j]);
    if !a.lhs.shares_support(&b.lhs) {
        return None;
    }
    let overlap = a.lhs.lcm(&b.lhs).ok()?;
    let left = Word::new(apply(a, overlap.exponents())?).ok()?;
    let right = Word::new(apply(b, overlap.exponents())?).ok()?;
    Some(CriticalPair { overlap, left, right, rules: (i, j) })
}

struct Entry {
    rule: Rule,
    width: u64,
}

struct Completer {
    names: Vec<String>,
    entries: Vec<Entry>,
    budget: CompletionBudget,
    stats: CompletionStats,
}

impl Completer {
    fn new(rs: &RuleSystem, budget: CompletionBudget) -> Self {
        let entries = rs
            .rules
            .iter()
            .map(|r| Entry { rule: r.clone(), width: r.lhs.len() })
            .collect();
        Completer {
            names: rs.names.clone(),
            entries,
            budget,
            stats: CompletionStats { rounds: 0, rules_added: 0, rules_removed: 0, witness_width: 0 },
        }
    }

    fn snapshot(&self) -> RuleSystem {
        RuleSystem {
            names: self.names.clone(),
            rules: self.entries.iter().map(|e| e.rule.clone()).collect(),
        }
    }

    fn rules(&self) -> Vec<Rule> {
        self.entries.iter().map(|e| e.rule.clone()).collect()
    }

    /// Reduce `w`, returning its normal form and the witness width of the
    /// derivation (each step lifts the used rule's width by the cofactor).
    fn reduce_tracked(&self, w: &[u32], start_width: u64) -> (Word, u64) {
        let mut cur = w.to_vec();
        let mut width = start_width.max(cur.iter().map(|&e| u64::from(e)).sum());
        while let Some(e) = self.entries.iter().find(|e| divides_exps(e.rule.lhs.exponents(), &cur)) {
            let len: u64 = cur.iter().map(|&x| u64::from(x)).sum();
            width = width.max(e.width + len - e.rule.lhs.len());
            cur = apply(&e.rule, &cur).expect("exponent overflow during reduction");
        }
        (Word::new(cur).expect("reducts are non-empty"), width)
    }

    /// Orient and append a joined pair, enforcing the budgets.
    fn push(&mut self, u: Word, v: Word, width: u64) -> Result<(), RewriteError> {
        let Some(rule) = Rule::orient(u, v)? else { return Ok(()) };
        if rule.lhs.len() > self.budget.max_word_length {
            return Err(RewriteError::Budget {
                reason: format!(
                    "rule premise of length {} exceeds {}",
                    rule.lhs.len(),
                    self.budget.max_word_length
                ),
                partial: Box::new(self.snapshot()),
            });
        }
        if self.entries.len() >= self.budget.max_rules {
            return Err(RewriteError::Budget {
                reason: format!("more than {} rules", self.budget.max_rules),
                partial: Box::new(self.snapshot()),
            });
        }
        self.entries.push(Entry { rule, width });
        self.stats.rules_added += 1;
        Ok(())
    }

    /// Drop rules whose premise is reducible by a newer rule (re-adding the
    /// joined pair when it does not collapse) and normalize right-hand sides.
    /// Redundancy among the input rules themselves is left alone.
    fn interreduce(&mut self) -> Result<(), RewriteError> {
        loop {
            let victim = (0..self.entries.len()).find(|&i| {
                let li = self.entries[i].rule.lhs.exponents();
                self.entries.iter().enumerate().any(|(j, e)| {
                    let lj = e.rule.lhs.exponents();
                    (j > i && divides_exps(lj, li)) || (j < i && lj == li)
                })
            });
            match victim {
                Some(i) => {
                    let old = self.entries.remove(i);
                    self.stats.rules_removed += 1;
                    let (l, wl) = self.reduce_tracked(old.rule.lhs.exponents(), old.width);
                    let (r, wr) = self.reduce_tracked(old.rule.rhs.exponents(), old.width);
                    if l != r {
                        self.push(l, r, wl.max(wr))?;
                    }
                }
                None => break,
            }
        }
        for i in 0..self.entries.len() {
            let rhs = self.entries[i].rule.rhs.exponents().to_vec();
            let (nf, w) = self.reduce_tracked(&rhs, self.entries[i].width);
            let e = &mut self.entries[i];
            e.rule.rhs = nf;
            e.width = w;
        }
        Ok(())
    }

    fn run(mut self) -> Result<Completion, RewriteError> {
        self.interreduce()?;
        loop {
            self.stats.rounds += 1;
            let rules = self.rules();
            let mut pairs = Vec::new();
            for i in 0..rules.len() {
                for j in i + 1..rules.len() {
                    if let Some(p) = critical_pair(&rules, i, j) {
                        pairs.push(p);
                    }
                }
            }
            pairs.sort_by(|a, b| a.overlap.cmp(&b.overlap).then(a.rules.cmp(&b.rules)));
            let mut added = false;
            for p in pairs {
                let (i, j) = p.rules;
                let len = p.overlap.len();
                let wi = self.entries[i].width + len - rules[i].lhs.len();
                let wj = self.entries[j].width + len - rules[j].lhs.len();
                let (l, wl) = self.reduce_tracked(p.left.exponents(), wi.max(len));
                let (r, wr) = self.reduce_tracked(p.right.exponents(), wj.max(len));
                if l != r {
                    self.push(l, r, wl.max(wr))?;
                    added = true;
                }
            }
            if !added {
                break;
            }
            self.interreduce()?;
        }
        self.stats.witness_width = self.entries.iter().map(|e| e.width).max().unwrap_or(0);
        Ok(Completion { system: self.snapshot(), stats: self.stats })
    }
}

/// A parsed `gens:` / `rel:` presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub names: Vec<String>,
    pub relations: Vec<(Word, Word)>,
}

impl Presentation {
    pub fn parse(text: &str) -> Result<Presentation, ParseError> {
        let mut names: Option<Vec<String>> = None;
        let mut relations = Vec::new();
        for (ln, line) in content_lines(text) {
            if let Some(rest) = keyed(line, "gens") {
                if names.is_some() {
                    return Err(ParseError::at(ln, "second `gens:` line"));
                }
                names = Some(words::parse_generator_names(rest).map_err(|e| e.with_line(ln))?);
            } else if let Some(rest) = keyed(line, "rel") {
                let names = names
                    .as_ref()
                    .ok_or_else(|| ParseError::at(ln, "`rel:` before `gens:`"))?;
                let (l, r) = rest
                    .split_once('=')
                    .ok_or_else(|| ParseError::at(ln, "relation needs `=`"))?;
                let u = Word::parse(l, names).map_err(|e| e.with_line(ln))?;
                let v = Word::parse(r, names).map_err(|e| e.with_line(ln))?;
                relations.push((u, v));
            } else {
                return Err(ParseError::at(ln, format!("unrecognized line `{line}`")));
            }
        }
        let names = names.ok_or_else(|| ParseError::new("missing `gens:` line"))?;
        Ok(Presentation { names, relations })
    }

    pub fn orient(&self) -> Result<RuleSystem, RewriteError> {
        RuleSystem::orient(self.names.clone(), &self.relations)
    }
}
