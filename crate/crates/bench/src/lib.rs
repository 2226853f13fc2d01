//! Fixed inputs shared by the benchmarks.

use commsemi::abelian::IntMatrix;
use commsemi::closure::ImplicationFamily;
use commsemi::rewriting::Presentation;
use commsemi::RuleSystem;

pub fn rule_system(text: &str) -> RuleSystem {
    Presentation::parse(text).expect("fixture parses").orient().expect("fixture orients")
}

pub fn rf2() -> RuleSystem {
    rule_system("gens: a b\nrel: b^4 = b^2\nrel: a^3 = b^2\nrel: a^4 = a\n")
}

pub fn rf3() -> RuleSystem {
    rule_system(
        "gens: a b c z\nrel: z^2 = z\nrel: a z = z\nrel: b z = z\nrel: c z = z\n\
         rel: a^3 = z\nrel: b^4 = z\nrel: c^5 = z\nrel: a^2 b^2 c^3 = z\n\
         rel: a c^4 = z\nrel: b^3 c^2 = z\nrel: a b^3 = z\n",
    )
}

pub fn m41() -> IntMatrix {
    IntMatrix::from_rows(&[vec![60, -112, 94], vec![56, -108, 92], vec![84, -160, 136]]).expect("3x3")
}

/// A Hilbert-like matrix whose entries stay small enough for i64.
pub fn dense_matrix(n: usize) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| ((i * 7 + j * 3) % 11) as i64 - 5).collect()).collect();
    IntMatrix::from_rows(&rows).expect("square")
}

/// Chain implications x_i -> x_{i+1} plus pairwise premises, on k elements.
pub fn implication_family(k: usize) -> ImplicationFamily {
    let names: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
    let mut text = format!("base: {}\n", names.join(" "));
    for i in (0..k.saturating_sub(2)).step_by(3) {
        text.push_str(&format!("imp: {} {} -> {}\n", names[i], names[i + 1], names[i + 2]));
        text.push_str(&format!("imp: {} -> {}\n", names[i + 2], names[i]));
    }
    ImplicationFamily::parse(&text).expect("fixture parses")
}
