use std::hint::black_box;

use commsemi::abelian::smith_normal_form;
use commsemi::closure::{closure_cover, rfsl};
use commsemi::cyclic::{count_strong_semilattices, exq, Diamond};
use commsemi::extension::{classify, realize, Quintuple};
use commsemi::rewriting::CompletionBudget;
use commsemi::structure::structure_report;
use commsemi::zn::{component_report, zn_semigroup};
use commsemi::{CayleySemigroup, CyclicType};
use commsemi_bench::{dense_matrix, implication_family, m41, rf2, rf3};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn completion(c: &mut Criterion) {
    let budget = CompletionBudget::default();
    let mut g = c.benchmark_group("completion");
    for (name, sys) in [("rf2", rf2()), ("rf3", rf3())] {
        g.bench_function(name, |b| b.iter(|| sys.complete(black_box(&budget)).unwrap()));
    }
    let done = rf3().complete(&budget).unwrap().system;
    g.bench_function("rf3_table", |b| b.iter(|| CayleySemigroup::from_presentation(black_box(&done)).unwrap()));
    g.bench_function("rf2_oracle_10", |b| b.iter(|| rf2().thue_oracle(black_box(10), 1_000_000).unwrap()));
    g.finish();
}

fn structure(c: &mut Criterion) {
    let mut g = c.benchmark_group("structure");
    for n in [60u64, 180, 504] {
        let s = zn_semigroup(n, 1000).unwrap();
        g.bench_with_input(BenchmarkId::new("zn_table", n), &s, |b, s| b.iter(|| structure_report(s).unwrap()));
        g.bench_with_input(BenchmarkId::new("zn_arith", n), &n, |b, &n| b.iter(|| component_report(n, 0).unwrap()));
    }
    g.finish();
}

fn abelian(c: &mut Criterion) {
    let mut g = c.benchmark_group("snf");
    g.bench_function("m41", |b| b.iter(|| smith_normal_form(black_box(&m41())).unwrap()));
    for n in [4usize, 8] {
        let a = dense_matrix(n);
        g.bench_with_input(BenchmarkId::new("dense", n), &a, |b, a| b.iter(|| smith_normal_form(a)));
    }
    g.finish();
}

fn cyclic(c: &mut Criterion) {
    let t = |m, n| CyclicType::new(m, n).unwrap();
    c.bench_function("exq_13_18", |b| b.iter(|| exq(black_box(t(3, 9)), black_box(t(13, 18)))));
    let d = Diamond { top: t(2, 4), left: t(4, 1), right: t(1, 6), bottom: t(5, 3) };
    c.bench_function("diamond_count", |b| b.iter(|| count_strong_semilattices(black_box(&d))));
    c.bench_function("classify_3_9_13_18", |b| b.iter(|| classify(3, 9, 13, 18).unwrap()));
    let q = Quintuple::new(3, 9, 13, 18, 6).unwrap();
    c.bench_function("realize_3_9_13_18_6", |b| b.iter(|| realize(black_box(&q)).unwrap()));
}

fn closure(c: &mut Criterion) {
    let mut g = c.benchmark_group("closure");
    for k in [12usize, 24, 36] {
        let f = implication_family(k);
        g.bench_with_input(BenchmarkId::new("cover", k), &f, |b, f| {
            b.iter(|| closure_cover(f.base.len(), &f.implications, 10_000_000).unwrap())
        });
    }
    let f = implication_family(9);
    g.bench_function("rfsl_9", |b| b.iter(|| rfsl(black_box(&f), 10_000).unwrap()));
    g.finish();
}

criterion_group!(benches, completion, structure, abelian, cyclic, closure);
criterion_main!(benches);
