//! Normal ordering in the truncated loop algebra.

use criterion::{criterion_group, criterion_main, Criterion};
use higgs_bench::word;
use higgs_core::drinfeld::{change_of_basis_matrix, psi_word, verify_relation, Relation};
use higgs_core::KClass;
use std::hint::black_box;

fn generator_map(c: &mut Criterion) {
    let w = word("T2 L1 L-1 T1");
    c.bench_function("psi T2 L1 L-1 T1, floor -4", |b| b.iter(|| psi_word(black_box(&w), -4, 0)));
}

fn relations(c: &mut Criterion) {
    c.bench_function("line exchange n=2 l=-2, floor -8", |b| {
        b.iter(|| verify_relation(black_box(Relation::LineExchange { n: 2, l: -2 }), -8, 0).unwrap())
    });
}

fn basis(c: &mut Criterion) {
    c.bench_function("change of basis (2,0), floor -3", |b| {
        b.iter(|| change_of_basis_matrix(black_box(KClass::new(2, 0)), -3, 3))
    });
}

criterion_group!(benches, generator_map, relations, basis);
criterion_main!(benches);
