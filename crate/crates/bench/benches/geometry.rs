//! Point counts, crystal operators and semicanonical elements.

use criterion::{criterion_group, criterion_main, Criterion};
use higgs_bench::{bench_config, component, word};
use higgs_core::euler::{chi_word, qcount_word};
use higgs_core::field::GaloisField;
use higgs_core::loopcrystal::{e_k, DEFAULT_SEARCH_RADIUS};
use higgs_core::rng::{stream, Sampling};
use higgs_core::semicanonical::semican_torsion;
use std::hint::black_box;

fn point_counts(c: &mut Criterion) {
    let z = component("V=[1];L=[1]");
    let w = word("L1 T1");
    let field = GaloisField::new(7).unwrap();
    let pair = z.sample(&field, &mut stream(3, &[])).unwrap();
    let budget = bench_config().budget;
    c.bench_function("qcount L1 T1 over F_7", |b| b.iter(|| qcount_word(black_box(&w), &pair, &budget).unwrap()));
    let cfg = bench_config();
    c.bench_function("chi T1 T1 on (1,1)", |b| {
        b.iter(|| chi_word(black_box(&word("T1 T1")), &component("V=[];L=[1,1]"), &cfg).unwrap())
    });
}

fn crystal(c: &mut Criterion) {
    let z = component("V=[0,-1];L=[1]");
    let s = Sampling::new(2, 1);
    c.bench_function("e_0 on ([0,-1],(1))", |b| b.iter(|| e_k(black_box(&z), 0, DEFAULT_SEARCH_RADIUS, &s).unwrap()));
}

fn semicanonical(c: &mut Criterion) {
    let mut g = c.benchmark_group("semicanonical");
    g.sample_size(10);
    g.bench_function("torsion basis d=3", |b| b.iter(|| semican_torsion(black_box(3), &bench_config()).unwrap()));
    g.finish();
}

criterion_group!(benches, point_counts, crystal, semicanonical);
criterion_main!(benches);
