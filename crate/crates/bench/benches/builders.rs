use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cutree::ultrametric::flow_equivalent_via_ultrametric;
use cutree::{
    build_approx_ds, build_gomory_hu, build_gusfield, build_via_expansion, make_exact_oracle, make_noisy_oracle, perturb,
    Epsilon, ExactFactory, PairPolicy,
};
use cutree_bench::{sparse, SIZES};

fn builders(c: &mut Criterion) {
    let mut group = c.benchmark_group("build");
    group.sample_size(10);
    for n in SIZES {
        let g = sparse(n);
        let exact = make_exact_oracle(&g);
        group.bench_with_input(BenchmarkId::new("gomory-hu", n), &g, |b, g| {
            b.iter(|| build_gomory_hu(black_box(g), &ExactFactory, PairPolicy::default()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("gusfield", n), &g, |b, g| {
            b.iter(|| build_gusfield(black_box(g), &exact).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("expansion", n), &g, |b, g| {
            b.iter(|| build_via_expansion(black_box(g), &ExactFactory, 1).unwrap())
        });
        let eps = Epsilon::new(1, 4).unwrap();
        let noisy = make_noisy_oracle(&g, eps, 1);
        group.bench_with_input(BenchmarkId::new("approx", n), &g, |b, g| {
            b.iter(|| build_approx_ds(black_box(g), &noisy, eps, 1).unwrap())
        });
        let p = perturb(&g, 1).unwrap();
        let on_p = make_exact_oracle(&p);
        group.bench_with_input(BenchmarkId::new("ultrametric", n), &p, |b, p| {
            b.iter(|| flow_equivalent_via_ultrametric(black_box(p), &on_p, 1).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, builders);
criterion_main!(benches);
