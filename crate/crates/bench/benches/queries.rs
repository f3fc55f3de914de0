use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cutree::{build_gusfield, make_exact_oracle, preprocess_query_ds, report_min_cut_edges};
use cutree_bench::{sparse, SIZES};

fn queries(c: &mut Criterion) {
    let mut group = c.benchmark_group("query");
    for n in SIZES {
        let g = sparse(n);
        let t = build_gusfield(&g, &make_exact_oracle(&g)).unwrap();
        group.bench_with_input(BenchmarkId::new("preprocess", n), &t, |b, t| {
            b.iter(|| preprocess_query_ds(&g, black_box(t), false).unwrap())
        });
        let ds = preprocess_query_ds(&g, &t, false).unwrap();
        group.bench_with_input(BenchmarkId::new("report-edges", n), &ds, |b, ds| {
            b.iter(|| {
                for s in 1..n {
                    black_box(report_min_cut_edges(ds, 0, s).unwrap());
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, queries);
criterion_main!(benches);
