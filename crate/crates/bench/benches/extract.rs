use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use densub_bench::random_graph;
use densub_core::densest::densest_subgraph;
use densub_core::{extract_dense_subgraph, ExtractOptions, Ratio};

fn bench_extract(c: &mut Criterion) {
    let mut group = c.benchmark_group("extract");
    group.sample_size(10);
    for (n, d) in [(500, 8.0), (2000, 16.0)] {
        let g = random_graph(n, d, 7);
        let id = format!("n{n}_d{d}");
        group.bench_with_input(BenchmarkId::new("densest_flow", &id), &g, |bench, g| bench.iter(|| densest_subgraph(g)));
        let baseline = ExtractOptions { pipeline: false, ..Default::default() };
        group.bench_with_input(BenchmarkId::new("baselines", &id), &g, |bench, g| {
            bench.iter(|| extract_dense_subgraph(g, Ratio::from_integer(3), &baseline).unwrap())
        });
        let full = ExtractOptions { census_limit: 200_000, ..Default::default() };
        group.bench_with_input(BenchmarkId::new("full", &id), &g, |bench, g| {
            bench.iter(|| extract_dense_subgraph(g, Ratio::from_integer(3), &full).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_extract);
criterion_main!(benches);
