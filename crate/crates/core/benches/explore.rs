use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nss_core::crystalgraph::explore;
use nss_core::nss::CartanData;
use nss_core::par::Execution;

fn bench_explore(c: &mut Criterion) {
    let mut group = c.benchmark_group("explore");
    group.sample_size(10);
    for (n, depth) in [(2usize, 6usize), (3, 5)] {
        let cartan = CartanData::new(n).unwrap();
        for exec in [Execution::Sequential, Execution::Parallel] {
            let id = BenchmarkId::new(format!("{exec:?}"), format!("n{n}_depth{depth}"));
            group.bench_with_input(id, &(n, depth), |b, &(n, depth)| {
                b.iter(|| explore(cartan, depth, n * (depth + 1), exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_explore);
criterion_main!(benches);
