use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use semifree::classifier::enumerate::{enumerate_case_with, Execution};

fn bench(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_case");
    g.sample_size(10);
    for shape in [(0, 0), (0, 4), (4, 4)] {
        for exec in [Execution::Sequential, Execution::Parallel] {
            let id = BenchmarkId::new(format!("{exec:?}"), format!("{},{}", shape.0, shape.1));
            g.bench_with_input(id, &shape, |b, &s| b.iter(|| enumerate_case_with(s, 14, exec).unwrap()));
        }
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
