use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sessub::exec::{map_cells, Execution};
use sessub::generator::{gen_related_pair, GenParams};
use sessub::harness::Algorithm;

fn agreement_batch(c: &mut Criterion) {
    let pairs: Vec<_> = (0..64)
        .map(|seed| gen_related_pair(&GenParams::sized(20, seed), 0.1))
        .collect();
    let mut group = c.benchmark_group("agreement");
    for exec in [Execution::Sequential, Execution::available()] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| {
                map_cells(&pairs, exec, |(t, u)| {
                    let v: Vec<bool> = Algorithm::ALL
                        .iter()
                        .filter(|&&a| a != Algorithm::Gh)
                        .map(|a| a.decide(t, u))
                        .collect();
                    v.windows(2).all(|w| w[0] == w[1])
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, agreement_batch);
criterion_main!(benches);
