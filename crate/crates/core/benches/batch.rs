use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use edge_erasure::batch::{run_over, run_trials, Execution};
use edge_erasure::generate::{graph_from_mask, random_metric, trial_seed, MetricKind};
use edge_erasure::oracles::naive_exposed;
use edge_erasure::weighted::{d_erasure_mst, d_erasure_run};
use edge_erasure::{is_exposed, Maintenance};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn exhaustive_exposure(c: &mut Criterion) {
    let masks: Vec<u64> = (0..1u64 << 15).collect();
    let mut group = c.benchmark_group("exposure_vs_oracle_n6");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                run_over(&masks, exec, |&mask| {
                    let g = graph_from_mask(6, mask);
                    let agree = g
                        .edges()
                        .all(|e| is_exposed(&g, e).unwrap() == naive_exposed(&g, e).unwrap());
                    agree
                })
            })
        });
    }
    group.finish();
}

fn mst_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("d_erasure_batch");
    group.sample_size(10);
    for n in [12usize, 30] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| {
                    run_trials(64, exec, |i| {
                        let m = random_metric(n, MetricKind::Generic, trial_seed(3, i as u64));
                        d_erasure_mst(&m).0
                    })
                })
            });
        }
    }
    group.finish();
}

fn maintenance(c: &mut Criterion) {
    let m = random_metric(60, MetricKind::Generic, 1);
    let mut group = c.benchmark_group("maintenance_n60");
    group.sample_size(10);
    for (name, mode) in [("incremental", Maintenance::Incremental), ("full", Maintenance::Full)] {
        group.bench_function(name, |b| b.iter(|| d_erasure_run(&m, mode)));
    }
    group.finish();
}

criterion_group!(benches, exhaustive_exposure, mst_batch, maintenance);
criterion_main!(benches);
