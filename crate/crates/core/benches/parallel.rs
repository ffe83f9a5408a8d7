//! Compare the sequential and rayon trial runners on the same sweep.
//!
//! Run with `cargo bench` (parallel path included by default) or
//! `cargo bench --no-default-features` for the sequential path alone.

use criterion::{criterion_group, criterion_main, Criterion};
use relaymon::experiment::run_records_serial;
use relaymon::parse_config;

fn bench_config(trials: u64) -> relaymon::ExperimentConfig {
    let trials = trials.to_string();
    parse_config([
        "relaymon",
        "sweep-power",
        "--p-dbm-min",
        "20",
        "--p-dbm-max",
        "40",
        "--p-dbm-step",
        "10",
        "--trials",
        trials.as_str(),
    ])
    .unwrap()
}

fn trial_runners(c: &mut Criterion) {
    let cfg = bench_config(256);
    let mut group = c.benchmark_group("sweep_3x256x4");
    group.bench_function("serial", |b| b.iter(|| run_records_serial(&cfg)));
    #[cfg(feature = "parallel")]
    group.bench_function("parallel", |b| {
        b.iter(|| relaymon::experiment::run_records_parallel(&cfg))
    });
    group.finish();
}

criterion_group!(benches, trial_runners);
criterion_main!(benches);
