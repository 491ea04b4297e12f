//! Whole-scenario benchmarks: full convergence runs of each protocol on the
//! bundled eight-node topology shape and on random topologies.

use chainsig_core::sim::{random_connected_scenario, run_scenario, Protocol};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::time::Duration;

fn bench_convergence(c: &mut Criterion) {
    let mut group = c.benchmark_group("convergence_8_nodes");
    group
        .sample_size(10)
        .measurement_time(Duration::from_secs(10));
    for protocol in [Protocol::Bgp, Protocol::Sbgp, Protocol::Ssbgp] {
        let scenario = random_connected_scenario(8, protocol, 1);
        group.bench_with_input(
            BenchmarkId::from_parameter(protocol.as_str()),
            &scenario,
            |b, scenario| b.iter(|| run_scenario(scenario, 1).expect("scenario runs")),
        );
    }
    group.finish();
}

criterion_group!(benches, bench_convergence);
criterion_main!(benches);
