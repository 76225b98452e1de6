use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use robocomm::harness::{run_experiment, ExperimentPlan, RangeGrid};
use robocomm::{ExecutionMode, Strategy};

fn plan() -> ExperimentPlan {
    ExperimentPlan {
        n: 12,
        m: 4,
        scenario_count: 8,
        seed: 7,
        range_grid: RangeGrid::FractionsOfCritical(vec![0.25, 1.0]),
        strategies: vec![Strategy::Ststc, Strategy::Greedy],
        ..ExperimentPlan::default()
    }
}

fn sweep(c: &mut Criterion) {
    let plan = plan();
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for (name, mode) in [("sequential", ExecutionMode::Sequential), ("parallel", ExecutionMode::Parallel)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| run_experiment(&plan, mode).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
