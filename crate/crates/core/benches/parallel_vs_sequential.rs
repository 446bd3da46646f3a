//! Compares the rayon-backed trial loops against the sequential fallback.
//!
//! With `--no-default-features` both arms run the same sequential code;
//! the comparison is meaningful when the default `parallel` feature is on.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use monogrid::exec::Exec;
use monogrid::fixtures;
use monogrid::grid::GridDomain;
use monogrid::linesample::{line_sampling_experiment, LineWeights};
use monogrid::matching::max_violation_matching;
use monogrid::reduction::estimate_expected_distance;
use monogrid::stacks::{lex_improve, stack_bound_check, stack_profile};
use monogrid::trial_rng;

fn bench_reduction_trials(c: &mut Criterion) {
    let f = fixtures::anti_majority(50);
    let mut group = c.benchmark_group("reduction_trials");
    group.sample_size(10);
    for (label, exec) in [("parallel", Exec::Auto), ("sequential", Exec::Sequential)] {
        group.bench_with_input(BenchmarkId::new(label, "k8x200"), &exec, |b, &exec| {
            b.iter(|| estimate_expected_distance(&f, 8, 200, 1, exec).unwrap());
        });
    }
    group.finish();
}

fn bench_stack_bound_sweep(c: &mut Criterion) {
    let domain = GridDomain::cube(8, 2).unwrap();
    let run = |exec: Exec| {
        let violations: usize = monogrid::exec::map_indexed(exec, 200, |i| {
            let mut rng = trial_rng(2, i as u64);
            let f = fixtures::random_function(&domain, &mut rng);
            let m = max_violation_matching(&f).unwrap();
            let improved = lex_improve(&f, &m, 0);
            stack_bound_check(&stack_profile(&improved, 0), domain.len())
                .iter()
                .filter(|r| !r.ok)
                .count()
        })
        .into_iter()
        .sum();
        assert_eq!(violations, 0);
    };
    let mut group = c.benchmark_group("stack_bound_sweep");
    group.sample_size(10);
    for (label, exec) in [("parallel", Exec::Auto), ("sequential", Exec::Sequential)] {
        group.bench_with_input(BenchmarkId::new(label, "8x8x200"), &exec, |b, &exec| {
            b.iter(|| run(exec));
        });
    }
    group.finish();
}

fn bench_line_sampling(c: &mut Criterion) {
    let b_matching = fixtures::anti_majority_matching_b(30);
    let w = LineWeights::from_matching_line(
        &b_matching,
        &monogrid::stacks::LineId(vec![1]),
        0,
    )
    .unwrap();
    let mut group = c.benchmark_group("line_sampling_mc");
    group.sample_size(10);
    for (label, exec) in [("parallel", Exec::Auto), ("sequential", Exec::Sequential)] {
        group.bench_with_input(BenchmarkId::new(label, "k8x20000"), &exec, |b, &exec| {
            b.iter(|| line_sampling_experiment(&w, 8, 20_000, 3, exec));
        });
    }
    group.finish();
}

criterion_group!(benches, bench_reduction_trials, bench_stack_bound_sweep, bench_line_sampling);
criterion_main!(benches);
