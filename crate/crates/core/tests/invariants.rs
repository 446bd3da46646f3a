//! Cross-module invariants that tie the engines together.

use monogrid::exec::Exec;
use monogrid::fixtures::{
    self, centrist_label_real, centrist_restriction_monotone, VoterLabel,
};
use monogrid::grid::{is_monotone, restrict, BoolFunction, GridDomain, GridRestriction};
use monogrid::linesample::{line_sampling_exhaustive, LineWeights};
use monogrid::matching::{distance_to_monotonicity, max_violation_matching};
use monogrid::reduction::{
    estimate_expected_distance, reduction_trial, sample_restriction_continuous, ProductMeasure,
};
use monogrid::stacks::{find_improving_swap, lex_improve, line_decomposition};
use monogrid::tester::{levin_tester_grid, PairTester, TesterConfig};
use monogrid::{trial_rng, Frac};

#[test]
fn monotone_iff_distance_zero_over_all_functions_on_3x3() {
    let domain = GridDomain::cube(3, 2).unwrap();
    for code in 0u32..512 {
        let values: Vec<u8> = (0..9).map(|i| (code >> i & 1) as u8).collect();
        let f = BoolFunction::from_table(domain.clone(), values).unwrap();
        let mono = is_monotone(&f).unwrap();
        let eps = distance_to_monotonicity(&f).unwrap();
        assert_eq!(mono, eps == Frac::new(0, 1), "function code {code}");
    }
}

#[test]
fn lex_improve_reaches_swap_local_optimum_on_random_instances() {
    for trial in 0..30u64 {
        let domain = GridDomain::new(vec![6, 5]).unwrap();
        let f = fixtures::random_function(&domain, &mut trial_rng(100, trial));
        let m = max_violation_matching(&f).unwrap();
        let improved = lex_improve(&f, &m, 0);
        assert_eq!(improved.len(), m.len());
        improved.validate(&f).unwrap();
        assert!(find_improving_swap(&improved, 0).is_none(), "trial {trial}");
    }
}

#[test]
fn line_decomposition_parts_are_disjoint_and_complete() {
    let domain = GridDomain::new(vec![6, 4]).unwrap();
    for trial in 0..20u64 {
        let f = fixtures::random_function(&domain, &mut trial_rng(101, trial));
        let m = max_violation_matching(&f).unwrap();
        let decomposition = line_decomposition(&m, 0);
        let mut seen = std::collections::HashSet::new();
        let mut total = 0usize;
        for (line, part) in &decomposition {
            for (lower, upper) in part {
                assert_eq!(&monogrid::stacks::line_of(lower, 0), line);
                assert!(seen.insert((lower.clone(), upper.clone())));
                total += 1;
            }
        }
        assert_eq!(total, m.len());
    }
}

#[test]
fn weights_line_sampling_pipeline_on_real_matchings() {
    // the exhaustive experiment satisfies the sampling bound on matchings
    // from random functions over [6]x[4]; checked more broadly in the
    // acceptance suite, spot-checked here with the stack machinery
    let domain = GridDomain::new(vec![6, 4]).unwrap();
    let f = fixtures::random_function(&domain, &mut trial_rng(102, 0));
    let m = lex_improve(&f, &max_violation_matching(&f).unwrap(), 0);
    for line in line_decomposition(&m, 0).keys() {
        let w = LineWeights::from_matching_line(&m, line, 0).unwrap();
        assert_eq!(
            w.total_minus() as usize,
            line_decomposition(&m, 0).get(line).map_or(0, |p| p.len())
        );
        for k in [2u64, 4] {
            let report = line_sampling_exhaustive(&w, k).unwrap();
            assert!(report.mean_nu >= report.bound - 1e-9);
        }
    }
}

#[test]
fn centrist_restriction_distance_zero_iff_predicate_monotone() {
    // d = 8 keeps the restricted cube small enough to measure exactly
    let d = 8usize;
    let m = 2usize;
    let f = fixtures::centrist_discrete(d, m).unwrap();
    let n = f.domain().dims()[0];
    for trial in 0..40u64 {
        let mut rng = trial_rng(103, trial);
        let spec = monogrid::reduction::sample_restriction(f.domain(), 2, &mut rng);
        let labels: Vec<Vec<VoterLabel>> = spec
            .samples()
            .iter()
            .map(|dim| {
                dim.iter().map(|&v| fixtures::centrist_label_coord(v, n, m)).collect()
            })
            .collect();
        let restricted = restrict(&f, &spec).unwrap().to_dense().unwrap();
        let eps = distance_to_monotonicity(&restricted).unwrap();
        assert_eq!(
            centrist_restriction_monotone(&labels),
            eps == Frac::new(0, 1),
            "trial {trial}"
        );
    }
}

#[test]
fn centrist_reduction_trials_are_mostly_zero_at_small_k() {
    // continuous centrist at d = 40: k = 2 restrictions are monotone with
    // probability > 1 - 4k^2/d = 0.6
    let d = 40usize;
    let mut monotone = 0;
    let trials = 2000;
    for trial in 0..trials {
        let mut rng = trial_rng(104, trial);
        let spec = sample_restriction_continuous(&ProductMeasure::uniform(d), 2, &mut rng).unwrap();
        let labels: Vec<Vec<VoterLabel>> = spec
            .samples()
            .iter()
            .map(|dim| dim.iter().map(|&u| centrist_label_real(u, d)).collect())
            .collect();
        if centrist_restriction_monotone(&labels) {
            monotone += 1;
        }
    }
    let frac = monotone as f64 / trials as f64;
    assert!(frac > 0.6, "monotone fraction {frac}");
}

#[test]
fn centrist_discrete_reduction_matches_bound_at_d100_scale() {
    // E[eps_T] <= Pr[non-monotone restriction] <= 4k^2/d = 0.16 at d=100
    let d = 100usize;
    let trials = 4000u64;
    let mut non_monotone = 0u64;
    for trial in 0..trials {
        let mut rng = trial_rng(105, trial);
        let spec = sample_restriction_continuous(&ProductMeasure::uniform(d), 2, &mut rng).unwrap();
        let labels: Vec<Vec<VoterLabel>> = spec
            .samples()
            .iter()
            .map(|dim| dim.iter().map(|&u| centrist_label_real(u, d)).collect())
            .collect();
        if !centrist_restriction_monotone(&labels) {
            non_monotone += 1;
        }
    }
    let frac = non_monotone as f64 / trials as f64;
    let margin = 3.0 * (0.16f64 * 0.84 / trials as f64).sqrt();
    assert!(frac <= 0.16 + margin, "non-monotone fraction {frac}");
}

#[test]
fn identity_flagged_reduction_gives_exact_distance() {
    let f = fixtures::anti_majority(20);
    let spec = GridRestriction::identity(f.domain());
    let g = restrict(&f, &spec).unwrap().to_dense().unwrap();
    assert_eq!(
        distance_to_monotonicity(&g).unwrap(),
        distance_to_monotonicity(&f).unwrap()
    );
}

#[test]
fn reduction_trials_of_monotone_functions_stay_zero() {
    let domain = GridDomain::cube(9, 2).unwrap();
    let f = fixtures::random_order_ideal(&domain, &mut trial_rng(106, 0));
    let est = estimate_expected_distance(&f, 3, 60, 107, Exec::Auto).unwrap();
    assert_eq!(est.mean, Frac::new(0, 1));
    assert_eq!(est.ci95, 0.0);
    let single = reduction_trial(&f, 4, &mut trial_rng(108, 0)).unwrap();
    assert_eq!(single, Frac::new(0, 1));
}

#[test]
fn tester_rejections_carry_original_domain_witnesses() {
    let f = fixtures::anti_majority(200);
    let mut rejected = 0;
    for seed in 0..10 {
        let config = TesterConfig::new(0.2, 2, seed).unwrap().with_k(32).unwrap();
        let verdict = levin_tester_grid(&f, &config, &PairTester::default()).unwrap();
        if verdict.is_reject() {
            rejected += 1;
            match verdict.witness {
                Some(monogrid::tester::Witness::Grid { lower, upper }) => {
                    assert!(f.domain().contains(&lower));
                    assert!(f.domain().contains(&upper));
                    assert!(f.eval(&lower) && !f.eval(&upper));
                }
                other => panic!("unexpected witness {other:?}"),
            }
        }
    }
    assert!(rejected >= 9, "only {rejected}/10 rejects on a far function");
}
