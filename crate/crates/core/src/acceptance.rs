//! End-to-end verification suite.
//!
//! Each criterion pins its parameters, tolerances, and a wall-clock cap in
//! code; the runner reports one outcome per criterion and treats a blown
//! cap as a failure rather than a hang. Criteria are exact where exactness
//! is affordable (oracle equivalences, exhaustive enumerations) and Monte
//! Carlo with explicit margins elsewhere. A fixed master seed keeps every
//! run reproducible.

use rand::Rng;
use std::time::Instant;

use crate::exec::{self, Exec};
use crate::fixtures::{self, VoterLabel};
use crate::grid::{BoolFunction, GridDomain};
use crate::linesample::{self, LineWeights};
use crate::matching::{
    brute_force_distance, distance_to_monotonicity, max_violation_matching,
    max_violation_matching_seeded,
};
use crate::reduction::{estimate_expected_distance, frac_to_f64};
use crate::stacks::{lex_improve, line_decomposition, stack_bound_check, stack_profile};
use crate::tester::{
    levin_tester_continuous, levin_tester_grid, nonadaptivity_audit, PairTester, TesterConfig,
};
use crate::{trial_rng, Frac};

/// Master seed for every randomized criterion.
pub const SUITE_SEED: u64 = 1;

/// Outcome of one criterion.
#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub cap_seconds: f64,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] {} ({:.2}s / cap {:.0}s) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.cap_seconds,
            self.detail
        )
    }
}

type CriterionFn = fn(Exec) -> Result<String, String>;

/// The criteria in suite order: (name, wall-clock cap in seconds, runner).
pub fn criteria() -> Vec<(&'static str, f64, CriterionFn)> {
    vec![
        ("distance_oracle_equivalence", 10.0, c1_distance_oracle_equivalence),
        ("anti_majority_exactness", 1.0, c2_anti_majority_exactness),
        ("hall_deficit_formula", 10.0, c3_hall_deficit_formula),
        ("stacks_mass_bound", 60.0, c4_stack_bound_empirical),
        ("figure_one_claims", 30.0, c5_figure_one_claims),
        ("line_sampling_bound", 60.0, c6_line_sampling_bound),
        ("lower_bound_centrist", 120.0, c7_lower_bound_centrist),
        ("domain_reduction_trend", 120.0, c8_domain_reduction_trend),
        ("variance_restriction", 60.0, c9_variance_restriction),
        ("tester_one_sidedness", 60.0, c10_tester_one_sidedness),
        ("tester_soundness", 120.0, c11_tester_soundness),
    ]
}

/// Runs every criterion whose name contains `filter` (all when `None`).
pub fn run_suite(filter: Option<&str>, exec: Exec) -> Vec<CriterionOutcome> {
    criteria()
        .into_iter()
        .filter(|(name, _, _)| filter.is_none_or(|f| name.contains(f)))
        .map(|(name, cap_seconds, run)| {
            let start = Instant::now();
            let result = run(exec);
            let seconds = start.elapsed().as_secs_f64();
            let (mut passed, detail) = match result {
                Ok(detail) => (true, detail),
                Err(detail) => (false, detail),
            };
            let detail = if seconds > cap_seconds {
                passed = false;
                format!("{detail}; exceeded the {cap_seconds:.0}s wall-clock cap")
            } else {
                detail
            };
            CriterionOutcome { name, passed, detail, seconds, cap_seconds }
        })
        .collect()
}

fn all_functions_on(dims: Vec<usize>) -> Vec<BoolFunction> {
    let domain = GridDomain::new(dims).unwrap();
    let n = domain.len();
    assert!(n < 32);
    (0u32..1 << n)
        .map(|code| {
            let values: Vec<u8> = (0..n).map(|i| (code >> i & 1) as u8).collect();
            BoolFunction::from_table(domain.clone(), values).unwrap()
        })
        .collect()
}

/// Matching-based distance equals brute-force nearest-monotone distance on
/// every function over [3]^2 and [2]^3, as exact rationals.
fn c1_distance_oracle_equivalence(exec: Exec) -> Result<String, String> {
    let mut checked = 0u64;
    for dims in [vec![3, 3], vec![2, 2, 2]] {
        let fns = all_functions_on(dims.clone());
        let failures: Vec<String> = exec::map_indexed(exec, fns.len(), |i| {
            let f = &fns[i];
            let by_matching = distance_to_monotonicity(f).map_err(|e| e.to_string())?;
            let by_enumeration = brute_force_distance(f).map_err(|e| e.to_string())?;
            if by_matching == by_enumeration {
                Ok(())
            } else {
                Err(format!(
                    "function {i} on {dims:?}: matching {by_matching} vs brute force {by_enumeration}"
                ))
            }
        })
        .into_iter()
        .filter_map(|r: Result<(), String>| r.err())
        .collect();
        if let Some(first) = failures.first() {
            return Err(format!("{} mismatches; first: {first}", failures.len()));
        }
        checked += fns.len() as u64;
    }
    Ok(format!("{checked} functions, exact rational equality"))
}

/// Anti-majority on [5]^2: distance 2/5; both reference matchings have
/// cardinality 10 with the stated stack profiles.
fn c2_anti_majority_exactness(_exec: Exec) -> Result<String, String> {
    let f = fixtures::anti_majority(5);
    let eps = distance_to_monotonicity(&f).map_err(|e| e.to_string())?;
    if eps != Frac::new(2, 5) {
        return Err(format!("distance {eps}, expected 2/5"));
    }
    let r = fixtures::anti_majority_matching_r(5);
    let b = fixtures::anti_majority_matching_b(5);
    r.validate(&f).map_err(|e| e.to_string())?;
    b.validate(&f).map_err(|e| e.to_string())?;
    if r.len() != 10 || b.len() != 10 {
        return Err(format!("cardinalities R={} B={}, expected 10", r.len(), b.len()));
    }
    let r_profile = stack_profile(&r, 0).lambda_vector();
    if r_profile != vec![1, 2, 3, 4] {
        return Err(format!("R stack profile {r_profile:?}, expected [1,2,3,4]"));
    }
    let b_max = stack_profile(&b, 0).max_stack();
    if b_max > 1 {
        return Err(format!("B max stack {b_max}, expected <= 1"));
    }
    Ok("eps = 2/5, |R| = |B| = 10, profiles {4,3,2,1} and all <= 1".into())
}

/// Hall-deficit closed form equals brute-force maximum weighted matching
/// on 1000 random weight instances.
fn c3_hall_deficit_formula(exec: Exec) -> Result<String, String> {
    let mismatches: usize = exec::map_indexed(exec, 1000, |i| {
        let mut rng = trial_rng(SUITE_SEED.wrapping_add(3000), i as u64);
        let n = rand::Rng::gen_range(&mut rng, 1..=8usize);
        let w_plus: Vec<u64> = (0..n).map(|_| rand::Rng::gen_range(&mut rng, 0..=3)).collect();
        let w_minus: Vec<u64> = (0..n).map(|_| rand::Rng::gen_range(&mut rng, 0..=3)).collect();
        let w = LineWeights::from_raw(w_plus, w_minus);
        let t_len = rand::Rng::gen_range(&mut rng, 1..=8usize);
        let t: Vec<usize> =
            (0..t_len).map(|_| rand::Rng::gen_range(&mut rng, 1..=n)).collect();
        (linesample::hall_matching_size(&w, &t) != linesample::brute_force_w_matching(&w, &t))
            as usize
    })
    .into_iter()
    .sum();
    if mismatches > 0 {
        return Err(format!("{mismatches}/1000 instances disagree with brute force"));
    }
    Ok("1000 random instances, exact equality with brute force".into())
}

/// After the lexicographic local search, the mass in stacks of size >=
/// lambda stays within 5|D|/sqrt(lambda) for every lambda, on 1000 random
/// functions over [8]^2 and 200 over [5]^3.
fn c4_stack_bound_empirical(exec: Exec) -> Result<String, String> {
    let mut violations = 0u64;
    let mut checked = 0u64;
    for (dims, trials, salt) in [(vec![8, 8], 1000u64, 4001u64), (vec![5, 5, 5], 200, 4002)] {
        let domain = GridDomain::new(dims.clone()).unwrap();
        let bad: u64 = exec::map_indexed(exec, trials as usize, |i| {
            let mut rng = trial_rng(SUITE_SEED.wrapping_add(salt), i as u64);
            let f = fixtures::random_function(&domain, &mut rng);
            let m = max_violation_matching(&f).expect("dense function");
            let improved = lex_improve(&f, &m, 0);
            let rows = stack_bound_check(&stack_profile(&improved, 0), domain.len());
            rows.iter().filter(|r| !r.ok).count() as u64
        })
        .into_iter()
        .sum();
        violations += bad;
        checked += trials;
    }
    if violations > 0 {
        return Err(format!("{violations} per-lambda violations over {checked} functions"));
    }
    Ok(format!("{checked} random functions, zero violations across all lambda"))
}

/// The stacked-blocks fixture: every maximum matching is perfect on the
/// 1-points and carries at least n/2 - 1 pairs in stacks of size >= 2.
fn c5_figure_one_claims(exec: Exec) -> Result<String, String> {
    for n in [4usize, 6, 8] {
        let f = fixtures::figure_one(n).map_err(|e| e.to_string())?;
        let ones = f.ones_count().map_err(|e| e.to_string())?;
        let failures: Vec<String> = exec::map_indexed(exec, 100, |i| {
            let mut rng = trial_rng(SUITE_SEED.wrapping_add(5000 + n as u64), i as u64);
            let m = max_violation_matching_seeded(&f, &mut rng).expect("dense function");
            if m.len() != ones {
                return Err(format!("n={n} run {i}: |M| = {} but {ones} 1-points", m.len()));
            }
            for (label, matching) in [("raw", m.clone()), ("improved", lex_improve(&f, &m, 0))] {
                let profile = stack_profile(&matching, 0);
                let in_big: usize =
                    profile.counts().values().filter(|&&c| c >= 2).sum();
                if in_big < n / 2 - 1 {
                    return Err(format!(
                        "n={n} run {i} ({label}): {in_big} pairs in stacks >= 2, need {}",
                        n / 2 - 1
                    ));
                }
            }
            Ok(())
        })
        .into_iter()
        .filter_map(|r| r.err())
        .collect();
        if let Some(first) = failures.first() {
            return Err(first.clone());
        }
    }
    Ok("n in {4,6,8} x 100 randomized runs: perfect matchings, big-stack mass as required".into())
}

/// Exhaustive line-sampling expectation stays above
/// (k/n)|M^(l)| - 3 lambda sqrt(k ln k) on every line of matchings from 50
/// random functions over [6]x[4], for k = 2..6.
fn c6_line_sampling_bound(exec: Exec) -> Result<String, String> {
    let domain = GridDomain::new(vec![6, 4]).unwrap();
    let failures: Vec<String> = exec::map_indexed(exec, 50, |i| {
        let mut rng = trial_rng(SUITE_SEED.wrapping_add(6000), i as u64);
        let f = fixtures::random_function(&domain, &mut rng);
        let m = max_violation_matching(&f).expect("dense function");
        for line in line_decomposition(&m, 0).keys() {
            let w = LineWeights::from_matching_line(&m, line, 0).map_err(|e| e.to_string())?;
            for k in 2..=6u64 {
                let report = linesample::line_sampling_exhaustive(&w, k)
                    .map_err(|e| e.to_string())?;
                if report.mean_nu < report.bound - 1e-9 {
                    return Err(format!(
                        "function {i} line {line:?} k={k}: mean {} below bound {}",
                        report.mean_nu, report.bound
                    ));
                }
            }
        }
        Ok(())
    })
    .into_iter()
    .filter_map(|r: Result<(), String>| r.err())
    .collect();
    if let Some(first) = failures.first() {
        return Err(first.clone());
    }
    Ok("50 functions x all lines x k in 2..6, exhaustive expectation above the bound".into())
}

/// Centrist restrictions at k=2 are monotone except with frequency at most
/// 4k^2/d (plus a 3-sigma binomial margin), and the small discrete
/// centrist has strictly positive exact distance.
fn c7_lower_bound_centrist(exec: Exec) -> Result<String, String> {
    let trials = 10_000usize;
    let mut details = Vec::new();
    for d in [16usize, 64, 256] {
        let non_monotone: u64 = exec::map_indexed(exec, trials, |i| {
            let mut rng = trial_rng(SUITE_SEED.wrapping_add(7000 + d as u64), i as u64);
            let labels: Vec<Vec<VoterLabel>> = (0..d)
                .map(|_| {
                    let mut pair = [rng.gen::<f64>(), rng.gen::<f64>()];
                    pair.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    pair.iter().map(|&u| fixtures::centrist_label_real(u, d)).collect()
                })
                .collect();
            (!fixtures::centrist_restriction_monotone(&labels)) as u64
        })
        .into_iter()
        .sum();
        let frac = non_monotone as f64 / trials as f64;
        let p = (16.0 / d as f64).min(1.0);
        let margin = 3.0 * (p * (1.0 - p) / trials as f64).sqrt();
        if frac > p + margin {
            return Err(format!(
                "d={d}: non-monotone fraction {frac:.4} above 4k^2/d = {p:.4} + {margin:.4}"
            ));
        }
        details.push(format!("d={d}: {frac:.4} <= {:.4}", p + margin));
    }
    let f = fixtures::centrist_discrete(3, 3).map_err(|e| e.to_string())?;
    let eps = distance_to_monotonicity(&f).map_err(|e| e.to_string())?;
    if eps <= Frac::new(0, 1) {
        return Err("discrete centrist (d=3, n=9) has zero distance".into());
    }
    details.push(format!("exact eps(d=3, n=9) = {eps} > 0"));
    Ok(details.join("; "))
}

/// Domain reduction trend on anti-majority [50]^2: estimated expected
/// restricted distance is nondecreasing in k within the 95% intervals, and
/// the k=32 estimate lands within 0.05 of the true distance 49/100.
fn c8_domain_reduction_trend(exec: Exec) -> Result<String, String> {
    let f = fixtures::anti_majority(50);
    let eps_f = distance_to_monotonicity(&f).map_err(|e| e.to_string())?;
    if eps_f != Frac::new(49, 100) {
        return Err(format!("exact distance {eps_f}, expected 49/100"));
    }
    let eps_f = frac_to_f64(eps_f);
    let ks = [2usize, 4, 8, 16, 32];
    let mut estimates = Vec::new();
    for (i, &k) in ks.iter().enumerate() {
        let est = estimate_expected_distance(
            &f,
            k,
            1000,
            SUITE_SEED.wrapping_add(8000 + i as u64),
            exec,
        )
        .map_err(|e| e.to_string())?;
        estimates.push(est);
    }
    for pair in estimates.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        if hi.mean_f64 < lo.mean_f64 - (lo.ci95 + hi.ci95) {
            return Err(format!(
                "mean at k={} ({:.4}) drops below k={} ({:.4}) beyond the CIs",
                hi.k, hi.mean_f64, lo.k, lo.mean_f64
            ));
        }
    }
    let last = estimates.last().unwrap();
    if (last.mean_f64 - eps_f).abs() > 0.05 {
        return Err(format!(
            "k=32 estimate {:.4} not within 0.05 of eps_f = {eps_f:.2}",
            last.mean_f64
        ));
    }
    let means: Vec<String> =
        estimates.iter().map(|e| format!("k={}: {:.4}", e.k, e.mean_f64)).collect();
    Ok(means.join(", "))
}

/// Exact variance restriction check over every function on [3]^2 and
/// [2]^3: the expected restricted variance is at least half the variance.
fn c9_variance_restriction(exec: Exec) -> Result<String, String> {
    let mut checked = 0u64;
    for dims in [vec![3, 3], vec![2, 2, 2]] {
        let fns = all_functions_on(dims.clone());
        let violations: usize = exec::map_indexed(exec, fns.len(), |i| {
            let report = fixtures::variance_experiment_exact(&fns[i]).expect("small domain");
            (!report.holds()) as usize
        })
        .into_iter()
        .sum();
        if violations > 0 {
            return Err(format!("{violations} violations on {dims:?}"));
        }
        checked += fns.len() as u64;
    }
    Ok(format!("{checked} functions, exact rational comparison, zero violations"))
}

/// One-sidedness: the outer tester accepts 1000 random monotone functions
/// with zero rejects, and the query set is invariant under value flips on
/// 100 seeds.
fn c10_tester_one_sidedness(exec: Exec) -> Result<String, String> {
    let ideal_domain = GridDomain::cube(8, 2).unwrap();
    let threshold_domain = GridDomain::cube(4, 3).unwrap();
    let rejects: u64 = exec::map_indexed(exec, 1000, |i| {
        let mut rng = trial_rng(SUITE_SEED.wrapping_add(10_000), i as u64);
        let f = if i % 2 == 0 {
            fixtures::random_order_ideal(&ideal_domain, &mut rng)
        } else {
            fixtures::random_threshold(&threshold_domain, &mut rng)
        };
        let config = TesterConfig::new(0.5, f.domain().dimension(), (i as u64) * 7 + 1)
            .and_then(|c| c.with_k(64))
            .expect("valid config");
        levin_tester_grid(&f, &config, &PairTester::default())
            .expect("tester runs")
            .is_reject() as u64
    })
    .into_iter()
    .sum();
    if rejects > 0 {
        return Err(format!("{rejects}/1000 monotone fixtures rejected"));
    }
    let audit_failures: u64 = exec::map_indexed(exec, 100, |i| {
        let mut rng = trial_rng(SUITE_SEED.wrapping_add(10_001), i as u64);
        let f = fixtures::random_order_ideal(&ideal_domain, &mut rng);
        let config = TesterConfig::new(0.5, 2, (i as u64) * 13 + 5)
            .and_then(|c| c.with_k(16))
            .expect("valid config");
        (!nonadaptivity_audit(&f, &config, &PairTester::default()).expect("audit runs")) as u64
    })
    .into_iter()
    .sum();
    if audit_failures > 0 {
        return Err(format!("{audit_failures}/100 audits saw value-dependent query sets"));
    }
    Ok("1000 monotone fixtures accepted; 100/100 non-adaptivity audits passed".into())
}

/// Calibrated soundness: far fixtures are rejected in more than half of
/// 200 seeded runs each.
fn c11_tester_soundness(exec: Exec) -> Result<String, String> {
    // anti-majority on [1000]^2 as a lazy oracle, eps = 0.2
    let n = 1000usize;
    let grid_f = BoolFunction::from_oracle(GridDomain::cube(n, 2).unwrap(), move |p| {
        p.coords()[0] + p.coords()[1] <= n
    });
    let grid_rejects: u64 = exec::map_indexed(exec, 200, |i| {
        let config = TesterConfig::new(0.2, 2, crate::derive_seed(11_100, i as u64))
            .expect("valid config");
        levin_tester_grid(&grid_f, &config, &PairTester::default())
            .expect("tester runs")
            .is_reject() as u64
    })
    .into_iter()
    .sum();
    if grid_rejects <= 100 {
        return Err(format!("anti-majority [1000]^2: only {grid_rejects}/200 rejects"));
    }

    let centrist = fixtures::centrist_continuous(16);
    let measure = crate::reduction::ProductMeasure::uniform(16);
    let centrist_rejects: u64 = exec::map_indexed(exec, 200, |i| {
        let config = TesterConfig::new(0.1, 16, crate::derive_seed(11_200, i as u64))
            .and_then(|c| c.with_k(64))
            .expect("valid config");
        levin_tester_continuous(&centrist, &measure, &config, &PairTester::default())
            .expect("tester runs")
            .is_reject() as u64
    })
    .into_iter()
    .sum();
    if centrist_rejects <= 100 {
        return Err(format!("continuous centrist d=16: only {centrist_rejects}/200 rejects"));
    }
    Ok(format!(
        "anti-majority [1000]^2: {grid_rejects}/200 rejects; centrist d=16: {centrist_rejects}/200 rejects"
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_selects_criteria_by_substring() {
        let outcomes = run_suite(Some("anti_majority"), Exec::Auto);
        assert_eq!(outcomes.len(), 1);
        assert_eq!(outcomes[0].name, "anti_majority_exactness");
        assert!(outcomes[0].passed, "{}", outcomes[0].detail);
    }

    #[test]
    fn criteria_names_are_unique() {
        let names: Vec<_> = criteria().iter().map(|(n, _, _)| *n).collect();
        let mut dedup = names.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(names.len(), dedup.len());
    }
}
