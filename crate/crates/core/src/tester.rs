//! One-sided non-adaptive monotonicity testers.
//!
//! The outer tester repeatedly restricts the input to a fresh random
//! `[k]^d` sub-grid and runs an inner tester on the lazy restricted
//! oracle, with a work-investment schedule that trades the restriction
//! distance quantile it targets against the repetition count at each
//! level. Rejection always carries a violated pair translated back to
//! original coordinates, so one-sidedness is certified rather than
//! assumed.
//!
//! All randomness derives from the configured seed per repetition, never
//! from observed values, so the query set is a deterministic function of
//! (seed, config, domain shape); [`nonadaptivity_audit`] replays a run
//! against a value-flipped oracle and checks the query sets coincide.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::grid::{
    comparable, restrict, restrict_continuous, BoolFunction, ContinuousFn, GridPoint, PointOrd,
};
use crate::reduction::{sample_restriction, sample_restriction_continuous, ProductMeasure};
use crate::{trial_rng, Error, Result};

/// Verdict plus certification data.
#[derive(Clone, Debug)]
pub struct TesterVerdict {
    pub verdict: Verdict,
    /// Present exactly when rejecting: a pair `(lower, upper)` with
    /// `lower < upper`, `f(lower) = 1`, `f(upper) = 0`.
    pub witness: Option<Witness>,
    /// Distinct points queried.
    pub queries: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Clone, Debug)]
pub enum Witness {
    Grid { lower: GridPoint, upper: GridPoint },
    Real { lower: Vec<f64>, upper: Vec<f64> },
}

impl TesterVerdict {
    pub fn is_reject(&self) -> bool {
        self.verdict == Verdict::Reject
    }

    fn accept(queries: u64) -> Self {
        TesterVerdict { verdict: Verdict::Accept, witness: None, queries }
    }
}

/// Contract for the tester run on each restricted oracle: never reject a
/// monotone function, and certify any rejection with a witness.
pub trait InnerTester: Sync + Send {
    fn name(&self) -> &'static str;
    fn test(&self, f: &BoolFunction, epsilon: f64, rng: &mut ChaCha8Rng) -> TesterVerdict;
}

/// Baseline inner tester: samples axis-aligned pairs.
///
/// Each round picks a uniform point, a uniform dimension, and a uniform
/// replacement value, orients the pair, and rejects on a violation. Runs
/// `ceil(c * d * ln(k) / eps)` rounds with `k` the largest dimension size.
/// One-sided by construction.
#[derive(Clone, Copy, Debug)]
pub struct PairTester {
    pub rounds_coeff: f64,
}

impl Default for PairTester {
    fn default() -> Self {
        PairTester { rounds_coeff: 4.0 }
    }
}

impl PairTester {
    pub fn rounds(&self, epsilon: f64, d: usize, k: usize) -> u64 {
        (self.rounds_coeff * d as f64 * (k as f64).ln() / epsilon).ceil() as u64
    }
}

impl InnerTester for PairTester {
    fn name(&self) -> &'static str {
        "pair"
    }

    fn test(&self, f: &BoolFunction, epsilon: f64, rng: &mut ChaCha8Rng) -> TesterVerdict {
        let domain = f.domain();
        let dims = domain.dims();
        let d = domain.dimension();
        let k = dims.iter().copied().max().unwrap_or(1);
        let rounds = self.rounds(epsilon, d, k);
        for _ in 0..rounds {
            let coords: Vec<usize> = dims.iter().map(|&n| rng.gen_range(1..=n)).collect();
            let j = rng.gen_range(0..d);
            let v = rng.gen_range(1..=dims[j]);
            let mut other = coords.clone();
            other[j] = v;
            let (lower, upper) = if v >= coords[j] {
                (GridPoint::new(coords), GridPoint::new(other))
            } else {
                (GridPoint::new(other), GridPoint::new(coords))
            };
            let (fl, fu) = (f.eval(&lower), f.eval(&upper));
            if fl && !fu {
                return TesterVerdict {
                    verdict: Verdict::Reject,
                    witness: Some(Witness::Grid { lower, upper }),
                    queries: f.query_count(),
                };
            }
        }
        TesterVerdict::accept(f.query_count())
    }
}

/// One repetition level of the work-investment schedule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level {
    pub ell: u32,
    /// Repetitions `Q_l = ceil(32 l^2 / (2^l eps))`.
    pub reps: u64,
    /// Distance threshold `eps_l = 2^{-l}` handed to the inner tester.
    pub epsilon: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WorkSchedule {
    pub levels: Vec<Level>,
}

impl WorkSchedule {
    pub fn total_reps(&self) -> u64 {
        self.levels.iter().map(|l| l.reps).sum()
    }

    /// `sum_l Q_l * eps_l^{-4/3}`, the schedule's contribution to the
    /// query-complexity report.
    pub fn query_cost_proxy(&self) -> f64 {
        self.levels.iter().map(|l| l.reps as f64 * l.epsilon.powf(-4.0 / 3.0)).sum()
    }
}

/// Deterministic level schedule for a distance parameter: levels
/// `1 ..= L+1` with `L = ceil(log2(2/eps))`.
pub fn work_investment_levels(epsilon: f64) -> Result<WorkSchedule> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidInput(format!("epsilon {epsilon} outside (0, 1]")));
    }
    let l_max = (2.0 / epsilon).log2().ceil() as u32;
    let levels = (1..=l_max + 1)
        .map(|ell| {
            let pow = 2f64.powi(ell as i32);
            Level {
                ell,
                reps: (32.0 * (ell as f64).powi(2) / (pow * epsilon)).ceil() as u64,
                epsilon: 1.0 / pow,
            }
        })
        .collect();
    Ok(WorkSchedule { levels })
}

/// Default cap on the per-dimension sample count; the nominal
/// `(2d/eps)^7` is astronomically large, so desk-scale runs clamp it.
pub const DEFAULT_K_MAX: usize = 1 << 12;

/// Outer tester configuration.
#[derive(Clone, Debug)]
pub struct TesterConfig {
    pub epsilon: f64,
    /// Per-dimension sample count for each restriction.
    pub k: usize,
    pub seed: u64,
    /// When false, runs the full schedule even after a rejection; used by
    /// the non-adaptivity audit.
    pub early_exit: bool,
    /// Whether the configured `k` was clamped below the nominal formula
    /// value; a clamped `k` weakens the distance-preservation guarantee.
    pub k_clamped: bool,
}

impl TesterConfig {
    /// Config with `k = min((2d/eps)^7, DEFAULT_K_MAX)` (unit leading
    /// constant).
    pub fn new(epsilon: f64, d: usize, seed: u64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidInput(format!("epsilon {epsilon} outside (0, 1)")));
        }
        let nominal = (2.0 * d as f64 / epsilon).powi(7);
        let clamped = nominal > DEFAULT_K_MAX as f64;
        let k = if clamped { DEFAULT_K_MAX } else { (nominal.ceil() as usize).max(2) };
        Ok(TesterConfig { epsilon, k, seed, early_exit: true, k_clamped: clamped })
    }

    pub fn with_k(mut self, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidInput(format!("k = {k} below 2")));
        }
        self.k = k;
        self.k_clamped = true;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

enum Target<'a> {
    Grid(&'a BoolFunction),
    Continuous { f: &'a ContinuousFn, measure: &'a ProductMeasure },
}

fn levin_run(
    target: &Target<'_>,
    config: &TesterConfig,
    inner: &dyn InnerTester,
) -> Result<(TesterVerdict, Option<BoolFunction>)> {
    if !(config.epsilon > 0.0 && config.epsilon < 1.0) {
        return Err(Error::InvalidInput(format!("epsilon {} outside (0, 1)", config.epsilon)));
    }
    if config.k < 2 {
        return Err(Error::InvalidInput(format!("k = {} below 2", config.k)));
    }
    let schedule = work_investment_levels(config.epsilon)?;

    // For grid inputs, every restriction reads through one counting view
    // so the reported query count is distinct original-domain points.
    let base_view = match target {
        Target::Grid(f) => Some(f.counting_view()),
        Target::Continuous { .. } => None,
    };
    let mut continuous_queries = 0u64;
    let mut first_reject: Option<Witness> = None;

    let mut rep_counter = 0u64;
    'levels: for level in &schedule.levels {
        for _ in 0..level.reps {
            let mut rng = trial_rng(config.seed, rep_counter);
            rep_counter += 1;
            let (restricted, witness_of) = match target {
                Target::Grid(f) => {
                    let spec = sample_restriction(f.domain(), config.k, &mut rng);
                    let restricted = restrict(base_view.as_ref().unwrap(), &spec)?;
                    let spec_for_witness = spec.clone();
                    (
                        restricted,
                        Box::new(move |lower: &GridPoint, upper: &GridPoint| Witness::Grid {
                            lower: GridPoint::new(spec_for_witness.map_index_point(lower)),
                            upper: GridPoint::new(spec_for_witness.map_index_point(upper)),
                        }) as Box<dyn Fn(&GridPoint, &GridPoint) -> Witness>,
                    )
                }
                Target::Continuous { f, measure } => {
                    let spec = sample_restriction_continuous(measure, config.k, &mut rng)?;
                    let restricted = restrict_continuous(f, &spec)?;
                    let spec_for_witness = spec.clone();
                    (
                        restricted,
                        Box::new(move |lower: &GridPoint, upper: &GridPoint| Witness::Real {
                            lower: spec_for_witness.map_index_point(lower),
                            upper: spec_for_witness.map_index_point(upper),
                        }) as Box<dyn Fn(&GridPoint, &GridPoint) -> Witness>,
                    )
                }
            };
            let verdict = inner.test(&restricted, level.epsilon, &mut rng);
            if matches!(target, Target::Continuous { .. }) {
                continuous_queries += restricted.query_count();
            }
            if verdict.is_reject() && first_reject.is_none() {
                let translated = match verdict.witness {
                    Some(Witness::Grid { ref lower, ref upper }) => witness_of(lower, upper),
                    _ => {
                        return Err(Error::Inconsistent(
                            "inner tester rejected without a witness".into(),
                        ))
                    }
                };
                if let (Target::Grid(f), Witness::Grid { lower, upper }) = (target, &translated) {
                    debug_assert_eq!(comparable(lower, upper), Ok(PointOrd::Less));
                    debug_assert!(f.eval(lower) && !f.eval(upper));
                }
                first_reject = Some(translated);
                if config.early_exit {
                    break 'levels;
                }
            }
        }
    }

    let queries = match &base_view {
        Some(view) => view.query_count(),
        None => continuous_queries,
    };
    let verdict = match first_reject {
        Some(witness) => {
            TesterVerdict { verdict: Verdict::Reject, witness: Some(witness), queries }
        }
        None => TesterVerdict::accept(queries),
    };
    Ok((verdict, base_view))
}

/// Outer tester for a hypergrid oracle: for each schedule level, restricts
/// to fresh random sub-grids and runs the inner tester at that level's
/// threshold; rejects as soon as any inner run rejects. Accepts monotone
/// inputs with probability 1.
pub fn levin_tester_grid(
    f: &BoolFunction,
    config: &TesterConfig,
    inner: &dyn InnerTester,
) -> Result<TesterVerdict> {
    levin_run(&Target::Grid(f), config, inner).map(|(v, _)| v)
}

/// Outer tester for a continuous oracle under a product measure; sample
/// coordinates are drawn through the per-dimension quantiles.
pub fn levin_tester_continuous(
    f: &ContinuousFn,
    measure: &ProductMeasure,
    config: &TesterConfig,
    inner: &dyn InnerTester,
) -> Result<TesterVerdict> {
    levin_run(&Target::Continuous { f, measure }, config, inner).map(|(v, _)| v)
}

/// Replays the full schedule (no early exit) against `f` and against its
/// value-flipped copy and reports whether the two runs touched exactly the
/// same set of original-domain points.
pub fn nonadaptivity_audit(
    f: &BoolFunction,
    config: &TesterConfig,
    inner: &dyn InnerTester,
) -> Result<bool> {
    let mut audit_config = config.clone();
    audit_config.early_exit = false;
    let flipped = f.negated_dense()?;
    let (_, view_a) = levin_run(&Target::Grid(f), &audit_config, inner)?;
    let (_, view_b) = levin_run(&Target::Grid(&flipped), &audit_config, inner)?;
    Ok(view_a.unwrap().queried_points() == view_b.unwrap().queried_points())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::grid::GridDomain;

    #[test]
    fn schedule_matches_hand_arithmetic() {
        let s = work_investment_levels(0.5).unwrap();
        let reps: Vec<(u32, u64)> = s.levels.iter().map(|l| (l.ell, l.reps)).collect();
        assert_eq!(reps, vec![(1, 32), (2, 64), (3, 72)]);
        let eps: Vec<f64> = s.levels.iter().map(|l| l.epsilon).collect();
        assert_eq!(eps, vec![0.5, 0.25, 0.125]);
        // schedule is a pure function of epsilon
        assert_eq!(s, work_investment_levels(0.5).unwrap());
    }

    #[test]
    fn schedule_at_epsilon_one_has_two_levels() {
        let s = work_investment_levels(1.0).unwrap();
        assert_eq!(s.levels.len(), 2); // L = ceil(log2 2) = 1
        assert!(work_investment_levels(0.0).is_err());
        assert!(work_investment_levels(1.5).is_err());
    }

    #[test]
    fn config_validates_and_clamps() {
        assert!(TesterConfig::new(0.0, 2, 1).is_err());
        assert!(TesterConfig::new(1.0, 2, 1).is_err());
        let c = TesterConfig::new(0.2, 2, 1).unwrap();
        assert_eq!(c.k, DEFAULT_K_MAX);
        assert!(c.k_clamped);
        let c = c.with_k(64).unwrap();
        assert_eq!(c.k, 64);
        assert!(c.with_k(1).is_err());
    }

    #[test]
    fn pair_tester_accepts_monotone_and_counts_queries() {
        let dom = GridDomain::cube(8, 2).unwrap();
        let f = BoolFunction::dense_from_fn(dom, |p| p.coords()[0] >= 5).unwrap();
        let view = f.counting_view();
        let tester = PairTester::default();
        let mut rng = trial_rng(1, 0);
        let verdict = tester.test(&view, 0.4, &mut rng);
        assert!(!verdict.is_reject());
        assert_eq!(verdict.queries, view.query_count());
        // raw invocations: exactly two per round
        let rounds = tester.rounds(0.4, 2, 8);
        assert_eq!(view.raw_query_count(), 2 * rounds);
    }

    #[test]
    fn pair_tester_rejects_far_line_function_with_witness() {
        // anti-dictator on [16]: 1 on the lower half, 0 above
        let dom = GridDomain::new(vec![16]).unwrap();
        let f = BoolFunction::dense_from_fn(dom, |p| p.coords()[0] <= 8).unwrap();
        let mut rejects = 0;
        for seed in 0..1000 {
            let view = f.counting_view();
            let verdict = PairTester::default().test(&view, 0.4, &mut trial_rng(17, seed));
            if verdict.is_reject() {
                rejects += 1;
                match verdict.witness {
                    Some(Witness::Grid { lower, upper }) => {
                        assert_eq!(comparable(&lower, &upper).unwrap(), PointOrd::Less);
                        assert!(f.eval(&lower) && !f.eval(&upper));
                    }
                    _ => panic!("reject without grid witness"),
                }
            }
        }
        assert!(rejects >= 900, "rejected {rejects}/1000");
    }

    #[test]
    fn levin_accepts_monotone_step_function_on_the_unit_square() {
        let f = ContinuousFn::new(2, |x| x[0] + x[1] >= 1.0);
        let measure = ProductMeasure::uniform(2);
        let config = TesterConfig::new(0.3, 2, 5).unwrap().with_k(16).unwrap();
        for seed in 0..20 {
            let verdict = levin_tester_continuous(
                &f,
                &measure,
                &config.clone().with_seed(seed),
                &PairTester::default(),
            )
            .unwrap();
            assert!(!verdict.is_reject());
            assert!(verdict.queries > 0);
        }
    }

    #[test]
    fn levin_rejects_far_grid_function_and_translates_witness() {
        let f = fixtures::anti_majority(50);
        let config = TesterConfig::new(0.2, 2, 3).unwrap().with_k(16).unwrap();
        let verdict = levin_tester_grid(&f, &config, &PairTester::default()).unwrap();
        assert!(verdict.is_reject());
        match verdict.witness {
            Some(Witness::Grid { lower, upper }) => {
                // witness valid in the original domain
                assert_eq!(comparable(&lower, &upper).unwrap(), PointOrd::Less);
                assert!(f.eval(&lower) && !f.eval(&upper));
                assert!(f.domain().contains(&lower) && f.domain().contains(&upper));
            }
            _ => panic!("expected grid witness"),
        }
    }

    #[test]
    fn audit_detects_value_independence() {
        let f = fixtures::random_order_ideal(&GridDomain::cube(5, 2).unwrap(), &mut trial_rng(9, 0));
        let config = TesterConfig::new(0.5, 2, 7).unwrap().with_k(8).unwrap();
        assert!(nonadaptivity_audit(&f, &config, &PairTester::default()).unwrap());
    }
}
