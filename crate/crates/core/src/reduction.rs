//! Random sub-grid sampling for discrete grids and continuous product
//! measures, with exact distance measurement of the restriction.
//!
//! Continuous measures are represented by per-dimension quantile (inverse
//! CDF) functions: both sampling and equal-measure partitioning need only
//! the quantile, which sidesteps numeric integration entirely.

use rand::distributions::Open01;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::ContinuousCDF;
use std::sync::Arc;

use crate::exec::{self, Exec};
use crate::grid::{restrict, BoolFunction, GridDomain, GridRestriction, RealRestriction};
use crate::matching::max_violation_matching;
use crate::{trial_rng, Error, Frac, Result};

/// A one-dimensional quantile function `Q: (0,1) -> R`, monotone
/// nondecreasing.
#[derive(Clone)]
pub enum Quantile {
    /// Uniform on `[0,1]`: `Q(u) = u`.
    Uniform01,
    /// Unit-rate exponential: `Q(u) = -ln(1-u)`.
    Exponential,
    /// Standard normal.
    Gaussian,
    /// User-supplied quantile callback, defined on the open unit interval.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Quantile {
    /// Evaluates the quantile; the endpoints 0 and 1 map to the natural
    /// limits (infinite sentinels where the support is unbounded).
    pub fn eval(&self, u: f64) -> f64 {
        match self {
            Quantile::Uniform01 => u.clamp(0.0, 1.0),
            Quantile::Exponential => {
                if u >= 1.0 {
                    f64::INFINITY
                } else {
                    -(1.0 - u.max(0.0)).ln()
                }
            }
            Quantile::Gaussian => {
                if u <= 0.0 {
                    f64::NEG_INFINITY
                } else if u >= 1.0 {
                    f64::INFINITY
                } else {
                    statrs::distribution::Normal::new(0.0, 1.0).unwrap().inverse_cdf(u)
                }
            }
            Quantile::Custom(f) => f(u),
        }
    }

    /// CDF for the built-in measures (`None` for custom quantiles).
    pub fn cdf(&self, x: f64) -> Option<f64> {
        match self {
            Quantile::Uniform01 => Some(x.clamp(0.0, 1.0)),
            Quantile::Exponential => Some(if x <= 0.0 { 0.0 } else { 1.0 - (-x).exp() }),
            Quantile::Gaussian => {
                Some(statrs::distribution::Normal::new(0.0, 1.0).unwrap().cdf(x))
            }
            Quantile::Custom(_) => None,
        }
    }
}

impl std::fmt::Debug for Quantile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Quantile::Uniform01 => write!(f, "Uniform01"),
            Quantile::Exponential => write!(f, "Exponential"),
            Quantile::Gaussian => write!(f, "Gaussian"),
            Quantile::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Product measure on `R^d`, one quantile function per dimension.
#[derive(Clone, Debug)]
pub struct ProductMeasure {
    coords: Vec<Quantile>,
}

impl ProductMeasure {
    pub fn new(coords: Vec<Quantile>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("measure needs at least one dimension".into()));
        }
        Ok(ProductMeasure { coords })
    }

    pub fn uniform(d: usize) -> Self {
        ProductMeasure { coords: vec![Quantile::Uniform01; d.max(1)] }
    }

    pub fn exponential(d: usize) -> Self {
        ProductMeasure { coords: vec![Quantile::Exponential; d.max(1)] }
    }

    pub fn gaussian(d: usize) -> Self {
        ProductMeasure { coords: vec![Quantile::Gaussian; d.max(1)] }
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn quantile(&self, dim: usize) -> &Quantile {
        &self.coords[dim]
    }
}

/// `k` i.i.d. uniform draws from `[n_i]` per dimension, sorted, duplicates
/// retained.
pub fn sample_restriction(domain: &GridDomain, k: usize, rng: &mut ChaCha8Rng) -> GridRestriction {
    assert!(k >= 1);
    let samples: Vec<Vec<usize>> = domain
        .dims()
        .iter()
        .map(|&n| (0..k).map(|_| rng.gen_range(1..=n)).collect())
        .collect();
    GridRestriction::new(samples).expect("in-range samples")
}

/// `k` i.i.d. draws from each coordinate measure, via `Q_i(u)` with `u`
/// uniform on the open unit interval; sorted per dimension.
///
/// Spot-asserts that each quantile is nondecreasing on the sampled
/// arguments; a violation reports the measure as inconsistent.
pub fn sample_restriction_continuous(
    measure: &ProductMeasure,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Result<RealRestriction> {
    assert!(k >= 1);
    let mut samples = Vec::with_capacity(measure.dimension());
    for q in &measure.coords {
        let mut us: Vec<f64> = (0..k).map(|_| rng.sample(Open01)).collect();
        us.sort_by(|a, b| a.partial_cmp(b).expect("Open01 is finite"));
        let ts: Vec<f64> = us.iter().map(|&u| q.eval(u)).collect();
        if ts.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Inconsistent(
                "quantile function decreased on sorted arguments".into(),
            ));
        }
        samples.push(ts);
    }
    RealRestriction::new(samples)
}

/// Distance to monotonicity of `f` restricted to a fresh random `[k]^d`
/// sub-grid, measured exactly (the restricted table is materialized to run
/// the matching engine, so `k^d` must stay within the dense cap).
pub fn reduction_trial(f: &BoolFunction, k: usize, rng: &mut ChaCha8Rng) -> Result<Frac> {
    let spec = sample_restriction(f.domain(), k, rng);
    let restricted = restrict(f, &spec)?;
    let dense = restricted.to_dense()?;
    let m = max_violation_matching(&dense)?;
    Ok(Frac::new(m.len() as u64, dense.domain().len() as u64))
}

/// Monte Carlo estimate of `E_T[eps_{f_T}]`.
#[derive(Clone, Debug)]
pub struct ReductionEstimate {
    pub k: usize,
    pub trials: u64,
    /// Exact mean of the per-trial distances (sum of exact fractions).
    pub mean: Frac,
    pub mean_f64: f64,
    /// Half-width of the 95% normal confidence interval.
    pub ci95: f64,
    pub per_trial: Vec<Frac>,
}

/// Runs `trials` independent restriction trials; per-trial seeds derive
/// from the master seed, and the exact-fraction aggregation is
/// order-independent, so results do not depend on scheduling.
pub fn estimate_expected_distance(
    f: &BoolFunction,
    k: usize,
    trials: u64,
    seed: u64,
    exec: Exec,
) -> Result<ReductionEstimate> {
    assert!(trials >= 1);
    let outcomes: Vec<Result<Frac>> = exec::map_indexed(exec, trials as usize, |i| {
        let mut rng = trial_rng(seed, i as u64);
        reduction_trial(f, k, &mut rng)
    });
    let per_trial: Vec<Frac> = outcomes.into_iter().collect::<Result<_>>()?;
    let sum: Frac = per_trial.iter().copied().fold(Frac::new(0, 1), |a, b| a + b);
    let mean = sum / Frac::from_integer(trials);
    let mean_f64 = frac_to_f64(mean);
    let var = per_trial
        .iter()
        .map(|&e| (frac_to_f64(e) - mean_f64).powi(2))
        .sum::<f64>()
        / trials as f64;
    Ok(ReductionEstimate {
        k,
        trials,
        mean,
        mean_f64,
        ci95: 1.96 * (var / trials as f64).sqrt(),
        per_trial,
    })
}

pub fn frac_to_f64(x: Frac) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Per-dimension interval endpoints splitting each coordinate measure into
/// `N` pieces of measure `1/N`: endpoint `j` is `Q_i(j/N)`, with the outer
/// endpoints acting as sentinels (infinite where the support is
/// unbounded).
#[derive(Clone, Debug)]
pub struct EqualMeasurePartition {
    endpoints: Vec<Vec<f64>>,
    n_intervals: usize,
}

pub fn equal_measure_partition(measure: &ProductMeasure, n: usize) -> Result<EqualMeasurePartition> {
    if n == 0 {
        return Err(Error::InvalidInput("partition needs at least one interval".into()));
    }
    let endpoints = measure
        .coords
        .iter()
        .map(|q| (0..=n).map(|j| q.eval(j as f64 / n as f64)).collect())
        .collect();
    Ok(EqualMeasurePartition { endpoints, n_intervals: n })
}

impl EqualMeasurePartition {
    pub fn n_intervals(&self) -> usize {
        self.n_intervals
    }

    pub fn dimension(&self) -> usize {
        self.endpoints.len()
    }

    /// Endpoints `Q(0/N) ..= Q(N/N)` for one dimension.
    pub fn endpoints(&self, dim: usize) -> &[f64] {
        &self.endpoints[dim]
    }

    /// Maps a point to the index vector of its box, in `[1, N]^d`.
    ///
    /// Per dimension this is a binary search over the interior endpoints;
    /// a boundary point belongs to the lower-indexed interval
    /// (lexicographically-least rule), and points outside all endpoints
    /// clamp to the first or last interval.
    pub fn box_index(&self, x: &[f64]) -> Result<Vec<usize>> {
        if x.len() != self.endpoints.len() {
            return Err(Error::DimensionMismatch {
                expected: self.endpoints.len(),
                found: x.len(),
            });
        }
        Ok(x.iter()
            .zip(&self.endpoints)
            .map(|(&xi, eps)| {
                let interior = &eps[1..self.n_intervals];
                1 + interior.partition_point(|&e| e < xi)
            })
            .collect())
    }
}
