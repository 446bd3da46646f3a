//! Per-line weight sequences, the Hall-deficit closed form for the sampled
//! matching size, and sampling discrepancy experiments.
//!
//! A line's sub-matching induces weights on `[n]`: `w_plus(i)` counts lower
//! endpoints in slice `i`, `w_minus(j)` counts upper endpoints in slice
//! `j`. For a sample `T` of slice indices, the bipartite graph `G_T` joins
//! plus-capacity at `i` to minus-capacity at `j` whenever `i <= j`, and the
//! size of its maximum weighted matching `nu(G_T)` lower-bounds how much of
//! the line's sub-matching survives restriction to `T`.

use rand::Rng;

use crate::exec::{self, Exec};
use crate::matching::ViolationMatching;
use crate::stacks::{line_of, LineId};
use crate::{trial_rng, Error, Result};

/// Weight sequences induced on `[n]` by one line's sub-matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineWeights {
    w_plus: Vec<u64>,
    w_minus: Vec<u64>,
    lambda_cap: u64,
}

impl LineWeights {
    /// Weights from the sub-matching of `m` on the given line.
    ///
    /// Verifies the structural invariants every valid matching line must
    /// satisfy: `w_plus <= 1` everywhere (lower endpoints on one line have
    /// distinct axis coordinates), and every prefix sum of
    /// `w_minus - w_plus` is nonpositive (each upper sits at or above its
    /// lower). Failure signals an invalid matching.
    pub fn from_matching_line(m: &ViolationMatching, line: &LineId, axis: usize) -> Result<Self> {
        let n = m.domain().dims()[axis];
        let mut w_plus = vec![0u64; n];
        let mut w_minus = vec![0u64; n];
        for (lower, upper) in m.pairs() {
            if &line_of(lower, axis) == line {
                w_plus[lower.coords()[axis] - 1] += 1;
                w_minus[upper.coords()[axis] - 1] += 1;
            }
        }
        if let Some(i) = w_plus.iter().position(|&w| w > 1) {
            return Err(Error::Inconsistent(format!(
                "w_plus({}) = {} exceeds 1 on a single line",
                i + 1,
                w_plus[i]
            )));
        }
        let mut prefix = 0i64;
        for t in 0..n {
            prefix += w_minus[t] as i64 - w_plus[t] as i64;
            if prefix > 0 {
                return Err(Error::Inconsistent(format!(
                    "prefix sum of w_minus - w_plus is {prefix} > 0 at {}",
                    t + 1
                )));
            }
        }
        Ok(LineWeights::from_raw(w_plus, w_minus))
    }

    /// Raw weights with no structural checks; `lambda_cap` becomes the
    /// largest minus weight.
    pub fn from_raw(w_plus: Vec<u64>, w_minus: Vec<u64>) -> Self {
        assert_eq!(w_plus.len(), w_minus.len());
        let lambda_cap = w_minus.iter().copied().max().unwrap_or(0);
        LineWeights { w_plus, w_minus, lambda_cap }
    }

    pub fn n(&self) -> usize {
        self.w_plus.len()
    }

    pub fn w_plus(&self) -> &[u64] {
        &self.w_plus
    }

    pub fn w_minus(&self) -> &[u64] {
        &self.w_minus
    }

    /// Largest stack size on the line, i.e. the largest minus weight.
    pub fn lambda_cap(&self) -> u64 {
        self.lambda_cap
    }

    /// Total minus weight; equals the line sub-matching size when the
    /// weights come from a matching.
    pub fn total_minus(&self) -> u64 {
        self.w_minus.iter().sum()
    }
}

/// Maximum weighted matching size in `G_T` by the Hall-deficit closed form:
///
/// `nu = sum_{j in T} w_minus(j) - max(0, max_{t in T} sum_{s in T, s <= t} (w_minus(s) - w_plus(s)))`
///
/// Duplicate sample indices contribute their weights once per copy. The
/// deficit is clamped at zero (the empty subset has deficit zero), which
/// keeps `nu` at most the total minus weight; runs in `O(|T| log |T|)`.
pub fn hall_matching_size(w: &LineWeights, sample: &[usize]) -> u64 {
    let mut t: Vec<usize> = sample.to_vec();
    t.sort_unstable();
    let mut total = 0i64;
    let mut prefix = 0i64;
    let mut deficit = 0i64; // max over prefixes, clamped at 0 by the empty prefix
    for &s in &t {
        debug_assert!((1..=w.n()).contains(&s));
        total += w.w_minus[s - 1] as i64;
        prefix += w.w_minus[s - 1] as i64 - w.w_plus[s - 1] as i64;
        deficit = deficit.max(prefix);
    }
    (total - deficit) as u64
}

/// Reference maximum weighted matching on the explicit bipartite graph,
/// found by augmenting paths over unit-capacity copies of every weighted
/// vertex. Exponentially sized next to [`hall_matching_size`] but
/// independent of it; used as its verification oracle.
pub fn brute_force_w_matching(w: &LineWeights, sample: &[usize]) -> u64 {
    let mut t: Vec<usize> = sample.to_vec();
    t.sort_unstable();
    let mut lefts = Vec::new(); // unit plus-capacity nodes, by slice value
    let mut rights = Vec::new();
    for &s in &t {
        for _ in 0..w.w_plus[s - 1] {
            lefts.push(s);
        }
        for _ in 0..w.w_minus[s - 1] {
            rights.push(s);
        }
    }
    let mut pair_right: Vec<Option<usize>> = vec![None; rights.len()];
    fn augment(
        u: usize,
        lefts: &[usize],
        rights: &[usize],
        visited: &mut [bool],
        pair_right: &mut [Option<usize>],
    ) -> bool {
        for v in 0..rights.len() {
            if lefts[u] <= rights[v] && !visited[v] {
                visited[v] = true;
                let free = match pair_right[v] {
                    None => true,
                    Some(prev) => augment(prev, lefts, rights, visited, pair_right),
                };
                if free {
                    pair_right[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let mut size = 0;
    for u in 0..lefts.len() {
        let mut visited = vec![false; rights.len()];
        if augment(u, &lefts, &rights, &mut visited, &mut pair_right) {
            size += 1;
        }
    }
    size
}

/// One sampled `T` with its prefix statistics and realized matching size.
#[derive(Clone, Debug)]
pub struct SampleTrace {
    /// The sample, sorted ascending (duplicates kept).
    pub sample: Vec<usize>,
    /// Running `Z_t`: prefix sums of `w_minus - w_plus` over the sample.
    pub prefix_stats: Vec<i64>,
    /// Largest prefix sum, before clamping.
    pub max_prefix: i64,
    /// Realized `nu(G_T)`.
    pub nu: u64,
}

pub fn sample_trace(w: &LineWeights, sample: &[usize]) -> SampleTrace {
    let mut t: Vec<usize> = sample.to_vec();
    t.sort_unstable();
    let mut prefix_stats = Vec::with_capacity(t.len());
    let mut prefix = 0i64;
    let mut total = 0i64;
    for &s in &t {
        total += w.w_minus[s - 1] as i64;
        prefix += w.w_minus[s - 1] as i64 - w.w_plus[s - 1] as i64;
        prefix_stats.push(prefix);
    }
    let max_prefix = prefix_stats.iter().copied().max().unwrap_or(0);
    let nu = (total - max_prefix.max(0)) as u64;
    SampleTrace { sample: t, prefix_stats, max_prefix, nu }
}

/// Analytic lower bound on `E_T[nu(G_T)]` for `k` uniform samples:
/// `(k/n) |M^(l)| - 3 lambda sqrt(k ln k)`.
pub fn expectation_lower_bound(w: &LineWeights, k: u64) -> f64 {
    let kf = k as f64;
    (kf / w.n() as f64) * w.total_minus() as f64
        - 3.0 * w.lambda_cap as f64 * (kf * kf.ln()).sqrt()
}

/// Threshold whose exceedance probability the analysis bounds by `1/k`:
/// `2 lambda sqrt(k ln k)`.
pub fn tail_threshold(w: &LineWeights, k: u64) -> f64 {
    2.0 * w.lambda_cap as f64 * ((k as f64) * (k as f64).ln()).sqrt()
}

/// Estimate of `E_T[nu(G_T)]` with companion statistics.
#[derive(Clone, Debug)]
pub struct LineSampleReport {
    pub k: u64,
    /// Number of samples the estimate averages over (`trials`, or `n^k`
    /// in exhaustive mode).
    pub samples: u64,
    pub mean_nu: f64,
    /// Half-width of the 95% normal confidence interval (0 in exhaustive
    /// mode, where the mean is exact).
    pub ci95: f64,
    /// The analytic lower bound for this `k`.
    pub bound: f64,
    /// Fraction of samples whose max prefix statistic exceeded
    /// [`tail_threshold`]; the analysis bounds its expectation by `1/k`.
    pub tail_freq: f64,
    pub exhaustive: bool,
}

/// Monte Carlo estimate of `E_T[nu(G_T)]` over `trials` samples of `k`
/// i.i.d. uniform indices. Trials derive independent streams from the
/// seed, so the result is reproducible regardless of scheduling.
pub fn line_sampling_experiment(
    w: &LineWeights,
    k: u64,
    trials: u64,
    seed: u64,
    exec: Exec,
) -> LineSampleReport {
    assert!(k >= 2, "sampling experiment needs k >= 2");
    assert!(trials >= 1);
    let n = w.n();
    let thresh = tail_threshold(w, k);
    let outcomes = exec::map_indexed(exec, trials as usize, |i| {
        let mut rng = trial_rng(seed, i as u64);
        let sample: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=n)).collect();
        let trace = sample_trace(w, &sample);
        (trace.nu, (trace.max_prefix as f64) > thresh)
    });
    let sum: u64 = outcomes.iter().map(|&(nu, _)| nu).sum();
    let mean = sum as f64 / trials as f64;
    let var = outcomes.iter().map(|&(nu, _)| (nu as f64 - mean).powi(2)).sum::<f64>()
        / trials as f64;
    let tails = outcomes.iter().filter(|&&(_, t)| t).count();
    LineSampleReport {
        k,
        samples: trials,
        mean_nu: mean,
        ci95: 1.96 * (var / trials as f64).sqrt(),
        bound: expectation_lower_bound(w, k),
        tail_freq: tails as f64 / trials as f64,
        exhaustive: false,
    }
}

/// Exact `E_T[nu(G_T)]` by enumerating all `n^k` ordered samples.
pub fn line_sampling_exhaustive(w: &LineWeights, k: u64) -> Result<LineSampleReport> {
    assert!(k >= 2, "sampling experiment needs k >= 2");
    let n = w.n();
    let count = (n as u128).checked_pow(k as u32).filter(|&c| c <= 200_000_000).ok_or_else(
        || Error::Refused(format!("exhaustive enumeration of {n}^{k} samples is too large")),
    )?;
    let thresh = tail_threshold(w, k);
    let mut sample = vec![1usize; k as usize];
    let mut sum: u128 = 0;
    let mut tails: u64 = 0;
    let mut done = false;
    while !done {
        let trace = sample_trace(w, &sample);
        sum += trace.nu as u128;
        if (trace.max_prefix as f64) > thresh {
            tails += 1;
        }
        done = true;
        for pos in (0..k as usize).rev() {
            if sample[pos] < n {
                sample[pos] += 1;
                for s in sample.iter_mut().skip(pos + 1) {
                    *s = 1;
                }
                done = false;
                break;
            }
        }
    }
    Ok(LineSampleReport {
        k,
        samples: count as u64,
        mean_nu: sum as f64 / count as f64,
        ci95: 0.0,
        bound: expectation_lower_bound(w, k),
        tail_freq: tails as f64 / count as f64,
        exhaustive: true,
    })
}
