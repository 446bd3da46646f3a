//! Named test functions and generators, plus the variance restriction
//! experiment.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;

use crate::grid::{is_monotone, BoolFunction, ContinuousFn, GridDomain, GridPoint};
use crate::matching::ViolationMatching;
use crate::reduction::ProductMeasure;
use crate::{Error, Frac, Result};

/// Anti-majority on `[n]^2`: `f(x, y) = 1` iff `x + y <= n`. Every
/// 1-point can be matched, so the distance is `(n-1) / (2n)` exactly.
pub fn anti_majority(n: usize) -> BoolFunction {
    assert!(n >= 2);
    let dom = GridDomain::cube(n, 2).expect("small square grid");
    BoolFunction::dense_from_fn(dom, move |p| p.coords()[0] + p.coords()[1] <= n).unwrap()
}

/// Reference matching of anti-majority that piles pairs into large stacks:
/// `(x, y) -> (n-y+1, n-x+1)`. Its stack sizes are `n-1, n-2, ..., 1`.
pub fn anti_majority_matching_r(n: usize) -> ViolationMatching {
    let f = anti_majority(n);
    let pairs = (1..n)
        .flat_map(|x| {
            (1..=(n - x)).map(move |y| {
                (GridPoint::new(vec![x, y]), GridPoint::new(vec![n - y + 1, n - x + 1]))
            })
        })
        .collect();
    ViolationMatching::from_pairs(&f, pairs).expect("reference matching is valid")
}

/// Reference matching of anti-majority with every stack of size at most 1:
/// `(x, y) -> (x+y, n-x+1)`.
pub fn anti_majority_matching_b(n: usize) -> ViolationMatching {
    let f = anti_majority(n);
    let pairs = (1..n)
        .flat_map(|x| {
            (1..=(n - x))
                .map(move |y| (GridPoint::new(vec![x, y]), GridPoint::new(vec![x + y, n - x + 1])))
        })
        .collect();
    ViolationMatching::from_pairs(&f, pairs).expect("reference matching is valid")
}

/// A function on `[n] x [n-1]` (n even) where large stacks are
/// unavoidable: `f(c, r) = 1` iff `c <= n-1` and `r <= n/2`.
///
/// Layout: columns `1..n-1` are 1 on the bottom `n/2` rows and 0 on the
/// top `n/2 - 1` rows; the last column is all 0. The bottom 1-block
/// matches the 0-block directly above it column by column, and the first
/// row matches the last column, so a perfect violation matching of all
/// `n(n-1)/2` 1-points exists and every maximum matching saturates the
/// last column's `n-1` 0-points. Those pairs' lower endpoints live on only
/// `n/2` lines, so at least `n/2 - 1` pairs share a (line, slice) stack
/// with another pair.
pub fn figure_one(n: usize) -> Result<BoolFunction> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("needs even n >= 4, got {n}")));
    }
    let dom = GridDomain::new(vec![n, n - 1])?;
    BoolFunction::dense_from_fn(dom, move |p| {
        let (c, r) = (p.coords()[0], p.coords()[1]);
        c < n && r <= n / 2
    })
}

/// Voter label for one coordinate of the centrist function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VoterLabel {
    Skeptic,
    Supporter,
    Fanatic,
}

/// Label of a vote in `[0, 1]`: skeptic on `[0, 1-2/d]`, supporter on
/// `(1-2/d, 1-1/d]`, fanatic above.
pub fn centrist_label_real(x: f64, d: usize) -> VoterLabel {
    let lo = 1.0 - 2.0 / d as f64;
    let hi = 1.0 - 1.0 / d as f64;
    if x <= lo {
        VoterLabel::Skeptic
    } else if x <= hi {
        VoterLabel::Supporter
    } else {
        VoterLabel::Fanatic
    }
}

/// Label of a discrete vote in `[n]` with `n = m d`: the top `m` values
/// are fanatics, the `m` below them supporters, the rest skeptics; the
/// band measures match the continuous `1/d` bands exactly.
pub fn centrist_label_coord(v: usize, n: usize, m: usize) -> VoterLabel {
    if v > n - m {
        VoterLabel::Fanatic
    } else if v > n - 2 * m {
        VoterLabel::Supporter
    } else {
        VoterLabel::Skeptic
    }
}

/// Centrist on `[0, 1]^d`: 1 iff some coordinate is a supporter. Constant
/// distance to monotonicity, yet small random restrictions are almost
/// always monotone.
pub fn centrist_continuous(d: usize) -> ContinuousFn {
    assert!(d >= 2);
    ContinuousFn::new(d, move |x| {
        x.iter().any(|&v| centrist_label_real(v, d) == VoterLabel::Supporter)
    })
}

/// Discrete centrist on `[m d]^d`; dense when the domain fits the cap,
/// a lazy oracle otherwise.
pub fn centrist_discrete(d: usize, m: usize) -> Result<BoolFunction> {
    if d < 2 || m < 1 {
        return Err(Error::InvalidInput(format!("needs d >= 2 and m >= 1, got d={d} m={m}")));
    }
    let n = m * d;
    let dom = GridDomain::cube(n, d)?;
    let eval = move |p: &GridPoint| {
        p.coords().iter().any(|&v| centrist_label_coord(v, n, m) == VoterLabel::Supporter)
    };
    if dom.len() <= crate::grid::DENSE_CAP {
        BoolFunction::dense_from_fn(dom, eval)
    } else {
        Ok(BoolFunction::from_oracle(dom, eval))
    }
}

/// Whether the restriction of centrist to the given per-dimension sample
/// labels (sorted by coordinate, ascending) is monotone.
///
/// The restriction is an OR of per-coordinate supporter indicators, so it
/// is monotone iff some dimension sampled only supporters (the restriction
/// is constant 1) or every dimension's supporter indicator is
/// nondecreasing along its sorted sample (no supporter below a
/// non-supporter). This avoids scanning the `k^d` restricted grid.
pub fn centrist_restriction_monotone(labels: &[Vec<VoterLabel>]) -> bool {
    let all_supporters =
        labels.iter().any(|dim| dim.iter().all(|&l| l == VoterLabel::Supporter));
    if all_supporters {
        return true;
    }
    labels.iter().all(|dim| {
        dim.windows(2).all(|w| {
            !(w[0] == VoterLabel::Supporter && w[1] != VoterLabel::Supporter)
        })
    })
}

/// Random monotone function: the indicator of the up-set generated by the
/// points whose i.i.d. uniform score clears a uniform threshold. Monotone
/// by construction.
pub fn random_order_ideal(domain: &GridDomain, rng: &mut ChaCha8Rng) -> BoolFunction {
    let n = domain.len();
    let scores: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
    let theta: f64 = rng.gen();
    let strides = domain.strides();
    let dims = domain.dims().to_vec();
    let d = domain.dimension();
    let mut values = vec![0u8; n];
    let mut coords = vec![1usize; d];
    for rank in 0..n {
        let mut v = (scores[rank] >= theta) as u8;
        if v == 0 {
            for i in 0..d {
                if coords[i] > 1 && values[rank - strides[i]] == 1 {
                    v = 1;
                    break;
                }
            }
        }
        values[rank] = v;
        for i in (0..d).rev() {
            if coords[i] < dims[i] {
                coords[i] += 1;
                break;
            }
            coords[i] = 1;
        }
    }
    let f = BoolFunction::from_table(domain.clone(), values).unwrap();
    debug_assert!(is_monotone(&f).unwrap());
    f
}

/// Random monotone threshold function: nonnegative random weights and a
/// random cut of the weighted coordinate sum.
pub fn random_threshold(domain: &GridDomain, rng: &mut ChaCha8Rng) -> BoolFunction {
    let weights: Vec<f64> = (0..domain.dimension()).map(|_| rng.gen()).collect();
    let max_sum: f64 =
        weights.iter().zip(domain.dims()).map(|(w, &n)| w * n as f64).sum();
    let theta: f64 = rng.gen::<f64>() * max_sum;
    let f = BoolFunction::dense_from_fn(domain.clone(), move |p| {
        let s: f64 = p.coords().iter().zip(&weights).map(|(&c, w)| c as f64 * w).sum();
        s >= theta
    })
    .unwrap();
    debug_assert!(is_monotone(&f).unwrap());
    f
}

/// Uniformly random function: each point i.i.d. 0/1.
pub fn random_function(domain: &GridDomain, rng: &mut ChaCha8Rng) -> BoolFunction {
    let values: Vec<u8> = (0..domain.len()).map(|_| rng.gen_range(0..=1)).collect();
    BoolFunction::from_table(domain.clone(), values).unwrap()
}

/// All monotone functions on a small domain, by depth-first extension in
/// rank order (at each point the value is forced to 1 when some immediate
/// predecessor is 1, free otherwise).
pub fn enumerate_monotone_functions(domain: &GridDomain) -> Result<Vec<BoolFunction>> {
    const MAX_POINTS: usize = 24;
    const MAX_FUNCTIONS: usize = 1_000_000;
    let n = domain.len();
    if n > MAX_POINTS {
        return Err(Error::Refused(format!("domain of {n} points is too large to enumerate")));
    }
    let strides = domain.strides();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (rank, preds_r) in preds.iter_mut().enumerate() {
        let p = domain.point_at(rank);
        for (&c, &stride) in p.coords().iter().zip(&strides) {
            if c > 1 {
                preds_r.push(rank - stride);
            }
        }
    }
    let mut out = Vec::new();
    let mut g = vec![0u8; n];
    fn go(
        rank: usize,
        g: &mut Vec<u8>,
        preds: &[Vec<usize>],
        domain: &GridDomain,
        out: &mut Vec<BoolFunction>,
    ) -> Result<()> {
        if rank == g.len() {
            if out.len() >= MAX_FUNCTIONS {
                return Err(Error::Refused("too many monotone functions".into()));
            }
            out.push(BoolFunction::from_table(domain.clone(), g.clone()).unwrap());
            return Ok(());
        }
        let forced = preds[rank].iter().any(|&p| g[p] == 1);
        let choices: &[u8] = if forced { &[1] } else { &[0, 1] };
        for &c in choices {
            g[rank] = c;
            go(rank + 1, g, preds, domain, out)?;
        }
        Ok(())
    }
    go(0, &mut g, &preds, domain, &mut out)?;
    Ok(out)
}

/// Variance of a function and of its random 2-point-per-dimension
/// restrictions, in the plus/minus-one convention (`var = 4 p (1-p)` for a
/// 0/1 function that is 1 on a `p`-fraction).
#[derive(Clone, Debug)]
pub struct VarianceReport {
    /// `var(f)`, exactly.
    pub var: Frac,
    /// `E_T[var(f_T)]` over restrictions with 2 samples per dimension.
    pub expected_restricted: Frac,
    /// How many sample combinations the expectation averaged over.
    pub combos: u64,
}

impl VarianceReport {
    /// Whether `E_T[var(f_T)] >= var(f) / 2`.
    pub fn holds(&self) -> bool {
        self.expected_restricted * Frac::from_integer(2) >= self.var
    }

    /// Measured slack `E_T[var(f_T)] - var(f)/2` as a float.
    pub fn slack(&self) -> f64 {
        to_f64(self.expected_restricted) - to_f64(self.var) / 2.0
    }
}

fn to_f64(x: Frac) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn variance_pm1(ones: u64, total: u64) -> Frac {
    // 4 p (1 - p) == 1 - E[f]^2 in the plus/minus-one convention
    Frac::new(4 * ones * (total - ones), total * total)
}

/// Exact variance restriction experiment: averages `var(f_T)` over every
/// ordered choice of 2 samples per dimension (`prod n_i^2` combinations,
/// capped at 10^6).
pub fn variance_experiment_exact(f: &BoolFunction) -> Result<VarianceReport> {
    let values = f.values().ok_or(Error::NotDense("variance_experiment_exact"))?;
    let domain = f.domain();
    let dims = domain.dims().to_vec();
    let d = dims.len();
    let combos: u128 = dims.iter().map(|&n| (n * n) as u128).product();
    if combos > 1_000_000 {
        return Err(Error::Refused(format!(
            "{combos} restriction combinations exceed the exact-mode cap of 10^6"
        )));
    }
    let strides = domain.strides();
    let corners = 1usize << d;
    let ones_total = values.iter().map(|&v| v as u64).sum::<u64>();
    let var = variance_pm1(ones_total, domain.len() as u64);

    // odometer over ordered per-dimension sample pairs (a_i, b_i)
    let mut pairs: Vec<(usize, usize)> = vec![(1, 1); d];
    let mut sum = Frac::new(0, 1);
    let four_d = (corners as u64) * (corners as u64);
    loop {
        let mut ones = 0u64;
        for corner in 0..corners {
            let mut rank = 0usize;
            for (i, &(a, b)) in pairs.iter().enumerate() {
                let c = if corner >> i & 1 == 0 { a } else { b };
                rank += (c - 1) * strides[i];
            }
            ones += values[rank] as u64;
        }
        sum += Frac::new(4 * ones * (corners as u64 - ones), four_d);

        let mut done = true;
        for i in (0..d).rev() {
            let (a, b) = pairs[i];
            if b < dims[i] {
                pairs[i] = (a, b + 1);
                done = false;
                break;
            } else if a < dims[i] {
                pairs[i] = (a + 1, 1);
                done = false;
                break;
            }
            pairs[i] = (1, 1);
        }
        if done {
            break;
        }
    }
    Ok(VarianceReport {
        var,
        expected_restricted: sum / Frac::from_integer(combos as u64),
        combos: combos as u64,
    })
}

/// Monte Carlo variant for domains too large to enumerate exactly.
pub fn variance_experiment_monte_carlo(
    f: &BoolFunction,
    trials: u64,
    rng: &mut ChaCha8Rng,
) -> Result<(f64, f64)> {
    let values = f.values().ok_or(Error::NotDense("variance_experiment_monte_carlo"))?;
    let domain = f.domain();
    let dims = domain.dims().to_vec();
    let strides = domain.strides();
    let d = dims.len();
    let corners = 1usize << d;
    let ones_total = values.iter().map(|&v| v as u64).sum::<u64>();
    let var = to_f64(variance_pm1(ones_total, domain.len() as u64));
    let mut acc = 0.0;
    for _ in 0..trials {
        let pairs: Vec<(usize, usize)> =
            dims.iter().map(|&n| (rng.gen_range(1..=n), rng.gen_range(1..=n))).collect();
        let mut ones = 0u64;
        for corner in 0..corners {
            let mut rank = 0usize;
            for (i, &(a, b)) in pairs.iter().enumerate() {
                let c = if corner >> i & 1 == 0 { a } else { b };
                rank += (c - 1) * strides[i];
            }
            ones += values[rank] as u64;
        }
        acc += to_f64(variance_pm1(ones, corners as u64));
    }
    Ok((var, acc / trials as f64))
}

/// Fixture families addressable by name from the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureKind {
    AntiMajority,
    FigureOne,
    CentristDiscrete,
    CentristContinuous,
    RandomOrderIdeal,
    RandomFunction,
    File,
}

impl FixtureKind {
    pub fn parse(name: &str) -> Result<FixtureKind> {
        Ok(match name {
            "anti_majority" => FixtureKind::AntiMajority,
            "figure_one" => FixtureKind::FigureOne,
            "centrist_discrete" => FixtureKind::CentristDiscrete,
            "centrist_continuous" => FixtureKind::CentristContinuous,
            "random_order_ideal" => FixtureKind::RandomOrderIdeal,
            "random_function" => FixtureKind::RandomFunction,
            "file" => FixtureKind::File,
            other => {
                return Err(Error::InvalidInput(format!("unknown fixture {other:?}")));
            }
        })
    }
}

/// A parsed fixture request.
#[derive(Clone, Debug)]
pub struct FixtureSpec {
    pub kind: FixtureKind,
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub m: Option<usize>,
    pub seed: Option<u64>,
    pub path: Option<PathBuf>,
}

/// A built fixture: either a grid function or a continuous oracle paired
/// with its product measure.
pub enum Fixture {
    Grid(BoolFunction),
    Continuous { f: ContinuousFn, measure: ProductMeasure },
}

impl FixtureSpec {
    pub fn build(&self) -> Result<Fixture> {
        let need = |v: Option<usize>, what: &str| {
            v.ok_or_else(|| Error::InvalidInput(format!("fixture needs --{what}")))
        };
        Ok(match self.kind {
            FixtureKind::AntiMajority => Fixture::Grid(anti_majority(need(self.n, "n")?)),
            FixtureKind::FigureOne => Fixture::Grid(figure_one(need(self.n, "n")?)?),
            FixtureKind::CentristDiscrete => {
                Fixture::Grid(centrist_discrete(need(self.d, "d")?, need(self.m, "m")?)?)
            }
            FixtureKind::CentristContinuous => {
                let d = need(self.d, "d")?;
                Fixture::Continuous { f: centrist_continuous(d), measure: ProductMeasure::uniform(d) }
            }
            FixtureKind::RandomOrderIdeal => {
                let n = need(self.n, "n")?;
                let d = need(self.d, "d")?;
                let mut rng = crate::trial_rng(self.seed.unwrap_or(0), 0);
                Fixture::Grid(random_order_ideal(&GridDomain::cube(n, d)?, &mut rng))
            }
            FixtureKind::RandomFunction => {
                let n = need(self.n, "n")?;
                let d = need(self.d, "d")?;
                let mut rng = crate::trial_rng(self.seed.unwrap_or(0), 0);
                Fixture::Grid(random_function(&GridDomain::cube(n, d)?, &mut rng))
            }
            FixtureKind::File => {
                let path = self
                    .path
                    .as_ref()
                    .ok_or_else(|| Error::InvalidInput("fixture needs --path".into()))?;
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
                Fixture::Grid(crate::grid::from_text(&text)?)
            }
        })
    }
}
