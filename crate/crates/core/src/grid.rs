//! Hypergrid domains, points, the coordinate-wise partial order, Boolean
//! functions over grids, and restrictions to sub-grids.
//!
//! Coordinates are 1-based; internal ranks are 0-based lexicographic with
//! the first coordinate most significant. Dense tables store one byte per
//! point in rank order and are capped at [`DENSE_CAP`] points. Black-box
//! oracles memoize by point, which both makes repeated queries free and
//! keeps the non-adaptive query count honest (distinct points only).

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex};

use crate::{Error, Result};

/// Largest point count a dense table may materialize.
pub const DENSE_CAP: usize = 1 << 26;

fn check_dense_cap(domain: &GridDomain) -> Result<()> {
    match domain.point_count() {
        Some(total) if total <= DENSE_CAP => Ok(()),
        Some(total) => {
            Err(Error::DomainTooLarge { points: total as u128, cap: DENSE_CAP as u128 })
        }
        None => {
            let points = domain.dims().iter().fold(1u128, |a, &n| a.saturating_mul(n as u128));
            Err(Error::DomainTooLarge { points, cap: DENSE_CAP as u128 })
        }
    }
}

/// A rectangular hypergrid `[n_1] x ... x [n_d]`.
///
/// The point count may exceed the native integer range (huge lazy
/// restriction domains); such domains support coordinate-wise access but
/// reject every dense or rank-based operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridDomain {
    dims: Vec<usize>,
    total: Option<usize>,
}

impl GridDomain {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidInput("domain needs at least one dimension".into()));
        }
        let mut total = Some(1usize);
        for (i, &n) in dims.iter().enumerate() {
            if n == 0 {
                return Err(Error::CoordOutOfRange { dim: i + 1, coord: 0, size: 0 });
            }
            total = total.and_then(|t| t.checked_mul(n));
        }
        Ok(GridDomain { dims, total })
    }

    /// Square grid `[n]^d`.
    pub fn cube(n: usize, d: usize) -> Result<Self> {
        GridDomain::new(vec![n; d])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dimension(&self) -> usize {
        self.dims.len()
    }

    /// Total number of points; panics on domains beyond the native
    /// integer range (see [`GridDomain::point_count`]).
    pub fn len(&self) -> usize {
        self.total.expect("domain larger than the native integer range")
    }

    /// Total number of points, or `None` when the product overflows the
    /// native integer range.
    pub fn point_count(&self) -> Option<usize> {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        false // every dimension has size >= 1
    }

    /// Row-major strides: `strides[i]` is the rank step of a unit move in
    /// dimension `i`.
    pub fn strides(&self) -> Vec<usize> {
        let d = self.dims.len();
        let mut s = vec![1usize; d];
        for i in (0..d.saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.dims[i + 1];
        }
        s
    }

    /// Validates coordinates and wraps them in a point.
    pub fn point(&self, coords: Vec<usize>) -> Result<GridPoint> {
        if coords.len() != self.dims.len() {
            return Err(Error::DimensionMismatch { expected: self.dims.len(), found: coords.len() });
        }
        for (i, (&c, &n)) in coords.iter().zip(&self.dims).enumerate() {
            if c < 1 || c > n {
                return Err(Error::CoordOutOfRange { dim: i + 1, coord: c, size: n });
            }
        }
        Ok(GridPoint { coords })
    }

    pub fn contains(&self, p: &GridPoint) -> bool {
        p.coords.len() == self.dims.len()
            && p.coords.iter().zip(&self.dims).all(|(&c, &n)| (1..=n).contains(&c))
    }

    /// 0-based lexicographic rank, first coordinate most significant.
    pub fn rank(&self, p: &GridPoint) -> usize {
        debug_assert!(self.contains(p));
        let mut r = 0usize;
        for (&c, &n) in p.coords.iter().zip(&self.dims) {
            r = r * n + (c - 1);
        }
        r
    }

    pub fn point_at(&self, mut rank: usize) -> GridPoint {
        debug_assert!(self.total.is_some_and(|t| rank < t));
        let d = self.dims.len();
        let mut coords = vec![1usize; d];
        for i in (0..d).rev() {
            coords[i] = rank % self.dims[i] + 1;
            rank /= self.dims[i];
        }
        GridPoint { coords }
    }

    /// Iterates all points in rank order (dense-capable domains only).
    pub fn iter_points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        (0..self.len()).map(move |r| self.point_at(r))
    }
}

/// A point of a hypergrid; coordinate `i` lies in `[1, n_i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    coords: Vec<usize>,
}

impl GridPoint {
    /// Wraps raw coordinates without domain validation; use
    /// [`GridDomain::point`] when a range check is wanted.
    pub fn new(coords: Vec<usize>) -> Self {
        GridPoint { coords }
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    /// The projection that drops the first coordinate.
    pub fn drop_first(&self) -> &[usize] {
        &self.coords[1..]
    }

    /// Projection dropping coordinate `axis` (0-based).
    pub fn drop_axis(&self, axis: usize) -> Vec<usize> {
        let mut v = Vec::with_capacity(self.coords.len() - 1);
        v.extend_from_slice(&self.coords[..axis]);
        v.extend_from_slice(&self.coords[axis + 1..]);
        v
    }
}

/// Outcome of comparing two points in the coordinate-wise partial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointOrd {
    Less,
    Greater,
    Equal,
    Incomparable,
}

/// Coordinate-wise comparison: `Less` iff `x_i <= y_i` for all `i` and
/// `x != y`.
pub fn comparable(x: &GridPoint, y: &GridPoint) -> Result<PointOrd> {
    if x.coords.len() != y.coords.len() {
        return Err(Error::DimensionMismatch { expected: x.coords.len(), found: y.coords.len() });
    }
    let mut le = true;
    let mut ge = true;
    for (&a, &b) in x.coords.iter().zip(&y.coords) {
        if a < b {
            ge = false;
        } else if a > b {
            le = false;
        }
    }
    Ok(match (le, ge) {
        (true, true) => PointOrd::Equal,
        (true, false) => PointOrd::Less,
        (false, true) => PointOrd::Greater,
        (false, false) => PointOrd::Incomparable,
    })
}

/// `true` iff `x` strictly precedes `y` in the partial order.
pub fn dominated_by(x: &GridPoint, y: &GridPoint) -> bool {
    matches!(comparable(x, y), Ok(PointOrd::Less))
}

enum Eval {
    Dense(Vec<u8>),
    Oracle(Oracle),
}

struct Oracle {
    query: Box<dyn Fn(&GridPoint) -> bool + Send + Sync>,
    // keyed by coordinates: ranks can overflow on huge lazy domains
    cache: Mutex<HashMap<Vec<usize>, bool>>,
    raw: AtomicU64,
}

/// A queryable Boolean function over a hypergrid.
///
/// Either a dense value table indexed by rank, or a black-box callback with
/// a memoization cache and query counters. Clones share the same evaluation
/// state, so a clone of an oracle sees (and contributes to) the same counts.
#[derive(Clone)]
pub struct BoolFunction {
    inner: Arc<Inner>,
}

struct Inner {
    domain: GridDomain,
    eval: Eval,
}

impl BoolFunction {
    /// Dense function from a 0/1 table in rank order.
    pub fn from_table(domain: GridDomain, values: Vec<u8>) -> Result<Self> {
        check_dense_cap(&domain)?;
        if values.len() != domain.len() {
            return Err(Error::InvalidInput(format!(
                "table has {} entries for a domain of {} points",
                values.len(),
                domain.len()
            )));
        }
        if values.iter().any(|&v| v > 1) {
            return Err(Error::InvalidInput("table values must be 0 or 1".into()));
        }
        Ok(BoolFunction { inner: Arc::new(Inner { domain, eval: Eval::Dense(values) }) })
    }

    /// Dense function materialized by evaluating `f` at every point.
    pub fn dense_from_fn<F>(domain: GridDomain, f: F) -> Result<Self>
    where
        F: Fn(&GridPoint) -> bool,
    {
        check_dense_cap(&domain)?;
        let values: Vec<u8> = domain.iter_points().map(|p| f(&p) as u8).collect();
        BoolFunction::from_table(domain, values)
    }

    /// Lazy black-box oracle with memoization keyed by point rank.
    pub fn from_oracle<F>(domain: GridDomain, f: F) -> Self
    where
        F: Fn(&GridPoint) -> bool + Send + Sync + 'static,
    {
        BoolFunction {
            inner: Arc::new(Inner {
                domain,
                eval: Eval::Oracle(Oracle {
                    query: Box::new(f),
                    cache: Mutex::new(HashMap::new()),
                    raw: AtomicU64::new(0),
                }),
            }),
        }
    }

    pub fn domain(&self) -> &GridDomain {
        &self.inner.domain
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.inner.eval, Eval::Dense(_))
    }

    /// The dense table, if this function is dense.
    pub fn values(&self) -> Option<&[u8]> {
        match &self.inner.eval {
            Eval::Dense(v) => Some(v),
            Eval::Oracle(_) => None,
        }
    }

    pub fn eval(&self, p: &GridPoint) -> bool {
        debug_assert!(self.inner.domain.contains(p), "point outside domain");
        match &self.inner.eval {
            Eval::Dense(v) => v[self.inner.domain.rank(p)] == 1,
            Eval::Oracle(o) => {
                o.raw.fetch_add(1, AtomicOrdering::Relaxed);
                let mut cache = o.cache.lock().unwrap();
                if let Some(&v) = cache.get(p.coords()) {
                    return v;
                }
                let v = (o.query)(p);
                cache.insert(p.coords().to_vec(), v);
                v
            }
        }
    }

    pub fn eval_rank(&self, rank: usize) -> bool {
        match &self.inner.eval {
            Eval::Dense(v) => v[rank] == 1,
            Eval::Oracle(_) => self.eval(&self.inner.domain.point_at(rank)),
        }
    }

    /// Number of distinct points queried so far (0 for dense tables).
    pub fn query_count(&self) -> u64 {
        match &self.inner.eval {
            Eval::Dense(_) => 0,
            Eval::Oracle(o) => o.cache.lock().unwrap().len() as u64,
        }
    }

    /// Raw query invocations, counting repeats before memoization.
    pub fn raw_query_count(&self) -> u64 {
        match &self.inner.eval {
            Eval::Dense(_) => 0,
            Eval::Oracle(o) => o.raw.load(AtomicOrdering::Relaxed),
        }
    }

    /// Sorted coordinates of every point queried so far (empty for dense
    /// tables).
    pub fn queried_points(&self) -> Vec<Vec<usize>> {
        match &self.inner.eval {
            Eval::Dense(_) => Vec::new(),
            Eval::Oracle(o) => {
                let mut v: Vec<Vec<usize>> = o.cache.lock().unwrap().keys().cloned().collect();
                v.sort_unstable();
                v
            }
        }
    }

    /// Oracle view of this function that records which points get touched.
    pub fn counting_view(&self) -> BoolFunction {
        let base = self.clone();
        BoolFunction::from_oracle(self.domain().clone(), move |p| base.eval(p))
    }

    /// Materializes a dense copy (evaluating every point of the domain).
    pub fn to_dense(&self) -> Result<BoolFunction> {
        match &self.inner.eval {
            Eval::Dense(_) => Ok(self.clone()),
            Eval::Oracle(_) => BoolFunction::dense_from_fn(self.domain().clone(), |p| self.eval(p)),
        }
    }

    /// Dense copy with every value flipped.
    pub fn negated_dense(&self) -> Result<BoolFunction> {
        let dense = self.to_dense()?;
        let flipped: Vec<u8> = dense.values().unwrap().iter().map(|&v| 1 - v).collect();
        BoolFunction::from_table(dense.domain().clone(), flipped)
    }

    /// Fraction of points where the function is 1 (dense only).
    pub fn ones_count(&self) -> Result<usize> {
        let v = self.values().ok_or(Error::NotDense("ones_count"))?;
        Ok(v.iter().map(|&b| b as usize).sum())
    }
}

/// `true` iff `f(x) <= f(y)` whenever `x` precedes `y`.
///
/// Checks every coordinate-successor edge; this suffices because any
/// comparable pair is connected by single-coordinate increments.
pub fn is_monotone(f: &BoolFunction) -> Result<bool> {
    let values = f.values().ok_or(Error::NotDense("is_monotone"))?;
    let domain = f.domain();
    let dims = domain.dims();
    let strides = domain.strides();
    let d = dims.len();
    let mut coords = vec![1usize; d];
    for rank in 0..domain.len() {
        for i in 0..d {
            if coords[i] < dims[i] && values[rank] > values[rank + strides[i]] {
                return Ok(false);
            }
        }
        // odometer increment
        for i in (0..d).rev() {
            if coords[i] < dims[i] {
                coords[i] += 1;
                break;
            }
            coords[i] = 1;
        }
    }
    Ok(true)
}

/// Per-dimension sorted sample multisets defining a reduced grid.
///
/// Duplicates are kept as distinct indexed copies; equal coordinates give
/// equal values, so copies are immediate neighbors that can never violate
/// monotonicity between themselves.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictionSpec<T> {
    samples: Vec<Vec<T>>,
}

pub type GridRestriction = RestrictionSpec<usize>;
pub type RealRestriction = RestrictionSpec<f64>;

impl<T: PartialOrd + Copy> RestrictionSpec<T> {
    /// Builds a spec, sorting each dimension's samples ascending.
    pub fn new(mut samples: Vec<Vec<T>>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("restriction needs at least one dimension".into()));
        }
        for dim in &mut samples {
            if dim.is_empty() {
                return Err(Error::InvalidInput("restriction dimension with no samples".into()));
            }
            if dim.iter().any(|v| v.partial_cmp(v).is_none()) {
                return Err(Error::InvalidInput("restriction sample is not comparable (NaN)".into()));
            }
            dim.sort_by(|a, b| a.partial_cmp(b).expect("checked comparable"));
        }
        Ok(RestrictionSpec { samples })
    }

    pub fn dimension(&self) -> usize {
        self.samples.len()
    }

    /// Sizes `k_1..k_d` of the reduced grid.
    pub fn reduced_dims(&self) -> Vec<usize> {
        self.samples.iter().map(|s| s.len()).collect()
    }

    pub fn samples(&self) -> &[Vec<T>] {
        &self.samples
    }

    /// Coordinate `t_{dim, index}` (both 0-based here).
    pub fn coord(&self, dim: usize, index: usize) -> T {
        self.samples[dim][index]
    }

    /// Maps a reduced-grid index point to original coordinates.
    pub fn map_index_point(&self, z: &GridPoint) -> Vec<T> {
        z.coords().iter().enumerate().map(|(i, &zi)| self.samples[i][zi - 1]).collect()
    }
}

impl GridRestriction {
    /// The identity spec: every coordinate of the domain, in order.
    pub fn identity(domain: &GridDomain) -> Self {
        RestrictionSpec { samples: domain.dims().iter().map(|&n| (1..=n).collect()).collect() }
    }

    pub fn validate_for(&self, domain: &GridDomain) -> Result<()> {
        if self.dimension() != domain.dimension() {
            return Err(Error::DimensionMismatch {
                expected: domain.dimension(),
                found: self.dimension(),
            });
        }
        for (i, (dim, &n)) in self.samples.iter().zip(domain.dims()).enumerate() {
            for &c in dim {
                if c < 1 || c > n {
                    return Err(Error::CoordOutOfRange { dim: i + 1, coord: c, size: n });
                }
            }
        }
        Ok(())
    }
}

/// `f` restricted to the sampled sub-grid, as a lazy memoized oracle over
/// `[k_1] x ... x [k_d]`. The full reduced table is never forced; each
/// distinct index vector issues at most one underlying query.
pub fn restrict(f: &BoolFunction, spec: &GridRestriction) -> Result<BoolFunction> {
    spec.validate_for(f.domain())?;
    let reduced = GridDomain::new(spec.reduced_dims())?;
    let parent = f.clone();
    let spec = spec.clone();
    Ok(BoolFunction::from_oracle(reduced, move |z| {
        parent.eval(&GridPoint::new(spec.map_index_point(z)))
    }))
}

/// A Boolean function over `R^d` given as a point-queryable black box.
#[derive(Clone)]
pub struct ContinuousFn {
    inner: Arc<ContInner>,
}

type RealPredicate = Box<dyn Fn(&[f64]) -> bool + Send + Sync>;

struct ContInner {
    dimension: usize,
    f: RealPredicate,
}

impl ContinuousFn {
    pub fn new<F>(dimension: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> bool + Send + Sync + 'static,
    {
        ContinuousFn { inner: Arc::new(ContInner { dimension, f: Box::new(f) }) }
    }

    pub fn dimension(&self) -> usize {
        self.inner.dimension
    }

    pub fn eval(&self, x: &[f64]) -> bool {
        debug_assert_eq!(x.len(), self.inner.dimension);
        (self.inner.f)(x)
    }
}

/// Restriction of a continuous function to sampled real coordinates,
/// exposed as a lazy grid function over `[k]^d`.
pub fn restrict_continuous(f: &ContinuousFn, spec: &RealRestriction) -> Result<BoolFunction> {
    if spec.dimension() != f.dimension() {
        return Err(Error::DimensionMismatch { expected: f.dimension(), found: spec.dimension() });
    }
    let reduced = GridDomain::new(spec.reduced_dims())?;
    let parent = f.clone();
    let spec = spec.clone();
    Ok(BoolFunction::from_oracle(reduced, move |z| parent.eval(&spec.map_index_point(z))))
}

/// Serializes a dense function: header `d n_1 ... n_d`, then one line of
/// 0/1 characters in rank order.
pub fn to_text(f: &BoolFunction) -> Result<String> {
    let values = f.values().ok_or(Error::NotDense("to_text"))?;
    let mut out = String::with_capacity(values.len() + 32);
    out.push_str(&f.domain().dimension().to_string());
    for &n in f.domain().dims() {
        out.push(' ');
        out.push_str(&n.to_string());
    }
    out.push('\n');
    for &v in values {
        out.push(if v == 1 { '1' } else { '0' });
    }
    out.push('\n');
    Ok(out)
}

/// Parses the text format written by [`to_text`]. Rejects length mismatch.
pub fn from_text(s: &str) -> Result<BoolFunction> {
    let mut lines = s.lines();
    let header = lines.next().ok_or_else(|| Error::InvalidInput("empty input".into()))?;
    let mut nums = header.split_whitespace().map(|t| {
        t.parse::<usize>().map_err(|_| Error::InvalidInput(format!("bad header token {t:?}")))
    });
    let d = nums.next().ok_or_else(|| Error::InvalidInput("missing dimension count".into()))??;
    let dims: Vec<usize> = nums.collect::<Result<_>>()?;
    if dims.len() != d {
        return Err(Error::InvalidInput(format!("header promises {d} sizes, found {}", dims.len())));
    }
    let domain = GridDomain::new(dims)?;
    let body = lines.next().unwrap_or("");
    let values: Vec<u8> = body
        .chars()
        .map(|c| match c {
            '0' => Ok(0u8),
            '1' => Ok(1u8),
            other => Err(Error::InvalidInput(format!("bad value character {other:?}"))),
        })
        .collect::<Result<_>>()?;
    if values.len() != domain.len() {
        return Err(Error::InvalidInput(format!(
            "value line has {} characters for a domain of {} points",
            values.len(),
            domain.len()
        )));
    }
    BoolFunction::from_table(domain, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparable_examples() {
        let x = GridPoint::new(vec![1, 2]);
        let y = GridPoint::new(vec![2, 2]);
        assert_eq!(comparable(&x, &y).unwrap(), PointOrd::Less);
        assert_eq!(comparable(&y, &x).unwrap(), PointOrd::Greater);
        let z = GridPoint::new(vec![1, 1]);
        assert_eq!(comparable(&z, &z).unwrap(), PointOrd::Equal);
        let a = GridPoint::new(vec![1, 3]);
        let b = GridPoint::new(vec![2, 1]);
        assert_eq!(comparable(&a, &b).unwrap(), PointOrd::Incomparable);
        assert!(comparable(&a, &GridPoint::new(vec![1])).is_err());
    }

    #[test]
    fn comparable_is_a_partial_order_on_3x3x3() {
        // reflexivity, antisymmetry, transitivity by exhaustive check
        let dom = GridDomain::cube(3, 3).unwrap();
        let pts: Vec<GridPoint> = dom.iter_points().collect();
        for x in &pts {
            assert_eq!(comparable(x, x).unwrap(), PointOrd::Equal);
        }
        for x in &pts {
            for y in &pts {
                let xy = comparable(x, y).unwrap();
                let yx = comparable(y, x).unwrap();
                match xy {
                    PointOrd::Less => assert_eq!(yx, PointOrd::Greater),
                    PointOrd::Greater => assert_eq!(yx, PointOrd::Less),
                    PointOrd::Equal => assert_eq!(x, y),
                    PointOrd::Incomparable => assert_eq!(yx, PointOrd::Incomparable),
                }
                for z in &pts {
                    if xy == PointOrd::Less && comparable(y, z).unwrap() == PointOrd::Less {
                        assert_eq!(comparable(x, z).unwrap(), PointOrd::Less);
                    }
                }
            }
        }
    }

    #[test]
    fn rank_roundtrip() {
        let dom = GridDomain::new(vec![3, 4, 2]).unwrap();
        for r in 0..dom.len() {
            let p = dom.point_at(r);
            assert!(dom.contains(&p));
            assert_eq!(dom.rank(&p), r);
        }
        // first coordinate most significant
        assert_eq!(dom.rank(&dom.point(vec![1, 1, 1]).unwrap()), 0);
        assert_eq!(dom.rank(&dom.point(vec![2, 1, 1]).unwrap()), 8);
    }

    #[test]
    fn domain_rejects_bad_shapes() {
        assert!(GridDomain::new(vec![]).is_err());
        assert!(GridDomain::new(vec![3, 0]).is_err());
        // oversize domains construct but refuse dense access
        let huge = GridDomain::new(vec![usize::MAX, usize::MAX]).unwrap();
        assert!(huge.point_count().is_none());
        assert!(BoolFunction::dense_from_fn(huge, |_| false).is_err());
    }

    #[test]
    fn monotone_checks() {
        let dom = GridDomain::new(vec![2]).unwrap();
        let constant = BoolFunction::from_table(dom.clone(), vec![0, 0]).unwrap();
        assert!(is_monotone(&constant).unwrap());
        let anti = BoolFunction::from_table(dom, vec![1, 0]).unwrap();
        assert!(!is_monotone(&anti).unwrap());
    }

    #[test]
    fn scan_catches_the_anti_majority_violation() {
        let dom = GridDomain::cube(5, 2).unwrap();
        let f =
            BoolFunction::dense_from_fn(dom.clone(), |p| p.coords()[0] + p.coords()[1] <= 5)
                .unwrap();
        assert!(!is_monotone(&f).unwrap());
        // (1,4) -> (2,4) is a violated successor edge
        let lower = dom.point(vec![1, 4]).unwrap();
        let upper = dom.point(vec![2, 4]).unwrap();
        assert!(f.eval(&lower) && !f.eval(&upper));
        assert_eq!(comparable(&lower, &upper).unwrap(), PointOrd::Less);
    }

    #[test]
    fn oracle_memoizes_and_counts_distinct_points() {
        let dom = GridDomain::cube(4, 2).unwrap();
        let f = BoolFunction::from_oracle(dom.clone(), |p| p.coords()[0] >= 2);
        let p = dom.point(vec![2, 3]).unwrap();
        assert!(f.eval(&p));
        assert!(f.eval(&p));
        assert!(f.eval(&p));
        assert_eq!(f.query_count(), 1);
        assert_eq!(f.raw_query_count(), 3);
        assert_eq!(f.queried_points(), vec![p.coords().to_vec()]);
    }

    #[test]
    fn identity_restriction_is_extensionally_equal() {
        let dom = GridDomain::new(vec![3, 2]).unwrap();
        let f = BoolFunction::dense_from_fn(dom.clone(), |p| {
            (p.coords()[0] + p.coords()[1]) % 2 == 0
        })
        .unwrap();
        let spec = GridRestriction::identity(&dom);
        let g = restrict(&f, &spec).unwrap();
        assert_eq!(g.domain().dims(), dom.dims());
        for p in dom.iter_points() {
            assert_eq!(f.eval(&p), g.eval(&p));
        }
    }

    #[test]
    fn lazy_restriction_queries_each_index_vector_once() {
        let dom = GridDomain::cube(5, 2).unwrap();
        let base = BoolFunction::dense_from_fn(dom.clone(), |p| p.coords()[0] + p.coords()[1] <= 5)
            .unwrap();
        let counted = base.counting_view();
        let spec = GridRestriction::new(vec![vec![1, 5, 5], vec![2, 2, 4]]).unwrap();
        let g = restrict(&counted, &spec).unwrap();
        for _ in 0..3 {
            for z in g.domain().iter_points() {
                g.eval(&z);
            }
        }
        // 9 index vectors, but duplicated coordinates collapse to 2x2 = 4
        // distinct original points; memoization must not re-query any.
        assert_eq!(g.query_count(), 9);
        assert_eq!(counted.query_count(), 4);
    }

    #[test]
    fn duplicate_samples_become_adjacent_equal_columns() {
        let dom = GridDomain::cube(3, 2).unwrap();
        let f = BoolFunction::dense_from_fn(dom, |p| p.coords()[0] == 2).unwrap();
        let spec = GridRestriction::new(vec![vec![2, 2], vec![1, 1]]).unwrap();
        let g = restrict(&f, &spec).unwrap().to_dense().unwrap();
        assert_eq!(g.values().unwrap(), &[1, 1, 1, 1]);
        assert!(is_monotone(&g).unwrap());
    }

    #[test]
    fn restriction_rejects_out_of_range_samples() {
        let dom = GridDomain::cube(3, 1).unwrap();
        let f = BoolFunction::from_table(dom, vec![0, 0, 1]).unwrap();
        let spec = GridRestriction::new(vec![vec![1, 4]]).unwrap();
        assert!(restrict(&f, &spec).is_err());
    }

    #[test]
    fn text_roundtrip_and_mismatch_rejection() {
        let dom = GridDomain::new(vec![2, 3]).unwrap();
        let f = BoolFunction::from_table(dom, vec![1, 0, 1, 0, 0, 1]).unwrap();
        let text = to_text(&f).unwrap();
        assert_eq!(text, "2 2 3\n101001\n");
        let g = from_text(&text).unwrap();
        assert_eq!(g.values().unwrap(), f.values().unwrap());
        assert!(from_text("2 2 3\n10100\n").is_err());
        assert!(from_text("2 2 3\n10100x\n").is_err());
        assert!(from_text("1 2 3\n101001\n").is_err());
    }
}
