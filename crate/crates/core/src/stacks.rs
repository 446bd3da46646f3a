//! Line/slice/stack decomposition of violation matchings and the
//! lexicographic swap-based local search that balances stack sizes.
//!
//! Fix an axis (dimension 0 by default, but any coordinate can play the
//! role). A *line* is the set of points agreeing on every coordinate except
//! the axis; a *slice* is the set of points with a fixed axis coordinate.
//! The *stack* `(line, slice)` of a matching holds the pairs whose lower
//! endpoint lies on the line and whose upper endpoint lies in the slice.
//! Large stacks are what make per-line sampling lossy, so the local search
//! below trades them away.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::grid::{comparable, BoolFunction, GridPoint, PointOrd};
use crate::matching::ViolationMatching;

/// Identifies a line along the chosen axis: the remaining coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineId(pub Vec<usize>);

/// Identifies a slice: a single coordinate value on the chosen axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SliceId(pub usize);

pub fn line_of(p: &GridPoint, axis: usize) -> LineId {
    LineId(p.drop_axis(axis))
}

pub fn slice_of(p: &GridPoint, axis: usize) -> SliceId {
    SliceId(p.coords()[axis])
}

/// Partition of a matching by the line of the lower endpoint.
pub fn line_decomposition(
    m: &ViolationMatching,
    axis: usize,
) -> BTreeMap<LineId, Vec<(GridPoint, GridPoint)>> {
    let mut map: BTreeMap<LineId, Vec<(GridPoint, GridPoint)>> = BTreeMap::new();
    for (lower, upper) in m.pairs() {
        map.entry(line_of(lower, axis)).or_default().push((lower.clone(), upper.clone()));
    }
    map
}

/// Stack sizes of a matching: `counts[(line, slice)]` pairs with lower
/// endpoint on the line and upper endpoint in the slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackProfile {
    counts: BTreeMap<(LineId, SliceId), usize>,
}

impl StackProfile {
    pub fn counts(&self) -> &BTreeMap<(LineId, SliceId), usize> {
        &self.counts
    }

    /// Nonzero stack sizes sorted nondecreasing. Absent stacks count as
    /// size 0 and are implicit.
    pub fn lambda_vector(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.counts.values().copied().filter(|&c| c > 0).collect();
        v.sort_unstable();
        v
    }

    pub fn max_stack(&self) -> usize {
        self.counts.values().copied().max().unwrap_or(0)
    }

    /// Total pairs, i.e. the matching cardinality.
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Total pairs living in stacks of size at least `lambda`.
    pub fn mass_at_least(&self, lambda: usize) -> usize {
        self.counts.values().filter(|&&c| c >= lambda).sum()
    }
}

pub fn stack_profile(m: &ViolationMatching, axis: usize) -> StackProfile {
    let mut counts: BTreeMap<(LineId, SliceId), usize> = BTreeMap::new();
    for (lower, upper) in m.pairs() {
        *counts.entry((line_of(lower, axis), slice_of(upper, axis))).or_insert(0) += 1;
    }
    StackProfile { counts }
}

/// Lexicographic comparison of stack-size vectors sorted nondecreasing.
///
/// The shorter vector is padded with zeros at the front: both matchings
/// conceptually range over every (line, slice) pair of the same domain, so
/// absent stacks are honest zero entries.
pub fn lambda_lex_cmp(a: &[usize], b: &[usize]) -> Ordering {
    let n = a.len().max(b.len());
    for i in 0..n {
        let av = if i + a.len() >= n { a[i + a.len() - n] } else { 0 };
        let bv = if i + b.len() >= n { b[i + b.len() - n] } else { 0 };
        match av.cmp(&bv) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Decides whether replacing stack values `(a, b) -> (a-1, b-1)` and
/// `(c, d) -> (c+1, d+1)` strictly increases the sorted stack vector
/// lexicographically.
///
/// Comparing two equal-length sorted vectors that differ in at most four
/// entries reduces to the changed values alone: after cancelling common
/// values, the side holding the smallest remaining value is the
/// lexicographically smaller vector.
fn swap_improves(counts: &BTreeMap<(LineId, SliceId), usize>, keys: [&(LineId, SliceId); 4]) -> bool {
    let [ka, kb, kc, kd] = keys;
    let mut delta: Vec<(&(LineId, SliceId), i64)> = Vec::with_capacity(4);
    for (key, d) in [(ka, -1i64), (kb, -1), (kc, 1), (kd, 1)] {
        match delta.iter_mut().find(|(k, _)| *k == key) {
            Some((_, acc)) => *acc += d,
            None => delta.push((key, d)),
        }
    }
    let mut old_vals: Vec<i64> = Vec::with_capacity(4);
    let mut new_vals: Vec<i64> = Vec::with_capacity(4);
    for (key, d) in delta {
        if d == 0 {
            continue;
        }
        let old = counts.get(key).copied().unwrap_or(0) as i64;
        old_vals.push(old);
        new_vals.push(old + d);
    }
    if old_vals.is_empty() {
        return false;
    }
    old_vals.sort_unstable();
    new_vals.sort_unstable();
    // cancel values common to both multisets
    let (mut i, mut j) = (0, 0);
    let (mut old_rest, mut new_rest) = (Vec::new(), Vec::new());
    while i < old_vals.len() && j < new_vals.len() {
        match old_vals[i].cmp(&new_vals[j]) {
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
            Ordering::Less => {
                old_rest.push(old_vals[i]);
                i += 1;
            }
            Ordering::Greater => {
                new_rest.push(new_vals[j]);
                j += 1;
            }
        }
    }
    old_rest.extend_from_slice(&old_vals[i..]);
    new_rest.extend_from_slice(&new_vals[j..]);
    match (old_rest.first(), new_rest.first()) {
        (None, None) => false,
        // the side with the overall smallest changed value is lex-smaller
        (Some(&o), Some(&n)) => o < n,
        _ => unreachable!("multisets keep equal cardinality"),
    }
}

fn stack_keys(
    pairs: &[(GridPoint, GridPoint)],
    i: usize,
    j: usize,
    axis: usize,
) -> [(LineId, SliceId); 4] {
    let (x, y) = &pairs[i];
    let (w, z) = &pairs[j];
    [
        (line_of(x, axis), slice_of(y, axis)),
        (line_of(w, axis), slice_of(z, axis)),
        (line_of(x, axis), slice_of(z, axis)),
        (line_of(w, axis), slice_of(y, axis)),
    ]
}

fn improving_swap_in(
    pairs: &[(GridPoint, GridPoint)],
    counts: &BTreeMap<(LineId, SliceId), usize>,
    axis: usize,
) -> Option<(usize, usize)> {
    for i in 0..pairs.len() {
        let (x, y) = &pairs[i];
        for j in 0..pairs.len() {
            if i == j {
                continue;
            }
            let (_, z) = &pairs[j];
            // rewiring (x,y),(w,z) -> (x,z),(w,y) needs x < z < y
            if comparable(x, z) == Ok(PointOrd::Less) && comparable(z, y) == Ok(PointOrd::Less) {
                let keys = stack_keys(pairs, i, j, axis);
                if swap_improves(counts, [&keys[0], &keys[1], &keys[2], &keys[3]]) {
                    return Some((i, j));
                }
            }
        }
    }
    None
}

/// First improving swap under the fixed scan order, or `None` at a local
/// optimum. Exposed so tests can certify post-conditions.
pub fn find_improving_swap(m: &ViolationMatching, axis: usize) -> Option<(usize, usize)> {
    improving_swap_in(m.pairs(), stack_profile(m, axis).counts(), axis)
}

/// Local search over pair rewirings: given pairs `(x,y)` and `(w,z)` with
/// `x < z < y`, replacing them by `(x,z)` and `(w,y)` keeps a valid
/// matching of the same cardinality (`w < z < y` gives `w < y`). The swap
/// is applied whenever it strictly increases the sorted stack-size vector
/// lexicographically, first improvement in scan order, until no swap
/// improves. Each swap strictly increases the vector, which ranges over a
/// finite set, so the search terminates.
pub fn lex_improve(f: &BoolFunction, m: &ViolationMatching, axis: usize) -> ViolationMatching {
    debug_assert!(m.validate(f).is_ok());
    let domain = m.domain().clone();
    let mut pairs: Vec<(GridPoint, GridPoint)> = m.pairs().to_vec();
    // lower endpoints are distinct and never move; fix the scan order once
    pairs.sort_by_key(|(lower, _)| domain.rank(lower));
    let mut counts = stack_profile(m, axis).counts.clone();

    while let Some((i, j)) = improving_swap_in(&pairs, &counts, axis) {
        let keys = stack_keys(&pairs, i, j, axis);
        for key in &keys[..2] {
            let c = counts.get_mut(key).expect("stack present");
            *c -= 1;
            if *c == 0 {
                counts.remove(key);
            }
        }
        for key in &keys[2..] {
            *counts.entry(key.clone()).or_insert(0) += 1;
        }
        let (yi, zj) = (pairs[i].1.clone(), pairs[j].1.clone());
        pairs[i].1 = zj;
        pairs[j].1 = yi;
    }

    let improved = ViolationMatching::from_pairs_unchecked(domain, pairs);
    debug_assert!(improved.validate(f).is_ok());
    debug_assert_eq!(improved.len(), m.len());
    improved
}

/// One row of the stack mass report for a threshold `lambda`.
#[derive(Clone, Debug)]
pub struct StackBoundRow {
    pub lambda: usize,
    /// Total pairs in stacks of size at least `lambda`.
    pub mass: usize,
    /// `5 |D| / sqrt(lambda)`.
    pub bound: f64,
    pub ok: bool,
}

/// For each `lambda` up to the maximum stack size, compares the total mass
/// sitting in stacks of size `>= lambda` against `5 |D| / sqrt(lambda)`.
pub fn stack_bound_check(profile: &StackProfile, domain_size: usize) -> Vec<StackBoundRow> {
    (1..=profile.max_stack())
        .map(|lambda| {
            let mass = profile.mass_at_least(lambda);
            let bound = 5.0 * domain_size as f64 / (lambda as f64).sqrt();
            StackBoundRow { lambda, mass, bound, ok: mass as f64 <= bound }
        })
        .collect()
}

/// Result of removing all pairs that live in large stacks.
#[derive(Clone, Debug)]
pub struct HighStackFilter {
    pub kept: ViolationMatching,
    pub removed: usize,
    /// Stacks of size `>= threshold` were dropped: `26 k^{2/7}`.
    pub threshold: f64,
    /// Losing at most this many pairs is what the stack mass bound
    /// guarantees: `|D| / k^{1/7}`.
    pub loss_bound: f64,
}

impl HighStackFilter {
    pub fn removed_fraction_of_domain(&self) -> f64 {
        self.removed as f64 / self.kept.domain().len() as f64
    }
}

/// Removes every pair belonging to a stack of size at least `26 k^{2/7}`.
pub fn filter_high_stacks(m: &ViolationMatching, k: u64, axis: usize) -> HighStackFilter {
    assert!(k >= 1, "k must be positive");
    let threshold = 26.0 * (k as f64).powf(2.0 / 7.0);
    let profile = stack_profile(m, axis);
    let mut kept = Vec::new();
    let mut removed = 0usize;
    for (lower, upper) in m.pairs() {
        let key = (line_of(lower, axis), slice_of(upper, axis));
        let size = profile.counts.get(&key).copied().unwrap_or(0);
        if (size as f64) < threshold {
            kept.push((lower.clone(), upper.clone()));
        } else {
            removed += 1;
        }
    }
    let loss_bound = m.domain().len() as f64 / (k as f64).powf(1.0 / 7.0);
    HighStackFilter {
        kept: ViolationMatching::from_pairs_unchecked(m.domain().clone(), kept),
        removed,
        threshold,
        loss_bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{anti_majority, anti_majority_matching_b, anti_majority_matching_r};
    use crate::grid::GridDomain;
    use crate::matching::max_violation_matching;

    #[test]
    fn lambda_lex_cmp_pads_with_leading_zeros() {
        // four singletons beat one stack of four
        assert_eq!(lambda_lex_cmp(&[1, 1, 1, 1], &[4]), Ordering::Greater);
        assert_eq!(lambda_lex_cmp(&[4], &[1, 1, 1, 1]), Ordering::Less);
        assert_eq!(lambda_lex_cmp(&[1, 2], &[1, 2]), Ordering::Equal);
        assert_eq!(lambda_lex_cmp(&[], &[1]), Ordering::Less);
        assert_eq!(lambda_lex_cmp(&[1, 3], &[2, 2]), Ordering::Less);
    }

    #[test]
    fn decomposition_partitions_the_matching() {
        let f = anti_majority(5);
        let r = anti_majority_matching_r(5);
        let decomp = line_decomposition(&r, 0);
        let mut sizes: Vec<usize> = decomp.values().map(|v| v.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3, 4]);
        let total: usize = decomp.values().map(|v| v.len()).sum();
        assert_eq!(total, r.len());
        // union of parts equals the matching
        let mut collected: Vec<_> = decomp.values().flatten().cloned().collect();
        collected.sort_by_key(|(lower, _)| f.domain().rank(lower));
        let mut original = r.pairs().to_vec();
        original.sort_by_key(|(lower, _)| f.domain().rank(lower));
        assert_eq!(collected, original);
    }

    #[test]
    fn empty_matching_has_empty_decomposition_and_profile() {
        let dom = GridDomain::cube(3, 2).unwrap();
        let f = BoolFunction::dense_from_fn(dom, |_| false).unwrap();
        let m = max_violation_matching(&f).unwrap();
        assert!(line_decomposition(&m, 0).is_empty());
        assert!(stack_profile(&m, 0).lambda_vector().is_empty());
        assert!(lex_improve(&f, &m, 0).is_empty());
    }

    #[test]
    fn reference_matching_profiles() {
        let r = anti_majority_matching_r(5);
        assert_eq!(stack_profile(&r, 0).lambda_vector(), vec![1, 2, 3, 4]);
        let b = anti_majority_matching_b(5);
        assert_eq!(stack_profile(&b, 0).max_stack(), 1);
    }

    #[test]
    fn lex_improve_leaves_balanced_matching_alone() {
        let f = anti_majority(5);
        let b = anti_majority_matching_b(5);
        assert!(find_improving_swap(&b, 0).is_none());
        let improved = lex_improve(&f, &b, 0);
        assert_eq!(stack_profile(&improved, 0).lambda_vector(), stack_profile(&b, 0).lambda_vector());
    }

    #[test]
    fn lex_improve_strictly_improves_the_stacked_matching() {
        let f = anti_majority(5);
        let r = anti_majority_matching_r(5);
        let improved = lex_improve(&f, &r, 0);
        assert_eq!(improved.len(), r.len());
        improved.validate(&f).unwrap();
        let before = stack_profile(&r, 0).lambda_vector();
        let after = stack_profile(&improved, 0).lambda_vector();
        assert_eq!(lambda_lex_cmp(&after, &before), Ordering::Greater);
        assert!(find_improving_swap(&improved, 0).is_none());
    }

    #[test]
    fn incremental_improvement_rule_agrees_with_full_comparison() {
        use crate::matching::max_violation_matching;
        use crate::trial_rng;
        for trial in 0..40u64 {
            let dom = GridDomain::new(vec![6, 5]).unwrap();
            let f = crate::fixtures::random_function(&dom, &mut trial_rng(77, trial));
            let m = max_violation_matching(&f).unwrap();
            let pairs = m.pairs();
            let profile = stack_profile(&m, 0);
            let before = profile.lambda_vector();
            for i in 0..pairs.len() {
                for j in 0..pairs.len() {
                    if i == j {
                        continue;
                    }
                    let (x, y) = &pairs[i];
                    let (_, z) = &pairs[j];
                    if comparable(x, z) != Ok(PointOrd::Less)
                        || comparable(z, y) != Ok(PointOrd::Less)
                    {
                        continue;
                    }
                    let keys = stack_keys(pairs, i, j, 0);
                    let fast = swap_improves(
                        profile.counts(),
                        [&keys[0], &keys[1], &keys[2], &keys[3]],
                    );
                    // recompute the full vector after the hypothetical swap
                    let mut counts = profile.counts().clone();
                    for key in &keys[..2] {
                        *counts.get_mut(key).unwrap() -= 1;
                    }
                    for key in &keys[2..] {
                        *counts.entry(key.clone()).or_insert(0) += 1;
                    }
                    let mut after: Vec<usize> =
                        counts.values().copied().filter(|&c| c > 0).collect();
                    after.sort_unstable();
                    let slow = lambda_lex_cmp(&after, &before) == Ordering::Greater;
                    assert_eq!(fast, slow, "trial {trial}, swap ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn stack_bound_rows_for_reference_matching() {
        let r = anti_majority_matching_r(5);
        let rows = stack_bound_check(&stack_profile(&r, 0), 25);
        let row4 = rows.iter().find(|r| r.lambda == 4).unwrap();
        assert_eq!(row4.mass, 4);
        assert!((row4.bound - 62.5).abs() < 1e-12);
        assert!(row4.ok);
        assert!(rows.iter().all(|r| r.ok));
    }

    #[test]
    fn filter_keeps_small_stacks() {
        let b = anti_majority_matching_b(5);
        let out = filter_high_stacks(&b, 1, 0);
        assert_eq!(out.kept.len(), b.len());
        assert_eq!(out.removed, 0);

        let r = anti_majority_matching_r(5);
        let out = filter_high_stacks(&r, 1, 0);
        // max stack is 4 < 26
        assert_eq!(out.kept.len(), r.len());
    }

    #[test]
    fn filter_drops_a_synthetic_large_stack() {
        // 30 pairs with lowers on one line and uppers in one slice: a
        // single stack of size 30 >= 26 k^{2/7} at k = 1, removed entirely
        let dom = GridDomain::new(vec![61, 30]).unwrap();
        let f = BoolFunction::dense_from_fn(dom.clone(), |p| p.coords()[0] <= 30).unwrap();
        let pairs: Vec<(GridPoint, GridPoint)> = (1..=30)
            .map(|i| (dom.point(vec![i, 1]).unwrap(), dom.point(vec![61, i]).unwrap()))
            .collect();
        let m = ViolationMatching::from_pairs(&f, pairs).unwrap();
        assert_eq!(stack_profile(&m, 0).max_stack(), 30);
        // all lowers share one line
        assert_eq!(line_decomposition(&m, 0).len(), 1);
        let out = filter_high_stacks(&m, 1, 0);
        assert_eq!(out.removed, 30);
        assert!(out.kept.is_empty());
    }

    #[test]
    fn singleton_stacks_satisfy_every_lambda_row() {
        let b = anti_majority_matching_b(5);
        let rows = stack_bound_check(&stack_profile(&b, 0), 25);
        assert_eq!(rows.len(), 1); // max stack is 1
        assert_eq!(rows[0].mass, 10);
        assert!((rows[0].bound - 125.0).abs() < 1e-12);
        assert!(rows[0].ok);
    }
}
