//! Violation graph, maximum-cardinality violation matchings, and the exact
//! distance to monotonicity.
//!
//! The violation graph has an edge `(x, y)` whenever `x` precedes `y`,
//! `f(x) = 1` and `f(y) = 0`. A maximum matching in it has exactly
//! `eps_f * |D|` edges, so matching cardinality gives the distance exactly.
//!
//! Matchings are computed by Hopcroft-Karp over *implicit* edges: dominance
//! is tested on demand instead of materializing the quadratic edge set,
//! since memory is the binding constraint at the sizes the exact engine
//! targets.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

use crate::grid::{comparable, BoolFunction, GridDomain, GridPoint, PointOrd};
use crate::{Error, Frac, Result};

/// A set of vertex-disjoint violation pairs `(lower, upper)` with
/// `lower` preceding `upper`, `f(lower) = 1`, `f(upper) = 0`.
#[derive(Clone, Debug)]
pub struct ViolationMatching {
    domain: GridDomain,
    pairs: Vec<(GridPoint, GridPoint)>,
}

impl ViolationMatching {
    /// Builds a matching after checking every pair and vertex-disjointness.
    /// Pairs are kept sorted by lower-endpoint rank.
    pub fn from_pairs(
        f: &BoolFunction,
        mut pairs: Vec<(GridPoint, GridPoint)>,
    ) -> Result<ViolationMatching> {
        let domain = f.domain().clone();
        pairs.sort_by_key(|(lower, _)| domain.rank(lower));
        let m = ViolationMatching { domain, pairs };
        m.validate(f)?;
        Ok(m)
    }

    pub(crate) fn from_pairs_unchecked(
        domain: GridDomain,
        pairs: Vec<(GridPoint, GridPoint)>,
    ) -> ViolationMatching {
        ViolationMatching { domain, pairs }
    }

    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(GridPoint, GridPoint)] {
        &self.pairs
    }

    /// Checks the violation predicate on every pair and endpoint
    /// disjointness across the whole list.
    pub fn validate(&self, f: &BoolFunction) -> Result<()> {
        let mut seen: HashSet<&[usize]> = HashSet::with_capacity(2 * self.pairs.len());
        for (lower, upper) in &self.pairs {
            if comparable(lower, upper)? != PointOrd::Less {
                return Err(Error::Inconsistent(format!(
                    "pair {:?} -> {:?} is not strictly increasing",
                    lower.coords(),
                    upper.coords()
                )));
            }
            if !f.eval(lower) || f.eval(upper) {
                return Err(Error::Inconsistent(format!(
                    "pair {:?} -> {:?} is not a violation",
                    lower.coords(),
                    upper.coords()
                )));
            }
            for p in [lower, upper] {
                if !seen.insert(p.coords()) {
                    return Err(Error::Inconsistent(format!(
                        "endpoint {:?} used twice",
                        p.coords()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Maximality certificate: re-runs one augmenting-path search over the
    /// full violation graph and reports whether none exists.
    pub fn verify_maximum(&self, f: &BoolFunction) -> Result<bool> {
        self.validate(f)?;
        let graph = ViolationGraph::build(f)?;
        let mut pair_right: Vec<Option<usize>> = vec![None; graph.zeros.len()];
        let mut pair_left: Vec<Option<usize>> = vec![None; graph.ones.len()];
        let one_index: std::collections::HashMap<usize, usize> =
            graph.ones.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let zero_index: std::collections::HashMap<usize, usize> =
            graph.zeros.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        for (lower, upper) in &self.pairs {
            let u = one_index[&self.domain.rank(lower)];
            let v = zero_index[&self.domain.rank(upper)];
            pair_left[u] = Some(v);
            pair_right[v] = Some(u);
        }
        for u in 0..graph.ones.len() {
            if pair_left[u].is_none() {
                let mut visited = vec![false; graph.ones.len()];
                if kuhn_augment(&graph, u, &mut visited, &mut pair_left, &mut pair_right) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Implicit bipartite violation graph: 1-points on the left, 0-points on
/// the right, edge iff the 1-point is dominated by the 0-point.
struct ViolationGraph {
    d: usize,
    ones: Vec<usize>,
    zeros: Vec<usize>,
    one_coords: Vec<usize>,
    zero_coords: Vec<usize>,
}

impl ViolationGraph {
    fn build(f: &BoolFunction) -> Result<ViolationGraph> {
        let values = f.values().ok_or(Error::NotDense("max_violation_matching"))?;
        let domain = f.domain();
        let d = domain.dimension();
        let mut ones = Vec::new();
        let mut zeros = Vec::new();
        let mut one_coords = Vec::new();
        let mut zero_coords = Vec::new();
        let dims = domain.dims();
        let mut coords = vec![1usize; d];
        for (rank, &v) in values.iter().enumerate() {
            if v == 1 {
                ones.push(rank);
                one_coords.extend_from_slice(&coords);
            } else {
                zeros.push(rank);
                zero_coords.extend_from_slice(&coords);
            }
            for i in (0..d).rev() {
                if coords[i] < dims[i] {
                    coords[i] += 1;
                    break;
                }
                coords[i] = 1;
            }
        }
        Ok(ViolationGraph { d, ones, zeros, one_coords, zero_coords })
    }

    /// Edge test: 1-point `u` coordinate-wise below 0-point `v`.
    /// (Equality is impossible: the endpoints carry different values.)
    #[inline]
    fn edge(&self, u: usize, v: usize) -> bool {
        let a = &self.one_coords[u * self.d..(u + 1) * self.d];
        let b = &self.zero_coords[v * self.d..(v + 1) * self.d];
        a.iter().zip(b).all(|(x, y)| x <= y)
    }
}

fn kuhn_augment(
    g: &ViolationGraph,
    u: usize,
    visited: &mut [bool],
    pair_left: &mut [Option<usize>],
    pair_right: &mut [Option<usize>],
) -> bool {
    visited[u] = true;
    for v in 0..g.zeros.len() {
        if g.edge(u, v) {
            match pair_right[v] {
                None => {
                    pair_left[u] = Some(v);
                    pair_right[v] = Some(u);
                    return true;
                }
                Some(w) => {
                    if !visited[w] && kuhn_augment(g, w, visited, pair_left, pair_right) {
                        pair_left[u] = Some(v);
                        pair_right[v] = Some(u);
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Hopcroft-Karp over the implicit graph. `left_order` fixes the scan order
/// of 1-points, which selects among maximum matchings (the cardinality is
/// order-independent; the matching itself is not).
fn hopcroft_karp(g: &ViolationGraph, left_order: &[usize]) -> Vec<Option<usize>> {
    const INF: u32 = u32::MAX;
    let nl = g.ones.len();
    let nr = g.zeros.len();
    let mut pair_left: Vec<Option<usize>> = vec![None; nl];
    let mut pair_right: Vec<Option<usize>> = vec![None; nr];
    let mut dist = vec![INF; nl];
    let mut queue = std::collections::VecDeque::new();

    loop {
        // BFS phase: layer left vertices by alternating distance.
        queue.clear();
        for &u in left_order {
            if pair_left[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut found_free = false;
        while let Some(u) = queue.pop_front() {
            for (v, matched) in pair_right.iter().enumerate() {
                if g.edge(u, v) {
                    match matched {
                        None => found_free = true,
                        Some(w) => {
                            if dist[*w] == INF {
                                dist[*w] = dist[u] + 1;
                                queue.push_back(*w);
                            }
                        }
                    }
                }
            }
        }
        if !found_free {
            break;
        }
        // DFS phase: vertex-disjoint shortest augmenting paths.
        fn dfs(
            g: &ViolationGraph,
            u: usize,
            dist: &mut [u32],
            pair_left: &mut [Option<usize>],
            pair_right: &mut [Option<usize>],
        ) -> bool {
            for v in 0..g.zeros.len() {
                if g.edge(u, v) {
                    let ok = match pair_right[v] {
                        None => true,
                        Some(w) => {
                            dist[w] == dist[u] + 1 && dfs(g, w, dist, pair_left, pair_right)
                        }
                    };
                    if ok {
                        pair_left[u] = Some(v);
                        pair_right[v] = Some(u);
                        return true;
                    }
                }
            }
            dist[u] = u32::MAX;
            false
        }
        for &u in left_order {
            if pair_left[u].is_none() {
                dfs(g, u, &mut dist, &mut pair_left, &mut pair_right);
            }
        }
    }
    pair_left
}

fn matching_from_pairs(
    f: &BoolFunction,
    g: &ViolationGraph,
    pair_left: &[Option<usize>],
) -> ViolationMatching {
    let domain = f.domain().clone();
    let mut pairs = Vec::new();
    for (u, matched) in pair_left.iter().enumerate() {
        if let Some(v) = matched {
            pairs.push((domain.point_at(g.ones[u]), domain.point_at(g.zeros[*v])));
        }
    }
    pairs.sort_by_key(|(lower, _)| domain.rank(lower));
    let m = ViolationMatching { domain, pairs };
    debug_assert!(m.validate(f).is_ok());
    m
}

/// Maximum-cardinality violation matching, deterministic: 1-points are
/// scanned in lexicographic rank order.
pub fn max_violation_matching(f: &BoolFunction) -> Result<ViolationMatching> {
    let g = ViolationGraph::build(f)?;
    let order: Vec<usize> = (0..g.ones.len()).collect();
    let pair_left = hopcroft_karp(&g, &order);
    Ok(matching_from_pairs(f, &g, &pair_left))
}

/// Maximum matching with a randomized 1-point scan order; useful for
/// exploring the space of maximum matchings.
pub fn max_violation_matching_seeded(
    f: &BoolFunction,
    rng: &mut ChaCha8Rng,
) -> Result<ViolationMatching> {
    let g = ViolationGraph::build(f)?;
    let mut order: Vec<usize> = (0..g.ones.len()).collect();
    order.shuffle(rng);
    let pair_left = hopcroft_karp(&g, &order);
    Ok(matching_from_pairs(f, &g, &pair_left))
}

/// Exact distance to monotonicity: `|M| / |D|` for a maximum violation
/// matching `M`.
pub fn distance_to_monotonicity(f: &BoolFunction) -> Result<Frac> {
    let m = max_violation_matching(f)?;
    Ok(Frac::new(m.len() as u64, f.domain().len() as u64))
}

/// Brute-force distance: minimum Hamming distance to any monotone function,
/// found by enumerating all monotone functions (up-set indicators) by
/// depth-first extension in rank order.
///
/// Independent of the matching engine; used as its oracle.
pub fn brute_force_distance(f: &BoolFunction) -> Result<Frac> {
    const MAX_POINTS: usize = 20;
    const MAX_FUNCTIONS: u64 = 1_000_000;
    let values = f.values().ok_or(Error::NotDense("brute_force_distance"))?;
    let n = f.domain().len();
    if n > MAX_POINTS {
        return Err(Error::Refused(format!(
            "brute-force enumeration limited to {MAX_POINTS} points, domain has {n}"
        )));
    }
    let domain = f.domain();
    let strides = domain.strides();
    // immediate predecessors by rank, precomputed
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (rank, preds_r) in preds.iter_mut().enumerate() {
        let p = domain.point_at(rank);
        for (&c, &stride) in p.coords().iter().zip(&strides) {
            if c > 1 {
                preds_r.push(rank - stride);
            }
        }
    }

    struct Search<'a> {
        values: &'a [u8],
        preds: &'a [Vec<usize>],
        g: Vec<u8>,
        best: u64,
        count: u64,
    }
    impl Search<'_> {
        fn go(&mut self, rank: usize, hamming: u64) -> Result<()> {
            if hamming >= self.best {
                return Ok(()); // cannot improve
            }
            if rank == self.g.len() {
                self.count += 1;
                if self.count > MAX_FUNCTIONS {
                    return Err(Error::Refused(format!(
                        "more than {MAX_FUNCTIONS} monotone functions to enumerate"
                    )));
                }
                self.best = hamming;
                return Ok(());
            }
            let forced_one = self.preds[rank].iter().any(|&p| self.g[p] == 1);
            let choices: &[u8] = if forced_one { &[1] } else { &[0, 1] };
            for &c in choices {
                self.g[rank] = c;
                let extra = (c != self.values[rank]) as u64;
                self.go(rank + 1, hamming + extra)?;
            }
            Ok(())
        }
    }

    let mut search =
        Search { values, preds: &preds, g: vec![0; n], best: u64::MAX, count: 0 };
    search.go(0, 0)?;
    Ok(Frac::new(search.best, n as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::is_monotone;
    use rand::SeedableRng;

    fn table(dims: Vec<usize>, values: Vec<u8>) -> BoolFunction {
        BoolFunction::from_table(GridDomain::new(dims).unwrap(), values).unwrap()
    }

    #[test]
    fn monotone_function_has_empty_matching_and_zero_distance() {
        let f = table(vec![3, 3], vec![0, 0, 1, 0, 1, 1, 1, 1, 1]);
        assert!(is_monotone(&f).unwrap());
        let m = max_violation_matching(&f).unwrap();
        assert!(m.is_empty());
        assert_eq!(distance_to_monotonicity(&f).unwrap(), Frac::new(0, 1));
        assert_eq!(brute_force_distance(&f).unwrap(), Frac::new(0, 1));
    }

    #[test]
    fn anti_dictator_on_two_points() {
        let f = table(vec![2], vec![1, 0]);
        assert_eq!(distance_to_monotonicity(&f).unwrap(), Frac::new(1, 2));
        assert_eq!(brute_force_distance(&f).unwrap(), Frac::new(1, 2));
    }

    #[test]
    fn single_adjacent_violation_on_3x3() {
        // f = 1 at (1,2) and on the whole row y = 3; the only violated
        // *adjacent* pair is (1,2) -> (2,2), and the matching size is 1.
        let dom = GridDomain::cube(3, 2).unwrap();
        let f = BoolFunction::dense_from_fn(dom, |p| {
            p.coords() == [1, 2] || p.coords()[1] == 3
        })
        .unwrap();
        assert_eq!(brute_force_distance(&f).unwrap(), Frac::new(1, 9));
        assert_eq!(distance_to_monotonicity(&f).unwrap(), Frac::new(1, 9));
    }

    #[test]
    fn anti_majority_3x3_distance_by_both_engines() {
        let dom = GridDomain::cube(3, 2).unwrap();
        let f = BoolFunction::dense_from_fn(dom, |p| p.coords()[0] + p.coords()[1] <= 3).unwrap();
        assert_eq!(brute_force_distance(&f).unwrap(), Frac::new(3, 9));
        assert_eq!(distance_to_monotonicity(&f).unwrap(), Frac::new(3, 9));
    }

    #[test]
    fn brute_force_refuses_oversize_domains() {
        let dom = GridDomain::new(vec![5, 5]).unwrap();
        let f = BoolFunction::dense_from_fn(dom, |_| false).unwrap();
        assert!(matches!(brute_force_distance(&f), Err(Error::Refused(_))));
    }

    #[test]
    fn matching_is_valid_and_maximal_on_random_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let dom = GridDomain::new(vec![4, 3]).unwrap();
            let values: Vec<u8> =
                (0..dom.len()).map(|_| rand::Rng::gen_range(&mut rng, 0..=1)).collect();
            let f = BoolFunction::from_table(dom, values).unwrap();
            let m = max_violation_matching(&f).unwrap();
            m.validate(&f).unwrap();
            assert!(m.verify_maximum(&f).unwrap());
        }
    }

    #[test]
    fn randomized_scan_orders_reach_the_same_cardinality() {
        let dom = GridDomain::cube(4, 2).unwrap();
        let f = BoolFunction::dense_from_fn(dom, |p| p.coords()[0] + p.coords()[1] <= 4).unwrap();
        let base = max_violation_matching(&f).unwrap().len();
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = max_violation_matching_seeded(&f, &mut rng).unwrap();
            assert_eq!(m.len(), base);
            m.validate(&f).unwrap();
        }
    }

    #[test]
    fn distance_never_exceeds_one_half() {
        // the all-0 and all-1 functions are monotone, so flipping the
        // minority side always works
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let dom = GridDomain::new(vec![3, 3]).unwrap();
            let values: Vec<u8> =
                (0..dom.len()).map(|_| rand::Rng::gen_range(&mut rng, 0..=1)).collect();
            let f = BoolFunction::from_table(dom, values).unwrap();
            assert!(distance_to_monotonicity(&f).unwrap() <= Frac::new(1, 2));
        }
    }
}
