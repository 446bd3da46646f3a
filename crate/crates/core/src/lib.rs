//! Monotonicity testing of Boolean functions on hypergrids and continuous
//! product-measure domains.
//!
//! The crate provides:
//! - [`grid`]: hypergrid domains, points, the coordinate-wise partial order,
//!   Boolean functions (dense tables and memoized oracles), and restrictions
//!   to sub-grids.
//! - [`matching`]: the violation graph, maximum-cardinality violation
//!   matchings, and the exact distance to monotonicity, plus a brute-force
//!   nearest-monotone oracle for cross-checking.
//! - [`stacks`]: line/slice/stack decompositions of matchings, a swap-based
//!   lexicographic local search that balances stack sizes, and the stack
//!   mass bound report.
//! - [`linesample`]: per-line weight sequences, the Hall-deficit closed form
//!   for the sampled matching size, and sampling discrepancy experiments.
//! - [`reduction`]: random sub-grid sampling for both discrete grids and
//!   continuous product measures (via per-dimension quantile functions),
//!   with exact distance measurement of the restriction.
//! - [`tester`]: one-sided non-adaptive monotonicity testers built from
//!   domain reduction plus a work-investment repetition schedule around a
//!   pluggable inner tester.
//! - [`fixtures`]: named test functions (anti-majority, stacked blocks,
//!   centrist voters, random monotone generators) and the variance
//!   restriction experiment.
//! - [`acceptance`]: the end-to-end verification suite.
//!
//! Batch experiments are data-parallel; the `parallel` feature (on by
//! default) backs them with rayon, and [`exec::Exec::Sequential`] forces the
//! sequential path for benchmarking and debugging.

pub mod acceptance;
mod error;
pub mod exec;
pub mod fixtures;
pub mod grid;
pub mod linesample;
pub mod matching;
pub mod reduction;
pub mod stacks;
pub mod tester;

pub use error::{Error, Result};

/// Exact fraction used for distances and variances.
pub type Frac = num_rational::Ratio<u64>;

/// Exact fraction `p / q`.
pub fn frac(p: u64, q: u64) -> Frac {
    Frac::new(p, q)
}

/// Derives a per-trial seed from a master seed.
///
/// SplitMix64 finalizer applied to `master + (index + 1) * golden`; stable
/// across platforms and releases, so adding trials never perturbs the
/// streams of earlier ones.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add((index.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Reproducible RNG for trial `index` of a run with the given master seed.
pub fn trial_rng(master: u64, index: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(derive_seed(master, index))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_are_stable_and_distinct() {
        let a = derive_seed(42, 0);
        let b = derive_seed(42, 1);
        assert_ne!(a, b);
        assert_eq!(a, derive_seed(42, 0));
        // regression pin: the derivation must never change
        assert_eq!(derive_seed(0, 0), 0xE220_A839_7B1D_CDAF);
    }
}
