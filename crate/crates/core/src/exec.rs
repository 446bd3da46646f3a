//! Execution strategy for embarrassingly parallel trial loops.
//!
//! Every batch experiment in this crate derives an independent RNG stream
//! per trial index, so results are identical whichever strategy runs them.

/// How to run a batch of independent trials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    /// Rayon data-parallel when the `parallel` feature is enabled,
    /// sequential otherwise.
    #[default]
    Auto,
    /// Always sequential, regardless of features.
    Sequential,
}

/// Maps `f` over `0..n`, returning results in index order.
pub fn map_indexed<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Exec::Sequential => (0..n).map(f).collect(),
        Exec::Auto => auto_map(n, f),
    }
}

#[cfg(feature = "parallel")]
fn auto_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn auto_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Caps the global worker pool at `threads`. A no-op without the
/// `parallel` feature, or once any parallel work has already run.
pub fn set_threads(threads: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_and_sequential_agree() {
        let sq = map_indexed(Exec::Sequential, 100, |i| i * i);
        let au = map_indexed(Exec::Auto, 100, |i| i * i);
        assert_eq!(sq, au);
        assert_eq!(sq[7], 49);
    }
}
