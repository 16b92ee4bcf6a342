//! Execution strategy for embarrassingly parallel inner loops.
//!
//! Green-matrix columns, region-map cells and branch-sweep points are
//! independent computations. With the `parallel` feature (on by default)
//! they run on the rayon thread pool; without it, or with
//! [`Exec::Sequential`], they run in a plain loop. Results are always
//! collected in index order, so output is deterministic either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Where independent work items run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    /// Plain loop on the calling thread.
    Sequential,
    /// Rayon thread pool.
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Exec {
    #[cfg(feature = "parallel")]
    fn default() -> Self {
        Exec::Parallel
    }

    #[cfg(not(feature = "parallel"))]
    fn default() -> Self {
        Exec::Sequential
    }
}

/// Apply `f` to 0..n and collect results in index order.
///
/// Work items are batched (at least 8 per rayon task) so that cheap items
/// like single banded solves amortize the scheduling cost.
pub fn map_indexed<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Exec::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..n).into_par_iter().with_min_len(8).map(f).collect(),
    }
}
