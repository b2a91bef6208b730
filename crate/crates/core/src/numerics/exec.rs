//! Trial-level data parallelism.
//!
//! Every Monte-Carlo loop in the crate goes through [`map_indexed`], which
//! hands each index its own work item and returns results in index order.
//! Since each trial seeds its own [`RngStream`](super::RngStream) from its
//! index, the output is identical for both execution modes and for any
//! thread count.

/// How a batch of independent trials is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses the rayon global pool. Falls back to sequential execution when
    /// the `parallel` feature is disabled.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Maps `f` over `0..count`, preserving index order in the output.
pub fn map_indexed<T, F>(exec: Execution, count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(f).collect()
        }
        _ => (0..count).map(f).collect(),
    }
}
