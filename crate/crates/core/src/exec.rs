//! Data-parallel execution with a sequential fallback.
//!
//! With the `parallel` feature (default) [`Execution::Parallel`] runs on the
//! rayon pool; without it every request runs sequentially. Reductions are
//! associative sums so both paths give identical results.

use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How independent work items are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when work will actually be spread over the thread pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f` over `0..n` and collects in index order.
pub fn map_range<T, F>(exec: Execution, n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Maps `f` over a slice and collects in order.
pub fn map_slice<I, T, F>(exec: Execution, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Smallest run of indices one parallel fold task handles.
const FOLD_GRAIN: usize = 256;

/// Folds `0..n` into per-chunk accumulators and merges them.
///
/// `fold` updates an accumulator with one index; `merge` must be associative
/// and commutative for the parallel result to match the sequential one.
pub fn fold_range<A, Init, Fold, Merge>(
    exec: Execution,
    n: u64,
    init: Init,
    fold: Fold,
    merge: Merge,
) -> A
where
    A: Send,
    Init: Fn() -> A + Sync + Send,
    Fold: Fn(A, u64) -> A + Sync + Send,
    Merge: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        let n = usize::try_from(n).expect("index range fits in usize");
        return (0..n)
            .into_par_iter()
            .with_min_len(FOLD_GRAIN)
            .fold(&init, |acc, i| fold(acc, i as u64))
            .reduce(&init, &merge);
    }
    let _ = (exec, &merge);
    (0..n).fold(init(), fold)
}
