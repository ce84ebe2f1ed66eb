//! Trial execution.
//!
//! `map_trials` returns results in trial order whatever the worker count, so
//! every aggregate computed from its output is reproducible.

use crate::error::Result;

/// Evaluates `f(0..trials)` on up to `workers` threads.
#[cfg(feature = "parallel")]
pub fn map_trials<T, F>(trials: usize, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;

    if workers <= 1 {
        return (0..trials as u64).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| crate::error::Error::invalid("workers", e.to_string()))?;
    pool.install(|| (0..trials as u64).into_par_iter().map(&f).collect())
}

#[cfg(not(feature = "parallel"))]
pub fn map_trials<T, F>(trials: usize, _workers: usize, f: F) -> Result<Vec<T>>
where
    F: Fn(u64) -> Result<T>,
{
    (0..trials as u64).map(f).collect()
}
