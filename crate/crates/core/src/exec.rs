//! Execution policy for the data-parallel kernels.
//!
//! Work is always cut into the same fixed chunks and the per-chunk results
//! are combined in chunk order, so both policies produce bit-identical
//! output. Only the scheduling of chunks differs.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Items per chunk. Small enough to balance, large enough to amortize.
pub const CHUNK: usize = 1024;

/// Parallel by default when the `parallel` feature is on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Exec {
    /// Applies `f` to consecutive ranges of `0..n` of length `chunk` (the last
    /// one possibly shorter) and returns the results in range order.
    pub fn chunks<R, F>(self, n: usize, chunk: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(Range<usize>) -> R + Sync + Send,
    {
        let chunk = chunk.max(1);
        let count = n.div_ceil(chunk);
        let range = move |i: usize| i * chunk..((i + 1) * chunk).min(n);
        match self {
            Exec::Sequential => (0..count).map(|i| f(range(i))).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..count).into_par_iter().map(|i| f(range(i))).collect(),
        }
    }

    /// Ordered map over a slice.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
        }
    }
}
