//! Data-parallel kernels with a sequential fallback.
//!
//! Reductions are always split into fixed-size chunks whose partial results
//! are combined in index order, so `Sequential` and `Parallel` produce
//! bit-identical floating point results regardless of the thread count.
//! Without the `parallel` feature, `Execution::Parallel` runs sequentially.

use std::ops::Range;

use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Chunk length used by the reduction helpers.
pub const CHUNK: usize = 1 << 12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether work will actually be spread across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// `f(i)` for every `i` in `0..n`, in index order.
pub fn map_indices<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Splits `0..len` into `CHUNK`-sized ranges, evaluates `f` on each and
/// returns the partial results in order.
pub fn map_chunks<T, F>(exec: Execution, len: usize, chunk: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync + Send,
{
    let chunk = chunk.max(1);
    let count = len.div_ceil(chunk);
    map_indices(exec, count, |c| {
        let start = c * chunk;
        f(start..(start + chunk).min(len))
    })
}

/// Deterministic chunked sum of `f(range)` over `0..len`.
pub fn chunked_sum<F>(exec: Execution, len: usize, f: F) -> f64
where
    F: Fn(Range<usize>) -> f64 + Sync + Send,
{
    map_chunks(exec, len, CHUNK, f).into_iter().sum()
}

/// Applies `f(offset, chunk)` to consecutive mutable chunks of `data`.
pub fn for_each_chunk_mut<T, F>(exec: Execution, data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    let chunk = chunk.max(1);
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        data.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(c, s)| f(c * chunk, s));
        return;
    }
    let _ = exec;
    for (c, s) in data.chunks_mut(chunk).enumerate() {
        f(c * chunk, s);
    }
}

/// Applies `f` to matching pairs of elements from two equal-length slices.
pub fn zip_for_each_mut<T, F>(exec: Execution, a: &mut [T], b: &mut [T], f: F)
where
    T: Send,
    F: Fn(&mut T, &mut T) + Sync + Send,
{
    debug_assert_eq!(a.len(), b.len());
    #[cfg(feature = "parallel")]
    if exec.is_parallel() && a.len() >= CHUNK {
        a.par_iter_mut().zip(b.par_iter_mut()).for_each(|(x, y)| f(x, y));
        return;
    }
    let _ = exec;
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        f(x, y);
    }
}
