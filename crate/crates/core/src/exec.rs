//! Execution-mode switch for the data-parallel operations.
//!
//! Every heavy operation in this crate has a `*_with_mode` variant taking an
//! [`ExecMode`]. The plain variants use [`ExecMode::default`], which is
//! `Parallel` when the `parallel` feature (on by default) is enabled and
//! `Sequential` otherwise. Work items are independent and floating-point
//! reductions always run in index order, so the two modes produce
//! bit-identical results; the benches in `benches/modes.rs` compare their
//! throughput.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How independent work items are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    /// Plain index-order loop on the calling thread.
    Sequential,
    /// Rayon work-stealing pool. Falls back to `Sequential` when the crate
    /// is built without the `parallel` feature.
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

/// Map `f` over `0..n`, collecting results in index order.
pub(crate) fn map_indexed<U, F>(mode: ExecMode, n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    match mode {
        ExecMode::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => (0..n).into_par_iter().map(f).collect(),
        #[cfg(not(feature = "parallel"))]
        ExecMode::Parallel => (0..n).map(f).collect(),
    }
}

/// Run `f` over mutable row chunks of `data`, each chunk `width` long.
/// `f` receives the chunk index and the chunk itself.
pub(crate) fn for_each_chunk<T, F>(mode: ExecMode, data: &mut [T], width: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    match mode {
        ExecMode::Sequential => {
            for (i, chunk) in data.chunks_mut(width).enumerate() {
                f(i, chunk);
            }
        }
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            data.par_chunks_mut(width)
                .enumerate()
                .for_each(|(i, chunk)| f(i, chunk));
        }
        #[cfg(not(feature = "parallel"))]
        ExecMode::Parallel => {
            for (i, chunk) in data.chunks_mut(width).enumerate() {
                f(i, chunk);
            }
        }
    }
}
