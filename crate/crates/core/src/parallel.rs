//! Data-parallel map helpers.
//!
//! `map_indexed` dispatches to rayon when the `parallel` feature is enabled
//! and falls back to a plain loop otherwise. Results always come back in
//! index order and every reduction over them is sequential, so outputs are
//! bit-identical regardless of feature flags or thread count.
//! `map_indexed_seq` is always sequential; the criterion benches use it to
//! compare both execution paths in one run.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).map(f).collect()
}

/// Sequential reference path, available under either feature setting.
pub fn map_indexed_seq<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

/// Cap the worker pool. Call before any parallel work; later calls are
/// ignored (the global pool can only be built once). No-op without the
/// `parallel` feature.
#[cfg(feature = "parallel")]
pub fn configure_threads(threads: usize) {
    if threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
}

#[cfg(not(feature = "parallel"))]
pub fn configure_threads(_threads: usize) {}
