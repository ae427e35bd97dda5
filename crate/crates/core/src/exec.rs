//! Data-parallel map helpers.
//!
//! With the `parallel` feature (default) the indexed map runs on the rayon
//! pool; without it the crate falls back to a plain sequential loop. Both
//! paths produce the output in index order, so downstream reductions see the
//! same sequence of values regardless of worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..len`, returning results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..len).into_par_iter().map(f).collect()
}

/// Maps `f` over `0..len`, returning results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_indexed_seq(len, f)
}

/// Sequential twin of [`map_indexed`]; kept available under every feature
/// combination so benchmarks can compare the two lanes directly.
pub fn map_indexed_seq<T, F>(len: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..len).map(f).collect()
}

/// True when this build dispatches [`map_indexed`] onto a thread pool.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}
