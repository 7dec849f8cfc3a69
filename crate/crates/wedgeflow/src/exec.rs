//! Parallel/sequential execution helpers.
//!
//! Every data-parallel loop in the crate goes through this module. With
//! the default `parallel` feature the work is dispatched on the global
//! rayon pool; without it the same closures run sequentially. Both paths
//! produce identical results: outputs are collected in index order and
//! reductions are order-independent (min/max) or performed sequentially
//! over the ordered per-chunk results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<U: Send, F: Fn(usize) -> U + Sync + Send>(n: usize, f: F) -> Vec<U> {
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<U: Send, F: Fn(usize) -> U + Sync + Send>(n: usize, f: F) -> Vec<U> {
    (0..n).map(f).collect()
}

/// Sequential twin of [`map_indexed`], kept unconditionally compiled so
/// benchmarks can compare the two code paths in a single binary.
pub fn map_indexed_seq<U, F: Fn(usize) -> U>(n: usize, f: F) -> Vec<U> {
    (0..n).map(f).collect()
}

/// Fold `f(i)` over `0..n` with an order-independent combine.
#[cfg(feature = "parallel")]
pub fn fold_indexed<U, F, C>(n: usize, identity: U, f: F, combine: C) -> U
where
    U: Send + Sync + Clone,
    F: Fn(usize) -> U + Sync + Send,
    C: Fn(U, U) -> U + Sync + Send,
{
    (0..n)
        .into_par_iter()
        .map(f)
        .reduce(|| identity.clone(), &combine)
}

/// Fold `f(i)` over `0..n` with an order-independent combine.
#[cfg(not(feature = "parallel"))]
pub fn fold_indexed<U, F, C>(n: usize, identity: U, f: F, combine: C) -> U
where
    U: Send + Sync + Clone,
    F: Fn(usize) -> U + Sync + Send,
    C: Fn(U, U) -> U + Sync + Send,
{
    (0..n).map(f).fold(identity, combine)
}

/// Number of worker threads the crate will use.
pub fn threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}
