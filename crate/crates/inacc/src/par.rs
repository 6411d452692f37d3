//! Data-parallel helpers with a sequential fallback.
//!
//! Results are always assembled in input order, so output is identical
//! whether the `parallel` feature is enabled or not and regardless of the
//! worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map over a slice, collecting in order. Parallel when the `parallel`
/// feature is enabled.
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sequential mapping, kept as an explicit entry point so benchmarks can
/// compare it against the parallel path.
pub fn map_collect_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Parallel mapping over index chunks, used by the Monte Carlo driver.
/// Chunk boundaries are fixed by `n_chunks`, never by the scheduler.
pub fn map_chunks<U, F>(n_chunks: u64, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(u64) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n_chunks).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n_chunks).map(f).collect()
    }
}

/// Sequential twin of [`map_chunks`] for benchmarking.
pub fn map_chunks_seq<U, F>(n_chunks: u64, f: F) -> Vec<U>
where
    F: Fn(u64) -> U,
{
    (0..n_chunks).map(f).collect()
}
