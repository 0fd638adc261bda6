//! One seam between the rayon and sequential execution paths.
//!
//! Every data-parallel loop in the crate goes through these helpers with an
//! explicit `parallel: bool`, so the public `*_seq` twins share the exact same
//! body as their parallel counterparts and benches compare like with like.
//! Without the `parallel` feature the flag is ignored and everything is
//! sequential.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `items` to a vector, preserving order.
pub(crate) fn map_vec<T, U, F>(items: &[T], parallel: bool, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return items.par_iter().map(&f).collect();
    }
    let _ = parallel;
    items.iter().map(f).collect()
}

/// Map the index range `0..len` to a vector, preserving order.
pub(crate) fn map_range<U, F>(len: usize, parallel: bool, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..len).into_par_iter().map(&f).collect();
    }
    let _ = parallel;
    (0..len).map(f).collect()
}
