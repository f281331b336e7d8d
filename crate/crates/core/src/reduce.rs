//! Order-fixed reductions.
//!
//! Parallel loops in this crate compute one partial value per outer index,
//! collect them in index order and combine them here. The combination tree
//! depends only on the slice length, so results are bit-identical for any
//! thread count.

use rayon::prelude::*;

const LEAF: usize = 32;

/// Pairwise (cascade) sum with a fixed split at the midpoint.
pub(crate) fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Evaluate `f` on `0..n` in parallel and reduce with [`pairwise_sum`].
pub(crate) fn par_sum_indexed<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let parts: Vec<f64> = (0..n).into_par_iter().map(f).collect();
    pairwise_sum(&parts)
}
