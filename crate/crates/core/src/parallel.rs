//! Deterministic parallel reductions.
//!
//! Work is split into a fixed number of contiguous chunks derived only from
//! the problem size, the chunks are processed in parallel, and the partial
//! results are combined sequentially in chunk order. Floating-point results
//! therefore do not depend on the number of worker threads.

use std::ops::Range;

use rayon::prelude::*;

/// Folds `body` over 0..n split into at most `chunks` contiguous ranges, then
/// combines the per-chunk accumulators in order.
pub fn chunked_fold<T, I, B, C>(n: usize, chunks: usize, init: I, body: B, combine: C) -> T
where
    T: Send,
    I: Fn() -> T + Sync,
    B: Fn(&mut T, Range<usize>) + Sync,
    C: Fn(T, T) -> T,
{
    let parts = ranges(n, chunks);
    let partials: Vec<T> = parts
        .into_par_iter()
        .map(|r| {
            let mut acc = init();
            body(&mut acc, r);
            acc
        })
        .collect();
    let mut iter = partials.into_iter();
    let first = iter.next().unwrap_or_else(&init);
    iter.fold(first, combine)
}

/// Sum of f over 0..n with the same fixed-chunk discipline.
pub fn chunked_sum(n: usize, chunks: usize, f: impl Fn(usize) -> f64 + Sync) -> f64 {
    chunked_fold(
        n,
        chunks,
        || 0.0f64,
        |acc, r| {
            for i in r {
                *acc += f(i);
            }
        },
        |a, b| a + b,
    )
}

fn ranges(n: usize, chunks: usize) -> Vec<Range<usize>> {
    if n == 0 {
        return Vec::new();
    }
    let chunks = chunks.clamp(1, n);
    let base = n / chunks;
    let extra = n % chunks;
    let mut out = Vec::with_capacity(chunks);
    let mut start = 0;
    for i in 0..chunks {
        let len = base + usize::from(i < extra);
        out.push(start..start + len);
        start += len;
    }
    out
}
