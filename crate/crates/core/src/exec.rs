//! Row-block execution model for the orthogonalization kernels.
//!
//! Vectors of length `n` are split into contiguous row blocks, one per
//! worker. A launch runs a kernel on every block; kernels may update their
//! own rows of an output slice and may produce a partial accumulator that is
//! summed across blocks. Partial sums are always combined in block order, so
//! results are reproducible for a fixed worker count.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

/// Blocks smaller than this are not worth a separate worker.
pub const MIN_BLOCK_ROWS: usize = 128;

pub trait RowExecutor: Sync {
    /// Number of workers available to a launch.
    fn workers(&self) -> usize;

    /// Runs `kernel(block_rows, out_block, acc)` over the blocks of `rows`.
    ///
    /// `out` is either empty or exactly `rows.len()` long, in which case it is
    /// split alongside the rows. Each block gets a zeroed accumulator of
    /// `width` entries; the returned vector is their block-ordered sum.
    fn launch<F>(&self, rows: Range<usize>, out: &mut [f64], width: usize, kernel: F) -> Vec<f64>
    where
        F: Fn(Range<usize>, &mut [f64], &mut [f64]) + Sync;

    /// Runs independent tasks `0..count`, returning results in task order.
    fn map_tasks<R, F>(&self, count: usize, task: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync;
}

/// Strictly serial executor: one block, tasks in order.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl RowExecutor for Serial {
    fn workers(&self) -> usize {
        1
    }

    fn launch<F>(&self, rows: Range<usize>, out: &mut [f64], width: usize, kernel: F) -> Vec<f64>
    where
        F: Fn(Range<usize>, &mut [f64], &mut [f64]) + Sync,
    {
        debug_assert!(out.is_empty() || out.len() == rows.len());
        let mut acc = vec![0.0; width];
        kernel(rows, out, &mut acc);
        acc
    }

    fn map_tasks<R, F>(&self, count: usize, task: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync,
    {
        (0..count).map(task).collect()
    }
}

/// Splits `rows` into at most `workers` contiguous blocks of near-equal size,
/// none smaller than [`MIN_BLOCK_ROWS`] unless there is only one.
pub fn partition(rows: Range<usize>, workers: usize) -> Vec<Range<usize>> {
    let len = rows.len();
    let blocks = workers.min(len / MIN_BLOCK_ROWS).max(1);
    let base = len / blocks;
    let extra = len % blocks;
    let mut out = Vec::with_capacity(blocks);
    let mut start = rows.start;
    for b in 0..blocks {
        let size = base + usize::from(b < extra);
        out.push(start..start + size);
        start += size;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_covers_rows_exactly() {
        for (len, workers) in [(0, 4), (5, 8), (1000, 3), (1024, 8), (129, 2), (4000, 7)] {
            let parts = partition(10..10 + len, workers);
            assert!(!parts.is_empty());
            assert!(parts.len() <= workers.max(1));
            assert_eq!(parts[0].start, 10);
            assert_eq!(parts.last().unwrap().end, 10 + len);
            for w in parts.windows(2) {
                assert_eq!(w[0].end, w[1].start);
            }
        }
    }

    #[test]
    fn serial_launch_sums_and_updates() {
        let mut out = [1.0, 2.0, 3.0];
        let acc = Serial.launch(0..3, &mut out, 1, |rows, block, acc| {
            for (i, x) in rows.zip(block.iter_mut()) {
                *x *= 2.0;
                acc[0] += i as f64;
            }
        });
        assert_eq!(out, [2.0, 4.0, 6.0]);
        assert_eq!(acc, [3.0]);
    }
}
