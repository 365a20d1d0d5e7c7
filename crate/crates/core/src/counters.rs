//! Operation counters shared by the orthogonalization kernels.
//!
//! Flops follow the BLAS convention: a length-`k` dot, axpy or squared norm
//! costs `2k`, an `r x c` matrix-vector product `2rc`, and a `k x k`
//! triangular matrix-vector product `k^2`.
//!
//! A synchronization event is one global reduction: a point where every
//! row-block worker must contribute a partial result before any of them can
//! continue. Row-local updates driven by an already replicated vector (axpy,
//! non-transposed gemv) need no barrier when each worker owns its rows, and
//! small triangular products on replicated data are computed redundantly, so
//! neither is counted.

use core::ops::AddAssign;
use core::sync::atomic::{AtomicU64, Ordering};

/// Snapshot of accumulated operation counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counts {
    pub flops: u64,
    pub sync_events: u64,
}

impl AddAssign for Counts {
    fn add_assign(&mut self, rhs: Counts) {
        self.flops += rhs.flops;
        self.sync_events += rhs.sync_events;
    }
}

/// Thread-safe counter; totals are exact regardless of which thread adds.
#[derive(Debug, Default)]
pub struct OpCounter {
    flops: AtomicU64,
    syncs: AtomicU64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_flops(&self, flops: u64) {
        self.flops.fetch_add(flops, Ordering::Relaxed);
    }

    pub fn add_sync(&self) {
        self.syncs.fetch_add(1, Ordering::Relaxed);
    }

    pub fn add(&self, counts: Counts) {
        self.add_flops(counts.flops);
        self.syncs.fetch_add(counts.sync_events, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> Counts {
        Counts {
            flops: self.flops.load(Ordering::Relaxed),
            sync_events: self.syncs.load(Ordering::Relaxed),
        }
    }

    pub fn reset(&self) {
        self.flops.store(0, Ordering::Relaxed);
        self.syncs.store(0, Ordering::Relaxed);
    }
}

impl Clone for OpCounter {
    fn clone(&self) -> Self {
        let c = OpCounter::new();
        c.add(self.snapshot());
        c
    }
}
