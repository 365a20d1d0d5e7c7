//! Orthogonalize the columns of a given `V` with any backend.

use alloc::vec::Vec;

use super::{mgs_project, CwyVariant, ReflectorAccumulator, ReflectorStore};
use crate::matrix::norm2;
use crate::{ColMatrix, Counts, Error, OpCounter, Result, RowExecutor, EPS};

#[derive(Debug, Clone)]
pub struct Orthogonalized {
    pub q: ColMatrix,
    pub counts: Counts,
}

fn check_shape(v: &ColMatrix) -> Result<()> {
    if v.cols() > v.rows() {
        return Err(Error::InvalidArgument("more columns than rows"));
    }
    Ok(())
}

/// Incremental reflector-based orthogonalization: for each column, apply the
/// accumulated transform, build and append a reflector, then extract the new
/// orthonormal column.
pub fn reflector_orthogonalize<S, E>(exec: &E, store: &mut S, v: &ColMatrix) -> Result<Orthogonalized>
where
    S: ReflectorStore,
    E: RowExecutor,
{
    check_shape(v)?;
    let n = v.rows();
    let m = v.cols();
    if store.n() != n || store.capacity() < m || store.count() != 0 {
        return Err(Error::InvalidArgument("store must be empty with room for every column"));
    }
    let before = store.counts();
    let mut q = ColMatrix::zeros(n, m);
    for j in 0..m {
        let vj = v.col(j);
        let tail = if j == 0 { vj.to_vec() } else { store.apply_transpose(exec, vj)? };
        let parts = store.make_reflector(exec, tail)?;
        if parts.c.abs() < n as f64 * EPS * norm2(vj) {
            return Err(Error::DegenerateColumn { index: j + 1 });
        }
        store.push(exec, parts)?;
        let col = store.column(exec, j + 1)?;
        q.col_mut(j).copy_from_slice(&col);
    }
    let after = store.counts();
    Ok(Orthogonalized {
        q,
        counts: Counts {
            flops: after.flops - before.flops,
            sync_events: after.sync_events - before.sync_events,
        },
    })
}

/// Compact WY orthogonalization of the columns of `v`.
pub fn cwy_orthogonalize<E: RowExecutor>(exec: &E, v: &ColMatrix, variant: CwyVariant) -> Result<Orthogonalized> {
    check_shape(v)?;
    let mut acc = ReflectorAccumulator::new(v.rows(), v.cols(), variant)?;
    reflector_orthogonalize(exec, &mut acc, v)
}

/// Modified Gram-Schmidt orthogonalization of the columns of `v`; each
/// column is projected against the finished ones and then normalized (one
/// extra reduction per column).
pub fn mgs_orthogonalize<E: RowExecutor>(exec: &E, v: &ColMatrix) -> Result<Orthogonalized> {
    check_shape(v)?;
    let n = v.rows();
    let m = v.cols();
    let counter = OpCounter::new();
    let mut q = ColMatrix::zeros(n, m);
    for j in 0..m {
        let mut x = v.col(j).to_vec();
        {
            let basis: Vec<&[f64]> = (0..j).map(|i| q.col(i)).collect();
            mgs_project(exec, &mut x, &basis, &counter)?;
        }
        let sq = exec.launch(0..n, &mut [], 1, |rows, _, acc| {
            acc[0] += x[rows].iter().map(|a| a * a).sum::<f64>();
        });
        counter.add_sync();
        counter.add_flops(3 * n as u64);
        let norm = libm::sqrt(sq[0]);
        if norm == 0.0 || norm < n as f64 * EPS * norm2(v.col(j)) {
            return Err(Error::DegenerateColumn { index: j + 1 });
        }
        for (dst, src) in q.col_mut(j).iter_mut().zip(&x) {
            *dst = src / norm;
        }
    }
    Ok(Orthogonalized { q, counts: counter.snapshot() })
}
