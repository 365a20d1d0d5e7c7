use crate::matrix::{axpy_dot, dot};
use crate::{Error, OpCounter, Result, RowExecutor};

/// Removes from `v` its component along each (unit) basis vector in turn,
/// each subtraction using the already updated `v`.
///
/// The axpy for basis vector `i` is fused with the partial dot for `i+1`, so
/// each basis vector costs one reduction: `k` sync events and `4nk` flops.
pub fn mgs_project<E: RowExecutor>(
    exec: &E,
    v: &mut [f64],
    basis: &[&[f64]],
    counter: &OpCounter,
) -> Result<()> {
    let n = v.len();
    if let Some(b) = basis.iter().find(|b| b.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    let mut pending: Option<(f64, &[f64])> = None;
    for &b in basis {
        let acc = exec.launch(0..n, v, 1, |rows, block, acc| {
            let b = &b[rows.clone()];
            acc[0] += match pending {
                Some((alpha, prev)) => axpy_dot(block, alpha, &prev[rows], b),
                None => dot(block, b),
            };
        });
        counter.add_sync();
        counter.add_flops(4 * n as u64);
        pending = Some((acc[0], b));
    }
    if let Some((alpha, prev)) = pending {
        exec.launch(0..n, v, 0, |rows, block, _| {
            for (x, p) in block.iter_mut().zip(&prev[rows]) {
                *x -= alpha * p;
            }
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Serial;
    use alloc::vec;

    #[test]
    fn empty_basis_is_identity() {
        let c = OpCounter::new();
        let mut v = vec![1.0, 1.0];
        mgs_project(&Serial, &mut v, &[], &c).unwrap();
        assert_eq!(v, vec![1.0, 1.0]);
        assert_eq!(c.snapshot().sync_events, 0);
    }

    #[test]
    fn removes_coordinate_direction() {
        let c = OpCounter::new();
        let mut v = vec![1.0, 1.0];
        mgs_project(&Serial, &mut v, &[&[1.0, 0.0]], &c).unwrap();
        assert_eq!(v, vec![0.0, 1.0]);
        assert_eq!(c.snapshot().sync_events, 1);
    }

    #[test]
    fn vector_in_span_vanishes() {
        let c = OpCounter::new();
        let mut v = vec![3.0, 4.0, 0.0];
        mgs_project(&Serial, &mut v, &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]], &c).unwrap();
        assert_eq!(v, vec![0.0; 3]);
        assert_eq!(c.snapshot().sync_events, 2);
        assert_eq!(c.snapshot().flops, 24);
    }

    #[test]
    fn dimension_mismatch() {
        let mut v = vec![1.0, 2.0];
        assert!(mgs_project(&Serial, &mut v, &[&[1.0]], &OpCounter::new()).is_err());
    }
}
