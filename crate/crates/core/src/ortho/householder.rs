//! Householder orthogonalization with reflectors applied one at a time.

use alloc::vec;
use alloc::vec::Vec;

use super::reflector::reflector_from_norm;
use super::{ReflectorParts, ReflectorStore};
use crate::matrix::{dot, norm2};
use crate::{ColMatrix, Counts, Error, OpCounter, Result, RowExecutor, EPS};

/// Reference Householder orthogonalization of the columns of `v`.
///
/// Straight loops, no blocking and no shared code with the compact WY
/// kernels, so it can serve as an oracle for them. Column `j` of the result
/// is `H_1 ... H_j e_j`.
pub fn householder_orthogonalize(v: &ColMatrix) -> Result<ColMatrix> {
    let n = v.rows();
    let m = v.cols();
    if m > n {
        return Err(Error::InvalidArgument("more columns than rows"));
    }
    let mut ys: Vec<(Vec<f64>, f64)> = Vec::with_capacity(m);
    let mut q = ColMatrix::zeros(n, m);
    for j in 0..m {
        let mut u = v.col(j).to_vec();
        for (y, t) in &ys {
            let s = t * dot(y, &u);
            u.iter_mut().zip(y).for_each(|(ui, yi)| *ui -= s * yi);
        }
        let norm = norm2(&u[j..]);
        if norm < n as f64 * EPS * norm2(v.col(j)) || norm == 0.0 {
            return Err(Error::DegenerateColumn { index: j + 1 });
        }
        let c = if u[j] < 0.0 { norm } else { -norm };
        let mut y = vec![0.0; n];
        y[j] = u[j] - c;
        y[j + 1..].copy_from_slice(&u[j + 1..]);
        let t = 2.0 / dot(&y, &y);
        ys.push((y, t));

        let qj = q.col_mut(j);
        qj[j] = 1.0;
        for (y, t) in ys.iter().rev() {
            let s = t * dot(y, qj);
            qj.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= s * yi);
        }
    }
    Ok(q)
}

/// Reflectors kept as separate vectors and applied one by one. Each
/// application is a dot product (one reduction) followed by an axpy.
#[derive(Debug, Clone)]
pub struct HouseholderSequence {
    n: usize,
    capacity: usize,
    tails: Vec<Vec<f64>>,
    ts: Vec<f64>,
    counter: OpCounter,
}

impl HouseholderSequence {
    pub fn new(n: usize, capacity: usize) -> Result<Self> {
        if n == 0 || capacity > n {
            return Err(Error::InvalidArgument("sequence needs 1 <= n and capacity <= n"));
        }
        Ok(Self { n, capacity, tails: Vec::new(), ts: Vec::new(), counter: OpCounter::new() })
    }

    pub fn counter(&self) -> &OpCounter {
        &self.counter
    }

    /// Applies `H_i` (0-based) to `x` in place.
    fn reflect<E: RowExecutor>(&self, exec: &E, i: usize, x: &mut [f64]) {
        let n = self.n;
        let y = &self.tails[i];
        let acc = exec.launch(i..n, &mut [], 1, |rows, _, acc| {
            acc[0] += x[rows.clone()].iter().zip(&y[rows.start - i..rows.end - i]).map(|(a, b)| a * b).sum::<f64>();
        });
        let s = self.ts[i] * acc[0];
        exec.launch(i..n, &mut x[i..], 0, |rows, out, _| {
            for (o, yi) in out.iter_mut().zip(&y[rows.start - i..rows.end - i]) {
                *o -= s * yi;
            }
        });
        self.counter.add_sync();
        self.counter.add_flops(4 * (n - i) as u64);
    }
}

impl ReflectorStore for HouseholderSequence {
    fn n(&self) -> usize {
        self.n
    }

    fn count(&self) -> usize {
        self.ts.len()
    }

    fn capacity(&self) -> usize {
        self.capacity
    }

    fn counts(&self) -> Counts {
        self.counter.snapshot()
    }

    fn apply_transpose<E: RowExecutor>(&self, exec: &E, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: v.len() });
        }
        let k = self.count();
        if k == 0 {
            return Err(Error::EmptyAccumulator);
        }
        let mut u = v.to_vec();
        for i in 0..k {
            self.reflect(exec, i, &mut u);
        }
        u.drain(..k);
        Ok(u)
    }

    fn make_reflector<E: RowExecutor>(&self, exec: &E, tail: Vec<f64>) -> Result<ReflectorParts> {
        let k = self.count();
        if tail.len() != self.n - k {
            return Err(Error::DimensionMismatch { expected: self.n - k, found: tail.len() });
        }
        let sq = exec.launch(k..self.n, &mut [], 1, |rows, _, acc| {
            acc[0] += tail[rows.start - k..rows.end - k].iter().map(|x| x * x).sum::<f64>();
        });
        self.counter.add_sync();
        self.counter.add_flops(2 * (self.n - k) as u64);
        reflector_from_norm(tail, k + 1, libm::sqrt(sq[0]))
    }

    fn push<E: RowExecutor>(&mut self, _exec: &E, parts: ReflectorParts) -> Result<()> {
        let k = self.count();
        if k == self.capacity {
            return Err(Error::CapacityExceeded { capacity: self.capacity });
        }
        if parts.j != k + 1 {
            return Err(Error::IndexOutOfRange { index: parts.j, len: k + 1 });
        }
        if parts.tail.len() != self.n - k {
            return Err(Error::DimensionMismatch { expected: self.n - k, found: parts.tail.len() });
        }
        self.tails.push(parts.tail);
        self.ts.push(parts.t);
        Ok(())
    }

    fn pop(&mut self) -> Result<()> {
        if self.ts.pop().is_none() {
            return Err(Error::EmptyAccumulator);
        }
        self.tails.pop();
        Ok(())
    }

    fn column<E: RowExecutor>(&self, exec: &E, j: usize) -> Result<Vec<f64>> {
        let k = self.count();
        if j == 0 || j > k {
            return Err(Error::IndexOutOfRange { index: j, len: k });
        }
        let mut q = vec![0.0; self.n];
        q[j - 1] = 1.0;
        for i in (0..j).rev() {
            self.reflect(exec, i, &mut q);
        }
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_columns_map_to_signed_identity() {
        let v = ColMatrix::identity(5, 3);
        let q = householder_orthogonalize(&v).unwrap();
        for j in 0..3 {
            for i in 0..5 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((q.get(i, j).abs() - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rank_deficient_column_is_reported() {
        let v = ColMatrix::from_columns(3, &[vec![1.0, 2.0, 0.0], vec![2.0, 4.0, 0.0]]);
        assert_eq!(householder_orthogonalize(&v), Err(Error::DegenerateColumn { index: 2 }));
    }

    #[test]
    fn too_many_columns() {
        assert!(householder_orthogonalize(&ColMatrix::zeros(2, 3)).is_err());
    }
}
