//! Compact WY accumulator: `H_1 H_2 ... H_k = I - Y T Y^T`.
//!
//! `Y` is `n x k` with reflector `y_j` in column `j`; `T` is `k x k` upper
//! triangular and grows by the recurrence
//!
//! ```text
//! T_j = [ T_{j-1}   -t_j T_{j-1} Y_{j-1}^T y_j ]
//!       [ 0          t_j                       ]
//! ```
//!
//! Two layouts are provided:
//!
//! * `Ordinary`: `Y` stored as a full `n x m` block including the zeros above
//!   each reflector, followed by a separate `m x m` block for `T`. Every kernel
//!   runs over all `n` rows. About `mn + m^2` scalars.
//! * `Packed`: a single `(n+1) x m` column-major buffer. Column `c` (0-based)
//!   holds `T[0..c, c]` in rows `0..c`, the diagonal `t_c` in row `c`, and the
//!   nonzero part of `y_c` (rows `c..n` of `Y`) in rows `c+1..=n`. Kernels
//!   split `Y = [L; Y_hat]` and never touch the structural zeros, and the
//!   extracted column comes out with its sign flipped. About `n(m+1)` scalars.

use alloc::vec;
use alloc::vec::Vec;

use super::reflector::reflector_from_norm;
use super::{ReflectorParts, ReflectorStore};
use crate::matrix::{dot, gemv_n, gemv_t};
use crate::{ColMatrix, Counts, Error, OpCounter, Result, RowExecutor};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CwyVariant {
    Ordinary,
    Packed,
}

#[derive(Debug, Clone)]
pub struct ReflectorAccumulator {
    n: usize,
    capacity: usize,
    count: usize,
    variant: CwyVariant,
    storage: Vec<f64>,
    counter: OpCounter,
}

impl ReflectorAccumulator {
    pub fn new(n: usize, capacity: usize, variant: CwyVariant) -> Result<Self> {
        if n == 0 || capacity > n {
            return Err(Error::InvalidArgument("accumulator needs 1 <= n and capacity <= n"));
        }
        let len = match variant {
            CwyVariant::Ordinary => n * capacity + capacity * capacity,
            CwyVariant::Packed => (n + 1) * capacity,
        };
        Ok(Self { n, capacity, count: 0, variant, storage: vec![0.0; len], counter: OpCounter::new() })
    }

    pub fn variant(&self) -> CwyVariant {
        self.variant
    }

    /// Scalars reserved for `Y` and `T`.
    pub fn storage_len(&self) -> usize {
        self.storage.len()
    }

    pub fn counter(&self) -> &OpCounter {
        &self.counter
    }

    /// Forgets all reflectors and counts.
    pub fn clear(&mut self) {
        self.count = 0;
        self.counter.reset();
    }

    /// Column `c` of `Y` as a length-`n` slice indexed by row. In the packed
    /// layout only rows `r >= c` are meaningful.
    fn ycol(&self, c: usize) -> &[f64] {
        match self.variant {
            CwyVariant::Ordinary => &self.storage[c * self.n..(c + 1) * self.n],
            CwyVariant::Packed => {
                let ld = self.n + 1;
                &self.storage[c * ld + 1..(c + 1) * ld]
            }
        }
    }

    fn t_index(&self, i: usize, c: usize) -> usize {
        match self.variant {
            CwyVariant::Ordinary => self.n * self.capacity + i + c * self.capacity,
            CwyVariant::Packed => i + c * (self.n + 1),
        }
    }

    /// Entry `(r, c)` of `Y`, zero above the diagonal.
    pub fn y_entry(&self, r: usize, c: usize) -> f64 {
        if r < c {
            0.0
        } else {
            self.ycol(c)[r]
        }
    }

    /// Entry `(i, c)` of `T`, zero below the diagonal.
    pub fn t_entry(&self, i: usize, c: usize) -> f64 {
        if i > c {
            0.0
        } else {
            self.storage[self.t_index(i, c)]
        }
    }

    /// Dense `n x count` copy of `Y`.
    pub fn dense_y(&self) -> ColMatrix {
        let mut y = ColMatrix::zeros(self.n, self.count);
        for c in 0..self.count {
            for r in c..self.n {
                y.set(r, c, self.y_entry(r, c));
            }
        }
        y
    }

    /// Dense `count x count` copy of `T`.
    pub fn dense_t(&self) -> ColMatrix {
        let mut t = ColMatrix::zeros(self.count, self.count);
        for c in 0..self.count {
            for i in 0..=c {
                t.set(i, c, self.t_entry(i, c));
            }
        }
        t
    }

    /// Rows `0..=c` of column `c` of `T`.
    fn tcol(&self, c: usize) -> &[f64] {
        let start = self.t_index(0, c);
        &self.storage[start..start + c + 1]
    }

    /// `w <- T_k^T w` for the leading `k x k` block.
    fn trmv_t_transpose(&self, w: &mut [f64]) {
        let k = w.len();
        for i in (0..k).rev() {
            w[i] = dot(self.tcol(i), &w[..=i]);
        }
        self.counter.add_flops((k * k) as u64);
    }

    /// `w <- T_k w` for the leading `k x k` block, column by column.
    fn trmv_t(&self, w: &mut [f64]) {
        let k = w.len();
        for c in 0..k {
            let wc = w[c];
            let col = self.tcol(c);
            for (wi, t) in w[..c].iter_mut().zip(col) {
                *wi += wc * t;
            }
            w[c] = wc * col[c];
        }
        self.counter.add_flops((k * k) as u64);
    }

    /// Columns `0..k` of `Y` restricted to `rows`.
    fn yblock(&self, k: usize, rows: core::ops::Range<usize>) -> Vec<&[f64]> {
        (0..k).map(|c| &self.ycol(c)[rows.clone()]).collect()
    }

    /// `Y_k^T x` over `rows`, where `x` is indexed by `row - x_offset`.
    fn gemv_transpose<E: RowExecutor>(
        &self,
        exec: &E,
        k: usize,
        rows: core::ops::Range<usize>,
        x: &[f64],
        x_offset: usize,
    ) -> Vec<f64> {
        let len = rows.len();
        let acc = exec.launch(rows, &mut [], k, |block, _, acc| {
            let xs = &x[block.start - x_offset..block.end - x_offset];
            gemv_t(&self.yblock(k, block), xs, acc);
        });
        self.counter.add_sync();
        self.counter.add_flops(2 * (len * k) as u64);
        acc
    }

    /// `out += sign * Y_k w` over `rows` (`out` covers exactly those rows).
    fn gemv_update<E: RowExecutor>(
        &self,
        exec: &E,
        rows: core::ops::Range<usize>,
        out: &mut [f64],
        w: &[f64],
        sign: f64,
    ) {
        let len = rows.len();
        let scaled: Vec<f64> = w.iter().map(|x| sign * x).collect();
        exec.launch(rows, out, 0, |block, out, _| {
            gemv_n(&self.yblock(w.len(), block), &scaled, out);
        });
        self.counter.add_flops(2 * (len * w.len()) as u64);
    }
}

impl ReflectorStore for ReflectorAccumulator {
    fn n(&self) -> usize {
        self.n
    }

    fn count(&self) -> usize {
        self.count
    }

    fn capacity(&self) -> usize {
        self.capacity
    }

    fn counts(&self) -> Counts {
        self.counter.snapshot()
    }

    fn apply_transpose<E: RowExecutor>(&self, exec: &E, v: &[f64]) -> Result<Vec<f64>> {
        let (n, k) = (self.n, self.count);
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        if k == 0 {
            return Err(Error::EmptyAccumulator);
        }
        match self.variant {
            CwyVariant::Ordinary => {
                let mut w = self.gemv_transpose(exec, k, 0..n, v, 0);
                self.trmv_t_transpose(&mut w);
                let mut u = v.to_vec();
                self.gemv_update(exec, 0..n, &mut u, &w, -1.0);
                u.drain(..k);
                Ok(u)
            }
            CwyVariant::Packed => {
                // w = L^T v_check + Y_hat^T v_hat
                let mut lw = vec![0.0; k];
                for (c, lwc) in lw.iter_mut().enumerate() {
                    *lwc = dot(&self.ycol(c)[c..k], &v[c..k]);
                }
                self.counter.add_flops((k * k) as u64);
                let mut w = self.gemv_transpose(exec, k, k..n, &v[k..], k);
                for (a, b) in w.iter_mut().zip(&lw) {
                    *a += b;
                }
                self.trmv_t_transpose(&mut w);
                let mut u = v[k..].to_vec();
                self.gemv_update(exec, k..n, &mut u, &w, -1.0);
                Ok(u)
            }
        }
    }

    fn make_reflector<E: RowExecutor>(&self, exec: &E, tail: Vec<f64>) -> Result<ReflectorParts> {
        let (n, k) = (self.n, self.count);
        if tail.len() != n - k {
            return Err(Error::DimensionMismatch { expected: n - k, found: tail.len() });
        }
        let sq = exec.launch(k..n, &mut [], 1, |rows, _, acc| {
            acc[0] += tail[rows.start - k..rows.end - k].iter().map(|x| x * x).sum::<f64>();
        });
        self.counter.add_sync();
        self.counter.add_flops(2 * (n - k) as u64);
        let mut parts = reflector_from_norm(tail, k + 1, libm::sqrt(sq[0]))?;
        if self.variant == CwyVariant::Ordinary {
            // t_j = 2 / ||y_j||^2 over the full, zero-padded column.
            let mut y = vec![0.0; n];
            y[k..].copy_from_slice(&parts.tail);
            let y2 = exec.launch(0..n, &mut [], 1, |rows, _, acc| {
                acc[0] += y[rows].iter().map(|x| x * x).sum::<f64>();
            });
            self.counter.add_sync();
            self.counter.add_flops(2 * n as u64);
            parts.t = 2.0 / y2[0];
        }
        Ok(parts)
    }

    fn push<E: RowExecutor>(&mut self, exec: &E, parts: ReflectorParts) -> Result<()> {
        let (n, k) = (self.n, self.count);
        if k == self.capacity {
            return Err(Error::CapacityExceeded { capacity: self.capacity });
        }
        if parts.j != k + 1 {
            return Err(Error::IndexOutOfRange { index: parts.j, len: k + 1 });
        }
        if parts.tail.len() != n - k {
            return Err(Error::DimensionMismatch { expected: n - k, found: parts.tail.len() });
        }
        // Write y_{k+1}.
        match self.variant {
            CwyVariant::Ordinary => {
                let col = &mut self.storage[k * n..(k + 1) * n];
                col[..k].fill(0.0);
                col[k..].copy_from_slice(&parts.tail);
            }
            CwyVariant::Packed => {
                let ld = n + 1;
                self.storage[k * ld + k + 1..(k + 1) * ld].copy_from_slice(&parts.tail);
            }
        }
        // t_hat = -t T_k (Y_k^T y_{k+1})
        let mut s = if k == 0 {
            Vec::new()
        } else {
            match self.variant {
                CwyVariant::Ordinary => {
                    let y = self.ycol(k).to_vec();
                    self.gemv_transpose(exec, k, 0..n, &y, 0)
                }
                CwyVariant::Packed => self.gemv_transpose(exec, k, k..n, &parts.tail, k),
            }
        };
        if k > 0 {
            self.trmv_t(&mut s);
            for x in s.iter_mut() {
                *x *= -parts.t;
            }
            self.counter.add_flops(k as u64);
        }
        for (i, x) in s.into_iter().enumerate() {
            let idx = self.t_index(i, k);
            self.storage[idx] = x;
        }
        let idx = self.t_index(k, k);
        self.storage[idx] = parts.t;
        self.count += 1;
        Ok(())
    }

    fn pop(&mut self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::EmptyAccumulator);
        }
        self.count -= 1;
        Ok(())
    }

    /// `Ordinary` returns `(I - Y T Y^T) e_j`; `Packed` returns its negation
    /// `(Y T Y^T - I) e_j`.
    fn column<E: RowExecutor>(&self, exec: &E, j: usize) -> Result<Vec<f64>> {
        if j == 0 || j > self.count {
            return Err(Error::IndexOutOfRange { index: j, len: self.count });
        }
        let n = self.n;
        let jj = j - 1;
        // Y_j^T e_j is row j of Y_j.
        let mut x: Vec<f64> = (0..j).map(|c| self.ycol(c)[jj]).collect();
        self.trmv_t(&mut x);
        let mut q = vec![0.0; n];
        match self.variant {
            CwyVariant::Ordinary => {
                q[jj] = 1.0;
                self.gemv_update(exec, 0..n, &mut q, &x, -1.0);
            }
            CwyVariant::Packed => {
                // q_check = L x, column by column
                for (c, &xc) in x.iter().enumerate() {
                    for (qr, y) in q[c..j].iter_mut().zip(&self.ycol(c)[c..j]) {
                        *qr += xc * y;
                    }
                }
                self.counter.add_flops((j * j) as u64);
                self.gemv_update(exec, j..n, &mut q[j..], &x, 1.0);
                q[jj] -= 1.0;
            }
        }
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ortho::make_reflector;
    use crate::Serial;

    fn single(variant: CwyVariant) -> ReflectorAccumulator {
        let mut acc = ReflectorAccumulator::new(2, 2, variant).unwrap();
        let parts = acc.make_reflector(&Serial, vec![1.0, 0.0]).unwrap();
        acc.push(&Serial, parts).unwrap();
        acc
    }

    #[test]
    fn one_reflector_maps_e1_tail_to_zero() {
        for variant in [CwyVariant::Ordinary, CwyVariant::Packed] {
            let acc = single(variant);
            assert_eq!(acc.apply_transpose(&Serial, &[1.0, 0.0]).unwrap(), vec![0.0]);
            assert_eq!(acc.dense_t().get(0, 0), 0.5);
        }
    }

    #[test]
    fn extracted_sign_differs_between_layouts() {
        assert_eq!(single(CwyVariant::Ordinary).column(&Serial, 1).unwrap(), vec![-1.0, 0.0]);
        assert_eq!(single(CwyVariant::Packed).column(&Serial, 1).unwrap(), vec![1.0, 0.0]);
    }

    #[test]
    fn error_paths() {
        let mut acc = ReflectorAccumulator::new(3, 1, CwyVariant::Packed).unwrap();
        assert_eq!(acc.apply_transpose(&Serial, &[1.0, 0.0, 0.0]), Err(Error::EmptyAccumulator));
        assert_eq!(acc.pop(), Err(Error::EmptyAccumulator));
        assert!(acc.column(&Serial, 1).is_err());
        let p = make_reflector(&[1.0, 2.0, 2.0], 1).unwrap();
        acc.push(&Serial, p.clone()).unwrap();
        assert!(acc.apply_transpose(&Serial, &[1.0]).is_err());
        assert_eq!(acc.push(&Serial, p), Err(Error::CapacityExceeded { capacity: 1 }));
        assert!(ReflectorAccumulator::new(2, 3, CwyVariant::Ordinary).is_err());
    }

    #[test]
    fn push_rejects_wrong_index() {
        let mut acc = ReflectorAccumulator::new(3, 3, CwyVariant::Ordinary).unwrap();
        let p = make_reflector(&[1.0, 2.0], 2).unwrap();
        assert!(acc.push(&Serial, p).is_err());
    }

    #[test]
    fn packed_storage_is_about_n_times_m_plus_one() {
        let n = 100;
        let m = 40;
        let packed = ReflectorAccumulator::new(n, m, CwyVariant::Packed).unwrap();
        let ordinary = ReflectorAccumulator::new(n, m, CwyVariant::Ordinary).unwrap();
        assert_eq!(packed.storage_len(), (n + 1) * m);
        assert!(packed.storage_len() <= n * (m + 1));
        assert_eq!(ordinary.storage_len(), n * m + m * m);
    }

    #[test]
    fn pop_then_push_restores_state() {
        let v = [0.3, -1.2, 0.8, 2.0];
        let w = [1.0, 0.5, -0.25, 0.1];
        for variant in [CwyVariant::Ordinary, CwyVariant::Packed] {
            let mut acc = ReflectorAccumulator::new(4, 3, variant).unwrap();
            let p = acc.make_reflector(&Serial, v.to_vec()).unwrap();
            acc.push(&Serial, p).unwrap();
            let tail = acc.apply_transpose(&Serial, &w).unwrap();
            let p2 = acc.make_reflector(&Serial, tail).unwrap();
            acc.push(&Serial, p2.clone()).unwrap();
            let before = (acc.dense_y(), acc.dense_t());
            acc.pop().unwrap();
            assert_eq!(acc.count(), 1);
            acc.push(&Serial, p2).unwrap();
            assert_eq!((acc.dense_y(), acc.dense_t()), before);
        }
    }
}
