//! Symmetric tridiagonal matrices and the pivoted shifted solve.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result, EPS};

/// Real symmetric tridiagonal matrix with diagonal `a_1..a_n` and
/// off-diagonal `b_1..b_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidMatrix("dimension must be at least 1"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch { expected: diag.len() - 1, found: offdiag.len() });
        }
        if diag.iter().chain(&offdiag).any(|x| !x.is_finite()) {
            return Err(Error::InvalidMatrix("entries must be finite"));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// `||T||_1`, the largest absolute column sum (equal to `||T||_inf`).
    pub fn norm_estimate(&self) -> f64 {
        let n = self.n();
        (0..n)
            .map(|i| {
                let below = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
                let above = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
                below + self.diag[i].abs() + above
            })
            .fold(0.0, f64::max)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.n();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len() });
        }
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(a, x)| a * x).collect();
        for (i, &b) in self.offdiag.iter().enumerate() {
            y[i] += b * x[i + 1];
            y[i + 1] += b * x[i];
        }
        Ok(y)
    }

    /// Dense copy, row-major `n x n`. Meant for tests and small oracles.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            out[i * n + i] = self.diag[i];
            if i + 1 < n {
                out[i * n + i + 1] = self.offdiag[i];
                out[(i + 1) * n + i] = self.offdiag[i];
            }
        }
        out
    }

    /// Factors `T - shift*I` by Gaussian elimination with partial pivoting.
    ///
    /// Pivots smaller in magnitude than `eps * ||T||` are replaced by that
    /// floor with their sign kept (`+` for an exact zero), so the factor can
    /// always be used, even at an exact eigenvalue.
    pub fn factor_shifted(&self, shift: f64) -> PivotedTriFactor {
        let n = self.n();
        let tnorm = self.norm_estimate();
        let floor = EPS * if tnorm > 0.0 { tnorm } else { 1.0 };

        let mut d: Vec<f64> = self.diag.iter().map(|a| a - shift).collect();
        let mut e = self.offdiag.clone();
        let mut f = vec![0.0; n.saturating_sub(2)];
        let mut lower = vec![0.0; n - 1];
        let mut pivots = vec![false; n - 1];

        for i in 0..n - 1 {
            let sub = self.offdiag[i];
            if d[i].abs() >= sub.abs() {
                d[i] = guard_pivot(d[i], floor);
                let mult = sub / d[i];
                lower[i] = mult;
                d[i + 1] -= mult * e[i];
            } else {
                // Swap rows i and i+1; the subdiagonal entry becomes the pivot.
                let pivot = guard_pivot(sub, floor);
                let mult = d[i] / pivot;
                d[i] = pivot;
                lower[i] = mult;
                let old_e = e[i];
                e[i] = d[i + 1];
                d[i + 1] = old_e - mult * d[i + 1];
                if i + 2 < n {
                    f[i] = e[i + 1];
                    e[i + 1] *= -mult;
                }
                pivots[i] = true;
            }
        }
        d[n - 1] = guard_pivot(d[n - 1], floor);

        PivotedTriFactor { lower, upper_d: d, upper_e: e, upper_f: f, pivots, shift }
    }
}

fn guard_pivot(p: f64, floor: f64) -> f64 {
    if p.abs() < floor {
        if p < 0.0 {
            -floor
        } else {
            floor
        }
    } else {
        p
    }
}

/// `P (T - shift*I) = L U` with unit lower bidiagonal `L` (stored as
/// multipliers) and upper `U` of bandwidth two.
#[derive(Debug, Clone, PartialEq)]
pub struct PivotedTriFactor {
    lower: Vec<f64>,
    upper_d: Vec<f64>,
    upper_e: Vec<f64>,
    upper_f: Vec<f64>,
    pivots: Vec<bool>,
    shift: f64,
}

impl PivotedTriFactor {
    pub fn n(&self) -> usize {
        self.upper_d.len()
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper_d(&self) -> &[f64] {
        &self.upper_d
    }

    pub fn upper_e(&self) -> &[f64] {
        &self.upper_e
    }

    pub fn upper_f(&self) -> &[f64] {
        &self.upper_f
    }

    pub fn pivot_flags(&self) -> &[bool] {
        &self.pivots
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }

    pub fn solve_in_place(&self, x: &mut [f64]) -> Result<()> {
        let n = self.n();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len() });
        }
        for i in 0..n - 1 {
            if self.pivots[i] {
                x.swap(i, i + 1);
            }
            x[i + 1] -= self.lower[i] * x[i];
        }
        x[n - 1] /= self.upper_d[n - 1];
        if n > 1 {
            x[n - 2] = (x[n - 2] - self.upper_e[n - 2] * x[n - 1]) / self.upper_d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (x[i] - self.upper_e[i] * x[i + 1] - self.upper_f[i] * x[i + 2]) / self.upper_d[i];
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn tri(d: &[f64], e: &[f64]) -> SymTridiagonal {
        SymTridiagonal::new(d.to_vec(), e.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(SymTridiagonal::new(vec![], vec![]).is_err());
        assert!(SymTridiagonal::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(SymTridiagonal::new(vec![1.0, f64::NAN], vec![0.0]).is_err());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(tri(&[5.0], &[]).norm_estimate(), 5.0);
        assert_eq!(tri(&[1.0, 1.0, 1.0], &[1.0, 1.0]).norm_estimate(), 3.0);
        assert_eq!(tri(&[10.0, 9.0], &[1.0]).norm_estimate(), 11.0);
    }

    #[test]
    fn matvec_examples() {
        let id = tri(&[1.0; 4], &[0.0; 3]);
        assert_eq!(id.matvec(&[1.0, -2.0, 3.0, 0.5]).unwrap(), vec![1.0, -2.0, 3.0, 0.5]);
        assert_eq!(tri(&[1.0, 1.0], &[1.0]).matvec(&[1.0, 0.0]).unwrap(), vec![1.0, 1.0]);
        assert_eq!(tri(&[2.0, 3.0, 4.0], &[1.0, 1.0]).matvec(&[1.0; 3]).unwrap(), vec![3.0, 5.0, 5.0]);
        assert!(id.matvec(&[1.0]).is_err());
    }

    #[test]
    fn diagonal_factor_without_pivoting() {
        let f = tri(&[2.0, 2.0], &[0.0]).factor_shifted(0.0);
        assert_eq!(f.upper_d(), &[2.0, 2.0]);
        assert_eq!(f.pivot_flags(), &[false]);
        assert_eq!(f.solve(&[2.0, 4.0]).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn zero_diagonal_forces_swap() {
        let t = tri(&[0.0, 0.0], &[1.0]);
        let f = t.factor_shifted(0.0);
        assert_eq!(f.pivot_flags(), &[true]);
        let x = f.solve(&[3.0, 5.0]).unwrap();
        assert_eq!(t.matvec(&x).unwrap(), vec![3.0, 5.0]);
    }

    #[test]
    fn identity_factor_is_identity_solve() {
        let f = tri(&[1.0; 5], &[0.0; 4]).factor_shifted(0.0);
        let b = [0.3, -1.0, 2.0, 7.5, -0.25];
        assert_eq!(f.solve(&b).unwrap(), b.to_vec());
        assert!(f.solve(&b[..3]).is_err());
    }

    #[test]
    fn exactly_singular_shift_stays_finite() {
        // eigenvalue 1 of [[1,1,1]] family with n = 3 is exact in floating point
        let t = tri(&[1.0, 1.0, 1.0], &[1.0, 1.0]);
        let f = t.factor_shifted(1.0);
        let x = f.solve(&[1.0, 0.0, 0.0]).unwrap();
        assert!(x.iter().all(|v| v.is_finite()));
        assert!(f.upper_d().iter().all(|&d| d != 0.0));
    }

    fn residual_inf(t: &SymTridiagonal, shift: f64, x: &[f64], b: &[f64]) -> f64 {
        let tx = t.matvec(x).unwrap();
        tx.iter().zip(x).zip(b).map(|((tx, x), b)| (tx - shift * x - b).abs()).fold(0.0, f64::max)
    }

    proptest! {
        #[test]
        fn norm_bounds_and_sign_invariance(
            d in prop::collection::vec(-10.0f64..10.0, 1..20),
            seed in prop::collection::vec(-10.0f64..10.0, 19),
        ) {
            let e: Vec<f64> = seed[..d.len() - 1].to_vec();
            let t = tri(&d, &e);
            let flipped = tri(&d, &e.iter().map(|x| -x).collect::<Vec<_>>());
            let nrm = t.norm_estimate();
            prop_assert!(d.iter().all(|a| a.abs() <= nrm));
            prop_assert_eq!(nrm, flipped.norm_estimate());
        }

        #[test]
        fn shifted_solve_has_small_residual(
            d in prop::collection::vec(-5.0f64..5.0, 1..40),
            seed in prop::collection::vec(-5.0f64..5.0, 39),
            b in prop::collection::vec(-1.0f64..1.0, 40),
            shift in -6.0f64..6.0,
        ) {
            let n = d.len();
            let t = tri(&d, &seed[..n - 1]);
            let f = t.factor_shifted(shift);
            let b = &b[..n];
            let x = f.solve(b).unwrap();
            prop_assert!(x.iter().all(|v| v.is_finite()));
            // backward-error style bound: ||A x - b|| <= c n eps (||A|| ||x|| + ||b||)
            let anorm = t.norm_estimate() + shift.abs();
            let xn = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let bn = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let r = residual_inf(&t, shift, &x, b);
            prop_assert!(r <= 100.0 * n as f64 * EPS * (anorm * xn + bn), "residual {r}");
        }

        #[test]
        fn singular_shifts_never_produce_nonfinite(
            d in prop::collection::vec(-1.0f64..1.0, 1..30),
            seed in prop::collection::vec(-1.0f64..1.0, 29),
            k in 0usize..30,
        ) {
            let n = d.len();
            let t = tri(&d, &seed[..n - 1]);
            // shift exactly at a diagonal entry, and at zero, with zero-heavy rows
            let shift = d[k % n];
            let x = t.factor_shifted(shift).solve(&vec![1.0; n]).unwrap();
            prop_assert!(x.iter().all(|v| v.is_finite()));
        }
    }
}
