//! Sturm-sequence bisection for eigenvalues of a symmetric tridiagonal matrix.

use alloc::vec::Vec;

use crate::{Error, Result, SymTridiagonal, EPS};

/// Approximate eigenvalues, ascending, with the half-widths of their final
/// bisection intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueEstimates {
    pub values: Vec<f64>,
    pub half_widths: Vec<f64>,
    pub n: usize,
}

impl EigenvalueEstimates {
    pub fn m(&self) -> usize {
        self.values.len()
    }

    /// Wraps externally supplied eigenvalues (sorted ascending) with zero
    /// half-widths.
    pub fn from_values(n: usize, mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.len() > n {
            return Err(Error::InvalidArgument("need 1 <= m <= n eigenvalues"));
        }
        values.sort_by(f64::total_cmp);
        let half_widths = alloc::vec![0.0; values.len()];
        Ok(Self { values, half_widths, n })
    }
}

fn pivot_floor(t: &SymTridiagonal) -> f64 {
    let tnorm = t.norm_estimate();
    if tnorm > 0.0 {
        EPS * tnorm
    } else {
        f64::MIN_POSITIVE
    }
}

/// Number of eigenvalues of `t` strictly less than `x`.
pub fn sturm_count(t: &SymTridiagonal, x: f64) -> usize {
    sturm_count_with_floor(t, x, pivot_floor(t))
}

fn sturm_count_with_floor(t: &SymTridiagonal, x: f64, floor: f64) -> usize {
    let a = t.diag();
    let b = t.offdiag();
    let mut count = 0;
    let mut d = a[0] - x;
    for i in 0..a.len() {
        if i > 0 {
            d = (a[i] - x) - b[i - 1] * b[i - 1] / d;
        }
        // Tiny pivots keep their sign; an exact zero becomes positive, which
        // is the count at `x` minus an infinitesimal and so excludes an
        // eigenvalue sitting exactly at `x`.
        if d.abs() < floor {
            d = if d < 0.0 { -floor } else { floor };
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval `[min(a_i - r_i), max(a_i + r_i)]`, widened by a few
/// units of `eps * ||T||` so that the Sturm count is exactly `0` at the lower
/// end and `n` at the upper end.
pub fn gershgorin_bounds(t: &SymTridiagonal) -> (f64, f64) {
    let a = t.diag();
    let b = t.offdiag();
    let n = a.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { b[i - 1].abs() } else { 0.0 } + if i + 1 < n { b[i].abs() } else { 0.0 };
        lo = lo.min(a[i] - r);
        hi = hi.max(a[i] + r);
    }
    let pad = 2.0 * n as f64 * EPS * t.norm_estimate() + 2.0 * pivot_floor(t);
    (lo - pad, hi + pad)
}

/// Default bisection tolerance, `eps * ||T|| * n`.
pub fn default_tolerance(t: &SymTridiagonal) -> f64 {
    let tol = EPS * t.norm_estimate() * t.n() as f64;
    if tol > 0.0 {
        tol
    } else {
        f64::MIN_POSITIVE
    }
}

/// The `m` smallest eigenvalues of `t`, each bracketed to half-width `tol`.
///
/// Bisection stops early if the interval can no longer be split in floating
/// point; the reported half-width is then the achieved one.
pub fn bisect_eigenvalues(t: &SymTridiagonal, m: usize, tol: f64) -> Result<EigenvalueEstimates> {
    let n = t.n();
    if m == 0 || m > n {
        return Err(Error::InvalidArgument("eigenvalue count must satisfy 1 <= m <= n"));
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidArgument("tolerance must be positive and finite"));
    }
    let floor = pivot_floor(t);
    let (glo, ghi) = gershgorin_bounds(t);

    let mut values = Vec::with_capacity(m);
    let mut half_widths = Vec::with_capacity(m);
    let mut lo_start = glo;
    for k in 0..m {
        // Invariant: count(lo) <= k < count(hi).
        let mut lo = lo_start;
        let mut hi = ghi;
        loop {
            if hi - lo <= 2.0 * tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if sturm_count_with_floor(t, mid, floor) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let v = 0.5 * (lo + hi);
        let mut h = 0.5 * (hi - lo);
        // make sure the reported interval still covers [lo, hi] after rounding
        while v - h > lo || v + h < hi {
            h = libm::nextafter(h, f64::INFINITY);
        }
        values.push(v);
        half_widths.push(h);
        // The next eigenvalue cannot lie below this one's lower bracket.
        lo_start = lo;
    }
    Ok(EigenvalueEstimates { values, half_widths, n })
}
