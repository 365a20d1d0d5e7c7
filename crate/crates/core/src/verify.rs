//! Accuracy checks for computed eigenvectors.

use alloc::vec::Vec;
use core::ops::Range;

use crate::matrix::dot;
use crate::{ColMatrix, Error, Result, SymTridiagonal};

/// `max |Q^T Q - I|` over all entries.
pub fn orthogonality_deviation(q: &ColMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..q.cols() {
        for i in 0..=j {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot(q.col(i), q.col(j)) - want).abs());
        }
    }
    worst
}

/// `||T q_j - lam_j q_j||_inf` for each column.
pub fn residuals(t: &SymTridiagonal, q: &ColMatrix, lams: &[f64]) -> Result<Vec<f64>> {
    if q.cols() != lams.len() {
        return Err(Error::DimensionMismatch { expected: q.cols(), found: lams.len() });
    }
    (0..q.cols())
        .map(|j| {
            let tq = t.matvec(q.col(j))?;
            Ok(tq.iter().zip(q.col(j)).map(|(a, b)| (a - lams[j] * b).abs()).fold(0.0, f64::max))
        })
        .collect()
}

/// Sine of the largest principal angle between the spans of two matrices
/// with orthonormal columns and equal shape.
///
/// Computed as `||R||_2` with `R = B - A (A^T B)`; the eigenvalues of `R^T R`
/// are the squared sines without the cancellation of `1 - cos^2`.
pub fn subspace_distance(a: &ColMatrix, b: &ColMatrix) -> Result<f64> {
    let r = projection_residual(a, b)?;
    let mut s = r.gram(&r);
    let top = symmetric_eigenvalues(&mut s).into_iter().fold(0.0, f64::max);
    Ok(libm::sqrt(top.max(0.0)).min(1.0))
}

/// Cheap upper bound on [`subspace_distance`]: the root of the sum of all
/// squared principal sines, `||B - A (A^T B)||_F`.
pub fn subspace_distance_bound(a: &ColMatrix, b: &ColMatrix) -> Result<f64> {
    let r = projection_residual(a, b)?;
    Ok(libm::sqrt(r.as_slice().iter().map(|x| x * x).sum::<f64>()).min(1.0))
}

fn projection_residual(a: &ColMatrix, b: &ColMatrix) -> Result<ColMatrix> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch { expected: a.cols(), found: b.cols() });
    }
    let m = a.gram(b);
    let mut r = b.clone();
    for j in 0..b.cols() {
        let col = r.col_mut(j);
        for i in 0..a.cols() {
            let c = m.get(i, j);
            for (x, ai) in col.iter_mut().zip(a.col(i)) {
                *x -= c * ai;
            }
        }
    }
    Ok(r)
}

/// Clusters up to this size get exact principal angles in [`verify_result`];
/// larger ones get [`subspace_distance_bound`].
pub const EXACT_ANGLE_LIMIT: usize = 64;

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
/// Destroys the input.
fn symmetric_eigenvalues(a: &mut ColMatrix) -> Vec<f64> {
    let k = a.rows();
    for _sweep in 0..64 {
        let mut off = 0.0;
        let mut total = 0.0;
        for j in 0..k {
            for i in 0..k {
                let v = a.get(i, j) * a.get(i, j);
                total += v;
                if i != j {
                    off += v;
                }
            }
        }
        if off <= 1e-30 * total || off == 0.0 {
            break;
        }
        for p in 0..k {
            for q in p + 1..k {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for r in 0..k {
                    let arp = a.get(r, p);
                    let arq = a.get(r, q);
                    a.set(r, p, c * arp - s * arq);
                    a.set(r, q, s * arp + c * arq);
                }
                for r in 0..k {
                    let apr = a.get(p, r);
                    let aqr = a.get(q, r);
                    a.set(p, r, c * apr - s * aqr);
                    a.set(q, r, s * apr + c * aqr);
                }
            }
        }
    }
    (0..k).map(|i| a.get(i, i)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub orthogonality: f64,
    /// Largest residual divided by `||T||`.
    pub relative_residual: f64,
    /// Largest cluster subspace angle against a reference basis, if given.
    pub subspace: Option<f64>,
}

impl VerifyReport {
    pub fn passes(&self, orth_tol: f64, residual_tol: f64) -> bool {
        self.orthogonality <= orth_tol && self.relative_residual <= residual_tol
    }
}

/// Computes the standard checks for eigenvectors `q` of `t` with shifts
/// `lams`. With a reference basis, subspace angles are taken per cluster.
pub fn verify_result(
    t: &SymTridiagonal,
    q: &ColMatrix,
    lams: &[f64],
    reference: Option<(&ColMatrix, &[Range<usize>])>,
) -> Result<VerifyReport> {
    let tnorm = t.norm_estimate();
    let scale = if tnorm > 0.0 { tnorm } else { 1.0 };
    let res = residuals(t, q, lams)?;
    let relative_residual = res.iter().fold(0.0, |a: f64, b| a.max(*b)) / scale;
    let subspace = match reference {
        None => None,
        Some((r, ranges)) => {
            let mut worst: f64 = 0.0;
            for range in ranges {
                let (a, b) = (columns(q, range.clone()), columns(r, range.clone()));
                let d = if range.len() <= EXACT_ANGLE_LIMIT {
                    subspace_distance(&a, &b)?
                } else {
                    subspace_distance_bound(&a, &b)?
                };
                worst = worst.max(d);
            }
            Some(worst)
        }
    };
    Ok(VerifyReport { orthogonality: orthogonality_deviation(q), relative_residual, subspace })
}

fn columns(q: &ColMatrix, range: Range<usize>) -> ColMatrix {
    let mut out = ColMatrix::zeros(q.rows(), range.len());
    for (c, j) in range.enumerate() {
        out.col_mut(c).copy_from_slice(q.col(j));
    }
    out
}

/// `|u . v|` for unit vectors, the cosine of their angle.
pub fn alignment(u: &[f64], v: &[f64]) -> f64 {
    dot(u, v).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn rotation(theta: f64) -> ColMatrix {
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        ColMatrix::from_col_major(3, 2, vec![1.0, 0.0, 0.0, 0.0, c, s])
    }

    #[test]
    fn identity_is_orthonormal() {
        assert_eq!(orthogonality_deviation(&ColMatrix::identity(4, 4)), 0.0);
    }

    #[test]
    fn subspace_angle_of_tilted_plane() {
        let a = rotation(0.0);
        let b = rotation(0.3);
        let d = subspace_distance(&a, &b).unwrap();
        assert!((d - libm::sin(0.3)).abs() < 1e-12);
        let tiny = subspace_distance(&a, &rotation(1e-10)).unwrap();
        assert!((tiny - 1e-10).abs() < 1e-15);
        assert!(subspace_distance(&a, &a).unwrap() < 1e-12);
        assert!(subspace_distance_bound(&a, &b).unwrap() >= d - 1e-12);
    }

    #[test]
    fn duplicated_column_has_unit_deviation() {
        let q = ColMatrix::from_col_major(2, 2, vec![1.0, 0.0, 1.0, 0.0]);
        assert_eq!(orthogonality_deviation(&q), 1.0);
    }

    #[test]
    fn same_span_different_basis() {
        let a = rotation(0.0);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let b = ColMatrix::from_col_major(3, 2, vec![s, s, 0.0, s, -s, 0.0]);
        assert!(subspace_distance(&a, &b).unwrap() < 1e-15);
    }

    #[test]
    fn residual_of_exact_pair() {
        let t = SymTridiagonal::new(vec![2.0, 2.0], vec![1.0]).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let q = ColMatrix::from_col_major(2, 1, vec![s, s]);
        let r = residuals(&t, &q, &[3.0]).unwrap();
        assert!(r[0] < 1e-15);
        let rep = verify_result(&t, &q, &[3.0], None).unwrap();
        assert!(rep.passes(1e-14, 1e-14));
    }
}
