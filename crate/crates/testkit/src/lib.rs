//! Dense reference computations for tests.
//!
//! Everything here works on plain column-major slices and nalgebra matrices
//! and shares no code with the library under test.

pub use nalgebra;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EPS: f64 = f64::EPSILON;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Column-major buffer to a dense matrix.
pub fn dense(rows: usize, cols: usize, col_major: &[f64]) -> DMatrix<f64> {
    DMatrix::from_column_slice(rows, cols, col_major)
}

pub fn tridiagonal(diag: &[f64], offdiag: &[f64]) -> DMatrix<f64> {
    let n = diag.len();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = diag[i];
    }
    for (i, &b) in offdiag.iter().enumerate() {
        a[(i, i + 1)] = b;
        a[(i + 1, i)] = b;
    }
    a
}

/// Solves `(T - shift I) x = b` by dense LU with partial pivoting.
pub fn shifted_solve(diag: &[f64], offdiag: &[f64], shift: f64, b: &[f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    let a = tridiagonal(diag, offdiag) - DMatrix::identity(n, n) * shift;
    a.lu().solve(&DVector::from_column_slice(b)).map(|x| x.as_slice().to_vec())
}

/// Eigenvalues ascending and matching eigenvectors of a symmetric
/// tridiagonal matrix, by the dense symmetric eigensolver.
pub fn sym_eigen(diag: &[f64], offdiag: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let eig = tridiagonal(diag, offdiag).symmetric_eigen();
    let mut order: Vec<usize> = (0..diag.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(diag.len(), diag.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> DMatrix<f64> {
    let mut r = rng(seed);
    DMatrix::from_fn(rows, cols, |_, _| r.gen_range(-1.0..1.0))
}

pub fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Orthonormal `rows x cols` matrix from the QR factorization of a random one.
pub fn random_orthonormal(rows: usize, cols: usize, seed: u64) -> DMatrix<f64> {
    random_matrix(rows, cols, seed).qr().q()
}

/// `V = Q0 diag(1, ..., 1, 1/kappa) R` with `Q0` orthonormal and `R` a random
/// rotation, so that `cond(V) = kappa`.
pub fn conditioned_matrix(rows: usize, cols: usize, kappa: f64, seed: u64) -> DMatrix<f64> {
    let q0 = random_orthonormal(rows, cols, seed);
    let rot = random_orthonormal(cols, cols, seed ^ 0x5eed);
    let mut s = DMatrix::identity(cols, cols);
    s[(cols - 1, cols - 1)] = 1.0 / kappa;
    q0 * s * rot
}

/// Reflector `I - t y y^T` as a dense matrix.
pub fn reflector(y: &[f64], t: f64) -> DMatrix<f64> {
    let n = y.len();
    let y = DVector::from_column_slice(y);
    DMatrix::identity(n, n) - &y * y.transpose() * t
}

/// `H_1 H_2 ... H_m` multiplied out explicitly.
pub fn reflector_product(reflectors: &[(Vec<f64>, f64)], n: usize) -> DMatrix<f64> {
    reflectors.iter().fold(DMatrix::identity(n, n), |acc, (y, t)| acc * reflector(y, *t))
}

/// Reflector mapping `u` onto a multiple of `e_1`, with `y = u - c e_1`,
/// `c = -sign(u_1) ||u||` and `t = 2 / ||y||^2`.
pub fn textbook_reflector(u: &[f64]) -> (Vec<f64>, f64) {
    let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let c = if u[0] >= 0.0 { -norm } else { norm };
    let mut y = u.to_vec();
    y[0] -= c;
    let t = 2.0 / y.iter().map(|x| x * x).sum::<f64>();
    (y, t)
}

/// Householder QR of `v` with dense matrices: returns the `n x m` leading
/// columns of `H_1 ... H_m`.
pub fn householder_q(v: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, m) = v.shape();
    let mut r = v.clone();
    let mut reflectors = Vec::with_capacity(m);
    for j in 0..m {
        let mut y = vec![0.0; n];
        let (tail, t) = textbook_reflector(&r.column(j).as_slice()[j..]);
        y[j..].copy_from_slice(&tail);
        r = reflector(&y, t) * r;
        reflectors.push((y, t));
    }
    reflector_product(&reflectors, n).columns(0, m).into_owned()
}

/// `max |Q^T Q - I|`.
pub fn orthogonality(q: &DMatrix<f64>) -> f64 {
    let g = q.transpose() * q;
    let m = g.nrows();
    (g - DMatrix::identity(m, m)).amax()
}

/// Largest entrywise difference between columns of `a` and `b` after each
/// column of `b` is given the sign that matches `a` best.
pub fn max_diff_up_to_sign(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    (0..a.ncols())
        .map(|j| {
            let plus = (a.column(j) - b.column(j)).amax();
            let minus = (a.column(j) + b.column(j)).amax();
            plus.min(minus)
        })
        .fold(0.0, f64::max)
}

/// Sine of the largest principal angle between the column spans of two
/// orthonormal matrices, as `||(I - A A^T) B||_2`.
pub fn subspace_sine(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let resid = b - a * (a.transpose() * b);
    resid.singular_values().max().min(1.0)
}

/// Groups ascending values into clusters with the gap rule `gap <= rel * scale`.
pub fn cluster_sizes(values: &[f64], rel: f64, scale: f64) -> Vec<usize> {
    let mut sizes = Vec::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 && (v - values[i - 1]).abs() <= rel * scale {
            *sizes.last_mut().unwrap() += 1;
        } else {
            sizes.push(1);
        }
    }
    sizes
}

/// Closed-form eigenvalues `1 + 2 cos(k pi / (n+1))`, ascending, of the
/// all-ones tridiagonal matrix.
pub fn ones_tridiagonal_eigenvalues(n: usize) -> Vec<f64> {
    let h = std::f64::consts::PI / (n as f64 + 1.0);
    (1..=n).rev().map(|k| 1.0 + 2.0 * (k as f64 * h).cos()).collect()
}

/// Closed-form unit eigenvector for the `k`-th largest eigenvalue (1-based)
/// of the all-ones tridiagonal matrix: entries `sin(i k pi / (n+1))`.
pub fn ones_tridiagonal_eigenvector(n: usize, k: usize) -> Vec<f64> {
    let h = std::f64::consts::PI / (n as f64 + 1.0);
    let v: Vec<f64> = (1..=n).map(|i| (i as f64 * k as f64 * h).sin()).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn householder_q_is_orthonormal_and_spans_v() {
        let v = random_matrix(12, 5, 3);
        let q = householder_q(&v);
        assert!(orthogonality(&q) < 1e-14);
        assert!(subspace_sine(&q, &v.qr().q()) < 1e-13);
    }

    #[test]
    fn conditioned_matrix_has_requested_condition() {
        let v = conditioned_matrix(30, 6, 1e6, 1);
        let s = v.singular_values();
        let k = s.max() / s.min();
        assert!((k / 1e6 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn closed_form_matches_dense() {
        let n = 7;
        let (vals, vecs) = sym_eigen(&vec![1.0; n], &vec![1.0; n - 1]);
        for (a, b) in vals.iter().zip(ones_tridiagonal_eigenvalues(n)) {
            assert!((a - b).abs() < 1e-13);
        }
        let top = DMatrix::from_column_slice(n, 1, &ones_tridiagonal_eigenvector(n, 1));
        assert!(max_diff_up_to_sign(&vecs.columns(n - 1, 1).into_owned(), &top) < 1e-13);
    }
}
