use cwyinvit::invit::{cluster_ranges, inverse_iteration, perturb_degenerate, classical_inverse_iteration, CLUSTER_GAP};
use cwyinvit::matgen::{gen_glued_wilkinson, gen_type1, gen_type2};
use cwyinvit::spectrum::{bisect_eigenvalues, default_tolerance};
use cwyinvit::{Backend, EigenvalueEstimates, EigenvectorResult, InverseIterationConfig, Serial, SymTridiagonal, EPS};
use cwyinvit_testkit as tk;
use tk::nalgebra::DMatrix;

fn eigenvalues(t: &SymTridiagonal) -> EigenvalueEstimates {
    bisect_eigenvalues(t, t.n(), default_tolerance(t)).unwrap()
}

fn solve(t: &SymTridiagonal, lams: &EigenvalueEstimates, backend: Backend) -> EigenvectorResult {
    inverse_iteration(&Serial, t, lams, &InverseIterationConfig::with_backend(backend)).unwrap()
}

fn q_dense(r: &EigenvectorResult) -> DMatrix<f64> {
    tk::dense(r.q.rows(), r.q.cols(), r.q.as_slice())
}

#[test]
fn diagonal_matrix() {
    let t = SymTridiagonal::new(vec![1.0, 2.0, 3.0], vec![0.0, 0.0]).unwrap();
    let lams = eigenvalues(&t);
    let res = solve(&t, &lams, Backend::Mgs);
    assert!(tk::max_diff_up_to_sign(&q_dense(&res), &DMatrix::identity(3, 3)) < 1e-15);
    assert!(res.residuals.iter().all(|r| *r <= 10.0 * EPS));
}

#[test]
fn ones_tridiagonal_vectors_match_closed_form() {
    for n in [3usize, 40] {
        let t = gen_type2(n).unwrap();
        let lams = eigenvalues(&t);
        for backend in Backend::ALL {
            let res = solve(&t, &lams, backend);
            let q = q_dense(&res);
            for j in 0..n {
                let want = tk::ones_tridiagonal_eigenvector(n, n - j);
                let d = tk::max_diff_up_to_sign(&q.columns(j, 1).into_owned(), &tk::dense(n, 1, &want));
                if n == 3 {
                    assert!(d < 1e-10, "{backend} column {j}: {d}");
                }
            }
            assert!(res.residuals.iter().all(|r| *r <= 1e3 * n as f64 * EPS * 3.0));
        }
    }
}

#[test]
fn separated_spectrum_gives_identical_results() {
    let t = SymTridiagonal::new(vec![1.0, 4.0, 9.0, 16.0, 25.0], vec![0.5; 4]).unwrap();
    let lams = eigenvalues(&t);
    assert!(cluster_ranges(&lams.values, t.norm_estimate()).iter().all(|r| r.len() == 1));
    let base = classical_inverse_iteration(&Serial, &t, &lams, &InverseIterationConfig::with_backend(Backend::Mgs))
        .unwrap();
    for backend in [Backend::Householder, Backend::CwyOrdinary, Backend::CwyPacked] {
        let res = solve(&t, &lams, backend);
        assert_eq!(res.q, base.q, "{backend}");
        assert_eq!(res.counts.sync_events, 0);
    }
}

#[test]
fn glued_wilkinson_five_blocks() {
    let t = gen_glued_wilkinson(5, 1e-4).unwrap();
    let n = t.n();
    let tnorm = t.norm_estimate();
    let lams = eigenvalues(&t);
    let (_, oracle) = tk::sym_eigen(t.diag(), t.offdiag());
    let ranges = cluster_ranges(&lams.values, tnorm);
    let mut orth = Vec::new();
    let mut qs = Vec::new();
    for backend in Backend::ALL {
        let res = solve(&t, &lams, backend);
        let q = q_dense(&res);
        let dev = tk::orthogonality(&q);
        orth.push(dev);
        assert!(dev <= 1e-8, "{backend}: {dev:e}");
        if backend != Backend::Mgs {
            assert!(dev <= 1e-12, "{backend}: {dev:e}");
        }
        let worst = res.residuals.iter().fold(0.0f64, |a, r| a.max(*r));
        assert!(worst <= 1e3 * n as f64 * EPS * tnorm, "{backend}: residual {worst:e}");
        assert!(res.converged.iter().all(|c| *c), "{backend}");
        assert!(res.iters.iter().all(|k| *k <= 5), "{backend}: {:?}", res.iters);
        for r in &ranges {
            let s = tk::subspace_sine(&oracle.columns(r.start, r.len()).into_owned(), &q.columns(r.start, r.len()).into_owned());
            assert!(s <= 1e-8, "{backend} cluster {r:?}: {s:e}");
        }
        qs.push(q);
    }
    // reflector backends are no worse than Gram-Schmidt, up to rounding noise
    let floor = n as f64 * EPS;
    assert!(orth[2] <= orth[0].max(floor) && orth[3] <= orth[0].max(floor), "{orth:?}");
    for r in &ranges {
        for q in &qs[1..] {
            let s = tk::subspace_sine(&qs[0].columns(r.start, r.len()).into_owned(), &q.columns(r.start, r.len()).into_owned());
            assert!(s <= 1e-8);
        }
    }
}

#[test]
fn ones_tridiagonal_500_packed() {
    let n = 500;
    let t = gen_type2(n).unwrap();
    let res = solve(&t, &eigenvalues(&t), Backend::CwyPacked);
    let q = q_dense(&res);
    assert!(tk::orthogonality(&q) <= 100.0 * n as f64 * EPS);
    for j in (0..n).step_by(50) {
        let want = tk::ones_tridiagonal_eigenvector(n, n - j);
        let d = tk::max_diff_up_to_sign(&q.columns(j, 1).into_owned(), &tk::dense(n, 1, &want));
        assert!(d < 1e-8, "column {j}: {d:e}");
    }
}

fn largest_cluster_fraction(n: usize, seed: u64) -> f64 {
    let t = gen_type1(n, seed).unwrap();
    let lams = eigenvalues(&t);
    let biggest = cluster_ranges(&lams.values, t.norm_estimate()).iter().map(|r| r.len()).max().unwrap();
    biggest as f64 / n as f64
}

#[test]
fn random_matrices_collapse_into_one_cluster_as_n_grows() {
    let small = largest_cluster_fraction(2100, 1);
    let large = largest_cluster_fraction(10_500, 1);
    assert!(large > small, "{small} then {large}");
    assert!(large > 0.5, "largest cluster holds {large} of the spectrum");
}

#[test]
fn large_ones_tridiagonal_is_one_cluster() {
    let t = gen_type2(2100).unwrap();
    let lams = eigenvalues(&t);
    assert_eq!(cluster_ranges(&lams.values, t.norm_estimate()).len(), 1);
}

#[test]
fn perturbation_ladder() {
    assert_eq!(perturb_degenerate(&[1.0, 1.0], 2, 1.0, 1.0), vec![1.0, 1.0 + 2.0 * EPS]);
    let fine = [0.0, 0.5, 1.0];
    assert_eq!(perturb_degenerate(&fine, 3, 1.0, 1.0), fine.to_vec());
    let out = perturb_degenerate(&[2.0; 21], 21, 1.0, 1.0);
    let sep = 21.0 * EPS;
    for w in out.windows(2) {
        assert!(w[1] > w[0]);
        assert!(((w[1] - w[0]) - sep).abs() <= 4.0 * EPS);
    }
}

#[test]
fn glued_pairs_are_within_the_cluster_gap() {
    let t = gen_glued_wilkinson(2, 1e-4).unwrap();
    let lams = eigenvalues(&t);
    let gap = CLUSTER_GAP * t.norm_estimate();
    for k in 0..21 {
        assert!(lams.values[2 * k + 1] - lams.values[2 * k] <= gap);
    }
}

#[test]
fn fixed_seed_is_bit_reproducible() {
    let t = gen_type1(300, 9).unwrap();
    let lams = eigenvalues(&t);
    for backend in Backend::ALL {
        let a = solve(&t, &lams, backend);
        let b = solve(&t, &lams, backend);
        assert_eq!(a.q, b.q);
        assert_eq!(a.counts, b.counts);
    }
}
