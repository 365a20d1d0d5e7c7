use cwyinvit::matgen::{gen_glued_wilkinson, gen_type1, gen_type2};
use cwyinvit::spectrum::{bisect_eigenvalues, default_tolerance};
use cwyinvit::{SymTridiagonal, EPS};
use cwyinvit_testkit as tk;
use rand::Rng;

fn random_tridiagonal(n: usize, seed: u64) -> SymTridiagonal {
    let mut r = tk::rng(seed);
    let d = (0..n).map(|_| r.gen_range(-2.0..2.0)).collect();
    let e = (0..n.saturating_sub(1)).map(|_| r.gen_range(-1.0..1.0)).collect();
    SymTridiagonal::new(d, e).unwrap()
}

#[test]
fn shifted_solve_matches_dense_lu() {
    for seed in 0..40u64 {
        let n = 1 + (seed as usize * 7) % 60;
        let t = random_tridiagonal(n, seed);
        let mut r = tk::rng(seed + 1000);
        let shift = r.gen_range(-3.0..3.0);
        let b = tk::random_vector(n, &mut r);
        let x = t.factor_shifted(shift).solve(&b).unwrap();
        let want = tk::shifted_solve(t.diag(), t.offdiag(), shift, &b).unwrap();
        let scale = want.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        for (a, w) in x.iter().zip(&want) {
            assert!((a - w).abs() <= 1e-9 * scale, "seed {seed}: {a} vs {w}");
        }
    }
}

#[test]
fn bisection_matches_dense_eigensolver() {
    for (i, n) in [1usize, 2, 5, 17, 64, 120, 200].into_iter().enumerate() {
        for t in [random_tridiagonal(n, i as u64), gen_type1(n, i as u64).unwrap()] {
            let tol = default_tolerance(&t);
            let est = bisect_eigenvalues(&t, n, tol).unwrap();
            let (want, _) = tk::sym_eigen(t.diag(), t.offdiag());
            let slack = 10.0 * n as f64 * EPS * t.norm_estimate();
            for k in 0..n {
                assert!(
                    (est.values[k] - want[k]).abs() <= est.half_widths[k] + slack,
                    "n={n} k={k}: {} vs {}",
                    est.values[k],
                    want[k]
                );
            }
        }
    }
}

#[test]
fn type2_eigenvalues_match_closed_form() {
    for n in [1usize, 3, 50, 500] {
        let t = gen_type2(n).unwrap();
        let tol = default_tolerance(&t);
        let est = bisect_eigenvalues(&t, n, tol).unwrap();
        for (v, want) in est.values.iter().zip(tk::ones_tridiagonal_eigenvalues(n)) {
            assert!((v - want).abs() <= tol + 4.0 * EPS * 3.0, "n={n}: {v} vs {want}");
        }
    }
}

#[test]
fn two_glued_blocks_give_pairs_near_block_spectrum() {
    let t = gen_glued_wilkinson(2, 1e-4).unwrap();
    let est = bisect_eigenvalues(&t, 42, default_tolerance(&t)).unwrap();
    let block = gen_glued_wilkinson(1, 1e-4).unwrap();
    let (single, _) = tk::sym_eigen(block.diag(), block.offdiag());
    for k in 0..21 {
        let (a, b) = (est.values[2 * k], est.values[2 * k + 1]);
        assert!((a - single[k]).abs() < 1e-3 && (b - single[k]).abs() < 1e-3, "pair {k}: {a}, {b} vs {}", single[k]);
    }
}
