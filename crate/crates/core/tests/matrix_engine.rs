//! Eigensolver and propagator against independent oracles.

mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use st0_core::{eigh, expm_unitary, matnorm_max, ComplexMatrix, Error};

const HBAR: f64 = 6.582119569e-16;

fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n).unwrap()
}

#[test]
fn eigh_sorts_table_diagonal() {
    let h = ComplexMatrix::from_real_diag(&[-2.5e-7, 2.5e-7, 6.67915e-6, -6.17915e-6]).unwrap();
    let s = eigh(&h).unwrap();
    assert_eq!(
        s.eigenvalues,
        vec![-6.17915e-6, -2.5e-7, 2.5e-7, 6.67915e-6]
    );
    // Column j is the basis vector of the j-th smallest entry.
    for (j, k) in [3, 0, 1, 2].into_iter().enumerate() {
        assert_eq!(s.eigenvectors[(k, j)], c(1.0, 0.0));
    }
}

#[test]
fn eigh_of_identity() {
    let s = eigh(&identity(4)).unwrap();
    assert!(s.eigenvalues.iter().all(|&l| l == 1.0));
    assert_eq!(s.eigenvectors, identity(4));
}

#[test]
fn eigh_matches_sturm_oracle() {
    let mut r = rng(11);
    for n in [2, 3, 4] {
        for _ in 0..200 {
            let h = random_hermitian(&mut r, n, 1.0);
            let got = eigh(&to_cm(&h)).unwrap().eigenvalues;
            let want = sturm_eigenvalues(&h);
            let scale = want.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() <= 1e-12 * scale, "n={n}: {got:?} vs {want:?}");
            }
        }
    }
}

#[test]
fn eigh_matches_sturm_oracle_at_device_scale() {
    let mut r = rng(12);
    for _ in 0..200 {
        let h = random_hermitian(&mut r, 4, 5e-6);
        let got = eigh(&to_cm(&h)).unwrap().eigenvalues;
        let want = sturm_eigenvalues(&h);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-12 * 5e-6);
        }
    }
}

#[test]
fn eigh_rejects_non_hermitian() {
    let h = ComplexMatrix::from_rows(&[[c(1.0, 0.0), c(0.0, 1.0)], [c(0.0, 1.0), c(2.0, 0.0)]])
        .unwrap();
    assert!(matches!(eigh(&h), Err(Error::NonHermitianInput { .. })));
}

#[test]
fn degenerate_cluster_is_orthonormal() {
    let mut r = rng(13);
    let u = random_unitary(&mut r, 4);
    let d = vec![
        vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(-2.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)],
    ];
    let h = to_cm(
        &mm(&mm(&u, &d), &dagger(&u))
            .iter()
            .map(|r| r.to_vec())
            .collect(),
    );
    let h = h.hermitian_part();
    let s = eigh(&h).unwrap();
    let v = &s.eigenvectors;
    let vdv = v.adjoint().matmul(v).unwrap();
    assert!(matnorm_max(&(&vdv - &identity(4))) < 1e-12);
    assert!(matnorm_max(&(&s.reconstruct() - &h)) < 1e-12 * matnorm_max(&h));
}

#[test]
fn expm_examples() {
    let mut r = rng(14);
    let h = to_cm(&random_hermitian(&mut r, 4, 1e-6));
    assert_eq!(expm_unitary(&h, 0.0, HBAR).unwrap(), identity(4));
    // (E/2)σ_x with E t/ħ = π gives −iσ_x.
    let e = 1e-6;
    let t = std::f64::consts::PI * HBAR / e;
    let sx = ComplexMatrix::from_real_rows(&[[0.0, e / 2.0], [e / 2.0, 0.0]]).unwrap();
    let u = expm_unitary(&sx, t, HBAR).unwrap();
    let want =
        ComplexMatrix::from_rows(&[[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, -1.0), c(0.0, 0.0)]])
            .unwrap();
    assert!(matnorm_max(&(&u - &want)) < 1e-12);
}

#[test]
fn expm_matches_taylor_oracle() {
    let mut r = rng(15);
    for _ in 0..100 {
        let h = random_hermitian(&mut r, 4, 5e-6);
        let got = expm_unitary(&to_cm(&h), 1e-9, HBAR).unwrap();
        assert!(cm_diff(&got, &taylor_expm(&h, 1e-9, HBAR)) < 1e-11);
    }
}

#[test]
fn matnorm_examples() {
    assert_eq!(matnorm_max(&ComplexMatrix::zeros(3).unwrap()), 0.0);
    assert_eq!(matnorm_max(&identity(4)), 1.0);
    let mut m = ComplexMatrix::zeros(2).unwrap();
    m[(1, 0)] = c(3.0, 4.0);
    assert_eq!(matnorm_max(&m), 5.0);
}

#[test]
fn unitarity_over_many_draws() {
    let mut r = rng(16);
    for _ in 0..1000 {
        let n = r.gen_range(2..=8);
        let h = to_cm(&random_hermitian(&mut r, n, 5e-6));
        let t = r.gen_range(-1e-7..1e-7);
        let u = expm_unitary(&h, t, HBAR).unwrap();
        let udu = u.adjoint().matmul(&u).unwrap();
        assert!(matnorm_max(&(&udu - &identity(n))) < 1e-12);
    }
}

fn spectral_check(h: &ComplexMatrix) -> Result<(), TestCaseError> {
    let s = eigh(h).unwrap();
    let n = h.dim();
    let v = &s.eigenvectors;
    let vdv = v.adjoint().matmul(v).unwrap();
    prop_assert!(matnorm_max(&(&vdv - &identity(n))) < 1e-12);
    let hv = h.matmul(v).unwrap();
    let lam: Vec<C> = s.eigenvalues.iter().map(|&l| c(l, 0.0)).collect();
    let vl = v.matmul(&ComplexMatrix::from_diag(&lam).unwrap()).unwrap();
    prop_assert!(matnorm_max(&(&hv - &vl)) < 1e-12 * matnorm_max(h).max(1e-300));
    prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    for j in 0..n {
        let col = s.vector(j);
        let k = (0..n)
            .max_by(|&a, &b| col[a].norm().total_cmp(&col[b].norm()))
            .unwrap();
        prop_assert!(
            col[k].im == 0.0 && col[k].re > 0.0,
            "phase convention in column {j}"
        );
    }
    Ok(())
}

proptest! {
    #[test]
    fn spectral_invariants(seed in any::<u64>(), n in 2usize..=8, s in 1e-7f64..10.0) {
        let mut r = rng(seed);
        spectral_check(&to_cm(&random_hermitian(&mut r, n, s)))?;
    }

    #[test]
    fn eigh_recovers_prescribed_spectrum(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = rng(seed);
        let u = random_unitary(&mut r, n);
        let mut lam: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
        lam.sort_by(f64::total_cmp);
        let mut d = zeros(n);
        for i in 0..n {
            d[i][i] = c(lam[i], 0.0);
        }
        let h = to_cm(&mm(&mm(&u, &d), &dagger(&u))).hermitian_part();
        let got = eigh(&h).unwrap().eigenvalues;
        for (g, w) in got.iter().zip(&lam) {
            prop_assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn propagator_group_law(seed in any::<u64>(), t1 in -5e-8f64..5e-8, t2 in -5e-8f64..5e-8) {
        let mut r = rng(seed);
        let h = to_cm(&random_hermitian(&mut r, 4, 5e-6));
        let a = expm_unitary(&h, t1, HBAR).unwrap();
        let b = expm_unitary(&h, t2, HBAR).unwrap();
        let ab = expm_unitary(&h, t1 + t2, HBAR).unwrap();
        prop_assert!(matnorm_max(&(&a.matmul(&b).unwrap() - &ab)) < 1e-11);
    }
}
