//! Independent numerical oracles shared by the integration tests.
//!
//! Everything here works on plain nested vectors so it does not reuse the
//! library's matrix code.

#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use st0_core::{ComplexMatrix, DeviceParams, FieldConfig};

pub type C = Complex64;
pub type M = Vec<Vec<C>>;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn zeros(n: usize) -> M {
    vec![vec![c(0.0, 0.0); n]; n]
}

pub fn eye(n: usize) -> M {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = c(1.0, 0.0);
    }
    m
}

pub fn from_cm(a: &ComplexMatrix) -> M {
    let n = a.dim();
    (0..n)
        .map(|i| (0..n).map(|j| a[(i, j)]).collect())
        .collect()
}

pub fn to_cm(a: &M) -> ComplexMatrix {
    ComplexMatrix::from_vec(a.len(), a.iter().flatten().copied().collect()).unwrap()
}

pub fn mm(a: &M, b: &M) -> M {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn add(a: &M, b: &M) -> M {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn scale(a: &M, s: C) -> M {
    a.iter()
        .map(|r| r.iter().map(|x| x * s).collect())
        .collect()
}

pub fn dagger(a: &M) -> M {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| a[j][i].conj()).collect())
        .collect()
}

pub fn max_abs(a: &M) -> f64 {
    a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    max_abs(&add(a, &scale(b, c(-1.0, 0.0))))
}

pub fn cm_diff(a: &ComplexMatrix, b: &M) -> f64 {
    max_diff(&from_cm(a), b)
}

/// Random Hermitian matrix with entries of order `s`.
pub fn random_hermitian(r: &mut StdRng, n: usize, s: f64) -> M {
    let mut m = zeros(n);
    for i in 0..n {
        m[i][i] = c(r.gen_range(-s..s), 0.0);
        for j in i + 1..n {
            let z = c(r.gen_range(-s..s), r.gen_range(-s..s));
            m[i][j] = z;
            m[j][i] = z.conj();
        }
    }
    m
}

/// Random unitary from Gram–Schmidt on a random complex matrix.
pub fn random_unitary(r: &mut StdRng, n: usize) -> M {
    let mut cols: Vec<Vec<C>> = Vec::new();
    while cols.len() < n {
        let mut v: Vec<C> = (0..n)
            .map(|_| c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
            .collect();
        for u in &cols {
            let p: C = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= p * y;
            }
        }
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm > 1e-3 {
            cols.push(v.into_iter().map(|z| z / nrm).collect());
        }
    }
    (0..n)
        .map(|i| (0..n).map(|j| cols[j][i]).collect())
        .collect()
}

/// exp(−iHt/ħ) by a 30-term Taylor series after scaling by 2⁻⁸, then 8 squarings.
pub fn taylor_expm(h: &M, t: f64, hbar: f64) -> M {
    let n = h.len();
    let a = scale(h, c(0.0, -t / hbar / 256.0));
    let mut term = eye(n);
    let mut sum = eye(n);
    for k in 1..=30 {
        term = scale(&mm(&term, &a), c(1.0 / k as f64, 0.0));
        sum = add(&sum, &term);
    }
    for _ in 0..8 {
        sum = mm(&sum, &sum);
    }
    sum
}

/// Characteristic polynomial coefficients (ascending powers) by Faddeev–LeVerrier.
pub fn char_poly(a: &M) -> Vec<f64> {
    let n = a.len();
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let mut mk = zeros(n);
    for k in 1..=n {
        let mut next = mm(a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c(coeffs[n - k + 1], 0.0);
        }
        mk = next;
        let am = mm(a, &mk);
        let tr: C = (0..n).map(|i| am[i][i]).sum();
        coeffs[n - k] = -tr.re / k as f64;
    }
    coeffs
}

fn poly_eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

fn trim(mut p: Vec<f64>, tol: f64) -> Vec<f64> {
    while p.len() > 1 && p.last().unwrap().abs() <= tol {
        p.pop();
    }
    p
}

fn poly_rem(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && r.len() > 1 {
        let f = r[r.len() - 1] / b[db];
        let shift = r.len() - 1 - db;
        for (i, &bi) in b.iter().enumerate() {
            r[i + shift] -= f * bi;
        }
        r.pop();
    }
    r
}

fn sturm_chain(p: &[f64]) -> Vec<Vec<f64>> {
    let dp: Vec<f64> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &k)| i as f64 * k)
        .collect();
    let mut chain = vec![p.to_vec(), dp];
    loop {
        let n = chain.len();
        if chain[n - 1].len() <= 1 {
            break;
        }
        let scale = chain[n - 1].iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let r = trim(
            poly_rem(&chain[n - 2], &chain[n - 1])
                .iter()
                .map(|x| -x)
                .collect(),
            1e-13 * scale.max(1.0),
        );
        if r.len() == 1 && r[0].abs() <= 1e-13 * scale.max(1.0) {
            break;
        }
        chain.push(r);
    }
    chain
}

fn sign_changes(chain: &[Vec<f64>], x: f64) -> usize {
    let vals: Vec<f64> = chain
        .iter()
        .map(|p| poly_eval(p, x))
        .filter(|v| *v != 0.0)
        .collect();
    vals.windows(2)
        .filter(|w| (w[0] < 0.0) != (w[1] < 0.0))
        .count()
}

/// Ascending eigenvalues of a Hermitian matrix with distinct eigenvalues,
/// from Sturm-sequence bisection on its characteristic polynomial.
pub fn sturm_eigenvalues(h: &M) -> Vec<f64> {
    let n = h.len();
    let s = max_abs(h).max(1e-300);
    let a = scale(h, c(1.0 / s, 0.0));
    let chain = sturm_chain(&char_poly(&a));
    let bound = n as f64 + 1.0;
    let v_lo = sign_changes(&chain, -bound);
    (1..=n)
        .map(|k| {
            // Smallest x with at least k roots in (−bound, x].
            let (mut lo, mut hi) = (-bound, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if v_lo - sign_changes(&chain, mid) >= k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi) * s
        })
        .collect()
}

/// Canonical (S, T₀, T₊, T₋) vectors in the product basis (↑↑, ↑↓, ↓↑, ↓↓), as columns.
pub fn st_columns() -> M {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        vec![c(r, 0.0), c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        vec![c(-r, 0.0), c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
    ]
}

fn kron(a: &M, b: &M) -> M {
    let (n, m) = (a.len(), b.len());
    let mut out = zeros(n * m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// Spin-½ operators (sx, sy, sz) = σ/2.
pub fn spin_half() -> [M; 3] {
    [
        vec![
            vec![c(0.0, 0.0), c(0.5, 0.0)],
            vec![c(0.5, 0.0), c(0.0, 0.0)],
        ],
        vec![
            vec![c(0.0, 0.0), c(0.0, -0.5)],
            vec![c(0.0, 0.5), c(0.0, 0.0)],
        ],
        vec![
            vec![c(0.5, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-0.5, 0.0)],
        ],
    ]
}

/// gμ_B(B₁·s₁ + B₂·s₂) in the product basis.
pub fn product_zeeman(p: &DeviceParams, b1: [f64; 3], b2: [f64; 3]) -> M {
    let s = spin_half();
    let id = eye(2);
    let mut h = zeros(4);
    for k in 0..3 {
        h = add(
            &h,
            &scale(&kron(&s[k], &id), c(p.g * p.mu_b_eff * b1[k], 0.0)),
        );
        h = add(
            &h,
            &scale(&kron(&id, &s[k]), c(p.g * p.mu_b_eff * b2[k], 0.0)),
        );
    }
    h
}

/// Full canonical-basis Hamiltonian from per-dot Zeeman terms plus diag(−J/8, J/8, J/8, J/8).
pub fn hamiltonian_oracle(p: &DeviceParams, f: &FieldConfig) -> M {
    let b1 = [
        (f.b_x + f.db_x) / 2.0,
        (f.b_y + f.db_y) / 2.0,
        (f.b_z + f.db_z) / 2.0,
    ];
    let b2 = [
        (f.b_x - f.db_x) / 2.0,
        (f.b_y - f.db_y) / 2.0,
        (f.b_z - f.db_z) / 2.0,
    ];
    let t = st_columns();
    let mut h = mm(&mm(&dagger(&t), &product_zeeman(p, b1, b2)), &t);
    let j8 = p.j_exc / 8.0;
    for (i, d) in [-j8, j8, j8, j8].into_iter().enumerate() {
        h[i][i] += c(d, 0.0);
    }
    h
}

/// Hermitian inverse square root of a 2×2 positive-definite Hermitian matrix.
fn inv_sqrt_2x2(a: &M) -> M {
    let (p, q, r) = (a[0][0].re, a[0][1], a[1][1].re);
    let tr = p + r;
    let disc = ((p - r) * (p - r) / 4.0 + q.norm_sqr()).sqrt();
    let (l1, l2) = (tr / 2.0 + disc, tr / 2.0 - disc);
    // f(A) = f(l1)·P1 + f(l2)·P2 with P1 = (A − l2 I)/(l1 − l2).
    if disc == 0.0 {
        return scale(&eye(2), c(1.0 / l1.sqrt(), 0.0));
    }
    let am2 = add(a, &scale(&eye(2), c(-l2, 0.0)));
    let p1 = scale(&am2, c(1.0 / (l1 - l2), 0.0));
    let p2 = add(&eye(2), &scale(&p1, c(-1.0, 0.0)));
    add(
        &scale(&p1, c(1.0 / l1.sqrt(), 0.0)),
        &scale(&p2, c(1.0 / l2.sqrt(), 0.0)),
    )
}

/// Hermitian effective Hamiltonian on the (S, T₀) subspace from the two exact
/// eigenvectors with the largest weight there, symmetrically orthonormalized.
pub fn des_cloizeaux(h: &M) -> M {
    // Eigenpairs by Sturm bisection and inverse iteration.
    let evals = sturm_eigenvalues(h);
    let n = h.len();
    let vecs: Vec<Vec<C>> = evals
        .iter()
        .map(|&l| {
            let shift = l + 1e-9 * max_abs(h);
            let mut v: Vec<C> = (0..n)
                .map(|i| c(1.0 + i as f64 * 0.1, 0.05 * i as f64))
                .collect();
            let a = add(h, &scale(&eye(n), c(-shift, 0.0)));
            for _ in 0..6 {
                v = solve(&a, &v);
                let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                v.iter_mut().for_each(|z| *z /= nrm);
            }
            v
        })
        .collect();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        let wa = vecs[a][0].norm_sqr() + vecs[a][1].norm_sqr();
        let wb = vecs[b][0].norm_sqr() + vecs[b][1].norm_sqr();
        wb.total_cmp(&wa)
    });
    let sel = [idx[0], idx[1]];
    // B[i][k] = ⟨i|φ_k⟩ for i in (S, T₀).
    let b: M = (0..2)
        .map(|i| sel.iter().map(|&k| vecs[k][i]).collect())
        .collect();
    let lam: M = vec![
        vec![c(evals[sel[0]], 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(evals[sel[1]], 0.0)],
    ];
    let s = inv_sqrt_2x2(&mm(&b, &dagger(&b)));
    mm(&mm(&s, &mm(&mm(&b, &lam), &dagger(&b))), &s)
}

/// Gaussian elimination with partial pivoting.
pub fn solve(a: &M, b: &[C]) -> Vec<C> {
    let n = a.len();
    let mut m: Vec<Vec<C>> = a
        .iter()
        .zip(b)
        .map(|(r, &x)| {
            let mut row = r.clone();
            row.push(x);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))
            .unwrap();
        m.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for k in col..=n {
                let v = m[col][k];
                m[row][k] -= f * v;
            }
        }
    }
    let mut x = vec![c(0.0, 0.0); n];
    for i in (0..n).rev() {
        let s: C = (i + 1..n).map(|k| m[i][k] * x[k]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    x
}

/// Random fields with components uniform in ±`s` tesla and B_z near 0.1 T.
pub fn random_fields(r: &mut StdRng, s: f64) -> FieldConfig {
    FieldConfig {
        b_x: r.gen_range(-s..s),
        b_y: r.gen_range(-s..s),
        b_z: 0.1 + r.gen_range(-0.05..0.05),
        db_x: r.gen_range(-s..s),
        db_y: r.gen_range(-s..s),
        db_z: r.gen_range(-0.02..0.02),
        duration: 0.0,
    }
}
