//! Small dense complex matrices, Hermitian eigendecomposition and unitary exponentials.
//!
//! Dimensions are limited to 1..=8, which covers every operator in the
//! singlet-triplet problem. Storage is row-major.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 8;

/// Relative Hermiticity tolerance (max-abs asymmetry over max-abs entry).
pub const HERMITIAN_TOL: f64 = 1e-13;

/// Eigenvalues closer than this (scaled by max(1, ‖H‖max)) form a degenerate cluster.
pub const DEGENERACY_GAP: f64 = 1e-15;

const MAX_SWEEPS: usize = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: vec![ZERO; dim * dim],
        })
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries; rejects wrong lengths and non-finite values.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                data.len()
            )));
        }
        if let Some(k) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite(format!(
                "entry ({}, {})",
                k / dim,
                k % dim
            )));
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a {dim}x{dim} matrix",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_vec(dim, data)
    }

    /// Builds a real matrix from nested rows.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Diagonal matrix with real entries.
    pub fn from_real_diag(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m.check_finite()?;
        Ok(m)
    }

    /// Diagonal matrix with complex entries.
    pub fn from_diag(diag: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m.check_finite()?;
        Ok(m)
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Entry (i, j).
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self[(i, j)]
    }

    /// Diagonal entries.
    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    /// Multiplies every entry by a complex scalar.
    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// Multiplies every entry by a real scalar.
    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Matrix product; fails on dimension mismatch.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Ok(Self { dim: n, data: out })
    }

    /// Commutator `self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        Ok(&self.matmul(rhs)? - &rhs.matmul(self)?)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against a {}x{} matrix",
                v.len(),
                self.dim,
                self.dim
            )));
        }
        let n = self.dim;
        Ok((0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum())
            .collect())
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Result<Self> {
        let (n, m) = (self.dim, rhs.dim);
        let mut out = Self::zeros(n * m)?;
        for i in 0..n {
            for j in 0..n {
                for k in 0..m {
                    for l in 0..m {
                        out[(i * m + k, j * m + l)] = self[(i, j)] * rhs[(k, l)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Sub-block with the given row and column index lists.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> Result<Vec<Vec<Complex64>>> {
        if rows.iter().chain(cols).any(|&k| k >= self.dim) {
            return Err(Error::DimensionMismatch("block index out of range".into()));
        }
        Ok(rows
            .iter()
            .map(|&i| cols.iter().map(|&j| self[(i, j)]).collect())
            .collect())
    }

    /// Principal sub-matrix on the given indices.
    pub fn principal(&self, idx: &[usize]) -> Result<Self> {
        let rows = self.block(idx, idx)?;
        Self::from_rows(&rows)
    }

    /// Largest |a_ij − conj(a_ji)|.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Hermitian part `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(0.5)
    }

    /// Fails if the matrix is not Hermitian to relative tolerance [`HERMITIAN_TOL`].
    pub fn check_hermitian(&self) -> Result<()> {
        self.check_finite()?;
        let asym = self.max_asymmetry();
        let tol = HERMITIAN_TOL * matnorm_max(self);
        if asym > tol {
            return Err(Error::NonHermitianInput {
                asymmetry: asym,
                tolerance: tol,
            });
        }
        Ok(())
    }

    fn check_finite(&self) -> Result<()> {
        match self
            .data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            Some(k) => Err(Error::NonFinite(format!(
                "entry ({}, {})",
                k / self.dim,
                k % self.dim
            ))),
            None => Ok(()),
        }
    }

    fn check_same_dim(&self, rhs: &Self) -> Result<()> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} against {}x{}",
                self.dim, self.dim, rhs.dim, rhs.dim
            )));
        }
        Ok(())
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::InvalidDimension(dim));
    }
    Ok(())
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    /// Panics on dimension mismatch.
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in addition");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    /// Panics on dimension mismatch.
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in subtraction");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    /// Panics on dimension mismatch; use [`ComplexMatrix::matmul`] for a fallible product.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("dimension mismatch in product")
    }
}

/// Largest entry modulus, max |a_ij|.
pub fn matnorm_max(a: &ComplexMatrix) -> f64 {
    a.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the eigenvector of `eigenvalues[j]`.
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    /// Eigenvector `j` as a vector.
    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        self.eigenvectors.column(j)
    }

    /// `V·diag(f(λ))·V†`.
    pub fn apply_function<F: Fn(f64) -> Complex64>(&self, f: F) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fl: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix {
            dim: n,
            data: vec![ZERO; n * n],
        };
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += v[(i, k)] * fl[k] * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// `V·diag(λ)·V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_function(|l| Complex64::new(l, 0.0))
    }

    /// `V·diag(exp(−iλt/ħ))·V†`; exactly the identity at t = 0.
    pub fn propagator(&self, t: f64, hbar: f64) -> ComplexMatrix {
        if t == 0.0 {
            return ComplexMatrix::identity(self.eigenvalues.len()).expect("valid dimension");
        }
        self.apply_function(|l| Complex64::from_polar(1.0, -l * t / hbar))
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi sweeps.
///
/// Eigenvalues are ascending. Each eigenvector has its largest-magnitude entry
/// real and positive (first index wins on ties). Vectors in a cluster of
/// eigenvalues closer than [`DEGENERACY_GAP`]·max(1, ‖H‖max) are
/// re-orthonormalized and ordered by the index of their largest entry.
pub fn eigh(h: &ComplexMatrix) -> Result<SpectralDecomposition> {
    h.check_hermitian()?;
    let n = h.dim;
    let mut a = h.hermitian_part();
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
    }
    let mut v = ComplexMatrix::identity(n)?;

    let scale = matnorm_max(&a);
    if scale > 0.0 {
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let off: f64 = off_diagonal_norm(&a);
            if off <= f64::EPSILON * 1e-3 * scale {
                converged = true;
                break;
            }
            let mut rotated = false;
            for p in 0..n {
                for q in (p + 1)..n {
                    rotated |= jacobi_step(&mut a, &mut v, p, q);
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged && off_diagonal_norm(&a) > 1e-12 * scale {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> =
        (0..n).map(|j| (a[(j, j)].re, v.column(j))).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));

    let gap = DEGENERACY_GAP * scale.max(1.0);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && pairs[end].0 - pairs[end - 1].0 < gap {
            end += 1;
        }
        if end - start > 1 {
            let cluster = &mut pairs[start..end];
            gram_schmidt(cluster);
            for (_, vec) in cluster.iter_mut() {
                fix_phase(vec);
            }
            cluster.sort_by_key(|(_, vec)| dominant_index(vec));
        } else {
            fix_phase(&mut pairs[start].1);
        }
        start = end;
    }

    let mut vecs = ComplexMatrix::zeros(n)?;
    for (j, (_, col)) in pairs.iter().enumerate() {
        for i in 0..n {
            vecs[(i, j)] = col[i];
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues: pairs.iter().map(|p| p.0).collect(),
        eigenvectors: vecs,
    })
}

/// Unitary propagator `exp(−iHt/ħ)` via the eigendecomposition of `h`.
pub fn expm_unitary(h: &ComplexMatrix, t: f64, hbar: f64) -> Result<ComplexMatrix> {
    if !t.is_finite() {
        return Err(Error::NonFinite(format!("time {t}")));
    }
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "hbar must be positive, got {hbar}"
        )));
    }
    Ok(eigh(h)?.propagator(t, hbar))
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation annihilating a[p][q]. Returns false if skipped.
fn jacobi_step(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) -> bool {
    let n = a.dim;
    let b = a[(p, q)];
    let babs = b.norm();
    if babs == 0.0 {
        return false;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Negligible coupling: rotation would not change either diagonal entry.
    if app.abs() + 100.0 * babs == app.abs() && aqq.abs() + 100.0 * babs == aqq.abs() {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return false;
    }
    // Phase that makes the (p,q) entry real positive.
    let d = Complex64::from_polar(1.0, -b.arg());
    let tau = (aqq - app) / (2.0 * babs);
    let t = if tau.abs() > 1e150 {
        0.5 / tau
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // G = diag(1, d) · [[c, s], [−s, c]] on (p, q).
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = d * (-s);
    let g_qq = d * c;

    // A ← A·G (columns p, q).
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    // A ← G†·A (rows p, q).
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    // V ← V·G.
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
    true
}

fn dominant_index(v: &[Complex64]) -> usize {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    v.iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-12))
        .unwrap_or(0)
}

fn fix_phase(v: &mut [Complex64]) {
    let k = dominant_index(v);
    let z = v[k];
    if z.norm() == 0.0 {
        return;
    }
    let phase = z.conj() / z.norm();
    for x in v.iter_mut() {
        *x *= phase;
    }
    v[k] = Complex64::new(v[k].norm(), 0.0);
}

fn gram_schmidt(cluster: &mut [(f64, Vec<Complex64>)]) {
    for i in 0..cluster.len() {
        // Two passes for orthogonality to working precision.
        for _ in 0..2 {
            for j in 0..i {
                let (head, tail) = cluster.split_at_mut(i);
                let u = &head[j].1;
                let w = &mut tail[0].1;
                let proj: Complex64 = u.iter().zip(w.iter()).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in w.iter_mut().zip(u) {
                    *x -= proj * y;
                }
            }
        }
        let norm = cluster[i]
            .1
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        for x in cluster[i].1.iter_mut() {
            *x /= norm;
        }
    }
}
