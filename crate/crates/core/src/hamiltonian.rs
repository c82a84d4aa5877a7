//! Double-quantum-dot Hamiltonians in the singlet-triplet basis.
//!
//! Canonical basis order is (S, T₀, T₊, T₋) with
//! S = (↑↓ − ↓↑)/√2, T₀ = (↑↓ + ↓↑)/√2, T₊ = ↑↑, T₋ = ↓↓.
//! Product-basis order is (↑↑, ↑↓, ↓↑, ↓↓) with dot 1 as the left factor.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::physics::{DeviceParams, FieldConfig};

/// How the exchange term is offset on the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExchangeConvention {
    /// Diagonal (−J/8, J/8, J/8, J/8): the main-text form used by [`build_dqd`].
    #[default]
    Metric,
    /// Diagonal (0, J/4, J/4, J/4): the metric form shifted by +(J/8)·I.
    SingletZero,
}

impl ExchangeConvention {
    /// Global energy shift relative to the metric form, eV.
    pub fn shift(self, params: &DeviceParams) -> f64 {
        match self {
            ExchangeConvention::Metric => 0.0,
            ExchangeConvention::SingletZero => params.j_exc / 8.0,
        }
    }
}

/// Full 4×4 Hamiltonian with the inputs that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct DqdHamiltonian {
    /// Matrix in canonical order, eV.
    pub matrix: ComplexMatrix,
    /// Device parameters used.
    pub params: DeviceParams,
    /// Fields used.
    pub fields: FieldConfig,
}

/// Computational block, leakage block and leakage-subspace block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition {
    /// (S, T₀) block.
    pub h0: ComplexMatrix,
    /// Couplings, rows (S, T₀), columns (T₊, T₋).
    pub h_leak: [[Complex64; 2]; 2],
    /// (T₊, T₋) block.
    pub h_out: ComplexMatrix,
}

impl BlockDecomposition {
    /// Reassembles `[[h0, h_leak], [h_leak†, h_out]]`.
    pub fn reassemble(&self) -> Result<ComplexMatrix> {
        let leak: Vec<Complex64> = self.h_leak.iter().flatten().copied().collect();
        build_generic_leak(&self.h0, &self.h_out, &leak)
    }
}

/// Builds the DQD Hamiltonian in canonical order.
///
/// Diagonal (−J/8, J/8, J/8 + ½gμ_B B_z, J/8 − ½gμ_B B_z); (S,T₀) = ½gμ_B δB_z;
/// (S,T₊) = −c(δB_x + iδB_y), (S,T₋) = c(δB_x − iδB_y),
/// (T₀,T₊) = c(B_x + iB_y), (T₀,T₋) = c(B_x − iB_y), with c = gμ_B/(2√2).
pub fn build_dqd(params: &DeviceParams, fields: &FieldConfig) -> DqdHamiltonian {
    let j8 = params.j_exc / 8.0;
    let hz = params.zeeman(fields.b_z);
    let c = params.transverse(1.0);
    let z = |re: f64, im: f64| Complex64::new(re, im);

    let mut m = ComplexMatrix::zeros(4).expect("dimension 4 is valid");
    m[(0, 0)] = z(-j8, 0.0);
    m[(1, 1)] = z(j8, 0.0);
    m[(2, 2)] = z(j8 + hz, 0.0);
    m[(3, 3)] = z(j8 - hz, 0.0);

    let mut set = |i: usize, j: usize, v: Complex64| {
        m[(i, j)] = v;
        m[(j, i)] = v.conj();
    };
    set(0, 1, z(params.zeeman(fields.db_z), 0.0));
    set(0, 2, z(-c * fields.db_x, -c * fields.db_y));
    set(0, 3, z(c * fields.db_x, -c * fields.db_y));
    set(1, 2, z(c * fields.b_x, c * fields.b_y));
    set(1, 3, z(c * fields.b_x, -c * fields.b_y));

    DqdHamiltonian {
        matrix: m,
        params: *params,
        fields: *fields,
    }
}

/// [`build_dqd`] with the exchange diagonal offset by the chosen convention.
pub fn build_dqd_with(
    params: &DeviceParams,
    fields: &FieldConfig,
    convention: ExchangeConvention,
) -> DqdHamiltonian {
    let mut h = build_dqd(params, fields);
    let shift = convention.shift(params);
    for i in 0..4 {
        h.matrix[(i, i)] += shift;
    }
    h
}

/// Splits the canonical Hamiltonian into computational, leakage and outer blocks.
pub fn split_blocks(h: &DqdHamiltonian) -> BlockDecomposition {
    let m = &h.matrix;
    BlockDecomposition {
        h0: m.principal(&[0, 1]).expect("indices in range"),
        h_leak: [[m[(0, 2)], m[(0, 3)]], [m[(1, 2)], m[(1, 3)]]],
        h_out: m.principal(&[2, 3]).expect("indices in range"),
    }
}

/// Block matrix `[[h0, h_leak], [h_leak†, h_out]]` for a two-level computational block.
///
/// `h_leak` is the 2×(n−2) coupling block, row-major, where n − 2 is the dimension of `h_out`.
pub fn build_generic_leak(
    h0: &ComplexMatrix,
    h_out: &ComplexMatrix,
    h_leak: &[Complex64],
) -> Result<ComplexMatrix> {
    if h0.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "computational block must be 2x2, got {}x{}",
            h0.dim(),
            h0.dim()
        )));
    }
    let k = h_out.dim();
    if h_leak.len() != 2 * k {
        return Err(Error::DimensionMismatch(format!(
            "leakage block must be 2x{k} ({} entries), got {} entries",
            2 * k,
            h_leak.len()
        )));
    }
    let n = 2 + k;
    let mut m = ComplexMatrix::zeros(n)?;
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j)] = h0[(i, j)];
        }
    }
    for i in 0..k {
        for j in 0..k {
            m[(2 + i, 2 + j)] = h_out[(i, j)];
        }
    }
    for i in 0..2 {
        for j in 0..k {
            let v = h_leak[i * k + j];
            m[(i, 2 + j)] = v;
            m[(2 + j, i)] = v.conj();
        }
    }
    m.check_hermitian()?;
    Ok(m)
}

/// Pauli matrices (σ_x, σ_y, σ_z).
pub fn pauli() -> [ComplexMatrix; 3] {
    let z = |re: f64, im: f64| Complex64::new(re, im);
    [
        ComplexMatrix::from_rows(&[[z(0.0, 0.0), z(1.0, 0.0)], [z(1.0, 0.0), z(0.0, 0.0)]]),
        ComplexMatrix::from_rows(&[[z(0.0, 0.0), z(0.0, -1.0)], [z(0.0, 1.0), z(0.0, 0.0)]]),
        ComplexMatrix::from_rows(&[[z(1.0, 0.0), z(0.0, 0.0)], [z(0.0, 0.0), z(-1.0, 0.0)]]),
    ]
    .map(|m| m.expect("valid 2x2"))
}

/// Single-spin Zeeman Hamiltonian ½gμ_B (B_x σ_x + B_y σ_y + B_z σ_z).
pub fn build_single_spin(b: [f64; 3], params: &DeviceParams) -> ComplexMatrix {
    let s = pauli();
    let mut h = ComplexMatrix::zeros(2).expect("valid");
    for (sigma, &bk) in s.iter().zip(&b) {
        h = &h + &sigma.scale_real(params.zeeman(bk));
    }
    h
}

/// Spin operators s = σ/2 of each dot in the product basis: `[dot][axis]`.
pub fn spin_operators() -> [[ComplexMatrix; 3]; 2] {
    let id = ComplexMatrix::identity(2).expect("valid");
    let half = pauli().map(|m| m.scale_real(0.5));
    let dot1 = half.clone().map(|s| s.kron(&id).expect("4x4"));
    let dot2 = half.map(|s| id.kron(&s).expect("4x4"));
    [dot1, dot2]
}

/// Unitary whose columns are S, T₀, T₊, T₋ expressed in the product basis.
pub fn singlet_triplet_transform() -> ComplexMatrix {
    let r = FRAC_1_SQRT_2;
    ComplexMatrix::from_real_rows(&[
        [0.0, 0.0, 1.0, 0.0],
        [r, r, 0.0, 0.0],
        [-r, r, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
    .expect("valid 4x4")
}

/// Converts a product-basis operator into the canonical singlet-triplet basis (W†·A·W).
pub fn to_singlet_triplet(op: &ComplexMatrix) -> Result<ComplexMatrix> {
    let w = singlet_triplet_transform();
    w.adjoint().matmul(&op.matmul(&w)?)
}

/// Zeeman Hamiltonian gμ_B (B⃗₁·s⃗₁ + B⃗₂·s⃗₂) built in the product basis and
/// returned in the canonical singlet-triplet basis.
pub fn product_basis_zeeman_oracle(
    params: &DeviceParams,
    b1: [f64; 3],
    b2: [f64; 3],
) -> ComplexMatrix {
    let spins = spin_operators();
    let gm = params.g * params.mu_b_eff;
    let mut h = ComplexMatrix::zeros(4).expect("valid");
    for (dot, b) in spins.iter().zip([b1, b2]) {
        for (s, &bk) in dot.iter().zip(&b) {
            h = &h + &s.scale_real(gm * bk);
        }
    }
    to_singlet_triplet(&h).expect("4x4")
}
