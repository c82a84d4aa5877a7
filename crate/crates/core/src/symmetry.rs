//! Generator algebra of the two-electron problem.
//!
//! The triplet block is spanned by the Gell-Mann matrices Λ₁..Λ₈ in the order
//! (T₊, T₀, T₋). The singlet couples to the triplets through the
//! symmetry-breaking generators Λ′₁..Λ′₆, and the exchange energy is carried
//! by the metric η = diag(−1, 1, 1, 1). These 4×4 objects use the ordering
//! (S, T₊, T₀, T₋); [`permute_basis`] converts to the canonical (S, T₀, T₊, T₋).

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::ExchangeConvention;
use crate::matrix::ComplexMatrix;
use crate::physics::{BasisLabel, DeviceParams, FieldConfig};

/// Canonical ordering (S, T₀, T₊, T₋).
pub const CANONICAL_ORDER: [BasisLabel; 4] = BasisLabel::ALL;

/// Generator ordering (S, T₊, T₀, T₋).
pub const APPENDIX_ORDER: [BasisLabel; 4] = [
    BasisLabel::S,
    BasisLabel::Tplus,
    BasisLabel::T0,
    BasisLabel::Tminus,
];

/// Names of the 15 generators in coefficient order.
pub const GENERATOR_NAMES: [&str; 15] = [
    "eta", "L1", "L2", "L3", "L4", "L5", "L6", "L7", "L8", "Lp1", "Lp2", "Lp3", "Lp4", "Lp5", "Lp6",
];

/// SU(3) generators, symmetry-breaking generators and the metric.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    /// Λ₁..Λ₈, 3×3.
    pub gell_mann: [ComplexMatrix; 8],
    /// Λ′₁..Λ′₆, 4×4 in (S, T₊, T₀, T₋) order.
    pub symmetry_breaking: [ComplexMatrix; 6],
    /// η = diag(−1, 1, 1, 1).
    pub eta: ComplexMatrix,
}

impl GeneratorSet {
    /// All 15 generators as 4×4 matrices in (S, T₊, T₀, T₋) order, in coefficient order.
    pub fn embedded(&self) -> Vec<ComplexMatrix> {
        let mut out = Vec::with_capacity(15);
        out.push(self.eta.clone());
        out.extend(self.gell_mann.iter().map(embed_triplet));
        out.extend(self.symmetry_breaking.iter().cloned());
        out
    }
}

/// Unit-norm rotation axis in generator space.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationAxis {
    /// Coefficients in [`GENERATOR_NAMES`] order divided by `normalization`.
    pub components: [f64; 15],
    /// √(Σ coefficient²), eV.
    pub normalization: f64,
}

fn z(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The eight Gell-Mann matrices.
pub fn gell_mann() -> [ComplexMatrix; 8] {
    let o = z(0.0, 0.0);
    let l = z(1.0, 0.0);
    let i = z(0.0, 1.0);
    let r3 = 1.0 / 3f64.sqrt();
    let rows: [[[Complex64; 3]; 3]; 8] = [
        [[o, l, o], [l, o, o], [o, o, o]],
        [[o, -i, o], [i, o, o], [o, o, o]],
        [[l, o, o], [o, -l, o], [o, o, o]],
        [[o, o, l], [o, o, o], [l, o, o]],
        [[o, o, -i], [o, o, o], [i, o, o]],
        [[o, o, o], [o, o, l], [o, l, o]],
        [[o, o, o], [o, o, -i], [o, i, o]],
        [
            [z(r3, 0.0), o, o],
            [o, z(r3, 0.0), o],
            [o, o, z(-2.0 * r3, 0.0)],
        ],
    ];
    rows.map(|m| ComplexMatrix::from_rows(&m).expect("valid 3x3"))
}

/// Λ′₁..Λ′₆: pairs coupling S with T₊, T₀ and T₋ in (S, T₊, T₀, T₋) order.
pub fn symmetry_breaking_generators() -> [ComplexMatrix; 6] {
    let pair = |k: usize, imaginary: bool| {
        let mut m = ComplexMatrix::zeros(4).expect("valid");
        if imaginary {
            m[(0, k)] = z(0.0, -1.0);
            m[(k, 0)] = z(0.0, 1.0);
        } else {
            m[(0, k)] = z(1.0, 0.0);
            m[(k, 0)] = z(1.0, 0.0);
        }
        m
    };
    [
        pair(1, false),
        pair(1, true),
        pair(2, false),
        pair(2, true),
        pair(3, false),
        pair(3, true),
    ]
}

/// The metric η = diag(−1, 1, 1, 1).
pub fn eta() -> ComplexMatrix {
    ComplexMatrix::from_real_diag(&[-1.0, 1.0, 1.0, 1.0]).expect("valid")
}

/// The full generator set.
pub fn generator_set() -> GeneratorSet {
    GeneratorSet {
        gell_mann: gell_mann(),
        symmetry_breaking: symmetry_breaking_generators(),
        eta: eta(),
    }
}

fn embed_triplet(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(4).expect("valid");
    for i in 0..3 {
        for j in 0..3 {
            out[(i + 1, j + 1)] = m[(i, j)];
        }
    }
    out
}

/// Coefficients of the Hamiltonian on the 15 generators, eV, in [`GENERATOR_NAMES`] order.
pub fn generator_coefficients(params: &DeviceParams, fields: &FieldConfig) -> [f64; 15] {
    let h = params.zeeman(1.0);
    let r = FRAC_1_SQRT_2;
    [
        params.j_exc / 8.0,
        h * r * fields.b_x,
        h * r * fields.b_y,
        h * fields.b_z / 2.0,
        0.0,
        0.0,
        h * r * fields.b_x,
        h * r * fields.b_y,
        h * 3f64.sqrt() * fields.b_z / 2.0,
        -h * r * fields.db_x,
        h * r * fields.db_y,
        h * fields.db_z,
        0.0,
        h * r * fields.db_x,
        h * r * fields.db_y,
    ]
}

/// Triplet block ½gμ_B(½B_zΛ₃ + (√3/2)B_zΛ₈ + (B_xΛ₁ + B_xΛ₆ + B_yΛ₂ + B_yΛ₇)/√2) in (T₊, T₀, T₋) order.
pub fn assemble_triplet_block(params: &DeviceParams, fields: &FieldConfig) -> ComplexMatrix {
    let coef = generator_coefficients(params, fields);
    let mut out = ComplexMatrix::zeros(3).expect("valid");
    for (g, &c) in gell_mann().iter().zip(&coef[1..9]) {
        out = &out + &g.scale_real(c);
    }
    out
}

/// Generator-sum Hamiltonian in (S, T₊, T₀, T₋) order with the (0, J/4, J/4, J/4) exchange diagonal.
///
/// Permuted to canonical order this equals [`crate::hamiltonian::build_dqd`] plus (J/8)·I.
pub fn assemble_full(params: &DeviceParams, fields: &FieldConfig) -> ComplexMatrix {
    assemble_full_with(params, fields, ExchangeConvention::SingletZero)
}

/// Generator-sum Hamiltonian in (S, T₊, T₀, T₋) order with a chosen exchange offset.
///
/// [`ExchangeConvention::Metric`] gives (J/8)η + blockdiag(0, triplet block) + H_BS exactly.
pub fn assemble_full_with(
    params: &DeviceParams,
    fields: &FieldConfig,
    convention: ExchangeConvention,
) -> ComplexMatrix {
    let coef = generator_coefficients(params, fields);
    let mut out = ComplexMatrix::zeros(4).expect("valid");
    for (g, &c) in generator_set().embedded().iter().zip(&coef) {
        if c != 0.0 {
            out = &out + &g.scale_real(c);
        }
    }
    let shift = convention.shift(params);
    for i in 0..4 {
        out[(i, i)] += shift;
    }
    out
}

/// Re-expresses `h` given in ordering `from` in ordering `to`.
pub fn permute_basis(
    h: &ComplexMatrix,
    from: &[BasisLabel],
    to: &[BasisLabel],
) -> Result<ComplexMatrix> {
    check_ordering(from)?;
    check_ordering(to)?;
    if h.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "permutation needs a 4x4 matrix, got {}x{}",
            h.dim(),
            h.dim()
        )));
    }
    let pos: Vec<usize> = to
        .iter()
        .map(|l| {
            from.iter()
                .position(|m| m == l)
                .expect("checked permutation")
        })
        .collect();
    let mut out = ComplexMatrix::zeros(4)?;
    for i in 0..4 {
        for j in 0..4 {
            out[(i, j)] = h[(pos[i], pos[j])];
        }
    }
    Ok(out)
}

fn check_ordering(order: &[BasisLabel]) -> Result<()> {
    if order.len() != 4 {
        return Err(Error::InvalidOrdering(format!(
            "expected 4 labels, got {}",
            order.len()
        )));
    }
    for l in BasisLabel::ALL {
        if !order.contains(&l) {
            return Err(Error::InvalidOrdering(format!("label {l:?} missing")));
        }
    }
    Ok(())
}

/// Unit rotation axis in generator space and its normalization.
pub fn rotation_axis_4d(params: &DeviceParams, fields: &FieldConfig) -> Result<RotationAxis> {
    let coef = generator_coefficients(params, fields);
    if coef.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("generator coefficient".into()));
    }
    let normalization = coef.iter().map(|c| c * c).sum::<f64>().sqrt();
    if normalization == 0.0 {
        return Err(Error::ZeroHamiltonian);
    }
    Ok(RotationAxis {
        components: coef.map(|c| c / normalization),
        normalization,
    })
}

/// The radicand of the axis normalization written term by term.
pub fn axis_radicand(params: &DeviceParams, fields: &FieldConfig) -> f64 {
    let h = params.zeeman(1.0);
    let f = fields;
    (params.j_exc / 8.0).powi(2)
        + h * h
            * ((f.b_z / 2.0).powi(2)
                + (3f64.sqrt() * f.b_z / 2.0).powi(2)
                + 2.0 * (f.b_x / SQRT_2).powi(2)
                + 2.0 * (f.b_y / SQRT_2).powi(2)
                + f.db_z.powi(2)
                + 2.0 * (f.db_x / SQRT_2).powi(2)
                + 2.0 * (f.db_y / SQRT_2).powi(2))
}
