//! Weak transverse-field treatment: second-order energy shifts, effective
//! transition amplitudes, effective two-level Hamiltonians and the truncated
//! Dyson series of the interaction-picture propagator.

use num_complex::Complex64;

use crate::dynamics::{evolve, StateVector, NORM_TOL};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_dqd, split_blocks};
use crate::matrix::{eigh, expm_unitary, ComplexMatrix};
use crate::physics::{validate, BasisLabel, DeviceParams, FieldConfig};

/// Smallest level gap, eV, accepted in a perturbative denominator.
pub const MIN_GAP_EV: f64 = 1e-12;

const S: usize = 0;
const T0: usize = 1;
const LEAK: [usize; 2] = [2, 3];

/// Second-order shifted energies in canonical order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtSpectrum {
    /// Unperturbed diagonal energies (λ₁..λ₄), eV.
    pub lambda: [f64; 4],
    /// Shifted energies λ′ᵢ = λᵢ + correctionᵢ, eV.
    pub lambda_p: [f64; 4],
    /// Second-order shifts, eV.
    pub corrections: [f64; 4],
    /// Advisory weak-regime flag for the input fields.
    pub weak_regime: bool,
}

/// λ′ᵢ = λᵢ + Σₘ |⟨m|H_I|i⟩|²/(λᵢ − λₘ) over every off-diagonal coupling.
///
/// Fails with [`Error::DegenerateDenominator`] when two coupled levels are closer than [`MIN_GAP_EV`].
pub fn pt_eigenvalues(params: &DeviceParams, fields: &FieldConfig) -> Result<PtSpectrum> {
    params.check()?;
    fields.check()?;
    let h = build_dqd(params, fields).matrix;
    let lambda: [f64; 4] = std::array::from_fn(|i| h[(i, i)].re);
    let mut corrections = [0.0; 4];
    for (i, corr) in corrections.iter_mut().enumerate() {
        let others: Vec<usize> = (0..4).filter(|&m| m != i).collect();
        *corr = shift(&h, &lambda, i, &others)?;
    }
    Ok(PtSpectrum {
        lambda,
        lambda_p: std::array::from_fn(|i| lambda[i] + corrections[i]),
        corrections,
        weak_regime: validate(params, fields).weak_regime,
    })
}

fn shift(h: &ComplexMatrix, lambda: &[f64; 4], i: usize, over: &[usize]) -> Result<f64> {
    let mut total = 0.0;
    for &m in over {
        let v = h[(m, i)].norm_sqr();
        if v == 0.0 {
            continue;
        }
        total += v / denominator(lambda, i, m)?;
    }
    Ok(total)
}

fn denominator(lambda: &[f64; 4], i: usize, m: usize) -> Result<f64> {
    let gap = lambda[i] - lambda[m];
    if gap.abs() < MIN_GAP_EV {
        return Err(Error::DegenerateDenominator { a: i, b: m, gap });
    }
    Ok(gap)
}

/// Effective S↔T₀ couplings to second order in the leakage block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionAmplitudes {
    /// ⟨T₀|H_eff|S⟩, eV.
    pub a_s_to_t0: Complex64,
    /// ⟨S|H_eff|T₀⟩, eV.
    pub a_t0_to_s: Complex64,
    /// Direct coupling ½gμ_B δB_z, eV.
    pub first_order: Complex64,
    /// Paths via T₊ and T₋: ⟨T₀|H|m⟩⟨m|H|S⟩/(λ_S − λ_m), eV.
    pub second_order_s_to_t0: [Complex64; 2],
    /// Paths via T₊ and T₋: ⟨S|H|m⟩⟨m|H|T₀⟩/(λ_T₀ − λ_m), eV.
    pub second_order_t0_to_s: [Complex64; 2],
}

impl TransitionAmplitudes {
    /// |a_s_to_t0 − conj(a_t0_to_s)|: how far the pair is from a Hermitian coupling.
    pub fn asymmetry(&self) -> f64 {
        (self.a_s_to_t0 - self.a_t0_to_s.conj()).norm()
    }
}

/// Second-order effective amplitudes built from the Hamiltonian matrix elements.
pub fn transition_amplitudes(
    params: &DeviceParams,
    fields: &FieldConfig,
) -> Result<TransitionAmplitudes> {
    params.check()?;
    fields.check()?;
    let h = build_dqd(params, fields).matrix;
    let lambda: [f64; 4] = std::array::from_fn(|i| h[(i, i)].re);
    let path = |to: usize, from: usize, m: usize| -> Result<Complex64> {
        let num = h[(to, m)] * h[(m, from)];
        if num == Complex64::new(0.0, 0.0) {
            return Ok(num);
        }
        Ok(num / denominator(&lambda, from, m)?)
    };
    let first_order = h[(T0, S)];
    let s_t0 = [path(T0, S, LEAK[0])?, path(T0, S, LEAK[1])?];
    let t0_s = [path(S, T0, LEAK[0])?, path(S, T0, LEAK[1])?];
    Ok(TransitionAmplitudes {
        a_s_to_t0: first_order + s_t0[0] + s_t0[1],
        a_t0_to_s: h[(S, T0)] + t0_s[0] + t0_s[1],
        first_order,
        second_order_s_to_t0: s_t0,
        second_order_t0_to_s: t0_s,
    })
}

/// The alternative closed form with prefactor (½gμ_B)² and both fractions added:
/// returns (A_S→T₀, A_T₀→S). Kept for comparison with [`transition_amplitudes`].
pub fn printed_transition_amplitudes(
    params: &DeviceParams,
    fields: &FieldConfig,
) -> Result<(Complex64, Complex64)> {
    params.check()?;
    fields.check()?;
    let h = build_dqd(params, fields).matrix;
    let lambda: [f64; 4] = std::array::from_fn(|i| h[(i, i)].re);
    let k = params.zeeman(1.0).powi(2);
    let f = fields;
    let bm = Complex64::new(f.b_x, -f.b_y);
    let bp = Complex64::new(f.b_x, f.b_y);
    let dm = Complex64::new(f.db_x, -f.db_y);
    let dp = Complex64::new(f.db_x, f.db_y);
    let first = Complex64::new(params.zeeman(f.db_z), 0.0);
    let s_t0 = first
        + k * bm * dp / denominator(&lambda, S, 3)?
        + k * bp * dm / denominator(&lambda, S, 2)?;
    let t0_s = first
        + k * bp * dm / denominator(&lambda, T0, 3)?
        + k * bm * dp / denominator(&lambda, T0, 2)?;
    Ok((s_t0, t0_s))
}

/// Two-level generator for the (S, T₀) dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveHamiltonian {
    /// Hermitized matrix (raw + raw†)/2, eV.
    pub matrix: ComplexMatrix,
    /// [[λ′₁, A_T₀→S], [A_S→T₀, λ′₂]] before Hermitization, eV.
    pub raw: ComplexMatrix,
    /// Max-abs asymmetry of `raw`, eV.
    pub asymmetry: f64,
}

/// Effective two-level Hamiltonian with leakage-shifted diagonal and second-order couplings.
///
/// The diagonal carries only the shifts from T₊ and T₋; δB_z enters through the
/// off-diagonal first-order term.
pub fn effective_hamiltonian(
    params: &DeviceParams,
    fields: &FieldConfig,
) -> Result<EffectiveHamiltonian> {
    let amps = transition_amplitudes(params, fields)?;
    let h = build_dqd(params, fields).matrix;
    let lambda: [f64; 4] = std::array::from_fn(|i| h[(i, i)].re);
    let ls = lambda[S] + shift(&h, &lambda, S, &LEAK)?;
    let lt = lambda[T0] + shift(&h, &lambda, T0, &LEAK)?;
    let raw = ComplexMatrix::from_rows(&[
        [Complex64::new(ls, 0.0), amps.a_t0_to_s],
        [amps.a_s_to_t0, Complex64::new(lt, 0.0)],
    ])?;
    Ok(EffectiveHamiltonian {
        matrix: raw.hermitian_part(),
        asymmetry: raw.max_asymmetry(),
        raw,
    })
}

/// Second-order Schrieffer–Wolff Hamiltonian of the (S, T₀) block.
///
/// The block including δB_z is diagonalized exactly; leakage to T₊ and T₋ is
/// then eliminated to second order in that dressed basis. Returned in (S, T₀) order.
pub fn block_effective_hamiltonian(
    params: &DeviceParams,
    fields: &FieldConfig,
) -> Result<ComplexMatrix> {
    params.check()?;
    fields.check()?;
    let blocks = split_blocks(&build_dqd(params, fields));
    let spec = eigh(&blocks.h0)?;
    let e = &spec.eigenvalues;
    let u = &spec.eigenvectors;
    let out: [f64; 2] = [blocks.h_out[(0, 0)].re, blocks.h_out[(1, 1)].re];
    // Leakage couplings in the dressed basis: ṽ[a][m] = Σ_k conj(u[k][a]) v[k][m].
    let v: [[Complex64; 2]; 2] = std::array::from_fn(|a| {
        std::array::from_fn(|m| (0..2).map(|k| u[(k, a)].conj() * blocks.h_leak[k][m]).sum())
    });
    let mut dressed = ComplexMatrix::from_real_diag(e)?;
    for a in 0..2 {
        for b in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, &lm) in out.iter().enumerate() {
                let da = e[a] - lm;
                let db = e[b] - lm;
                if da.abs() < MIN_GAP_EV || db.abs() < MIN_GAP_EV {
                    return Err(Error::DegenerateDenominator {
                        a,
                        b: m + 2,
                        gap: da.abs().min(db.abs()),
                    });
                }
                acc += 0.5 * v[a][m] * v[b][m].conj() * (1.0 / da + 1.0 / db);
            }
            dressed[(a, b)] += acc;
        }
    }
    u.matmul(&dressed.matmul(&u.adjoint())?)
}

/// Diagonal part H₀ and off-diagonal part H_I of the canonical Hamiltonian.
pub fn interaction_split(
    params: &DeviceParams,
    fields: &FieldConfig,
) -> (ComplexMatrix, ComplexMatrix) {
    let h = build_dqd(params, fields).matrix;
    let h0 = ComplexMatrix::from_diag(&h.diagonal()).expect("finite diagonal");
    let hi = &h - &h0;
    (h0, hi)
}

/// Truncated Dyson series for constant H_I: 1 − iH_I t/ħ + ½(−iH_I t/ħ)², up to `order` (0, 1 or 2).
pub fn dyson_propagator(
    params: &DeviceParams,
    fields: &FieldConfig,
    t: f64,
    order: u8,
) -> Result<ComplexMatrix> {
    params.check()?;
    fields.check()?;
    if order > 2 {
        return Err(Error::InvalidParameter(format!(
            "Dyson order must be 0, 1 or 2, got {order}"
        )));
    }
    let (_, hi) = interaction_split(params, fields);
    let x = hi.scale(Complex64::new(0.0, -t / params.hbar));
    let mut u = ComplexMatrix::identity(4)?;
    if order >= 1 {
        u = &u + &x;
    }
    if order >= 2 {
        u = &u + &x.matmul(&x)?.scale_real(0.5);
    }
    Ok(u)
}

/// Exact interaction-picture propagator exp(iH₀t/ħ)·exp(−iHt/ħ).
pub fn exact_interaction_propagator(
    params: &DeviceParams,
    fields: &FieldConfig,
    t: f64,
) -> Result<ComplexMatrix> {
    params.check()?;
    fields.check()?;
    let h = build_dqd(params, fields).matrix;
    let phases: Vec<Complex64> = h
        .diagonal()
        .iter()
        .map(|d| Complex64::from_polar(1.0, d.re * t / params.hbar))
        .collect();
    ComplexMatrix::from_diag(&phases)?.matmul(&expm_unitary(&h, t, params.hbar)?)
}

/// First- and second-order Dyson path integrals starting from |S⟩ under constant H_I.
///
/// First-order entries are ⟨m|H_I|S⟩·t (eV·s); second-order entries are
/// ⟨T₀|H_I|m⟩⟨m|H_I|S⟩·t²/2 (eV²·s²). Neither includes the (−i/ħ)ⁿ factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakagePaths {
    /// S → S.
    pub s_to_s: Complex64,
    /// S → T₀.
    pub s_to_t0: Complex64,
    /// S → T₊.
    pub s_to_tplus: Complex64,
    /// S → T₋.
    pub s_to_tminus: Complex64,
    /// S → S → T₀.
    pub s_to_s_to_t0: Complex64,
    /// S → T₀ → T₀.
    pub s_to_t0_to_t0: Complex64,
    /// S → T₊ → T₀.
    pub s_to_tplus_to_t0: Complex64,
    /// S → T₋ → T₀.
    pub s_to_tminus_to_t0: Complex64,
}

impl LeakagePaths {
    /// Sum of all second-order paths ending in T₀, eV²·s².
    pub fn second_order_sum(&self) -> Complex64 {
        self.s_to_s_to_t0 + self.s_to_t0_to_t0 + self.s_to_tplus_to_t0 + self.s_to_tminus_to_t0
    }

    /// (−i/ħ)²·[`Self::second_order_sum`]: the second-order part of ⟨T₀|U_I|S⟩.
    pub fn second_order_amplitude(&self, hbar: f64) -> Complex64 {
        -self.second_order_sum() / (hbar * hbar)
    }
}

/// Path amplitudes out of |S⟩ to first and second order.
pub fn leakage_path_amplitudes(
    params: &DeviceParams,
    fields: &FieldConfig,
    t: f64,
) -> Result<LeakagePaths> {
    params.check()?;
    fields.check()?;
    let (_, hi) = interaction_split(params, fields);
    let s = BasisLabel::S.index();
    let t0 = BasisLabel::T0.index();
    let first = |m: usize| hi[(m, s)] * t;
    let second = |m: usize| hi[(t0, m)] * hi[(m, s)] * (t * t / 2.0);
    Ok(LeakagePaths {
        s_to_s: first(s),
        s_to_t0: first(t0),
        s_to_tplus: first(BasisLabel::Tplus.index()),
        s_to_tminus: first(BasisLabel::Tminus.index()),
        s_to_s_to_t0: second(s),
        s_to_t0_to_t0: second(t0),
        s_to_tplus_to_t0: second(BasisLabel::Tplus.index()),
        s_to_tminus_to_t0: second(BasisLabel::Tminus.index()),
    })
}

/// Return-probability curves of the leak-free, full and effective evolutions.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveComparison {
    /// Sample times, s.
    pub times: Vec<f64>,
    /// |⟨ψ₀|ψ(t)⟩|² without transverse fields.
    pub leak_free: Vec<f64>,
    /// |⟨ψ₀|ψ(t)⟩|² under the full four-level Hamiltonian.
    pub full: Vec<f64>,
    /// |⟨ψ₀|ψ(t)⟩|² under [`effective_hamiltonian`].
    pub effective: Vec<f64>,
    /// max |effective − full| over the grid.
    pub max_abs_dev: f64,
}

/// Evolves a computational state three ways and compares return probabilities.
///
/// Fails with [`Error::InvalidState`] if `psi0` has weight outside (S, T₀).
pub fn compare_effective(
    params: &DeviceParams,
    fields: &FieldConfig,
    psi0: &StateVector,
    grid: &[f64],
) -> Result<EffectiveComparison> {
    let psi4 = psi0.to_four_level();
    let leak: f64 = psi4.amplitudes()[2..].iter().map(|z| z.norm_sqr()).sum();
    if leak > NORM_TOL {
        return Err(Error::InvalidState(format!(
            "effective comparison needs a state in the (S, T0) subspace, T+/T- weight {leak:e}"
        )));
    }
    let psi2 = StateVector::normalized(psi0.computational().to_vec())?;
    let free_h = build_dqd(params, &fields.without_transverse()).matrix;
    let full_h = build_dqd(params, fields).matrix;
    let eff_h = effective_hamiltonian(params, fields)?.matrix;
    let leak_free = evolve(&free_h, &psi4, grid, params)?.projection_onto(&psi4);
    let full = evolve(&full_h, &psi4, grid, params)?.projection_onto(&psi4);
    let effective = evolve(&eff_h, &psi2, grid, params)?.projection_onto(&psi2);
    let max_abs_dev = full
        .iter()
        .zip(&effective)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(EffectiveComparison {
        times: grid.to_vec(),
        leak_free,
        full,
        effective,
        max_abs_dev,
    })
}
