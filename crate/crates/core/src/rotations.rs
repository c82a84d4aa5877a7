//! Qubit rotations: ideal ST₀ rotations, gate-time calibration, four-level
//! rotations with leakage, rotation-speed diagnostics and encoding operators.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::dynamics::{evolve, StateVector};
use crate::error::{Error, Result};
use crate::hamiltonian::ExchangeConvention;
use crate::hamiltonian::{build_dqd, spin_operators, split_blocks, to_singlet_triplet};
use crate::matrix::{eigh, expm_unitary, matnorm_max, ComplexMatrix};
use crate::physics::{DeviceParams, FieldConfig};
use crate::symmetry::{assemble_full_with, permute_basis, APPENDIX_ORDER, CANONICAL_ORDER};
use crate::weakfield::block_effective_hamiltonian;

/// Rotation angles, axis and gate time of a square ST₀ pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationSpec {
    /// θ_x = λ_x·τ/ħ, radians.
    pub theta_x: f64,
    /// θ_z = λ_z·τ/ħ, radians.
    pub theta_z: f64,
    /// (λ_x/2, λ_z/2) normalized.
    pub axis: [f64; 2],
    /// Pulse duration τ, seconds.
    pub gate_time: f64,
    /// x coupling gμ_B δB_z, eV.
    pub lambda_x: f64,
    /// z coupling J/4, eV.
    pub lambda_z: f64,
}

impl RotationSpec {
    /// Builds from the two couplings and the gate time; fails if both couplings vanish.
    pub fn new(
        lambda_x: f64,
        lambda_z: f64,
        gate_time: f64,
        params: &DeviceParams,
    ) -> Result<Self> {
        params.check()?;
        let n = (lambda_x / 2.0).hypot(lambda_z / 2.0);
        if n == 0.0 {
            return Err(Error::ZeroCoupling);
        }
        Ok(Self {
            theta_x: lambda_x * gate_time / params.hbar,
            theta_z: lambda_z * gate_time / params.hbar,
            axis: [lambda_x / 2.0 / n, lambda_z / 2.0 / n],
            gate_time,
            lambda_x,
            lambda_z,
        })
    }

    /// Couplings gμ_B δB_z and J/4 taken from the device and fields.
    pub fn from_fields(
        params: &DeviceParams,
        fields: &FieldConfig,
        gate_time: f64,
    ) -> Result<Self> {
        Self::new(
            params.g * params.mu_b_eff * fields.db_z,
            params.st0_splitting(),
            gate_time,
            params,
        )
    }

    /// The ideal two-level rotation for these angles.
    pub fn operator(&self) -> ComplexMatrix {
        ideal_rotation(self.theta_x, self.theta_z)
    }
}

/// exp(−i(θ_x σ_x + θ_z σ_z)/2).
pub fn ideal_rotation(theta_x: f64, theta_z: f64) -> ComplexMatrix {
    let theta = theta_x.hypot(theta_z);
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let (nx, nz) = if theta == 0.0 {
        (0.0, 0.0)
    } else {
        (theta_x / theta, theta_z / theta)
    };
    let z = Complex64::new;
    ComplexMatrix::from_rows(&[
        [z(c, -s * nz), z(0.0, -s * nx)],
        [z(0.0, -s * nx), z(c, s * nz)],
    ])
    .expect("valid 2x2")
}

/// τ = θħ/λ.
pub fn gate_time_for(theta: f64, lambda: f64, params: &DeviceParams) -> Result<f64> {
    params.check()?;
    if lambda == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    Ok(theta * params.hbar / lambda)
}

/// Four-level rotation exp(−iHt/ħ) with H rebuilt from the generator expansion, in canonical order.
pub fn rotate_with_leakage(
    params: &DeviceParams,
    fields: &FieldConfig,
    t: f64,
) -> Result<ComplexMatrix> {
    params.check()?;
    fields.check()?;
    let h = assemble_full_with(params, fields, ExchangeConvention::Metric);
    let u = expm_unitary(&h, t, params.hbar)?;
    permute_basis(&u, &APPENDIX_ORDER, &CANONICAL_ORDER)
}

/// Max-abs distance between `a` and `b` after removing a global phase.
///
/// The phase is fixed by the (0,0) entries, or by the largest entry of `b` when
/// its (0,0) entry is negligible.
pub fn global_phase_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch("global phase comparison".into()));
    }
    let scale = matnorm_max(b);
    let k = if b[(0, 0)].norm() > 1e-8 * scale {
        0
    } else {
        let s = b.as_slice();
        (0..s.len())
            .max_by(|&i, &j| s[i].norm().total_cmp(&s[j].norm()))
            .unwrap_or(0)
    };
    let (ai, bi) = (a.as_slice()[k], b.as_slice()[k]);
    if ai.norm() == 0.0 || bi.norm() == 0.0 {
        return Ok(matnorm_max(&(a - b)));
    }
    let phase = (bi / bi.norm()) * (ai.conj() / ai.norm());
    Ok(matnorm_max(&(&a.scale(phase) - b)))
}

/// Comparison of leak-free and leaky population curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagReport {
    /// First population minimum of the leaky curve minus that of the leak-free curve, s.
    /// Positive means the leaky rotation is slower.
    pub time_shift: f64,
    /// 2π·time_shift / leak_free_period, radians.
    pub phase_shift: f64,
    /// Leak-free oscillation period 2πħ/Δ₀, s.
    pub leak_free_period: f64,
    /// Fitted leaky period / fitted leak-free period − 1 over all minima; needs ≥ 2 minima per curve.
    pub period_stretch: Option<f64>,
    /// Number of minima found on the leak-free and leaky curves.
    pub minima: (usize, usize),
}

/// Fields with B_x, B_y, δB_x and δB_y removed.
fn leak_free(fields: &FieldConfig) -> FieldConfig {
    fields.without_transverse()
}

fn gap(h: &ComplexMatrix) -> Result<f64> {
    let e = eigh(h)?.eigenvalues;
    Ok(e[e.len() - 1] - e[0])
}

/// Over/under-rotation metric from the minima of |⟨target|ψ(t)⟩|² with ψ(0) = target.
///
/// Without transverse fields both curves coincide and the report is exactly zero.
/// The leak-free curve uses the same fields without B_x, B_y, δB_x, δB_y.
/// Minima are taken one per excursion below the midpoint of the curve's range,
/// refined by a parabola through the three samples around the lowest point.
pub fn phase_lag(
    params: &DeviceParams,
    fields: &FieldConfig,
    target: &StateVector,
    grid: &[f64],
) -> Result<LagReport> {
    params.check()?;
    fields.check()?;
    let psi = target.to_four_level();
    let free_fields = leak_free(fields);
    let free_h = build_dqd(params, &free_fields).matrix;
    let leaky_h = build_dqd(params, fields).matrix;
    let free = evolve(&free_h, &psi, grid, params)?.projection_onto(&psi);
    let leaky = evolve(&leaky_h, &psi, grid, params)?.projection_onto(&psi);
    let m_free = population_minima(grid, &free);
    let m_leaky = population_minima(grid, &leaky);
    let delta0 = gap(&split_blocks(&build_dqd(params, &free_fields)).h0)?;
    let period = 2.0 * PI * params.hbar / delta0;
    if fields.has_no_transverse() {
        return Ok(LagReport {
            time_shift: 0.0,
            phase_shift: 0.0,
            leak_free_period: period,
            period_stretch: Some(0.0),
            minima: (m_free.len(), m_leaky.len()),
        });
    }
    if m_free.is_empty() || m_leaky.is_empty() {
        return Err(Error::NoExtremumFound(format!(
            "{} leak-free and {} leaky minima on a horizon of {:e} s",
            m_free.len(),
            m_leaky.len(),
            grid.last().copied().unwrap_or(0.0) - grid[0]
        )));
    }
    let time_shift = m_leaky[0] - m_free[0];
    let period_stretch = match (fitted_period(&m_free), fitted_period(&m_leaky)) {
        (Some(a), Some(b)) => Some(b / a - 1.0),
        _ => None,
    };
    Ok(LagReport {
        time_shift,
        phase_shift: 2.0 * PI * time_shift / period,
        leak_free_period: period,
        period_stretch,
        minima: (m_free.len(), m_leaky.len()),
    })
}

/// Relative period change predicted by second-order leakage elimination:
/// Δ₀/Δ_eff − 1, with Δ₀ the bare (S, T₀) gap and Δ_eff that of [`block_effective_hamiltonian`].
/// Exactly zero without transverse fields.
pub fn predicted_period_stretch(params: &DeviceParams, fields: &FieldConfig) -> Result<f64> {
    if fields.has_no_transverse() {
        params.check()?;
        fields.check()?;
        return Ok(0.0);
    }
    let d0 = gap(&split_blocks(&build_dqd(params, &leak_free(fields))).h0)?;
    let d1 = gap(&block_effective_hamiltonian(params, fields)?)?;
    Ok(d0 / d1 - 1.0)
}

/// Times of the population minima, one per excursion below the midpoint of the range.
pub fn population_minima(times: &[f64], pop: &[f64]) -> Vec<f64> {
    let n = pop.len().min(times.len());
    if n < 3 {
        return Vec::new();
    }
    let lo = pop[..n].iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = pop[..n].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= 1e-9 || hi.is_nan() || lo.is_nan() {
        return Vec::new();
    }
    let mid = lo + 0.5 * (hi - lo);
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        if pop[i] >= mid {
            i += 1;
            continue;
        }
        let start = i;
        while i < n && pop[i] < mid {
            i += 1;
        }
        let end = i;
        let k = (start..end)
            .min_by(|&a, &b| pop[a].total_cmp(&pop[b]))
            .expect("non-empty excursion");
        if k == 0 || k == n - 1 {
            continue;
        }
        out.push(parabola_vertex(
            (times[k - 1], pop[k - 1]),
            (times[k], pop[k]),
            (times[k + 1], pop[k + 1]),
        ));
    }
    out
}

fn parabola_vertex(p0: (f64, f64), p1: (f64, f64), p2: (f64, f64)) -> f64 {
    let (x0, y0) = p0;
    let (x1, y1) = p1;
    let (x2, y2) = p2;
    let num = (x1 - x0).powi(2) * (y1 - y2) - (x1 - x2).powi(2) * (y1 - y0);
    let den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
    if den == 0.0 {
        return x1;
    }
    let x = x1 - 0.5 * num / den;
    x.clamp(x0, x2)
}

/// Least-squares slope of minimum time against minimum index.
fn fitted_period(minima: &[f64]) -> Option<f64> {
    let k = minima.len();
    if k < 2 {
        return None;
    }
    let kbar = (k - 1) as f64 / 2.0;
    let tbar = minima.iter().sum::<f64>() / k as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for (i, &t) in minima.iter().enumerate() {
        let d = i as f64 - kbar;
        num += d * (t - tbar);
        den += d * d;
    }
    Some(num / den)
}

/// Two-electron qubit encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    /// |0⟩ = S, |1⟩ = T₀.
    St0,
    /// |0⟩ = (S + T₀)/√2, |1⟩ = (S − T₀)/√2.
    FlipFlop,
    /// |0⟩ = S, |1⟩ = T₊.
    StPlus,
}

/// Logical Pauli operators of an encoding as 4×4 matrices in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodingOperators {
    /// σ̂ˣ.
    pub x: ComplexMatrix,
    /// σ̂ʸ.
    pub y: ComplexMatrix,
    /// σ̂ᶻ.
    pub z: ComplexMatrix,
    /// Computational states |0⟩, |1⟩ in canonical coordinates.
    pub basis: [StateVector; 2],
}

impl EncodingOperators {
    /// 2×2 matrix ⟨a|op|b⟩ on the computational subspace.
    pub fn project(&self, op: &ComplexMatrix) -> Result<ComplexMatrix> {
        let mut out = ComplexMatrix::zeros(2)?;
        for (a, va) in self.basis.iter().enumerate() {
            let w = op.mul_vec(va.amplitudes())?;
            for (b, vb) in self.basis.iter().enumerate() {
                out[(b, a)] = crate::dynamics::inner(vb.amplitudes(), &w);
            }
        }
        Ok(out)
    }

    /// Projections of (σ̂ˣ, σ̂ʸ, σ̂ᶻ).
    pub fn projected(&self) -> Result<[ComplexMatrix; 3]> {
        Ok([
            self.project(&self.x)?,
            self.project(&self.y)?,
            self.project(&self.z)?,
        ])
    }
}

/// Logical operators built from two-spin operators s = σ/2.
///
/// ST₀: σ̂ˣ = S₁ᶻ − S₂ᶻ, σ̂ʸ = 2ẑ·(S⃗₂×S⃗₁), σ̂ᶻ = −(2S⃗₁·S⃗₂ − S₁ᶻS₂ᶻ + ¼).
/// Flip-flop: σ̂ˣ = 2S⃗₁·S⃗₂ − S₁ᶻS₂ᶻ + ¼, σ̂ʸ = 2ẑ·(S⃗₂×S⃗₁), σ̂ᶻ = S₁ᶻ − S₂ᶻ.
/// ST₊: σ̂ˣ = (S₂ˣ − S₁ˣ)/√2 + √2ŷ·(S⃗₁×S⃗₂), σ̂ʸ = (S₁ʸ − S₂ʸ)/√2 + √2x̂·(S⃗₁×S⃗₂),
/// σ̂ᶻ = −(S₁ᶻ + S₂ᶻ)/2 − S⃗₁·S⃗₂ − S₁ᶻS₂ᶻ.
/// Each projected triple obeys the Pauli algebra. ST₀ and ST₊ project to the
/// standard matrices; flip-flop gives (−σˣ, −σʸ, σᶻ) because |1⟩ = −|↓↑⟩.
pub fn encoding_operators(encoding: Encoding) -> EncodingOperators {
    let [s1, s2] = spin_operators();
    let (x, y, z) = (0, 1, 2);
    let p = |a: &ComplexMatrix, b: &ComplexMatrix| a * b;
    let id = ComplexMatrix::identity(4).expect("valid");
    let dot = &(&p(&s1[x], &s2[x]) + &p(&s1[y], &s2[y])) + &p(&s1[z], &s2[z]);
    let z_s2_cross_s1 = &p(&s2[x], &s1[y]) - &p(&s2[y], &s1[x]);
    let y_s1_cross_s2 = &p(&s1[z], &s2[x]) - &p(&s1[x], &s2[z]);
    let x_s1_cross_s2 = &p(&s1[y], &s2[z]) - &p(&s1[z], &s2[y]);
    let zz = p(&s1[z], &s2[z]);
    let exchange_like = &(&dot.scale_real(2.0) - &zz) + &id.scale_real(0.25);
    let r = 1.0 / SQRT_2;
    let basis_st0 = [
        StateVector::basis(crate::physics::BasisLabel::S),
        StateVector::basis(crate::physics::BasisLabel::T0),
    ];
    let (ox, oy, oz, basis) = match encoding {
        Encoding::St0 => (
            &s1[z] - &s2[z],
            z_s2_cross_s1.scale_real(2.0),
            exchange_like.scale_real(-1.0),
            basis_st0,
        ),
        Encoding::FlipFlop => (
            exchange_like,
            z_s2_cross_s1.scale_real(2.0),
            &s1[z] - &s2[z],
            [StateVector::plus(), StateVector::minus()],
        ),
        Encoding::StPlus => (
            &(&s2[x] - &s1[x]).scale_real(r) + &y_s1_cross_s2.scale_real(SQRT_2),
            &(&s1[y] - &s2[y]).scale_real(r) + &x_s1_cross_s2.scale_real(SQRT_2),
            &(&(&s1[z] + &s2[z]).scale_real(-0.5) - &dot) - &zz,
            [
                StateVector::basis(crate::physics::BasisLabel::S),
                StateVector::basis(crate::physics::BasisLabel::Tplus),
            ],
        ),
    };
    let conv = |m: ComplexMatrix| to_singlet_triplet(&m).expect("4x4");
    EncodingOperators {
        x: conv(ox),
        y: conv(oy),
        z: conv(oz),
        basis,
    }
}
