//! Exact time evolution in the singlet-triplet basis.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{eigh, ComplexMatrix, SpectralDecomposition};
use crate::physics::{BasisLabel, DeviceParams};

/// Allowed deviation of Σ|α|² from 1.
pub const NORM_TOL: f64 = 1e-12;

/// Normalized state in canonical order; dimension 2 (S, T₀) or 4 (S, T₀, T₊, T₋).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized to within [`NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_state_dim(amplitudes.len())?;
        let norm = norm_sqr(&amplitudes);
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm} is not 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Divides by the norm; fails for a zero or non-finite vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_state_dim(amplitudes.len())?;
        let norm = norm_sqr(&amplitudes).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidState(format!(
                "cannot normalize vector of norm {norm}"
            )));
        }
        Ok(Self {
            amplitudes: amplitudes.iter().map(|a| a / norm).collect(),
        })
    }

    /// Basis state in the four-level space.
    pub fn basis(label: BasisLabel) -> Self {
        let mut a = vec![Complex64::new(0.0, 0.0); 4];
        a[label.index()] = Complex64::new(1.0, 0.0);
        Self { amplitudes: a }
    }

    /// (S + T₀)/√2 in the four-level space.
    pub fn plus() -> Self {
        Self::superposition(1.0)
    }

    /// (S − T₀)/√2 in the four-level space.
    pub fn minus() -> Self {
        Self::superposition(-1.0)
    }

    fn superposition(sign: f64) -> Self {
        let r = FRAC_1_SQRT_2;
        Self {
            amplitudes: vec![
                Complex64::new(r, 0.0),
                Complex64::new(sign * r, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        }
    }

    /// Amplitudes in canonical order.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Dimension (2 or 4).
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Embeds a two-level state into the four-level space (no-op for four levels).
    pub fn to_four_level(&self) -> Self {
        let mut a = self.amplitudes.clone();
        a.resize(4, Complex64::new(0.0, 0.0));
        Self { amplitudes: a }
    }

    /// First two amplitudes.
    pub fn computational(&self) -> [Complex64; 2] {
        [self.amplitudes[0], self.amplitudes[1]]
    }

    /// |⟨other|self⟩|².
    pub fn overlap_sqr(&self, other: &StateVector) -> f64 {
        inner(&other.amplitudes, &self.amplitudes).norm_sqr()
    }
}

fn check_state_dim(n: usize) -> Result<()> {
    if n != 2 && n != 4 {
        return Err(Error::InvalidState(format!(
            "dimension must be 2 or 4, got {n}"
        )));
    }
    Ok(())
}

fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// ⟨a|b⟩.
pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Sampled evolution: populations and amplitudes in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Strictly increasing times, seconds.
    pub times: Vec<f64>,
    /// Populations (S, T₀, T₊, T₋) at each time.
    pub populations: Vec<[f64; 4]>,
    /// Amplitudes (S, T₀, T₊, T₋) at each time.
    pub amplitudes: Vec<[Complex64; 4]>,
}

impl Trajectory {
    /// Population of one basis state over time.
    pub fn population_of(&self, label: BasisLabel) -> Vec<f64> {
        self.populations.iter().map(|p| p[label.index()]).collect()
    }

    /// |⟨target|ψ(t)⟩|² over time.
    pub fn projection_onto(&self, target: &StateVector) -> Vec<f64> {
        let t = target.to_four_level();
        self.amplitudes
            .iter()
            .map(|a| inner(t.amplitudes(), a).norm_sqr())
            .collect()
    }

    /// Largest |Σ populations − 1| over the grid.
    pub fn max_norm_error(&self) -> f64 {
        self.populations
            .iter()
            .map(|p| (p.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// `n` evenly spaced times from `start` to `stop` inclusive.
pub fn uniform_grid(start: f64, stop: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 points, got {n}"
        )));
    }
    if !(start.is_finite() && stop.is_finite()) || stop <= start {
        return Err(Error::InvalidGrid(format!(
            "need finite start < stop, got {start}..{stop}"
        )));
    }
    let step = (stop - start) / (n - 1) as f64;
    Ok((0..n)
        .map(|k| {
            if k == n - 1 {
                stop
            } else {
                start + step * k as f64
            }
        })
        .collect())
}

/// U(t) = Σⱼ exp(−iλⱼt/ħ)|φⱼ⟩⟨φⱼ|.
pub fn propagator(h: &ComplexMatrix, t: f64, params: &DeviceParams) -> Result<ComplexMatrix> {
    params.check()?;
    if !t.is_finite() {
        return Err(Error::NonFinite(format!("time {t}")));
    }
    Ok(eigh(h)?.propagator(t, params.hbar))
}

/// Evolves `psi0` under constant `h` and samples the state on `grid`.
///
/// `h` and `psi0` must share a dimension (2 or 4); two-level results are
/// reported with zero T₊ and T₋ amplitudes.
pub fn evolve(
    h: &ComplexMatrix,
    psi0: &StateVector,
    grid: &[f64],
    params: &DeviceParams,
) -> Result<Trajectory> {
    params.check()?;
    check_grid(grid)?;
    if h.dim() != psi0.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}-level hamiltonian with {}-level state",
            h.dim(),
            psi0.dim()
        )));
    }
    let spec = eigh(h)?;
    let coeffs = eigen_coefficients(&spec, psi0.amplitudes());
    let n = h.dim();
    let mut traj = Trajectory {
        times: grid.to_vec(),
        populations: Vec::with_capacity(grid.len()),
        amplitudes: Vec::with_capacity(grid.len()),
    };
    for &t in grid {
        let mut amps = [Complex64::new(0.0, 0.0); 4];
        for (j, (&lam, &c)) in spec.eigenvalues.iter().zip(&coeffs).enumerate() {
            let phase = c * Complex64::from_polar(1.0, -lam * t / params.hbar);
            for (i, a) in amps.iter_mut().take(n).enumerate() {
                *a += spec.eigenvectors[(i, j)] * phase;
            }
        }
        traj.populations.push(amps.map(|a| a.norm_sqr().min(1.0)));
        traj.amplitudes.push(amps);
    }
    Ok(traj)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if let Some(t) = grid.iter().find(|t| !t.is_finite()) {
        return Err(Error::InvalidGrid(format!("non-finite time {t}")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(
            "times must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn eigen_coefficients(spec: &SpectralDecomposition, psi: &[Complex64]) -> Vec<Complex64> {
    (0..psi.len())
        .map(|j| inner(&spec.vector(j), psi))
        .collect()
}

/// α|S⟩ + β·exp(−i(J/4)t/ħ)|T₀⟩: bare exchange dephasing of a computational state.
pub fn relative_phase(
    alpha: Complex64,
    beta: Complex64,
    params: &DeviceParams,
    t: f64,
) -> Result<StateVector> {
    params.check()?;
    let phase = Complex64::from_polar(1.0, -params.st0_splitting() * t / params.hbar);
    StateVector::new(vec![alpha, beta * phase])
}

/// A basis state written in the eigenbasis of `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenExpansion {
    /// Eigendecomposition of the Hamiltonian.
    pub spectrum: SpectralDecomposition,
    /// cⱼ = ⟨φⱼ|state⟩.
    pub coefficients: Vec<Complex64>,
}

impl EigenExpansion {
    /// |Σⱼ ⟨target|φⱼ⟩ cⱼ exp(−iλⱼt/ħ)|².
    pub fn population(&self, target: &StateVector, t: f64, hbar: f64) -> f64 {
        let mut amp = Complex64::new(0.0, 0.0);
        for (j, (&lam, &c)) in self
            .spectrum
            .eigenvalues
            .iter()
            .zip(&self.coefficients)
            .enumerate()
        {
            let proj = inner(target.amplitudes(), &self.spectrum.vector(j));
            amp += proj * c * Complex64::from_polar(1.0, -lam * t / hbar);
        }
        amp.norm_sqr()
    }
}

/// Coefficients of a basis state in the eigenbasis of a 4×4 `h`.
pub fn eigenbasis_expansion(h: &ComplexMatrix, state: BasisLabel) -> Result<EigenExpansion> {
    if h.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "expected a 4x4 hamiltonian, got {}x{}",
            h.dim(),
            h.dim()
        )));
    }
    expansion_of(h, &StateVector::basis(state))
}

/// Coefficients of an arbitrary state in the eigenbasis of `h`.
pub fn expansion_of(h: &ComplexMatrix, state: &StateVector) -> Result<EigenExpansion> {
    let spectrum = eigh(h)?;
    let coefficients = eigen_coefficients(&spectrum, state.amplitudes());
    Ok(EigenExpansion {
        spectrum,
        coefficients,
    })
}
