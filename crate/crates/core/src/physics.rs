//! Physical constants, device parameters, field configurations and basis labels.
//!
//! Units: energies in eV, fields in tesla, times in seconds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant in eV·s.
pub const HBAR_EV_S: f64 = 6.582119569e-16;

/// Effective Bohr magneton in eV/T.
pub const MU_B_EFF_EV_PER_T: f64 = 6.42915e-5;

/// Default gyromagnetic ratio.
pub const G_FACTOR: f64 = 2.0;

/// Default exchange coupling in eV.
pub const J_EXC_EV: f64 = 2e-6;

/// A coupling counts as weak when it is below this fraction of |J/8|.
pub const WEAK_REGIME_THRESHOLD: f64 = 0.1;

/// Physical constants and device couplings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviceParams {
    /// Gyromagnetic ratio (dimensionless).
    pub g: f64,
    /// Effective Bohr magneton, eV/T.
    pub mu_b_eff: f64,
    /// Exchange coupling, eV (any sign).
    pub j_exc: f64,
    /// Reduced Planck constant, eV·s.
    pub hbar: f64,
}

impl DeviceParams {
    /// Validated constructor: all finite, `mu_b_eff > 0`, `hbar > 0`.
    pub fn new(g: f64, mu_b_eff: f64, j_exc: f64, hbar: f64) -> Result<Self> {
        let p = Self {
            g,
            mu_b_eff,
            j_exc,
            hbar,
        };
        p.check()?;
        Ok(p)
    }

    /// Checks the type invariants.
    pub fn check(&self) -> Result<()> {
        for (name, v) in [
            ("g", self.g),
            ("mu_b_eff", self.mu_b_eff),
            ("j_exc", self.j_exc),
            ("hbar", self.hbar),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("{name} = {v}")));
            }
        }
        if self.mu_b_eff <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "mu_b_eff must be positive, got {}",
                self.mu_b_eff
            )));
        }
        if self.hbar <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "hbar must be positive, got {}",
                self.hbar
            )));
        }
        Ok(())
    }

    /// Zeeman energy ½·g·μ_B·B in eV.
    pub fn zeeman(&self, b: f64) -> f64 {
        0.5 * self.g * self.mu_b_eff * b
    }

    /// Transverse coupling g·μ_B·B/(2√2) in eV.
    pub fn transverse(&self, b: f64) -> f64 {
        self.g * self.mu_b_eff * b / (2.0 * std::f64::consts::SQRT_2)
    }

    /// Bare S–T₀ splitting J/4 in eV.
    pub fn st0_splitting(&self) -> f64 {
        self.j_exc / 4.0
    }
}

impl Default for DeviceParams {
    fn default() -> Self {
        default_params()
    }
}

/// Default device: g = 2, μ_B = 6.42915e-5 eV/T, J = 2 μeV, ħ = 6.582119569e-16 eV·s.
pub fn default_params() -> DeviceParams {
    DeviceParams {
        g: G_FACTOR,
        mu_b_eff: MU_B_EFF_EV_PER_T,
        j_exc: J_EXC_EV,
        hbar: HBAR_EV_S,
    }
}

/// Magnetic fields (sums and differences over the two dots) and pulse duration.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FieldConfig {
    /// B_x1 + B_x2, tesla.
    pub b_x: f64,
    /// B_y1 + B_y2, tesla.
    pub b_y: f64,
    /// B_z1 + B_z2, tesla.
    pub b_z: f64,
    /// B_x1 − B_x2, tesla.
    pub db_x: f64,
    /// B_y1 − B_y2, tesla.
    pub db_y: f64,
    /// B_z1 − B_z2, tesla.
    pub db_z: f64,
    /// Square-pulse duration, seconds.
    pub duration: f64,
}

impl FieldConfig {
    /// All fields zero.
    pub fn zero() -> Self {
        Self::default()
    }

    /// Default operating point: B_z = 100 mT, δB_z = 10 mT, no transverse fields.
    pub fn table1() -> Self {
        Self {
            b_z: 0.1,
            db_z: 0.01,
            ..Self::default()
        }
    }

    /// Builds from the two per-dot field vectors.
    pub fn from_dots(b1: [f64; 3], b2: [f64; 3]) -> Self {
        Self {
            b_x: b1[0] + b2[0],
            b_y: b1[1] + b2[1],
            b_z: b1[2] + b2[2],
            db_x: b1[0] - b2[0],
            db_y: b1[1] - b2[1],
            db_z: b1[2] - b2[2],
            duration: 0.0,
        }
    }

    /// Copy with B_x = B_y = δB_x = δB_y = `amplitude`.
    pub fn with_transverse(self, amplitude: f64) -> Self {
        Self {
            b_x: amplitude,
            b_y: amplitude,
            db_x: amplitude,
            db_y: amplitude,
            ..self
        }
    }

    /// Copy with all four transverse components zeroed.
    pub fn without_transverse(self) -> Self {
        self.with_transverse(0.0)
    }

    /// Copy with δB_z replaced.
    pub fn with_db_z(self, db_z: f64) -> Self {
        Self { db_z, ..self }
    }

    /// True when B_x, B_y, δB_x and δB_y are all zero.
    pub fn has_no_transverse(&self) -> bool {
        self.b_x == 0.0 && self.b_y == 0.0 && self.db_x == 0.0 && self.db_y == 0.0
    }

    /// Checks finiteness and `duration >= 0`.
    pub fn check(&self) -> Result<()> {
        for (name, v) in [
            ("b_x", self.b_x),
            ("b_y", self.b_y),
            ("b_z", self.b_z),
            ("db_x", self.db_x),
            ("db_y", self.db_y),
            ("db_z", self.db_z),
            ("duration", self.duration),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("{name} = {v}")));
            }
        }
        if self.duration < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "duration must be non-negative, got {}",
                self.duration
            )));
        }
        Ok(())
    }
}

/// Two-electron basis states, canonical order (S, T₀, T₊, T₋).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisLabel {
    /// Singlet.
    S,
    /// Neutral triplet.
    T0,
    /// Triplet ↑↑.
    Tplus,
    /// Triplet ↓↓.
    Tminus,
}

impl BasisLabel {
    /// All labels in canonical order.
    pub const ALL: [BasisLabel; 4] = [
        BasisLabel::S,
        BasisLabel::T0,
        BasisLabel::Tplus,
        BasisLabel::Tminus,
    ];

    /// Canonical index.
    pub fn index(self) -> usize {
        match self {
            BasisLabel::S => 0,
            BasisLabel::T0 => 1,
            BasisLabel::Tplus => 2,
            BasisLabel::Tminus => 3,
        }
    }

    /// Label at a canonical index.
    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    /// Short name used in CSV headers.
    pub fn name(self) -> &'static str {
        match self {
            BasisLabel::S => "S",
            BasisLabel::T0 => "T0",
            BasisLabel::Tplus => "Tp",
            BasisLabel::Tminus => "Tm",
        }
    }
}

/// Advisory check of the weak transverse-field regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakFieldReport {
    /// |g μ_B (δB_x ± iδB_y)| / (2√2), eV.
    pub gradient_coupling: f64,
    /// |g μ_B (B_x ± iB_y)| / (2√2), eV.
    pub sum_coupling: f64,
    /// |J/8|, eV.
    pub exchange_scale: f64,
    /// Both couplings below [`WEAK_REGIME_THRESHOLD`]·|J/8| (zero couplings always pass).
    pub weak_regime: bool,
}

/// Compares transverse couplings with the exchange scale.
pub fn validate(params: &DeviceParams, fields: &FieldConfig) -> WeakFieldReport {
    let gradient_coupling = params.transverse(fields.db_x.hypot(fields.db_y)).abs();
    let sum_coupling = params.transverse(fields.b_x.hypot(fields.b_y)).abs();
    let exchange_scale = (params.j_exc / 8.0).abs();
    let limit = WEAK_REGIME_THRESHOLD * exchange_scale;
    let weak = |c: f64| c == 0.0 || c < limit;
    WeakFieldReport {
        gradient_coupling,
        sum_coupling,
        exchange_scale,
        weak_regime: weak(gradient_coupling) && weak(sum_coupling),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_device_table() {
        let p = default_params();
        assert_eq!(p.g, 2.0);
        assert_eq!(p.mu_b_eff, 6.42915e-5);
        assert_eq!(p.j_exc, 2e-6);
        assert_eq!(p.hbar, 6.582119569e-16);
    }

    #[test]
    fn constructor_rejects_bad_values() {
        assert!(DeviceParams::new(2.0, 0.0, 1e-6, HBAR_EV_S).is_err());
        assert!(DeviceParams::new(2.0, 1.0, 1e-6, -1.0).is_err());
        assert!(DeviceParams::new(f64::NAN, 1.0, 1e-6, 1.0).is_err());
        assert!(DeviceParams::new(2.0, 1.0, -1e-6, 1.0).is_ok());
    }

    #[test]
    fn weak_regime_at_small_field() {
        let r = validate(
            &default_params(),
            &FieldConfig::table1().with_transverse(1e-4),
        );
        let expected = 2.0 * 6.42915e-5 * (2.0f64 * 1e-8).sqrt() / (2.0 * 2f64.sqrt());
        assert!((r.gradient_coupling - expected).abs() < 1e-22);
        assert!((r.gradient_coupling - 6.43e-9).abs() < 1e-11);
        assert_eq!(r.exchange_scale, 2.5e-7);
        assert!(r.weak_regime);
    }

    #[test]
    fn zero_fields_are_weak() {
        let r = validate(&default_params(), &FieldConfig::zero());
        assert_eq!(r.gradient_coupling, 0.0);
        assert_eq!(r.sum_coupling, 0.0);
        assert!(r.weak_regime);
    }

    #[test]
    fn strong_field_is_not_weak() {
        let r = validate(
            &default_params(),
            &FieldConfig::table1().with_transverse(1e-2),
        );
        assert!(r.gradient_coupling > 6.4e-7 && r.gradient_coupling < 6.5e-7);
        assert!(!r.weak_regime);
    }

    #[test]
    fn basis_index_is_bijective() {
        for (i, l) in BasisLabel::ALL.iter().enumerate() {
            assert_eq!(l.index(), i);
            assert_eq!(BasisLabel::from_index(i), Some(*l));
        }
        assert_eq!(BasisLabel::from_index(4), None);
    }

    #[test]
    fn field_check_rejects_negative_duration() {
        let f = FieldConfig {
            duration: -1.0,
            ..FieldConfig::zero()
        };
        assert!(f.check().is_err());
    }
}
