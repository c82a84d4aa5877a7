//! JSON scenario configuration with unit-suffixed keys and device defaults.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::dynamics::{uniform_grid, StateVector, NORM_TOL};
use crate::physics::{default_params, BasisLabel, DeviceParams, FieldConfig};

/// Tolerance on |‖ψ‖ − 1| before a loaded state is renormalized with a warning.
pub const LOAD_NORM_TOL: f64 = 1e-9;

/// Simulation mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Evolution under the configured fields with δB_z = 0.
    Free,
    /// Exchange-driven z rotation, δB_z = 0.
    RotateZ,
    /// Combined gradient and exchange rotation, δB_z as configured.
    RotateXz,
    /// Leak-free, full and effective two-level populations side by side.
    CompareEff,
    /// Second-order energies for zero, 0.1 mT and 0.5 mT transverse fields.
    Table2,
    /// Energies and rotation-speed metrics over a list of field values.
    Sweep,
}

impl Mode {
    /// Snake-case name used in config files.
    pub fn name(self) -> &'static str {
        match self {
            Mode::Free => "free",
            Mode::RotateZ => "rotate_z",
            Mode::RotateXz => "rotate_xz",
            Mode::CompareEff => "compare_eff",
            Mode::Table2 => "table2",
            Mode::Sweep => "sweep",
        }
    }

    /// Whether the mode drops δB_z from the configured fields.
    pub fn zeroes_gradient(self) -> bool {
        matches!(
            self,
            Mode::Free | Mode::RotateZ | Mode::Table2 | Mode::Sweep
        )
    }
}

/// Sampling grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// First time, s.
    pub t_start: f64,
    /// Last time, s.
    pub t_end: f64,
    /// Number of samples, at least 2.
    pub n_points: usize,
}

impl GridSpec {
    /// Evenly spaced sample times.
    pub fn times(&self) -> crate::Result<Vec<f64>> {
        uniform_grid(self.t_start, self.t_end, self.n_points)
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            t_start: 0.0,
            t_end: 2e-8,
            n_points: 1001,
        }
    }
}

/// Field axis varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// One of the six field components, by index (B_x, B_y, B_z, δB_x, δB_y, δB_z).
    Component(usize),
    /// B_x = B_y = δB_x = δB_y set together.
    Perpendicular,
}

/// Config-file names of the sweepable axes.
pub const SWEEP_AXES: [&str; 7] = [
    "B_x_T", "B_y_T", "B_z_T", "dB_x_T", "dB_y_T", "dB_z_T", "B_perp_T",
];

impl SweepAxis {
    /// Parses a config-file axis name.
    pub fn parse(name: &str) -> Result<Self, String> {
        match SWEEP_AXES.iter().position(|&a| a == name) {
            Some(6) => Ok(SweepAxis::Perpendicular),
            Some(i) => Ok(SweepAxis::Component(i)),
            None => Err(format!(
                "unknown sweep axis `{name}`, expected one of {}",
                SWEEP_AXES.join(", ")
            )),
        }
    }

    /// Config-file name.
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Component(i) => SWEEP_AXES[i],
            SweepAxis::Perpendicular => SWEEP_AXES[6],
        }
    }

    /// `fields` with this axis set to `value`.
    pub fn apply(self, fields: &FieldConfig, value: f64) -> FieldConfig {
        let mut f = *fields;
        match self {
            SweepAxis::Perpendicular => return f.with_transverse(value),
            SweepAxis::Component(0) => f.b_x = value,
            SweepAxis::Component(1) => f.b_y = value,
            SweepAxis::Component(2) => f.b_z = value,
            SweepAxis::Component(3) => f.db_x = value,
            SweepAxis::Component(4) => f.db_y = value,
            SweepAxis::Component(_) => f.db_z = value,
        }
        f
    }
}

/// Sweep axis and values.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Varied axis.
    pub axis: SweepAxis,
    /// Values in tesla, in output order.
    pub values: Vec<f64>,
}

/// Validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// Device constants.
    pub params: DeviceParams,
    /// Fields as configured, before any mode-specific zeroing.
    pub fields: FieldConfig,
    /// Whether `dB_z_T` appeared in the file.
    pub db_z_explicit: bool,
    /// Normalized initial state, 2 or 4 levels.
    pub initial_state: StateVector,
    /// Sampling grid.
    pub grid: GridSpec,
    /// Mode.
    pub mode: Mode,
    /// Sweep section, if present.
    pub sweep: Option<SweepSpec>,
    /// Non-fatal notes produced while loading.
    pub warnings: Vec<String>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            params: default_params(),
            fields: FieldConfig::table1(),
            db_z_explicit: false,
            initial_state: StateVector::basis(BasisLabel::S),
            grid: GridSpec::default(),
            mode: Mode::Free,
            sweep: None,
            warnings: Vec::new(),
        }
    }
}

impl ScenarioConfig {
    /// Fields used by the mode: δB_z is dropped for free evolution, z rotations and energies.
    pub fn effective_fields(&self) -> FieldConfig {
        if self.mode.zeroes_gradient() {
            self.fields.with_db_z(0.0)
        } else {
            self.fields
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    params: Option<RawParams>,
    fields: Option<RawFields>,
    initial_state: Option<RawState>,
    grid: Option<RawGrid>,
    mode: Option<Mode>,
    sweep: Option<RawSweep>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    g: Option<f64>,
    #[serde(rename = "mu_b_eff_eV_per_T")]
    mu_b_eff: Option<f64>,
    #[serde(rename = "j_exc_eV")]
    j_exc: Option<f64>,
    #[serde(rename = "hbar_eV_s")]
    hbar: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFields {
    #[serde(rename = "B_x_T")]
    b_x: Option<f64>,
    #[serde(rename = "B_y_T")]
    b_y: Option<f64>,
    #[serde(rename = "B_z_T")]
    b_z: Option<f64>,
    #[serde(rename = "dB_x_T")]
    db_x: Option<f64>,
    #[serde(rename = "dB_y_T")]
    db_y: Option<f64>,
    #[serde(rename = "dB_z_T")]
    db_z: Option<f64>,
    #[serde(rename = "duration_s")]
    duration: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawState {
    Label(String),
    Amplitudes(Vec<[f64; 2]>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    t_start_s: Option<f64>,
    t_end_s: Option<f64>,
    n_points: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis: String,
    values: Vec<f64>,
}

/// Reads and validates a config file. Errors carry the path and a line/key diagnostic.
pub fn load_config(path: &Path) -> Result<ScenarioConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Parses and validates config text. Absent keys take device defaults.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, String> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let mut cfg = ScenarioConfig::default();
    if let Some(p) = raw.params {
        let d = cfg.params;
        cfg.params = DeviceParams::new(
            p.g.unwrap_or(d.g),
            p.mu_b_eff.unwrap_or(d.mu_b_eff),
            p.j_exc.unwrap_or(d.j_exc),
            p.hbar.unwrap_or(d.hbar),
        )
        .map_err(|e| format!("params: {e}"))?;
    }
    if let Some(f) = raw.fields {
        let d = cfg.fields;
        cfg.db_z_explicit = f.db_z.is_some();
        cfg.fields = FieldConfig {
            b_x: f.b_x.unwrap_or(d.b_x),
            b_y: f.b_y.unwrap_or(d.b_y),
            b_z: f.b_z.unwrap_or(d.b_z),
            db_x: f.db_x.unwrap_or(d.db_x),
            db_y: f.db_y.unwrap_or(d.db_y),
            db_z: f.db_z.unwrap_or(d.db_z),
            duration: f.duration.unwrap_or(d.duration),
        };
        cfg.fields.check().map_err(|e| format!("fields: {e}"))?;
    }
    if let Some(s) = raw.initial_state {
        cfg.initial_state = parse_state(s, &mut cfg.warnings)?;
    }
    if let Some(g) = raw.grid {
        let d = cfg.grid;
        cfg.grid = GridSpec {
            t_start: g.t_start_s.unwrap_or(d.t_start),
            t_end: g.t_end_s.unwrap_or(d.t_end),
            n_points: g.n_points.unwrap_or(d.n_points),
        };
    }
    check_grid(&cfg.grid)?;
    if let Some(m) = raw.mode {
        cfg.mode = m;
    }
    if let Some(s) = raw.sweep {
        let axis = SweepAxis::parse(&s.axis).map_err(|e| format!("sweep.axis: {e}"))?;
        cfg.sweep = Some(SweepSpec {
            axis,
            values: check_values(s.values).map_err(|e| format!("sweep.values: {e}"))?,
        });
    }
    if cfg.mode == Mode::Sweep && cfg.sweep.is_none() {
        return Err("mode `sweep` needs a `sweep` section with `axis` and `values`".into());
    }
    if cfg.mode.zeroes_gradient() && cfg.db_z_explicit && cfg.fields.db_z != 0.0 {
        cfg.warnings.push(format!(
            "mode `{}` ignores dB_z_T = {:e}",
            cfg.mode.name(),
            cfg.fields.db_z
        ));
    }
    Ok(cfg)
}

fn check_grid(g: &GridSpec) -> Result<(), String> {
    if g.n_points < 2 {
        return Err(format!(
            "grid.n_points must be at least 2, got {}",
            g.n_points
        ));
    }
    if !(g.t_start.is_finite() && g.t_end.is_finite()) || g.t_start < 0.0 || g.t_end <= g.t_start {
        return Err(format!(
            "grid needs 0 <= t_start_s < t_end_s, got {} and {}",
            g.t_start, g.t_end
        ));
    }
    Ok(())
}

/// Rejects empty or non-finite value lists.
pub fn check_values(values: Vec<f64>) -> Result<Vec<f64>, String> {
    if values.is_empty() {
        return Err("no values given".into());
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(format!("non-finite value {v}"));
    }
    Ok(values)
}

fn parse_state(raw: RawState, warnings: &mut Vec<String>) -> Result<StateVector, String> {
    match raw {
        RawState::Label(name) => match name.as_str() {
            "S" => Ok(StateVector::basis(BasisLabel::S)),
            "T0" => Ok(StateVector::basis(BasisLabel::T0)),
            "Tplus" | "Tp" => Ok(StateVector::basis(BasisLabel::Tplus)),
            "Tminus" | "Tm" => Ok(StateVector::basis(BasisLabel::Tminus)),
            "plus" => Ok(StateVector::plus()),
            "minus" => Ok(StateVector::minus()),
            other => Err(format!(
                "initial_state: unknown label `{other}`, expected S, T0, Tplus, Tminus, plus or minus"
            )),
        },
        RawState::Amplitudes(pairs) => {
            let amps: Vec<Complex64> = pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
            if amps.len() != 2 && amps.len() != 4 {
                return Err(format!(
                    "initial_state: need 2 or 4 amplitudes, got {}",
                    amps.len()
                ));
            }
            if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err("initial_state: non-finite amplitude".into());
            }
            let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > LOAD_NORM_TOL.max(NORM_TOL) {
                warnings.push(format!("initial_state had norm {norm:.17e}; renormalized"));
            }
            StateVector::normalized(amps).map_err(|e| format!("initial_state: {e}"))
        }
    }
}
