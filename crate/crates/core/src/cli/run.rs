//! Scenario execution and CSV rendering.

use std::fmt::Write as _;

use rayon::prelude::*;

use super::config::{Mode, ScenarioConfig, SweepSpec};
use crate::dynamics::evolve;
use crate::error::Error;
use crate::hamiltonian::build_dqd;
use crate::matrix::eigh;
use crate::physics::{DeviceParams, FieldConfig};
use crate::rotations::{phase_lag, predicted_period_stretch};
use crate::weakfield::{compare_effective, pt_eigenvalues};

/// Trajectory CSV header.
pub const TRAJECTORY_HEADER: &str =
    "t_s,pop_S,pop_T0,pop_Tp,pop_Tm,re_S,im_S,re_T0,im_T0,re_Tp,im_Tp,re_Tm,im_Tm";

/// Effective-Hamiltonian comparison CSV header.
pub const COMPARE_HEADER: &str = "t_s,pop_leak_free,pop_full,pop_eff,abs_dev";

/// Energy table CSV header.
pub const TABLE2_HEADER: &str = "B_perp_T,lambda_S_eV,lambda_T0_eV,lambda_Tp_eV,lambda_Tm_eV,\
pt_S_eV,pt_T0_eV,pt_Tp_eV,pt_Tm_eV,exact_S_eV,exact_T0_eV,exact_Tp_eV,exact_Tm_eV";

/// Sweep CSV header; the first column is named after the swept axis.
pub const SWEEP_COLUMNS: &str = "pt_S_eV,pt_T0_eV,pt_Tp_eV,pt_Tm_eV,time_shift_s,phase_shift_rad,\
period_stretch,predicted_stretch";

/// Transverse amplitudes of the energy table, T.
pub const TABLE2_AMPLITUDES: [f64; 3] = [0.0, 1e-4, 5e-4];

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "ST0_NUM_THREADS";

/// Formats a double with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Rendered output: CSV body plus `#` comment lines.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Output {
    /// Comment lines without the leading `#`.
    pub comments: Vec<String>,
    /// Header line.
    pub header: String,
    /// Data rows.
    pub rows: Vec<String>,
}

impl Output {
    /// Full file text; comments are dropped when `quiet`.
    pub fn render(&self, quiet: bool) -> String {
        let mut s = String::new();
        if !quiet {
            for c in &self.comments {
                let _ = writeln!(s, "# {c}");
            }
        }
        let _ = writeln!(s, "{}", self.header);
        for r in &self.rows {
            let _ = writeln!(s, "{r}");
        }
        s
    }
}

fn describe(params: &DeviceParams, fields: &FieldConfig) -> Vec<String> {
    vec![
        format!(
            "params g={} mu_b_eff_eV_per_T={} j_exc_eV={} hbar_eV_s={}",
            num(params.g),
            num(params.mu_b_eff),
            num(params.j_exc),
            num(params.hbar)
        ),
        format!(
            "fields B_x_T={} B_y_T={} B_z_T={} dB_x_T={} dB_y_T={} dB_z_T={}",
            num(fields.b_x),
            num(fields.b_y),
            num(fields.b_z),
            num(fields.db_x),
            num(fields.db_y),
            num(fields.db_z)
        ),
    ]
}

/// Executes a scenario according to its mode.
pub fn run(cfg: &ScenarioConfig) -> Result<Output, Error> {
    let mut out = match cfg.mode {
        Mode::Free | Mode::RotateZ | Mode::RotateXz => trajectory(cfg)?,
        Mode::CompareEff => compare(cfg)?,
        Mode::Table2 => table2(&cfg.params, cfg.fields.b_z)?,
        Mode::Sweep => {
            let spec = cfg
                .sweep
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("missing sweep section".into()))?;
            sweep(cfg, spec)?
        }
    };
    if cfg.mode != Mode::Table2 {
        out.comments
            .insert(0, format!("st0sim mode={}", cfg.mode.name()));
    }
    out.comments
        .extend(cfg.warnings.iter().map(|w| format!("warning: {w}")));
    Ok(out)
}

fn trajectory(cfg: &ScenarioConfig) -> Result<Output, Error> {
    let fields = cfg.effective_fields();
    let h = build_dqd(&cfg.params, &fields).matrix;
    let traj = evolve(
        &h,
        &cfg.initial_state.to_four_level(),
        &cfg.grid.times()?,
        &cfg.params,
    )?;
    let rows = traj
        .times
        .iter()
        .zip(&traj.populations)
        .zip(&traj.amplitudes)
        .map(|((&t, p), a)| {
            let mut cols = vec![num(t)];
            cols.extend(p.iter().map(|&x| num(x)));
            for z in a {
                cols.push(num(z.re));
                cols.push(num(z.im));
            }
            cols.join(",")
        })
        .collect();
    Ok(Output {
        comments: describe(&cfg.params, &fields),
        header: TRAJECTORY_HEADER.into(),
        rows,
    })
}

fn compare(cfg: &ScenarioConfig) -> Result<Output, Error> {
    let fields = cfg.effective_fields();
    let c = compare_effective(&cfg.params, &fields, &cfg.initial_state, &cfg.grid.times()?)?;
    let rows = (0..c.times.len())
        .map(|k| {
            [
                c.times[k],
                c.leak_free[k],
                c.full[k],
                c.effective[k],
                (c.effective[k] - c.full[k]).abs(),
            ]
            .map(num)
            .join(",")
        })
        .collect();
    let mut comments = describe(&cfg.params, &fields);
    comments.push(format!("max_abs_dev={}", num(c.max_abs_dev)));
    Ok(Output {
        comments,
        header: COMPARE_HEADER.into(),
        rows,
    })
}

/// Exact eigenvalues labelled by the basis state carrying most of each eigenvector.
///
/// Falls back to ascending order when two eigenvectors share a dominant state.
pub fn exact_by_label(h: &crate::matrix::ComplexMatrix) -> Result<[f64; 4], Error> {
    let spec = eigh(h)?;
    let mut out = [f64::NAN; 4];
    for j in 0..4 {
        let v = spec.vector(j);
        let k = (0..4)
            .max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm()))
            .expect("four components");
        if !out[k].is_nan() {
            let mut sorted = [0.0; 4];
            sorted.copy_from_slice(&spec.eigenvalues[..4]);
            return Ok(sorted);
        }
        out[k] = spec.eigenvalues[j];
    }
    Ok(out)
}

/// Bare, second-order and exact energies at zero, 0.1 mT and 0.5 mT transverse fields, δB_z = 0.
pub fn table2(params: &DeviceParams, b_z: f64) -> Result<Output, Error> {
    let mut rows = Vec::new();
    for &a in &TABLE2_AMPLITUDES {
        let fields = FieldConfig {
            b_z,
            ..FieldConfig::zero()
        }
        .with_transverse(a);
        let pt = pt_eigenvalues(params, &fields)?;
        let exact = exact_by_label(&build_dqd(params, &fields).matrix)?;
        let mut cols = vec![num(a)];
        cols.extend(pt.lambda.iter().map(|&x| num(x)));
        cols.extend(pt.lambda_p.iter().map(|&x| num(x)));
        cols.extend(exact.iter().map(|&x| num(x)));
        rows.push(cols.join(","));
    }
    let mut comments = vec![
        "st0sim table2: second-order energies with dB_z_T = 0 and B_x = B_y = dB_x = dB_y = B_perp"
            .to_string(),
    ];
    comments.extend(describe(
        params,
        &FieldConfig {
            b_z,
            ..FieldConfig::zero()
        },
    ));
    Ok(Output {
        comments,
        header: TABLE2_HEADER.into(),
        rows,
    })
}

/// Thread count from [`THREADS_ENV`], if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

struct SweepRow {
    pt: [f64; 4],
    lag: Option<(f64, f64, Option<f64>)>,
    predicted: f64,
}

fn sweep_point(
    cfg: &ScenarioConfig,
    fields: &FieldConfig,
    grid: &[f64],
) -> Result<SweepRow, Error> {
    let pt = pt_eigenvalues(&cfg.params, fields)?.lambda_p;
    let lag = match phase_lag(&cfg.params, fields, &cfg.initial_state, grid) {
        Ok(r) => Some((r.time_shift, r.phase_shift, r.period_stretch)),
        Err(Error::NoExtremumFound(_)) => None,
        Err(e) => return Err(e),
    };
    let predicted = predicted_period_stretch(&cfg.params, fields)?;
    Ok(SweepRow { pt, lag, predicted })
}

/// Energies and rotation-speed metrics for each sweep value, rows in input order.
pub fn sweep(cfg: &ScenarioConfig, spec: &SweepSpec) -> Result<Output, Error> {
    let base = cfg.effective_fields();
    let grid = cfg.grid.times()?;
    let eval = || -> Result<Vec<SweepRow>, Error> {
        spec.values
            .par_iter()
            .map(|&v| sweep_point(cfg, &spec.axis.apply(&base, v), &grid))
            .collect()
    };
    let results = match thread_cap() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(eval)?,
        None => eval()?,
    };
    let mut comments = describe(&cfg.params, &base);
    comments.push(format!(
        "sweep axis={} target=initial_state",
        spec.axis.name()
    ));
    let mut rows = Vec::with_capacity(results.len());
    for (&v, r) in spec.values.iter().zip(&results) {
        let mut cols = vec![num(v)];
        cols.extend(r.pt.iter().map(|&x| num(x)));
        match r.lag {
            Some((dt, dphi, stretch)) => {
                cols.push(num(dt));
                cols.push(num(dphi));
                cols.push(num(stretch.unwrap_or(f64::NAN)));
            }
            None => {
                comments.push(format!(
                    "warning: no population minimum at {}={}; lag columns are NaN",
                    spec.axis.name(),
                    num(v)
                ));
                cols.extend([num(f64::NAN), num(f64::NAN), num(f64::NAN)]);
            }
        }
        cols.push(num(r.predicted));
        rows.push(cols.join(","));
    }
    Ok(Output {
        comments,
        header: format!("{},{}", spec.axis.name(), SWEEP_COLUMNS),
        rows,
    })
}
