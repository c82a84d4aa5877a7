//! Python bindings: device parameters, field configurations, the 4×4
//! Hamiltonian, perturbative energies, time evolution and rotation diagnostics.
//!
//! Matrices cross the boundary as lists of lists of Python `complex`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use st0_core::cli::run::{exact_by_label, TABLE2_AMPLITUDES};
use st0_core::dynamics::{self, StateVector};
use st0_core::physics::{G_FACTOR, HBAR_EV_S, J_EXC_EV, MU_B_EFF_EV_PER_T};
use st0_core::{hamiltonian, rotations, weakfield, BasisLabel, ComplexMatrix};

type Matrix = Vec<Vec<Complex64>>;

fn err(e: st0_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_rows(m: &ComplexMatrix) -> Matrix {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn from_rows(rows: Matrix) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(&rows).map_err(err)
}

/// Device constants g, μ_B,eff (eV/T), J (eV) and ħ (eV·s).
#[pyclass(name = "DeviceParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyDeviceParams {
    inner: st0_core::DeviceParams,
}

#[pymethods]
impl PyDeviceParams {
    #[new]
    #[pyo3(signature = (g=G_FACTOR, mu_b_eff=MU_B_EFF_EV_PER_T, j_exc=J_EXC_EV, hbar=HBAR_EV_S))]
    fn new(g: f64, mu_b_eff: f64, j_exc: f64, hbar: f64) -> PyResult<Self> {
        Ok(Self {
            inner: st0_core::DeviceParams::new(g, mu_b_eff, j_exc, hbar).map_err(err)?,
        })
    }

    #[getter]
    fn g(&self) -> f64 {
        self.inner.g
    }

    #[getter]
    fn mu_b_eff(&self) -> f64 {
        self.inner.mu_b_eff
    }

    #[getter]
    fn j_exc(&self) -> f64 {
        self.inner.j_exc
    }

    #[getter]
    fn hbar(&self) -> f64 {
        self.inner.hbar
    }

    fn __repr__(&self) -> String {
        let p = self.inner;
        format!(
            "DeviceParams(g={:?}, mu_b_eff={:?}, j_exc={:?}, hbar={:?})",
            p.g, p.mu_b_eff, p.j_exc, p.hbar
        )
    }
}

/// Field sums (b_*) and differences (db_*) over the two dots, tesla.
#[pyclass(name = "FieldConfig", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyFieldConfig {
    inner: st0_core::FieldConfig,
}

#[pymethods]
impl PyFieldConfig {
    #[new]
    #[pyo3(signature = (*, b_x=0.0, b_y=0.0, b_z=0.0, db_x=0.0, db_y=0.0, db_z=0.0, duration=0.0))]
    fn new(
        b_x: f64,
        b_y: f64,
        b_z: f64,
        db_x: f64,
        db_y: f64,
        db_z: f64,
        duration: f64,
    ) -> PyResult<Self> {
        let inner = st0_core::FieldConfig {
            b_x,
            b_y,
            b_z,
            db_x,
            db_y,
            db_z,
            duration,
        };
        inner.check().map_err(err)?;
        Ok(Self { inner })
    }

    /// B_z = 100 mT, δB_z = 10 mT, no transverse fields.
    #[staticmethod]
    fn table1() -> Self {
        Self {
            inner: st0_core::FieldConfig::table1(),
        }
    }

    /// Copy with B_x = B_y = δB_x = δB_y = `amplitude`.
    fn with_transverse(&self, amplitude: f64) -> Self {
        Self {
            inner: self.inner.with_transverse(amplitude),
        }
    }

    /// Copy with δB_z replaced.
    fn with_db_z(&self, db_z: f64) -> Self {
        Self {
            inner: self.inner.with_db_z(db_z),
        }
    }

    #[getter]
    fn b_x(&self) -> f64 {
        self.inner.b_x
    }

    #[getter]
    fn b_y(&self) -> f64 {
        self.inner.b_y
    }

    #[getter]
    fn b_z(&self) -> f64 {
        self.inner.b_z
    }

    #[getter]
    fn db_x(&self) -> f64 {
        self.inner.db_x
    }

    #[getter]
    fn db_y(&self) -> f64 {
        self.inner.db_y
    }

    #[getter]
    fn db_z(&self) -> f64 {
        self.inner.db_z
    }

    fn __repr__(&self) -> String {
        let f = self.inner;
        format!(
            "FieldConfig(b_x={:?}, b_y={:?}, b_z={:?}, db_x={:?}, db_y={:?}, db_z={:?})",
            f.b_x, f.b_y, f.b_z, f.db_x, f.db_y, f.db_z
        )
    }
}

fn params_or_default(p: Option<PyDeviceParams>) -> st0_core::DeviceParams {
    p.map_or_else(st0_core::default_params, |p| p.inner)
}

fn parse_state(label: &str) -> PyResult<StateVector> {
    Ok(match label {
        "S" => StateVector::basis(BasisLabel::S),
        "T0" => StateVector::basis(BasisLabel::T0),
        "Tp" | "Tplus" => StateVector::basis(BasisLabel::Tplus),
        "Tm" | "Tminus" => StateVector::basis(BasisLabel::Tminus),
        "plus" => StateVector::plus(),
        "minus" => StateVector::minus(),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown state label `{other}`"
            )))
        }
    })
}

/// 4×4 Hamiltonian in (S, T0, T+, T-) order, eV.
#[pyfunction]
#[pyo3(signature = (fields, params=None))]
fn build_dqd(fields: PyFieldConfig, params: Option<PyDeviceParams>) -> Matrix {
    to_rows(&hamiltonian::build_dqd(&params_or_default(params), &fields.inner).matrix)
}

/// Ascending eigenvalues and eigenvectors (as columns) of a Hermitian matrix.
#[pyfunction]
fn eigh(matrix: Matrix) -> PyResult<(Vec<f64>, Matrix)> {
    let s = st0_core::eigh(&from_rows(matrix)?).map_err(err)?;
    Ok((s.eigenvalues.clone(), to_rows(&s.eigenvectors)))
}

/// exp(−iHt/ħ) for a Hermitian matrix in eV.
#[pyfunction]
#[pyo3(signature = (matrix, t, hbar=HBAR_EV_S))]
fn expm_unitary(matrix: Matrix, t: f64, hbar: f64) -> PyResult<Matrix> {
    Ok(to_rows(
        &st0_core::expm_unitary(&from_rows(matrix)?, t, hbar).map_err(err)?,
    ))
}

/// Second-order energies: dict with `lambda`, `lambda_p`, `corrections`, `weak_regime`.
#[pyfunction]
#[pyo3(signature = (fields, params=None))]
fn pt_eigenvalues<'py>(
    py: Python<'py>,
    fields: PyFieldConfig,
    params: Option<PyDeviceParams>,
) -> PyResult<Bound<'py, PyDict>> {
    let s = weakfield::pt_eigenvalues(&params_or_default(params), &fields.inner).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("lambda", s.lambda.to_vec())?;
    d.set_item("lambda_p", s.lambda_p.to_vec())?;
    d.set_item("corrections", s.corrections.to_vec())?;
    d.set_item("weak_regime", s.weak_regime)?;
    Ok(d)
}

/// Rows (B_perp, bare ×4, second-order ×4, exact ×4) at 0, 0.1 and 0.5 mT, δB_z = 0.
#[pyfunction]
#[pyo3(signature = (params=None, b_z=0.1))]
fn table2(params: Option<PyDeviceParams>, b_z: f64) -> PyResult<Vec<Vec<f64>>> {
    let p = params_or_default(params);
    TABLE2_AMPLITUDES
        .iter()
        .map(|&a| {
            let f = st0_core::FieldConfig {
                b_z,
                ..st0_core::FieldConfig::zero()
            }
            .with_transverse(a);
            let pt = weakfield::pt_eigenvalues(&p, &f).map_err(err)?;
            let exact = exact_by_label(&hamiltonian::build_dqd(&p, &f).matrix).map_err(err)?;
            let mut row = vec![a];
            row.extend(pt.lambda);
            row.extend(pt.lambda_p);
            row.extend(exact);
            Ok(row)
        })
        .collect()
}

/// Populations (S, T0, T+, T-) at each time, starting from a labelled state.
#[pyfunction]
#[pyo3(signature = (fields, initial, times, params=None))]
fn evolve(
    fields: PyFieldConfig,
    initial: &str,
    times: Vec<f64>,
    params: Option<PyDeviceParams>,
) -> PyResult<Vec<[f64; 4]>> {
    let p = params_or_default(params);
    let h = hamiltonian::build_dqd(&p, &fields.inner).matrix;
    let tr = dynamics::evolve(&h, &parse_state(initial)?, &times, &p).map_err(err)?;
    Ok(tr.populations)
}

/// Pulse duration θħ/λ, seconds.
#[pyfunction]
#[pyo3(signature = (theta, coupling, params=None))]
fn gate_time_for(theta: f64, coupling: f64, params: Option<PyDeviceParams>) -> PyResult<f64> {
    rotations::gate_time_for(theta, coupling, &params_or_default(params)).map_err(err)
}

/// Leaky vs leak-free rotation comparison as a dict.
#[pyfunction]
#[pyo3(signature = (fields, target, times, params=None))]
fn phase_lag<'py>(
    py: Python<'py>,
    fields: PyFieldConfig,
    target: &str,
    times: Vec<f64>,
    params: Option<PyDeviceParams>,
) -> PyResult<Bound<'py, PyDict>> {
    let p = params_or_default(params);
    let r = rotations::phase_lag(&p, &fields.inner, &parse_state(target)?, &times).map_err(err)?;
    let predicted = rotations::predicted_period_stretch(&p, &fields.inner).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("time_shift", r.time_shift)?;
    d.set_item("phase_shift", r.phase_shift)?;
    d.set_item("leak_free_period", r.leak_free_period)?;
    d.set_item("period_stretch", r.period_stretch)?;
    d.set_item("predicted_stretch", predicted)?;
    Ok(d)
}

/// Effective couplings (A_S→T0, A_T0→S), eV.
#[pyfunction]
#[pyo3(signature = (fields, params=None))]
fn transition_amplitudes(
    fields: PyFieldConfig,
    params: Option<PyDeviceParams>,
) -> PyResult<(Complex64, Complex64)> {
    let a =
        weakfield::transition_amplitudes(&params_or_default(params), &fields.inner).map_err(err)?;
    Ok((a.a_s_to_t0, a.a_t0_to_s))
}

/// The `st0sim` Python module.
#[pymodule]
pub fn st0sim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDeviceParams>()?;
    m.add_class::<PyFieldConfig>()?;
    m.add_function(wrap_pyfunction!(build_dqd, m)?)?;
    m.add_function(wrap_pyfunction!(eigh, m)?)?;
    m.add_function(wrap_pyfunction!(expm_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(pt_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(table2, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(gate_time_for, m)?)?;
    m.add_function(wrap_pyfunction!(phase_lag, m)?)?;
    m.add_function(wrap_pyfunction!(transition_amplitudes, m)?)?;
    Ok(())
}
