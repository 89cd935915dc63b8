//! Python bindings: matrices travel as nested lists of complex numbers.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use qfwalk::algebra::{
    build_inverse, build_symplectic, decompose_symplectic, make_amplitude, partial_conjugate, AWAmplitude, ConjDims,
    Conjugation, RealLinearOp, SymplecticTriple,
};
use qfwalk::fock::{weyl, FockSpace};
use qfwalk::linalg::{CMat, CVec};
use qfwalk::verify::Suite;
use qfwalk::walk::{convergence_study, gns_build, limit_generator, GNSModel, WalkModel};
use qfwalk::QfError;
use qfwalk_cli::config::default_test_data;
use qfwalk_cli::{parse_config, run_suite, Mode};

type Rows = Vec<Vec<Complex64>>;

/// `(n, tau, abs_error, ratio)` per step count.
type ConvergenceRows = Vec<(usize, f64, f64, Option<f64>)>;

fn err(e: QfError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_mat(rows: Rows) -> PyResult<CMat> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err("matrix rows have different lengths"));
    }
    Ok(CMat::from_fn(n, m, |i, j| rows[i][j]))
}

fn from_mat(a: &CMat) -> Rows {
    (0..a.nrows()).map(|i| a.row(i).iter().copied().collect()).collect()
}

fn to_vec(x: Vec<Complex64>) -> CVec {
    CVec::from_vec(x)
}

fn from_vec(x: &CVec) -> Vec<Complex64> {
    x.iter().copied().collect()
}

/// Generating data `(V, C, P)` of a symplectic automorphism.
#[pyclass(name = "SymplecticTriple", frozen)]
struct PyTriple {
    inner: SymplecticTriple,
}

#[pymethods]
impl PyTriple {
    #[new]
    #[pyo3(signature = (v, c, p, tol = 1e-10))]
    fn new(v: Rows, c: Rows, p: Rows, tol: f64) -> PyResult<Self> {
        let c = Conjugation::new(to_mat(c)?, tol).map_err(err)?;
        let inner = SymplecticTriple::new(to_mat(v)?, c, to_mat(p)?, tol).map_err(err)?;
        Ok(Self { inner })
    }

    /// Recover `(V, C, P)` from the linear and conjugate-linear parts of `B`.
    #[staticmethod]
    #[pyo3(signature = (linear, conj_linear, tol = 1e-10))]
    fn decompose(linear: Rows, conj_linear: Rows, tol: f64) -> PyResult<Self> {
        let b = RealLinearOp::new(to_mat(linear)?, to_mat(conj_linear)?).map_err(err)?;
        Ok(Self { inner: decompose_symplectic(&b, tol).map_err(err)? })
    }

    #[getter]
    fn v(&self) -> Rows {
        from_mat(&self.inner.v)
    }

    #[getter]
    fn c(&self) -> Rows {
        from_mat(&self.inner.c.mat)
    }

    #[getter]
    fn p(&self) -> Rows {
        from_mat(&self.inner.p)
    }

    /// `(linear, conj_linear)` parts of `B = V(cosh P − C sinh P)`.
    fn build(&self) -> (Rows, Rows) {
        let b = build_symplectic(&self.inner);
        (from_mat(&b.linear), from_mat(&b.conj_linear))
    }

    fn apply(&self, x: Vec<Complex64>) -> Vec<Complex64> {
        from_vec(&build_symplectic(&self.inner).apply(&to_vec(x)))
    }

    fn apply_inverse(&self, x: Vec<Complex64>) -> Vec<Complex64> {
        from_vec(&build_inverse(&self.inner).apply(&to_vec(x)))
    }
}

/// Quasifree amplitude `Σ` on `k ⊕ k̄`, gauge-invariant unless a squeeze is given.
#[pyclass(name = "Amplitude", frozen)]
struct PyAmplitude {
    inner: AWAmplitude,
}

#[pymethods]
impl PyAmplitude {
    #[new]
    #[pyo3(signature = (a, squeeze = None))]
    fn new(a: Rows, squeeze: Option<PyRef<'_, PyTriple>>) -> PyResult<Self> {
        let t = squeeze.map(|t| t.inner.clone());
        Ok(Self { inner: make_amplitude(&to_mat(a)?, t).map_err(err)? })
    }

    #[getter]
    fn sigma(&self) -> Rows {
        from_mat(&self.inner.sigma)
    }

    #[getter]
    fn gauge_invariant(&self) -> bool {
        self.inner.is_gauge_invariant()
    }

    /// `‖Σι(x)‖²`.
    fn covariance(&self, x: Vec<Complex64>) -> f64 {
        self.inner.covariance(&to_vec(x))
    }
}

/// `(Y^c, ‖Y^c‖)` for `Y` from `h₁` into `h ⊗ h₂`.
#[pyfunction]
fn partial_conj(y: Rows, h: usize, h1: usize, h2: usize) -> PyResult<(Rows, f64)> {
    let (yc, n) = partial_conjugate(&to_mat(y)?, ConjDims::new(h, h1, h2)).map_err(err)?;
    Ok((from_mat(&yc), n))
}

/// Boson Fock space over `C^d` truncated at total occupation `cutoff`.
#[pyclass(name = "FockSpace", frozen)]
struct PyFock {
    inner: FockSpace,
}

#[pymethods]
impl PyFock {
    #[new]
    fn new(dim_one: usize, cutoff: usize) -> Self {
        Self { inner: FockSpace::new(dim_one, cutoff) }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn exponential_vector(&self, x: Vec<Complex64>) -> Vec<Complex64> {
        from_vec(&self.inner.exponential_vector(&to_vec(x)))
    }

    /// Truncated Weyl operator and the norm bound on what truncation discards.
    #[pyo3(signature = (x, tol = 1e-10))]
    fn weyl(&self, x: Vec<Complex64>, tol: f64) -> (Rows, f64) {
        let w = weyl(&self.inner, &to_vec(x), tol);
        (from_mat(&w.matrix), w.tail_bound)
    }
}

/// System, particle and interaction data of a repeated-interaction walk.
#[pyclass(name = "WalkModel", frozen)]
struct PyWalk {
    model: WalkModel,
    gns: GNSModel,
    tol: f64,
}

impl PyWalk {
    fn wrap(model: WalkModel, tol: f64) -> PyResult<Self> {
        let gns = gns_build(&model.rho, tol).map_err(err)?;
        Ok(Self { model, gns, tol })
    }

    fn limit_tol(&self) -> f64 {
        self.tol.max(1e-12) * qfwalk::linalg::op_norm(&self.model.h_i).max(1.0)
    }
}

#[pymethods]
impl PyWalk {
    #[new]
    #[pyo3(signature = (rho, h_s, h_p, h_i, tol = 1e-10))]
    fn new(rho: Rows, h_s: Rows, h_p: Rows, h_i: Rows, tol: f64) -> PyResult<Self> {
        let model = WalkModel::new(to_mat(rho)?, to_mat(h_s)?, to_mat(h_p)?, to_mat(h_i)?, tol).map_err(err)?;
        Self::wrap(model, tol)
    }

    #[staticmethod]
    #[pyo3(signature = (gamma0 = 0.8, system_dim = 2, coupling = 1.0, omega_s = 1.0, omega_p = 1.0))]
    fn thermal_qubit(gamma0: f64, system_dim: usize, coupling: f64, omega_s: f64, omega_p: f64) -> PyResult<Self> {
        let model = WalkModel::thermal_qubit(gamma0, system_dim, coupling, omega_s, omega_p).map_err(err)?;
        Self::wrap(model, 1e-10)
    }

    #[getter]
    fn dim_h(&self) -> usize {
        self.model.dim_h
    }

    #[getter]
    fn dim_noise(&self) -> usize {
        self.gns.dim_noise()
    }

    /// Diagonal of `S(ρ)` in the noise basis.
    fn s_values(&self) -> Vec<f64> {
        self.gns.s_values()
    }

    /// Summary of the quasifree limit generator as a dict.
    fn limit<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let l = limit_generator(&self.model, &self.gns, self.limit_tol()).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("quasifree_residual", l.quasifree_residual)?;
        d.set_item("dissipation_residual", l.dissipation_residual)?;
        d.set_item("independence_margin", l.independence_margin)?;
        d.set_item("unique", l.unique)?;
        d.set_item("L", from_mat(&l.qf.l))?;
        Ok(d)
    }

    /// `(rows, slope)` with rows `(n, tau, abs_error, ratio)`, against the limit at time `horizon`.
    #[pyo3(signature = (n_list, horizon = 1.0, seed = qfwalk::verify::DEFAULT_SEED))]
    fn converge(
        &self,
        py: Python<'_>,
        n_list: Vec<usize>,
        horizon: f64,
        seed: u64,
    ) -> PyResult<(ConvergenceRows, f64)> {
        let study = py
            .detach(|| {
                let l = limit_generator(&self.model, &self.gns, self.limit_tol())?;
                let t = default_test_data(self.gns.dim_noise(), self.model.dim_h, horizon, seed);
                convergence_study(&self.model, &self.gns, &l, &t.f, &t.g, &t.u, &t.v, horizon, &n_list)
            })
            .map_err(err)?;
        let rows = study.rows.iter().map(|r| (r.n, r.tau, r.abs_error, r.ratio)).collect();
        Ok((rows, study.slope))
    }
}

/// Run a CLI mode on a JSON configuration; returns `(exit_code, report, csv)`.
#[pyfunction]
#[pyo3(signature = (mode, config = "{}", suite = "all"))]
fn run(py: Python<'_>, mode: &str, config: &str, suite: &str) -> PyResult<(i32, String, Option<String>)> {
    let mode = match mode {
        "verify" => Mode::Verify,
        "converge" => Mode::Converge,
        "dilate" => Mode::Dilate,
        "uniqueness" => Mode::Uniqueness,
        other => return Err(PyValueError::new_err(format!("unknown mode \"{other}\""))),
    };
    let suites = match suite {
        "all" => Vec::new(),
        s => vec![Suite::parse(s).ok_or_else(|| PyValueError::new_err(format!("unknown suite \"{s}\"")))?],
    };
    let cfg = parse_config(config).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let report = py.detach(|| run_suite(&cfg, mode, &suites));
    Ok((report.exit_code(), report.render(), report.csv))
}

#[pymodule]
fn qfwalk_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTriple>()?;
    m.add_class::<PyAmplitude>()?;
    m.add_class::<PyFock>()?;
    m.add_class::<PyWalk>()?;
    m.add_function(wrap_pyfunction!(partial_conj, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let a = CMat::from_fn(2, 3, |i, j| Complex64::new(i as f64, j as f64));
        assert_eq!(to_mat(from_mat(&a)).unwrap(), a);
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = vec![vec![Complex64::new(1.0, 0.0)], vec![]];
        assert!(to_mat(rows).is_err());
    }
}
