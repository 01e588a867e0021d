//! Python bindings for `nmrsp`, importable as `nmrsp_py`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use nmrsp::channels::{apply_amplitude_damping, apply_dephasing};
use nmrsp::decoherence;
use nmrsp::experiment::{self, ConfigOverrides, ExperimentConfig, Figure};
use nmrsp::measures::{blp_search, divisibility_measure, entanglement_measure, mutual_info_measure, SearchOptions};
use nmrsp::rsp::{bell_diagonal, correlation_matrix, rsp_fidelity};
use nmrsp::{BellDiagonalParams, ChannelFamily, MeasureKind, TimeWindow};

fn py_err(e: nmrsp::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Two-peak Gaussian dephasing spectrum.
#[pyclass(name = "DephasingSpec", frozen)]
#[derive(Clone)]
struct PyDephasingSpec(decoherence::DephasingSpec);

#[pymethods]
impl PyDephasingSpec {
    #[new]
    #[pyo3(signature = (theta, delta_omega = 10.0, sigma = 1.0))]
    fn new(theta: f64, delta_omega: f64, sigma: f64) -> PyResult<Self> {
        decoherence::DephasingSpec::with_separation(theta, delta_omega, sigma).map(Self).map_err(py_err)
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.0.theta
    }

    #[getter]
    fn delta_omega(&self) -> f64 {
        self.0.delta_omega()
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.0.sigma
    }

    fn kappa(&self, tau: f64) -> Complex64 {
        decoherence::kappa_complex(&self.0, tau)
    }

    fn kappa_abs(&self, tau: f64) -> f64 {
        decoherence::kappa_abs(&self.0, tau)
    }

    /// Closed-form backflow for a control time in `(pi/dw, 2pi/dw]`.
    fn analytic_blp(&self, tau_c: f64) -> PyResult<f64> {
        decoherence::analytic_blp_dephasing(&self.0, tau_c).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("DephasingSpec(theta={}, delta_omega={}, sigma={})", self.0.theta, self.0.delta_omega(), self.0.sigma)
    }
}

/// Resonant Lorentzian amplitude-damping reservoir.
#[pyclass(name = "LorentzSpec", frozen)]
#[derive(Clone)]
struct PyLorentzSpec(decoherence::LorentzSpec);

#[pymethods]
impl PyLorentzSpec {
    #[new]
    #[pyo3(signature = (ratio, gamma0 = 1.0))]
    fn new(ratio: f64, gamma0: f64) -> PyResult<Self> {
        decoherence::LorentzSpec::new(gamma0, ratio * gamma0).map(Self).map_err(py_err)
    }

    #[getter]
    fn ratio(&self) -> f64 {
        self.0.ratio()
    }

    #[getter]
    fn gamma0(&self) -> f64 {
        self.0.gamma0
    }

    fn chi(&self, t: f64) -> f64 {
        decoherence::chi(&self.0, t)
    }

    fn control_time(&self) -> PyResult<f64> {
        self.0.control_time().map_err(py_err)
    }

    fn revival_amplitude(&self) -> PyResult<f64> {
        self.0.revival_amplitude().map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("LorentzSpec(ratio={}, gamma0={})", self.0.ratio(), self.0.gamma0)
    }
}

fn family(model: &Bound<'_, PyAny>) -> PyResult<ChannelFamily> {
    if let Ok(spec) = model.downcast::<PyDephasingSpec>() {
        return Ok(ChannelFamily::Dephasing(spec.get().0));
    }
    if let Ok(spec) = model.downcast::<PyLorentzSpec>() {
        return Ok(ChannelFamily::AmplitudeDamping(spec.get().0));
    }
    Err(PyValueError::new_err("model must be a DephasingSpec or a LorentzSpec"))
}

/// Critical angles `(theta1, theta2)` bounding the non-Markovian regime.
#[pyfunction]
fn transition_thetas(delta_omega: f64, sigma: f64, tau_c: f64) -> PyResult<(f64, f64)> {
    decoherence::transition_thetas(delta_omega, sigma, tau_c).map_err(py_err)
}

/// Remote state preparation fidelity of a Bell-diagonal resource, optionally
/// after dephasing (`kappa`) or amplitude damping (`chi`) of the first qubit.
#[pyfunction]
#[pyo3(signature = (c, kappa = None, chi = None))]
fn fidelity(c: [f64; 3], kappa: Option<Complex64>, chi: Option<f64>) -> PyResult<f64> {
    let rho = bell_diagonal(&BellDiagonalParams::new(c[0], c[1], c[2]).map_err(py_err)?);
    let evolved = match (kappa, chi) {
        (Some(k), None) => apply_dephasing(&rho, k).map_err(py_err)?,
        (None, Some(x)) => apply_amplitude_damping(&rho, x).map_err(py_err)?,
        (None, None) => rho,
        (Some(_), Some(_)) => return Err(PyValueError::new_err("pass kappa or chi, not both")),
    };
    Ok(rsp_fidelity(&correlation_matrix(&evolved)))
}

/// Evaluates a non-Markovianity measure on `[start, end]`.
///
/// Returns `(value, divergence_at)`; `value` is `inf` with the time of the
/// offending zero when the divisibility measure diverges.
#[pyfunction]
#[pyo3(signature = (kind, model, start, end, grid_size = 4001, n_pairs = 0, seed = 42))]
fn measure(
    py: Python<'_>,
    kind: &str,
    model: &Bound<'_, PyAny>,
    start: f64,
    end: f64,
    grid_size: usize,
    n_pairs: usize,
    seed: u64,
) -> PyResult<(f64, Option<f64>)> {
    let kind: MeasureKind = kind.parse().map_err(py_err)?;
    let family = family(model)?;
    let window = TimeWindow::new(start, end).map_err(py_err)?;
    let report = py
        .allow_threads(|| match kind {
            MeasureKind::Blp => {
                let opts = SearchOptions { n_pairs, grid_size, seed, ..Default::default() };
                blp_search(&family, window, &opts).map(|r| r.report)
            }
            MeasureKind::Divisibility => divisibility_measure(&family, window, grid_size),
            MeasureKind::Entanglement => entanglement_measure(&family, window, grid_size),
            MeasureKind::MutualInformation => mutual_info_measure(&family, window, grid_size),
        })
        .map_err(py_err)?;
    Ok((report.value, report.divergence_at))
}

/// Runs a figure and returns `(header, rows)`.
///
/// `config` is an optional TOML document with the same schema as the CLI's
/// `--config` file; its `figure` key, when present, must match.
#[pyfunction]
#[pyo3(signature = (figure, config = None))]
fn run_figure(py: Python<'_>, figure: &str, config: Option<&str>) -> PyResult<(Vec<String>, Vec<Vec<f64>>)> {
    let figure: Figure = figure.parse().map_err(py_err)?;
    let mut overrides = match config {
        Some(text) => ConfigOverrides::from_toml_str(text).map_err(py_err)?,
        None => ConfigOverrides::default(),
    };
    if overrides.figure.is_some_and(|f| f != figure) {
        return Err(PyValueError::new_err(format!("config is for {}, not {figure}", overrides.figure.unwrap())));
    }
    overrides.figure = Some(figure);
    let config = ExperimentConfig::resolve(overrides).map_err(py_err)?;
    let table = py.allow_threads(|| experiment::run(&config)).map_err(py_err)?;
    Ok((table.header().to_vec(), table.rows().to_vec()))
}

#[pymodule]
fn nmrsp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", nmrsp::VERSION)?;
    m.add_class::<PyDephasingSpec>()?;
    m.add_class::<PyLorentzSpec>()?;
    m.add_function(wrap_pyfunction!(transition_thetas, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(measure, m)?)?;
    m.add_function(wrap_pyfunction!(run_figure, m)?)?;
    Ok(())
}
