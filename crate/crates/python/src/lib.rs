//! Python bindings for `focus-scatter`.
//!
//! Angles are in radians, positions are in the length unit of the beam
//! (wavelengths with the default `k = 2pi`).

use focus_scatter::multipole::{self, MultipoleCoefficients};
use focus_scatter::scattering::{self, Oscillator, OscillatorKind, SweepConfig};
use focus_scatter::{incident_power, make_spectrum, BeamParams, Error, FocalField};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(focus_scatter_py, AccuracyError, PyRuntimeError);

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Accuracy(_) => AccuracyError::new_err(err.to_string()),
        Error::DegenerateBeam(_) => PyRuntimeError::new_err(err.to_string()),
        Error::InvalidArgument(_) | Error::Domain(_) => PyValueError::new_err(err.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py)
}

type Triple = (Complex64, Complex64, Complex64);

fn triple(f: focus_scatter::ComplexField3) -> Triple {
    (f.0[0], f.0[1], f.0[2])
}

/// A focused beam: `Beam("px", alpha)` or `Beam("fpw", alpha, k=..., amplitude=...)`.
#[pyclass(name = "Beam", frozen, module = "focus_scatter_py")]
struct Beam {
    field: FocalField,
}

#[pymethods]
impl Beam {
    #[new]
    #[pyo3(signature = (kind, alpha, k = 2.0 * std::f64::consts::PI, amplitude = 1.0))]
    fn new(kind: &str, alpha: f64, k: f64, amplitude: f64) -> PyResult<Self> {
        let params = BeamParams::with_scale(parse(kind)?, alpha, k, amplitude).map_err(to_py)?;
        let spectrum = make_spectrum(params).map_err(to_py)?;
        Ok(Self {
            field: FocalField::new(spectrum),
        })
    }

    #[getter]
    fn kind(&self) -> String {
        self.field.spectrum().kind().to_string()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.field.spectrum().alpha()
    }

    #[getter]
    fn k(&self) -> f64 {
        self.field.k()
    }

    #[getter]
    fn wavelength(&self) -> f64 {
        self.field.spectrum().params().wavelength()
    }

    /// Angular spectrum `(A_theta, A_phi)` in the focusing frame.
    fn spectrum(&self, theta: f64, phi: f64) -> (Complex64, Complex64) {
        let a = self.field.spectrum().evaluate(theta, phi);
        (a.theta, a.phi)
    }

    fn electric(&self, r: [f64; 3]) -> PyResult<Triple> {
        self.field.electric(&r).map(triple).map_err(to_py)
    }

    fn magnetic(&self, r: [f64; 3]) -> PyResult<Triple> {
        self.field.magnetic(&r).map(triple).map_err(to_py)
    }

    fn poynting_z(&self, r: [f64; 3]) -> PyResult<f64> {
        self.field.poynting_z(&r).map_err(to_py)
    }

    /// Focal-plane maps on an `n x n` grid of half-width `extent` (units of
    /// `1/k`), returned as a dict of flat row-major lists.
    fn focal_plane_map<'py>(&self, py: Python<'py>, extent: f64, n: usize) -> PyResult<Bound<'py, PyDict>> {
        let grid = py.detach(|| self.field.focal_plane_map(extent, n)).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("axis", &grid.axis)?;
        d.set_item("s_z", grid.s_z_normalized())?;
        d.set_item("ex_sq", grid.ex_sq_normalized())?;
        d.set_item("ey_sq", &grid.ey_sq)?;
        d.set_item("ez_sq", &grid.ez_sq)?;
        d.set_item("e_sq", &grid.e_sq)?;
        d.set_item("ex_phase", &grid.ex_phase)?;
        d.set_item("s_z_origin", grid.s_z_origin)?;
        d.set_item("ex_sq_origin", grid.ex_sq_origin)?;
        Ok(d)
    }

    /// Phase of `E_x` on the optical axis at the given `kz`; `None` on zeros.
    fn axial_phase(&self, kz: Vec<f64>) -> PyResult<Vec<Option<f64>>> {
        self.field.axial_phase(&kz).map_err(to_py)
    }

    #[pyo3(signature = (k_rho_max, n_rho = 400, n_phi = 8))]
    fn focal_plane_power(&self, py: Python<'_>, k_rho_max: f64, n_rho: usize, n_phi: usize) -> PyResult<f64> {
        py.detach(|| self.field.focal_plane_power(k_rho_max, n_rho, n_phi))
            .map_err(to_py)
    }

    #[pyo3(signature = (n_theta = 32, n_phi = 16))]
    fn incident_power(&self, n_theta: usize, n_phi: usize) -> PyResult<f64> {
        incident_power(self.field.spectrum(), n_theta, n_phi).map_err(to_py)
    }

    fn effective_area(&self) -> PyResult<f64> {
        scattering::effective_area_numeric(self.field.spectrum()).map_err(to_py)
    }

    #[pyo3(signature = (ell_max = 40, n_theta = None, n_phi = 32))]
    fn coefficients(&self, ell_max: usize, n_theta: Option<usize>, n_phi: usize) -> PyResult<Coefficients> {
        let n_theta = n_theta.unwrap_or((2 * ell_max).max(64));
        multipole::expansion_coefficients(self.field.spectrum(), ell_max, n_theta, n_phi)
            .map(|inner| Coefficients { inner })
            .map_err(to_py)
    }

    /// Scattering summary for a classical oscillator (or a TLS when `rabi`
    /// is given) at the focus.
    #[pyo3(signature = (detuning = 0.0, gamma = 1.0, rabi = None))]
    fn summary<'py>(
        &self,
        py: Python<'py>,
        detuning: f64,
        gamma: f64,
        rabi: Option<f64>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let osc = oscillator(gamma, detuning, rabi)?;
        let s = scattering::summarize(&osc, self.field.spectrum()).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("sigma", s.sigma)?;
        d.set_item("area_eff", s.area_eff)?;
        d.set_item("k", s.k)?;
        d.set_item("t", s.t)?;
        d.set_item("r", s.r)?;
        d.set_item("phi", s.phi)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Beam('{}', alpha={}, k={})", self.kind(), self.alpha(), self.k())
    }
}

fn oscillator(gamma: f64, detuning: f64, rabi: Option<f64>) -> PyResult<Oscillator> {
    match rabi {
        Some(rabi) => Oscillator::tls(gamma, detuning, rabi),
        None => Oscillator::classical(gamma, detuning),
    }
    .map_err(to_py)
}

/// Multipole coefficients `A_{e,1,l}` and `B_{o,1,l}` for `l = 1..=ell_max`.
#[pyclass(name = "Coefficients", frozen, module = "focus_scatter_py")]
struct Coefficients {
    inner: MultipoleCoefficients,
}

#[pymethods]
impl Coefficients {
    #[getter]
    fn ell_max(&self) -> usize {
        self.inner.ell_max()
    }

    #[getter]
    fn a_e(&self) -> Vec<Complex64> {
        self.inner.a_e_values().to_vec()
    }

    #[getter]
    fn b_o(&self) -> Vec<Complex64> {
        self.inner.b_o_values().to_vec()
    }

    fn truncated(&self, ell_max: usize) -> PyResult<Coefficients> {
        self.inner
            .truncated(ell_max)
            .map(|inner| Coefficients { inner })
            .map_err(to_py)
    }

    /// `(E, H)` from the series; raises `AccuracyError` outside its range.
    fn reconstruct_field(&self, r: [f64; 3]) -> PyResult<(Triple, Triple)> {
        let (e, h) = multipole::reconstruct_field(&self.inner, &r).map_err(to_py)?;
        Ok((triple(e), triple(h)))
    }

    fn reconstruct_spectrum(&self, theta: f64, phi: f64) -> PyResult<(Complex64, Complex64)> {
        let a = multipole::reconstruct_spectrum(&self.inner, theta, phi).map_err(to_py)?;
        Ok((a.theta, a.phi))
    }

    fn __len__(&self) -> usize {
        self.inner.ell_max()
    }
}

#[pyfunction]
#[pyo3(signature = (ell_max, k = 2.0 * std::f64::consts::PI, e0 = 1.0))]
fn plane_wave_coefficients(ell_max: usize, k: f64, e0: f64) -> PyResult<Coefficients> {
    multipole::plane_wave_coefficients(ell_max, k, e0)
        .map(|inner| Coefficients { inner })
        .map_err(to_py)
}

/// `A_{e,1,1} / (f k E_0)` in closed form.
#[pyfunction]
fn a11(kind: &str, alpha: f64) -> PyResult<Complex64> {
    multipole::a11_analytic(parse(kind)?, alpha).map_err(to_py)
}

#[pyfunction]
fn transmittance_px(alpha: f64, beta: f64) -> PyResult<f64> {
    scattering::transmittance_px(alpha, beta).map_err(to_py)
}

#[pyfunction]
fn phase_shift(kind: &str, alpha: f64, delta_over_gamma: f64) -> PyResult<f64> {
    scattering::phase_shift(parse(kind)?, alpha, delta_over_gamma).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (wavelength = 1.0, detuning = 0.0, gamma = 1.0, rabi = None))]
fn cross_section(wavelength: f64, detuning: f64, gamma: f64, rabi: Option<f64>) -> PyResult<f64> {
    scattering::cross_section(&oscillator(gamma, detuning, rabi)?, wavelength).map_err(to_py)
}

/// Detuning sweep; one dict per detuning.
#[pyfunction]
#[pyo3(signature = (
    kind, alpha, beta = None, oscillator = "classical", gamma = 1.0, rabi = 0.0,
    detuning_min = -5.0, detuning_max = 5.0, steps = 201,
))]
#[allow(clippy::too_many_arguments)]
fn sweep<'py>(
    py: Python<'py>,
    kind: &str,
    alpha: f64,
    beta: Option<f64>,
    oscillator: &str,
    gamma: f64,
    rabi: f64,
    detuning_min: f64,
    detuning_max: f64,
    steps: usize,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let mut config = SweepConfig::new(parse(kind)?, alpha, beta.unwrap_or(alpha));
    config.oscillator = parse::<OscillatorKind>(oscillator)?;
    config.gamma = gamma;
    config.rabi = rabi;
    config.detuning_min = detuning_min;
    config.detuning_max = detuning_max;
    config.steps = steps;
    let rows = py.detach(|| scattering::detuning_sweep(&config)).map_err(to_py)?;
    rows.iter()
        .map(|row| {
            let d = PyDict::new(py);
            d.set_item("detuning_over_gamma", row.detuning_over_gamma)?;
            d.set_item("sigma_ratio", row.sigma_ratio)?;
            d.set_item("scattering_ratio", row.scattering_ratio)?;
            d.set_item("transmittance", row.transmittance)?;
            d.set_item("reflectance", row.reflectance)?;
            d.set_item("phase", row.phase)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn focus_scatter_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("AccuracyError", m.py().get_type::<AccuracyError>())?;
    m.add_class::<Beam>()?;
    m.add_class::<Coefficients>()?;
    m.add_function(wrap_pyfunction!(plane_wave_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(a11, m)?)?;
    m.add_function(wrap_pyfunction!(transmittance_px, m)?)?;
    m.add_function(wrap_pyfunction!(phase_shift, m)?)?;
    m.add_function(wrap_pyfunction!(cross_section, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
