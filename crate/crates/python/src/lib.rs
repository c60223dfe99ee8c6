//! Python module `pyselfoc`.

use pyo3::create_exception;
use pyo3::exceptions::{PyOverflowError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use selfoc::Error;

create_exception!(pyselfoc, CapReachedError, PyRuntimeError, "Mode cap hit before the requested mass was captured.");

fn to_py(e: Error) -> PyErr {
    let message = e.to_string();
    match e {
        Error::PartialSpectrum { .. } | Error::PartialTensor { .. } => CapReachedError::new_err(message),
        Error::NumericOverflow { .. } => PyOverflowError::new_err(message),
        Error::NoConvergence { .. } | Error::EmptyTensor => PyRuntimeError::new_err(message),
        _ => PyValueError::new_err(message),
    }
}

#[pyclass(name = "OscillatorFrame", frozen, from_py_object)]
#[derive(Clone)]
struct Frame(selfoc::OscillatorFrame);

#[pymethods]
impl Frame {
    #[new]
    #[pyo3(signature = (omega, center = 0.0))]
    fn new(omega: f64, center: f64) -> PyResult<Self> {
        selfoc::OscillatorFrame::new(omega, center).map(Frame).map_err(to_py)
    }

    #[getter]
    fn omega(&self) -> f64 {
        self.0.omega()
    }

    #[getter]
    fn center(&self) -> f64 {
        self.0.center()
    }

    #[getter]
    fn length(&self) -> f64 {
        self.0.length()
    }

    fn __repr__(&self) -> String {
        format!("OscillatorFrame(omega={}, center={})", self.0.omega(), self.0.center())
    }
}

#[pyclass(name = "Transition1D", frozen, from_py_object)]
#[derive(Clone)]
struct Transition(selfoc::Transition1D);

#[pymethods]
impl Transition {
    #[new]
    fn new(source: Frame, target: Frame, n: usize) -> PyResult<Self> {
        selfoc::Transition1D::new(source.0, target.0, n).map(Transition).map_err(to_py)
    }

    /// Dimensionless constructor: `ω = 1`, `ω' = ratio`, `d = √D`.
    #[staticmethod]
    #[pyo3(signature = (ratio, big_d, n = 0))]
    fn dimensionless(ratio: f64, big_d: f64, n: usize) -> PyResult<Self> {
        if !(big_d >= 0.0) {
            return Err(PyValueError::new_err(format!("big_d must be >= 0, got {big_d}")));
        }
        let target = selfoc::OscillatorFrame::new(ratio, big_d.sqrt()).map_err(to_py)?;
        let source = selfoc::OscillatorFrame::centered(1.0).map_err(to_py)?;
        Self::new(Frame(source), Frame(target), n)
    }

    #[getter]
    fn source(&self) -> Frame {
        Frame(self.0.source)
    }

    #[getter]
    fn target(&self) -> Frame {
        Frame(self.0.target)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n
    }
}

#[pyclass(name = "OverlapKernel", frozen)]
struct Kernel(selfoc::OverlapKernel);

#[pymethods]
impl Kernel {
    #[getter]
    fn r(&self) -> [[f64; 2]; 2] {
        self.0.r
    }

    #[getter]
    fn y(&self) -> [f64; 2] {
        self.0.y
    }

    #[getter]
    fn prefactor(&self) -> f64 {
        self.0.prefactor
    }

    #[getter]
    fn l(&self) -> f64 {
        self.0.l
    }

    #[getter]
    fn l_prime(&self) -> f64 {
        self.0.l_prime
    }
}

#[pyclass(name = "Spectrum", frozen)]
struct Spectrum {
    inner: selfoc::Spectrum,
    complete: bool,
}

#[pymethods]
impl Spectrum {
    #[getter]
    fn initial(&self) -> usize {
        self.inner.initial
    }

    #[getter]
    fn amplitudes(&self) -> Vec<f64> {
        self.inner.entries.iter().map(|e| e.amplitude).collect()
    }

    #[getter]
    fn probabilities(&self) -> Vec<f64> {
        self.inner.entries.iter().map(|e| e.probability).collect()
    }

    #[getter]
    fn captured_mass(&self) -> f64 {
        self.inner.captured_mass
    }

    #[getter]
    fn cutoff(&self) -> usize {
        self.inner.cutoff
    }

    /// False when the cap was reached first.
    #[getter]
    fn complete(&self) -> bool {
        self.complete
    }

    fn argmax(&self) -> Option<usize> {
        self.inner.argmax().map(|e| e.n_prime)
    }

    fn __len__(&self) -> usize {
        self.inner.entries.len()
    }
}

#[pyclass(name = "CouplingMatrix", frozen)]
struct Matrix(selfoc::CouplingMatrix);

#[pymethods]
impl Matrix {
    /// Rows `n = 0..=n_max`, each over `n' = 0..=n_prime_max`.
    #[getter]
    fn amplitudes(&self) -> Vec<Vec<f64>> {
        (0..=self.0.rows_max).map(|n| self.0.row(n).to_vec()).collect()
    }

    #[getter]
    fn orthogonality_defect(&self) -> f64 {
        self.0.orthogonality_defect
    }

    fn get(&self, n: usize, n_prime: usize) -> PyResult<f64> {
        if n > self.0.rows_max || n_prime > self.0.cols_max {
            return Err(PyValueError::new_err(format!("({n}, {n_prime}) is outside the matrix")));
        }
        Ok(self.0.get(n, n_prime))
    }
}

#[pyclass(name = "QuadratureRule", frozen)]
struct Rule(selfoc::QuadratureRule);

#[pymethods]
impl Rule {
    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn nodes(&self) -> Vec<f64> {
        self.0.nodes().to_vec()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.0.weights().to_vec()
    }

    /// `w·exp(t²)`, representable at every order.
    #[getter]
    fn scaled_weights(&self) -> Vec<f64> {
        self.0.scaled_weights().to_vec()
    }
}

#[pyclass(name = "Waveguide2D", frozen, from_py_object)]
#[derive(Clone)]
struct Guide(selfoc::Waveguide2D);

#[pymethods]
impl Guide {
    #[new]
    #[pyo3(signature = (omega_x, omega_y, gamma = 0.0, center = (0.0, 0.0)))]
    fn new(omega_x: f64, omega_y: f64, gamma: f64, center: (f64, f64)) -> PyResult<Self> {
        selfoc::Waveguide2D::new(omega_x, omega_y, gamma, center).map(Guide).map_err(to_py)
    }

    #[getter]
    fn omega_x(&self) -> f64 {
        self.0.omega_x()
    }

    #[getter]
    fn omega_y(&self) -> f64 {
        self.0.omega_y()
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma()
    }

    #[getter]
    fn center(&self) -> (f64, f64) {
        self.0.center()
    }
}

#[pyclass(name = "NormalModes", frozen)]
struct Modes(selfoc::NormalModes);

#[pymethods]
impl Modes {
    #[getter]
    fn theta(&self) -> f64 {
        self.0.theta
    }

    #[getter]
    fn omega_u(&self) -> f64 {
        self.0.omega_u
    }

    #[getter]
    fn omega_v(&self) -> f64 {
        self.0.omega_v
    }

    #[getter]
    fn omega_plus(&self) -> f64 {
        self.0.omega_plus()
    }

    #[getter]
    fn omega_minus(&self) -> f64 {
        self.0.omega_minus()
    }

    fn rotation(&self) -> [[f64; 2]; 2] {
        self.0.rotation()
    }
}

#[pyclass(name = "CouplingTensor", frozen)]
struct Tensor {
    inner: selfoc::CouplingTensor,
    complete: bool,
}

#[pymethods]
impl Tensor {
    #[getter]
    fn shape(&self) -> (usize, usize) {
        self.inner.shape()
    }

    /// Row-major nested lists over `(n'_x, n'_y)`.
    #[getter]
    fn amplitudes(&self) -> Vec<Vec<f64>> {
        let (_, cols) = self.inner.shape();
        self.inner.values().chunks(cols).map(<[f64]>::to_vec).collect()
    }

    #[getter]
    fn captured_mass(&self) -> f64 {
        self.inner.captured_mass
    }

    #[getter]
    fn complete(&self) -> bool {
        self.complete
    }

    fn argmax(&self) -> Option<(usize, usize)> {
        self.inner.argmax().map(|(ij, _)| ij)
    }

    fn schmidt(&self) -> PyResult<Schmidt> {
        selfoc::schmidt_report(&self.inner).map(Schmidt).map_err(to_py)
    }
}

#[pyclass(name = "SchmidtReport", frozen)]
struct Schmidt(selfoc::SchmidtReport);

#[pymethods]
impl Schmidt {
    #[getter]
    fn singular_values(&self) -> Vec<f64> {
        self.0.singular_values.clone()
    }

    #[getter]
    fn entropy(&self) -> f64 {
        self.0.entropy
    }

    #[pyo3(signature = (tol = 1e-10))]
    fn rank(&self, tol: f64) -> usize {
        self.0.rank(tol)
    }
}

#[pyfunction]
fn hermite_phys(n: usize, xi: f64) -> PyResult<f64> {
    selfoc::hermite_phys(n, xi).map_err(to_py)
}

#[pyfunction]
fn oscillator_psi(x: f64, n: usize, frame: Frame) -> PyResult<f64> {
    selfoc::oscillator_psi(x, n, &frame.0).map_err(to_py)
}

#[pyfunction]
fn build_kernel(source: Frame, target: Frame) -> Kernel {
    Kernel(selfoc::build_kernel(&source.0, &target.0))
}

#[pyfunction]
fn gauss_hermite(order: usize) -> PyResult<Rule> {
    selfoc::gauss_hermite(order).map(Rule).map_err(to_py)
}

#[pyfunction]
fn overlap_closed(t: Transition, n_prime: usize) -> PyResult<f64> {
    selfoc::overlap_closed(&t.0, n_prime).map_err(to_py)
}

#[pyfunction]
fn overlap_quad(t: Transition, n_prime: usize) -> PyResult<f64> {
    selfoc::overlap_quad(&t.0, n_prime).map_err(to_py)
}

/// With `allow_partial`, a cap hit returns the partial spectrum instead of
/// raising `CapReachedError`.
#[pyfunction]
#[pyo3(signature = (t, epsilon = selfoc::DEFAULT_EPSILON, cap = selfoc::MAX_MODE_INDEX, allow_partial = false))]
fn spectrum1d(t: Transition, epsilon: f64, cap: usize, allow_partial: bool) -> PyResult<Spectrum> {
    match selfoc::spectrum1d(&t.0, epsilon, cap) {
        Ok(inner) => Ok(Spectrum { inner, complete: true }),
        Err(Error::PartialSpectrum { spectrum, .. }) if allow_partial => Ok(Spectrum {
            inner: *spectrum,
            complete: false,
        }),
        Err(e) => Err(to_py(e)),
    }
}

#[pyfunction]
#[pyo3(signature = (source, target, n_max = 20, n_prime_max = 400))]
fn coupling_matrix(source: Frame, target: Frame, n_max: usize, n_prime_max: usize) -> PyResult<Matrix> {
    selfoc::coupling_matrix(&source.0, &target.0, n_max, n_prime_max).map(Matrix).map_err(to_py)
}

#[pyfunction]
fn fc_estimate(t: Transition) -> usize {
    selfoc::fc_estimate(&t.0)
}

#[pyfunction]
fn normal_modes(w: Guide) -> PyResult<Modes> {
    selfoc::normal_modes(&w.0).map(Modes).map_err(to_py)
}

fn tensor(r: selfoc::Result<selfoc::CouplingTensor>, allow_partial: bool) -> PyResult<Tensor> {
    match r {
        Ok(inner) => Ok(Tensor { inner, complete: true }),
        Err(Error::PartialTensor { tensor, .. }) if allow_partial => Ok(Tensor {
            inner: *tensor,
            complete: false,
        }),
        Err(e) => Err(to_py(e)),
    }
}

#[pyfunction]
#[pyo3(signature = (source, target, nx = 0, ny = 0, epsilon = selfoc::DEFAULT_EPSILON, cap = selfoc::MAX_MODE_INDEX, allow_partial = false))]
fn spectrum2d_separable(
    source: Guide,
    target: Guide,
    nx: usize,
    ny: usize,
    epsilon: f64,
    cap: usize,
    allow_partial: bool,
) -> PyResult<Tensor> {
    tensor(selfoc::spectrum2d_separable(&source.0, &target.0, nx, ny, epsilon, cap), allow_partial)
}

#[pyfunction]
#[pyo3(signature = (source, target, nx = 0, ny = 0, epsilon = selfoc::DEFAULT_EPSILON, cap = selfoc::MAX_MODE_INDEX, allow_partial = false))]
fn coupled_tensor(
    source: Guide,
    target: Guide,
    nx: usize,
    ny: usize,
    epsilon: f64,
    cap: usize,
    allow_partial: bool,
) -> PyResult<Tensor> {
    tensor(selfoc::coupled_tensor(&source.0, &target.0, nx, ny, epsilon, cap), allow_partial)
}

#[pyfunction]
fn overlap_coupled(source: Guide, target: Guide, initial: (usize, usize), last: (usize, usize)) -> PyResult<f64> {
    selfoc::overlap_coupled(&source.0, &target.0, initial, last).map_err(to_py)
}

#[pymodule]
fn pyselfoc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CapReachedError", m.py().get_type::<CapReachedError>())?;
    m.add("MAX_MODE_INDEX", selfoc::MAX_MODE_INDEX)?;
    m.add_class::<Frame>()?;
    m.add_class::<Transition>()?;
    m.add_class::<Kernel>()?;
    m.add_class::<Spectrum>()?;
    m.add_class::<Matrix>()?;
    m.add_class::<Rule>()?;
    m.add_class::<Guide>()?;
    m.add_class::<Modes>()?;
    m.add_class::<Tensor>()?;
    m.add_class::<Schmidt>()?;
    m.add_function(wrap_pyfunction!(hermite_phys, m)?)?;
    m.add_function(wrap_pyfunction!(oscillator_psi, m)?)?;
    m.add_function(wrap_pyfunction!(build_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_hermite, m)?)?;
    m.add_function(wrap_pyfunction!(overlap_closed, m)?)?;
    m.add_function(wrap_pyfunction!(overlap_quad, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum1d, m)?)?;
    m.add_function(wrap_pyfunction!(coupling_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(fc_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(normal_modes, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum2d_separable, m)?)?;
    m.add_function(wrap_pyfunction!(coupled_tensor, m)?)?;
    m.add_function(wrap_pyfunction!(overlap_coupled, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn module_round_trip() {
        Python::initialize();
        Python::attach(|py| {
            let m = PyModule::new(py, "pyselfoc").unwrap();
            pyselfoc(&m).unwrap();
            let frame = m.getattr("OscillatorFrame").unwrap();
            let source = frame.call1((1.0,)).unwrap();
            let target = frame.call1((3.0, 3.0)).unwrap();
            let t = m.getattr("Transition1D").unwrap().call1((source, target, 0)).unwrap();
            let s = m.getattr("spectrum1d").unwrap().call1((t.clone(),)).unwrap();
            let mass: f64 = s.getattr("captured_mass").unwrap().extract().unwrap();
            assert!(mass >= 1.0 - 1e-8);
            let fc: usize = m.getattr("fc_estimate").unwrap().call1((t,)).unwrap().extract().unwrap();
            assert_eq!(fc, 13);

            let bad = frame.call1((-1.0,)).unwrap_err();
            assert!(bad.is_instance_of::<PyValueError>(py));
        });
    }

    #[test]
    fn cap_hit_raises_or_returns_partial() {
        Python::initialize();
        Python::attach(|py| {
            let t = Transition::dimensionless(3.0, 9.0, 0).unwrap();
            let err = spectrum1d(t.clone(), 1e-8, 5, false).err().unwrap();
            assert!(err.is_instance_of::<CapReachedError>(py));
            let partial = spectrum1d(t, 1e-8, 5, true).unwrap();
            assert!(!partial.complete && partial.inner.entries.len() == 6);
        });
    }
}
