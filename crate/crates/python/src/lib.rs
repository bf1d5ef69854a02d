//! Python bindings. The extension module is `rmtlab._native`; the pure
//! Python package `rmtlab` re-exports it.

use std::path::PathBuf;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use rmtlab::ensemble::{make_partition, sample_matrix, scale_matrix};
use rmtlab::experiment::{self, ExperimentConfig, ExperimentKind};
use rmtlab::graphenergy;
use rmtlab::laws;
use rmtlab::spectral::{self, eigenvalues_sym};
use rmtlab::walks;
use rmtlab::{EnsembleSpec, EntryLaw, Error, PartitionSpec, Spectrum, SymmetricMatrix};

fn to_py(e: Error) -> PyErr {
    if e.is_config_error() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for rmtlab::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// Distribution of a single matrix entry.
#[pyclass(name = "Law", module = "rmtlab", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyLaw(EntryLaw);

#[pymethods]
impl PyLaw {
    #[staticmethod]
    fn zero() -> Self {
        PyLaw(EntryLaw::ConstantZero)
    }

    #[staticmethod]
    fn rademacher() -> Self {
        PyLaw(EntryLaw::Rademacher)
    }

    #[staticmethod]
    fn bernoulli(p: f64) -> PyResult<Self> {
        let law = EntryLaw::Bernoulli { p };
        law.validate().py()?;
        Ok(PyLaw(law))
    }

    /// `a` with probability `q`, otherwise `b`.
    #[staticmethod]
    fn two_point(a: f64, b: f64, q: f64) -> PyResult<Self> {
        let law = EntryLaw::TwoPoint { a, b, q };
        law.validate().py()?;
        Ok(PyLaw(law))
    }

    #[staticmethod]
    fn uniform(lo: f64, hi: f64) -> PyResult<Self> {
        let law = EntryLaw::UniformInterval { lo, hi };
        law.validate().py()?;
        Ok(PyLaw(law))
    }

    #[getter]
    fn mean(&self) -> f64 {
        self.0.mean()
    }

    #[getter]
    fn variance(&self) -> f64 {
        self.0.variance()
    }

    fn __repr__(&self) -> String {
        format!("Law({:?})", self.0)
    }
}

/// Block-partitioned symmetric random matrix ensemble.
#[pyclass(name = "Ensemble", module = "rmtlab", frozen)]
struct PyEnsemble(EnsembleSpec);

#[pymethods]
impl PyEnsemble {
    /// Without `fractions` or `part_size` the matrix has a single part.
    #[new]
    #[pyo3(signature = (n, law_intra, law_cross, fractions=None, part_size=None, seed=0))]
    fn new(
        n: usize,
        law_intra: &PyLaw,
        law_cross: &PyLaw,
        fractions: Option<Vec<f64>>,
        part_size: Option<usize>,
        seed: u64,
    ) -> PyResult<Self> {
        let partition = match (fractions, part_size) {
            (Some(_), Some(_)) => {
                return Err(PyValueError::new_err("give at most one of fractions and part_size"))
            }
            (Some(f), None) => make_partition(n, &f),
            (None, Some(s)) => PartitionSpec::uniform_parts(n, s),
            (None, None) => PartitionSpec::from_sizes(vec![n]),
        }
        .py()?;
        let spec = EnsembleSpec::new(partition, law_intra.0.clone(), law_cross.0.clone(), seed).py()?;
        Ok(PyEnsemble(spec))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn part_sizes(&self) -> Vec<usize> {
        self.0.partition.sizes().to_vec()
    }

    /// `A_n` as a list of rows.
    #[pyo3(signature = (replicate=0))]
    fn sample(&self, replicate: u64) -> Vec<Vec<f64>> {
        sample_matrix(&self.0, replicate).to_rows()
    }

    /// Sorted eigenvalues of `A_n / (2 sqrt n)`.
    #[pyo3(signature = (replicate=0))]
    fn eigenvalues(&self, py: Python<'_>, replicate: u64) -> PyResult<Vec<f64>> {
        let spec = self.0.clone();
        py.detach(move || eigenvalues_sym(&scale_matrix(&sample_matrix(&spec, replicate))))
            .py()
            .map(|s| s.eigs().to_vec())
    }

    fn predicted_radius(&self) -> Option<f64> {
        experiment::predicted_radius(&self.0)
    }

    /// Exact `E[n^{-1} tr B^k]` for small `n` as a `Fraction`, or a float
    /// when the value is irrational.
    fn exact_moment(&self, py: Python<'_>, k: usize) -> PyResult<Py<PyAny>> {
        let t = walks::exact_expected_trace_moment(&self.0, k).py()?;
        match t.exact() {
            Some(x) => Ok(x.into_pyobject(py)?.into_any().unbind()),
            None => Ok(t.to_f64().into_pyobject(py)?.into_any().unbind()),
        }
    }
}

fn spectrum(eigs: Vec<f64>) -> PyResult<Spectrum> {
    Spectrum::new(eigs).py()
}

/// Sorted eigenvalues of a symmetric matrix given as rows.
#[pyfunction]
fn eigenvalues(py: Python<'_>, rows: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
    let m = SymmetricMatrix::from_rows(&rows).py()?;
    py.detach(move || eigenvalues_sym(&m)).py().map(|s| s.eigs().to_vec())
}

#[pyfunction]
fn empirical_moment(eigs: Vec<f64>, k: u32) -> PyResult<f64> {
    Ok(spectral::empirical_moment(&spectrum(eigs)?, k))
}

#[pyfunction]
fn stieltjes(eigs: Vec<f64>, z: Complex64) -> PyResult<Complex64> {
    spectral::stieltjes_empirical(&spectrum(eigs)?, z).py()
}

/// Kolmogorov distance between the spectrum's ESD and a semicircle.
#[pyfunction]
fn ks_semicircle(eigs: Vec<f64>, radius: f64) -> PyResult<f64> {
    let law = laws::SemicircleLaw::new(radius).py()?;
    Ok(spectral::ks_distance(&spectral::esd(&spectrum(eigs)?), |x| law.cdf(x)))
}

#[pyfunction]
fn esd_sup_distance(a: Vec<f64>, b: Vec<f64>) -> PyResult<f64> {
    spectral::esd_sup_distance(&spectrum(a)?, &spectrum(b)?).py()
}

#[pyfunction]
fn semicircle_density(x: f64, radius: f64) -> PyResult<f64> {
    laws::semicircle_density(x, radius).py()
}

#[pyfunction]
fn semicircle_cdf(x: f64, radius: f64) -> PyResult<f64> {
    laws::semicircle_cdf(x, radius).py()
}

#[pyfunction]
fn semicircle_stieltjes(z: Complex64, radius: f64) -> PyResult<Complex64> {
    laws::semicircle_stieltjes(z, radius).py()
}

#[pyfunction]
fn mixing_radius(m: usize, sigma1_sq: f64, sigma2_sq: f64) -> PyResult<f64> {
    laws::mixing_radius(m, sigma1_sq, sigma2_sq).py()
}

#[pyfunction]
fn gamma_main(k: u32, m: usize, sigma1_sq: f64, sigma2_sq: f64) -> PyResult<f64> {
    laws::gamma_main(k, m, sigma1_sq, sigma2_sq).py()
}

#[pyfunction]
fn catalan(k: u32) -> BigUint {
    laws::catalan(k)
}

/// `g(v, k)`: canonical closed walks of length `k` on `v` labels whose
/// expected product can be nonzero.
#[pyfunction]
#[pyo3(signature = (k, v, zero_mean=true))]
fn good_shape_count(k: usize, v: usize, zero_mean: bool) -> PyResult<u64> {
    walks::good_shape_count(k, v, zero_mean).py()
}

#[pyfunction]
#[pyo3(signature = (v, k, n, zero_mean=true))]
fn count_good_walks(v: usize, k: usize, n: usize, zero_mean: bool) -> PyResult<BigUint> {
    walks::count_good_walks(v, k, n, zero_mean).py()
}

/// Shapes as label tuples, e.g. `(1, 2, 1, 3)`.
#[pyfunction]
fn enumerate_shapes(k: usize, v: usize) -> PyResult<Vec<Vec<u32>>> {
    let shapes = walks::enumerate_shapes(k, v).py()?;
    Ok(shapes.iter().map(|s| s.labels().iter().map(|&l| l as u32).collect()).collect())
}

/// Exact limit moment for mean-zero laws with the given part fractions.
#[pyfunction]
#[pyo3(signature = (fractions, sigma1_sq, sigma2_sq, k, zero_intra=false))]
fn limit_gamma_walks(
    fractions: Vec<BigRational>,
    sigma1_sq: BigRational,
    sigma2_sq: BigRational,
    k: u32,
    zero_intra: bool,
) -> PyResult<BigRational> {
    walks::limit_gamma_walks(&fractions, &sigma1_sq, &sigma2_sq, k, zero_intra).py()
}

#[pyfunction]
fn pseudo_char(t: f64, nuhat: f64, sigma: f64) -> PyResult<f64> {
    laws::pseudo_char(t, nuhat, sigma).py()
}

#[pyfunction]
fn find_negativity_witness(nuhat: f64, sigma: f64, t_max: f64) -> PyResult<Option<f64>> {
    laws::find_negativity_witness(nuhat, sigma, t_max).py()
}

/// Leading minors, minimum eigenvalue and PSD flag of the Hankel matrix
/// `(g[i + j])_{i, j <= k}`.
#[pyfunction]
fn hankel_report(g: Vec<f64>, k: usize) -> PyResult<(Vec<f64>, f64, bool)> {
    let seq = laws::MomentSequence::new(g, laws::Provenance::Empirical);
    let r = laws::hankel_report(&seq, k).py()?;
    Ok((r.leading_minors, r.min_eigenvalue, r.psd))
}

/// Energy of one random graph; multipartite host when `fractions` is given,
/// complete graph otherwise.
#[pyfunction]
#[pyo3(signature = (n, p, fractions=None, seed=0, replicate=0))]
fn graph_energy(
    py: Python<'_>,
    n: usize,
    p: f64,
    fractions: Option<Vec<f64>>,
    seed: u64,
    replicate: u64,
) -> PyResult<f64> {
    let partition = match fractions {
        Some(f) => make_partition(n, &f),
        None => PartitionSpec::singletons(n),
    }
    .py()?;
    py.detach(move || {
        let g = graphenergy::sample_graph(&partition, p, seed, replicate)?;
        graphenergy::graph_energy(&g)
    })
    .py()
}

#[pyfunction]
fn predicted_energy_gnp(n: usize, p: f64) -> PyResult<f64> {
    graphenergy::predicted_energy_gnp(n, p).py()
}

#[pyfunction]
fn predicted_energy_multipartite(n: usize, m: usize, p: f64) -> PyResult<f64> {
    graphenergy::predicted_energy_multipartite(n, m, p).py()
}

/// Runs an experiment from a JSON config and returns `report.json` as text.
#[pyfunction]
fn run_experiment(py: Python<'_>, kind: &str, config_json: &str, out: PathBuf) -> PyResult<String> {
    let kind = ExperimentKind::parse(kind)
        .ok_or_else(|| PyValueError::new_err(format!("unknown experiment kind `{kind}`")))?;
    let mut config = ExperimentConfig::from_json(config_json).py()?;
    if config.kind.is_some_and(|k| k != kind) {
        return Err(PyValueError::new_err("config `kind` disagrees with the requested kind"));
    }
    config.kind = Some(kind);
    let report = py.detach(move || experiment::run_experiment(&config, &out)).py()?;
    serde_json::to_string_pretty(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
pub fn _native(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyLaw>()?;
    m.add_class::<PyEnsemble>()?;
    m.add_function(wrap_pyfunction!(eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_moment, m)?)?;
    m.add_function(wrap_pyfunction!(stieltjes, m)?)?;
    m.add_function(wrap_pyfunction!(ks_semicircle, m)?)?;
    m.add_function(wrap_pyfunction!(esd_sup_distance, m)?)?;
    m.add_function(wrap_pyfunction!(semicircle_density, m)?)?;
    m.add_function(wrap_pyfunction!(semicircle_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(semicircle_stieltjes, m)?)?;
    m.add_function(wrap_pyfunction!(mixing_radius, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_main, m)?)?;
    m.add_function(wrap_pyfunction!(catalan, m)?)?;
    m.add_function(wrap_pyfunction!(good_shape_count, m)?)?;
    m.add_function(wrap_pyfunction!(count_good_walks, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_shapes, m)?)?;
    m.add_function(wrap_pyfunction!(limit_gamma_walks, m)?)?;
    m.add_function(wrap_pyfunction!(pseudo_char, m)?)?;
    m.add_function(wrap_pyfunction!(find_negativity_witness, m)?)?;
    m.add_function(wrap_pyfunction!(hankel_report, m)?)?;
    m.add_function(wrap_pyfunction!(graph_energy, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_energy_gnp, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_energy_multipartite, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
