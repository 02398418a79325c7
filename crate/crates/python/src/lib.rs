//! Python bindings. Rationals cross the boundary as `fractions.Fraction`,
//! structured results as JSON strings.

use num_rational::BigRational;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use apery_core::analytic::{apery_limit, constant_catalog, match_constant};
use apery_core::certify::{CertificateReport, CertifyConfig, SeedPolicy};
use apery_core::frobenius::{frobenius_denominator_certificate, frobenius_solutions};
use apery_core::generators::{builtin_catalog, cellular_laurent, vz_polynomial, CyclicPermutation};
use apery_core::ode::{fit_operator, operator_to_recurrence, solve_recurrence};
use apery_core::polytope::polytope_report;
use apery_core::{DeltaOperator, Error, LaurentPoly, RationalSequence};

fn err(e: Error) -> PyErr {
    match e {
        Error::Parse { .. } | Error::Invalid(_) | Error::NonBijective | Error::DimensionMismatch { .. } | Error::ZeroCoordinate(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Laurent polynomial with rational coefficients in `x1..xn`.
#[pyclass(name = "LaurentPoly", module = "apery_forge", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyLaurent {
    pub inner: LaurentPoly,
}

#[pymethods]
impl PyLaurent {
    #[new]
    fn new(text: &str, n: usize) -> PyResult<Self> {
        Ok(PyLaurent { inner: apery_core::parse_laurent(text, n).map_err(err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// `[ct(φ^0), ..., ct(φ^m)]`.
    fn constant_terms(&self, m: usize) -> Vec<BigRational> {
        apery_core::constant_term_powers(&self.inner, m).values
    }

    fn polytope(&self) -> PyResult<String> {
        json(&polytope_report(&self.inner))
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("LaurentPoly('{}', {})", self.inner, self.inner.n())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// Differential operator `Σ p_k(t) δ^k`.
#[pyclass(name = "DeltaOperator", module = "apery_forge", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyOperator {
    pub inner: DeltaOperator,
}

#[pymethods]
impl PyOperator {
    /// `coeffs[k]` lists the coefficients of `p_k`, constant first.
    #[new]
    fn new(coeffs: Vec<Vec<i64>>) -> Self {
        let refs: Vec<&[i64]> = coeffs.iter().map(Vec::as_slice).collect();
        PyOperator { inner: DeltaOperator::from_int_coeffs(&refs) }
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn same_up_to_unit(&self, other: &Self) -> bool {
        self.inner.same_up_to_unit(&other.inner)
    }

    fn structural_checks(&self, n: usize) -> PyResult<String> {
        json(&self.inner.structural_checks(n))
    }

    #[pyo3(signature = (c, sign = 1))]
    fn involutive(&self, c: i64, sign: i8) -> PyResult<bool> {
        self.inner.involutive_symmetry_check(c, sign).map_err(err)
    }

    /// Solution of `D b = q0 t` with `b_0 = 0`, up to `t^m`.
    fn second_solution(&self, q0: BigRational, m: usize) -> PyResult<Vec<BigRational>> {
        let rec = operator_to_recurrence(&self.inner, &[BigRational::from_integer(0.into()), q0]);
        Ok(solve_recurrence(&rec, &[BigRational::from_integer(0.into())], m).map_err(err)?.values)
    }

    /// Frobenius coefficients `f[j][m]` for `m < terms`.
    fn frobenius(&self, terms: usize) -> PyResult<Vec<Vec<BigRational>>> {
        Ok(frobenius_solutions(&self.inner, terms).map_err(err)?.f)
    }

    /// `ε` for `m <= range`, or `None` when the denominators blow up.
    fn frobenius_eps(&self, range: usize) -> PyResult<Option<num_bigint::BigInt>> {
        let b = frobenius_solutions(&self.inner, range + 1).map_err(err)?;
        Ok(frobenius_denominator_certificate(&b, range).map_err(err)?.eps().cloned())
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("DeltaOperator({})", self.inner)
    }
}

#[pyclass(name = "Report", module = "apery_forge", frozen)]
pub struct PyReport {
    pub inner: CertificateReport,
}

#[pymethods]
impl PyReport {
    /// `CERTIFIED-AT-DESK-SCALE`, `HYPOTHESIS-FAILED(...)` or `INCONCLUSIVE(...)`.
    #[getter]
    fn verdict(&self) -> String {
        self.inner.verdict.to_string()
    }

    #[getter]
    fn exit_code(&self) -> i32 {
        self.inner.verdict.exit_code()
    }

    #[getter]
    fn constant(&self) -> Option<(String, BigRational)> {
        self.inner.constant.as_ref().map(|c| (c.name.clone(), c.multiple.clone()))
    }

    #[getter]
    fn operator(&self) -> Option<PyOperator> {
        self.inner.operator.clone().map(|inner| PyOperator { inner })
    }

    fn flag(&self, name: &str) -> Option<bool> {
        self.inner.flag(name)
    }

    #[pyo3(signature = (pretty = false))]
    fn to_json(&self, pretty: bool) -> String {
        self.inner.to_json(pretty)
    }

    fn __repr__(&self) -> String {
        format!("Report({})", self.inner.verdict)
    }
}

#[pyfunction]
fn parse_laurent(text: &str, n: usize) -> PyResult<PyLaurent> {
    PyLaurent::new(text, n)
}

#[pyfunction]
fn constant_term_powers(phi: &PyLaurent, m: usize) -> Vec<BigRational> {
    phi.constant_terms(m)
}

#[pyfunction]
#[pyo3(signature = (a, max_order = 4, max_degree = 6))]
fn fit(a: Vec<BigRational>, max_order: usize, max_degree: usize) -> PyResult<PyOperator> {
    let seq = RationalSequence::new(0, a);
    Ok(PyOperator { inner: fit_operator(&seq, max_order, max_degree).map_err(err)? })
}

/// Limit of `b_m / a_m` matched against the constant catalog.
#[pyfunction]
#[pyo3(signature = (a, b, precision = 256, max_denominator = 1000))]
fn limit(a: Vec<BigRational>, b: Vec<BigRational>, precision: u32, max_denominator: u64) -> PyResult<(f64, Option<(String, BigRational)>)> {
    let v = apery_limit(&RationalSequence::new(0, a), &RationalSequence::new(0, b), precision).map_err(err)?;
    let m = match_constant(&v.value, &constant_catalog(precision), max_denominator);
    Ok((v.value.to_f64(), m.map(|m| (m.name, m.multiple))))
}

/// Run the pipeline. `config` is a JSON object as accepted by the CLI.
#[pyfunction]
fn certify_json(config: &str) -> PyResult<PyReport> {
    let c = CertifyConfig::from_json(config).map_err(err)?;
    c.validate().map_err(err)?;
    Ok(PyReport { inner: apery_core::run_certificate(&c) })
}

#[pyfunction]
#[pyo3(signature = (phi, *, q0 = None, c = 1, r = 1, terms = 200, precision = 256))]
fn certify(py: Python<'_>, phi: &PyLaurent, q0: Option<&str>, c: i64, r: u64, terms: usize, precision: u32) -> PyResult<PyReport> {
    let mut cfg = CertifyConfig::new(phi.inner.clone());
    if let Some(s) = q0 {
        cfg.q0 = SeedPolicy::parse(s).map_err(err)?;
    }
    cfg.c = c;
    cfg.r = r;
    cfg.terms = terms;
    cfg.precision = precision;
    cfg.validate().map_err(err)?;
    let inner = py.detach(|| apery_core::run_certificate(&cfg));
    Ok(PyReport { inner })
}

#[pyfunction]
fn vz(n: usize) -> PyResult<(PyLaurent, PyLaurent)> {
    if n == 0 {
        return Err(PyValueError::new_err("n must be positive"));
    }
    let (psi, phi) = vz_polynomial(n);
    Ok((PyLaurent { inner: psi }, PyLaurent { inner: phi }))
}

#[pyfunction]
#[pyo3(signature = (sigma, radius = 1))]
fn cellular(sigma: Vec<usize>, radius: i64) -> PyResult<PyLaurent> {
    let s = CyclicPermutation::new(sigma).map_err(err)?;
    Ok(PyLaurent { inner: cellular_laurent(&s, radius).map_err(err)? })
}

#[pyfunction]
fn catalog() -> PyResult<String> {
    json(&builtin_catalog())
}

#[pymodule]
pub fn apery_forge(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLaurent>()?;
    m.add_class::<PyOperator>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(parse_laurent, m)?)?;
    m.add_function(wrap_pyfunction!(constant_term_powers, m)?)?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(limit, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(certify_json, m)?)?;
    m.add_function(wrap_pyfunction!(vz, m)?)?;
    m.add_function(wrap_pyfunction!(cellular, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    Ok(())
}
