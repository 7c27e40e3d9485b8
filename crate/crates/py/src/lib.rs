//! Python bindings for quadfib.

use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use quadfib::arith::{self, SpfSieve};
use quadfib::charsum::{self, CharsumInput, CoeffMode};
use quadfib::constant::{self, VariantKey};
use quadfib::counting::{self, CountConfig, CountVariant};
use quadfib::solubility::{self, DiagonalQuadric};
use quadfib::Error;

fn err(e: Error) -> PyErr {
    match e {
        Error::Inconsistent(_) | Error::NonIntegral(_) => PyArithmeticError::new_err(e.to_string()),
        Error::CeilingExceeded { .. } | Error::OutOfRange { .. } | Error::DepthTooLarge { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn sieve_for(a: &[i64; 4]) -> SpfSieve {
    let m = a.iter().map(|x| x.unsigned_abs()).max().unwrap_or(2);
    SpfSieve::new(m.clamp(2, 1 << 20))
}

fn variant(r: u8) -> PyResult<CountVariant> {
    CountVariant::from_r(r).map_err(err)
}

/// A diagonal quadric a0 x0² + a1 x1² + a2 x2² + a3 x3² with nonzero coefficients.
#[pyclass(name = "Quadric", frozen)]
struct PyQuadric {
    inner: DiagonalQuadric,
}

#[pymethods]
impl PyQuadric {
    #[new]
    fn new(a: [i64; 4]) -> PyResult<Self> {
        Ok(PyQuadric {
            inner: DiagonalQuadric::new(a).map_err(err)?,
        })
    }

    #[getter]
    fn coeffs(&self) -> [i64; 4] {
        self.inner.coeffs()
    }

    /// Squarefree, gcd-1 coefficients of an equivalent quadric.
    fn normalized(&self) -> PyResult<[i64; 4]> {
        let a = self.inner.coeffs();
        Ok(solubility::normalize(&self.inner, &sieve_for(&a)).map_err(err)?.coeffs())
    }

    fn is_locally_soluble(&self) -> PyResult<bool> {
        let a = self.inner.coeffs();
        solubility::is_everywhere_locally_soluble(&self.inner, &sieve_for(&a)).map_err(err)
    }

    fn has_rational_point(&self) -> PyResult<bool> {
        let a = self.inner.coeffs();
        solubility::has_rational_point(&self.inner, &sieve_for(&a)).map_err(err)
    }

    fn find_rational_point(&self, height_bound: u64) -> Option<[i64; 4]> {
        solubility::find_rational_point(&self.inner, height_bound)
    }

    /// [(place, formula verdict, Hilbert-symbol verdict)], places as "inf", "2", "p".
    fn places(&self) -> PyResult<Vec<(String, bool, bool)>> {
        let a = self.inner.coeffs();
        let (_, rows) = solubility::place_table(&self.inner, &sieve_for(&a)).map_err(err)?;
        Ok(rows
            .iter()
            .map(|r| {
                (
                    r.place.to_string(),
                    r.formula == solubility::LocalVerdict::Soluble,
                    r.hilbert == solubility::LocalVerdict::Soluble,
                )
            })
            .collect())
    }

    fn __repr__(&self) -> String {
        format!("Quadric{}", self.inner)
    }
}

/// Precomputed tables for N, N1, N2 and the raw count up to a bound.
#[pyclass(name = "Counter", frozen)]
struct PyCounter {
    inner: counting::Counter,
}

#[pymethods]
impl PyCounter {
    #[new]
    #[pyo3(signature = (bound, ceiling = counting::DEFAULT_CEILING, workers = None))]
    fn new(bound: u64, ceiling: u64, workers: Option<usize>) -> PyResult<Self> {
        Ok(PyCounter {
            inner: counting::Counter::new(bound, CountConfig { ceiling, workers }).map_err(err)?,
        })
    }

    fn count_n(&self, py: Python<'_>, b: u64) -> PyResult<u64> {
        py.detach(|| self.inner.count_n(b)).map_err(err)
    }

    fn count_n1(&self, py: Python<'_>, b: u64) -> PyResult<u64> {
        py.detach(|| self.inner.count_n1(b)).map_err(err)
    }

    fn count_n2(&self, py: Python<'_>, b: u64) -> PyResult<u64> {
        py.detach(|| self.inner.count_n2(b)).map_err(err)
    }

    fn count_raw(&self, py: Python<'_>, b: u64) -> PyResult<u64> {
        py.detach(|| self.inner.count_raw(b)).map_err(err)
    }

    /// Count in the sign region t_i < 0 ⇔ l_i = 1.
    fn region_count(&self, py: Python<'_>, b: u64, l: [u8; 4]) -> PyResult<u64> {
        py.detach(|| self.inner.region_count(b, l)).map_err(err)
    }

    /// {"B", "N", "N1", "N2", "raw_count", "elapsed_ms"}
    fn census<'py>(&self, py: Python<'py>, b: u64) -> PyResult<Bound<'py, PyDict>> {
        let r = py.detach(|| self.inner.census(b)).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("B", r.b)?;
        d.set_item("N", r.n)?;
        d.set_item("N1", r.n1)?;
        d.set_item("N2", r.n2)?;
        d.set_item("raw_count", r.raw_count)?;
        d.set_item("elapsed_ms", r.elapsed_ms)?;
        Ok(d)
    }
}

#[pyfunction]
fn jacobi(a: i128, n: i128) -> PyResult<i8> {
    arith::jacobi(a, n).map_err(err)
}

#[pyfunction]
fn hilbert_symbol(a: i64, b: i64, place: &str) -> PyResult<i8> {
    let v = match place {
        "inf" | "real" => solubility::Place::Real,
        "2" => solubility::Place::Two,
        p => solubility::Place::Odd(
            p.parse()
                .map_err(|_| PyValueError::new_err(format!("bad place {p:?}")))?,
        ),
    };
    solubility::hilbert_symbol(a, b, v).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (b, ceiling = counting::DEFAULT_CEILING))]
fn count_n(py: Python<'_>, b: u64, ceiling: u64) -> PyResult<u64> {
    py.detach(|| counting::count_n(b, CountConfig { ceiling, workers: None })).map_err(err)
}

/// 0 or 1 from the character sum; raises ArithmeticError if it is neither.
#[pyfunction]
fn indicator_via_charsum(s: [u64; 4], m: [u64; 4], sigma: [u8; 4], r: u8) -> PyResult<u8> {
    let input = CharsumInput::new(s, m, sigma, variant(r)?).map_err(err)?;
    charsum::indicator_via_charsum(&input).map_err(err)
}

#[pyfunction]
fn direct_indicator(s: [u64; 4], m: [u64; 4], sigma: [u8; 4], r: u8) -> PyResult<u8> {
    let input = CharsumInput::new(s, m, sigma, variant(r)?).map_err(err)?;
    let bound = s.iter().chain(m.iter()).product::<u64>().clamp(2, 1 << 20);
    charsum::direct_indicator(&input, &SpfSieve::new(bound)).map_err(err)
}

/// Σ_{r,i}(m, σ) by direct summation.
#[pyfunction]
fn sigma(r: u8, i: u8, m: [u64; 4], sigma: [u8; 4]) -> PyResult<i64> {
    let v = variant(r)?;
    match i {
        2 => charsum::sigma_r2(m, sigma, v),
        3 => charsum::sigma_r3(m, sigma, v),
        _ => return Err(PyValueError::new_err("i must be 2 or 3")),
    }
    .map_err(err)
}

/// (S, normalized ratio)
#[pyfunction]
#[pyo3(signature = (x, z, mode = "ones", seed = 0))]
fn bilinear_sum(py: Python<'_>, x: u64, z: u64, mode: &str, seed: u64) -> PyResult<(i64, f64)> {
    let mode: CoeffMode = mode.parse().map_err(err)?;
    let r = py
        .detach(|| charsum::bilinear_hyperbolic_sum(x, z, mode, seed, charsum::BILINEAR_CEILING))
        .map_err(err)?;
    Ok((r.s, r.normalized))
}

#[pyfunction]
fn rho(r: u8, i: u8) -> PyResult<(i64, i64)> {
    let q = constant::rho(VariantKey::new(r, i).map_err(err)?);
    Ok((*q.numer(), *q.denom()))
}

#[pyfunction]
fn euler_factor(r: u8, i: u8, p: u64) -> PyResult<f64> {
    constant::euler_factor(VariantKey::new(r, i).map_err(err)?, p).map_err(err)
}

/// (value, tail_radius) of 𝔠_{r,i}.
#[pyfunction]
#[pyo3(signature = (r, i, prime_limit = 100_000))]
fn constant_cri(py: Python<'_>, r: u8, i: u8, prime_limit: u64) -> PyResult<(f64, f64)> {
    let key = VariantKey::new(r, i).map_err(err)?;
    let c = py.detach(|| constant::constant_cri(key, prime_limit)).map_err(err)?;
    Ok((c.value, c.tail_radius))
}

/// (value, tail_radius) of the leading constant c.
#[pyfunction]
#[pyo3(signature = (prime_limit = 100_000))]
fn leading_constant(py: Python<'_>, prime_limit: u64) -> PyResult<(f64, f64)> {
    let c = py.detach(|| constant::leading_constant(prime_limit)).map_err(err)?;
    Ok((c.value, c.tail_radius))
}

#[pyfunction]
fn main_term(b: f64, c: f64) -> PyResult<f64> {
    constant::main_term(b, c).map_err(err)
}

#[pymodule]
pub fn quadfib_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQuadric>()?;
    m.add_class::<PyCounter>()?;
    m.add_function(wrap_pyfunction!(jacobi, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert_symbol, m)?)?;
    m.add_function(wrap_pyfunction!(count_n, m)?)?;
    m.add_function(wrap_pyfunction!(indicator_via_charsum, m)?)?;
    m.add_function(wrap_pyfunction!(direct_indicator, m)?)?;
    m.add_function(wrap_pyfunction!(sigma, m)?)?;
    m.add_function(wrap_pyfunction!(bilinear_sum, m)?)?;
    m.add_function(wrap_pyfunction!(rho, m)?)?;
    m.add_function(wrap_pyfunction!(euler_factor, m)?)?;
    m.add_function(wrap_pyfunction!(constant_cri, m)?)?;
    m.add_function(wrap_pyfunction!(leading_constant, m)?)?;
    m.add_function(wrap_pyfunction!(main_term, m)?)?;
    Ok(())
}
