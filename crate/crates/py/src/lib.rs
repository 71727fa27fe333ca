//! Python bindings for seeds, verification and link spectra.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use kmsq::cli::{run_complex, ComplexMode, RunConfig};
use kmsq::complex::{bfs_closure, spectral_bound as bound};
use kmsq::field::{BaseField, FieldDescriptor};
use kmsq::forge::{build_seed, check_hypotheses as hyp, verify_conditions, ClauseStatus, SeedTriple, Variant};
use kmsq::matrix::{sl_order as slo, sp_order as spo, MatFq};
use kmsq::verify::surjectivity::Mode;
use kmsq::verify::{verify_seed, VerificationReport, VerifyOptions};

fn variant(s: &str) -> PyResult<Variant> {
    Variant::parse(s).ok_or_else(|| PyValueError::new_err(format!("variant must be sl or sp, got {s:?}")))
}

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rows(m: &MatFq) -> Vec<Vec<u32>> {
    (0..m.n()).map(|i| m.row(i).to_vec()).collect()
}

/// A seed triple `(M_a, M_b, M_c)` with its provenance.
#[pyclass(name = "Seed", module = "kmsq_py")]
#[derive(Clone)]
struct PySeed {
    inner: SeedTriple,
}

#[pymethods]
impl PySeed {
    #[staticmethod]
    #[pyo3(signature = (p, k, variant = "sl", r = 1))]
    fn build(p: u32, k: u32, variant: &str, r: u32) -> PyResult<Self> {
        let v = self::variant(variant)?;
        let desc = FieldDescriptor::canonical(p, r, k).map_err(value_err)?;
        let inner = build_seed(&desc, v).map_err(value_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: SeedTriple::from_text(text).map_err(value_err)?,
        })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn descriptor(&self) -> String {
        self.inner.desc().canonical_string()
    }

    #[getter]
    fn variant(&self) -> String {
        self.inner.variant.to_string()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.desc().q()
    }

    #[getter]
    fn ma(&self) -> Vec<Vec<u32>> {
        rows(&self.inner.ma)
    }

    #[getter]
    fn mb(&self) -> Vec<Vec<u32>> {
        rows(&self.inner.mb)
    }

    #[getter]
    fn mc(&self) -> Vec<Vec<u32>> {
        rows(&self.inner.mc)
    }

    /// `(V_a(1), V_b(1), V_c(1))` as row lists.
    fn generators(&self) -> Vec<Vec<Vec<u32>>> {
        self.inner.generators().primes().iter().map(rows).collect()
    }

    /// Clause id to `"pass"`, `"fail"` or `"n/a"`.
    fn conditions(&self) -> Vec<(String, String)> {
        let r = verify_conditions(&self.inner);
        r.clauses
            .iter()
            .map(|c| {
                let s = match c.status {
                    ClauseStatus::Pass => "pass",
                    ClauseStatus::Fail => "fail",
                    ClauseStatus::NotApplicable => "n/a",
                };
                (c.id.to_string(), s.to_string())
            })
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("Seed({}, {})", self.descriptor(), self.variant())
    }
}

#[pyclass(name = "Report", module = "kmsq_py")]
struct PyReport {
    inner: VerificationReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn passed(&self) -> bool {
        !self.inner.any_failed()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn section_names(&self) -> Vec<String> {
        self.inner.sections.iter().map(|s| s.name.to_string()).collect()
    }

    /// `(id, status, detail)` per record of a section.
    fn records(&self, section: &str) -> PyResult<Vec<(String, String, String)>> {
        let s = self
            .inner
            .section(section)
            .ok_or_else(|| PyValueError::new_err(format!("no section {section:?}")))?;
        Ok(s.records
            .iter()
            .map(|r| (r.id.clone(), r.status.tag().to_string(), r.detail.clone()))
            .collect())
    }
}

/// Runs the verifier; `surjectivity` is `None`, `"full"` or `"envelope"`.
#[pyfunction]
#[pyo3(signature = (seed, rng_seed = 0x6b6d73, surjectivity = None, trials = 50))]
fn verify(seed: &PySeed, rng_seed: u64, surjectivity: Option<&str>, trials: usize) -> PyResult<PyReport> {
    let surjectivity = surjectivity
        .map(|m| Mode::parse(m).ok_or_else(|| PyValueError::new_err(format!("unknown mode {m:?}"))))
        .transpose()?;
    let opts = VerifyOptions {
        rng_seed,
        random_trials: trials,
        surjectivity,
        ..VerifyOptions::default()
    };
    Ok(PyReport {
        inner: verify_seed(&seed.inner, &opts),
    })
}

/// Raises `ValueError` naming the violated hypothesis.
#[pyfunction]
#[pyo3(signature = (p, k, variant = "sl", r = 1))]
fn check_hypotheses(p: u32, k: u32, variant: &str, r: u32) -> PyResult<()> {
    hyp(p, r, k, self::variant(variant)?).map_err(value_err)
}

/// Size of the group generated by square matrices over `F_p`, and whether
/// the closure finished below `cap`.
#[pyfunction]
fn closure_size(generators: Vec<Vec<Vec<i64>>>, p: u32, cap: u64) -> PyResult<(usize, bool)> {
    let f = Arc::new(BaseField::prime(p).map_err(value_err)?);
    if generators.is_empty() {
        return Err(PyValueError::new_err("no generators"));
    }
    let gens: Vec<MatFq> = generators.iter().map(|g| MatFq::from_int_rows(&f, g)).collect();
    if let Some(bad) = gens.iter().find(|g| !g.is_invertible() || g.n() != gens[0].n()) {
        return Err(PyValueError::new_err(format!("generators must be invertible and of equal size: {bad:?}")));
    }
    let g = bfs_closure(&gens, cap);
    Ok((g.len(), g.closed))
}

/// Link spectra for a `k = 1` (or any, in links mode) seed: a list of
/// `(link id, nodes, edges, lambda2)`.
#[pyfunction]
#[pyo3(signature = (p, k = 1, variant = None, r = 1, mode = "links", tol = 1e-9))]
fn link_spectra(p: u32, k: u32, variant: Option<&str>, r: u32, mode: &str, tol: f64) -> PyResult<Vec<(String, usize, usize, f64)>> {
    let v = match variant {
        Some(s) => self::variant(s)?,
        None if k == 1 => Variant::Symplectic,
        None => Variant::SpecialLinear,
    };
    let mut cfg = RunConfig::new(p, r, k, v).map_err(value_err)?;
    cfg.tol = tol;
    let mode = ComplexMode::parse(mode).ok_or_else(|| PyValueError::new_err(format!("mode must be full or links, got {mode:?}")))?;
    let desc = FieldDescriptor::canonical(p, r, k).map_err(value_err)?;
    let seed = build_seed(&desc, v).map_err(value_err)?;
    let res = run_complex(&cfg, &seed, mode).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(res.hdx.rows.iter().map(|r| (r.id.clone(), r.nodes, r.edges, r.lambda2)).collect())
}

#[pyfunction]
fn spectral_bound(q: u64) -> f64 {
    bound(q)
}

#[pyfunction]
fn sl_order(n: u32, q: u64) -> Option<u128> {
    slo(n, q)
}

/// `|Sp_{2m}(F_q)|`.
#[pyfunction]
fn sp_order(m: u32, q: u64) -> Option<u128> {
    spo(m, q)
}

#[pymodule]
fn kmsq_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySeed>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(check_hypotheses, m)?)?;
    m.add_function(wrap_pyfunction!(closure_size, m)?)?;
    m.add_function(wrap_pyfunction!(link_spectra, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_bound, m)?)?;
    m.add_function(wrap_pyfunction!(sl_order, m)?)?;
    m.add_function(wrap_pyfunction!(sp_order, m)?)?;
    Ok(())
}
