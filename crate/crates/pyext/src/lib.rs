//! Python bindings: rings, page/Lie invariants, characteristic classes and
//! the sixfold Johnson machinery. Exact rationals cross the boundary as
//! `"p/q"` strings; dimensions as plain integers.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use torelli::adams;
use torelli::builtins;
use torelli::charclass::{self, CompleteIntersection};
use torelli::lefschetz;
use torelli::lie;
use torelli::linalg::{fmt_q, parse_q};
use torelli::ring::{CohomologyRing, CubicForm};
use torelli::ring_io;

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl ToString) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn cubic_from_entries(b2: usize, entries: Vec<(usize, usize, usize, String)>) -> PyResult<CubicForm> {
    let mut cubic = CubicForm::new(b2);
    for (i, j, k, value) in entries {
        if i == 0 || j == 0 || k == 0 || i > b2 || j > b2 || k > b2 {
            return Err(value_err(format!("cubic index ({i},{j},{k}) out of range 1..={b2}")));
        }
        let q = parse_q(&value).ok_or_else(|| value_err(format!("bad rational `{value}`")))?;
        cubic.set(i - 1, j - 1, k - 1, q);
    }
    Ok(cubic)
}

/// A graded-commutative rational cohomology ring.
#[pyclass(name = "Ring")]
struct PyRing {
    inner: CohomologyRing,
}

#[pymethods]
impl PyRing {
    /// Build a named example ring (`p2`, `quintic`, `sixfold:b2=2,b3=2`, ...).
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        Ok(PyRing { inner: builtins::build(name).map_err(value_err)? })
    }

    /// Parse the JSON ring format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyRing { inner: ring_io::parse(text).map_err(value_err)? })
    }

    #[staticmethod]
    fn projective_space(m: usize) -> PyResult<Self> {
        if m == 0 {
            return Err(value_err("projective space needs m >= 1"));
        }
        Ok(PyRing { inner: torelli::ring::build_projective_space(m) })
    }

    /// Ring of a smooth hypersurface threefold of the given degree.
    #[staticmethod]
    fn hypersurface(n: usize, d: u32) -> PyResult<Self> {
        let ci = CompleteIntersection::hypersurface(n, d).map_err(value_err)?;
        Ok(PyRing { inner: charclass::ci_to_ring(&ci).map_err(value_err)? })
    }

    /// Simply connected formal six-manifold from its cubic form; entries
    /// are `(i, j, k, "value")` with 1-based indices.
    #[staticmethod]
    #[pyo3(signature = (b2, b3, cubic, omega_index = 1))]
    fn six_manifold(
        b2: usize,
        b3: usize,
        cubic: Vec<(usize, usize, usize, String)>,
        omega_index: usize,
    ) -> PyResult<Self> {
        let cubic = cubic_from_entries(b2, cubic)?;
        if omega_index == 0 || omega_index > b2 {
            return Err(value_err("omega_index out of range"));
        }
        Ok(PyRing {
            inner: torelli::ring::build_six_manifold(b2, b3, &cubic, omega_index - 1)
                .map_err(value_err)?,
        })
    }

    fn serialize(&self) -> String {
        ring_io::serialize(&self.inner)
    }

    fn real_dimension(&self) -> usize {
        self.inner.real_dimension()
    }

    fn betti(&self) -> Vec<usize> {
        (0..=self.inner.real_dimension()).map(|d| self.inner.betti(d)).collect()
    }

    fn simply_connected(&self) -> bool {
        self.inner.simply_connected()
    }

    /// `(valid, [violation descriptions])`.
    fn validate(&self) -> (bool, Vec<String>) {
        let report = self.inner.validate();
        let msgs = report.violations.iter().map(|v| v.describe()).collect();
        (report.is_valid(), msgs)
    }

    /// Rational homotopy ranks `{degree: rank}` for degrees `2..=max_degree`.
    #[pyo3(signature = (max_degree, max_words = None))]
    fn homotopy_ranks(&self, max_degree: usize, max_words: Option<u128>) -> PyResult<BTreeMap<usize, usize>> {
        let table = adams::homotopy_ranks(&self.inner, max_degree, max_words)
            .map_err(runtime_err)?;
        Ok(table.pi)
    }

    /// The tensor-length refinement `{(s, degree): rank}` as a dict keyed
    /// by `(s, j)` tuples.
    #[pyo3(signature = (max_degree, max_words = None))]
    fn homotopy_graded(
        &self,
        max_degree: usize,
        max_words: Option<u128>,
    ) -> PyResult<BTreeMap<(usize, usize), usize>> {
        let table = adams::homotopy_ranks(&self.inner, max_degree, max_words)
            .map_err(runtime_err)?;
        Ok(table.graded)
    }

    /// Loop-space homology ranks in degrees `0..=bound`.
    #[pyo3(signature = (bound, max_words = None))]
    fn loop_homology_ranks(&self, bound: usize, max_words: Option<u128>) -> PyResult<Vec<usize>> {
        adams::loop_homology_ranks(&self.inner, bound, max_words).map_err(runtime_err)
    }

    /// `(kernel, middle, cokernel)` of the degree-3 homotopy sequence.
    fn pi3_sequence(&self) -> PyResult<(usize, usize, usize)> {
        let r = adams::pi3_sequence(&self.inner).map_err(runtime_err)?;
        Ok((r.kernel_dim, r.middle_dim, r.cokernel_dim))
    }

    /// `(kernel, middle, cokernel)` of the degree-4 sequence (b2 = 1 only).
    fn pi4_sequence(&self) -> PyResult<(usize, usize, usize)> {
        let r = adams::pi4_sequence_b2_one(&self.inner).map_err(runtime_err)?;
        Ok((r.kernel_dim, r.middle_dim, r.cokernel_dim))
    }

    /// `(exact dimension, closed-form lower bound)` of the Johnson target.
    fn johnson_target_dim(&self) -> (usize, usize) {
        lie::johnson_target_dim(&self.inner)
    }

    /// Per-level hard Lefschetz verdicts `[(level, ok)]`.
    fn hard_lefschetz(&self) -> PyResult<Vec<(usize, bool)>> {
        lefschetz::hard_lefschetz_check(&self.inner).map_err(runtime_err)
    }

    /// Dimension of the algebra of degree-0 derivations fixing omega (and
    /// optionally the Pontryagin classes).
    #[pyo3(signature = (fix_pontryagin = false))]
    fn derivation_algebra_dim(&self, fix_pontryagin: bool) -> PyResult<usize> {
        let mut fixed = Vec::new();
        if let Some(w) = self.inner.omega() {
            fixed.push(w.clone());
        }
        if fix_pontryagin {
            fixed.extend(self.inner.pontryagin().iter().map(|(_, p)| p.clone()));
        }
        Ok(lefschetz::derivation_algebra(&self.inner, &fixed).dim())
    }

    /// Homology of the quadratic Lie model in degrees `1..=max_degree`
    /// (degree j is the rank of homotopy in degree j + 1).
    fn lie_homology(&self, max_degree: usize) -> PyResult<Vec<usize>> {
        let model = lie::quadratic_model_from_ring(&self.inner)
            .map_err(runtime_err)?
            .with_truncation(max_degree + 1);
        let h = lie_homology_vec(&model, max_degree)?;
        Ok(h)
    }

    fn __repr__(&self) -> String {
        format!(
            "Ring(real_dimension={}, betti={:?})",
            self.inner.real_dimension(),
            self.betti()
        )
    }
}

fn lie_homology_vec(model: &lie::DgLieModel, max_degree: usize) -> PyResult<Vec<usize>> {
    lie::lie_homology(model, max_degree).map_err(runtime_err)
}

/// The structured six-manifold Lie model with its derivation machinery.
#[pyclass(name = "SixfoldModel")]
struct PySixfold {
    inner: lie::SixfoldModel,
}

#[pymethods]
impl PySixfold {
    #[new]
    fn new(b2: usize, b3: usize, cubic: Vec<(usize, usize, usize, String)>) -> PyResult<Self> {
        let cubic = cubic_from_entries(b2, cubic)?;
        Ok(PySixfold { inner: lie::sixfold_model(b2, b3, &cubic).map_err(value_err)? })
    }

    /// Generators as `(name, degree)` pairs.
    fn generators(&self) -> Vec<(String, usize)> {
        self.inner
            .model
            .generators()
            .map(|(_, n, d)| (n.to_string(), d))
            .collect()
    }

    /// The forced `b_j^{i,k}` coefficient for a table of `a` entries.
    fn forced_b(
        &self,
        a: Vec<(i64, usize, usize, String)>,
        j: usize,
        i: usize,
        k: i64,
    ) -> PyResult<String> {
        let table = self.a_table(a)?;
        Ok(fmt_q(&table.forced_b(j, i, k)))
    }

    /// Does the derivation of the table commute with the differential?
    fn chain_check(&self, a: Vec<(i64, usize, usize, String)>) -> PyResult<bool> {
        let table = self.a_table(a)?;
        let d = lie::sixfold_derivation(&self.inner, &table);
        Ok(lie::check_chain_derivation(&self.inner.model, &d).is_empty())
    }

    /// Johnson invariant of `exp D` for the table: row labels and one
    /// column of rational strings per degree-2 generator.
    fn johnson_invariant(
        &self,
        a: Vec<(i64, usize, usize, String)>,
    ) -> PyResult<(Vec<String>, Vec<Vec<String>>)> {
        let table = self.a_table(a)?;
        let d = lie::sixfold_derivation(&self.inner, &table);
        let phi = lie::exp_derivation(&self.inner.model, &d).map_err(runtime_err)?;
        let inv = lie::johnson_invariant(&self.inner.model, lie::TorelliInput::Automorphism(&phi))
            .map_err(runtime_err)?;
        let labels = inv
            .quotient_keys
            .iter()
            .map(|(p, q)| format!("{}*{}", inv.e_names[*p], inv.e_names[*q]))
            .collect();
        let columns = inv
            .columns
            .iter()
            .map(|col| col.iter().map(fmt_q).collect())
            .collect();
        Ok((labels, columns))
    }

    /// Homology of the model in degrees `1..=max_degree`.
    fn lie_homology(&self, max_degree: usize) -> PyResult<Vec<usize>> {
        let model = self.inner.model.clone().with_truncation(max_degree + 1);
        lie_homology_vec(&model, max_degree)
    }
}

impl PySixfold {
    fn a_table(
        &self,
        entries: Vec<(i64, usize, usize, String)>,
    ) -> PyResult<lie::SixfoldCoefficients> {
        let mut a = lie::SixfoldCoefficients::new(self.inner.b2, self.inner.m);
        for (k, s, t, value) in entries {
            if k == 0
                || k.unsigned_abs() as usize > self.inner.m
                || s == 0
                || s > self.inner.b2
                || t == 0
                || t > self.inner.b2
            {
                return Err(value_err(format!("a index (k={k}, s={s}, t={t}) out of range")));
            }
            let q = parse_q(&value).ok_or_else(|| value_err(format!("bad rational `{value}`")))?;
            a.set(k, s, t, q);
        }
        Ok(a)
    }
}

/// Full complete-intersection report as a JSON string.
#[pyfunction]
fn ci_report(ambient: usize, degrees: Vec<u32>) -> PyResult<String> {
    let ci = CompleteIntersection::new(ambient, degrees).map_err(value_err)?;
    let report = charclass::ci_report(&ci).map_err(value_err)?;
    serde_json_string(&report)
}

fn serde_json_string<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string_pretty(value).map_err(|e| runtime_err(e))
}

/// Middle primitive Betti number of a degree-d hypersurface of complex
/// dimension n.
#[pyfunction]
fn middle_primitive_betti(n: usize, d: u32) -> PyResult<i64> {
    let ci = CompleteIntersection::hypersurface(n, d).map_err(value_err)?;
    let r = charclass::middle_primitive_betti(&ci);
    i64::try_from(&r.to_integer()).map_err(|_| runtime_err("middle Betti exceeds i64"))
}

/// `"infinite_index" | "not_determined" | "not_applicable"` for `(n, d)`.
#[pyfunction]
fn monodromy_index_verdict(n: usize, d: u32) -> PyResult<String> {
    let flag = charclass::monodromy_index_flag(n, d).map_err(value_err)?;
    Ok(match flag.verdict {
        charclass::IndexVerdict::InfiniteIndex => "infinite_index",
        charclass::IndexVerdict::NotDetermined => "not_determined",
        charclass::IndexVerdict::NotApplicable => "not_applicable",
    }
    .to_string())
}

#[pymodule]
fn torelli_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRing>()?;
    m.add_class::<PySixfold>()?;
    m.add_function(wrap_pyfunction!(ci_report, m)?)?;
    m.add_function(wrap_pyfunction!(middle_primitive_betti, m)?)?;
    m.add_function(wrap_pyfunction!(monodromy_index_verdict, m)?)?;
    Ok(())
}
