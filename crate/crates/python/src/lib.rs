//! Python bindings for `redinv`.
//!
//! Matrices cross the boundary as lists of rows of Python ints. Groups are
//! exposed as `AbelianGroup` (a presented group `Z^n / relations`) and
//! `ReductiveGroup` (a root datum with an optional finite twisting group).

use std::sync::Arc;

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use redinv::abgrp::{self, AbHom, FgAbelianGroup, Invariants};
use redinv::catalogio::shipped_catalog;
use redinv::cech::{build_complex, cech_cohomology, contraction_check, CechInput};
use redinv::exactalg::{self, IntMatrix};
use redinv::gammamod::{group_cohomology, FiniteGroup, GammaModule};
use redinv::report::Report;
use redinv::rootdata::ReductiveDatum;
use redinv::tres::{self, Provenance};

type Rows = Vec<Vec<BigInt>>;

fn err(e: redinv::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix(rows: Rows, cols: Option<usize>) -> PyResult<IntMatrix> {
    let cols = cols.or_else(|| rows.first().map(Vec::len)).unwrap_or(0);
    IntMatrix::from_bigint_rows(rows, cols).map_err(err)
}

fn checks(r: &Report) -> Vec<(String, bool, Option<String>)> {
    r.checks.iter().map(|c| (c.name.clone(), c.pass, c.witness.clone())).collect()
}

fn resolution_kind(kind: &str) -> PyResult<Provenance> {
    kind.parse().map_err(err)
}

/// Smith normal form: returns `(U, D, V)` with `U·M·V = D`.
#[pyfunction]
fn snf(m: Rows) -> PyResult<(Rows, Rows, Rows)> {
    let (u, d, v) = exactalg::snf(&matrix(m, None)?);
    Ok((u.to_rows(), d.to_rows(), v.to_rows()))
}

/// Row-style Hermite normal form: returns `(H, U)` with `H = U·M`.
#[pyfunction]
fn hnf(m: Rows) -> PyResult<(Rows, Rows)> {
    let (h, u) = exactalg::hnf(&matrix(m, None)?);
    Ok((h.to_rows(), u.to_rows()))
}

#[pyfunction]
fn invariant_factors(m: Rows) -> PyResult<Vec<BigInt>> {
    Ok(exactalg::invariant_factors(&matrix(m, None)?))
}

/// Columns spanning the integer kernel of `M`.
#[pyfunction]
fn kernel_basis(m: Rows) -> PyResult<Rows> {
    Ok(exactalg::kernel_basis(&matrix(m, None)?).to_rows())
}

#[pyclass(module = "redinv", name = "AbelianGroup", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGroup(FgAbelianGroup);

#[pymethods]
impl PyGroup {
    /// `Z^ambient_rank` modulo the rows of `relations`.
    #[new]
    #[pyo3(signature = (ambient_rank, relations = Vec::new()))]
    fn new(ambient_rank: usize, relations: Rows) -> PyResult<Self> {
        FgAbelianGroup::new(ambient_rank, matrix(relations, Some(ambient_rank))?).map(PyGroup).map_err(err)
    }

    #[staticmethod]
    fn free(n: usize) -> Self {
        PyGroup(FgAbelianGroup::free(n))
    }

    #[staticmethod]
    fn cyclic(m: i64) -> Self {
        PyGroup(FgAbelianGroup::cyclic(m))
    }

    #[staticmethod]
    #[pyo3(signature = (free_rank, torsion = Vec::new()))]
    fn from_invariants(free_rank: usize, torsion: Vec<BigInt>) -> Self {
        PyGroup(FgAbelianGroup::from_invariants(&Invariants { free_rank, torsion }))
    }

    #[getter]
    fn ambient_rank(&self) -> usize {
        self.0.ambient_rank()
    }

    #[getter]
    fn free_rank(&self) -> usize {
        self.0.free_rank()
    }

    #[getter]
    fn torsion(&self) -> Vec<BigInt> {
        self.0.torsion().to_vec()
    }

    /// `None` for infinite groups.
    #[getter]
    fn order(&self) -> Option<BigInt> {
        self.0.order()
    }

    fn is_trivial(&self) -> bool {
        self.0.is_trivial()
    }

    fn is_isomorphic(&self, other: &PyGroup) -> bool {
        self.0.is_isomorphic(&other.0)
    }

    fn __str__(&self) -> String {
        self.0.invariants().to_string()
    }

    fn __repr__(&self) -> String {
        format!("AbelianGroup<{}>", self.0.invariants())
    }
}

#[pyclass(module = "redinv", name = "Hom", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyHom(AbHom);

#[pymethods]
impl PyHom {
    /// A homomorphism acting on column vectors of generator coordinates.
    #[new]
    fn new(source: &PyGroup, target: &PyGroup, matrix_rows: Rows) -> PyResult<Self> {
        let m = matrix(matrix_rows, Some(source.0.ambient_rank()))?;
        AbHom::new(source.0.clone(), target.0.clone(), m).map(PyHom).map_err(err)
    }

    #[getter]
    fn source(&self) -> PyGroup {
        PyGroup(self.0.source().clone())
    }

    #[getter]
    fn target(&self) -> PyGroup {
        PyGroup(self.0.target().clone())
    }

    #[getter]
    fn matrix(&self) -> Rows {
        self.0.matrix().to_rows()
    }

    /// `next ∘ self`.
    fn then(&self, next: &PyHom) -> PyResult<PyHom> {
        self.0.then(&next.0).map(PyHom).map_err(err)
    }

    fn kernel(&self) -> PyResult<(PyGroup, PyHom)> {
        let (g, f) = self.0.kernel().map_err(err)?;
        Ok((PyGroup(g), PyHom(f)))
    }

    fn cokernel(&self) -> PyResult<(PyGroup, PyHom)> {
        let (g, f) = self.0.cokernel().map_err(err)?;
        Ok((PyGroup(g), PyHom(f)))
    }

    fn image(&self) -> PyResult<(PyGroup, PyHom)> {
        let (g, f) = self.0.image().map_err(err)?;
        Ok((PyGroup(g), PyHom(f)))
    }

    fn is_injective(&self) -> PyResult<bool> {
        self.0.is_injective().map_err(err)
    }

    fn is_surjective(&self) -> PyResult<bool> {
        self.0.is_surjective().map_err(err)
    }

    fn is_isomorphism(&self) -> PyResult<bool> {
        self.0.is_isomorphism().map_err(err)
    }
}

/// Kernels and cokernels of `u`, `v∘u`, `v` with exactness at each term.
#[pyfunction]
fn six_term_sequence(u: &PyHom, v: &PyHom) -> PyResult<(Vec<PyGroup>, Vec<bool>)> {
    let s = abgrp::six_term_sequence(&u.0, &v.0).map_err(err)?;
    Ok((s.groups.into_iter().map(PyGroup).collect(), s.exact))
}

/// Čech cohomology `Ȟ^0 .. Ȟ^{max_degree-1}` of `phi: fx -> fg`, plus the
/// contraction checks as `(name, pass, witness)`.
#[pyfunction]
#[pyo3(signature = (fx, fg, phi, max_degree = 6))]
fn cech(fx: &PyGroup, fg: &PyGroup, phi: Rows, max_degree: usize) -> PyResult<(Vec<PyGroup>, Vec<(String, bool, Option<String>)>)> {
    let inp = CechInput::new(fx.0.clone(), fg.0.clone(), matrix(phi, Some(fx.0.ambient_rank()))?).map_err(err)?;
    let c = build_complex(&inp, max_degree).map_err(err)?;
    let report = contraction_check(&c).map_err(err)?;
    let groups = (0..max_degree).map(|i| cech_cohomology(&c, i).map(PyGroup)).collect::<redinv::Result<_>>().map_err(err)?;
    Ok((groups, checks(&report)))
}

/// `H^degree(Γ, Z^n)` with trivial action, Γ one of `small_group_names()`.
#[pyfunction]
fn group_cohomology_trivial(group: &str, n: usize, degree: usize) -> PyResult<PyGroup> {
    let (_, g) = FiniteGroup::small_groups()
        .into_iter()
        .find(|(name, _)| *name == group)
        .ok_or_else(|| PyValueError::new_err(format!("unknown group {group:?}")))?;
    let m = GammaModule::trivial(Arc::new(g), FgAbelianGroup::free(n));
    group_cohomology(&m, degree).map(PyGroup).map_err(err)
}

#[pyfunction]
fn small_group_names() -> Vec<&'static str> {
    FiniteGroup::small_groups().into_iter().map(|(n, _)| n).collect()
}

#[pyfunction]
fn catalog_names() -> Vec<String> {
    shipped_catalog().iter().map(|(e, _)| e.name.clone()).collect()
}

#[pyclass(module = "redinv", name = "ReductiveGroup", frozen)]
struct PyReductive(ReductiveDatum);

#[pymethods]
impl PyReductive {
    /// A catalog name or a spec such as `"SL(3)"`, `"E6ad"` or `"PGL(3) xΓ:flip"`.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        match shipped_catalog().get(spec.trim()) {
            Some(d) => Ok(PyReductive(d.clone())),
            None => ReductiveDatum::from_spec(spec).map(PyReductive).map_err(err),
        }
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name().to_string()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn semisimple_rank(&self) -> usize {
        self.0.semisimple_rank()
    }

    #[getter]
    fn gamma_order(&self) -> usize {
        self.0.gamma().order()
    }

    fn is_split(&self) -> bool {
        self.0.is_split()
    }

    fn characters(&self) -> PyResult<PyGroup> {
        self.0.character_group().map(|m| PyGroup(m.group().clone())).map_err(err)
    }

    fn picard(&self) -> PyResult<PyGroup> {
        self.0.mu_dual().map(|m| PyGroup(m.group().clone())).map_err(err)
    }

    fn pi1(&self) -> PyResult<PyGroup> {
        self.0.pi1().map(|m| PyGroup(m.group().clone())).map_err(err)
    }

    fn radical_characters(&self) -> PyResult<PyGroup> {
        self.0.radical_characters().map(|m| PyGroup(m.group().clone())).map_err(err)
    }

    /// Terms of the dual fundamental complex as `(degree, group)`.
    #[pyo3(signature = (resolution = "canonical"))]
    fn pi1d_terms(&self, resolution: &str) -> PyResult<Vec<(i32, PyGroup)>> {
        let r = tres::resolution(&self.0, resolution_kind(resolution)?).map_err(err)?;
        let c = r.pi1d();
        Ok((c.lo()..=c.hi()).map(|n| (n, PyGroup(c.term(n).group().clone()))).collect())
    }

    /// Cohomology of the dual fundamental complex as `(degree, group)`.
    #[pyo3(signature = (resolution = "canonical"))]
    fn pi1d_cohomology(&self, resolution: &str) -> PyResult<Vec<(i32, PyGroup)>> {
        let r = tres::resolution(&self.0, resolution_kind(resolution)?).map_err(err)?;
        let c = r.pi1d();
        (c.lo()..=c.hi()).map(|n| Ok((n, PyGroup(c.cohomology(n).map_err(err)?.group().clone())))).collect()
    }

    #[pyo3(signature = (resolution = "canonical"))]
    fn four_term_check(&self, resolution: &str) -> PyResult<Vec<(String, bool, Option<String>)>> {
        let r = tres::resolution(&self.0, resolution_kind(resolution)?).map_err(err)?;
        tres::four_term_check(&r).map(|rep| checks(&rep)).map_err(err)
    }

    /// Compares the canonical and pushout resolutions: `(verdict, method, checks)`.
    fn compare_resolutions(&self) -> PyResult<(String, String, Vec<(String, bool, Option<String>)>)> {
        let a = tres::canonical_resolution(&self.0).map_err(err)?;
        let b = tres::pushout_t_resolution(&self.0).map_err(err)?;
        let c = tres::compare_resolutions(&self.0, &a, &b).map_err(err)?;
        Ok((c.verdict.to_string(), c.method.to_string(), checks(&c.report)))
    }

    fn __repr__(&self) -> String {
        format!("ReductiveGroup<{}>", self.0.name())
    }
}

#[pymodule]
#[pyo3(name = "redinv")]
fn redinv_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyHom>()?;
    m.add_class::<PyReductive>()?;
    m.add_function(wrap_pyfunction!(snf, m)?)?;
    m.add_function(wrap_pyfunction!(hnf, m)?)?;
    m.add_function(wrap_pyfunction!(invariant_factors, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_basis, m)?)?;
    m.add_function(wrap_pyfunction!(six_term_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(cech, m)?)?;
    m.add_function(wrap_pyfunction!(group_cohomology_trivial, m)?)?;
    m.add_function(wrap_pyfunction!(small_group_names, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    Ok(())
}
