//! Python bindings for the `cohomotopy` crate.

use std::fmt::Display;
use std::path::PathBuf;

use cohomotopy::abelian::FgAbGroup;
use cohomotopy::cohomotopy::{
    classify_4manifold_type, pi2_enumerate, pi2_fiber, pontrjagin_fiber, sphere_maps, FiberReport, QKernelSearch,
    SphereMapGroup,
};
use cohomotopy::model::{load_algebraic_model, model_from_simplicial, CohomologyModel, Coefficients};
use cohomotopy::simplicial::SimplicialComplex;
use cohomotopy::torsor::{FiniteBiTorsor, FiniteGroup};
use num_bigint::BigInt;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

fn value_err(e: impl Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn coefficients(text: &str) -> PyResult<Coefficients> {
    text.parse().map_err(|e: String| value_err(e))
}

/// A finitely generated abelian group `Z^r ⊕ Z/d_1 ⊕ … ⊕ Z/d_k`.
#[pyclass(name = "Group", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyGroup {
    inner: FgAbGroup,
}

#[pymethods]
impl PyGroup {
    #[getter]
    fn free_rank(&self) -> usize {
        self.inner.free_rank()
    }

    /// Invariant factors, each dividing the next.
    #[getter]
    fn torsion(&self) -> Vec<BigInt> {
        self.inner.torsion().to_vec()
    }

    fn order(&self) -> Option<BigInt> {
        self.inner.order()
    }

    fn is_trivial(&self) -> bool {
        self.inner.is_trivial()
    }

    fn isomorphic(&self, other: &PyGroup) -> bool {
        self.inner.isomorphic(&other.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Group({})", self.inner)
    }
}

fn group(g: &FgAbGroup) -> PyGroup {
    PyGroup { inner: g.clone() }
}

#[pyclass(name = "SphereMaps", frozen)]
pub struct PySphereMaps {
    inner: SphereMapGroup,
}

#[pymethods]
impl PySphereMaps {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    /// `[X, S^n]`.
    #[getter]
    fn group(&self) -> PyGroup {
        group(&self.inner.group)
    }

    /// `coker(Sq̄²) ⊂ [X, S^n]`.
    #[getter]
    fn coker(&self) -> PyGroup {
        group(&self.inner.coker)
    }

    #[getter]
    fn cohomology(&self) -> PyGroup {
        group(self.inner.cohomology())
    }

    fn is_split(&self) -> bool {
        self.inner.is_split()
    }

    fn __repr__(&self) -> String {
        format!("SphereMaps(n={}, group={})", self.inner.n, self.inner.group)
    }
}

#[pyclass(name = "FiberReport", frozen)]
pub struct PyFiberReport {
    inner: FiberReport,
}

#[pymethods]
impl PyFiberReport {
    #[getter]
    fn beta(&self) -> Vec<BigInt> {
        self.inner.beta.coords.clone()
    }

    #[getter]
    fn realizable(&self) -> bool {
        self.inner.realizable
    }

    /// `None` when `β ∪ β ≠ 0`.
    #[getter]
    fn fiber(&self) -> Option<PyGroup> {
        self.inner.fiber.as_ref().map(group)
    }

    #[getter]
    fn p_beta(&self) -> PyGroup {
        group(&self.inner.p_beta)
    }

    #[getter]
    fn q_kernel(&self) -> Vec<Vec<BigInt>> {
        self.inner.q_kernel.clone()
    }

    /// `"exhaustive"` or `"kernel-generators"`.
    #[getter]
    fn q_kernel_search(&self) -> &'static str {
        match self.inner.q_kernel_search {
            QKernelSearch::Exhaustive => "exhaustive",
            QKernelSearch::KernelGenerators => "kernel-generators",
        }
    }

    fn fiber_order(&self) -> Option<BigInt> {
        self.inner.fiber_order()
    }

    fn __repr__(&self) -> String {
        match &self.inner.fiber {
            Some(f) => format!("FiberReport(beta={:?}, fiber={f})", self.beta()),
            None => format!("FiberReport(beta={:?}, not realizable)", self.beta()),
        }
    }
}

/// Integral and mod 2^k cohomology with its primary operations.
#[pyclass(name = "Model", frozen)]
pub struct PyModel {
    inner: CohomologyModel,
}

#[pymethods]
impl PyModel {
    /// Reads a facet list or an algebraic JSON model.
    #[staticmethod]
    #[pyo3(signature = (path, k_max=None))]
    fn from_file(path: PathBuf, k_max: Option<u32>) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path).map_err(|e| PyOSError::new_err(format!("{}: {e}", path.display())))?;
        let is_json =
            path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) || text.trim_start().starts_with('{');
        if is_json {
            Self::from_json(&text)
        } else {
            Self::from_facets(&text, k_max)
        }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        load_algebraic_model(text).map(|inner| PyModel { inner }).map_err(value_err)
    }

    #[staticmethod]
    #[pyo3(signature = (text, k_max=None))]
    fn from_facets(text: &str, k_max: Option<u32>) -> PyResult<Self> {
        let x = SimplicialComplex::parse(text).map_err(value_err)?;
        model_from_simplicial(&x, k_max).map(|inner| PyModel { inner }).map_err(value_err)
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn k_max(&self) -> u32 {
        self.inner.k_max()
    }

    #[pyo3(signature = (q, coefficients="Z"))]
    fn cohomology(&self, q: usize, coefficients: &str) -> PyResult<PyGroup> {
        let c = self::coefficients(coefficients)?;
        self.inner.group(q, c).map(group).map_err(value_err)
    }

    #[pyo3(signature = (q, coefficients="Z"))]
    fn generator_names(&self, q: usize, coefficients: &str) -> PyResult<Vec<String>> {
        let c = self::coefficients(coefficients)?;
        self.inner.generator_names(q, c).map(<[String]>::to_vec).map_err(value_err)
    }

    #[pyo3(signature = (n=3))]
    fn sphere_maps(&self, n: usize) -> PyResult<PySphereMaps> {
        sphere_maps(&self.inner, n).map(|inner| PySphereMaps { inner }).map_err(value_err)
    }

    /// The fiber of `[X, S^2] → H^2(X;Z)` over `β`, given in generator coordinates.
    fn pi2_fiber(&self, beta: Vec<BigInt>) -> PyResult<PyFiberReport> {
        let b = self.inner.class(2, Coefficients::Integers, &beta).map_err(value_err)?;
        pi2_fiber(&self.inner, &b).map(|inner| PyFiberReport { inner }).map_err(value_err)
    }

    /// Every fiber over `H^2(X;Z)`, free coordinates ranging over `[-bound, bound]`.
    /// Returns the reports and the total count when every fiber is finite.
    #[pyo3(signature = (bound=None))]
    fn pi2_enumerate(&self, bound: Option<u64>) -> PyResult<(Vec<PyFiberReport>, Option<BigInt>)> {
        let e = pi2_enumerate(&self.inner, bound).map_err(value_err)?;
        Ok((e.reports.into_iter().map(|inner| PyFiberReport { inner }).collect(), e.total))
    }

    fn pontrjagin_fiber(&self, beta: Vec<BigInt>) -> PyResult<PyGroup> {
        let b = self.inner.class(2, Coefficients::Integers, &beta).map_err(value_err)?;
        pontrjagin_fiber(&self.inner, &b).map(|g| group(&g)).map_err(value_err)
    }

    fn classify_type(&self) -> PyResult<u8> {
        classify_4manifold_type(&self.inner).map(|t| t.number()).map_err(value_err)
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!("Model(dimension={}, k_max={})", self.inner.dimension(), self.inner.k_max())
    }
}

fn finite_group(name: &str) -> PyResult<FiniteGroup> {
    let s = name.to_ascii_lowercase();
    let size = |rest: &str, lo: usize, hi: usize| {
        rest.parse::<usize>()
            .ok()
            .filter(|n| (lo..=hi).contains(n))
            .ok_or_else(|| value_err(format!("bad group {name:?}")))
    };
    match s.as_str() {
        "s3" => Ok(FiniteGroup::symmetric(3)),
        "s4" => Ok(FiniteGroup::symmetric(4)),
        "q8" => Ok(FiniteGroup::quaternion()),
        _ if s.starts_with('z') => Ok(FiniteGroup::cyclic(size(&s[1..], 1, 24)?)),
        _ if s.starts_with('d') => Ok(FiniteGroup::dihedral(size(&s[1..], 3, 12)?)),
        _ => Err(value_err(format!("unknown group {name:?} (s3, s4, q8, z<n>, d<n>)"))),
    }
}

/// A finite bi-torsor, with elements and group elements numbered from 0.
#[pyclass(name = "BiTorsor", frozen)]
pub struct PyBiTorsor {
    inner: FiniteBiTorsor,
}

#[pymethods]
impl PyBiTorsor {
    /// `G` acting on itself by left and right multiplication.
    #[staticmethod]
    #[pyo3(signature = (group="s3"))]
    fn translation(group: &str) -> PyResult<Self> {
        Ok(PyBiTorsor {
            inner: FiniteBiTorsor::translation(&finite_group(group)?),
        })
    }

    /// `G` with right action `x·h = x φ(h)` for the `index`-th automorphism `φ`.
    #[staticmethod]
    fn twisted(group: &str, index: usize) -> PyResult<Self> {
        let g = finite_group(group)?;
        let phi = g
            .automorphisms()
            .into_iter()
            .nth(index)
            .ok_or_else(|| value_err(format!("{group} has fewer than {} automorphisms", index + 1)))?;
        FiniteBiTorsor::twisted(&g, &phi).map(|inner| PyBiTorsor { inner }).map_err(value_err)
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    /// `γ_x` as a table: `g·x = x·γ_x(g)`.
    fn gamma(&self, x: usize) -> PyResult<Vec<usize>> {
        self.inner.gamma_x(x).map_err(value_err)
    }

    /// `γ̄_x` as a table: `γ̄_x(h)·x = x·h`.
    fn gamma_bar(&self, x: usize) -> PyResult<Vec<usize>> {
        self.inner.gamma_bar_x(x).map_err(value_err)
    }

    /// The `h` with `x1 = x2·h`, after checking `γ_{x1} = h⁻¹ γ_{x2} h`.
    fn verify_conjugacy(&self, x1: usize, x2: usize) -> PyResult<usize> {
        self.inner.verify_conjugacy(x1, x2).map_err(value_err)
    }
}

#[pymodule]
fn pycohomotopy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyModel>()?;
    m.add_class::<PySphereMaps>()?;
    m.add_class::<PyFiberReport>()?;
    m.add_class::<PyBiTorsor>()?;
    Ok(())
}
