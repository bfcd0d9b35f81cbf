//! Python bindings for the okounkov core library.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use okounkov_core::convex::{self, RationalPolytope};
use okounkov_core::exactmath::{format_rat, parse_rat, Rat};
use okounkov_core::okounkov::{self as ok, OkounkovSemigroup, SystemKind};
use okounkov_core::valuation::ValuationVector;
use okounkov_core::varieties::{self, EcPoint, EllipticCurveFp};
use okounkov_core::Error;

fn to_py(e: Error) -> PyErr {
    if e.is_computational() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn parse_point(p: &[String]) -> PyResult<Vec<Rat>> {
    p.iter().map(|s| parse_rat(s).map_err(to_py)).collect()
}

#[pyclass(name = "Polytope", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPolytope(RationalPolytope);

#[pymethods]
impl PyPolytope {
    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Vertices as lists of `"p/q"` strings, in canonical order.
    #[getter]
    fn vertices(&self) -> Vec<Vec<String>> {
        self.0.vertices().iter().map(|v| v.iter().map(format_rat).collect()).collect()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        RationalPolytope::from_json(text).map(PyPolytope).map_err(to_py)
    }

    fn contains_point(&self, point: Vec<String>) -> PyResult<bool> {
        Ok(self.0.contains_point(&parse_point(&point)?))
    }

    fn normal_fan_rays(&self) -> PyResult<Vec<Vec<i64>>> {
        let rays = convex::normal_fan_rays(&self.0).map_err(to_py)?;
        rays.iter()
            .map(|r| {
                r.iter()
                    .map(|x| i64::try_from(x).map_err(|_| PyValueError::new_err("ray entry out of range")))
                    .collect()
            })
            .collect()
    }

    fn dilate(&self, factor: &str) -> PyResult<Self> {
        let f = parse_rat(factor).map_err(to_py)?;
        convex::dilate(&self.0, &f).map(PyPolytope).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Polytope({})", self.0.to_json())
    }
}

#[pyclass(name = "Semigroup", frozen)]
struct PySemigroup(OkounkovSemigroup);

#[pymethods]
impl PySemigroup {
    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind.as_str()
    }

    #[getter]
    fn max_level(&self) -> u32 {
        self.0.max_level()
    }

    #[getter]
    fn levels(&self) -> BTreeMap<u32, Vec<Vec<u32>>> {
        self.0.levels.iter().map(|(m, vs)| (*m, vs.iter().map(|v| v.0.clone()).collect())).collect()
    }

    fn body_estimate(&self) -> PyResult<PyPolytope> {
        ok::body_estimate(&self.0).map(PyPolytope).map_err(to_py)
    }

    fn generation_degree(&self, kmax: u32) -> Option<u32> {
        ok::generation_degree(&self.0, kmax)
    }

    fn is_closed(&self) -> bool {
        self.0.is_closed()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }
}

#[pyclass(name = "CaseStudy", frozen)]
struct PyCaseStudy(varieties::CaseStudy);

fn kind_arg(kind: &str) -> PyResult<SystemKind> {
    kind.parse().map_err(to_py)
}

#[pymethods]
impl PyCaseStudy {
    #[new]
    #[pyo3(signature = (name, c = 1))]
    fn new(name: &str, c: u64) -> PyResult<Self> {
        varieties::make_case(name, c).map(PyCaseStudy).map_err(to_py)
    }

    #[staticmethod]
    fn from_fixture(text: &str) -> PyResult<Self> {
        varieties::case_from_fixture(text).map(PyCaseStudy).map_err(to_py)
    }

    #[staticmethod]
    fn negative_control() -> Self {
        PyCaseStudy(varieties::negative_control())
    }

    #[getter]
    fn name(&self) -> &str {
        &self.0.name
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n
    }

    #[getter]
    fn r(&self) -> u32 {
        self.0.r
    }

    #[getter]
    fn c(&self) -> u64 {
        self.0.c
    }

    #[getter]
    fn d(&self) -> u64 {
        self.0.d
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.0.var_names.clone()
    }

    /// Flag valuation of a section written in the case's variables.
    fn valuation(&self, section: &str) -> PyResult<Vec<u32>> {
        let s = self.0.parse_section(section).map_err(to_py)?;
        let v = self.0.valuator().map_err(to_py)?.evaluate(&s).map_err(to_py)?;
        Ok(v.vector.0)
    }

    fn leading_unit(&self, section: &str) -> PyResult<String> {
        let s = self.0.parse_section(section).map_err(to_py)?;
        let v = self.0.valuator().map_err(to_py)?.evaluate(&s).map_err(to_py)?;
        Ok(format_rat(&v.leading_unit))
    }

    #[pyo3(signature = (kind = "complete", m = 1))]
    fn basis(&self, kind: &str, m: u32) -> PyResult<Vec<String>> {
        let b = ok::graded_system_basis(&self.0, kind_arg(kind)?, m).map_err(to_py)?;
        Ok(b.iter().map(|s| self.0.display(s)).collect())
    }

    #[pyo3(signature = (kind = "complete", max_level = 4))]
    fn semigroup(&self, py: Python<'_>, kind: &str, max_level: u32) -> PyResult<PySemigroup> {
        let kind = kind_arg(kind)?;
        let case = &self.0;
        py.detach(|| ok::semigroup(case, kind, max_level)).map(PySemigroup).map_err(to_py)
    }

    fn theorem_simplex(&self) -> PyResult<PyPolytope> {
        convex::theorem_simplex(self.0.n, self.0.c, self.0.d).map(PyPolytope).map_err(to_py)
    }

    /// `(passed, final_order, [(check, passed, detail), ...])`.
    fn verify_flag(&self) -> (bool, Option<u32>, Vec<(String, bool, String)>) {
        let r = varieties::verify_flag(&self.0);
        let checks = r.checks.iter().map(|c| (c.name.clone(), c.passed, c.detail.clone())).collect();
        (r.passed(), r.final_order, checks)
    }

    fn __repr__(&self) -> String {
        format!("CaseStudy(name={:?}, n={}, r={}, c={}, d={})", self.0.name, self.0.n, self.0.r, self.0.c, self.0.d)
    }
}

type PyEcPoint = Option<(u64, u64)>;

fn ec_in(p: PyEcPoint) -> EcPoint {
    match p {
        None => EcPoint::Infinity,
        Some((x, y)) => EcPoint::Affine(x, y),
    }
}

fn ec_out(p: EcPoint) -> PyEcPoint {
    match p {
        EcPoint::Infinity => None,
        EcPoint::Affine(x, y) => Some((x, y)),
    }
}

/// `y^2 = x^3 + a x + b` over `F_p`; `None` stands for the point at infinity.
#[pyclass(name = "EllipticCurve", frozen)]
struct PyEllipticCurve(EllipticCurveFp);

#[pymethods]
impl PyEllipticCurve {
    #[new]
    #[pyo3(signature = (p = 101, a = 1, b = 1))]
    fn new(p: u64, a: i64, b: i64) -> PyResult<Self> {
        EllipticCurveFp::new(p, a, b).map(PyEllipticCurve).map_err(to_py)
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    fn points(&self) -> Vec<PyEcPoint> {
        self.0.points().iter().copied().map(ec_out).collect()
    }

    fn add(&self, p: PyEcPoint, q: PyEcPoint) -> PyResult<PyEcPoint> {
        self.0.ec_add(&ec_in(p), &ec_in(q)).map(ec_out).map_err(to_py)
    }

    fn mul(&self, k: i64, p: PyEcPoint) -> PyResult<PyEcPoint> {
        self.0.ec_mul(k, &ec_in(p)).map(ec_out).map_err(to_py)
    }

    /// `(found, P)` for the first `P` with `d P` equal to the class of
    /// `sum n_i P_i`.
    fn single_point_member(&self, divisor: Vec<(PyEcPoint, u64)>, d: u64) -> PyResult<(bool, PyEcPoint)> {
        let divisor: Vec<(EcPoint, u64)> = divisor.into_iter().map(|(p, n)| (ec_in(p), n)).collect();
        let found = varieties::single_point_member(&self.0, &divisor, d).map_err(to_py)?;
        Ok((found.is_some(), found.and_then(ec_out)))
    }
}

#[pyfunction]
fn convex_hull(points: Vec<Vec<String>>) -> PyResult<PyPolytope> {
    let pts = points.iter().map(|p| parse_point(p)).collect::<PyResult<Vec<_>>>()?;
    convex::convex_hull(&pts).map(PyPolytope).map_err(to_py)
}

#[pyfunction]
fn theorem_simplex(n: usize, c: u64, d: u64) -> PyResult<PyPolytope> {
    convex::theorem_simplex(n, c, d).map(PyPolytope).map_err(to_py)
}

#[pyfunction]
fn vertex_criterion(candidate: &PyPolytope, level1: Vec<Vec<u32>>) -> bool {
    let set = level1.into_iter().map(ValuationVector).collect();
    ok::vertex_criterion(&candidate.0, &set)
}

#[pymodule]
pub fn okounkov(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolytope>()?;
    m.add_class::<PySemigroup>()?;
    m.add_class::<PyCaseStudy>()?;
    m.add_class::<PyEllipticCurve>()?;
    m.add_function(wrap_pyfunction!(convex_hull, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_simplex, m)?)?;
    m.add_function(wrap_pyfunction!(vertex_criterion, m)?)?;
    m.add("CASE_NAMES", varieties::CASE_NAMES.to_vec())?;
    Ok(())
}
