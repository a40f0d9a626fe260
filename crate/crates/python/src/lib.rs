// Copyright (c) 2026, The pellsurf Authors
// SPDX-License-Identifier: Apache-2.0

//! Python bindings: `import pellsurf`.

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;

use pellsurf_core::classmap;
use pellsurf_core::search;
use pellsurf_core::{Error, NewpointVerdict};

create_exception!(
    pellsurf,
    PellsurfError,
    PyValueError,
    "Domain error raised by pellsurf."
);

fn err(e: Error) -> PyErr {
    PellsurfError::new_err(e.to_string())
}

fn same_field(a: &pellsurf_core::FieldContext, b: &pellsurf_core::FieldContext) -> PyResult<()> {
    if a != b {
        return Err(PellsurfError::new_err(format!(
            "points belong to different fields: {} vs {}",
            a.delta(),
            b.delta()
        )));
    }
    Ok(())
}

/// The maximal order of Q(sqrt(delta)) for a fundamental discriminant delta.
#[pyclass(frozen, eq, hash, skip_from_py_object, name = "FieldContext", module = "pellsurf")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyFieldContext {
    inner: pellsurf_core::FieldContext,
}

#[pymethods]
impl PyFieldContext {
    #[new]
    fn new(delta: BigInt) -> PyResult<Self> {
        Ok(PyFieldContext {
            inner: pellsurf_core::FieldContext::new(delta).map_err(err)?,
        })
    }

    #[getter]
    fn delta(&self) -> BigInt {
        self.inner.delta().clone()
    }

    #[getter]
    fn m(&self) -> BigInt {
        self.inner.m().clone()
    }

    #[getter]
    fn sigma(&self) -> u8 {
        self.inner.sigma()
    }

    #[getter]
    fn is_imaginary(&self) -> bool {
        self.inner.is_imaginary()
    }

    /// Q0(x, y) = x^2 + sigma x y - m y^2.
    fn q0(&self, x: BigInt, y: BigInt) -> BigInt {
        self.inner.q0(&x, &y)
    }

    fn __repr__(&self) -> String {
        format!("FieldContext({})", self.inner.delta())
    }
}

/// A primitive point (A, B, C) with Q0(B, C) = A^n.
#[pyclass(frozen, eq, hash, skip_from_py_object, name = "SurfacePoint", module = "pellsurf")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPoint {
    ctx: pellsurf_core::FieldContext,
    inner: pellsurf_core::SurfacePoint,
}

impl PyPoint {
    fn wrap(&self, inner: pellsurf_core::SurfacePoint) -> PyPoint {
        PyPoint {
            ctx: self.ctx.clone(),
            inner,
        }
    }
}

#[pymethods]
impl PyPoint {
    #[new]
    fn new(ctx: &PyFieldContext, n: u32, a: BigInt, b: BigInt, c: BigInt) -> PyResult<Self> {
        let inner = pellsurf_core::SurfacePoint::new(&ctx.inner, n, a, b, c).map_err(err)?;
        Ok(PyPoint {
            ctx: ctx.inner.clone(),
            inner,
        })
    }

    #[staticmethod]
    fn identity(ctx: &PyFieldContext, n: u32) -> PyResult<Self> {
        if n == 0 {
            return Err(err(Error::BadLevel));
        }
        Ok(PyPoint {
            ctx: ctx.inner.clone(),
            inner: pellsurf_core::SurfacePoint::identity(n),
        })
    }

    /// Inverse of `to_yamamoto`.
    #[staticmethod]
    fn from_yamamoto(ctx: &PyFieldContext, n: u32, x: BigInt, y: BigInt, z: BigInt) -> PyResult<Self> {
        let yp = pellsurf_core::YamamotoPoint::new(x, y, z);
        Ok(PyPoint {
            ctx: ctx.inner.clone(),
            inner: pellsurf_core::SurfacePoint::from_yamamoto(&ctx.inner, n, &yp).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn a(&self) -> BigInt {
        self.inner.a().clone()
    }

    #[getter]
    fn b(&self) -> BigInt {
        self.inner.b().clone()
    }

    #[getter]
    fn c(&self) -> BigInt {
        self.inner.c().clone()
    }

    #[getter]
    fn delta(&self) -> BigInt {
        self.ctx.delta().clone()
    }

    fn coords(&self) -> (BigInt, BigInt, BigInt) {
        self.inner.coords()
    }

    fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }

    fn __add__(&self, other: &PyPoint) -> PyResult<PyPoint> {
        same_field(&self.ctx, &other.ctx)?;
        Ok(self.wrap(self.inner.add(&self.ctx, &other.inner).map_err(err)?))
    }

    fn __neg__(&self) -> PyPoint {
        self.wrap(self.inner.negate(&self.ctx))
    }

    fn __sub__(&self, other: &PyPoint) -> PyResult<PyPoint> {
        same_field(&self.ctx, &other.ctx)?;
        let neg = other.inner.negate(&self.ctx);
        Ok(self.wrap(self.inner.add(&self.ctx, &neg).map_err(err)?))
    }

    fn __mul__(&self, k: u64) -> PyResult<PyPoint> {
        Ok(self.wrap(self.inner.scalar_mul(&self.ctx, k).map_err(err)?))
    }

    fn __rmul__(&self, k: u64) -> PyResult<PyPoint> {
        self.__mul__(k)
    }

    /// Sum together with the scaling factor e from gcd(u, v) = e^n.
    fn add_traced(&self, other: &PyPoint) -> PyResult<(PyPoint, BigInt)> {
        same_field(&self.ctx, &other.ctx)?;
        let (s, e) = self.inner.add_traced(&self.ctx, &other.inner).map_err(err)?;
        Ok((self.wrap(s), e))
    }

    /// The image on the surface of level n, for n a multiple of this level.
    fn lift(&self, n: u32) -> PyResult<PyPoint> {
        Ok(self.wrap(self.inner.lift(&self.ctx, n).map_err(err)?))
    }

    /// (X, Y, Z) = (2B + sigma C, C, A) on X^2 - delta Y^2 = 4 Z^n.
    fn to_yamamoto(&self) -> (BigInt, BigInt, BigInt) {
        let y = self.inner.to_yamamoto(&self.ctx);
        (y.x, y.y, y.z)
    }

    /// True when the power-residue test proves the point is not lifted from level n/p.
    fn newpoint(&self, p: u64) -> PyResult<bool> {
        let v = pellsurf_core::surface::newpoint_test(&self.ctx, &self.inner, p).map_err(err)?;
        Ok(v == NewpointVerdict::ProvenNew)
    }

    fn tilde_form(&self) -> PyResult<PyForm> {
        Ok(PyForm {
            inner: classmap::tilde_form(&self.ctx, &self.inner).map_err(err)?,
        })
    }

    /// The form Q_P of discriminant delta attached to the point.
    fn to_form(&self) -> PyResult<PyForm> {
        Ok(PyForm {
            inner: classmap::point_to_form(&self.ctx, &self.inner).map_err(err)?,
        })
    }

    /// The ideal (|A|, beta + omega) in Hermite normal form as (a, b, c).
    fn ideal(&self) -> PyResult<(BigInt, BigInt, BigInt)> {
        let i = classmap::point_ideal(&self.ctx, &self.inner).map_err(err)?;
        Ok((i.a().clone(), i.b().clone(), i.c().clone()))
    }

    /// Searches |T|, |U| <= bound; returns (witness or None, conclusive).
    fn kernel_witness(&self, bound: u64) -> PyResult<(Option<(BigInt, BigInt)>, bool)> {
        let w = classmap::kernel_witness_search(&self.ctx, &self.inner, bound).map_err(err)?;
        Ok((w.witness, w.conclusive))
    }

    fn __repr__(&self) -> String {
        format!(
            "SurfacePoint(delta={}, n={}, {})",
            self.ctx.delta(),
            self.inner.n(),
            self.inner
        )
    }
}

/// A binary quadratic form a x^2 + b x y + c y^2.
#[pyclass(frozen, eq, hash, skip_from_py_object, name = "QuadraticForm", module = "pellsurf")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyForm {
    inner: pellsurf_core::QuadraticForm,
}

#[pymethods]
impl PyForm {
    #[new]
    fn new(a: BigInt, b: BigInt, c: BigInt) -> Self {
        PyForm {
            inner: pellsurf_core::QuadraticForm::new(a, b, c),
        }
    }

    #[getter]
    fn a(&self) -> BigInt {
        self.inner.a.clone()
    }

    #[getter]
    fn b(&self) -> BigInt {
        self.inner.b.clone()
    }

    #[getter]
    fn c(&self) -> BigInt {
        self.inner.c.clone()
    }

    fn disc(&self) -> BigInt {
        self.inner.disc()
    }

    fn coeffs(&self) -> (BigInt, BigInt, BigInt) {
        (self.inner.a.clone(), self.inner.b.clone(), self.inner.c.clone())
    }

    fn reduced(&self) -> PyResult<PyForm> {
        Ok(PyForm {
            inner: self.inner.reduced().map_err(err)?,
        })
    }

    fn is_equivalent(&self, other: &PyForm) -> PyResult<bool> {
        self.inner.is_equivalent(&other.inner).map_err(err)
    }

    fn compose(&self, other: &PyForm) -> PyResult<PyForm> {
        Ok(PyForm {
            inner: self.inner.compose(&other.inner).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("QuadraticForm{}", self.inner)
    }
}

/// The narrow class group with its composition table.
#[pyclass(frozen, name = "ClassGroup", module = "pellsurf")]
struct PyClassGroup {
    ctx: pellsurf_core::FieldContext,
    inner: pellsurf_core::FormClassGroup,
}

impl PyClassGroup {
    fn point<'a>(&self, p: &'a PyPoint) -> PyResult<&'a pellsurf_core::SurfacePoint> {
        same_field(&self.ctx, &p.ctx)?;
        Ok(&p.inner)
    }
}

#[pymethods]
impl PyClassGroup {
    #[new]
    fn new(ctx: &PyFieldContext) -> PyResult<Self> {
        Ok(PyClassGroup {
            ctx: ctx.inner.clone(),
            inner: pellsurf_core::FormClassGroup::new(&ctx.inner).map_err(err)?,
        })
    }

    /// Loads the JSON produced by `to_json`, revalidating it.
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        let inner = pellsurf_core::FormClassGroup::from_json(s).map_err(err)?;
        let ctx = pellsurf_core::FieldContext::new(inner.delta().clone()).map_err(err)?;
        Ok(PyClassGroup { ctx, inner })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn identity(&self) -> usize {
        self.inner.identity()
    }

    #[getter]
    fn reps(&self) -> Vec<PyForm> {
        self.inner.reps().iter().map(|f| PyForm { inner: f.clone() }).collect()
    }

    #[getter]
    fn table(&self) -> Vec<Vec<usize>> {
        self.inner.table().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.order()
    }

    fn mul(&self, i: usize, j: usize) -> PyResult<usize> {
        if i >= self.inner.order() || j >= self.inner.order() {
            return Err(PyValueError::new_err("class index out of range"));
        }
        Ok(self.inner.mul(i, j))
    }

    fn index_of(&self, f: &PyForm) -> PyResult<usize> {
        self.inner.index_of(&f.inner).map_err(err)
    }

    fn torsion(&self, n: u64) -> Vec<usize> {
        self.inner.torsion_subgroup(n)
    }

    fn element_order(&self, i: usize) -> PyResult<usize> {
        if i >= self.inner.order() {
            return Err(PyValueError::new_err("class index out of range"));
        }
        Ok(self.inner.element_order(i))
    }

    fn class_of(&self, p: &PyPoint) -> PyResult<usize> {
        classmap::class_of_point(&self.inner, &self.ctx, self.point(p)?).map_err(err)
    }

    fn kernel_test(&self, p: &PyPoint) -> PyResult<bool> {
        classmap::kernel_test(&self.inner, &self.ctx, self.point(p)?).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("ClassGroup(delta={}, order={})", self.ctx.delta(), self.inner.order())
    }
}

/// All primitive points with |A| <= max_a (and |B|, |C| <= box when delta > 0).
#[pyfunction]
#[pyo3(signature = (ctx, n, max_a, r#box = 1))]
fn enumerate_points(ctx: &PyFieldContext, n: u32, max_a: u64, r#box: u64) -> PyResult<Vec<PyPoint>> {
    let rep = search::enumerate_points(&ctx.inner, n, max_a, r#box).map_err(err)?;
    Ok(rep
        .points
        .into_iter()
        .map(|inner| PyPoint {
            ctx: ctx.inner.clone(),
            inner,
        })
        .collect())
}

/// Coverage report of the enumerated points as a JSON string.
#[pyfunction]
#[pyo3(signature = (group, n, max_a, r#box = 1))]
fn image_scan(group: &PyClassGroup, n: u32, max_a: u64, r#box: u64) -> PyResult<String> {
    let rep = classmap::image_scan(&group.inner, &group.ctx, n, max_a, r#box).map_err(err)?;
    serde_json::to_string(&rep).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Runs a verification suite on enumerated points and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (suite, ctx, n, max_a, r#box = 1, samples = search::DEFAULT_ASSOC_SAMPLES, seed = search::DEFAULT_SEED))]
fn verify(
    suite: &str,
    ctx: &PyFieldContext,
    n: u32,
    max_a: u64,
    r#box: u64,
    samples: usize,
    seed: u64,
) -> PyResult<String> {
    let k = &ctx.inner;
    let pts = search::enumerate_points(k, n, max_a, r#box).map_err(err)?.points;
    let rep = match suite {
        "axioms" => {
            let raw: Vec<_> = pts.iter().map(|p| p.coords()).collect();
            search::axiom_suite(k, n, &raw, samples, seed)
        }
        "gcdpower" => search::gcd_power_check(k, n, &pts),
        "homomorphism" => {
            let g = pellsurf_core::FormClassGroup::new(k).map_err(err)?;
            search::homomorphism_suite(&g, k, n, &pts)
        }
        "oracle" => search::oracle_suite(k, n, &pts),
        other => return Err(PyTypeError::new_err(format!("unknown suite {other:?}"))),
    };
    serde_json::to_string(&rep).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn pellsurf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PellsurfError", m.py().get_type::<PellsurfError>())?;
    m.add_class::<PyFieldContext>()?;
    m.add_class::<PyPoint>()?;
    m.add_class::<PyForm>()?;
    m.add_class::<PyClassGroup>()?;
    m.add_function(wrap_pyfunction!(enumerate_points, m)?)?;
    m.add_function(wrap_pyfunction!(image_scan, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
