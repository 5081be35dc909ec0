//! Python bindings. Exact rationals cross the boundary as strings such as
//! `"3/4"`; inputs may be `int`, `str` or `fractions.Fraction`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use triarea::cli_io::{format_graph, parse_exact, parse_graph, render_svg};
use triarea::exactmath::{isolate_real_roots, sturm_count, Interval, Polynomial, Rational};
use triarea::generators::FamilySpec;
use triarea::realizer::{self, Drawing, RealizationReport};
use triarea::symbolic::{analyze_with, AnalyzeOptions, AreaAssignment, Point};
use triarea::triangulation::{is_eulerian, is_four_connected, separating_triangles, PlaneTriangulation};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let s = obj.str()?.to_string();
    parse_exact(s.trim()).ok_or_else(|| err(format!("not an exact number: {s:?}")))
}

fn rationals(objs: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    objs.iter().map(rational).collect()
}

fn areas(t: &PlaneTriangulation, values: &[Bound<'_, PyAny>]) -> PyResult<AreaAssignment> {
    AreaAssignment::for_triangulation(t, rationals(values)?).map_err(err)
}

fn points(values: &[(Bound<'_, PyAny>, Bound<'_, PyAny>)]) -> PyResult<Drawing> {
    let pts = values
        .iter()
        .map(|(x, y)| Ok(Point::new(rational(x)?, rational(y)?)))
        .collect::<PyResult<Vec<_>>>()?;
    Ok(Drawing::new(pts))
}

fn tolerance(tol: &str) -> PyResult<Rational> {
    parse_exact(tol).ok_or_else(|| err(format!("bad tolerance {tol:?}")))
}

/// A validated plane triangulation: inner faces ccw, outer face cw.
#[pyclass(name = "Triangulation", module = "pytriarea", frozen)]
struct PyTriangulation {
    inner: PlaneTriangulation,
}

#[pymethods]
impl PyTriangulation {
    #[new]
    #[pyo3(signature = (n, faces, outer, labels=None))]
    fn new(n: usize, faces: Vec<[usize; 3]>, outer: [usize; 3], labels: Option<Vec<String>>) -> PyResult<Self> {
        let mut t = PlaneTriangulation::new(n, faces, outer).map_err(err)?;
        if let Some(l) = labels {
            if l.len() != n {
                return Err(err(format!("{} labels for {n} vertices", l.len())));
            }
            t = t.with_labels(l);
        }
        Ok(PyTriangulation { inner: t })
    }

    /// A family member: `"k4"`, `"octahedron"`, `"accordion 3"`,
    /// `"double-stacking 2 2"`, `"stacked 8 1"`.
    #[staticmethod]
    fn generate(spec: &str) -> PyResult<Self> {
        let spec: FamilySpec = spec.parse().map_err(err)?;
        Ok(PyTriangulation {
            inner: spec.build().map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyTriangulation {
            inner: parse_graph(text).map_err(err)?,
        })
    }

    fn to_text(&self) -> String {
        format_graph(&self.inner)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn inner_faces(&self) -> Vec<[usize; 3]> {
        self.inner.inner_faces().to_vec()
    }

    #[getter]
    fn outer_face(&self) -> [usize; 3] {
        self.inner.outer_face()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        (0..self.inner.vertex_count()).map(|v| self.inner.label(v)).collect()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges()
    }

    fn is_eulerian(&self) -> bool {
        is_eulerian(&self.inner)
    }

    fn is_four_connected(&self) -> bool {
        is_four_connected(&self.inner)
    }

    fn separating_triangles(&self) -> Vec<[usize; 3]> {
        separating_triangles(&self.inner).iter().map(|s| s.vertices()).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Triangulation(n={}, inner_faces={})",
            self.inner.vertex_count(),
            self.inner.inner_faces().len()
        )
    }
}

/// Runs the area-universality criterion; returns a dict.
#[pyfunction]
#[pyo3(signature = (t, samples=3, seed=0))]
fn analyze<'py>(py: Python<'py>, t: &PyTriangulation, samples: usize, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let r = analyze_with(&t.inner, &AnalyzeOptions { samples, seed }).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("verdict", format!("{:?}", r.verdict))?;
    d.set_item("summary", r.summary())?;
    d.set_item("exit_code", r.verdict.exit_code())?;
    d.set_item("degrees", r.degrees.map(|(a, b)| (a.to_string(), b.to_string())))?;
    d.set_item("crr", r.crr)?;
    d.set_item("porder", r.porder.as_ref().map(|p| p.order.clone()))?;
    d.set_item("pieces", r.leaves.iter().map(|l| l.summary()).collect::<Vec<_>>())?;
    Ok(d)
}

fn report_dict<'py>(py: Python<'py>, r: &RealizationReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("residual_faces", r.residual_faces())?;
    d.set_item("max_relative_residual", r.max_relative_residual.to_string())?;
    d.set_item("sum_identity", r.sum_identity)?;
    d.set_item("orientations_ok", r.orientations_ok())?;
    d.set_item("strictly_oriented", r.strictly_oriented())?;
    d.set_item("within_tol", r.within_tol())?;
    d.set_item("achieved", r.faces.iter().map(|f| f.achieved.to_string()).collect::<Vec<_>>())?;
    d.set_item("x4", r.x4().map(|x| x.to_string()))?;
    d.set_item("perturbed", r.perturbed)?;
    Ok(d)
}

fn point_strings(d: &Drawing) -> Vec<(String, String)> {
    d.points.iter().map(|p| (p.x.to_string(), p.y.to_string())).collect()
}

/// Draws `t` with the given determinant areas; returns `(points, report)`.
#[pyfunction]
#[pyo3(signature = (t, areas, tol="1e-9"))]
fn realize<'py>(
    py: Python<'py>,
    t: &PyTriangulation,
    areas: Vec<Bound<'py, PyAny>>,
    tol: &str,
) -> PyResult<(Vec<(String, String)>, Bound<'py, PyDict>)> {
    let a = self::areas(&t.inner, &areas)?;
    let (d, r) = realizer::realize(&t.inner, &a, &tolerance(tol)?).map_err(err)?;
    Ok((point_strings(&d), report_dict(py, &r)?))
}

/// Checks a drawing given as `[(x, y), ...]` against the areas.
#[pyfunction]
#[pyo3(signature = (t, areas, points, tol="1e-9"))]
fn verify<'py>(
    py: Python<'py>,
    t: &PyTriangulation,
    areas: Vec<Bound<'py, PyAny>>,
    points: Vec<(Bound<'py, PyAny>, Bound<'py, PyAny>)>,
    tol: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let a = self::areas(&t.inner, &areas)?;
    let d = self::points(&points)?;
    if d.points.len() != t.inner.vertex_count() {
        return Err(err("one point per vertex expected"));
    }
    report_dict(py, &realizer::verify(&t.inner, &a, &d, &tolerance(tol)?))
}

#[pyfunction]
#[pyo3(signature = (t, points, areas=None, tol="1e-9"))]
fn svg<'py>(
    t: &PyTriangulation,
    points: Vec<(Bound<'py, PyAny>, Bound<'py, PyAny>)>,
    areas: Option<Vec<Bound<'py, PyAny>>>,
    tol: &str,
) -> PyResult<String> {
    let d = self::points(&points)?;
    if d.points.len() != t.inner.vertex_count() {
        return Err(err("one point per vertex expected"));
    }
    let a = areas.map(|v| self::areas(&t.inner, &v)).transpose()?;
    Ok(render_svg(&t.inner, &d, a.as_ref(), &tolerance(tol)?))
}

/// Isolating intervals `(lo, hi]` of the real roots of the polynomial with
/// coefficients listed from the constant term up.
#[pyfunction]
fn real_root_intervals(coeffs: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<(String, String)>> {
    let p = Polynomial::new(rationals(&coeffs)?);
    Ok(isolate_real_roots(&p)
        .iter()
        .map(|iv| (iv.lo().to_string(), iv.hi().to_string()))
        .collect())
}

/// Number of distinct real roots in `(lo, hi]`.
#[pyfunction]
fn count_real_roots(coeffs: Vec<Bound<'_, PyAny>>, lo: Bound<'_, PyAny>, hi: Bound<'_, PyAny>) -> PyResult<usize> {
    let p = Polynomial::new(rationals(&coeffs)?);
    let iv = Interval::new(rational(&lo)?, rational(&hi)?).map_err(err)?;
    Ok(sturm_count(&p, &iv))
}

#[pymodule]
fn pytriarea(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTriangulation>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(realize, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(svg, m)?)?;
    m.add_function(wrap_pyfunction!(real_root_intervals, m)?)?;
    m.add_function(wrap_pyfunction!(count_real_roots, m)?)?;
    Ok(())
}
