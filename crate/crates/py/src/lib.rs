//! Python bindings for the newton-moduli library.
//!
//! Exposes the two working objects — divisor-built Newton maps and
//! Puiseux families — plus the module-level conjugacy test and the
//! strictly semistable normal form. Structured reports (GIT classes, the
//! semistable locus) are returned as JSON strings with the same schema as
//! the CLI, so `json.loads` gives dictionaries on the Python side.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use newton_moduli::berkovich::{
    kappa, marked_tree, reduction_at, semistable_locus, tree_equivalent, SemistableLocus,
    TypeIIPoint,
};
use newton_moduli::error::Error;
use newton_moduli::iterate::iterate_report;
use newton_moduli::measure::{
    conformal_barycenter, measure_of_newton, theta_bar, MeasureClass, SpherePoint,
};
use newton_moduli::moduli::{conjugacy_test, git_class, GitClassDescriptor};
use newton_moduli::parse::{parse_scalar, parse_series};
use newton_moduli::projective::P1Point;
use newton_moduli::puiseux::{Exponent, PuiseuxSeries};
use newton_moduli::stability::{classify_newton, strictly_semistable_normal_form};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(format!("{}: {e}", e.code()))
}

fn parse_points(roots: &[String]) -> PyResult<Vec<P1Point>> {
    roots
        .iter()
        .map(|r| {
            if r == "inf" {
                Ok(P1Point::Infinity)
            } else {
                parse_scalar(r).map(P1Point::Finite).map_err(py_err)
            }
        })
        .collect()
}

fn class_json(c: &GitClassDescriptor) -> String {
    let value = match c {
        GitClassDescriptor::StrictlySemistable { degree } => serde_json::json!({
            "kind": "strictly_semistable",
            "degree": degree,
        }),
        GitClassDescriptor::Stable {
            degree,
            configuration,
            infinity_multiplicity,
        } => serde_json::json!({
            "kind": "stable",
            "degree": degree,
            "configuration": configuration
                .entries()
                .iter()
                .map(|(p, w)| serde_json::json!([p.to_string(), w]))
                .collect::<Vec<_>>(),
            "infinity_multiplicity": infinity_multiplicity,
        }),
    };
    value.to_string()
}

/// A (possibly degenerate) Newton map built from a root divisor.
///
/// Roots are exact literals (`"0"`, `"1/2+1/3*i"`, `"inf"`), repeated for
/// multiplicity.
#[pyclass(name = "NewtonMap")]
struct PyNewtonMap {
    inner: newton_moduli::newton::NewtonMap,
}

#[pymethods]
impl PyNewtonMap {
    #[new]
    fn new(roots: Vec<String>) -> PyResult<Self> {
        let points = parse_points(&roots)?;
        let divisor = newton_moduli::newton::RootDivisor::from_points(points).map_err(py_err)?;
        let inner = newton_moduli::newton::NewtonMap::from_divisor(divisor).map_err(py_err)?;
        Ok(PyNewtonMap { inner })
    }

    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    /// The source divisor as (point, multiplicity) pairs.
    fn divisor(&self) -> Vec<(String, u32)> {
        self.inner
            .divisor()
            .entries()
            .iter()
            .map(|(p, m)| (p.to_string(), *m))
            .collect()
    }

    /// Holes with depths; empty for nondegenerate maps.
    fn holes(&self) -> Vec<(String, u32)> {
        self.inner
            .holes_and_depths()
            .iter()
            .map(|(p, m)| (p.to_string(), *m))
            .collect()
    }

    /// "stable" | "strictly_semistable" | "unstable".
    fn classify(&self) -> String {
        classify_newton(&self.inner).kind.as_str().to_string()
    }

    /// The numerator and denominator forms, as display strings.
    fn pair(&self) -> (String, String) {
        (
            self.inner.pair().numerator().to_string(),
            self.inner.pair().denominator().to_string(),
        )
    }

    /// GIT class descriptor as a JSON string.
    fn git_class(&self) -> PyResult<String> {
        git_class(&self.inner)
            .map(|c| class_json(&c))
            .map_err(py_err)
    }

    /// Exact multiplier `(m-1)/m` at a root of the divisor.
    fn multiplier_at(&self, root: String) -> PyResult<String> {
        let p = if root == "inf" {
            P1Point::Infinity
        } else {
            P1Point::Finite(parse_scalar(&root).map_err(py_err)?)
        };
        self.inner
            .multiplier_at_root(&p)
            .map(|m| m.to_string())
            .map_err(py_err)
    }

    /// Verdicts of N, N^2, ..., N^n by symbolic composition.
    #[pyo3(signature = (n, budget=None))]
    fn iterate_verdicts(&self, n: u32, budget: Option<u64>) -> PyResult<Vec<String>> {
        let report = iterate_report(&self.inner, n, budget).map_err(py_err)?;
        Ok(report
            .steps
            .iter()
            .map(|s| s.verdict.kind.as_str().to_string())
            .collect())
    }

    /// Truncated maximal measure: (point, exact mass) pairs, with `None`
    /// standing for infinity, plus the exact tail bound.
    #[allow(clippy::type_complexity)]
    fn measure(&self, levels: u32) -> PyResult<(Vec<(Option<(f64, f64)>, String)>, String)> {
        let m = measure_of_newton(&self.inner, levels).map_err(py_err)?;
        let atoms = m
            .atoms()
            .iter()
            .map(|(p, mass)| {
                let pos = match p {
                    SpherePoint::Infinity => None,
                    SpherePoint::Finite(z) => Some((z.re, z.im)),
                };
                (pos, mass.to_string())
            })
            .collect();
        Ok((atoms, m.tail_bound().to_string()))
    }

    /// Conformal barycenter of the truncated measure, in the unit ball.
    fn barycenter(&self, levels: u32) -> PyResult<(f64, f64, f64)> {
        let m = measure_of_newton(&self.inner, levels).map_err(py_err)?;
        let b = conformal_barycenter(&m).map_err(py_err)?;
        Ok((b.0[0], b.0[1], b.0[2]))
    }

    /// The measure-class value: "half_atoms" for strictly semistable maps,
    /// otherwise "barycentered" with the recentering residual.
    fn theta(&self, levels: u32) -> PyResult<(String, Option<f64>)> {
        let class = git_class(&self.inner).map_err(py_err)?;
        match theta_bar(&class, &self.inner, levels).map_err(py_err)? {
            MeasureClass::BoundaryHalfAtoms => Ok(("half_atoms".to_string(), None)),
            MeasureClass::Barycentered { residual, .. } => {
                Ok(("barycentered".to_string(), Some(residual)))
            }
        }
    }

    fn __repr__(&self) -> String {
        format!("NewtonMap({})", self.inner.divisor())
    }
}

/// A Puiseux-parametrized family of Newton maps, given by its d roots.
#[pyclass(name = "Family")]
struct PyFamily {
    roots: Vec<PuiseuxSeries>,
    raw: Vec<String>,
}

#[pymethods]
impl PyFamily {
    #[new]
    #[pyo3(signature = (roots, truncation=None))]
    fn new(roots: Vec<String>, truncation: Option<i64>) -> PyResult<Self> {
        let parsed: Result<Vec<_>, _> = roots.iter().map(|r| parse_series(r, truncation)).collect();
        Ok(PyFamily {
            roots: parsed.map_err(py_err)?,
            raw: roots,
        })
    }

    /// Labels of the hull vertices.
    fn vertices(&self) -> PyResult<Vec<String>> {
        let tree = newton_moduli::berkovich::hull_vertices(&self.roots).map_err(py_err)?;
        Ok(tree.vertices().iter().map(|v| v.label()).collect())
    }

    /// Subalgebraic reduction at `xi_{center, q}` as (point, multiplicity)
    /// pairs.
    fn reduction(&self, center: String, q_num: i64, q_den: i64) -> PyResult<Vec<(String, u32)>> {
        let c = parse_series(&center, None).map_err(py_err)?;
        let xi = TypeIIPoint::new(c, Exponent::new(q_num, q_den));
        let div = reduction_at(&self.roots, &xi).map_err(py_err)?;
        Ok(div
            .entries()
            .iter()
            .map(|(p, m)| (p.to_string(), *m))
            .collect())
    }

    /// The semistable locus as a JSON string (same schema as the CLI).
    fn hss(&self) -> PyResult<String> {
        let report = semistable_locus(&self.roots).map_err(py_err)?;
        let locus = match &report.locus {
            SemistableLocus::UniqueStableVertex(v) => serde_json::json!({
                "kind": "unique_stable_vertex",
                "vertex": report.tree.vertex(*v).label(),
            }),
            SemistableLocus::SemistableRegion { vertices, edges } => serde_json::json!({
                "kind": "semistable_region",
                "vertices": vertices
                    .iter()
                    .map(|v| report.tree.vertex(*v).label())
                    .collect::<Vec<_>>(),
                "segments": edges
                    .iter()
                    .map(|(c, p)| serde_json::json!([
                        report.tree.vertex(*c).label(),
                        report.tree.vertex(*p).label()
                    ]))
                    .collect::<Vec<_>>(),
            }),
        };
        Ok(locus.to_string())
    }

    /// The GIT class of the family's semistable reduction (JSON string).
    fn kappa(&self) -> PyResult<String> {
        kappa(&self.roots).map(|c| class_json(&c)).map_err(py_err)
    }

    /// DOT rendering of the marked tree of spheres.
    fn tree_dot(&self) -> PyResult<String> {
        marked_tree(&self.roots).map(|t| t.to_dot()).map_err(py_err)
    }

    /// Number of components / marks / nodes of the induced stable curve.
    fn stable_curve_shape(&self) -> PyResult<(usize, usize, usize)> {
        let t = marked_tree(&self.roots).map_err(py_err)?;
        let c = newton_moduli::berkovich::stable_curve(&t).map_err(py_err)?;
        Ok((c.components.len(), c.mark_count, c.node_count))
    }

    /// Equivalence of the induced marked trees of spheres.
    fn equivalent_to(&self, other: &PyFamily) -> PyResult<bool> {
        let t1 = marked_tree(&self.roots).map_err(py_err)?;
        let t2 = marked_tree(&other.roots).map_err(py_err)?;
        tree_equivalent(&t1, &t2).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Family({:?})", self.raw)
    }
}

/// Exact affine conjugacy `z -> scale*z + offset` between two divisors,
/// or None.
#[pyfunction]
fn conjugacy(a: Vec<String>, b: Vec<String>) -> PyResult<Option<(String, String)>> {
    let build = |roots: &[String]| -> PyResult<newton_moduli::newton::NewtonMap> {
        let points = parse_points(roots)?;
        let d = newton_moduli::newton::RootDivisor::from_points(points).map_err(py_err)?;
        newton_moduli::newton::NewtonMap::from_divisor(d).map_err(py_err)
    };
    let na = build(&a)?;
    let nb = build(&b)?;
    Ok(conjugacy_test(&na, &nb).map(|(s, o)| (s.to_string(), o.to_string())))
}

/// The strictly semistable normal form `phi_d` for odd d, as a pair of
/// form strings.
#[pyfunction]
fn phi_normal_form(d: u32) -> PyResult<(String, String)> {
    let phi = strictly_semistable_normal_form(d).map_err(py_err)?;
    Ok((phi.numerator().to_string(), phi.denominator().to_string()))
}

#[pymodule]
fn newton_moduli_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyNewtonMap>()?;
    m.add_class::<PyFamily>()?;
    m.add_function(wrap_pyfunction!(conjugacy, m)?)?;
    m.add_function(wrap_pyfunction!(phi_normal_form, m)?)?;
    Ok(())
}
