//! Python bindings: the transformation type plus the enumeration,
//! Green's-structure and rank-search entry points.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use ctn::families::{self, EnumerateOptions, FamilyId, FamilySet, Method};
use ctn::genrank::{self, GenMode, GensetVariant, InclusionVariant, SearchOptions};
use ctn::greens;

fn value_error(err: ctn::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

/// A full transformation of the chain `{1, ..., n}`, immutable, written
/// on the right: composition is left-to-right.
#[pyclass(frozen, eq, ord, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Transformation {
    inner: ctn::Transformation,
}

impl From<ctn::Transformation> for Transformation {
    fn from(inner: ctn::Transformation) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl Transformation {
    /// Builds a map from its 1-based image list.
    #[new]
    fn new(images: Vec<usize>) -> PyResult<Self> {
        ctn::Transformation::new(images.len(), &images)
            .map(Self::from)
            .map_err(value_error)
    }

    #[staticmethod]
    fn identity(n: usize) -> PyResult<Self> {
        ctn::Transformation::identity(n)
            .map(Self::from)
            .map_err(value_error)
    }

    #[staticmethod]
    fn reversal(n: usize) -> PyResult<Self> {
        ctn::Transformation::reversal(n)
            .map(Self::from)
            .map_err(value_error)
    }

    #[staticmethod]
    fn constant(n: usize, c: usize) -> PyResult<Self> {
        ctn::Transformation::constant(n, c)
            .map(Self::from)
            .map_err(value_error)
    }

    /// Parses the literal grammar `[i1,i2,...,in]`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text.parse::<ctn::Transformation>()
            .map(Self::from)
            .map_err(value_error)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn fix(&self) -> usize {
        self.inner.fix()
    }

    fn images(&self) -> Vec<usize> {
        self.inner.images()
    }

    fn image(&self) -> Vec<usize> {
        self.inner.image()
    }

    fn kernel(&self) -> Vec<Vec<usize>> {
        self.inner.kernel().blocks()
    }

    /// `x ↦ xα` for 1-based `x`.
    fn apply(&self, x: usize) -> PyResult<usize> {
        if x < 1 || x > self.inner.degree() {
            return Err(PyValueError::new_err(format!(
                "point {x} out of range 1..={}",
                self.inner.degree()
            )));
        }
        Ok(self.inner.apply(x))
    }

    /// `x(αβ) = (xα)β`.
    fn compose(&self, other: &Self) -> PyResult<Self> {
        self.inner
            .compose(&other.inner)
            .map(Self::from)
            .map_err(value_error)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.compose(other)
    }

    /// Composition with the reversal: `x ↦ n + 1 - xα`.
    fn star(&self) -> Self {
        Self::from(self.inner.star())
    }

    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let flags = self.inner.classify();
        let dict = PyDict::new(py);
        dict.set_item("order_preserving", flags.order_preserving)?;
        dict.set_item("order_reversing", flags.order_reversing)?;
        dict.set_item("contraction", flags.contraction)?;
        dict.set_item("isometry", flags.isometry)?;
        dict.set_item("idempotent", flags.idempotent)?;
        Ok(dict)
    }

    fn is_idempotent(&self) -> bool {
        self.inner.is_idempotent()
    }

    fn is_contraction(&self) -> bool {
        self.inner.is_contraction()
    }

    fn is_order_preserving(&self) -> bool {
        self.inner.is_order_preserving()
    }

    fn is_order_reversing(&self) -> bool {
        self.inner.is_order_reversing()
    }

    /// Every transversal of the kernel, with convexity and
    /// admissibility flags.
    fn transversals<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let out = PyList::empty(py);
        for t in self.inner.kernel().transversals() {
            let dict = PyDict::new(py);
            dict.set_item("points", t.points)?;
            dict.set_item("convex", t.convex)?;
            dict.set_item("admissible", t.admissible)?;
            out.append(dict)?;
        }
        Ok(out)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Transformation({})", self.inner)
    }
}

fn unwrap_all(elements: Vec<Transformation>) -> Vec<ctn::Transformation> {
    elements.into_iter().map(|t| t.inner).collect()
}

fn wrap_all(elements: &[ctn::Transformation]) -> Vec<Transformation> {
    elements.iter().cloned().map(Transformation::from).collect()
}

fn family_from_list(elements: Vec<Transformation>) -> PyResult<FamilySet> {
    let inner = unwrap_all(elements);
    let n = inner
        .first()
        .map(|t| t.degree())
        .ok_or_else(|| PyValueError::new_err("empty element list"))?;
    FamilySet::from_elements(None, n, inner).map_err(value_error)
}

fn parse_method(method: &str) -> PyResult<Method> {
    match method {
        "filter" => Ok(Method::Filter),
        "construct" => Ok(Method::Construct),
        other => Err(PyValueError::new_err(format!(
            "method must be 'filter' or 'construct', got {other:?}"
        ))),
    }
}

fn mode_from_p(rees_p: Option<usize>) -> GenMode {
    match rees_p {
        Some(p) => GenMode::Rees(p),
        None => GenMode::Plain,
    }
}

/// Elements of a named family in canonical order.
///
/// `spec` is one of: ct, oct, orct, reg-oct, reg-orct, e-oct, e-orct,
/// k:<p>, k*:<p>, j:<p>, e:<p>, l:<p>, m:<p>.
#[pyfunction]
#[pyo3(signature = (spec, n, method = "construct", force_scale = false))]
fn enumerate_family(
    spec: &str,
    n: usize,
    method: &str,
    force_scale: bool,
) -> PyResult<Vec<Transformation>> {
    let id = FamilyId::parse(spec).map_err(value_error)?;
    let method = parse_method(method)?;
    let method = match (method, id.tag) {
        // the predicate families have no constructive route
        (Method::Construct, families::FamilyTag::Ct)
        | (Method::Construct, families::FamilyTag::Oct)
        | (Method::Construct, families::FamilyTag::Orct) => Method::Filter,
        (m, _) => m,
    };
    let opts = EnumerateOptions {
        force_scale,
        ..EnumerateOptions::default()
    };
    let set = families::enumerate(id, n, method, opts).map_err(value_error)?;
    Ok(wrap_all(set.elements()))
}

#[pyfunction]
fn grid_element(
    n: usize,
    p: usize,
    kernel_shift: usize,
    image_shift: usize,
) -> PyResult<Transformation> {
    families::grid_element(n, p, kernel_shift, image_shift)
        .map(Transformation::from)
        .map_err(value_error)
}

/// One of the corner elements: eta, delta, tau, eta*, delta*, tau*.
#[pyfunction]
fn corner(n: usize, p: usize, which: &str) -> PyResult<Transformation> {
    let which = match which {
        "eta" => families::Corner::Eta,
        "delta" => families::Corner::Delta,
        "tau" => families::Corner::Tau,
        "eta*" | "eta_star" => families::Corner::EtaStar,
        "delta*" | "delta_star" => families::Corner::DeltaStar,
        "tau*" | "tau_star" => families::Corner::TauStar,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown corner {other:?} (expected eta, delta, tau, eta*, delta*, tau*)"
            )))
        }
    };
    families::corner(n, p, which)
        .map(Transformation::from)
        .map_err(value_error)
}

/// The interval idempotent `x ↦ clamp(x, i, i+j)`.
#[pyfunction]
fn idempotent_from(n: usize, i: usize, j: usize) -> PyResult<Transformation> {
    families::idempotent_from(n, i, j)
        .map(Transformation::from)
        .map_err(value_error)
}

/// Same-image ("r") or same-kernel ("l") class of `t` within `family`.
#[pyfunction]
fn green_class(
    t: &Transformation,
    family: Vec<Transformation>,
    relation: &str,
) -> PyResult<Vec<Transformation>> {
    let relation = match relation {
        "r" | "R" => families::Relation::R,
        "l" | "L" => families::Relation::L,
        other => {
            return Err(PyValueError::new_err(format!(
                "relation must be 'r' or 'l', got {other:?}"
            )))
        }
    };
    let set = family_from_list(family)?;
    let class = families::class_of(&t.inner, &set, relation).map_err(value_error)?;
    Ok(wrap_all(class.elements()))
}

/// Product-saturation closure of a generator list.
#[pyfunction]
fn closure(gens: Vec<Transformation>) -> PyResult<Vec<Transformation>> {
    let set = genrank::closure(&unwrap_all(gens)).map_err(value_error)?;
    Ok(wrap_all(set.elements()))
}

/// Closure under the height-`p` Rees product. Returns the carrier and
/// whether the quotient zero was reached.
#[pyfunction]
fn rees_closure(gens: Vec<Transformation>, p: usize) -> PyResult<(Vec<Transformation>, bool)> {
    let reached = genrank::rees_closure(&unwrap_all(gens), p).map_err(value_error)?;
    Ok((wrap_all(reached.carrier.elements()), reached.reached_zero))
}

/// Whether `gens` generate `target` (plainly, or in the height-`p` Rees
/// quotient when `rees_p` is given).
#[pyfunction]
#[pyo3(signature = (gens, target, rees_p = None))]
fn generates(
    gens: Vec<Transformation>,
    target: Vec<Transformation>,
    rees_p: Option<usize>,
) -> PyResult<bool> {
    let target = family_from_list(target)?;
    genrank::generates(&unwrap_all(gens), &target, mode_from_p(rees_p)).map_err(value_error)
}

/// Shortest factorization of `target` over `gens` as generator indices,
/// or `None` when unreachable.
#[pyfunction]
#[pyo3(signature = (target, gens, rees_p = None))]
fn factorize(
    target: &Transformation,
    gens: Vec<Transformation>,
    rees_p: Option<usize>,
) -> Option<Vec<usize>> {
    genrank::factorize(&target.inner, &unwrap_all(gens), mode_from_p(rees_p)).map(|w| w.0)
}

/// Elements of a closed set that the remaining elements do not generate.
#[pyfunction]
fn indecomposables(elements: Vec<Transformation>) -> PyResult<Vec<Transformation>> {
    let set = family_from_list(elements)?;
    let ind = genrank::indecomposables(&set).map_err(value_error)?;
    Ok(wrap_all(ind.elements()))
}

fn json_to_py<'py>(py: Python<'py>, value: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    let object = match value {
        serde_json::Value::Null => py.None().into_bound(py),
        serde_json::Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        serde_json::Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else if let Some(u) = num.as_u64() {
                u.into_pyobject(py)?.into_any()
            } else {
                num.as_f64().unwrap().into_pyobject(py)?.into_any()
            }
        }
        serde_json::Value::String(s) => s.into_pyobject(py)?.into_any(),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (key, item) in map {
                dict.set_item(key, json_to_py(py, item)?)?;
            }
            dict.into_any()
        }
    };
    Ok(object)
}

/// Exact minimal-generating-set certificate for a closed element list,
/// as a dict: target, size, generators (literals), exhaustive_below,
/// subsets_tested, budget_exhausted, ...
#[pyfunction]
#[pyo3(signature = (elements, rees_p = None, budget = 10_000_000))]
fn min_rank<'py>(
    py: Python<'py>,
    elements: Vec<Transformation>,
    rees_p: Option<usize>,
    budget: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let set = family_from_list(elements)?;
    let cert = genrank::min_rank(&set, mode_from_p(rees_p), &SearchOptions { budget })
        .map_err(value_error)?;
    let value =
        serde_json::to_value(&cert).map_err(|err| PyValueError::new_err(err.to_string()))?;
    json_to_py(py, &value)
}

/// The named corner generating set of the height-`p` quotient:
/// variant "q" (order-preserving) or "w" (with the starred column).
#[pyfunction]
fn quotient_genset(n: usize, p: usize, variant: &str) -> PyResult<Vec<Transformation>> {
    let variant = match variant {
        "q" | "Q" => GensetVariant::Q,
        "w" | "W" => GensetVariant::W,
        other => {
            return Err(PyValueError::new_err(format!(
                "variant must be 'q' or 'w', got {other:?}"
            )))
        }
    };
    let gens = genrank::quotient_genset(n, p, variant).map_err(value_error)?;
    Ok(wrap_all(&gens))
}

/// Whether every height-`p` element lies in the closure of the
/// height-`p+1` slice; variant "k" or "j".
#[pyfunction]
fn inclusion_check(n: usize, p: usize, variant: &str) -> PyResult<bool> {
    let variant = match variant {
        "k" | "K" => InclusionVariant::K,
        "j" | "J" => InclusionVariant::J,
        other => {
            return Err(PyValueError::new_err(format!(
                "variant must be 'k' or 'j', got {other:?}"
            )))
        }
    };
    genrank::inclusion_check(n, p, variant).map_err(value_error)
}

/// Green's class partitions of an element list, as index lists: keys
/// "r", "l", "h", "d". With `by_ideals=True` the classes come from
/// principal ideals (requires a closed list).
#[pyfunction]
#[pyo3(signature = (elements, by_ideals = false))]
fn greens_classes<'py>(
    py: Python<'py>,
    elements: Vec<Transformation>,
    by_ideals: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let set = family_from_list(elements)?;
    let structure = if by_ideals {
        greens::greens_abstract(&set).map_err(value_error)?
    } else {
        greens::greens_by_invariants(&set)
    };
    let dict = PyDict::new(py);
    dict.set_item("r", structure.r_classes)?;
    dict.set_item("l", structure.l_classes)?;
    dict.set_item("h", structure.h_classes)?;
    dict.set_item("d", structure.d_classes)?;
    Ok(dict)
}

/// Structural checks (closed, all_regular, l_unipotent, idempotent
/// count, witnesses) as a dict.
#[pyfunction]
fn structure_report<'py>(
    py: Python<'py>,
    elements: Vec<Transformation>,
) -> PyResult<Bound<'py, PyAny>> {
    let set = family_from_list(elements)?;
    let report = greens::structure_report(&set);
    let value: serde_json::Value = serde_json::from_str(&report.to_json())
        .map_err(|err| PyValueError::new_err(err.to_string()))?;
    json_to_py(py, &value)
}

/// The claimed order of a family at degree `n`, when a closed formula
/// exists: dict with value, source, label and an optional note.
#[pyfunction]
fn count_claim<'py>(py: Python<'py>, spec: &str, n: usize) -> PyResult<Option<Bound<'py, PyDict>>> {
    let id = FamilyId::parse(spec).map_err(value_error)?;
    match ctn::claims::count_claim(id, n) {
        Some(claim) => {
            let dict = PyDict::new(py);
            dict.set_item("value", claim.value)?;
            dict.set_item("source", claim.source.to_string())?;
            dict.set_item("label", claim.label)?;
            dict.set_item("note", claim.note)?;
            Ok(Some(dict))
        }
        None => Ok(None),
    }
}

#[pymodule]
fn ctn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Transformation>()?;
    m.add_function(wrap_pyfunction!(enumerate_family, m)?)?;
    m.add_function(wrap_pyfunction!(grid_element, m)?)?;
    m.add_function(wrap_pyfunction!(corner, m)?)?;
    m.add_function(wrap_pyfunction!(idempotent_from, m)?)?;
    m.add_function(wrap_pyfunction!(green_class, m)?)?;
    m.add_function(wrap_pyfunction!(closure, m)?)?;
    m.add_function(wrap_pyfunction!(rees_closure, m)?)?;
    m.add_function(wrap_pyfunction!(generates, m)?)?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(indecomposables, m)?)?;
    m.add_function(wrap_pyfunction!(min_rank, m)?)?;
    m.add_function(wrap_pyfunction!(quotient_genset, m)?)?;
    m.add_function(wrap_pyfunction!(inclusion_check, m)?)?;
    m.add_function(wrap_pyfunction!(greens_classes, m)?)?;
    m.add_function(wrap_pyfunction!(structure_report, m)?)?;
    m.add_function(wrap_pyfunction!(count_claim, m)?)?;
    Ok(())
}
