//! Python bindings. Rationals cross the boundary as `fractions.Fraction`
//! on the way out and as anything whose `str()` is `p` or `p/q` on the way in.
//! Structures can also be built from the JSON documents the CLI reads.

use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use trilie::alternating::AlternatingForm;
use trilie::exactlin::{format_rational, parse_rational};
use trilie::families::{self, GradedFamily, Laurent, Omega, OmegaIndex};
use trilie::format::{self as fmt, Source};
use trilie::nsnr::{self, NSThreeLie, NijenhuisOp, ReynoldsOp};
use trilie::repcoh::{self, CohomologyRow, Representation, TwistedContext, TwoCochain};
use trilie::threelie::{self, ThreeLieAlgebra};
use trilie::trbo::{self, TwistedRbo};
use trilie::{Error, Matrix, Rational, Report, Vector};

/// 1-based `(i, j, k)` paired with the coordinates of a value on `e_i, e_j, e_k`.
type Entries<'py> = Vec<((usize, usize, usize), Vec<Bound<'py, PyAny>>)>;

create_exception!(trilie, TrilieError, PyException);
create_exception!(trilie, VerificationError, TrilieError);

fn err(e: Error) -> PyErr {
    match e {
        Error::VerificationFailed { .. } => VerificationError::new_err(e.to_string()),
        e if e.is_input_error() || matches!(e, Error::DimensionMismatch(_)) => PyValueError::new_err(e.to_string()),
        e => TrilieError::new_err(e.to_string()),
    }
}

trait OrRaise<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for trilie::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(err)
    }
}

fn rational_in(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let s = obj.str()?;
    let s = s.to_cow()?;
    parse_rational(&s).ok_or_else(|| PyValueError::new_err(format!("not a rational: {s:?}")))
}

fn vector_in(items: Vec<Bound<'_, PyAny>>) -> PyResult<Vector> {
    items.iter().map(rational_in).collect()
}

fn matrix_in(rows: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Matrix> {
    let rows = rows.into_iter().map(vector_in).collect::<PyResult<Vec<_>>>()?;
    Matrix::from_rows(rows).py()
}

fn rational_out<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format_rational(r),))
}

fn vector_out<'py>(py: Python<'py>, v: &[Rational]) -> PyResult<Bound<'py, PyList>> {
    let items = v.iter().map(|r| rational_out(py, r)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

fn matrix_out<'py>(py: Python<'py>, m: &Matrix) -> PyResult<Bound<'py, PyList>> {
    let rows = m.to_rows().iter().map(|r| vector_out(py, r)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, rows)
}

fn json_in(text: &str) -> PyResult<serde_json::Value> {
    serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Relative references inside a JSON document resolve against the working directory.
fn inline() -> Source {
    Source::inline(".")
}

fn rows_out<'py>(py: Python<'py>, rows: &[CohomologyRow]) -> PyResult<Bound<'py, PyList>> {
    let dicts = rows
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("degree", r.degree)?;
            d.set_item("cochains", r.cochains)?;
            d.set_item("cocycles", r.cocycles)?;
            d.set_item("coboundaries", r.coboundaries)?;
            d.set_item("cohomology", r.cohomology)?;
            Ok(d)
        })
        .collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, dicts)
}

/// Outcome of one identity check.
#[pyclass(name = "Report", module = "trilie", frozen)]
struct PyReport(Report);

#[pymethods]
impl PyReport {
    #[getter]
    fn subject(&self) -> &str {
        &self.0.subject
    }

    #[getter]
    fn passed(&self) -> bool {
        self.0.passed()
    }

    #[getter]
    fn tuples_checked(&self) -> usize {
        self.0.tuples_checked
    }

    #[getter]
    fn notes(&self) -> Vec<String> {
        self.0.notes.clone()
    }

    /// Each violation as a dict with `identity`, 1-based `tuple`, `lhs` and `rhs`.
    #[getter]
    fn violations<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let items = self
            .0
            .violations
            .iter()
            .map(|v| {
                let d = PyDict::new(py);
                d.set_item("identity", &v.identity)?;
                d.set_item("tuple", v.tuple.clone())?;
                d.set_item("lhs", vector_out(py, &v.lhs)?)?;
                d.set_item("rhs", vector_out(py, &v.rhs)?)?;
                Ok(d)
            })
            .collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, items)
    }

    fn summary(&self) -> String {
        self.0.summary()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("reports serialize")
    }

    fn __bool__(&self) -> bool {
        self.0.passed()
    }

    fn __repr__(&self) -> String {
        format!("<Report {}>", self.0.summary())
    }
}

fn report(r: Report) -> PyReport {
    PyReport(r)
}

#[pyclass(name = "ThreeLieAlgebra", module = "trilie", frozen)]
struct PyAlgebra(ThreeLieAlgebra);

#[pymethods]
impl PyAlgebra {
    /// `brackets` maps 1-based `(i, j, k)` to the coordinates of `[e_i, e_j, e_k]`.
    #[new]
    fn new(dim: usize, brackets: Entries<'_>) -> PyResult<Self> {
        let mut entries = Vec::with_capacity(brackets.len());
        for ((i, j, k), v) in brackets {
            if i == 0 || j == 0 || k == 0 {
                return Err(PyValueError::new_err("basis indices are 1-based"));
            }
            entries.push(((i - 1, j - 1, k - 1), vector_in(v)?));
        }
        Ok(PyAlgebra(ThreeLieAlgebra::from_brackets(dim, entries).py()?))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyAlgebra(fmt::algebra_from_json(&json_in(text)?, &inline()).py()?))
    }

    /// Reads a file; relative references resolve against its directory.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(PyAlgebra(fmt::load_algebra(&path).py()?))
    }

    fn to_json(&self) -> String {
        fmt::algebra_to_json(&self.0).to_string()
    }

    /// `[e1, e2, e3] = e1`.
    #[staticmethod]
    fn dim3() -> Self {
        PyAlgebra(trilie::fixtures::dim3())
    }

    #[staticmethod]
    fn simple4() -> Self {
        PyAlgebra(trilie::fixtures::simple4())
    }

    /// A skew bracket violating the fundamental identity.
    #[staticmethod]
    fn broken() -> Self {
        PyAlgebra(trilie::fixtures::broken())
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn is_verified(&self) -> bool {
        self.0.is_verified()
    }

    /// A verified copy; raises `VerificationError` if the identity fails.
    fn verify(&self) -> PyResult<Self> {
        Ok(PyAlgebra(self.0.clone().verify().py()?))
    }

    fn bracket<'py>(
        &self,
        py: Python<'py>,
        x: Vec<Bound<'py, PyAny>>,
        y: Vec<Bound<'py, PyAny>>,
        z: Vec<Bound<'py, PyAny>>,
    ) -> PyResult<Bound<'py, PyList>> {
        let v = self.0.bracket(&vector_in(x)?, &vector_in(y)?, &vector_in(z)?).py()?;
        vector_out(py, &v)
    }

    fn check_fundamental_identity(&self) -> PyReport {
        report(threelie::check_fundamental_identity(&self.0))
    }

    fn check_derivation(&self, d: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<PyReport> {
        Ok(report(threelie::check_derivation(&self.0, &matrix_in(d)?).py()?))
    }

    fn check_homomorphism(&self, target: &PyAlgebra, phi: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<PyReport> {
        Ok(report(threelie::check_homomorphism(&self.0, &target.0, &matrix_in(phi)?).py()?))
    }

    fn check_nijenhuis(&self, n: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<PyReport> {
        Ok(report(nsnr::check_nijenhuis(&self.0, &matrix_in(n)?).py()?))
    }

    fn check_reynolds(&self, r: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<PyReport> {
        Ok(report(nsnr::check_reynolds(&self.0, &matrix_in(r)?).py()?))
    }

    fn adjoint(&self) -> PyResult<PyRep> {
        Ok(PyRep(Representation::adjoint(&self.0).py()?))
    }

    fn __repr__(&self) -> String {
        format!("<ThreeLieAlgebra dim={} verified={}>", self.0.dim(), self.0.is_verified())
    }
}

#[pyclass(name = "Representation", module = "trilie", frozen)]
struct PyRep(Representation);

#[pymethods]
impl PyRep {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyRep(fmt::rep_from_json(&json_in(text)?, &inline()).py()?))
    }

    /// Reads a file; relative references resolve against its directory.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(PyRep(fmt::load_rep(&path).py()?))
    }

    fn to_json(&self) -> String {
        fmt::rep_to_json(&self.0).to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn dim_v(&self) -> usize {
        self.0.dim_v()
    }

    #[getter]
    fn algebra(&self) -> PyAlgebra {
        PyAlgebra(self.0.carrier().clone())
    }

    /// Verifies the carrier algebra and then the representation.
    fn verify(&self) -> PyResult<Self> {
        Ok(PyRep(self.0.clone().verify_all().py()?))
    }

    fn check(&self) -> PyReport {
        report(repcoh::check_representation(&self.0))
    }

    /// `ρ(x, y)` as a matrix.
    fn rho<'py>(&self, py: Python<'py>, x: Vec<Bound<'py, PyAny>>, y: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyList>> {
        let (x, y) = (vector_in(x)?, vector_in(y)?);
        if x.len() != self.0.dim() || y.len() != self.0.dim() {
            return Err(PyValueError::new_err(format!("expected vectors of length {}", self.0.dim())));
        }
        matrix_out(py, &self.0.rho(&x, &y))
    }

    /// `phi` maps 1-based `(i, j, k)` to a vector in V.
    fn check_cocycle(&self, phi: Entries<'_>) -> PyResult<PyReport> {
        let phi = two_cochain(self.0.dim(), self.0.dim_v(), phi)?;
        Ok(report(repcoh::check_2cocycle(&self.0, &phi).py()?))
    }

    #[pyo3(signature = (nmax = 2))]
    fn cohomology<'py>(&self, py: Python<'py>, nmax: usize) -> PyResult<Bound<'py, PyList>> {
        rows_out(py, &repcoh::cohomology_dims(&self.0, nmax).py()?)
    }

    fn __repr__(&self) -> String {
        format!("<Representation dim={} dim_v={}>", self.0.dim(), self.0.dim_v())
    }
}

fn two_cochain(d: usize, dv: usize, entries: Entries<'_>) -> PyResult<TwoCochain> {
    let mut f = AlternatingForm::zero(d, dv);
    for ((i, j, k), v) in entries {
        if i == 0 || j == 0 || k == 0 {
            return Err(PyValueError::new_err("basis indices are 1-based"));
        }
        f.set(i - 1, j - 1, k - 1, vector_in(v)?).py()?;
    }
    Ok(TwoCochain::new(f))
}

#[pyclass(name = "TwistedContext", module = "trilie", frozen)]
struct PyContext(TwistedContext);

#[pymethods]
impl PyContext {
    /// Without `phi` the context is untwisted.
    #[new]
    #[pyo3(signature = (rep, phi = None))]
    fn new(rep: &PyRep, phi: Option<Entries<'_>>) -> PyResult<Self> {
        let phi = match phi {
            Some(p) => two_cochain(rep.0.dim(), rep.0.dim_v(), p)?,
            None => TwoCochain::zero(rep.0.dim(), rep.0.dim_v()),
        };
        Ok(PyContext(TwistedContext::new(rep.0.clone(), phi).py()?))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyContext(fmt::context_from_json(&json_in(text)?, &inline()).py()?))
    }

    /// Reads a file; relative references resolve against its directory.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(PyContext(fmt::load_context(&path).py()?))
    }

    /// The adjoint representation twisted by minus the bracket.
    #[staticmethod]
    fn reynolds(algebra: &PyAlgebra) -> PyResult<Self> {
        let rep = Representation::adjoint(&algebra.0).py()?;
        Ok(PyContext(TwistedContext::new(rep, TwoCochain::from_bracket(&algebra.0).neg()).py()?))
    }

    fn to_json(&self) -> String {
        fmt::context_to_json(&self.0).to_string()
    }

    fn verify(&self) -> PyResult<Self> {
        Ok(PyContext(self.0.clone().verify_all().py()?))
    }

    #[getter]
    fn rep(&self) -> PyRep {
        PyRep(self.0.rep().clone())
    }

    /// Verifies the representation, then checks Φ.
    fn check_cocycle(&self) -> PyResult<PyReport> {
        let rep = self.0.rep().clone().verify_all().py()?;
        Ok(report(repcoh::check_2cocycle(&rep, self.0.phi()).py()?))
    }

    fn semidirect(&self) -> PyResult<PyAlgebra> {
        Ok(PyAlgebra(repcoh::twisted_semidirect(&self.0).py()?))
    }
}

#[pyclass(name = "TwistedRbo", module = "trilie", frozen)]
struct PyRbo(TwistedRbo);

#[pymethods]
impl PyRbo {
    /// `t` is a `dim × dim_v` matrix given as rows.
    #[new]
    fn new(context: &PyContext, t: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        Ok(PyRbo(TwistedRbo::new(context.0.clone(), matrix_in(t)?).py()?))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyRbo(fmt::operator_from_json(&json_in(text)?, &inline()).py()?))
    }

    /// Reads a file; relative references resolve against its directory.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(PyRbo(fmt::load_operator(&path).py()?))
    }

    /// The operator `f⁻¹` for an invertible `f: V → g`, twisted so that it satisfies the identity.
    #[staticmethod]
    fn from_inverse(rep: &PyRep, f: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        Ok(PyRbo(TwistedRbo::from_inverse(rep.0.clone(), &matrix_in(f)?).py()?))
    }

    fn to_json(&self) -> String {
        fmt::operator_to_json(&self.0).to_string()
    }

    /// Verifies the context and then the operator.
    fn verify(&self) -> PyResult<Self> {
        Ok(PyRbo(self.0.clone().verify_all().py()?))
    }

    #[getter]
    fn matrix<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        matrix_out(py, self.0.matrix())
    }

    /// Verifies the context, then checks the operator identity.
    fn check(&self) -> PyResult<PyReport> {
        Ok(report(trbo::check_twisted_rbo(&self.with_verified_context()?).py()?))
    }

    fn check_graph(&self) -> PyResult<PyReport> {
        Ok(report(trbo::graph_closure_check(&self.with_verified_context()?).py()?))
    }

    fn induced_bracket(&self) -> PyResult<PyAlgebra> {
        Ok(PyAlgebra(trbo::induced_bracket(&self.0).py()?))
    }

    fn induced_rep(&self) -> PyResult<PyRep> {
        Ok(PyRep(trbo::induced_rep_varrho(&self.0).py()?))
    }

    #[pyo3(signature = (nmax = 2))]
    fn cohomology<'py>(&self, py: Python<'py>, nmax: usize) -> PyResult<Bound<'py, PyList>> {
        rows_out(py, &trbo::trbo_cohomology_dims(&self.0, nmax).py()?)
    }

    fn delta<'py>(&self, py: Python<'py>, x: Vec<Bound<'py, PyAny>>, y: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyList>> {
        matrix_out(py, &trbo::delta(&self.0, &vector_in(x)?, &vector_in(y)?).py()?)
    }

    fn gauge(&self, f: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        Ok(PyRbo(trbo::t_admissible_gauge(&self.0, &matrix_in(f)?).py()?))
    }

    /// Reports for the coefficients of t, t², t³ and t⁴.
    fn check_deformation(&self, frak: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Vec<PyReport>> {
        let r = trbo::check_deformation(&self.0, &matrix_in(frak)?).py()?;
        Ok(r.reports().into_iter().cloned().map(report).collect())
    }

    fn check_equivalence(
        &self,
        frak1: Vec<Vec<Bound<'_, PyAny>>>,
        frak2: Vec<Vec<Bound<'_, PyAny>>>,
        x: Vec<Bound<'_, PyAny>>,
        y: Vec<Bound<'_, PyAny>>,
    ) -> PyResult<PyReport> {
        let r = trbo::check_deformation_equivalence(
            &self.0,
            &matrix_in(frak1)?,
            &matrix_in(frak2)?,
            &vector_in(x)?,
            &vector_in(y)?,
        );
        Ok(report(r.py()?))
    }

    fn ns(&self) -> PyResult<PyNS> {
        Ok(PyNS(nsnr::ns_from_trbo(&self.0).py()?))
    }
}

impl PyRbo {
    fn with_verified_context(&self) -> PyResult<TwistedRbo> {
        let ctx = self.0.context().clone().verify_all().py()?;
        TwistedRbo::new(ctx, self.0.matrix().clone()).py()
    }
}

#[pyclass(name = "NSThreeLie", module = "trilie", frozen)]
struct PyNS(NSThreeLie);

#[pymethods]
impl PyNS {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyNS(fmt::ns_from_json(&json_in(text)?, &inline()).py()?))
    }

    /// Reads a file; relative references resolve against its directory.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(PyNS(fmt::load_ns(&path).py()?))
    }

    fn to_json(&self) -> String {
        fmt::ns_to_json(&self.0).to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn check(&self) -> PyReport {
        report(nsnr::check_ns_axioms(&self.0))
    }

    fn curly<'py>(
        &self,
        py: Python<'py>,
        x: Vec<Bound<'py, PyAny>>,
        y: Vec<Bound<'py, PyAny>>,
        z: Vec<Bound<'py, PyAny>>,
    ) -> PyResult<Bound<'py, PyList>> {
        let (x, y, z) = self.args(x, y, z)?;
        vector_out(py, &self.0.curly(&x, &y, &z))
    }

    fn square<'py>(
        &self,
        py: Python<'py>,
        x: Vec<Bound<'py, PyAny>>,
        y: Vec<Bound<'py, PyAny>>,
        z: Vec<Bound<'py, PyAny>>,
    ) -> PyResult<Bound<'py, PyList>> {
        let (x, y, z) = self.args(x, y, z)?;
        vector_out(py, &self.0.square(&x, &y, &z))
    }

    /// The subadjacent 3-Lie algebra; raises if the axioms fail.
    fn subadjacent(&self) -> PyResult<PyAlgebra> {
        let ns = NSThreeLie::new(self.0.curly_form().clone(), self.0.square_form().clone())
            .and_then(NSThreeLie::verify)
            .py()?;
        Ok(PyAlgebra(nsnr::subadjacent(&ns).py()?))
    }
}

impl PyNS {
    fn args(&self, x: Vec<Bound<'_, PyAny>>, y: Vec<Bound<'_, PyAny>>, z: Vec<Bound<'_, PyAny>>) -> PyResult<(Vector, Vector, Vector)> {
        let (x, y, z) = (vector_in(x)?, vector_in(y)?, vector_in(z)?);
        if [&x, &y, &z].iter().any(|v| v.len() != self.0.dim()) {
            return Err(PyValueError::new_err(format!("expected vectors of length {}", self.0.dim())));
        }
        Ok((x, y, z))
    }
}

fn nijenhuis(algebra: &PyAlgebra, n: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<NijenhuisOp> {
    let a = algebra.0.clone().verify().py()?;
    NijenhuisOp::new(a, matrix_in(n)?).and_then(NijenhuisOp::verify).py()
}

fn reynolds(algebra: &PyAlgebra, r: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<ReynoldsOp> {
    let a = algebra.0.clone().verify().py()?;
    ReynoldsOp::new(a, matrix_in(r)?).and_then(ReynoldsOp::verify).py()
}

/// The identity map as a twisted operator for the Nijenhuis-deformed algebra.
#[pyfunction]
fn nijenhuis_trbo(algebra: &PyAlgebra, n: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<PyRbo> {
    Ok(PyRbo(nsnr::nijenhuis_trbo(&nijenhuis(algebra, n)?).py()?))
}

#[pyfunction]
fn ns_from_nijenhuis(algebra: &PyAlgebra, n: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<PyNS> {
    Ok(PyNS(nsnr::ns_from_nijenhuis(&nijenhuis(algebra, n)?).py()?))
}

#[pyfunction]
fn ns_from_reynolds(algebra: &PyAlgebra, r: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<PyNS> {
    Ok(PyNS(nsnr::ns_from_reynolds(&reynolds(algebra, r)?).py()?))
}

#[pyfunction]
fn reynolds_bracket(algebra: &PyAlgebra, r: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<PyAlgebra> {
    Ok(PyAlgebra(nsnr::reynolds_bracket(&reynolds(algebra, r)?).py()?))
}

#[pyfunction]
fn trbo_from_reynolds(algebra: &PyAlgebra, r: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<PyRbo> {
    Ok(PyRbo(nsnr::trbo_from_reynolds(&reynolds(algebra, r)?).py()?))
}

/// `(D + ½Id)⁻¹` for a derivation `D`.
#[pyfunction]
fn reynolds_from_derivation<'py>(
    py: Python<'py>,
    algebra: &PyAlgebra,
    d: Vec<Vec<Bound<'py, PyAny>>>,
) -> PyResult<Bound<'py, PyList>> {
    let op = nsnr::reynolds_from_derivation(&algebra.0.clone().verify().py()?, &matrix_in(d)?).py()?;
    matrix_out(py, op.matrix())
}

#[pyfunction]
fn derivation_from_reynolds<'py>(
    py: Python<'py>,
    algebra: &PyAlgebra,
    r: Vec<Vec<Bound<'py, PyAny>>>,
) -> PyResult<Bound<'py, PyList>> {
    matrix_out(py, &nsnr::derivation_from_reynolds(&reynolds(algebra, r)?).py()?)
}

fn sampled<F: GradedFamily>(family: &F, gens: &[F::Index], samples: Option<usize>, seed: u64) -> PyResult<PyReport> {
    let mut triples = families::default_samples(family, gens);
    if let Some(n) = samples {
        triples = families::subsample(&triples, n, seed);
    }
    Ok(report(families::check_reynolds_sampled(family, &triples).py()?))
}

/// Reynolds identity on the `laurent` or `omega` family over generators with
/// indices in `lo..=hi` (both mode and weight for `omega`).
#[pyfunction]
#[pyo3(signature = (family, lo, hi, samples = None, seed = 0))]
fn family_reynolds(family: &str, lo: i64, hi: i64, samples: Option<usize>, seed: u64) -> PyResult<PyReport> {
    if lo > hi {
        return Err(PyValueError::new_err(format!("empty range {lo}..{hi}")));
    }
    match family {
        "laurent" => sampled(&Laurent, &(lo..=hi).collect::<Vec<_>>(), samples, seed),
        "omega" => {
            let gens: Vec<OmegaIndex> = (lo..=hi).flat_map(|m| (lo..=hi).map(move |a| OmegaIndex::new(m, a))).collect();
            sampled(&Omega, &gens, samples, seed)
        }
        other => Err(PyValueError::new_err(format!("unknown family {other:?}; expected \"laurent\" or \"omega\""))),
    }
}

#[pymodule]
#[pyo3(name = "trilie")]
fn trilie_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TrilieError", m.py().get_type::<TrilieError>())?;
    m.add("VerificationError", m.py().get_type::<VerificationError>())?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyRep>()?;
    m.add_class::<PyContext>()?;
    m.add_class::<PyRbo>()?;
    m.add_class::<PyNS>()?;
    m.add_function(wrap_pyfunction!(nijenhuis_trbo, m)?)?;
    m.add_function(wrap_pyfunction!(ns_from_nijenhuis, m)?)?;
    m.add_function(wrap_pyfunction!(ns_from_reynolds, m)?)?;
    m.add_function(wrap_pyfunction!(reynolds_bracket, m)?)?;
    m.add_function(wrap_pyfunction!(trbo_from_reynolds, m)?)?;
    m.add_function(wrap_pyfunction!(reynolds_from_derivation, m)?)?;
    m.add_function(wrap_pyfunction!(derivation_from_reynolds, m)?)?;
    m.add_function(wrap_pyfunction!(family_reynolds, m)?)?;
    Ok(())
}
