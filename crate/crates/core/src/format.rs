//! JSON file formats for every structure the command line reads or writes.
//!
//! Basis indices are 1-based. Rationals are strings `"p/q"` or `"p"`; bare
//! JSON integers are accepted on input. Vectors are arrays, matrices are
//! arrays of rows. Only nonzero entries need to be listed, keyed by
//! comma-separated indices in any order; the value absorbs the permutation
//! sign.
//!
//! ```text
//! algebra     {"dim": 3, "brackets": {"1,2,3": ["1", "0", "0"]}}
//! rep         {"algebra": A, "dim": 1, "rho": {"2,3": [["1"]]}}   or {"algebra": A, "adjoint": true}
//! context     {"rep": R, "phi": {"1,2,3": ["1"]}}                 phi may be "neg-bracket" or omitted
//! operator    {"context": C, "T": [[..], ..]}
//! endo        {"algebra": A, "matrix": [[..], ..]}
//! gauge       {"operator": O, "f": [[..], ..]}
//! deformation {"operator": O, "frak_T": M, "frak_T2": M, "X": [x, y]}   the last two optional
//! ns          {"dim": 3, "curly": {"1,2|3": [..]}, "square": {"1,2,3": [..]}}
//! ```
//!
//! `A`, `R`, `C`, `O` are either inline objects or paths resolved relative
//! to the directory of the file that mentions them.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::alternating::{canonical_pair, canonical_triple, pair_from_index, AlternatingForm, PairSkewForm};
use crate::error::{Error, Result};
use crate::exactlin::{format_rational, parse_rational, Matrix, Rational, Vector};
use crate::nsnr::NSThreeLie;
use crate::repcoh::{Representation, TwistedContext, TwoCochain};
use crate::threelie::ThreeLieAlgebra;
use crate::trbo::TwistedRbo;

/// Where a JSON value came from: the file and a pointer inside it.
#[derive(Clone, Debug)]
pub struct Source {
    file: String,
    dir: PathBuf,
    pointer: String,
}

impl Source {
    pub fn new(file: impl Into<String>, dir: impl Into<PathBuf>) -> Self {
        Source {
            file: file.into(),
            dir: dir.into(),
            pointer: String::new(),
        }
    }

    /// An in-memory document whose references resolve against `dir`.
    pub fn inline(dir: impl Into<PathBuf>) -> Self {
        Self::new("<inline>", dir)
    }

    fn child(&self, key: impl std::fmt::Display) -> Source {
        Source {
            pointer: format!("{}/{}", self.pointer, key),
            ..self.clone()
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        let at = if self.pointer.is_empty() { "/" } else { &self.pointer };
        Error::format(format!("{}: {}", self.file, at), message)
    }

    /// Re-labels an error raised while building a structure from this value.
    fn wrap(&self, e: Error) -> Error {
        match e {
            Error::DimensionMismatch(m) => self.err(m),
            other => other,
        }
    }
}

pub fn read_json(path: &Path) -> Result<(Value, Source)> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let value: Value = serde_json::from_str(&text).map_err(|e| {
        Error::format(
            format!("{}:{}:{}", path.display(), e.line(), e.column()),
            e.to_string(),
        )
    })?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((value, Source::new(path.display().to_string(), dir)))
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("values serialize");
    fs::write(path, text + "\n").map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn object<'a>(v: &'a Value, src: &Source) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| src.err("expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, src: &Source) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| src.err(format!("missing field \"{key}\"")))
}

/// An inline object, or a path to a file holding one.
fn resolve(v: &Value, src: &Source) -> Result<(Value, Source)> {
    match v {
        Value::String(p) => read_json(&src.dir.join(p)),
        Value::Object(_) => Ok((v.clone(), src.clone())),
        _ => Err(src.err("expected an object or a file path")),
    }
}

fn usize_field(obj: &Map<String, Value>, key: &str, src: &Source) -> Result<usize> {
    let s = src.child(key);
    field(obj, key, src)?
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| s.err("expected a nonnegative integer"))
}

fn rational(v: &Value, src: &Source) -> Result<Rational> {
    let parsed = match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n.as_i64().and_then(|i| parse_rational(&i.to_string())),
        _ => None,
    };
    parsed.ok_or_else(|| src.err(format!("expected a rational \"p/q\", found {v}")))
}

fn vector(v: &Value, len: usize, src: &Source) -> Result<Vector> {
    let items = v.as_array().ok_or_else(|| src.err("expected an array"))?;
    if items.len() != len {
        return Err(src.err(format!("expected {len} entries, found {}", items.len())));
    }
    items.iter().enumerate().map(|(i, x)| rational(x, &src.child(i))).collect()
}

fn matrix(v: &Value, rows: usize, cols: usize, src: &Source) -> Result<Matrix> {
    let items = v.as_array().ok_or_else(|| src.err("expected an array of rows"))?;
    if items.len() != rows {
        return Err(src.err(format!("expected {rows} rows, found {}", items.len())));
    }
    let rows: Vec<Vector> = items
        .iter()
        .enumerate()
        .map(|(i, r)| vector(r, cols, &src.child(i)))
        .collect::<Result<_>>()?;
    Ok(Matrix::from_rows(rows).expect("rows have equal length"))
}

/// A 1-based comma-separated index list, checked against `dim`.
fn indices(key: &str, n: usize, dim: usize, src: &Source) -> Result<Vec<usize>> {
    let parts: Vec<&str> = key.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(src.err(format!("expected {n} comma-separated indices")));
    }
    parts
        .iter()
        .map(|p| match p.parse::<usize>() {
            Ok(i) if (1..=dim).contains(&i) => Ok(i - 1),
            _ => Err(src.err(format!("index \"{p}\" is not in 1..={dim}"))),
        })
        .collect()
}

fn map_entries<'a>(v: &'a Value, src: &Source) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| src.err("expected an object keyed by indices"))
}

fn alternating_from(v: &Value, dim: usize, target: usize, src: &Source) -> Result<AlternatingForm> {
    let mut form = AlternatingForm::zero(dim, target);
    let mut seen = HashSet::new();
    for (key, val) in map_entries(v, src)? {
        let s = src.child(key);
        let t = indices(key, 3, dim, &s)?;
        let Some((canon, _)) = canonical_triple(t[0], t[1], t[2]) else {
            return Err(s.err("repeated index in a fully skew triple"));
        };
        if !seen.insert(canon) {
            return Err(s.err("the same triple is given twice"));
        }
        form.set(t[0], t[1], t[2], vector(val, target, &s)?).map_err(|e| s.wrap(e))?;
    }
    Ok(form)
}

fn alternating_to(form: &AlternatingForm) -> Value {
    let entries: BTreeMap<String, Value> = form
        .nonzero_entries()
        .into_iter()
        .map(|((i, j, k), v)| (format!("{},{},{}", i + 1, j + 1, k + 1), vector_to(v)))
        .collect();
    json!(entries)
}

pub fn vector_to(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(format_rational(x))).collect())
}

pub fn matrix_to(m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| vector_to(r)).collect())
}

pub fn algebra_from_json(v: &Value, src: &Source) -> Result<ThreeLieAlgebra> {
    let obj = object(v, src)?;
    let dim = usize_field(obj, "dim", src)?;
    let form = match obj.get("brackets") {
        Some(b) => alternating_from(b, dim, dim, &src.child("brackets"))?,
        None => AlternatingForm::zero(dim, dim),
    };
    ThreeLieAlgebra::new(form).map_err(|e| src.wrap(e))
}

pub fn algebra_to_json(a: &ThreeLieAlgebra) -> Value {
    json!({"dim": a.dim(), "brackets": alternating_to(a.form())})
}

pub fn rep_from_json(v: &Value, src: &Source) -> Result<Representation> {
    let obj = object(v, src)?;
    let (av, asrc) = resolve(field(obj, "algebra", src)?, &src.child("algebra"))?;
    let algebra = algebra_from_json(&av, &asrc)?;
    if obj.get("adjoint").and_then(Value::as_bool) == Some(true) {
        // the adjoint action needs the fundamental identity
        return Representation::adjoint(&algebra.verify()?);
    }
    let dim_v = usize_field(obj, "dim", src)?;
    let mut pairs = Vec::new();
    let mut seen = HashSet::new();
    if let Some(rho) = obj.get("rho") {
        let rsrc = src.child("rho");
        for (key, val) in map_entries(rho, &rsrc)? {
            let s = rsrc.child(key);
            let p = indices(key, 2, algebra.dim(), &s)?;
            let Some((a, b, _)) = canonical_pair(p[0], p[1]) else {
                return Err(s.err("ρ(e_i, e_i) vanishes and cannot be given"));
            };
            if !seen.insert((a, b)) {
                return Err(s.err("the same pair is given twice"));
            }
            pairs.push(((p[0], p[1]), matrix(val, dim_v, dim_v, &s)?));
        }
    }
    Representation::from_pairs(algebra, dim_v, pairs).map_err(|e| src.wrap(e))
}

pub fn rep_to_json(rep: &Representation) -> Value {
    let d = rep.dim();
    let rho: BTreeMap<String, Value> = rep
        .rho_matrices()
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .map(|(p, m)| {
            let (i, j) = pair_from_index(d, p);
            (format!("{},{}", i + 1, j + 1), matrix_to(m))
        })
        .collect();
    json!({"algebra": algebra_to_json(rep.carrier()), "dim": rep.dim_v(), "rho": rho})
}

pub fn context_from_json(v: &Value, src: &Source) -> Result<TwistedContext> {
    let obj = object(v, src)?;
    let (rv, rsrc) = resolve(field(obj, "rep", src)?, &src.child("rep"))?;
    let rep = rep_from_json(&rv, &rsrc)?;
    let phi = match obj.get("phi") {
        None => TwoCochain::zero(rep.dim(), rep.dim_v()),
        Some(Value::String(s)) if s == "neg-bracket" => {
            if rep.dim() != rep.dim_v() {
                return Err(src.child("phi").err("\"neg-bracket\" needs the algebra acting on itself"));
            }
            TwoCochain::from_bracket(rep.carrier()).neg()
        }
        Some(p) => TwoCochain::new(alternating_from(p, rep.dim(), rep.dim_v(), &src.child("phi"))?),
    };
    TwistedContext::new(rep, phi).map_err(|e| src.wrap(e))
}

pub fn context_to_json(ctx: &TwistedContext) -> Value {
    json!({"rep": rep_to_json(ctx.rep()), "phi": alternating_to(ctx.phi().form())})
}

pub fn operator_from_json(v: &Value, src: &Source) -> Result<TwistedRbo> {
    let obj = object(v, src)?;
    let (cv, csrc) = resolve(field(obj, "context", src)?, &src.child("context"))?;
    let ctx = context_from_json(&cv, &csrc)?;
    let t = matrix(field(obj, "T", src)?, ctx.dim(), ctx.dim_v(), &src.child("T"))?;
    TwistedRbo::new(ctx, t).map_err(|e| src.wrap(e))
}

pub fn operator_to_json(op: &TwistedRbo) -> Value {
    json!({"context": context_to_json(op.context()), "T": matrix_to(op.matrix())})
}

pub fn endo_from_json(v: &Value, src: &Source) -> Result<(ThreeLieAlgebra, Matrix)> {
    let obj = object(v, src)?;
    let (av, asrc) = resolve(field(obj, "algebra", src)?, &src.child("algebra"))?;
    let a = algebra_from_json(&av, &asrc)?;
    let m = matrix(field(obj, "matrix", src)?, a.dim(), a.dim(), &src.child("matrix"))?;
    Ok((a, m))
}

pub fn endo_to_json(a: &ThreeLieAlgebra, m: &Matrix) -> Value {
    json!({"algebra": algebra_to_json(a), "matrix": matrix_to(m)})
}

/// An operator with a 1-cochain `f: g → V` for the gauge action.
pub fn gauge_from_json(v: &Value, src: &Source) -> Result<(TwistedRbo, Matrix)> {
    let obj = object(v, src)?;
    let (ov, osrc) = resolve(field(obj, "operator", src)?, &src.child("operator"))?;
    let op = operator_from_json(&ov, &osrc)?;
    let f = matrix(field(obj, "f", src)?, op.dim_v(), op.dim(), &src.child("f"))?;
    Ok((op, f))
}

#[derive(Clone, Debug)]
pub struct DeformationFile {
    pub operator: TwistedRbo,
    pub frak_t: Matrix,
    pub frak_t2: Option<Matrix>,
    /// `X = x ∧ y`.
    pub x: Option<(Vector, Vector)>,
}

pub fn deformation_from_json(v: &Value, src: &Source) -> Result<DeformationFile> {
    let obj = object(v, src)?;
    let (ov, osrc) = resolve(field(obj, "operator", src)?, &src.child("operator"))?;
    let operator = operator_from_json(&ov, &osrc)?;
    let (d, dv) = (operator.dim(), operator.dim_v());
    let frak_t = matrix(field(obj, "frak_T", src)?, d, dv, &src.child("frak_T"))?;
    let frak_t2 = match obj.get("frak_T2") {
        Some(m) => Some(matrix(m, d, dv, &src.child("frak_T2"))?),
        None => None,
    };
    let x = match obj.get("X") {
        None => None,
        Some(xv) => {
            let s = src.child("X");
            let pair = xv
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| s.err("expected [x, y] describing x ∧ y"))?;
            Some((vector(&pair[0], d, &s.child(0))?, vector(&pair[1], d, &s.child(1))?))
        }
    };
    Ok(DeformationFile {
        operator,
        frak_t,
        frak_t2,
        x,
    })
}

pub fn deformation_to_json(f: &DeformationFile) -> Value {
    let mut obj = Map::new();
    obj.insert("operator".into(), operator_to_json(&f.operator));
    obj.insert("frak_T".into(), matrix_to(&f.frak_t));
    if let Some(m) = &f.frak_t2 {
        obj.insert("frak_T2".into(), matrix_to(m));
    }
    if let Some((x, y)) = &f.x {
        obj.insert("X".into(), json!([vector_to(x), vector_to(y)]));
    }
    Value::Object(obj)
}

pub fn ns_from_json(v: &Value, src: &Source) -> Result<NSThreeLie> {
    let obj = object(v, src)?;
    let dim = usize_field(obj, "dim", src)?;
    let mut curly = PairSkewForm::zero(dim, dim);
    if let Some(c) = obj.get("curly") {
        let csrc = src.child("curly");
        let mut seen = HashSet::new();
        for (key, val) in map_entries(c, &csrc)? {
            let s = csrc.child(key);
            let (pair, third) = key
                .split_once('|')
                .ok_or_else(|| s.err("expected a key \"i,j|k\""))?;
            let p = indices(pair, 2, dim, &s)?;
            let k = indices(third, 1, dim, &s)?[0];
            let Some((a, b, _)) = canonical_pair(p[0], p[1]) else {
                return Err(s.err("{e_i, e_i, -} vanishes and cannot be given"));
            };
            if !seen.insert((a, b, k)) {
                return Err(s.err("the same entry is given twice"));
            }
            curly.set(p[0], p[1], k, vector(val, dim, &s)?).map_err(|e| s.wrap(e))?;
        }
    }
    let square = match obj.get("square") {
        Some(sq) => alternating_from(sq, dim, dim, &src.child("square"))?,
        None => AlternatingForm::zero(dim, dim),
    };
    NSThreeLie::new(curly, square).map_err(|e| src.wrap(e))
}

pub fn ns_to_json(ns: &NSThreeLie) -> Value {
    let d = ns.dim();
    let c = ns.curly_form();
    let mut curly = BTreeMap::new();
    for i in 0..d {
        for j in i + 1..d {
            for k in 0..d {
                let v = c.canonical(i, j, k);
                if v.iter().any(|x| *x != Rational::default()) {
                    curly.insert(format!("{},{}|{}", i + 1, j + 1, k + 1), vector_to(v));
                }
            }
        }
    }
    json!({"dim": d, "curly": curly, "square": alternating_to(ns.square_form())})
}

fn load<T>(path: &Path, parse: impl FnOnce(&Value, &Source) -> Result<T>) -> Result<T> {
    let (v, src) = read_json(path)?;
    parse(&v, &src)
}

pub fn load_algebra(path: &Path) -> Result<ThreeLieAlgebra> {
    load(path, algebra_from_json)
}

pub fn load_rep(path: &Path) -> Result<Representation> {
    load(path, rep_from_json)
}

pub fn load_context(path: &Path) -> Result<TwistedContext> {
    load(path, context_from_json)
}

pub fn load_operator(path: &Path) -> Result<TwistedRbo> {
    load(path, operator_from_json)
}

pub fn load_endo(path: &Path) -> Result<(ThreeLieAlgebra, Matrix)> {
    load(path, endo_from_json)
}

pub fn load_gauge(path: &Path) -> Result<(TwistedRbo, Matrix)> {
    load(path, gauge_from_json)
}

pub fn load_deformation(path: &Path) -> Result<DeformationFile> {
    load(path, deformation_from_json)
}

pub fn load_ns(path: &Path) -> Result<NSThreeLie> {
    load(path, ns_from_json)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{frac, rat};
    use crate::fixtures;
    use crate::nsnr::{ns_from_nijenhuis, NijenhuisOp};
    use proptest::prelude::*;

    fn here() -> Source {
        Source::inline(".")
    }

    #[test]
    fn parses_hand_written_algebra() {
        let v = json!({"dim": 3, "brackets": {"2,1,3": ["-1", 0, "0/5"]}});
        let a = algebra_from_json(&v, &here()).unwrap();
        assert_eq!(a.form(), fixtures::dim3().form());
        assert_eq!(algebra_to_json(&a), json!({"dim": 3, "brackets": {"1,2,3": ["1", "0", "0"]}}));
    }

    #[test]
    fn errors_carry_locations() {
        let cases = [
            (json!({"dim": 3, "brackets": {"1,2,4": ["1", "0", "0"]}}), "/brackets/1,2,4"),
            (json!({"dim": 3, "brackets": {"1,2,3": ["1", "x", "0"]}}), "/brackets/1,2,3/1"),
            (json!({"dim": 3, "brackets": {"1,2,3": ["1/0", "0", "0"]}}), "/brackets/1,2,3/0"),
            (json!({"dim": 3, "brackets": {"1,2,2": ["1", "0", "0"]}}), "/brackets/1,2,2"),
            (json!({"dim": 3, "brackets": {"1,2,3": ["1"], "3,2,1": ["1"]}}), "/brackets/1,2,3"),
            (json!({"brackets": {}}), "missing field"),
        ];
        for (v, needle) in cases {
            let e = algebra_from_json(&v, &here()).unwrap_err();
            assert!(e.is_input_error(), "{e}");
            assert!(e.to_string().contains(needle), "{e} lacks {needle}");
        }
        let dup = json!({"dim": 3, "brackets": {"1,2,3": ["1", "0", "0"], "2,1,3": ["1", "0", "0"]}});
        assert!(algebra_from_json(&dup, &here()).unwrap_err().to_string().contains("twice"));
    }

    #[test]
    fn missing_and_malformed_files() {
        let dir = tempfile::tempdir().unwrap();
        let e = load_operator(&dir.path().join("missing.json")).unwrap_err();
        assert!(matches!(e, Error::Io { .. }));
        let bad = dir.path().join("bad.alg");
        fs::write(&bad, "{\"dim\": 3,\n \"brackets\": }").unwrap();
        let e = load_algebra(&bad).unwrap_err();
        assert!(e.is_input_error());
        assert!(e.to_string().contains(":2:"), "{e}");
    }

    #[test]
    fn references_resolve_relative_to_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let sub = dir.path().join("sub");
        fs::create_dir(&sub).unwrap();
        write_json(&dir.path().join("dim3.alg"), &algebra_to_json(&fixtures::dim3())).unwrap();
        write_json(&sub.join("ad.rep"), &json!({"algebra": "../dim3.alg", "adjoint": true})).unwrap();
        write_json(&sub.join("reynolds.ctx"), &json!({"rep": "ad.rep", "phi": "neg-bracket"})).unwrap();
        let op = json!({"context": "sub/reynolds.ctx", "T": [[0, 1, 0], [0, 0, 0], [0, 0, "1/2"]]});
        write_json(&dir.path().join("r.op"), &op).unwrap();
        let op = load_operator(&dir.path().join("r.op")).unwrap();
        assert_eq!(op.matrix()[(2, 2)], frac(1, 2));
        assert_eq!(op.context().phi(), &TwoCochain::from_bracket(&fixtures::dim3()).neg());
        assert!(op.context().rep().is_verified());
    }

    #[test]
    fn round_trips() {
        let ctx = fixtures::line_context();
        let back = context_from_json(&context_to_json(&ctx), &here()).unwrap();
        assert_eq!(back.rep().rho_matrices(), ctx.rep().rho_matrices());
        assert_eq!(back.phi(), ctx.phi());
        let op = TwistedRbo::new(ctx, Matrix::from_i64(&[&[0], &[2], &[-1]])).unwrap();
        let back = operator_from_json(&operator_to_json(&op), &here()).unwrap();
        assert_eq!(back.matrix(), op.matrix());
        let n = NijenhuisOp::new(fixtures::dim3(), Matrix::from_i64(&[&[1, 2, 0], &[0, 3, 1], &[4, 0, 1]]))
            .unwrap()
            .verify()
            .unwrap();
        let ns = ns_from_nijenhuis(&n).unwrap();
        let back = ns_from_json(&ns_to_json(&ns), &here()).unwrap();
        assert_eq!(back.curly_form(), ns.curly_form());
        assert_eq!(back.square_form(), ns.square_form());
        let (a, m) = endo_from_json(&endo_to_json(&fixtures::simple4(), &Matrix::identity(4)), &here()).unwrap();
        assert_eq!((a.form(), m), (fixtures::simple4().form(), Matrix::identity(4)));
        let file = DeformationFile {
            operator: op,
            frak_t: Matrix::from_i64(&[&[1], &[0], &[0]]),
            frak_t2: None,
            x: Some((vec![rat(1), rat(0), rat(0)], vec![rat(0), frac(-1, 3), rat(0)])),
        };
        let back = deformation_from_json(&deformation_to_json(&file), &here()).unwrap();
        assert_eq!(back.x, file.x);
        assert_eq!(back.frak_t2, None);
    }

    proptest! {
        #[test]
        fn random_algebras_round_trip(seed in any::<u64>(), dim in 1usize..6) {
            let mut rng = fixtures::rng(seed);
            let form = AlternatingForm::from_fn(dim, dim, |_, _, _| fixtures::random_vector(&mut rng, dim));
            let a = ThreeLieAlgebra::new(form).unwrap();
            let text = serde_json::to_string(&algebra_to_json(&a)).unwrap();
            let back = algebra_from_json(&serde_json::from_str(&text).unwrap(), &here()).unwrap();
            prop_assert_eq!(back.form(), a.form());
        }
    }
}
