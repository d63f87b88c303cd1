//! Representations, the cochain complex with coefficients in a
//! representation, 2-cocycles, twisted semidirect products, and cohomology
//! dimensions.
//!
//! An `n`-cochain is a linear map `(∧²g)^{⊗(n−1)} ⊗ g → V`. Its basis is the
//! set of tuples `(P_1, …, P_{n−1}, k)` where each `P_s` is a pair `i<j` and
//! `k` is any index; no ordering is imposed across pair slots. Values are
//! stored flat, with the last pair slot varying fastest before `k`.
//!
//! Symmetry reductions used by the checkers:
//! * the commutator identity `[ρ(x1,x2), ρ(x3,x4)] = ρ([x1,x2,x3],x4) + ρ(x3,[x1,x2,x4])`
//!   is skew in `(x1,x2)` and in `(x3,x4)`, so pairs `i<j`, `k<l` suffice;
//! * `ρ([x1,x2,x3],x4) = ρ(x1,x2)ρ(x3,x4) + ρ(x2,x3)ρ(x1,x4) + ρ(x3,x1)ρ(x2,x4)`
//!   is fully skew in `(x1,x2,x3)` (a cyclic sum of terms skew in their first
//!   two slots), so `i<j<k` and any `l` suffice;
//! * the 2-cocycle identity is skew in `(x1,x2)` and fully skew in
//!   `(x3,x4,x5)`, so `i<j` and `k<l<m` suffice.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::alternating::{canonical_pair, pair_count, pair_from_index, pair_index, AlternatingForm};
use crate::error::{Error, Result};
use crate::exactlin::{add_vec, axpy, is_zero_vec, rat, sub_vec, unit, zero_vec, Matrix, Rational, SparseMatrix, Vector};
use crate::report::{increasing, product, Comparison, Report};
use crate::threelie::ThreeLieAlgebra;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    carrier: ThreeLieAlgebra,
    dim_v: usize,
    /// `ρ(e_i, e_j)` for pairs `i<j`, in [`pair_index`] order.
    rho: Vec<Matrix>,
    verified: bool,
}

impl Representation {
    /// Wraps `ρ` on canonical pairs; the result is unverified.
    pub fn new(carrier: ThreeLieAlgebra, dim_v: usize, rho: Vec<Matrix>) -> Result<Self> {
        let p = pair_count(carrier.dim());
        if rho.len() != p {
            return Err(Error::dims(format!("{} matrices given for {p} basis pairs", rho.len())));
        }
        if rho.iter().any(|m| m.rows() != dim_v || m.cols() != dim_v) {
            return Err(Error::dims(format!("every ρ matrix must be {dim_v}x{dim_v}")));
        }
        Ok(Representation {
            carrier,
            dim_v,
            rho,
            verified: false,
        })
    }

    /// Builds `ρ` from nonzero entries `ρ(e_i, e_j)` given in any order.
    pub fn from_pairs(
        carrier: ThreeLieAlgebra,
        dim_v: usize,
        pairs: impl IntoIterator<Item = ((usize, usize), Matrix)>,
    ) -> Result<Self> {
        let d = carrier.dim();
        let mut rho = vec![Matrix::zeros(dim_v, dim_v); pair_count(d)];
        for ((i, j), m) in pairs {
            if i >= d || j >= d {
                return Err(Error::dims(format!("pair ({i},{j}) out of range")));
            }
            let Some((a, b, s)) = canonical_pair(i, j) else {
                return Err(Error::dims("ρ(e_i, e_i) must vanish and cannot be given"));
            };
            rho[pair_index(d, a, b)] = if s > 0 { m } else { m.neg() };
        }
        Self::new(carrier, dim_v, rho)
    }

    pub fn zero(carrier: ThreeLieAlgebra, dim_v: usize) -> Self {
        let p = pair_count(carrier.dim());
        Representation {
            carrier,
            dim_v,
            rho: vec![Matrix::zeros(dim_v, dim_v); p],
            verified: false,
        }
    }

    /// The adjoint representation `ρ(x, y) = ad_{x,y}` of a verified algebra.
    pub fn adjoint(a: &ThreeLieAlgebra) -> Result<Self> {
        a.require_verified("algebra")?;
        let d = a.dim();
        let rho = (0..pair_count(d))
            .map(|p| {
                let (i, j) = pair_from_index(d, p);
                a.ad_basis(i, j)
            })
            .collect();
        Self::new(a.clone(), d, rho)?.verify()
    }

    pub fn carrier(&self) -> &ThreeLieAlgebra {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn verify(mut self) -> Result<Self> {
        if self.verified {
            return Ok(self);
        }
        self.carrier.require_verified("carrier algebra")?;
        let report = check_representation(&self);
        if !report.passed() {
            return Err(Error::VerificationFailed {
                subject: "representation".into(),
                report: Box::new(report),
            });
        }
        self.verified = true;
        Ok(self)
    }

    /// Verifies the carrier algebra, then the representation.
    pub fn verify_all(mut self) -> Result<Self> {
        self.carrier = self.carrier.verify()?;
        self.verify()
    }

    pub(crate) fn require_verified(&self) -> Result<()> {
        if self.verified {
            Ok(())
        } else {
            Err(Error::Unverified("representation"))
        }
    }

    /// `ρ(e_i, e_j)` for canonical `i<j`.
    pub fn rho_canonical(&self, p: usize) -> &Matrix {
        &self.rho[p]
    }

    pub fn rho_matrices(&self) -> &[Matrix] {
        &self.rho
    }

    /// `ρ(e_i, e_j)` for any indices.
    pub fn rho_basis(&self, i: usize, j: usize) -> Matrix {
        match canonical_pair(i, j) {
            None => Matrix::zeros(self.dim_v, self.dim_v),
            Some((a, b, s)) => {
                let m = &self.rho[pair_index(self.dim(), a, b)];
                if s > 0 {
                    m.clone()
                } else {
                    m.neg()
                }
            }
        }
    }

    /// `ρ(x, y)` for arbitrary vectors.
    pub fn rho(&self, x: &[Rational], y: &[Rational]) -> Matrix {
        let d = self.dim();
        let mut out = Matrix::zeros(self.dim_v, self.dim_v);
        for i in 0..d {
            for j in i + 1..d {
                let c = &x[i] * &y[j] - &x[j] * &y[i];
                if !c.is_zero() {
                    out = out.add(&self.rho[pair_index(d, i, j)].scale(&c));
                }
            }
        }
        out
    }

    /// `ρ(x, y) v` without materializing the matrix.
    pub fn act(&self, x: &[Rational], y: &[Rational], v: &[Rational]) -> Vector {
        let d = self.dim();
        let mut out = zero_vec(self.dim_v);
        if is_zero_vec(v) {
            return out;
        }
        for i in 0..d {
            if x[i].is_zero() && y[i].is_zero() {
                continue;
            }
            for j in i + 1..d {
                let c = &x[i] * &y[j] - &x[j] * &y[i];
                if !c.is_zero() {
                    axpy(&mut out, &c, &self.rho[pair_index(d, i, j)].apply(v));
                }
            }
        }
        out
    }
}

fn flatten(m: &Matrix) -> Vector {
    m.entries().to_vec()
}

pub fn check_representation(rep: &Representation) -> Report {
    let a = rep.carrier();
    let d = a.dim();
    let pairs = increasing(d, 2);
    let e = |i| unit(d, i);
    let mut report = Report::check_tuples("representation commutator identity", product(&pairs, &pairs), |t| {
        let r12 = rep.rho_basis(t[0], t[1]);
        let r34 = rep.rho_basis(t[2], t[3]);
        let lhs = r12.mul(&r34).sub(&r34.mul(&r12));
        let rhs = rep
            .rho(&a.bracket_basis(t[0], t[1], t[2]), &e(t[3]))
            .add(&rep.rho(&e(t[2]), &a.bracket_basis(t[0], t[1], t[3])));
        vec![Comparison::new("representation commutator identity", flatten(&lhs), flatten(&rhs))]
    });
    let singles: Vec<Vec<usize>> = (0..d).map(|l| vec![l]).collect();
    report.absorb(Report::check_tuples(
        "representation bracket identity",
        product(&increasing(d, 3), &singles),
        |t| {
            let (i, j, k, l) = (t[0], t[1], t[2], t[3]);
            let lhs = rep.rho(&a.bracket_basis(i, j, k), &e(l));
            let rhs = rep
                .rho_basis(i, j)
                .mul(&rep.rho_basis(k, l))
                .add(&rep.rho_basis(j, k).mul(&rep.rho_basis(i, l)))
                .add(&rep.rho_basis(k, i).mul(&rep.rho_basis(j, l)));
            vec![Comparison::new("representation bracket identity", flatten(&lhs), flatten(&rhs))]
        },
    ));
    report.subject = "representation".into();
    report
}

/// An alternating trilinear map `∧³g → V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCochain {
    form: AlternatingForm,
}

impl TwoCochain {
    pub fn new(form: AlternatingForm) -> Self {
        TwoCochain { form }
    }

    pub fn zero(dim: usize, dim_v: usize) -> Self {
        TwoCochain {
            form: AlternatingForm::zero(dim, dim_v),
        }
    }

    /// The bracket of `a` viewed as a cochain valued in the adjoint module.
    pub fn from_bracket(a: &ThreeLieAlgebra) -> Self {
        TwoCochain {
            form: a.form().clone(),
        }
    }

    /// Restricts a degree-2 cochain to its values on `(e_i ∧ e_j, e_k)` with
    /// `i<j<k`. This is exact when the cochain is alternating, as every
    /// coboundary of a 1-cochain is.
    pub fn from_ncochain(f: &NCochain) -> Result<Self> {
        if f.degree != 2 {
            return Err(Error::dims(format!("expected a degree-2 cochain, got degree {}", f.degree)));
        }
        let d = f.dim;
        Ok(TwoCochain {
            form: AlternatingForm::from_fn(d, f.dim_v, |i, j, k| f.value(&[pair_index(d, i, j)], k).clone()),
        })
    }

    /// Embeds into degree-2 cochains: `(e_i ∧ e_j, e_k) ↦ Φ(e_i, e_j, e_k)`.
    pub fn to_ncochain(&self) -> NCochain {
        let d = self.dim();
        let mut f = NCochain::zero(2, d, self.dim_v());
        for p in 0..pair_count(d) {
            let (i, j) = pair_from_index(d, p);
            for k in 0..d {
                *f.value_mut(&[p], k) = self.form.basis(i, j, k);
            }
        }
        f
    }

    pub fn form(&self) -> &AlternatingForm {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn dim_v(&self) -> usize {
        self.form.target_dim()
    }

    pub fn eval(&self, x: &[Rational], y: &[Rational], z: &[Rational]) -> Vector {
        self.form.eval(x, y, z)
    }

    pub fn basis(&self, i: usize, j: usize, k: usize) -> Vector {
        self.form.basis(i, j, k)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        TwoCochain {
            form: self.form.map_values(self.dim_v(), |v| v.iter().map(|x| x * s).collect()),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&rat(-1))
    }

    pub fn sub(&self, other: &TwoCochain) -> Result<Self> {
        if self.dim() != other.dim() || self.dim_v() != other.dim_v() {
            return Err(Error::dims("cochains on different spaces"));
        }
        Ok(TwoCochain {
            form: AlternatingForm::from_fn(self.dim(), self.dim_v(), |i, j, k| {
                sub_vec(self.form.canonical(i, j, k), other.form.canonical(i, j, k))
            }),
        })
    }
}

/// Evaluates the 2-cocycle identity on tuples `i<j`, `k<l<m`.
pub fn check_2cocycle(rep: &Representation, phi: &TwoCochain) -> Result<Report> {
    rep.require_verified()?;
    if phi.dim() != rep.dim() || phi.dim_v() != rep.dim_v() {
        return Err(Error::dims("2-cochain and representation live on different spaces"));
    }
    let a = rep.carrier();
    let d = a.dim();
    let e = |i| unit(d, i);
    Ok(Report::check_tuples("2-cocycle", product(&increasing(d, 2), &increasing(d, 3)), |t| {
        let x: Vec<Vector> = t.iter().map(|&i| e(i)).collect();
        let b = |p: usize, q: usize, r: usize| a.bracket_basis(t[p], t[q], t[r]);
        let mut lhs = phi.eval(&x[0], &x[1], &b(2, 3, 4));
        for term in [
            phi.eval(&b(0, 1, 2), &x[3], &x[4]),
            phi.eval(&x[2], &b(0, 1, 3), &x[4]),
            phi.eval(&x[2], &x[3], &b(0, 1, 4)),
        ] {
            lhs = sub_vec(&lhs, &term);
        }
        lhs = add_vec(&lhs, &rep.act(&x[0], &x[1], &phi.basis(t[2], t[3], t[4])));
        for term in [
            rep.act(&x[2], &x[3], &phi.basis(t[0], t[1], t[4])),
            rep.act(&x[3], &x[4], &phi.basis(t[0], t[1], t[2])),
            rep.act(&x[4], &x[2], &phi.basis(t[0], t[1], t[3])),
        ] {
            lhs = sub_vec(&lhs, &term);
        }
        vec![Comparison::new("2-cocycle", lhs, zero_vec(rep.dim_v()))]
    }))
}

/// A representation together with a 2-cochain; verified once the cochain
/// passes the 2-cocycle check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedContext {
    rep: Representation,
    phi: TwoCochain,
    verified: bool,
}

impl TwistedContext {
    pub fn new(rep: Representation, phi: TwoCochain) -> Result<Self> {
        if phi.dim() != rep.dim() || phi.dim_v() != rep.dim_v() {
            return Err(Error::dims("2-cochain and representation live on different spaces"));
        }
        Ok(TwistedContext {
            rep,
            phi,
            verified: false,
        })
    }

    /// Context with `Φ = 0`.
    pub fn untwisted(rep: Representation) -> Result<Self> {
        let phi = TwoCochain::zero(rep.dim(), rep.dim_v());
        Self::new(rep, phi)?.verify()
    }

    pub fn verify(mut self) -> Result<Self> {
        if self.verified {
            return Ok(self);
        }
        let report = check_2cocycle(&self.rep, &self.phi)?;
        if !report.passed() {
            return Err(Error::VerificationFailed {
                subject: "2-cocycle".into(),
                report: Box::new(report),
            });
        }
        self.verified = true;
        Ok(self)
    }

    /// Verifies the algebra, the representation and the 2-cocycle.
    pub fn verify_all(mut self) -> Result<Self> {
        self.rep = self.rep.verify_all()?;
        self.verify()
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub(crate) fn require_verified(&self) -> Result<()> {
        if self.verified {
            Ok(())
        } else {
            Err(Error::Unverified("twisted context"))
        }
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn phi(&self) -> &TwoCochain {
        &self.phi
    }

    pub fn algebra(&self) -> &ThreeLieAlgebra {
        self.rep.carrier()
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn dim_v(&self) -> usize {
        self.rep.dim_v()
    }
}

/// The algebra on `g ⊕ V` with
/// `[(x,u),(y,v),(z,w)] = ([x,y,z], ρ(x,y)w + ρ(y,z)u + ρ(z,x)v + Φ(x,y,z))`.
/// Basis: `e_1..e_d` of `g` followed by the basis of `V`.
pub fn twisted_semidirect(ctx: &TwistedContext) -> Result<ThreeLieAlgebra> {
    ctx.rep.carrier().require_verified("algebra")?;
    ctx.require_verified()?;
    let a = ctx.algebra();
    let (d, dv) = (ctx.dim(), ctx.dim_v());
    let n = d + dv;
    let form = AlternatingForm::from_fn(n, n, |i, j, k| {
        if k < d {
            // all three in g
            let mut v = a.bracket_basis(i, j, k);
            v.extend(ctx.phi.basis(i, j, k));
            v
        } else if j < d {
            // ρ(x, y) w with x, y in g and w in V
            let mut v = zero_vec(d);
            v.extend(ctx.rep.rho_basis(i, j).column(k - d));
            v
        } else {
            zero_vec(n)
        }
    });
    ThreeLieAlgebra::new(form)?.verify()
}

/// A cochain of degree `n ≥ 1` on `(∧²g)^{⊗(n−1)} ⊗ g` with values in `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCochain {
    degree: usize,
    dim: usize,
    dim_v: usize,
    values: Vec<Vector>,
}

/// Number of basis tuples of degree-`n` cochains on a `d`-dimensional algebra.
pub fn cochain_tuples(n: usize, d: usize) -> usize {
    pair_count(d).pow((n - 1) as u32) * d
}

impl NCochain {
    pub fn zero(degree: usize, dim: usize, dim_v: usize) -> Self {
        assert!(degree >= 1, "cochains start in degree 1");
        NCochain {
            degree,
            dim,
            dim_v,
            values: vec![zero_vec(dim_v); cochain_tuples(degree, dim)],
        }
    }

    /// Wraps flat values; `values[t]` is the value on basis tuple `t`.
    pub fn from_values(degree: usize, dim: usize, dim_v: usize, values: Vec<Vector>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::dims("cochains start in degree 1"));
        }
        if values.len() != cochain_tuples(degree, dim) || values.iter().any(|v| v.len() != dim_v) {
            return Err(Error::dims("cochain value table has the wrong shape"));
        }
        Ok(NCochain {
            degree,
            dim,
            dim_v,
            values,
        })
    }

    /// A linear map `g → V` given as a `dim_v × dim` matrix.
    pub fn from_linear_map(f: &Matrix) -> Self {
        NCochain {
            degree: 1,
            dim: f.cols(),
            dim_v: f.rows(),
            values: (0..f.cols()).map(|k| f.column(k)).collect(),
        }
    }

    /// Inverse of [`NCochain::from_linear_map`]; degree 1 only.
    pub fn to_linear_map(&self) -> Result<Matrix> {
        if self.degree != 1 {
            return Err(Error::dims("only degree-1 cochains are linear maps"));
        }
        Matrix::from_columns(self.dim_v, &self.values)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn values(&self) -> &[Vector] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| is_zero_vec(v))
    }

    fn flat(&self, pairs: &[usize], k: usize) -> usize {
        flat_index(pairs, k, pair_count(self.dim), self.dim)
    }

    /// Value on `(P_1, …, P_{n−1}, e_k)` with pair slots given by
    /// [`pair_index`].
    pub fn value(&self, pairs: &[usize], k: usize) -> &Vector {
        assert_eq!(pairs.len() + 1, self.degree);
        &self.values[self.flat(pairs, k)]
    }

    pub fn value_mut(&mut self, pairs: &[usize], k: usize) -> &mut Vector {
        assert_eq!(pairs.len() + 1, self.degree);
        let t = self.flat(pairs, k);
        &mut self.values[t]
    }

    /// Coordinates in the order used by [`coboundary_matrix`].
    pub fn coordinates(&self) -> Vector {
        self.values.iter().flatten().cloned().collect()
    }
}

fn flat_index(pairs: &[usize], k: usize, p: usize, d: usize) -> usize {
    pairs.iter().fold(0, |acc, &q| acc * p + q) * d + k
}

fn decode(mut t: usize, n: usize, p: usize, d: usize) -> (Vec<usize>, usize) {
    let k = t % d;
    t /= d;
    let mut pairs = vec![0; n - 1];
    for s in (0..n - 1).rev() {
        pairs[s] = t % p;
        t /= p;
    }
    (pairs, k)
}

/// Resource limits for cochain computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CochainCaps {
    pub max_dim: usize,
    pub max_dim_v: usize,
    pub max_degree: usize,
    /// Largest number of scalar coordinates in any cochain space touched.
    pub max_coordinates: usize,
}

impl Default for CochainCaps {
    fn default() -> Self {
        CochainCaps {
            max_dim: 6,
            max_dim_v: 6,
            max_degree: 4,
            max_coordinates: 250_000,
        }
    }
}

impl CochainCaps {
    pub(crate) fn admit(&self, degree: usize, d: usize, dv: usize) -> Result<()> {
        if degree > self.max_degree {
            return Err(Error::DegreeCap {
                degree,
                cap: self.max_degree,
            });
        }
        if d > self.max_dim || dv > self.max_dim_v {
            return Err(Error::ResourceCap(format!(
                "dimensions ({d}, {dv}) exceed the caps ({}, {})",
                self.max_dim, self.max_dim_v
            )));
        }
        let out = (cochain_tuples(degree + 1, d) as u128) * dv as u128;
        if out > self.max_coordinates as u128 {
            return Err(Error::ResourceCap(format!(
                "degree-{} cochains have {out} coordinates, above the cap {}",
                degree + 1,
                self.max_coordinates
            )));
        }
        Ok(())
    }
}

/// One summand of `(df)(τ)`: `coeff · [ρ(P)] · f(σ)`.
struct Term {
    coeff: Rational,
    rho: Option<usize>,
    sigma: usize,
}

/// Expands `(df)` at output tuple `(X_1, …, X_n, x_{n+1})` into summands
/// following the coboundary formula term by term.
fn coboundary_terms(a: &ThreeLieAlgebra, n: usize, pairs: &[usize], last: usize) -> Vec<Term> {
    let d = a.dim();
    let p = pair_count(d);
    let xy: Vec<(usize, usize)> = pairs.iter().map(|&q| pair_from_index(d, q)).collect();
    let sign = |j: usize| if j.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let mut terms = Vec::new();
    let without = |j: usize| -> Vec<usize> {
        pairs.iter().enumerate().filter(|(s, _)| *s != j).map(|(_, &q)| q).collect()
    };

    // (−1)^j f(…, X̂_j, …, [x_j,y_j,x_k] ∧ y_k + x_k ∧ [x_j,y_j,y_k], …, x_{n+1}); 1-based j<k
    for j in 0..n {
        let (xj, yj) = xy[j];
        for (k, &(xk, yk)) in xy.iter().enumerate().take(n).skip(j + 1) {
            let base = without(j);
            // position of slot k after removing slot j
            let pos = k - 1;
            let mut push_pair = |l: usize, c: &Rational, left: bool| {
                let pair = if left { canonical_pair(l, yk) } else { canonical_pair(xk, l) };
                if let Some((u, v, s)) = pair {
                    let mut slots = base.clone();
                    slots[pos] = pair_index(d, u, v);
                    let coeff = if s > 0 { c.clone() } else { -c.clone() };
                    terms.push(Term {
                        coeff: coeff * sign(j + 1),
                        rho: None,
                        sigma: flat_index(&slots, last, p, d),
                    });
                }
            };
            for (l, c) in a.bracket_basis(xj, yj, xk).iter().enumerate() {
                if !c.is_zero() {
                    push_pair(l, c, true);
                }
            }
            for (l, c) in a.bracket_basis(xj, yj, yk).iter().enumerate() {
                if !c.is_zero() {
                    push_pair(l, c, false);
                }
            }
        }
    }
    for j in 0..n {
        let (xj, yj) = xy[j];
        let base = without(j);
        // (−1)^j f(…, X̂_j, …, [x_j, y_j, x_{n+1}])
        for (l, c) in a.bracket_basis(xj, yj, last).iter().enumerate() {
            if !c.is_zero() {
                terms.push(Term {
                    coeff: c * sign(j + 1),
                    rho: None,
                    sigma: flat_index(&base, l, p, d),
                });
            }
        }
        // (−1)^{j+1} ρ(x_j, y_j) f(…, X̂_j, …, x_{n+1})
        terms.push(Term {
            coeff: sign(j),
            rho: Some(pairs[j]),
            sigma: flat_index(&base, last, p, d),
        });
    }
    // (−1)^{n+1} (ρ(y_n, x_{n+1}) f(X_1..X_{n−1}, x_n) + ρ(x_{n+1}, x_n) f(X_1..X_{n−1}, y_n))
    let (xn, yn) = xy[n - 1];
    let head = &pairs[..n - 1];
    for (u, v, arg) in [(yn, last, xn), (last, xn, yn)] {
        if let Some((s1, s2, s)) = canonical_pair(u, v) {
            terms.push(Term {
                coeff: sign(n + 1) * rat(s as i64),
                rho: Some(pair_index(d, s1, s2)),
                sigma: flat_index(head, arg, p, d),
            });
        }
    }
    terms
}

fn check_cochain(rep: &Representation, f: &NCochain) -> Result<()> {
    if f.dim != rep.dim() || f.dim_v != rep.dim_v() {
        return Err(Error::dims(format!(
            "cochain on ({}, {}) but representation on ({}, {})",
            f.dim,
            f.dim_v,
            rep.dim(),
            rep.dim_v()
        )));
    }
    Ok(())
}

/// `d f` evaluated literally on every basis tuple of the next degree.
pub fn coboundary(rep: &Representation, f: &NCochain) -> Result<NCochain> {
    coboundary_with_caps(rep, f, &CochainCaps::default())
}

pub fn coboundary_with_caps(rep: &Representation, f: &NCochain, caps: &CochainCaps) -> Result<NCochain> {
    rep.require_verified()?;
    check_cochain(rep, f)?;
    let (d, dv, n) = (rep.dim(), rep.dim_v(), f.degree);
    caps.admit(n, d, dv)?;
    let a = rep.carrier();
    let p = pair_count(d);
    let values: Vec<Vector> = (0..cochain_tuples(n + 1, d))
        .into_par_iter()
        .map(|t| {
            let (pairs, last) = decode(t, n + 1, p, d);
            let mut out = zero_vec(dv);
            for term in coboundary_terms(a, n, &pairs, last) {
                let fv = &f.values[term.sigma];
                match term.rho {
                    None => axpy(&mut out, &term.coeff, fv),
                    Some(q) => axpy(&mut out, &term.coeff, &rep.rho_canonical(q).apply(fv)),
                }
            }
            out
        })
        .collect();
    NCochain::from_values(n + 1, d, dv, values)
}

/// Sparse matrix of `d: C^n → C^{n+1}` in the coordinates of
/// [`NCochain::coordinates`].
pub fn coboundary_matrix(rep: &Representation, n: usize, caps: &CochainCaps) -> Result<SparseMatrix> {
    rep.require_verified()?;
    if n == 0 {
        return Err(Error::dims("cochains start in degree 1"));
    }
    let (d, dv) = (rep.dim(), rep.dim_v());
    caps.admit(n, d, dv)?;
    let a = rep.carrier();
    let p = pair_count(d);
    let rows: Vec<Vec<Vec<(usize, Rational)>>> = (0..cochain_tuples(n + 1, d))
        .into_par_iter()
        .map(|t| {
            let (pairs, last) = decode(t, n + 1, p, d);
            let terms = coboundary_terms(a, n, &pairs, last);
            (0..dv)
                .map(|r| {
                    let mut row = Vec::new();
                    for term in &terms {
                        match term.rho {
                            None => row.push((term.sigma * dv + r, term.coeff.clone())),
                            Some(q) => {
                                let m = rep.rho_canonical(q);
                                for b in 0..dv {
                                    if !m[(r, b)].is_zero() {
                                        row.push((term.sigma * dv + b, &term.coeff * &m[(r, b)]));
                                    }
                                }
                            }
                        }
                    }
                    row
                })
                .collect()
        })
        .collect();
    let mut m = SparseMatrix::new(cochain_tuples(n, d) * dv);
    for row in rows.into_iter().flatten() {
        m.push_row(row);
    }
    Ok(m)
}

/// `(degree, dim C^n, dim Z^n, dim B^n, dim H^n)` plus the rank of the
/// outgoing differential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CohomologyRow {
    pub degree: usize,
    pub cochains: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub cohomology: usize,
    pub rank_out: usize,
}

/// Dimensions of cocycles, coboundaries and cohomology in degrees
/// `1..=n_max`, with `B^1 = 0`.
pub fn cohomology_dims(rep: &Representation, n_max: usize) -> Result<Vec<CohomologyRow>> {
    cohomology_dims_with_caps(rep, n_max, &CochainCaps::default())
}

pub fn cohomology_dims_with_caps(rep: &Representation, n_max: usize, caps: &CochainCaps) -> Result<Vec<CohomologyRow>> {
    rep.require_verified()?;
    let (d, dv) = (rep.dim(), rep.dim_v());
    for n in 1..=n_max {
        caps.admit(n, d, dv)?;
    }
    let mut rows = Vec::new();
    let mut rank_in = 0;
    for n in 1..=n_max {
        let cochains = cochain_tuples(n, d) * dv;
        let rank_out = coboundary_matrix(rep, n, caps)?.rank();
        let cocycles = cochains - rank_out;
        rows.push(CohomologyRow {
            degree: n,
            cochains,
            cocycles,
            coboundaries: rank_in,
            cohomology: cocycles - rank_in,
            rank_out,
        });
        rank_in = rank_out;
    }
    Ok(rows)
}

/// `−d f` for a linear map `f: g → V`, as an alternating 2-cochain.
pub fn neg_coboundary_of_map(rep: &Representation, f: &Matrix) -> Result<TwoCochain> {
    let df = coboundary(rep, &NCochain::from_linear_map(f))?;
    Ok(TwoCochain::from_ncochain(&df)?.neg())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::kernel_dim;
    use crate::fixtures;
    use crate::threelie::{check_derivation, check_fundamental_identity, check_homomorphism};

    #[test]
    fn adjoint_examples() {
        let a = fixtures::dim3();
        let ad = Representation::adjoint(&a).unwrap();
        assert!(check_representation(&ad).passed());
        // ad_{e2,e3} e1 = [e2, e3, e1] = e1
        assert_eq!(ad.rho_basis(1, 2).column(0), unit(3, 0));
        let ab = Representation::adjoint(&ThreeLieAlgebra::abelian(4)).unwrap();
        assert!(ab.rho_matrices().iter().all(Matrix::is_zero));
        assert!(Representation::adjoint(&fixtures::broken()).is_err());
    }

    #[test]
    fn representation_check_rejects_sign_flip() {
        let a = fixtures::dim3();
        let ad = Representation::adjoint(&a).unwrap();
        let mut rho = ad.rho_matrices().to_vec();
        rho[2] = rho[2].neg();
        let bad = Representation::new(a.clone(), 3, rho).unwrap();
        assert!(!check_representation(&bad).passed());
        let zero = Representation::zero(a, 2);
        assert!(check_representation(&zero).passed());
    }

    #[test]
    fn degree_one_coboundary_matches_closed_form() {
        let a = fixtures::dim3();
        let ad = Representation::adjoint(&a).unwrap();
        let mut rng = fixtures::rng(7);
        for _ in 0..5 {
            let f = fixtures::random_matrix(&mut rng, 3, 3);
            let df = coboundary(&ad, &NCochain::from_linear_map(&f)).unwrap();
            for i in 0..3 {
                for j in i + 1..3 {
                    for k in 0..3 {
                        let (x, y, z) = (unit(3, i), unit(3, j), unit(3, k));
                        let mut expect = f.apply(&a.bracket_basis(i, j, k)).iter().map(|v| -v).collect::<Vector>();
                        expect = add_vec(&expect, &ad.act(&x, &y, &f.column(k)));
                        expect = add_vec(&expect, &ad.act(&y, &z, &f.column(i)));
                        expect = add_vec(&expect, &ad.act(&z, &x, &f.column(j)));
                        assert_eq!(df.value(&[pair_index(3, i, j)], k), &expect);
                    }
                }
            }
            let closed = df.is_zero();
            assert_eq!(closed, check_derivation(&a, &f).unwrap().passed());
        }
        let der = a.ad_basis(0, 1);
        assert!(coboundary(&ad, &NCochain::from_linear_map(&der)).unwrap().is_zero());
    }

    #[test]
    fn embedded_two_cochain_coboundary_is_the_cocycle_identity() {
        let a = fixtures::dim3();
        let ad = Representation::adjoint(&a).unwrap();
        let mut rng = fixtures::rng(11);
        let phi = TwoCochain::new(AlternatingForm::from_fn(3, 3, |_, _, _| fixtures::random_vector(&mut rng, 3)));
        let d_phi = coboundary(&ad, &phi.to_ncochain()).unwrap();
        let report = check_2cocycle(&ad, &phi).unwrap();
        assert_eq!(d_phi.is_zero(), report.passed());
        // each violation's lhs is the corresponding value of d Φ
        for v in &report.violations {
            let t: Vec<usize> = v.tuple.iter().map(|i| i - 1).collect();
            let val = d_phi.value(&[pair_index(3, t[0], t[1]), pair_index(3, t[2], t[3])], t[4]);
            assert_eq!(val, &v.lhs);
        }
    }

    #[test]
    fn cocycle_examples() {
        let a = fixtures::dim3();
        let ad = Representation::adjoint(&a).unwrap();
        assert!(check_2cocycle(&ad, &TwoCochain::zero(3, 3)).unwrap().passed());
        assert!(check_2cocycle(&ad, &TwoCochain::from_bracket(&a).neg()).unwrap().passed());
        let mut rng = fixtures::rng(3);
        let f = fixtures::random_matrix(&mut rng, 3, 3);
        let phi = neg_coboundary_of_map(&ad, &f).unwrap();
        assert!(check_2cocycle(&ad, &phi).unwrap().passed());
    }

    #[test]
    fn semidirect_examples() {
        let ab = ThreeLieAlgebra::abelian(2);
        let ctx = TwistedContext::untwisted(Representation::zero(ab, 3).verify().unwrap()).unwrap();
        let s = twisted_semidirect(&ctx).unwrap();
        assert_eq!(s.dim(), 5);
        assert!(s.nonzero_brackets().is_empty());

        let a = fixtures::dim3();
        let ad = Representation::adjoint(&a).unwrap();
        let ctx = TwistedContext::new(ad, TwoCochain::from_bracket(&a).neg()).unwrap().verify().unwrap();
        let s = twisted_semidirect(&ctx).unwrap();
        assert_eq!(s.dim(), 6);
        assert!(check_fundamental_identity(&s).passed());
        let proj = Matrix::from_fn(3, 6, |i, j| if i == j { rat(1) } else { rat(0) });
        assert!(check_homomorphism(&s, &a, &proj).unwrap().passed());
    }

    #[test]
    fn unverified_inputs_are_refused() {
        let a = fixtures::dim3();
        let rep = Representation::zero(a.clone(), 2);
        assert!(matches!(coboundary(&rep, &NCochain::zero(1, 3, 2)), Err(Error::Unverified(_))));
        let ad = Representation::adjoint(&a).unwrap();
        let ctx = TwistedContext::new(ad, TwoCochain::zero(3, 3)).unwrap();
        assert!(twisted_semidirect(&ctx).is_err());
    }

    #[test]
    fn gauge_map_is_a_homomorphism_of_semidirect_products() {
        let a = fixtures::dim3();
        let ad = Representation::adjoint(&a).unwrap();
        let phi = TwoCochain::from_bracket(&a).neg();
        let ctx = TwistedContext::new(ad.clone(), phi.clone()).unwrap().verify().unwrap();
        let mut rng = fixtures::rng(5);
        for _ in 0..5 {
            let f = fixtures::random_matrix(&mut rng, 3, 3);
            let shifted = phi.sub(&neg_coboundary_of_map(&ad, &f).unwrap().neg()).unwrap();
            let ctx2 = TwistedContext::new(ad.clone(), shifted).unwrap().verify().unwrap();
            let s1 = twisted_semidirect(&ctx).unwrap();
            let s2 = twisted_semidirect(&ctx2).unwrap();
            let psi = Matrix::from_fn(6, 6, |i, j| {
                if i == j {
                    rat(1)
                } else if i >= 3 && j < 3 {
                    f[(i - 3, j)].clone()
                } else {
                    rat(0)
                }
            });
            assert!(check_homomorphism(&s1, &s2, &psi).unwrap().passed());
        }
    }

    #[test]
    fn cohomology_of_abelian_zero_rep_is_everything() {
        let rep = Representation::zero(ThreeLieAlgebra::abelian(3), 2).verify().unwrap();
        let rows = cohomology_dims(&rep, 3).unwrap();
        for r in rows {
            assert_eq!(r.cohomology, cochain_tuples(r.degree, 3) * 2);
        }
    }

    #[test]
    fn first_cohomology_counts_derivations() {
        let a = fixtures::dim3();
        let ad = Representation::adjoint(&a).unwrap();
        let rows = cohomology_dims(&ad, 2).unwrap();
        // derivation equations as one dense system in the 9 matrix entries
        let mut eqs = Vec::new();
        for col in 0..9 {
            let mut der = Matrix::zeros(3, 3);
            der[(col / 3, col % 3)] = rat(1);
            let mut v = Vec::new();
            for i in 0..3 {
                for j in i + 1..3 {
                    for k in j + 1..3 {
                        let (x, y, z) = (unit(3, i), unit(3, j), unit(3, k));
                        let lhs = der.apply(&a.bracket_basis(i, j, k));
                        let rhs = add_vec(
                            &add_vec(&a.bracket(&der.column(i), &y, &z).unwrap(), &a.bracket(&x, &der.column(j), &z).unwrap()),
                            &a.bracket(&x, &y, &der.column(k)).unwrap(),
                        );
                        v.extend(sub_vec(&lhs, &rhs));
                    }
                }
            }
            eqs.push(v);
        }
        let system = Matrix::from_columns(eqs[0].len(), &eqs).unwrap();
        assert_eq!(rows[0].cohomology, kernel_dim(&system));
        assert_eq!(rows[0].cohomology, 6);
    }

    #[test]
    fn caps_are_enforced() {
        let ad = Representation::adjoint(&fixtures::dim3()).unwrap();
        assert!(matches!(coboundary(&ad, &NCochain::zero(5, 3, 3)), Err(Error::DegreeCap { .. })));
        let caps = CochainCaps {
            max_coordinates: 10,
            ..CochainCaps::default()
        };
        assert!(matches!(cohomology_dims_with_caps(&ad, 2, &caps), Err(Error::ResourceCap(_))));
    }
}
