//! NS-3-Lie algebras, Nijenhuis operators and Reynolds operators.
//!
//! An NS-3-Lie algebra carries a bracket `{·,·,·}` skew in its first two
//! slots and a fully skew bracket `[·,·,·]`; their sum
//! `⟦x,y,z⟧ = {x,y,z} + {y,z,x} + {z,x,y} + [x,y,z]` is the subadjacent
//! bracket. Tuple reductions used by [`check_ns_axioms`]:
//! * the left-action identity
//!   `{x1,x2,{x3,x4,x5}} = {x3,x4,{x1,x2,x5}} + {⟦x1,x2,x3⟧,x4,x5} + {x3,⟦x1,x2,x4⟧,x5}`
//!   is skew in `(x1,x2)` and in `(x3,x4)`: `x1<x2`, `x3<x4`, any `x5`;
//! * the compatibility identity
//!   `{⟦x1,x2,x3⟧,x4,x5} = {x1,x2,{x3,x4,x5}} + {x2,x3,{x1,x4,x5}} + {x3,x1,{x2,x4,x5}}`
//!   is fully skew in `(x1,x2,x3)` since the right side is a cyclic sum of
//!   terms skew in their first two slots: `x1<x2<x3`, any `x4, x5`;
//! * the square identity
//!   `[x1,x2,⟦x3,x4,x5⟧] = ↺[x3,x4,⟦x1,x2,x5⟧] − {x1,x2,[x3,x4,x5]} + ↺{x3,x4,[x1,x2,x5]}`,
//!   with `↺` the sum over cyclic rotations of `(x3,x4,x5)`, is skew in
//!   `(x1,x2)` and fully skew in `(x3,x4,x5)`: `x1<x2`, `x3<x4<x5`.

use crate::alternating::{pair_count, pair_from_index, AlternatingForm, PairSkewForm};
use crate::error::{Error, Result};
use crate::exactlin::{add_vec, frac, sub_vec, unit, zero_vec, Matrix, Rational, Vector};
use crate::repcoh::{Representation, TwistedContext, TwoCochain};
use crate::report::{all_words, increasing, product, Comparison, Report};
use crate::threelie::{check_derivation, check_homomorphism, LinearEndo, ThreeLieAlgebra};
use crate::trbo::TwistedRbo;

fn sum(parts: &[Vector]) -> Vector {
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        out = add_vec(&out, p);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NSThreeLie {
    curly: PairSkewForm,
    square: AlternatingForm,
    verified: bool,
}

impl NSThreeLie {
    /// Wraps both brackets; the result is unverified.
    pub fn new(curly: PairSkewForm, square: AlternatingForm) -> Result<Self> {
        let d = curly.dim();
        if curly.target_dim() != d || square.dim() != d || square.target_dim() != d {
            return Err(Error::dims("both brackets must be products on the same space"));
        }
        Ok(NSThreeLie {
            curly,
            square,
            verified: false,
        })
    }

    pub fn zero(dim: usize) -> Self {
        NSThreeLie {
            curly: PairSkewForm::zero(dim, dim),
            square: AlternatingForm::zero(dim, dim),
            verified: false,
        }
    }

    pub fn verify(mut self) -> Result<Self> {
        if self.verified {
            return Ok(self);
        }
        let report = check_ns_axioms(&self);
        if !report.passed() {
            return Err(Error::VerificationFailed {
                subject: "NS-3-Lie algebra".into(),
                report: Box::new(report),
            });
        }
        self.verified = true;
        Ok(self)
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn dim(&self) -> usize {
        self.curly.dim()
    }

    pub fn curly_form(&self) -> &PairSkewForm {
        &self.curly
    }

    pub fn square_form(&self) -> &AlternatingForm {
        &self.square
    }

    pub fn curly(&self, x: &[Rational], y: &[Rational], z: &[Rational]) -> Vector {
        self.curly.eval(x, y, z)
    }

    pub fn square(&self, x: &[Rational], y: &[Rational], z: &[Rational]) -> Vector {
        self.square.eval(x, y, z)
    }

    /// The subadjacent bracket `⟦x,y,z⟧`.
    pub fn subadjacent_eval(&self, x: &[Rational], y: &[Rational], z: &[Rational]) -> Vector {
        sum(&[self.curly(x, y, z), self.curly(y, z, x), self.curly(z, x, y), self.square(x, y, z)])
    }
}

pub fn check_ns_axioms(ns: &NSThreeLie) -> Report {
    let d = ns.dim();
    let e = |i| unit(d, i);
    let singles: Vec<Vec<usize>> = (0..d).map(|i| vec![i]).collect();

    let left = Report::check_tuples(
        "left-action identity",
        product(&product(&increasing(d, 2), &increasing(d, 2)), &singles),
        |t| {
            let (x1, x2, x3, x4, x5) = (e(t[0]), e(t[1]), e(t[2]), e(t[3]), e(t[4]));
            let lhs = ns.curly(&x1, &x2, &ns.curly(&x3, &x4, &x5));
            let rhs = sum(&[
                ns.curly(&x3, &x4, &ns.curly(&x1, &x2, &x5)),
                ns.curly(&ns.subadjacent_eval(&x1, &x2, &x3), &x4, &x5),
                ns.curly(&x3, &ns.subadjacent_eval(&x1, &x2, &x4), &x5),
            ]);
            vec![Comparison::new("left-action identity", lhs, rhs)]
        },
    );

    let compat = Report::check_tuples(
        "compatibility identity",
        product(&increasing(d, 3), &all_words(d, 2)),
        |t| {
            let (x1, x2, x3, x4, x5) = (e(t[0]), e(t[1]), e(t[2]), e(t[3]), e(t[4]));
            let lhs = ns.curly(&ns.subadjacent_eval(&x1, &x2, &x3), &x4, &x5);
            let rhs = sum(&[
                ns.curly(&x1, &x2, &ns.curly(&x3, &x4, &x5)),
                ns.curly(&x2, &x3, &ns.curly(&x1, &x4, &x5)),
                ns.curly(&x3, &x1, &ns.curly(&x2, &x4, &x5)),
            ]);
            vec![Comparison::new("compatibility identity", lhs, rhs)]
        },
    );

    let square = Report::check_tuples("square identity", product(&increasing(d, 2), &increasing(d, 3)), |t| {
        let (x1, x2, x3, x4, x5) = (e(t[0]), e(t[1]), e(t[2]), e(t[3]), e(t[4]));
        let lhs = ns.square(&x1, &x2, &ns.subadjacent_eval(&x3, &x4, &x5));
        let rot = [(&x3, &x4, &x5), (&x4, &x5, &x3), (&x5, &x3, &x4)];
        let mut rhs = zero_vec(d);
        for (a, b, c) in rot {
            rhs = add_vec(&rhs, &ns.square(a, b, &ns.subadjacent_eval(&x1, &x2, c)));
            rhs = add_vec(&rhs, &ns.curly(a, b, &ns.square(&x1, &x2, c)));
        }
        rhs = sub_vec(&rhs, &ns.curly(&x1, &x2, &ns.square(&x3, &x4, &x5)));
        vec![Comparison::new("square identity", lhs, rhs)]
    });

    let mut report = Report::new("NS-3-Lie axioms");
    report.absorb(left);
    report.absorb(compat);
    report.absorb(square);
    report
}

fn require_ns_verified(ns: &NSThreeLie) -> Result<()> {
    if ns.verified {
        Ok(())
    } else {
        Err(Error::Unverified("NS-3-Lie algebra"))
    }
}

/// The subadjacent 3-Lie algebra `(A, ⟦·,·,·⟧)`.
pub fn subadjacent(ns: &NSThreeLie) -> Result<ThreeLieAlgebra> {
    require_ns_verified(ns)?;
    let d = ns.dim();
    let form = AlternatingForm::from_fn(d, d, |i, j, k| ns.subadjacent_eval(&unit(d, i), &unit(d, j), &unit(d, k)));
    ThreeLieAlgebra::new(form)?.verify()
}

/// `L(x, y) z = {x, y, z}` as a representation of the subadjacent algebra.
pub fn l_representation(ns: &NSThreeLie) -> Result<Representation> {
    let carrier = subadjacent(ns)?;
    let d = ns.dim();
    let rho = (0..pair_count(d))
        .map(|p| {
            let (i, j) = pair_from_index(d, p);
            let cols: Vec<Vector> = (0..d).map(|k| ns.curly.canonical(i, j, k).clone()).collect();
            Matrix::from_columns(d, &cols).expect("columns live in A")
        })
        .collect();
    Representation::new(carrier, d, rho)?.verify()
}

/// `{u,v,w} = ρ(Tu,Tv)w` and `[u,v,w] = Φ(Tu,Tv,Tw)`.
pub fn ns_from_trbo(op: &TwistedRbo) -> Result<NSThreeLie> {
    if !op.is_verified() {
        return Err(Error::Unverified("twisted Rota-Baxter operator"));
    }
    let dv = op.dim_v();
    let (ctx, t) = (op.context(), op.matrix());
    let curly = PairSkewForm::from_fn(dv, dv, |i, j, k| ctx.rep().act(&t.column(i), &t.column(j), &unit(dv, k)));
    let square = AlternatingForm::from_fn(dv, dv, |i, j, k| ctx.phi().eval(&t.column(i), &t.column(j), &t.column(k)));
    NSThreeLie::new(curly, square)?.verify()
}

/// `ψ{x,y,z} = {ψx,ψy,ψz}'` and `ψ[x,y,z] = [ψx,ψy,ψz]'` on basis tuples.
pub fn check_ns_homomorphism(psi: &Matrix, src: &NSThreeLie, dst: &NSThreeLie) -> Result<Report> {
    if psi.cols() != src.dim() || psi.rows() != dst.dim() {
        return Err(Error::dims(format!(
            "map is {}x{} but the algebras have dimensions {} and {}",
            psi.rows(),
            psi.cols(),
            src.dim(),
            dst.dim()
        )));
    }
    let d = src.dim();
    let e = |i| unit(d, i);
    let singles: Vec<Vec<usize>> = (0..d).map(|i| vec![i]).collect();
    let mut report = Report::check_tuples("NS homomorphism", product(&increasing(d, 2), &singles), |t| {
        let lhs = psi.apply(&src.curly(&e(t[0]), &e(t[1]), &e(t[2])));
        let rhs = dst.curly(&psi.column(t[0]), &psi.column(t[1]), &psi.column(t[2]));
        vec![Comparison::new("preserves {·,·,·}", lhs, rhs)]
    });
    report.absorb(Report::check_tuples("NS homomorphism", increasing(d, 3), |t| {
        let lhs = psi.apply(&src.square(&e(t[0]), &e(t[1]), &e(t[2])));
        let rhs = dst.square(&psi.column(t[0]), &psi.column(t[1]), &psi.column(t[2]));
        vec![Comparison::new("preserves [·,·,·]", lhs, rhs)]
    }));
    Ok(report)
}

fn check_endo(a: &ThreeLieAlgebra, m: &Matrix, what: &str) -> Result<()> {
    if m.rows() != a.dim() || m.cols() != a.dim() {
        return Err(Error::dims(format!(
            "{what} is {}x{} on a {}-dimensional algebra",
            m.rows(),
            m.cols(),
            a.dim()
        )));
    }
    Ok(())
}

/// `[Nx,Ny,z] + [x,Ny,Nz] + [Nx,y,Nz] − N[Nx,y,z] − N[x,Ny,z] − N[x,y,Nz] + N²[x,y,z]`.
fn deformed_eval(a: &ThreeLieAlgebra, n: &Matrix, x: &[Rational], y: &[Rational], z: &[Rational]) -> Vector {
    let (nx, ny, nz) = (n.apply(x), n.apply(y), n.apply(z));
    let quadratic = sum(&[a.br(&nx, &ny, z), a.br(x, &ny, &nz), a.br(&nx, y, &nz)]);
    add_vec(&quadratic, &phi_n_eval(a, n, x, y, z))
}

/// `−N([Nx,y,z] + [x,Ny,z] + [x,y,Nz]) + N²[x,y,z]`.
fn phi_n_eval(a: &ThreeLieAlgebra, n: &Matrix, x: &[Rational], y: &[Rational], z: &[Rational]) -> Vector {
    let (nx, ny, nz) = (n.apply(x), n.apply(y), n.apply(z));
    let linear = sum(&[a.br(&nx, y, z), a.br(x, &ny, z), a.br(x, y, &nz)]);
    sub_vec(&n.apply(&n.apply(&a.br(x, y, z))), &n.apply(&linear))
}

/// `[Nx,Ny,Nz] = N[x,y,z]_N` on basis triples.
pub fn check_nijenhuis(a: &ThreeLieAlgebra, n: &LinearEndo) -> Result<Report> {
    a.require_verified("algebra")?;
    check_endo(a, n, "Nijenhuis candidate")?;
    let d = a.dim();
    let e = |i| unit(d, i);
    Ok(Report::check_tuples("Nijenhuis identity", increasing(d, 3), |t| {
        let lhs = a.br(&n.column(t[0]), &n.column(t[1]), &n.column(t[2]));
        let rhs = n.apply(&deformed_eval(a, n, &e(t[0]), &e(t[1]), &e(t[2])));
        vec![Comparison::new("Nijenhuis identity", lhs, rhs)]
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NijenhuisOp {
    algebra: ThreeLieAlgebra,
    n: Matrix,
    verified: bool,
}

impl NijenhuisOp {
    pub fn new(algebra: ThreeLieAlgebra, n: Matrix) -> Result<Self> {
        check_endo(&algebra, &n, "Nijenhuis candidate")?;
        Ok(NijenhuisOp {
            algebra,
            n,
            verified: false,
        })
    }

    /// Runs [`check_nijenhuis`]; a failing operator gives `NotNijenhuis`.
    pub fn verify(mut self) -> Result<Self> {
        if !self.verified {
            if !check_nijenhuis(&self.algebra, &self.n)?.passed() {
                return Err(Error::NotNijenhuis);
            }
            self.verified = true;
        }
        Ok(self)
    }

    fn require_verified(&self) -> Result<()> {
        if self.verified {
            Ok(())
        } else {
            Err(Error::NotNijenhuis)
        }
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn algebra(&self) -> &ThreeLieAlgebra {
        &self.algebra
    }

    pub fn matrix(&self) -> &Matrix {
        &self.n
    }
}

/// The deformed algebra `g_N`.
pub fn deformed_bracket(op: &NijenhuisOp) -> Result<ThreeLieAlgebra> {
    op.require_verified()?;
    let d = op.algebra.dim();
    let form = AlternatingForm::from_fn(d, d, |i, j, k| {
        deformed_eval(&op.algebra, &op.n, &unit(d, i), &unit(d, j), &unit(d, k))
    });
    ThreeLieAlgebra::new(form)?.verify()
}

/// `ρ_N(x, y) z = [Nx, Ny, z]`, a representation of `g_N` on `g`.
pub fn rho_n(op: &NijenhuisOp) -> Result<Representation> {
    let carrier = deformed_bracket(op)?;
    let d = op.algebra.dim();
    let rho = (0..pair_count(d))
        .map(|p| {
            let (i, j) = pair_from_index(d, p);
            op.algebra.ad(&op.n.column(i), &op.n.column(j))
        })
        .collect();
    Representation::new(carrier, d, rho)?.verify()
}

/// `Φ_N(x,y,z) = −N([Nx,y,z] + [x,Ny,z] + [x,y,Nz]) + N²[x,y,z]` as a
/// 2-cochain of `g_N` valued in `g`.
pub fn phi_n(op: &NijenhuisOp) -> Result<TwoCochain> {
    op.require_verified()?;
    let d = op.algebra.dim();
    Ok(TwoCochain::new(AlternatingForm::from_fn(d, d, |i, j, k| {
        phi_n_eval(&op.algebra, &op.n, &unit(d, i), &unit(d, j), &unit(d, k))
    })))
}

/// The identity map as a twisted Rota-Baxter operator in the context
/// `(g_N, ρ_N, Φ_N)`; context and operator are both verified.
pub fn nijenhuis_trbo(op: &NijenhuisOp) -> Result<TwistedRbo> {
    let ctx = TwistedContext::new(rho_n(op)?, phi_n(op)?)?.verify()?;
    TwistedRbo::new(ctx, Matrix::identity(op.algebra.dim()))?.verify()
}

/// `{x,y,z} = [Nx,Ny,z]` and `[x,y,z] = Φ_N(x,y,z)`, computed directly from
/// `N` and the bracket of `g`.
pub fn ns_from_nijenhuis(op: &NijenhuisOp) -> Result<NSThreeLie> {
    op.require_verified()?;
    let (a, n) = (&op.algebra, &op.n);
    let d = a.dim();
    let curly = PairSkewForm::from_fn(d, d, |i, j, k| a.br(&n.column(i), &n.column(j), &unit(d, k)));
    let square = AlternatingForm::from_fn(d, d, |i, j, k| phi_n_eval(a, n, &unit(d, i), &unit(d, j), &unit(d, k)));
    NSThreeLie::new(curly, square)?.verify()
}

/// Closed-form NS structure induced by `N = (a_ij)` on the algebra
/// `[e1, e2, e3] = e1`, written with the complementary minors `M_ij`
/// of `N`. The sign of a permutation `(i, j, k)` is `(−1)^{inversions}`.
pub fn dim3_minor_table(n: &Matrix) -> Result<NSThreeLie> {
    if n.rows() != 3 || n.cols() != 3 {
        return Err(Error::dims("the minor table is for 3x3 operators"));
    }
    // 1-based minor: delete row r and column c
    let m = |r: usize, c: usize| -> Rational {
        let rows: Vec<usize> = (0..3).filter(|&x| x != r - 1).collect();
        let cols: Vec<usize> = (0..3).filter(|&x| x != c - 1).collect();
        &n[(rows[0], cols[0])] * &n[(rows[1], cols[1])] - &n[(rows[0], cols[1])] * &n[(rows[1], cols[0])]
    };
    let e1 = |s: Rational| vec![s, frac(0, 1), frac(0, 1)];
    let mut curly = PairSkewForm::zero(3, 3);
    // distinct indices: (−1)^{inv(ijk)} M_kk e1, stored for i<j
    for (i, j, k, sign) in [(1, 2, 3, 1), (1, 3, 2, -1), (2, 3, 1, 1)] {
        curly.set(i - 1, j - 1, k - 1, e1(m(k, k) * frac(sign, 1)))?;
    }
    let entries = [
        ((1, 2, 1), m(1, 3)),
        ((1, 3, 1), m(1, 2)),
        ((2, 1, 2), m(2, 3)),
        ((2, 3, 2), -m(2, 1)),
        ((3, 1, 3), -m(3, 2)),
        ((3, 2, 3), -m(3, 1)),
    ];
    for ((i, j, k), v) in entries {
        curly.set(i - 1, j - 1, k - 1, e1(v))?;
    }
    let mut square = AlternatingForm::zero(3, 3);
    square.set(0, 1, 2, vec![-m(2, 2) - m(3, 3), -m(1, 2), m(1, 3)])?;
    NSThreeLie::new(curly, square)
}

/// `[Rx,Ry,Rz] = R([Rx,Ry,z] + [x,Ry,Rz] + [Rx,y,Rz] − [Rx,Ry,Rz])` on
/// basis triples.
pub fn check_reynolds(a: &ThreeLieAlgebra, r: &LinearEndo) -> Result<Report> {
    a.require_verified("algebra")?;
    check_endo(a, r, "Reynolds candidate")?;
    let d = a.dim();
    let e = |i| unit(d, i);
    Ok(Report::check_tuples("Reynolds identity", increasing(d, 3), |t| {
        let lhs = a.br(&r.column(t[0]), &r.column(t[1]), &r.column(t[2]));
        let rhs = r.apply(&reynolds_eval(a, r, &e(t[0]), &e(t[1]), &e(t[2])));
        vec![Comparison::new("Reynolds identity", lhs, rhs)]
    }))
}

/// `[Rx,Ry,z] + [x,Ry,Rz] + [Rx,y,Rz] − [Rx,Ry,Rz]`.
pub(crate) fn reynolds_eval(a: &ThreeLieAlgebra, r: &Matrix, x: &[Rational], y: &[Rational], z: &[Rational]) -> Vector {
    let (rx, ry, rz) = (r.apply(x), r.apply(y), r.apply(z));
    sub_vec(
        &sum(&[a.br(&rx, &ry, z), a.br(x, &ry, &rz), a.br(&rx, y, &rz)]),
        &a.br(&rx, &ry, &rz),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReynoldsOp {
    algebra: ThreeLieAlgebra,
    r: Matrix,
    verified: bool,
}

impl ReynoldsOp {
    pub fn new(algebra: ThreeLieAlgebra, r: Matrix) -> Result<Self> {
        check_endo(&algebra, &r, "Reynolds candidate")?;
        Ok(ReynoldsOp {
            algebra,
            r,
            verified: false,
        })
    }

    /// Runs [`check_reynolds`]; a failing operator gives `NotReynolds`.
    pub fn verify(mut self) -> Result<Self> {
        if !self.verified {
            if !check_reynolds(&self.algebra, &self.r)?.passed() {
                return Err(Error::NotReynolds);
            }
            self.verified = true;
        }
        Ok(self)
    }

    fn require_verified(&self) -> Result<()> {
        if self.verified {
            Ok(())
        } else {
            Err(Error::NotReynolds)
        }
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn algebra(&self) -> &ThreeLieAlgebra {
        &self.algebra
    }

    pub fn matrix(&self) -> &Matrix {
        &self.r
    }
}

/// `[x,y,z]_R = [Rx,Ry,z] + [x,Ry,Rz] + [Rx,y,Rz] − [Rx,Ry,Rz]`.
pub fn reynolds_bracket(op: &ReynoldsOp) -> Result<ThreeLieAlgebra> {
    op.require_verified()?;
    let d = op.algebra.dim();
    let form = AlternatingForm::from_fn(d, d, |i, j, k| {
        reynolds_eval(&op.algebra, &op.r, &unit(d, i), &unit(d, j), &unit(d, k))
    });
    ThreeLieAlgebra::new(form)?.verify()
}

/// Properties of the Reynolds bracket: `R[x,y,z]_R = [Rx,Ry,Rz]`, `R` is
/// Reynolds for `[·,·,·]_R`, and `R` is a homomorphism into `g` commuting
/// with itself.
pub fn check_reynolds_bracket(op: &ReynoldsOp) -> Result<Report> {
    let b = reynolds_bracket(op)?;
    let (a, r) = (&op.algebra, &op.r);
    let d = a.dim();
    let mut report = Report::check_tuples("Reynolds bracket", increasing(d, 3), |t| {
        let lhs = r.apply(&b.bracket_basis(t[0], t[1], t[2]));
        let rhs = a.br(&r.column(t[0]), &r.column(t[1]), &r.column(t[2]));
        vec![Comparison::new("R[x,y,z]_R = [Rx,Ry,Rz]", lhs, rhs)]
    });
    report.absorb(check_reynolds(&b, r)?);
    report.absorb(check_homomorphism(&b, a, r)?);
    Ok(report)
}

/// `R` in the context `(g, ad, −[·,·,·])`, verified.
pub fn trbo_from_reynolds(op: &ReynoldsOp) -> Result<TwistedRbo> {
    op.require_verified()?;
    let rep = Representation::adjoint(&op.algebra)?;
    let ctx = TwistedContext::new(rep, TwoCochain::from_bracket(&op.algebra).neg())?.verify()?;
    TwistedRbo::new(ctx, op.r.clone())?.verify()
}

/// `{x,y,z} = [Rx,Ry,z]` and `[x,y,z] = −[Rx,Ry,Rz]`, computed directly.
pub fn ns_from_reynolds(op: &ReynoldsOp) -> Result<NSThreeLie> {
    op.require_verified()?;
    let (a, r) = (&op.algebra, &op.r);
    let d = a.dim();
    let curly = PairSkewForm::from_fn(d, d, |i, j, k| a.br(&r.column(i), &r.column(j), &unit(d, k)));
    let square = AlternatingForm::from_fn(d, d, |i, j, k| {
        a.br(&r.column(i), &r.column(j), &r.column(k)).iter().map(|x| -x).collect()
    });
    NSThreeLie::new(curly, square)?.verify()
}

/// `R⁻¹ − ½Id` for an invertible Reynolds operator.
pub fn derivation_from_reynolds(op: &ReynoldsOp) -> Result<LinearEndo> {
    op.require_verified()?;
    let inv = op.r.invert()?;
    Ok(inv.sub(&Matrix::identity(op.algebra.dim()).scale(&frac(1, 2))))
}

/// `(D + ½Id)⁻¹` for a derivation `D`, returned as a verified Reynolds
/// operator.
pub fn reynolds_from_derivation(a: &ThreeLieAlgebra, der: &LinearEndo) -> Result<ReynoldsOp> {
    if !check_derivation(a, der)?.passed() {
        return Err(Error::NotADerivation);
    }
    let r = der.add(&Matrix::identity(a.dim()).scale(&frac(1, 2))).invert()?;
    ReynoldsOp::new(a.clone(), r)?.verify()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;
    use crate::fixtures;
    use crate::repcoh::check_representation;
    use crate::threelie::check_fundamental_identity;
    use crate::trbo::{check_trbo_homomorphism, induced_bracket};
    use proptest::prelude::*;

    fn random_nijenhuis(seed: u64) -> NijenhuisOp {
        let mut rng = fixtures::rng(seed);
        NijenhuisOp::new(fixtures::dim3(), fixtures::random_matrix(&mut rng, 3, 3))
            .unwrap()
            .verify()
            .unwrap()
    }

    /// Reynolds operators on the 3-dimensional fixture with `R e1 = 0`.
    fn degenerate_reynolds(seed: u64) -> ReynoldsOp {
        let mut rng = fixtures::rng(seed);
        let mut r = fixtures::random_matrix(&mut rng, 3, 3);
        for i in 0..3 {
            r[(i, 0)] = rat(0);
        }
        ReynoldsOp::new(fixtures::dim3(), r).unwrap().verify().unwrap()
    }

    #[test]
    fn degenerate_ns_structures() {
        let a = fixtures::simple4();
        let ns = NSThreeLie::new(PairSkewForm::zero(4, 4), a.form().clone()).unwrap().verify().unwrap();
        assert_eq!(subadjacent(&ns).unwrap().form(), a.form());
        assert!(l_representation(&ns).unwrap().rho_matrices().iter().all(Matrix::is_zero));
        // Φ = 0 gives a zero square bracket
        let rep = Representation::adjoint(&fixtures::dim3()).unwrap();
        let ctx = TwistedContext::untwisted(rep).unwrap();
        let mut rng = fixtures::rng(1);
        let mut t = fixtures::random_matrix(&mut rng, 3, 3);
        for i in 0..3 {
            t[(i, 0)] = rat(0);
        }
        // [Tu,Tv,Tw] = 0 and the right side lands in span(e1) = ker T
        let op = TwistedRbo::new(ctx, t).unwrap().verify().unwrap();
        let ns = ns_from_trbo(&op).unwrap();
        assert!(ns.square_form().is_zero());
        assert!(check_ns_axioms(&ns).passed());
    }

    #[test]
    fn perturbed_ns_fails() {
        let ns = ns_from_nijenhuis(&random_nijenhuis(3)).unwrap();
        let mut curly = ns.curly_form().clone();
        let v = add_vec(curly.canonical(0, 1, 1), &unit(3, 2));
        curly.set(0, 1, 1, v).unwrap();
        let bad = NSThreeLie::new(curly, ns.square_form().clone()).unwrap();
        assert!(!check_ns_axioms(&bad).passed());
        assert!(matches!(subadjacent(&bad), Err(Error::Unverified(_))));
    }

    #[test]
    fn nijenhuis_examples() {
        let a = fixtures::dim3();
        assert!(check_nijenhuis(&a, &Matrix::identity(3)).unwrap().passed());
        let id = NijenhuisOp::new(a.clone(), Matrix::identity(3)).unwrap().verify().unwrap();
        assert_eq!(deformed_bracket(&id).unwrap().form(), a.form());
        assert_eq!(rho_n(&id).unwrap(), Representation::adjoint(&a).unwrap().verify().unwrap());
        assert_eq!(phi_n(&id).unwrap(), TwoCochain::from_bracket(&a).scale(&rat(-2)));
        let zero = NijenhuisOp::new(a.clone(), Matrix::zeros(3, 3)).unwrap().verify().unwrap();
        assert!(deformed_bracket(&zero).unwrap().form().is_zero());
        assert!(phi_n(&zero).unwrap().form().is_zero());
        let unverified = NijenhuisOp::new(a, Matrix::identity(3)).unwrap();
        assert!(matches!(deformed_bracket(&unverified), Err(Error::NotNijenhuis)));
    }

    #[test]
    fn diagonal_deformed_bracket() {
        let (x, y, z) = (rat(2), rat(-3), frac(1, 2));
        let n = Matrix::from_fn(3, 3, |i, j| if i != j { rat(0) } else { [&x, &y, &z][i].clone() });
        let op = NijenhuisOp::new(fixtures::dim3(), n).unwrap().verify().unwrap();
        let expected = &x * &y + &y * &z + &z * &x - (&x + &y + &z) * &x + &x * &x;
        assert_eq!(deformed_bracket(&op).unwrap().bracket_basis(0, 1, 2), vec![expected, rat(0), rat(0)]);
    }

    #[test]
    fn nijenhuis_fails_on_semidirect() {
        let s = fixtures::semidirect4();
        let mut rng = fixtures::rng(8);
        let failures = (0..10)
            .filter(|_| !check_nijenhuis(&s, &fixtures::random_matrix(&mut rng, 4, 4)).unwrap().passed())
            .count();
        assert!(failures >= 8);
    }

    #[test]
    fn nijenhuis_chain() {
        for seed in 0..5 {
            let op = random_nijenhuis(seed);
            let gn = deformed_bracket(&op).unwrap();
            assert!(check_homomorphism(&gn, op.algebra(), op.matrix()).unwrap().passed());
            assert!(check_representation(&rho_n(&op).unwrap()).passed());
            let t = nijenhuis_trbo(&op).unwrap();
            assert_eq!(induced_bracket(&t).unwrap(), gn);
            let direct = ns_from_nijenhuis(&op).unwrap();
            let via_trbo = ns_from_trbo(&t).unwrap();
            assert_eq!(direct, via_trbo);
            assert_eq!(subadjacent(&direct).unwrap(), gn);
            assert!(check_representation(&l_representation(&direct).unwrap()).passed());
        }
    }

    #[test]
    fn minor_table_matches_general_construction() {
        for seed in 0..10 {
            let op = random_nijenhuis(seed + 40);
            let table = dim3_minor_table(op.matrix()).unwrap();
            let direct = ns_from_nijenhuis(&op).unwrap();
            assert_eq!(table.curly_form(), direct.curly_form());
            assert_eq!(table.square_form(), direct.square_form());
        }
    }

    #[test]
    fn minor_table_first_entries_by_hand() {
        // N = [[1,2,3],[4,5,6],[7,8,10]]: {e1,e2,e1} = M13 e1 = (4·8 − 5·7) e1 = −3 e1
        let n = Matrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        let t = dim3_minor_table(&n).unwrap();
        assert_eq!(t.curly(&unit(3, 0), &unit(3, 1), &unit(3, 0)), vec![rat(-3), rat(0), rat(0)]);
        // {e1,e3,e1} = M12 e1 = (4·10 − 6·7) e1 = −2 e1
        assert_eq!(t.curly(&unit(3, 0), &unit(3, 2), &unit(3, 0)), vec![rat(-2), rat(0), rat(0)]);
    }

    #[test]
    fn reynolds_examples() {
        let a = fixtures::dim3();
        assert!(check_reynolds(&a, &Matrix::zeros(3, 3)).unwrap().passed());
        assert!(!check_reynolds(&a, &Matrix::identity(3)).unwrap().passed());
        let zero = ReynoldsOp::new(a.clone(), Matrix::zeros(3, 3)).unwrap().verify().unwrap();
        assert!(reynolds_bracket(&zero).unwrap().form().is_zero());
        assert!(trbo_from_reynolds(&zero).unwrap().is_verified());
        assert!(matches!(
            ReynoldsOp::new(a, Matrix::identity(3)).unwrap().verify(),
            Err(Error::NotReynolds)
        ));
    }

    #[test]
    fn reynolds_chain() {
        for seed in 0..5 {
            let op = degenerate_reynolds(seed);
            assert!(check_reynolds_bracket(&op).unwrap().passed());
            let t = trbo_from_reynolds(&op).unwrap();
            assert_eq!(induced_bracket(&t).unwrap(), reynolds_bracket(&op).unwrap());
            let direct = ns_from_reynolds(&op).unwrap();
            assert_eq!(direct, ns_from_trbo(&t).unwrap());
            assert!(check_representation(&l_representation(&direct).unwrap()).passed());
            assert!(check_fundamental_identity(&subadjacent(&direct).unwrap()).passed());
        }
    }

    #[test]
    fn derivation_correspondence() {
        let a = fixtures::dim3();
        let r = reynolds_from_derivation(&a, &Matrix::zeros(3, 3)).unwrap();
        assert_eq!(r.matrix(), &Matrix::identity(3).scale(&rat(2)));
        let ad = a.ad_basis(0, 1);
        let r = reynolds_from_derivation(&a, &ad).unwrap();
        let back = derivation_from_reynolds(&r).unwrap();
        assert_eq!(back, ad);
        assert!(check_derivation(&a, &back).unwrap().passed());
        let bad = Matrix::identity(3).scale(&frac(-1, 2));
        assert!(matches!(reynolds_from_derivation(&a, &bad), Err(Error::NotADerivation)));
        // −½ ad_{e2,e3} has eigenvalue −½ on e1
        let d = a.ad_basis(1, 2).scale(&frac(-1, 2));
        assert!(check_derivation(&a, &d).unwrap().passed());
        assert!(matches!(reynolds_from_derivation(&a, &d), Err(Error::Singular)));
        assert!(matches!(derivation_from_reynolds(&degenerate_reynolds(0)), Err(Error::Singular)));
    }

    #[test]
    fn ns_homomorphism_examples() {
        let ns = ns_from_nijenhuis(&random_nijenhuis(2)).unwrap();
        assert!(check_ns_homomorphism(&Matrix::identity(3), &ns, &ns).unwrap().passed());
        assert!(!check_ns_homomorphism(&Matrix::identity(3).scale(&rat(2)), &ns, &ns).unwrap().passed());
        // ψ of a twisted homomorphism (φ, ψ) between operators sharing a context
        let op = degenerate_reynolds(5);
        let t = trbo_from_reynolds(&op).unwrap();
        let (i3, ns_t) = (Matrix::identity(3), ns_from_trbo(&t).unwrap());
        assert!(check_trbo_homomorphism(&i3, &i3, &t, &t).unwrap().passed());
        assert!(check_ns_homomorphism(&i3, &ns_t, &ns_t).unwrap().passed());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn every_endomorphism_of_dim3_is_nijenhuis(seed in any::<u64>()) {
            let mut rng = fixtures::rng(seed);
            let n = fixtures::random_matrix(&mut rng, 3, 3);
            prop_assert!(check_nijenhuis(&fixtures::dim3(), &n).unwrap().passed());
        }

        #[test]
        fn induced_ns_satisfies_axioms(seed in any::<u64>()) {
            let op = random_nijenhuis(seed);
            prop_assert!(check_ns_axioms(&ns_from_nijenhuis(&op).unwrap()).passed());
        }
    }
}
