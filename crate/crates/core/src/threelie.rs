//! Finite-dimensional 3-Lie algebras given by structure constants.
//!
//! Both sides of the fundamental identity
//!
//! ```text
//! [x1, x2, [x3, x4, x5]] = [[x1, x2, x3], x4, x5] + [x3, [x1, x2, x4], x5] + [x3, x4, [x1, x2, x5]]
//! ```
//!
//! are skew in `(x1, x2)` and fully skew in `(x3, x4, x5)`: the left side is,
//! and the right side is the action of the derivation-candidate `[x1, x2, -]`
//! on a fully skew bracket, which stays fully skew. By multilinearity it is
//! therefore enough to check basis tuples with `x1<x2` and `x3<x4<x5`.

use crate::alternating::{canonical_triple, AlternatingForm};
use crate::error::{Error, Result};
use crate::exactlin::{add_vec, unit, Matrix, Rational, Vector};
use crate::report::{increasing, product, Comparison, Report};

/// Linear endomorphisms and linear maps between carriers are plain matrices
/// whose `k`-th column is the image of `e_k`.
pub type LinearEndo = Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeLieAlgebra {
    form: AlternatingForm,
    verified: bool,
}

impl ThreeLieAlgebra {
    /// Wraps structure constants; the result is unverified.
    pub fn new(form: AlternatingForm) -> Result<Self> {
        if form.dim() != form.target_dim() {
            return Err(Error::dims(format!(
                "bracket on a {}-dimensional space valued in dimension {}",
                form.dim(),
                form.target_dim()
            )));
        }
        Ok(ThreeLieAlgebra {
            form,
            verified: false,
        })
    }

    /// Builds an algebra from nonzero brackets `[e_i, e_j, e_k]` (0-based, any
    /// order, each unordered triple at most once).
    pub fn from_brackets(dim: usize, brackets: impl IntoIterator<Item = ((usize, usize, usize), Vector)>) -> Result<Self> {
        let mut form = AlternatingForm::zero(dim, dim);
        for ((i, j, k), v) in brackets {
            form.set(i, j, k, v)?;
        }
        Self::new(form)
    }

    pub fn abelian(dim: usize) -> Self {
        ThreeLieAlgebra {
            form: AlternatingForm::zero(dim, dim),
            verified: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn form(&self) -> &AlternatingForm {
        &self.form
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Runs the fundamental-identity check and marks the algebra verified, or
    /// returns the failing report.
    pub fn verify(mut self) -> Result<Self> {
        if self.verified {
            return Ok(self);
        }
        let report = check_fundamental_identity(&self);
        if !report.passed() {
            return Err(Error::VerificationFailed {
                subject: "3-Lie algebra".into(),
                report: Box::new(report),
            });
        }
        self.verified = true;
        Ok(self)
    }

    pub(crate) fn require_verified(&self, what: &'static str) -> Result<()> {
        if self.verified {
            Ok(())
        } else {
            Err(Error::Unverified(what))
        }
    }

    /// `[e_i, e_j, e_k]` for any indices.
    pub fn bracket_basis(&self, i: usize, j: usize, k: usize) -> Vector {
        self.form.basis(i, j, k)
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational], z: &[Rational]) -> Result<Vector> {
        let d = self.dim();
        if x.len() != d || y.len() != d || z.len() != d {
            return Err(Error::dims(format!("bracket arguments must have length {d}")));
        }
        Ok(self.form.eval(x, y, z))
    }

    /// Unchecked bracket for internal callers that already know the lengths.
    pub(crate) fn br(&self, x: &[Rational], y: &[Rational], z: &[Rational]) -> Vector {
        self.form.eval(x, y, z)
    }

    /// Matrix of `ad_{x,y} = [x, y, -]`.
    pub fn ad(&self, x: &[Rational], y: &[Rational]) -> Matrix {
        let d = self.dim();
        let cols: Vec<Vector> = (0..d).map(|k| self.br(x, y, &unit(d, k))).collect();
        Matrix::from_columns(d, &cols).expect("columns have the carrier dimension")
    }

    pub fn ad_basis(&self, i: usize, j: usize) -> Matrix {
        let d = self.dim();
        self.ad(&unit(d, i), &unit(d, j))
    }

    /// Nonzero brackets on canonical triples.
    pub fn nonzero_brackets(&self) -> Vec<((usize, usize, usize), &Vector)> {
        self.form.nonzero_entries()
    }
}

pub fn check_fundamental_identity(a: &ThreeLieAlgebra) -> Report {
    let d = a.dim();
    let tuples = product(&increasing(d, 2), &increasing(d, 3));
    let e = |i| unit(d, i);
    Report::check_tuples("fundamental identity", tuples, |t| {
        let (x1, x2, x3, x4, x5) = (e(t[0]), e(t[1]), e(t[2]), e(t[3]), e(t[4]));
        let lhs = a.br(&x1, &x2, &a.bracket_basis(t[2], t[3], t[4]));
        let r1 = a.br(&a.bracket_basis(t[0], t[1], t[2]), &x4, &x5);
        let r2 = a.br(&x3, &a.bracket_basis(t[0], t[1], t[3]), &x5);
        let r3 = a.br(&x3, &x4, &a.bracket_basis(t[0], t[1], t[4]));
        vec![Comparison::new("fundamental identity", lhs, add_vec(&add_vec(&r1, &r2), &r3))]
    })
}

fn check_square(a: &ThreeLieAlgebra, m: &Matrix, what: &str) -> Result<()> {
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

/// `D[x,y,z] = [Dx,y,z] + [x,Dy,z] + [x,y,Dz]` on basis triples `i<j<k`.
pub fn check_derivation(a: &ThreeLieAlgebra, der: &LinearEndo) -> Result<Report> {
    check_square(a, der, "derivation")?;
    let d = a.dim();
    let e = |i| unit(d, i);
    Ok(Report::check_tuples("derivation", increasing(d, 3), |t| {
        let (x, y, z) = (e(t[0]), e(t[1]), e(t[2]));
        let (dx, dy, dz) = (der.column(t[0]), der.column(t[1]), der.column(t[2]));
        let lhs = der.apply(&a.bracket_basis(t[0], t[1], t[2]));
        let rhs = add_vec(&add_vec(&a.br(&dx, &y, &z), &a.br(&x, &dy, &z)), &a.br(&x, &y, &dz));
        vec![Comparison::new("derivation", lhs, rhs)]
    }))
}

/// `φ[x,y,z]_A = [φx,φy,φz]_B` on basis triples `i<j<k` of `A`.
pub fn check_homomorphism(a: &ThreeLieAlgebra, b: &ThreeLieAlgebra, phi: &Matrix) -> Result<Report> {
    if phi.cols() != a.dim() || phi.rows() != b.dim() {
        return Err(Error::dims(format!(
            "map is {}x{} but the algebras have dimensions {} and {}",
            phi.rows(),
            phi.cols(),
            a.dim(),
            b.dim()
        )));
    }
    Ok(Report::check_tuples("homomorphism", increasing(a.dim(), 3), |t| {
        let lhs = phi.apply(&a.bracket_basis(t[0], t[1], t[2]));
        let rhs = b.br(&phi.column(t[0]), &phi.column(t[1]), &phi.column(t[2]));
        vec![Comparison::new("homomorphism", lhs, rhs)]
    }))
}

/// Sign of the permutation taking `(i, j, k)` to increasing order, or zero
/// on a repeated index.
pub fn triple_sign(i: usize, j: usize, k: usize) -> i32 {
    canonical_triple(i, j, k).map_or(0, |(_, s)| s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rat, zero_vec};
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn fixture_bracket_and_skew() {
        let a = fixtures::dim3();
        let e = |i| unit(3, i);
        assert_eq!(a.bracket(&e(0), &e(1), &e(2)).unwrap(), e(0));
        assert_eq!(a.bracket(&e(1), &e(0), &e(2)).unwrap(), vec![rat(-1), rat(0), rat(0)]);
        let x = vec![rat(1), rat(2), rat(3)];
        assert_eq!(a.bracket(&x, &x, &e(2)).unwrap(), zero_vec(3));
        assert!(a.bracket(&x, &x, &[rat(1)]).is_err());
    }

    #[test]
    fn fundamental_identity_examples() {
        assert!(check_fundamental_identity(&fixtures::dim3()).passed());
        assert!(check_fundamental_identity(&ThreeLieAlgebra::abelian(5)).passed());
        assert!(check_fundamental_identity(&fixtures::simple4()).passed());
        let broken = fixtures::broken();
        let r = check_fundamental_identity(&broken);
        assert!(!r.passed());
        assert!(!r.violations.is_empty());
        assert!(broken.verify().is_err());
    }

    #[test]
    fn derivation_examples() {
        let a = fixtures::dim3();
        assert!(check_derivation(&a, &Matrix::zeros(3, 3)).unwrap().passed());
        assert!(check_derivation(&a, &a.ad_basis(0, 1)).unwrap().passed());
        assert!(!check_derivation(&a, &Matrix::identity(3)).unwrap().passed());
        assert!(check_derivation(&a, &Matrix::identity(2)).is_err());
    }

    #[test]
    fn homomorphism_examples() {
        let a = fixtures::dim3();
        assert!(check_homomorphism(&a, &a, &Matrix::identity(3)).unwrap().passed());
        assert!(check_homomorphism(&a, &a, &Matrix::zeros(3, 3)).unwrap().passed());
        assert!(!check_homomorphism(&a, &a, &Matrix::identity(3).scale(&rat(2))).unwrap().passed());
    }

    #[test]
    fn ad_closure_on_fixtures() {
        for a in [fixtures::dim3(), fixtures::simple4()] {
            let d = a.dim();
            for i in 0..d {
                for j in i + 1..d {
                    assert!(check_derivation(&a, &a.ad_basis(i, j)).unwrap().passed());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn bracket_skew_under_permutations(seed in any::<u64>()) {
            let mut rng = fixtures::rng(seed);
            let a = fixtures::simple4();
            let x = fixtures::random_vector(&mut rng, 4);
            let y = fixtures::random_vector(&mut rng, 4);
            let z = fixtures::random_vector(&mut rng, 4);
            let b = a.bracket(&x, &y, &z).unwrap();
            let neg: Vector = b.iter().map(|v| -v).collect();
            prop_assert_eq!(a.bracket(&y, &x, &z).unwrap(), neg.clone());
            prop_assert_eq!(a.bracket(&x, &z, &y).unwrap(), neg);
            prop_assert_eq!(a.bracket(&z, &x, &y).unwrap(), b);
        }
    }
}
