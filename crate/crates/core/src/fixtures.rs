//! Small named algebras and seeded random generators used by tests, the CLI
//! and the Python bindings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alternating::AlternatingForm;
use crate::exactlin::{frac, rank, rat, unit, Matrix, Rational, Vector};
use crate::repcoh::{twisted_semidirect, Representation, TwistedContext, TwoCochain};
use crate::threelie::ThreeLieAlgebra;

pub type FixtureRng = ChaCha8Rng;

pub fn rng(seed: u64) -> FixtureRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The 3-dimensional algebra `[e1, e2, e3] = e1`.
pub fn dim3() -> ThreeLieAlgebra {
    ThreeLieAlgebra::from_brackets(3, [((0, 1, 2), unit(3, 0))])
        .and_then(ThreeLieAlgebra::verify)
        .expect("the 3-dimensional fixture satisfies the fundamental identity")
}

/// The simple 4-dimensional algebra `[e_i, e_j, e_k] = ε_{ijkl} e_l`.
pub fn simple4() -> ThreeLieAlgebra {
    let e = |i: usize, s: i64| {
        let mut v = unit(4, i);
        v[i] = rat(s);
        v
    };
    ThreeLieAlgebra::from_brackets(
        4,
        [
            ((0, 1, 2), e(3, 1)),
            ((0, 1, 3), e(2, -1)),
            ((0, 2, 3), e(1, 1)),
            ((1, 2, 3), e(0, -1)),
        ],
    )
    .and_then(ThreeLieAlgebra::verify)
    .expect("the simple 4-dimensional algebra satisfies the fundamental identity")
}

/// A 4-dimensional skew bracket violating the fundamental identity:
/// `[e1, e2, e3] = e1`, `[e1, e2, e4] = e3`. Every skew bracket on a
/// 3-dimensional space satisfies the identity, so a broken fixture needs a
/// fourth basis vector.
pub fn broken() -> ThreeLieAlgebra {
    ThreeLieAlgebra::from_brackets(4, [((0, 1, 2), unit(4, 0)), ((0, 1, 3), unit(4, 2))])
        .expect("well-formed structure constants")
}

/// The 3-dimensional fixture acting on a line by `ρ(e2, e3) = 1`, twisted by
/// `Φ(e1, e2, e3) = 1`.
pub fn line_context() -> TwistedContext {
    let a = dim3();
    let rep = Representation::from_pairs(a, 1, [((1, 2), Matrix::from_i64(&[&[1]]))])
        .and_then(Representation::verify)
        .expect("ρ(e2, e3) = 1 is a representation");
    let mut form = AlternatingForm::zero(3, 1);
    form.set(0, 1, 2, vec![rat(1)]).expect("in range");
    TwistedContext::new(rep, TwoCochain::new(form))
        .and_then(TwistedContext::verify)
        .expect("Φ = det is a 2-cocycle for this line")
}

/// The 4-dimensional twisted semidirect product of [`line_context`]:
/// `[e1, e2, e3] = e1 + e4`, `[e2, e3, e4] = e4`.
pub fn semidirect4() -> ThreeLieAlgebra {
    twisted_semidirect(&line_context()).expect("verified inputs")
}

/// Numerator in `[-5, 5]`, denominator in `[1, 3]`.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    frac(rng.random_range(-5..=5), rng.random_range(1..=3))
}

/// Like [`random_rational`] but never zero.
pub fn random_nonzero_rational(rng: &mut impl Rng) -> Rational {
    loop {
        let r = random_rational(rng);
        if r != rat(0) {
            return r;
        }
    }
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> Vector {
    (0..n).map(|_| random_rational(rng)).collect()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| random_rational(rng))
}

pub fn random_invertible(rng: &mut impl Rng, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, n, n);
        if rank(&m) == n {
            return m;
        }
    }
}

pub fn random_nonzero_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, rows, cols);
        if !m.is_zero() {
            return m;
        }
    }
}
