//! Two infinite-dimensional graded 3-Lie algebras given by determinant
//! brackets on generators, with their diagonal Reynolds operators.
//!
//! * Laurent: `[t^l, t^m, t^n] = det[[(−1)^l, (−1)^m, (−1)^n], [1, 1, 1], [l, m, n]] t^{l+m+n−1}`,
//!   `R(t^l) = t^l / l`.
//! * ω∞: `[ω^a_m, ω^b_n, ω^c_p] = det[[1, 1, 1], [m, n, p], [a, b, c]] ω^{a+b+c+1}_{m+n+p}`,
//!   `R(ω^a_m) = ω^a_m / (m + a + 1)`.
//!
//! The brackets of generators are again multiples of generators, so every
//! identity reduces to scalar equations at one target index. `R` is
//! undefined on `t^0` and on `ω^a_m` with `m + a + 1 = 0`; such indices are
//! refused, never skipped.
//!
//! Finite windows of generators are not closed under the bracket. A
//! [`PartialAlgebra`] keeps the in-window brackets and records the escaping
//! ones, and its checks only run on tuples whose every intermediate bracket
//! stays inside.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use crate::alternating::{canonical_triple, pair_count, pair_from_index, AlternatingForm};
use crate::error::{Error, Result};
use crate::exactlin::{add_vec, rat, scale_vec, unit, Matrix, Rational};
use crate::nsnr::reynolds_eval;
use crate::repcoh::{Representation, TwistedContext, TwoCochain};
use crate::report::{increasing, product, Comparison, Report};
use crate::threelie::ThreeLieAlgebra;
use crate::trbo::TwistedRbo;

fn det3(m: [[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn parity_sign(l: i64) -> i64 {
    if l.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `(coefficient, exponent)` of `[t^l, t^m, t^n]`.
pub fn laurent_bracket(l: i64, m: i64, n: i64) -> (Rational, i64) {
    let c = det3([[parity_sign(l), parity_sign(m), parity_sign(n)], [1, 1, 1], [l, m, n]]);
    (rat(c), l + m + n - 1)
}

/// `(coefficient, (mode, weight))` of `[ω^a_m, ω^b_n, ω^c_p]`.
pub fn omega_bracket(x: OmegaIndex, y: OmegaIndex, z: OmegaIndex) -> (Rational, OmegaIndex) {
    let c = det3([[1, 1, 1], [x.m, y.m, z.m], [x.a, y.a, z.a]]);
    (
        rat(c),
        OmegaIndex {
            m: x.m + y.m + z.m,
            a: x.a + y.a + z.a + 1,
        },
    )
}

pub type LaurentIndex = i64;

/// The generator `ω^a_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaIndex {
    pub m: i64,
    pub a: i64,
}

impl OmegaIndex {
    pub fn new(m: i64, a: i64) -> Self {
        OmegaIndex { m, a }
    }
}

/// A graded family: brackets of generators and the diagonal Reynolds
/// operator.
pub trait GradedFamily: Sync {
    type Index: Copy + Eq + Hash + Ord + Debug + Send + Sync;

    fn name(&self) -> &'static str;

    fn bracket(&self, x: Self::Index, y: Self::Index, z: Self::Index) -> (Rational, Self::Index);

    /// The eigenvalue of `R` on a generator, or `None` where it is undefined.
    fn reynolds_scale(&self, x: Self::Index) -> Option<Rational>;

    /// `[x, y, z]_R` from its closed form; needs `R` defined on `x`, `y`, `z`
    /// and on the target.
    fn reynolds_bracket(&self, x: Self::Index, y: Self::Index, z: Self::Index) -> Result<(Rational, Self::Index)>;

    fn label(&self, x: Self::Index) -> String;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Laurent;

#[derive(Clone, Copy, Debug, Default)]
pub struct Omega;

fn undefined<I>(family: &impl GradedFamily<Index = I>, at: &[I]) -> Error
where
    I: Copy,
{
    let parts: Vec<String> = at.iter().map(|&x| family.label(x)).collect();
    Error::UndefinedDenominator(format!("{} ({})", family.name(), parts.join(", ")))
}

/// Checks that `R` is defined on the three arguments and on the target.
fn require_defined<F: GradedFamily>(f: &F, x: F::Index, y: F::Index, z: F::Index) -> Result<[Rational; 4]> {
    let (_, target) = f.bracket(x, y, z);
    match (f.reynolds_scale(x), f.reynolds_scale(y), f.reynolds_scale(z), f.reynolds_scale(target)) {
        (Some(a), Some(b), Some(c), Some(d)) => Ok([a, b, c, d]),
        _ => Err(undefined(f, &[x, y, z])),
    }
}

impl GradedFamily for Laurent {
    type Index = LaurentIndex;

    fn name(&self) -> &'static str {
        "laurent"
    }

    fn bracket(&self, x: i64, y: i64, z: i64) -> (Rational, i64) {
        laurent_bracket(x, y, z)
    }

    fn reynolds_scale(&self, x: i64) -> Option<Rational> {
        (x != 0).then(|| Rational::new(1.into(), x.into()))
    }

    /// `(l+m+n−1)/(lmn) · det · t^{l+m+n−1}`.
    fn reynolds_bracket(&self, l: i64, m: i64, n: i64) -> Result<(Rational, i64)> {
        require_defined(self, l, m, n)?;
        let (c, e) = laurent_bracket(l, m, n);
        Ok((c * Rational::new((l + m + n - 1).into(), (l * m * n).into()), e))
    }

    fn label(&self, x: i64) -> String {
        format!("t^{x}")
    }
}

impl GradedFamily for Omega {
    type Index = OmegaIndex;

    fn name(&self) -> &'static str {
        "omega"
    }

    fn bracket(&self, x: OmegaIndex, y: OmegaIndex, z: OmegaIndex) -> (Rational, OmegaIndex) {
        omega_bracket(x, y, z)
    }

    fn reynolds_scale(&self, x: OmegaIndex) -> Option<Rational> {
        let s = x.m + x.a + 1;
        (s != 0).then(|| Rational::new(1.into(), s.into()))
    }

    /// `(m+n+p+a+b+c+2)/((m+a+1)(n+b+1)(p+c+1)) · det · ω^{a+b+c+1}_{m+n+p}`.
    fn reynolds_bracket(&self, x: OmegaIndex, y: OmegaIndex, z: OmegaIndex) -> Result<(Rational, OmegaIndex)> {
        require_defined(self, x, y, z)?;
        let (c, t) = omega_bracket(x, y, z);
        let num = x.m + y.m + z.m + x.a + y.a + z.a + 2;
        let den = (x.m + x.a + 1) * (y.m + y.a + 1) * (z.m + z.a + 1);
        Ok((c * Rational::new(num.into(), den.into()), t))
    }

    fn label(&self, x: OmegaIndex) -> String {
        format!("ω^{}_{}", x.a, x.m)
    }
}

/// Checks the Reynolds identity at each sampled triple by expanding both
/// sides into the four brackets of scaled generators, and compares the
/// closed-form `[·,·,·]_R` with the same expansion. Violation tuples hold the
/// 1-based position of the sample in `samples`; the identity label names the
/// generators.
pub fn check_reynolds_sampled<F: GradedFamily>(family: &F, samples: &[[F::Index; 3]]) -> Result<Report> {
    let mut scales = Vec::with_capacity(samples.len());
    for &[x, y, z] in samples {
        scales.push(require_defined(family, x, y, z)?);
    }
    let positions: Vec<Vec<usize>> = (0..samples.len()).map(|i| vec![i]).collect();
    let subject = format!("{} Reynolds identity", family.name());
    Ok(Report::check_tuples(subject, positions, |t| {
        let [x, y, z] = samples[t[0]];
        let [rx, ry, rz, r_target] = &scales[t[0]];
        // every term lands on the same generator
        let br = |p: Rational, a, b, c| family.bracket(a, b, c).0 * p;
        let lhs = br(rx * ry * rz, x, y, z);
        let r_bracket = br(rx * ry, x, y, z) + br(ry * rz, x, y, z) + br(rx * rz, x, y, z) - br(rx * ry * rz, x, y, z);
        let rhs = r_target * &r_bracket;
        let closed = family.reynolds_bracket(x, y, z).expect("denominators checked above").0;
        let at = format!("({}, {}, {})", family.label(x), family.label(y), family.label(z));
        vec![
            Comparison::new(format!("Reynolds identity at {at}"), vec![lhs], vec![rhs]),
            Comparison::new(format!("closed-form R-bracket at {at}"), vec![closed], vec![r_bracket]),
        ]
    }))
}

/// All ordered triples of distinct generators from `gens` on which `R` and
/// the target scale are defined.
pub fn default_samples<F: GradedFamily>(family: &F, gens: &[F::Index]) -> Vec<[F::Index; 3]> {
    let mut out = Vec::new();
    for &x in gens {
        for &y in gens {
            for &z in gens {
                if x != y && y != z && x != z && require_defined(family, x, y, z).is_ok() {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out
}

/// `n` samples drawn without replacement, reproducibly from `seed`, kept
/// in their original order.
pub fn subsample<T: Clone>(items: &[T], n: usize, seed: u64) -> Vec<T> {
    if n >= items.len() {
        return items.to_vec();
    }
    let mut picked = rand::seq::index::sample(&mut crate::fixtures::rng(seed), items.len(), n).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| items[i].clone()).collect()
}

/// A nonempty finite set of generators, in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window<I> {
    indices: Vec<I>,
}

impl<I: Copy + Ord> Window<I> {
    pub fn new(mut indices: Vec<I>) -> Result<Self> {
        indices.sort();
        indices.dedup();
        if indices.is_empty() {
            return Err(Error::Precondition("a window needs at least one generator".into()));
        }
        Ok(Window { indices })
    }

    pub fn indices(&self) -> &[I] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// `t^lo, …, t^hi`.
pub fn laurent_window(lo: i64, hi: i64) -> Result<Window<i64>> {
    Window::new((lo..=hi).collect())
}

/// `ω^a_m` for `m` in `m_lo..=m_hi` and `a` in `a_lo..=a_hi`.
pub fn omega_window(m: (i64, i64), a: (i64, i64)) -> Result<Window<OmegaIndex>> {
    let gens = (m.0..=m.1).flat_map(|m| (a.0..=a.1).map(move |a| OmegaIndex { m, a }));
    Window::new(gens.collect())
}

/// Bracket of three window generators: the coefficient and, when nonzero,
/// where the result lands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Landing {
    Zero,
    Inside(usize),
    Escaping,
}

/// The brackets of a window's generators. Escaping brackets are dropped
/// from [`PartialAlgebra::algebra`] and listed in [`PartialAlgebra::escaping`].
#[derive(Clone, Debug)]
pub struct PartialAlgebra<I> {
    window: Window<I>,
    algebra: ThreeLieAlgebra,
    landings: HashMap<(usize, usize, usize), Landing>,
    escaping: Vec<(usize, usize, usize)>,
}

pub fn materialize_window<F: GradedFamily>(family: &F, window: &Window<F::Index>) -> PartialAlgebra<F::Index> {
    let gens = window.indices();
    let d = gens.len();
    let position: HashMap<F::Index, usize> = gens.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let mut landings = HashMap::new();
    let mut escaping = Vec::new();
    let form = AlternatingForm::from_fn(d, d, |i, j, k| {
        let (c, target) = family.bracket(gens[i], gens[j], gens[k]);
        let landing = if c == rat(0) {
            Landing::Zero
        } else {
            match position.get(&target) {
                Some(&p) => Landing::Inside(p),
                None => Landing::Escaping,
            }
        };
        let value = match landing {
            Landing::Inside(p) => scale_vec(&unit(d, p), &c),
            _ => vec![rat(0); d],
        };
        if landing == Landing::Escaping {
            escaping.push((i, j, k));
        }
        landings.insert((i, j, k), landing);
        value
    });
    PartialAlgebra {
        window: window.clone(),
        algebra: ThreeLieAlgebra::new(form).expect("square structure constants"),
        landings,
        escaping,
    }
}

impl<I: Copy + Ord + Debug + Send + Sync> PartialAlgebra<I> {
    pub fn window(&self) -> &Window<I> {
        &self.window
    }

    pub fn dim(&self) -> usize {
        self.window.len()
    }

    /// The in-window brackets as an unverified algebra.
    pub fn algebra(&self) -> &ThreeLieAlgebra {
        &self.algebra
    }

    /// Canonical 0-based triples whose nonzero bracket leaves the window.
    pub fn escaping(&self) -> &[(usize, usize, usize)] {
        &self.escaping
    }

    /// Where `[e_i, e_j, e_k]` lands, for any order of indices.
    pub fn landing(&self, i: usize, j: usize, k: usize) -> Landing {
        match canonical_triple(i, j, k) {
            None => Landing::Zero,
            Some(([a, b, c], _)) => self.landings[&(a, b, c)].clone(),
        }
    }

    fn closed(&self, i: usize, j: usize, k: usize) -> bool {
        self.landing(i, j, k) != Landing::Escaping
    }

    /// `[e_a, e_b, [e_c, e_d, e_e]]`-style nesting with the inner bracket in
    /// slot `slot` of the outer one stays inside the window.
    fn nested_closed(&self, outer: [usize; 2], inner: [usize; 3], slot: usize) -> bool {
        match self.landing(inner[0], inner[1], inner[2]) {
            Landing::Escaping => false,
            Landing::Zero => true,
            Landing::Inside(p) => {
                let mut args = vec![outer[0], outer[1]];
                args.insert(slot, p);
                self.closed(args[0], args[1], args[2])
            }
        }
    }

    /// The fundamental identity on reduced tuples drawn from `subset`
    /// (0-based positions), restricted to tuples whose intermediate
    /// brackets all stay in the window. A note records the restriction.
    pub fn check_fi_restricted(&self, subset: &[usize]) -> Report {
        let d = self.dim();
        let pick = |k| -> Vec<Vec<usize>> {
            increasing(subset.len(), k)
                .into_iter()
                .map(|t| t.into_iter().map(|i| subset[i]).collect())
                .collect()
        };
        let all = product(&pick(2), &pick(3));
        let total = all.len();
        let kept: Vec<Vec<usize>> = all
            .into_iter()
            .filter(|t| {
                let [x1, x2, x3, x4, x5] = [t[0], t[1], t[2], t[3], t[4]];
                self.nested_closed([x1, x2], [x3, x4, x5], 2)
                    && self.nested_closed([x4, x5], [x1, x2, x3], 0)
                    && self.nested_closed([x3, x5], [x1, x2, x4], 1)
                    && self.nested_closed([x3, x4], [x1, x2, x5], 2)
            })
            .collect();
        let kept_count = kept.len();
        let a = &self.algebra;
        let e = |i| unit(d, i);
        let mut report = Report::check_tuples("windowed fundamental identity", kept, |t| {
            let (x1, x2, x3, x4, x5) = (e(t[0]), e(t[1]), e(t[2]), e(t[3]), e(t[4]));
            let lhs = a.br(&x1, &x2, &a.br(&x3, &x4, &x5));
            let r1 = a.br(&a.br(&x1, &x2, &x3), &x4, &x5);
            let r2 = a.br(&x3, &a.br(&x1, &x2, &x4), &x5);
            let r3 = a.br(&x3, &x4, &a.br(&x1, &x2, &x5));
            vec![Comparison::new("fundamental identity", lhs, add_vec(&add_vec(&r1, &r2), &r3))]
        });
        report.note(format!("restricted to {kept_count} of {total} reduced tuples that stay in the window"));
        report
    }

    /// The diagonal matrix of `R` on the window.
    pub fn reynolds_matrix<F: GradedFamily<Index = I>>(&self, family: &F) -> Result<Matrix> {
        let gens = self.window.indices();
        let mut m = Matrix::zeros(gens.len(), gens.len());
        for (i, &g) in gens.iter().enumerate() {
            m[(i, i)] = family.reynolds_scale(g).ok_or_else(|| undefined(family, &[g]))?;
        }
        Ok(m)
    }

    fn closed_triples(&self) -> (Vec<Vec<usize>>, usize) {
        let all = increasing(self.dim(), 3);
        let total = all.len();
        (all.into_iter().filter(|t| self.closed(t[0], t[1], t[2])).collect(), total)
    }

    /// The Reynolds identity on in-window triples, through the generic
    /// matrix evaluation.
    pub fn check_reynolds_restricted<F: GradedFamily<Index = I>>(&self, family: &F) -> Result<Report> {
        let r = self.reynolds_matrix(family)?;
        let (a, d) = (&self.algebra, self.dim());
        let (kept, total) = self.closed_triples();
        let kept_count = kept.len();
        let e = |i| unit(d, i);
        let mut report = Report::check_tuples("windowed Reynolds identity", kept, |t| {
            let lhs = a.br(&r.column(t[0]), &r.column(t[1]), &r.column(t[2]));
            let rhs = r.apply(&reynolds_eval(a, &r, &e(t[0]), &e(t[1]), &e(t[2])));
            vec![Comparison::new("Reynolds identity", lhs, rhs)]
        });
        report.note(format!("restricted to {kept_count} of {total} triples that stay in the window"));
        Ok(report)
    }

    /// Compares the closed-form `[·,·,·]_R` with the bracket induced by `R`
    /// as a twisted Rota-Baxter operator for the adjoint action twisted by
    /// minus the bracket. The window is not a 3-Lie algebra, so the
    /// operator is assembled without verification and evaluated only on
    /// in-window triples.
    pub fn compare_reynolds_bracket_with_induced<F: GradedFamily<Index = I>>(&self, family: &F) -> Result<Report> {
        let r = self.reynolds_matrix(family)?;
        let (a, d) = (&self.algebra, self.dim());
        let rho = (0..pair_count(d))
            .map(|p| {
                let (i, j) = pair_from_index(d, p);
                a.ad_basis(i, j)
            })
            .collect();
        let rep = Representation::new(a.clone(), d, rho)?;
        let ctx = TwistedContext::new(rep, TwoCochain::from_bracket(a).neg())?;
        let op = TwistedRbo::new(ctx, r)?;
        let gens = self.window.indices();
        let (kept, total) = self.closed_triples();
        let kept_count = kept.len();
        let e = |i| unit(d, i);
        let mut report = Report::check_tuples("windowed R-bracket", kept, |t| {
            let induced = op.induced_eval(&e(t[0]), &e(t[1]), &e(t[2]));
            // a zero bracket has a zero closed form, even where R is undefined on its target
            let closed = match self.landing(t[0], t[1], t[2]) {
                Landing::Inside(p) => {
                    let (c, _) = family
                        .reynolds_bracket(gens[t[0]], gens[t[1]], gens[t[2]])
                        .expect("R is defined on the whole window");
                    scale_vec(&unit(d, p), &c)
                }
                _ => vec![rat(0); d],
            };
            vec![Comparison::new("closed form vs induced bracket", closed, induced)]
        });
        report.note(format!("restricted to {kept_count} of {total} triples that stay in the window"));
        Ok(report)
    }
}

/// `(1/(lm) + 1/(mn) + 1/(ln) − 1/(lmn)) / (l+m+n−1) − 1/(lmn)`, which
/// vanishes wherever it is defined.
pub fn laurent_factor_defect(l: i64, m: i64, n: i64) -> Option<Rational> {
    let s = l + m + n - 1;
    if l == 0 || m == 0 || n == 0 || s == 0 {
        return None;
    }
    let q = |a: i64| Rational::new(1.into(), a.into());
    Some((q(l * m) + q(m * n) + q(l * n) - q(l * m * n)) * q(s) - q(l * m * n))
}

/// The ω∞ analogue of [`laurent_factor_defect`] with the shifted
/// denominators `m+a+1`, `n+b+1`, `p+c+1` and `m+n+p+a+b+c+2`.
pub fn omega_factor_defect(x: OmegaIndex, y: OmegaIndex, z: OmegaIndex) -> Option<Rational> {
    let (u, v, w) = (x.m + x.a + 1, y.m + y.a + 1, z.m + z.a + 1);
    let s = u + v + w - 1;
    if u == 0 || v == 0 || w == 0 || s == 0 {
        return None;
    }
    let q = |a: i64| Rational::new(1.into(), a.into());
    Some((q(u * v) + q(v * w) + q(u * w) - q(u * v * w)) * q(s) - q(u * v * w))
}
