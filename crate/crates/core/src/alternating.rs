//! Canonical-slot storage for skew trilinear maps.
//!
//! A fully skew map on a `d`-dimensional space is stored once per strictly
//! increasing triple `i<j<k`; any other index pattern is resolved by
//! permutation sign on access, and repeated indices read as zero. Skew
//! symmetry is therefore structural rather than something to check.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactlin::{axpy, nonzeros, zero_vec, Rational, Vector};

pub fn pair_count(d: usize) -> usize {
    d * d.saturating_sub(1) / 2
}

pub fn triple_count(d: usize) -> usize {
    if d < 3 {
        0
    } else {
        d * (d - 1) * (d - 2) / 6
    }
}

/// Position of the pair `i<j` in lexicographic order.
pub fn pair_index(d: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < d);
    i * (2 * d - i - 1) / 2 + (j - i - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_from_index(d: usize, mut p: usize) -> (usize, usize) {
    for i in 0..d {
        let row = d - i - 1;
        if p < row {
            return (i, i + 1 + p);
        }
        p -= row;
    }
    panic!("pair index out of range")
}

/// Position of the triple `i<j<k` in lexicographic order.
pub fn triple_index(d: usize, i: usize, j: usize, k: usize) -> usize {
    debug_assert!(i < j && j < k && k < d);
    triple_count(d) - triple_count(d - i) + pair_index(d - i - 1, j - i - 1, k - i - 1)
}

/// Sorts a pair; `None` when the indices coincide, otherwise the sorted pair
/// and the sign of the sorting permutation.
pub fn canonical_pair(i: usize, j: usize) -> Option<(usize, usize, i32)> {
    match i.cmp(&j) {
        std::cmp::Ordering::Less => Some((i, j, 1)),
        std::cmp::Ordering::Greater => Some((j, i, -1)),
        std::cmp::Ordering::Equal => None,
    }
}

/// Sorts a triple; `None` when two indices coincide.
pub fn canonical_triple(i: usize, j: usize, k: usize) -> Option<([usize; 3], i32)> {
    if i == j || j == k || i == k {
        return None;
    }
    let mut t = [i, j, k];
    let mut sign = 1;
    for a in 0..3 {
        for b in 0..2 - a {
            if t[b] > t[b + 1] {
                t.swap(b, b + 1);
                sign = -sign;
            }
        }
    }
    Some((t, sign))
}

/// A fully skew trilinear map from a `dim`-dimensional space into a
/// `target_dim`-dimensional one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingForm {
    dim: usize,
    target_dim: usize,
    values: Vec<Vector>,
}

impl AlternatingForm {
    pub fn zero(dim: usize, target_dim: usize) -> Self {
        AlternatingForm {
            dim,
            target_dim,
            values: vec![zero_vec(target_dim); triple_count(dim)],
        }
    }

    /// Builds the form from its values on every canonical triple, produced by
    /// `f(i, j, k)` with `i<j<k`.
    pub fn from_fn(dim: usize, target_dim: usize, mut f: impl FnMut(usize, usize, usize) -> Vector) -> Self {
        let mut values = Vec::with_capacity(triple_count(dim));
        for i in 0..dim {
            for j in i + 1..dim {
                for k in j + 1..dim {
                    let v = f(i, j, k);
                    assert_eq!(v.len(), target_dim, "value has the wrong length");
                    values.push(v);
                }
            }
        }
        AlternatingForm {
            dim,
            target_dim,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(Zero::is_zero))
    }

    /// Sets the value on `(i, j, k)` in any order; the stored canonical value
    /// absorbs the permutation sign. Errors on repeated or out-of-range
    /// indices and on a wrong value length.
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Vector) -> Result<()> {
        if i >= self.dim || j >= self.dim || k >= self.dim {
            return Err(Error::dims(format!("index out of range for dimension {}", self.dim)));
        }
        if value.len() != self.target_dim {
            return Err(Error::dims(format!(
                "value of length {} for target dimension {}",
                value.len(),
                self.target_dim
            )));
        }
        let Some(([a, b, c], sign)) = canonical_triple(i, j, k) else {
            return Err(Error::dims("repeated index in a skew triple"));
        };
        let slot = &mut self.values[triple_index(self.dim, a, b, c)];
        *slot = if sign > 0 {
            value
        } else {
            value.into_iter().map(|x| -x).collect()
        };
        Ok(())
    }

    /// Value on canonical slot `i<j<k`.
    pub fn canonical(&self, i: usize, j: usize, k: usize) -> &Vector {
        &self.values[triple_index(self.dim, i, j, k)]
    }

    /// Value on basis vectors `(e_i, e_j, e_k)` in any order.
    pub fn basis(&self, i: usize, j: usize, k: usize) -> Vector {
        match canonical_triple(i, j, k) {
            None => zero_vec(self.target_dim),
            Some(([a, b, c], s)) => {
                let v = self.canonical(a, b, c);
                if s > 0 {
                    v.clone()
                } else {
                    v.iter().map(|x| -x).collect()
                }
            }
        }
    }

    /// Accumulates `coeff * F(e_i, e_j, e_k)` into `acc`.
    fn accumulate_basis(&self, acc: &mut [Rational], coeff: &Rational, i: usize, j: usize, k: usize) {
        if let Some(([a, b, c], s)) = canonical_triple(i, j, k) {
            let v = self.canonical(a, b, c);
            if s > 0 {
                axpy(acc, coeff, v);
            } else {
                axpy(acc, &-coeff, v);
            }
        }
    }

    /// Trilinear evaluation on arbitrary vectors, touching only their
    /// nonzero coordinates.
    pub fn eval(&self, x: &[Rational], y: &[Rational], z: &[Rational]) -> Vector {
        debug_assert!(x.len() == self.dim && y.len() == self.dim && z.len() == self.dim);
        let mut acc = zero_vec(self.target_dim);
        let (nx, ny, nz) = (nonzeros(x), nonzeros(y), nonzeros(z));
        for (i, a) in &nx {
            for (j, b) in &ny {
                if i == j {
                    continue;
                }
                let ab = *a * *b;
                for (k, c) in &nz {
                    if k == i || k == j {
                        continue;
                    }
                    self.accumulate_basis(&mut acc, &(&ab * *c), *i, *j, *k);
                }
            }
        }
        acc
    }

    /// Nonzero canonical entries as `((i, j, k), value)`.
    pub fn nonzero_entries(&self) -> Vec<((usize, usize, usize), &Vector)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in j + 1..self.dim {
                    let v = self.canonical(i, j, k);
                    if v.iter().any(|x| !x.is_zero()) {
                        out.push(((i, j, k), v));
                    }
                }
            }
        }
        out
    }

    pub fn map_values(&self, target_dim: usize, f: impl Fn(&Vector) -> Vector) -> Self {
        AlternatingForm {
            dim: self.dim,
            target_dim,
            values: self.values.iter().map(f).collect(),
        }
    }
}

/// A trilinear map skew in its first two arguments only. Values are stored for
/// every pair `i<j` and every third index `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSkewForm {
    dim: usize,
    target_dim: usize,
    values: Vec<Vector>,
}

impl PairSkewForm {
    pub fn zero(dim: usize, target_dim: usize) -> Self {
        PairSkewForm {
            dim,
            target_dim,
            values: vec![zero_vec(target_dim); pair_count(dim) * dim],
        }
    }

    /// Builds the form from `f(i, j, k)` for `i<j` and any `k`.
    pub fn from_fn(dim: usize, target_dim: usize, mut f: impl FnMut(usize, usize, usize) -> Vector) -> Self {
        let mut values = Vec::with_capacity(pair_count(dim) * dim);
        for i in 0..dim {
            for j in i + 1..dim {
                for k in 0..dim {
                    let v = f(i, j, k);
                    assert_eq!(v.len(), target_dim, "value has the wrong length");
                    values.push(v);
                }
            }
        }
        PairSkewForm {
            dim,
            target_dim,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(Zero::is_zero))
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Vector) -> Result<()> {
        if i >= self.dim || j >= self.dim || k >= self.dim {
            return Err(Error::dims(format!("index out of range for dimension {}", self.dim)));
        }
        if value.len() != self.target_dim {
            return Err(Error::dims("value has the wrong length"));
        }
        let Some((a, b, s)) = canonical_pair(i, j) else {
            return Err(Error::dims("repeated index in the skew pair"));
        };
        let slot = &mut self.values[pair_index(self.dim, a, b) * self.dim + k];
        *slot = if s > 0 {
            value
        } else {
            value.into_iter().map(|x| -x).collect()
        };
        Ok(())
    }

    pub fn canonical(&self, i: usize, j: usize, k: usize) -> &Vector {
        &self.values[pair_index(self.dim, i, j) * self.dim + k]
    }

    pub fn basis(&self, i: usize, j: usize, k: usize) -> Vector {
        match canonical_pair(i, j) {
            None => zero_vec(self.target_dim),
            Some((a, b, s)) => {
                let v = self.canonical(a, b, k);
                if s > 0 {
                    v.clone()
                } else {
                    v.iter().map(|x| -x).collect()
                }
            }
        }
    }

    pub fn eval(&self, x: &[Rational], y: &[Rational], z: &[Rational]) -> Vector {
        let mut acc = zero_vec(self.target_dim);
        let (nx, ny, nz) = (nonzeros(x), nonzeros(y), nonzeros(z));
        for (i, a) in &nx {
            for (j, b) in &ny {
                let Some((p, q, s)) = canonical_pair(*i, *j) else {
                    continue;
                };
                let ab = if s > 0 { *a * *b } else { -(*a * *b) };
                for (k, c) in &nz {
                    axpy(&mut acc, &(&ab * *c), self.canonical(p, q, *k));
                }
            }
        }
        acc
    }

    /// Nonzero entries as `((i, j, k), value)` with `i<j`.
    pub fn nonzero_entries(&self) -> Vec<((usize, usize, usize), &Vector)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in 0..self.dim {
                    let v = self.canonical(i, j, k);
                    if v.iter().any(|x| !x.is_zero()) {
                        out.push(((i, j, k), v));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rat, unit};
    use proptest::prelude::*;

    #[test]
    fn indices_enumerate_lexicographically() {
        for d in 0..8 {
            let mut p = 0;
            for i in 0..d {
                for j in i + 1..d {
                    assert_eq!(pair_index(d, i, j), p);
                    assert_eq!(pair_from_index(d, p), (i, j));
                    p += 1;
                }
            }
            assert_eq!(p, pair_count(d));
            let mut t = 0;
            for i in 0..d {
                for j in i + 1..d {
                    for k in j + 1..d {
                        assert_eq!(triple_index(d, i, j, k), t);
                        t += 1;
                    }
                }
            }
            assert_eq!(t, triple_count(d));
        }
    }

    #[test]
    fn canonical_signs() {
        assert_eq!(canonical_triple(0, 1, 2), Some(([0, 1, 2], 1)));
        assert_eq!(canonical_triple(1, 0, 2), Some(([0, 1, 2], -1)));
        assert_eq!(canonical_triple(2, 0, 1), Some(([0, 1, 2], 1)));
        assert_eq!(canonical_triple(2, 1, 0), Some(([0, 1, 2], -1)));
        assert_eq!(canonical_triple(1, 1, 0), None);
        assert_eq!(canonical_pair(3, 1), Some((1, 3, -1)));
    }

    #[test]
    fn set_absorbs_sign() {
        let mut f = AlternatingForm::zero(3, 1);
        f.set(2, 1, 0, vec![rat(5)]).unwrap();
        assert_eq!(f.basis(0, 1, 2), vec![rat(-5)]);
        assert_eq!(f.basis(1, 2, 0), vec![rat(-5)]);
        assert_eq!(f.basis(0, 0, 2), vec![rat(0)]);
        assert!(f.set(0, 0, 1, vec![rat(1)]).is_err());
        let e = |i| unit(3, i);
        assert_eq!(f.eval(&e(1), &e(0), &e(2)), vec![rat(5)]);
    }

    fn form_and_vectors() -> impl Strategy<Value = (AlternatingForm, [Vector; 3])> {
        let val = (-3i64..=3).prop_map(rat);
        let vals = proptest::collection::vec(val.clone(), triple_count(4) * 2);
        let vecs = proptest::collection::vec(val, 12);
        (vals, vecs).prop_map(|(vals, vecs)| {
            let mut it = vals.into_iter();
            let f = AlternatingForm::from_fn(4, 2, |_, _, _| vec![it.next().unwrap(), it.next().unwrap()]);
            let x = vecs[0..4].to_vec();
            let y = vecs[4..8].to_vec();
            let z = vecs[8..12].to_vec();
            (f, [x, y, z])
        })
    }

    proptest! {
        #[test]
        fn eval_is_fully_skew((f, [x, y, z]) in form_and_vectors()) {
            let base = f.eval(&x, &y, &z);
            let neg: Vector = base.iter().map(|v| -v).collect();
            prop_assert_eq!(f.eval(&y, &x, &z), neg.clone());
            prop_assert_eq!(f.eval(&x, &z, &y), neg.clone());
            prop_assert_eq!(f.eval(&z, &y, &x), neg);
            prop_assert_eq!(f.eval(&y, &z, &x), base.clone());
            prop_assert_eq!(f.eval(&z, &x, &y), base);
            prop_assert!(f.eval(&x, &x, &z).iter().all(Zero::is_zero));
        }
    }
}
