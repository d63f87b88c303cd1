//! Exact rational scalars, dense vectors and matrices, and fraction-free
//! elimination.
//!
//! Every computation in the crate runs over [`Rational`]; nothing here ever
//! touches floating point. Ranks of dense matrices are computed by Bareiss
//! elimination after clearing denominators row by row, so intermediate values
//! stay integral and are bounded by minors of the input. Coboundary matrices
//! are assembled as [`SparseMatrix`] and reduced with an integer-preserving
//! sparse echelon routine instead.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type Vector = Vec<Rational>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d`, reduced. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`. Returns `None` for malformed input or a zero
/// denominator.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn zero_vec(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = Rational::one();
    v
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `acc += s * v`
pub fn axpy(acc: &mut [Rational], s: &Rational, v: &[Rational]) {
    debug_assert_eq!(acc.len(), v.len());
    if s.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a += s * b;
        }
    }
}

pub fn add_vec(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(v: &[Rational], s: &Rational) -> Vector {
    v.iter().map(|x| x * s).collect()
}

/// Indices and values of the nonzero coordinates.
pub fn nonzeros(v: &[Rational]) -> Vec<(usize, &Rational)> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::dims(format!(
                "{} entries given for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vector>) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::dims("ragged rows"));
        }
        Ok(Matrix {
            rows: n,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::dims("column length does not match row count"));
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone()))
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
            .expect("ragged literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.entries)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Matrix product. Panics on mismatched inner dimensions.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Matrix-vector product. Panics on mismatched dimensions.
    pub fn apply(&self, v: &[Rational]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        let nz = nonzeros(v);
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                nz.iter().fold(Rational::zero(), |acc, (j, x)| {
                    if row[*j].is_zero() {
                        acc
                    } else {
                        acc + &row[*j] * *x
                    }
                })
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: add_vec(&self.entries, &other.entries),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: sub_vec(&self.entries, &other.entries),
        }
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: scale_vec(&self.entries, s),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&rat(-1))
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn kernel_dim(&self) -> usize {
        kernel_dim(self)
    }

    pub fn invert(&self) -> Result<Matrix> {
        invert(self)
    }

    pub fn determinant(&self) -> Result<Rational> {
        determinant(self)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Clears the denominators of one row, returning primitive integer entries.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
pub fn rank(m: &Matrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows).map(|i| integer_row(m.row(i))).collect();
    bareiss_rank(&mut a, m.cols)
}

/// In-place Bareiss forward elimination. Columns without a pivot among the
/// remaining rows are skipped; Sylvester's identity keeps every division
/// exact regardless of which columns end up as pivots.
fn bareiss_rank(a: &mut [Vec<BigInt>], cols: usize) -> usize {
    let n = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| a[i][c].bits())
        else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let factor = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = pivot.clone();
        r += 1;
    }
    r
}

pub fn kernel_dim(m: &Matrix) -> usize {
    m.cols - rank(m)
}

/// Determinant by Bareiss elimination. Errors on non-square input.
pub fn determinant(m: &Matrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::dims("determinant of a non-square matrix"));
    }
    let n = m.rows;
    let mut scale = Rational::one();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let row = m.row(i);
            let lcm = row
                .iter()
                .filter(|x| !x.is_zero())
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale /= Rational::from_integer(lcm.clone());
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != c {
            a.swap(p, c);
            sign = -sign;
        }
        let (top, rest) = a.split_at_mut(c + 1);
        let pivot_row = &top[c];
        for row in rest.iter_mut() {
            let factor = std::mem::take(&mut row[c]);
            for j in c + 1..n {
                row[j] = (&pivot_row[c] * &row[j] - &factor * &pivot_row[j]) / &prev;
            }
        }
        prev = pivot_row[c].clone();
    }
    Ok(Rational::from_integer(sign * prev) * scale)
}

/// Reduced row echelon form over the rationals; returns the pivot columns.
fn rref(a: &mut [Vector], cols: usize) -> Vec<usize> {
    let n = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Exact inverse; [`Error::Singular`] when the rank is below the size.
pub fn invert(m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::dims("inverse of a non-square matrix"));
    }
    let n = m.rows;
    let mut aug: Vec<Vector> = (0..n)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.extend(unit(n, i));
            row
        })
        .collect();
    let pivots = rref(&mut aug, n);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return Err(Error::Singular);
    }
    Ok(Matrix::from_fn(n, n, |i, j| aug[i][n + j].clone()))
}

/// A basis of the right kernel `{v : M v = 0}`.
pub fn kernel_basis(m: &Matrix) -> Vec<Vector> {
    let mut a = m.to_rows();
    let pivots = rref(&mut a, m.cols);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = unit(m.cols, f);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

type IntRow = Vec<(usize, BigInt)>;

/// Row-sparse rational matrix used for coboundary operators.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    cols: usize,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn new(cols: usize) -> Self {
        SparseMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    /// Appends a row given as `(column, value)` pairs; duplicates are summed
    /// and zeros dropped.
    pub fn push_row(&mut self, entries: impl IntoIterator<Item = (usize, Rational)>) {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (c, v) in entries {
            assert!(c < self.cols, "column {c} out of range");
            *acc.entry(c).or_insert_with(Rational::zero) += v;
        }
        self.rows
            .push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows.len(), self.cols);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                m[(i, *j)] = v.clone();
            }
        }
        m
    }

    /// Exact rank by integer-preserving sparse elimination: each row is made
    /// primitive over the integers, then reduced against the pivot row sharing
    /// its leading column with a cross-multiplication and a content division.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<IntRow> = self
            .rows
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| {
                let dense: Vec<Rational> = r.iter().map(|(_, v)| v.clone()).collect();
                r.iter().map(|(c, _)| *c).zip(integer_row(&dense)).collect()
            })
            .collect();
        rows.sort_by_key(|r| (r.len(), r[0].0));
        let mut pivots: BTreeMap<usize, IntRow> = BTreeMap::new();
        for mut row in rows {
            make_primitive(&mut row);
            while let Some(lead) = row.first().map(|(c, _)| *c) {
                match pivots.get(&lead) {
                    Some(p) => {
                        row = eliminate(p, &row);
                        make_primitive(&mut row);
                    }
                    None => {
                        pivots.insert(lead, row);
                        break;
                    }
                }
            }
        }
        pivots.len()
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }
}

fn make_primitive(row: &mut IntRow) {
    let g = row
        .iter()
        .fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    if g.is_zero() {
        row.clear();
        return;
    }
    let g = if row[0].1.is_negative() { -g } else { g };
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// `a0 * row - r0 * pivot` scaled by `1/gcd(a0, r0)`; both share the leading
/// column, which cancels.
fn eliminate(pivot: &IntRow, row: &IntRow) -> IntRow {
    let a0 = &pivot[0].1;
    let r0 = &row[0].1;
    let g = a0.gcd(r0);
    let ma = a0 / &g;
    let mr = r0 / &g;
    let mut out = Vec::with_capacity(pivot.len() + row.len());
    let (mut i, mut j) = (1, 1);
    while i < pivot.len() || j < row.len() {
        let ci = pivot.get(i).map_or(usize::MAX, |e| e.0);
        let cj = row.get(j).map_or(usize::MAX, |e| e.0);
        let (c, v) = if ci == cj {
            let v = &ma * &row[j].1 - &mr * &pivot[i].1;
            i += 1;
            j += 1;
            (ci, v)
        } else if cj < ci {
            let v = &ma * &row[j].1;
            j += 1;
            (cj, v)
        } else {
            let v = -(&mr * &pivot[i].1);
            i += 1;
            (ci, v)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    out
}
