//! Exact rational scalars, vectors and matrices.
//!
//! Everything here is pure and allocation-heavy on purpose: the matrices in
//! this crate are at most 80 x 45, so clarity wins over speed. Hot loops in
//! the search modules work on `i64`/`i128` copies instead.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type RationalVector = Vec<Rational>;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn int_vector(v: &[i64]) -> RationalVector {
    v.iter().map(|&x| int(x)).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[Rational], b: &[Rational]) -> RationalVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Greatest common divisor of the entries (non-negative; zero for the zero vector).
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Least common multiple of the denominators.
pub fn common_denominator(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

/// Scale a rational vector to a primitive integer vector pointing the same way.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let den = common_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &den).to_integer()).collect();
    let g = content(&ints);
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Largest integer k with k^2 <= q, using integer arithmetic only.
pub fn isqrt_floor(q: &Rational) -> Result<BigInt> {
    if q.is_negative() {
        return Err(Error::NegativeSqrt(q.clone()));
    }
    // floor(sqrt(x)) == floor(sqrt(floor(x))) for x >= 0
    Ok(q.floor().to_integer().sqrt())
}

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<RationalVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend(r);
        }
        Ok(RationalMatrix { rows: n, cols, data })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| int_vector(r)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<RationalVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<RationalVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// Gauss-Jordan inverse; `None` when singular or not square.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a[(r, c)].is_zero())?;
            if p != c {
                a.swap_rows(p, c);
                inv.swap_rows(p, c);
            }
            let piv = a[(c, c)].recip();
            for j in 0..n {
                a[(c, j)] *= &piv;
                inv[(c, j)] *= &piv;
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for j in 0..n {
                    let (x, y) = (&a[(c, j)] * &f, &inv[(c, j)] * &f);
                    a[(r, j)] -= x;
                    inv[(r, j)] -= y;
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect();
        f.debug_list().entries(rows).finish()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymmetricRationalMatrix(RationalMatrix);

impl SymmetricRationalMatrix {
    pub fn new(m: RationalMatrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::DimensionMismatch { expected: m.rows, found: m.cols });
        }
        for i in 0..m.rows {
            for j in 0..i {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(SymmetricRationalMatrix(m))
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(RationalMatrix::from_int_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        SymmetricRationalMatrix(RationalMatrix::identity(n))
    }

    pub fn order(&self) -> usize {
        self.0.rows
    }

    pub fn as_matrix(&self) -> &RationalMatrix {
        &self.0
    }

    /// Integer entries, if every entry is integral and fits in `i64`.
    pub fn to_i64(&self) -> Option<IntMatrix> {
        let n = self.order();
        let mut out = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let x = &self.0[(i, j)];
                if !x.is_integer() {
                    return None;
                }
                out[(i, j)] = x.to_integer().to_i64()?;
            }
        }
        Some(out)
    }
}

impl Index<(usize, usize)> for SymmetricRationalMatrix {
    type Output = Rational;
    fn index(&self, ij: (usize, usize)) -> &Rational {
        &self.0[ij]
    }
}

/// Row-major integer matrix used for lattice maps and integer Gram matrices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    pub fn from_columns(cols: &[Vec<i64>]) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "IntMatrix::mul shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| int(x)).collect(),
        }
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<BigInt>> =
            (0..n).map(|i| self.row(i).iter().map(|&x| BigInt::from(x)).collect()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Adjugate and determinant, so that `self * adj = det * I`.
    pub fn adjugate(&self) -> Option<(IntMatrix, i64)> {
        let det = self.det();
        let inv = self.to_rational().inverse()?;
        let d = Rational::from_integer(det.clone());
        let n = self.rows;
        let mut adj = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                adj[(i, j)] = (&inv[(i, j)] * &d).to_integer().to_i64()?;
            }
        }
        Some((adj, det.to_i64()?))
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    /// `selfᵀ · g · self`
    pub fn congruence(&self, g: &IntMatrix) -> IntMatrix {
        self.transpose().mul(g).mul(self)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

/// `M = L · diag(d) · Lᵀ` with `L` unit lower triangular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ldlt {
    pub l: RationalMatrix,
    pub d: RationalVector,
}

impl Ldlt {
    pub fn reconstruct(&self) -> RationalMatrix {
        let n = self.d.len();
        let mut ld = self.l.clone();
        for i in 0..n {
            for j in 0..n {
                ld[(i, j)] *= &self.d[j];
            }
        }
        ld.mul(&self.l.transpose()).expect("square factors")
    }

    /// Errors with the 1-based index of the first leading minor whose pivot is <= 0.
    pub fn require_positive_definite(&self) -> Result<()> {
        match self.d.iter().position(|p| !p.is_positive()) {
            Some(i) => Err(Error::NotPositiveDefinite { minor: i + 1, pivot: self.d[i].clone() }),
            None => Ok(()),
        }
    }

    pub fn is_positive_definite(&self) -> bool {
        self.d.iter().all(Signed::is_positive)
    }
}

/// Symmetric LDLᵀ without pivoting.
///
/// Indefinite but nonsingular inputs still factor; a zero pivot with a
/// nonzero column below it cannot be factored without pivoting and is
/// returned as [`Error::SingularPivot`].
pub fn ldlt_decompose(m: &SymmetricRationalMatrix) -> Result<Ldlt> {
    let n = m.order();
    let mut l = RationalMatrix::identity(n);
    let mut d: RationalVector = Vec::with_capacity(n);
    for j in 0..n {
        let mut dj = m[(j, j)].clone();
        for k in 0..j {
            dj -= &l[(j, k)] * &l[(j, k)] * &d[k];
        }
        for i in j + 1..n {
            let mut s = m[(i, j)].clone();
            for k in 0..j {
                s -= &l[(i, k)] * &l[(j, k)] * &d[k];
            }
            if dj.is_zero() {
                if !s.is_zero() {
                    return Err(Error::SingularPivot { index: j + 1 });
                }
            } else {
                l[(i, j)] = s / &dj;
            }
        }
        d.push(dj);
    }
    Ok(Ldlt { l, d })
}

pub fn require_positive_definite(m: &SymmetricRationalMatrix) -> Result<Ldlt> {
    let f = match ldlt_decompose(m) {
        Ok(f) => f,
        Err(Error::SingularPivot { index }) => {
            return Err(Error::NotPositiveDefinite { minor: index, pivot: Rational::zero() })
        }
        Err(e) => return Err(e),
    };
    f.require_positive_definite()?;
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReduction {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub nullspace: Vec<RationalVector>,
}

pub fn row_reduce(m: &RationalMatrix) -> RowReduction {
    let rows = (0..m.rows())
        .map(|i| {
            let r = m.row(i);
            let den = common_denominator(r);
            r.iter().map(|x| (x * &den).to_integer()).collect()
        })
        .collect();
    row_reduce_integer(rows, m.cols())
}

/// Fraction-free reduction of integer rows to a primitive reduced echelon form.
///
/// Pivots are taken as the first nonzero entry in column order and every row
/// is divided by its content after each update. The reduced form is a
/// scaling of the unique RREF, so the output does not depend on row order.
pub fn row_reduce_integer(mut rows: Vec<Vec<BigInt>>, cols: usize) -> RowReduction {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        make_primitive(&mut rows[r]);
        if rows[r][c].is_negative() {
            rows[r].iter_mut().for_each(|x| *x = -&*x);
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, tail) = tail.split_first_mut().expect("pivot row");
        for other in head.iter_mut().chain(tail.iter_mut()) {
            if other[c].is_zero() {
                continue;
            }
            let g = pivot_row[c].gcd(&other[c]);
            let a = &pivot_row[c] / &g;
            let b = &other[c] / &g;
            for (x, y) in other.iter_mut().zip(pivot_row.iter()) {
                *x = &*x * &a - &b * y;
            }
            make_primitive(other);
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let rank = pivots.len();
    let mut nullspace = Vec::new();
    let mut is_pivot = vec![false; cols];
    pivots.iter().for_each(|&p| is_pivot[p] = true);
    for f in (0..cols).filter(|&f| !is_pivot[f]) {
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -Rational::new(rows[i][f].clone(), rows[i][p].clone());
        }
        nullspace.push(v);
    }
    RowReduction { rank, pivots, nullspace }
}

fn make_primitive(row: &mut [BigInt]) {
    let g = content(row);
    if g > BigInt::one() {
        row.iter_mut().for_each(|x| *x = &*x / &g);
    }
}

/// Rank of the affine span of a point set.
pub fn affine_rank(points: &[Vec<i64>]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let rows: Vec<Vec<BigInt>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| BigInt::from(a - b)).collect())
        .collect();
    row_reduce_integer(rows, first.len()).rank
}

/// Indices of an affinely independent subset of maximal size, chosen greedily
/// in the given order.
pub fn affine_basis(points: &[Vec<i64>]) -> Vec<usize> {
    let Some(first) = points.first() else {
        return Vec::new();
    };
    let n = first.len();
    let mut chosen = vec![0];
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (i, p) in points.iter().enumerate().skip(1) {
        if rows.len() == n {
            break;
        }
        let diff: Vec<BigInt> = p.iter().zip(first).map(|(a, b)| BigInt::from(a - b)).collect();
        rows.push(diff);
        if row_reduce_integer(rows.clone(), n).rank == rows.len() {
            chosen.push(i);
        } else {
            rows.pop();
        }
    }
    chosen
}
