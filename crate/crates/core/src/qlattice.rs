//! Quadratic forms on Zⁿ and affine quadratic functions `Q[x - c] - ρ²`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{
    common_denominator, dot, int, int_vector, ldlt_decompose, require_positive_definite, sub,
    IntMatrix, Ldlt, Rational, RationalVector, SymmetricRationalMatrix,
};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn to_rational(&self) -> RationalVector {
        int_vector(&self.0)
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    gram: SymmetricRationalMatrix,
}

impl QuadraticForm {
    pub fn new(gram: SymmetricRationalMatrix) -> Self {
        QuadraticForm { gram }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Ok(QuadraticForm::new(SymmetricRationalMatrix::from_int_rows(rows)?))
    }

    pub fn from_int_matrix(g: &IntMatrix) -> Result<Self> {
        Self::from_int_rows(&g.to_rows())
    }

    pub fn identity(n: usize) -> Self {
        QuadraticForm::new(SymmetricRationalMatrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.gram.order()
    }

    pub fn gram(&self) -> &SymmetricRationalMatrix {
        &self.gram
    }

    pub fn ldlt(&self) -> Result<Ldlt> {
        ldlt_decompose(&self.gram)
    }

    pub fn require_positive_definite(&self) -> Result<Ldlt> {
        require_positive_definite(&self.gram)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.require_positive_definite().is_ok()
    }

    /// Gram matrix scaled by the least common denominator of its entries.
    ///
    /// Scaling changes no automorphism and no ratio of norms, so the search
    /// code can run on machine integers.
    pub fn integer_gram(&self) -> Option<IntMatrix> {
        if let Some(g) = self.gram.to_i64() {
            return Some(g);
        }
        let n = self.dim();
        let m = self.gram.as_matrix();
        let all: Vec<Rational> = (0..n).flat_map(|i| m.row(i).to_vec()).collect();
        let den = Rational::from_integer(common_denominator(&all));
        let mut out = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (&m[(i, j)] * &den).to_integer().to_i64()?;
            }
        }
        Some(out)
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found });
        }
        Ok(())
    }

    /// `xᵀ G x`
    pub fn eval_form(&self, x: &[Rational]) -> Result<Rational> {
        self.eval_bilinear(x, x)
    }

    /// `xᵀ G y`
    pub fn eval_bilinear(&self, x: &[Rational], y: &[Rational]) -> Result<Rational> {
        self.check_dim(x.len())?;
        self.check_dim(y.len())?;
        let gy = self.gram.as_matrix().mul_vec(y)?;
        Ok(dot(x, &gy))
    }

    pub fn eval_int(&self, x: &[i64]) -> Result<Rational> {
        self.eval_form(&int_vector(x))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineQuadraticFunction {
    pub form: QuadraticForm,
    pub center: RationalVector,
    pub radius2: Rational,
}

impl AffineQuadraticFunction {
    pub fn new(form: QuadraticForm, center: RationalVector, radius2: Rational) -> Result<Self> {
        form.check_dim(center.len())?;
        if radius2.is_negative() {
            return Err(Error::NegativeRadius(radius2));
        }
        Ok(AffineQuadraticFunction { form, center, radius2 })
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    /// `Q[x - c] - ρ²`
    pub fn eval_affine(&self, x: &[Rational]) -> Result<Rational> {
        self.form.check_dim(x.len())?;
        Ok(self.form.eval_form(&sub(x, &self.center))? - &self.radius2)
    }

    pub fn eval_point(&self, p: &LatticePoint) -> Result<Rational> {
        self.eval_affine(&p.to_rational())
    }

    /// Center as a common denominator and integer numerators.
    pub fn center_parts(&self) -> (BigInt, Vec<BigInt>) {
        let den = common_denominator(&self.center);
        let d = Rational::from_integer(den.clone());
        let nums = self.center.iter().map(|x| (x * &d).to_integer()).collect();
        (den, nums)
    }

    /// Whether every point lies on the sphere `E = 0`.
    pub fn all_on_sphere(&self, points: &[LatticePoint]) -> Result<bool> {
        for p in points {
            if !self.eval_point(p)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Quadratic form of the root lattice Aₙ in coordinates where the Gram matrix
/// has 2 on the diagonal and 1 elsewhere, i.e. `Σ xᵢ² + (Σ xᵢ)²`.
pub fn an_form(n: usize) -> QuadraticForm {
    let rows: Vec<Vec<i64>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { 2 } else { 1 }).collect()).collect();
    QuadraticForm::from_int_rows(&rows).expect("square")
}

/// Convenience for tests and reference constructions.
pub fn zero_vector(n: usize) -> RationalVector {
    vec![int(0); n]
}
