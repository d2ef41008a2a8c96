//! Perfection test: is the degree-≤2 function vanishing on a point set unique
//! up to scale? Also recovers `(Q, c, ρ²)` from the point set alone.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{
    affine_rank, content, primitive_integer, row_reduce_integer, Rational, RationalMatrix,
    SymmetricRationalMatrix,
};
use crate::qlattice::{AffineQuadraticFunction, LatticePoint, QuadraticForm};

/// Monomial values of each point: `xᵢxⱼ (i <= j)`, then `xᵢ`, then `1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationMatrix {
    pub dim: usize,
    pub rows: Vec<Vec<i64>>,
}

impl EvaluationMatrix {
    pub fn columns(&self) -> usize {
        monomial_count(self.dim)
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix::from_int_rows(&self.rows).expect("uniform rows")
    }
}

pub fn monomial_count(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

pub fn evaluation_matrix(points: &[LatticePoint]) -> Result<EvaluationMatrix> {
    let first = points.first().ok_or(Error::EmptyPointSet)?;
    let n = first.dim();
    let mut rows = Vec::with_capacity(points.len());
    for p in points {
        if p.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
        }
        let x = p.coords();
        let mut row = Vec::with_capacity(monomial_count(n));
        for i in 0..n {
            for j in i..n {
                row.push(x[i] * x[j]);
            }
        }
        row.extend_from_slice(x);
        row.push(1);
        rows.push(row);
    }
    Ok(EvaluationMatrix { dim: n, rows })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectionVerdict {
    pub nullspace_dimension: usize,
    pub generator: Option<AffineQuadraticFunction>,
    pub is_perfect: bool,
}

pub fn perfection_check(points: &[LatticePoint]) -> Result<PerfectionVerdict> {
    let m = evaluation_matrix(points)?;
    let n = m.dim;
    let coords: Vec<Vec<i64>> = points.iter().map(|p| p.0.clone()).collect();
    let rank = affine_rank(&coords);
    if rank < n {
        return Err(Error::NotFullDimensional { rank, dim: n });
    }
    let rows = m.rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let red = row_reduce_integer(rows, m.columns());
    let dim = red.nullspace.len();
    let generator = if dim == 1 { quadric_from_coefficients(n, &red.nullspace[0]) } else { None };
    Ok(PerfectionVerdict { nullspace_dimension: dim, is_perfect: generator.is_some(), generator })
}

/// The unique circumscribed quadric, normalized to a primitive integer Gram.
pub fn infer_quadratic(points: &[LatticePoint]) -> Result<AffineQuadraticFunction> {
    let v = perfection_check(points)?;
    if v.nullspace_dimension != 1 {
        return Err(Error::NotUniquelyDetermined(v.nullspace_dimension));
    }
    v.generator.ok_or_else(|| {
        Error::InvalidParameter("the unique quadric has an indefinite quadratic part".into())
    })
}

/// Turn monomial coefficients into `(G, c, ρ²)` with `G` primitive integral
/// and positive definite; `None` if the quadratic part is not definite.
fn quadric_from_coefficients(n: usize, coeffs: &[Rational]) -> Option<AffineQuadraticFunction> {
    let mut a = primitive_integer(coeffs);
    // Gram entries are a_ii and a_ij / 2; double when an off-diagonal is odd.
    let mut k = 0;
    let mut odd = false;
    for i in 0..n {
        for j in i..n {
            if i != j && a[k].is_odd_int() {
                odd = true;
            }
            k += 1;
        }
    }
    let two = BigInt::from(2);
    if odd {
        a.iter_mut().for_each(|x| *x = &*x * &two);
    }
    let mut gram = vec![vec![BigInt::zero(); n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            let g = if i == j { a[k].clone() } else { &a[k] / &two };
            gram[i][j] = g.clone();
            gram[j][i] = g;
            k += 1;
        }
    }
    let flat: Vec<BigInt> = gram.iter().flatten().cloned().collect();
    let g = content(&flat);
    if g.is_zero() {
        return None;
    }
    let mut scale = Rational::new(BigInt::one(), g);
    if gram[0][0].is_negative() {
        scale = -scale;
    }
    let gram_q: Vec<Vec<Rational>> = gram
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone()) * &scale).collect())
        .collect();
    let lin: Vec<Rational> =
        a[k..k + n].iter().map(|x| Rational::from_integer(x.clone()) * &scale).collect();
    let c0 = Rational::from_integer(a[k + n].clone()) * &scale;

    let gm = RationalMatrix::from_rows(gram_q).ok()?;
    let form = QuadraticForm::new(SymmetricRationalMatrix::new(gm.clone()).ok()?);
    if !form.is_positive_definite() {
        return None;
    }
    // b = -2 G c  =>  c = -G⁻¹ b / 2
    let inv = gm.inverse()?;
    let half = Rational::new(BigInt::from(-1), two);
    let center: Vec<Rational> = inv.mul_vec(&lin).ok()?.into_iter().map(|x| x * &half).collect();
    let radius2 = form.eval_form(&center).ok()? - c0;
    AffineQuadraticFunction::new(form, center, radius2).ok()
}

/// Divide Gram and ρ² by the content of the Gram so records stored with a
/// non-primitive Gram compare equal to inferred functions.
pub fn normalize_primitive(e: &AffineQuadraticFunction) -> AffineQuadraticFunction {
    let n = e.dim();
    let m = e.form.gram().as_matrix();
    let all: Vec<Rational> = (0..n).flat_map(|i| m.row(i).to_vec()).collect();
    let ints = primitive_integer(&all);
    let scale = if all.iter().all(Zero::is_zero) {
        Rational::one()
    } else {
        // all[i] = ints[i] * s for a common positive s (sign fixed below)
        let i = all.iter().position(|x| !x.is_zero()).expect("nonzero entry");
        let s = &all[i] / Rational::from_integer(ints[i].clone());
        if all[0].is_negative() { -s } else { s }
    };
    let rows: Vec<Vec<Rational>> = (0..n).map(|i| m.row(i).iter().map(|x| x / &scale).collect()).collect();
    let gram = SymmetricRationalMatrix::new(RationalMatrix::from_rows(rows).expect("square"))
        .expect("symmetric");
    AffineQuadraticFunction {
        form: QuadraticForm::new(gram),
        center: e.center.clone(),
        radius2: &e.radius2 / &scale,
    }
}

trait OddInt {
    fn is_odd_int(&self) -> bool;
}

impl OddInt for BigInt {
    fn is_odd_int(&self) -> bool {
        num_integer::Integer::is_odd(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};

    fn pts(v: &[&[i64]]) -> Vec<LatticePoint> {
        v.iter().map(|p| LatticePoint(p.to_vec())).collect()
    }

    #[test]
    fn segment_matrix() {
        let m = evaluation_matrix(&pts(&[&[0], &[1]])).unwrap();
        assert_eq!(m.rows, vec![vec![0, 0, 1], vec![1, 1, 1]]);
    }

    #[test]
    fn segment_is_perfect() {
        let v = perfection_check(&pts(&[&[0], &[1]])).unwrap();
        assert_eq!(v.nullspace_dimension, 1);
        assert!(v.is_perfect);
        let e = infer_quadratic(&pts(&[&[0], &[1]])).unwrap();
        assert_eq!(e.form, QuadraticForm::identity(1));
        assert_eq!(e.center, vec![rat(1, 2)]);
        assert_eq!(e.radius2, rat(1, 4));
    }

    #[test]
    fn square_is_not_perfect() {
        let v = perfection_check(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap();
        assert!(v.nullspace_dimension >= 2);
        assert!(!v.is_perfect);
        assert_eq!(
            infer_quadratic(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])),
            Err(Error::NotUniquelyDetermined(v.nullspace_dimension))
        );
    }

    #[test]
    fn flat_set_rejected() {
        let r = perfection_check(&pts(&[&[0, 0], &[1, 0], &[2, 0]]));
        assert_eq!(r, Err(Error::NotFullDimensional { rank: 1, dim: 2 }));
    }

    #[test]
    fn odd_cross_term_doubles() {
        // the conic through the hexagon is x² + xy + y² = 1, whose xy coefficient is odd
        let hex = pts(&[&[1, 0], &[0, 1], &[-1, 1], &[-1, 0], &[0, -1], &[1, -1]]);
        let e = infer_quadratic(&hex).unwrap();
        assert_eq!(
            e.form,
            QuadraticForm::from_int_rows(&[vec![2, 1], vec![1, 2]]).unwrap()
        );
        assert_eq!(e.center, vec![int(0), int(0)]);
        assert_eq!(e.radius2, int(2));
    }

    #[test]
    fn normalization_divides_content() {
        let f = QuadraticForm::from_int_rows(&[vec![4, 2], vec![2, 4]]).unwrap();
        let e = AffineQuadraticFunction::new(f, vec![int(0), int(0)], int(4)).unwrap();
        let p = normalize_primitive(&e);
        assert_eq!(p.form, QuadraticForm::from_int_rows(&[vec![2, 1], vec![1, 2]]).unwrap());
        assert_eq!(p.radius2, int(2));
    }
}
