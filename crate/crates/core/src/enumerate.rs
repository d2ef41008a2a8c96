//! Exact lattice-point enumeration in ellipsoids (Fincke-Pohst over the LDLᵀ
//! factors), shortest vectors, arithmetic minima, and the Delaunay verdict.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{isqrt_floor, Ldlt, Rational};
use crate::qlattice::{AffineQuadraticFunction, LatticePoint, QuadraticForm};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EnumerationResult {
    /// Points with `E(x) < 0`, paired with `E(x)`.
    pub interior: Vec<(LatticePoint, Rational)>,
    /// Points with `E(x) = 0`.
    pub boundary: Vec<LatticePoint>,
}

impl EnumerationResult {
    pub fn interior_count(&self) -> usize {
        self.interior.len()
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimumResult {
    pub minimum: Rational,
    pub minimizers: Vec<LatticePoint>,
}

/// Visit every integer `x` with `Q[x - c] <= bound`, passing `Q[x - c]`.
///
/// Coordinates are fixed from the last LDL layer to the first; within a layer
/// candidates are visited in increasing order.
pub fn visit_ellipsoid<F>(
    ldlt: &Ldlt,
    center: &[Rational],
    bound: &Rational,
    mut visit: F,
) -> Result<ControlFlow<()>>
where
    F: FnMut(&[i64], &Rational) -> ControlFlow<()>,
{
    ldlt.require_positive_definite()?;
    let n = center.len();
    if ldlt.d.len() != n {
        return Err(Error::DimensionMismatch { expected: ldlt.d.len(), found: n });
    }
    if bound.is_negative() {
        return Ok(ControlFlow::Continue(()));
    }
    let mut state = Walk {
        ldlt,
        center,
        bound,
        x: vec![0; n],
        y: vec![Rational::zero(); n],
    };
    if n == 0 {
        return Ok(visit(&[], &Rational::zero()));
    }
    state.layer(n - 1, Rational::zero(), &mut visit)
}

struct Walk<'a> {
    ldlt: &'a Ldlt,
    center: &'a [Rational],
    bound: &'a Rational,
    x: Vec<i64>,
    y: Vec<Rational>,
}

impl Walk<'_> {
    fn layer<F>(&mut self, i: usize, partial: Rational, visit: &mut F) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[i64], &Rational) -> ControlFlow<()>,
    {
        let n = self.x.len();
        let mut shift = Rational::zero();
        for j in i + 1..n {
            shift += &self.ldlt.l[(j, i)] * &self.y[j];
        }
        let m = &self.center[i] - &shift;
        let t = (self.bound - &partial) / &self.ldlt.d[i];
        let r = isqrt_floor(&t)?;
        let lo = to_i64(m.floor().to_integer() - &r - 1)?;
        let hi = to_i64(m.ceil().to_integer() + &r + 1)?;
        for xi in lo..=hi {
            let z = Rational::from_integer(BigInt::from(xi)) - &m;
            let z2 = &z * &z;
            if z2 > t {
                continue;
            }
            let next = &partial + &self.ldlt.d[i] * z2;
            self.x[i] = xi;
            self.y[i] = Rational::from_integer(BigInt::from(xi)) - &self.center[i];
            let flow = if i == 0 {
                visit(&self.x, &next)
            } else {
                self.layer(i - 1, next, visit)?
            };
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

fn to_i64(v: BigInt) -> Result<i64> {
    v.to_i64()
        .ok_or_else(|| Error::InvalidParameter(format!("coordinate bound {v} out of range")))
}

/// Visit every integer point of the box `lo ..= hi` in lexicographic order.
pub fn scan_box<F>(lo: &[i64], hi: &[i64], mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[i64]) -> ControlFlow<()>,
{
    let n = lo.len();
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return ControlFlow::Continue(());
    }
    let mut x = lo.to_vec();
    loop {
        visit(&x)?;
        let mut k = n;
        loop {
            if k == 0 {
                return ControlFlow::Continue(());
            }
            k -= 1;
            if x[k] < hi[k] {
                x[k] += 1;
                x[k + 1..].copy_from_slice(&lo[k + 1..]);
                break;
            }
        }
    }
}

/// All integer points with `E(x) <= 0`, sorted lexicographically.
pub fn enumerate_in_ellipsoid(e: &AffineQuadraticFunction) -> Result<EnumerationResult> {
    let ldlt = e.form.require_positive_definite()?;
    let mut out = EnumerationResult::default();
    let _ = visit_ellipsoid(&ldlt, &e.center, &e.radius2, |x, q| {
        let v = q - &e.radius2;
        if v.is_zero() {
            out.boundary.push(LatticePoint(x.to_vec()));
        } else {
            out.interior.push((LatticePoint(x.to_vec()), v));
        }
        ControlFlow::Continue(())
    })?;
    out.boundary.sort();
    out.interior.sort();
    Ok(out)
}

/// All nonzero vectors with `Q[x] <= bound`, sorted. Stops with
/// [`Error::BudgetExceeded`] once more than `limit` vectors are found.
pub fn vectors_up_to(f: &QuadraticForm, bound: &Rational, limit: usize) -> Result<Vec<(LatticePoint, Rational)>> {
    let ldlt = f.require_positive_definite()?;
    let center = vec![Rational::zero(); f.dim()];
    let mut out = Vec::new();
    let flow = visit_ellipsoid(&ldlt, &center, bound, |x, q| {
        if q.is_zero() {
            return ControlFlow::Continue(());
        }
        out.push((LatticePoint(x.to_vec()), q.clone()));
        if out.len() > limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    if flow.is_break() {
        return Err(Error::BudgetExceeded { nodes: out.len() as u64 });
    }
    out.sort();
    Ok(out)
}

/// Shrinking-radius minimum of `Q[x - c]` over integer `x`, starting at `start`.
fn minimum_from(
    ldlt: &Ldlt,
    center: &[Rational],
    start: Rational,
    skip_origin: bool,
) -> Result<MinimumResult> {
    let mut bound = start;
    loop {
        let mut smaller = None;
        let mut found = Vec::new();
        let _ = visit_ellipsoid(ldlt, center, &bound, |x, q| {
            if skip_origin && x.iter().all(|&v| v == 0) {
                return ControlFlow::Continue(());
            }
            if *q < bound {
                smaller = Some(q.clone());
                return ControlFlow::Break(());
            }
            found.push(LatticePoint(x.to_vec()));
            ControlFlow::Continue(())
        })?;
        match smaller {
            Some(q) => bound = q,
            None => {
                found.sort();
                return Ok(MinimumResult { minimum: bound, minimizers: found });
            }
        }
    }
}

/// Minimum of `Q[x]` over nonzero integer `x` with all minimizers (both signs).
pub fn shortest_vectors(f: &QuadraticForm) -> Result<MinimumResult> {
    let ldlt = f.require_positive_definite()?;
    let n = f.dim();
    if n == 0 {
        return Err(Error::InvalidParameter("zero-dimensional form has no nonzero vectors".into()));
    }
    let diag_min = (0..n).map(|i| f.gram()[(i, i)].clone()).min().expect("n > 0");
    minimum_from(&ldlt, &vec![Rational::zero(); n], diag_min, true)
}

/// Exact minimum `b` of `Q[x - c]` over Zⁿ and all points attaining it.
pub fn arithmetic_minimum(f: &QuadraticForm, c: &[Rational]) -> Result<MinimumResult> {
    let ldlt = f.require_positive_definite()?;
    if c.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: c.len() });
    }
    let rounded: Vec<Rational> = c.iter().map(round_half_up).collect();
    let diff: Vec<Rational> = rounded.iter().zip(c).map(|(a, b)| a - b).collect();
    let start = f.eval_form(&diff)?;
    minimum_from(&ldlt, c, start, false)
}

fn round_half_up(x: &Rational) -> Rational {
    (x + Rational::new(BigInt::one(), BigInt::from(2))).floor()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelaunayVerdict {
    pub pass: bool,
    /// Lattice points strictly inside the ellipsoid.
    pub interior: Vec<(LatticePoint, Rational)>,
    /// Boundary points that were not claimed.
    pub unexpected: Vec<LatticePoint>,
    /// Claimed vertices not on the boundary.
    pub missing: Vec<LatticePoint>,
    pub boundary_count: usize,
}

/// PASS iff the ellipsoid has no interior lattice point and its boundary
/// points are exactly `claimed`.
pub fn verify_delaunay(e: &AffineQuadraticFunction, claimed: &[LatticePoint]) -> Result<DelaunayVerdict> {
    let r = enumerate_in_ellipsoid(e)?;
    let claimed: BTreeSet<&LatticePoint> = claimed.iter().collect();
    let found: BTreeSet<&LatticePoint> = r.boundary.iter().collect();
    let unexpected: Vec<LatticePoint> = found.difference(&claimed).map(|p| (*p).clone()).collect();
    let missing: Vec<LatticePoint> = claimed.difference(&found).map(|p| (*p).clone()).collect();
    Ok(DelaunayVerdict {
        pass: r.interior.is_empty() && unexpected.is_empty() && missing.is_empty(),
        boundary_count: r.boundary.len(),
        interior: r.interior,
        unexpected,
        missing,
    })
}
