//! Copies of a reference polytope up to affine lattice equivalence.
//!
//! A copy of `T` in a host vertex set `V ⊂ Zⁿ` is an injective affine map `φ`
//! with `φ(T) ⊆ V` restricting to an isomorphism from the affine lattice
//! generated by `T` onto the one generated by `φ(T)`. The strict variant also
//! asks the latter to be all of `aff φ(T) ∩ Zⁿ`. No metric condition is
//! imposed.

use std::collections::HashMap;

use super::reference::ReferencePolytope;
use crate::budget::{Budget, Meter};
use crate::error::Result;
use crate::qlattice::LatticePoint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithmeticCopy {
    /// Host vertex index for each target vertex.
    pub host_indices: Vec<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct ArithmeticOptions {
    pub budget: Budget,
    /// Host vertices tried for the first basis point, e.g. one per orbit of
    /// a host symmetry group. All vertices when absent.
    pub first_images: Option<Vec<usize>>,
    /// Require the image lattice to be saturated in `Zⁿ`.
    pub saturated: bool,
}

pub fn find_arithmetic_copy(
    target: &ReferencePolytope,
    host_vertices: &[LatticePoint],
    options: &ArithmeticOptions,
) -> Result<Option<ArithmeticCopy>> {
    let t: Vec<Vec<i64>> = target.vertices.iter().map(|v| v.0.clone()).collect();
    let h: Vec<Vec<i64>> = host_vertices.iter().map(|v| v.0.clone()).collect();
    if t.is_empty() || t.len() > h.len() {
        return Ok(None);
    }
    let plan = Plan::new(&t);
    let host_rank = {
        let d: Vec<Vec<i64>> = h.iter().map(|p| sub(p, &h[0])).collect();
        lattice_basis(&d).len()
    };
    if plan.basis.len() - 1 > host_rank {
        return Ok(None);
    }
    let n = h[0].len();
    let mut s = Search {
        plan: &plan,
        host: &h,
        index: h.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect(),
        images: Vec::new(),
        used: vec![false; h.len()],
        meter: options.budget.meter(),
        first: options.first_images.clone().unwrap_or_else(|| (0..h.len()).collect()),
        frames: vec![Primitive::new(n)],
        saturated: options.saturated,
    };
    Ok(s.dfs()?.map(|host_indices| ArithmeticCopy { host_indices }))
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Extended Euclid: `(g, x, y)` with `a·x + b·y = g = gcd(a, b) >= 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        return if a < 0 { (-a, -1, 0) } else { (a, 1, 0) };
    }
    let (g, x, y) = ext_gcd(b, a % b);
    (g, y, x - (a / b) * y)
}

/// Basis of the lattice generated by `rows`, by integer row echelon form.
pub fn lattice_basis(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let Some(n) = rows.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut out = Vec::new();
    let mut top = 0;
    for col in 0..n {
        // fold every remaining row into row `top` at this column
        for r in top + 1..m.len() {
            if m[r][col] == 0 {
                continue;
            }
            let (a, b) = (m[top][col], m[r][col]);
            let (g, x, y) = ext_gcd(a, b);
            let (ra, rb) = (m[top].clone(), m[r].clone());
            for c in 0..n {
                m[top][c] = x * ra[c] + y * rb[c];
                m[r][c] = (a / g) * rb[c] - (b / g) * ra[c];
            }
        }
        if m[top][col] != 0 {
            out.push(m[top].iter().map(|&x| x as i64).collect());
            top += 1;
        }
        if top == m.len() {
            break;
        }
    }
    out
}

/// Coordinates of `v` in the echelon basis produced by [`lattice_basis`].
fn echelon_coords(basis: &[Vec<i64>], v: &[i64]) -> Option<Vec<i64>> {
    let mut rest: Vec<i128> = v.iter().map(|&x| x as i128).collect();
    let mut out = Vec::with_capacity(basis.len());
    for b in basis {
        let p = b.iter().position(|&x| x != 0)?;
        let bp = b[p] as i128;
        if rest[p] % bp != 0 {
            return None;
        }
        let c = rest[p] / bp;
        for (r, &x) in rest.iter_mut().zip(b) {
            *r -= c * x as i128;
        }
        out.push(c as i64);
    }
    rest.iter().all(|&x| x == 0).then_some(out)
}

/// Incremental test that a growing list of vectors stays a basis of a
/// saturated sublattice. Keeps a unimodular `U` with the accepted rows
/// mapped by `·U` onto the first coordinate vectors' span.
#[derive(Clone)]
struct Primitive {
    n: usize,
    k: usize,
    /// Columns of `U`.
    u: Vec<Vec<i128>>,
}

impl Primitive {
    fn new(n: usize) -> Self {
        let u = (0..n).map(|c| (0..n).map(|r| i128::from(r == c)).collect()).collect();
        Primitive { n, k: 0, u }
    }

    /// The extended state, or `None` if `row` depends on the earlier rows
    /// or, when `strict`, breaks saturation.
    fn push(&self, row: &[i64], strict: bool) -> Option<Primitive> {
        let mut w: Vec<i128> =
            self.u.iter().map(|col| col.iter().zip(row).map(|(a, &b)| a * b as i128).sum()).collect();
        let g = w[self.k..].iter().fold(0, |g, &x| gcd(g, x));
        if g == 0 || (strict && g != 1) {
            return None;
        }
        let mut next = self.clone();
        for j in self.k + 1..self.n {
            if w[j] == 0 {
                continue;
            }
            let (a, b) = (w[self.k], w[j]);
            let (g, x, y) = ext_gcd(a, b);
            let (ca, cb) = (next.u[self.k].clone(), next.u[j].clone());
            for r in 0..self.n {
                next.u[self.k][r] = x * ca[r] + y * cb[r];
                next.u[j][r] = (a / g) * cb[r] - (b / g) * ca[r];
            }
            w[self.k] = g;
            w[j] = 0;
        }
        if w[self.k] < 0 {
            next.u[self.k].iter_mut().for_each(|x| *x = -*x);
        }
        next.k += 1;
        Some(next)
    }
}

/// Whether the rows are independent and generate `span ∩ Zⁿ`.
pub fn is_saturated(rows: &[Vec<i64>]) -> bool {
    let Some(n) = rows.first().map(Vec::len) else {
        return true;
    };
    let mut p = Primitive::new(n);
    for r in rows {
        match p.push(r, true) {
            Some(q) => p = q,
            None => return false,
        }
    }
    true
}

/// Target vertices as integer combinations of a unimodular affine basis.
struct Plan {
    /// Basis vertex indices in assignment order.
    basis: Vec<usize>,
    /// `coef[v][i]`: coefficient of `(b_{i+1} - b_0)` in `v - b_0`.
    coef: Vec<Vec<i64>>,
    /// Target vertices whose image is fixed once basis point `k` is placed.
    ready: Vec<Vec<usize>>,
}

impl Plan {
    fn new(t: &[Vec<i64>]) -> Self {
        // coordinates in a basis of the lattice the vertices generate
        let diffs: Vec<Vec<i64>> = t.iter().map(|p| sub(p, &t[0])).collect();
        let lb = lattice_basis(&diffs);
        let x: Vec<Vec<i64>> = diffs.iter().map(|d| echelon_coords(&lb, d).expect("in lattice")).collect();
        let k = lb.len();
        let basis = unimodular_basis(&x, k).expect("generating vertices contain a unimodular affine basis");
        let cols: Vec<Vec<i64>> = basis[1..].iter().map(|&b| sub(&x[b], &x[basis[0]])).collect();
        let coef: Vec<Vec<i64>> = x.iter().map(|p| solve_unimodular(&cols, &sub(p, &x[basis[0]]))).collect();
        let mut ready = vec![Vec::new(); k + 1];
        for (v, row) in coef.iter().enumerate() {
            if basis.contains(&v) {
                continue;
            }
            let last = row.iter().rposition(|c| *c != 0).map_or(0, |p| p + 1);
            ready[last].push(v);
        }
        Plan { basis, coef, ready }
    }
}

/// Affine basis of points in `Zᵏ` with unimodular differences, greedily
/// maximising how many points each prefix determines; backtracks if needed.
fn unimodular_basis(x: &[Vec<i64>], k: usize) -> Option<Vec<usize>> {
    fn covered(x: &[Vec<i64>], chosen: &[usize]) -> usize {
        let rows: Vec<Vec<i64>> = chosen[1..].iter().map(|&c| sub(&x[c], &x[chosen[0]])).collect();
        let lb = lattice_basis(&rows);
        x.iter().filter(|p| echelon_coords(&lb, &sub(p, &x[chosen[0]])).is_some()).count()
    }
    fn rec(x: &[Vec<i64>], k: usize, chosen: &mut Vec<usize>, prim: &Primitive) -> bool {
        if chosen.len() == k + 1 {
            return true;
        }
        let mut cands: Vec<(usize, usize, Primitive)> = Vec::new();
        for i in 0..x.len() {
            if chosen.contains(&i) {
                continue;
            }
            if let Some(p) = prim.push(&sub(&x[i], &x[chosen[0]]), true) {
                chosen.push(i);
                cands.push((covered(x, chosen), i, p));
                chosen.pop();
            }
        }
        cands.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, i, p) in cands {
            chosen.push(i);
            if rec(x, k, chosen, &p) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    for start in 0..x.len() {
        let mut chosen = vec![start];
        if rec(x, k, &mut chosen, &Primitive::new(k)) {
            return Some(chosen);
        }
    }
    None
}

/// Integer solution of `Σ a_i cols[i] = v` for a unimodular column set.
fn solve_unimodular(cols: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    let k = cols.len();
    // echelon basis of the columns with tracked combinations
    let aug: Vec<Vec<i64>> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut r = c.clone();
            r.extend((0..k).map(|j| i64::from(i == j)));
            r
        })
        .collect();
    let lb = lattice_basis(&aug);
    // lb rows: (echelon vector, combination); solve v in the echelon part
    let ech: Vec<Vec<i64>> = lb.iter().map(|r| r[..v.len()].to_vec()).collect();
    let c = echelon_coords(&ech, v).expect("v in lattice");
    (0..k).map(|j| lb.iter().zip(&c).map(|(r, &ci)| ci * r[v.len() + j]).sum()).collect()
}

struct Search<'a> {
    plan: &'a Plan,
    host: &'a [Vec<i64>],
    index: HashMap<Vec<i64>, usize>,
    /// Host index for each placed basis point.
    images: Vec<usize>,
    used: Vec<bool>,
    meter: Meter,
    first: Vec<usize>,
    /// Independence state after each placed basis point.
    frames: Vec<Primitive>,
    saturated: bool,
}

impl Search<'_> {
    fn image_of(&self, v: usize) -> Option<usize> {
        let s0 = &self.host[self.images[0]];
        let mut p = s0.clone();
        for (i, &c) in self.plan.coef[v].iter().enumerate() {
            if c != 0 {
                let si = &self.host[self.images[i + 1]];
                for r in 0..p.len() {
                    p[r] += c * (si[r] - s0[r]);
                }
            }
        }
        self.index.get(&p).copied()
    }

    fn dfs(&mut self) -> Result<Option<Vec<usize>>> {
        let k = self.images.len();
        if k == self.plan.basis.len() {
            return Ok(Some(self.assignment()));
        }
        let cands: Vec<usize> = if k == 0 { self.first.clone() } else { (0..self.host.len()).collect() };
        for c in cands {
            if self.used[c] {
                continue;
            }
            self.meter.tick()?;
            if k > 0 {
                let d = sub(&self.host[c], &self.host[self.images[0]]);
                match self.frames[k - 1].push(&d, self.saturated) {
                    Some(p) => self.frames.push(p),
                    None => continue,
                }
            }
            self.images.push(c);
            self.used[c] = true;
            let mut placed = Vec::new();
            let mut ok = true;
            for &v in &self.plan.ready[k] {
                match self.image_of(v) {
                    Some(h) if !self.used[h] => {
                        self.used[h] = true;
                        placed.push(h);
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                if let Some(found) = self.dfs()? {
                    return Ok(Some(found));
                }
            }
            for h in placed {
                self.used[h] = false;
            }
            self.used[c] = false;
            self.images.pop();
            if k > 0 {
                self.frames.pop();
            }
        }
        Ok(None)
    }

    fn assignment(&self) -> Vec<usize> {
        (0..self.plan.coef.len())
            .map(|v| match self.plan.basis.iter().position(|&b| b == v) {
                Some(slot) => self.images[slot],
                None => self.image_of(v).expect("placed during search"),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::reference::{build_reference, ReferenceKind};

    fn pts(v: &[&[i64]]) -> Vec<LatticePoint> {
        v.iter().map(|p| LatticePoint(p.to_vec())).collect()
    }

    fn find(t: ReferenceKind, host: &[LatticePoint]) -> Option<ArithmeticCopy> {
        let t = build_reference(t).unwrap();
        find_arithmetic_copy(&t, host, &ArithmeticOptions::default()).unwrap()
    }

    fn find_saturated(t: ReferenceKind, host: &[LatticePoint]) -> Option<ArithmeticCopy> {
        let t = build_reference(t).unwrap();
        let opts = ArithmeticOptions { saturated: true, ..Default::default() };
        find_arithmetic_copy(&t, host, &opts).unwrap()
    }

    #[test]
    fn saturation() {
        assert!(is_saturated(&[vec![1, 0, 0], vec![0, 1, 0]]));
        assert!(!is_saturated(&[vec![2, 0], vec![0, 1]]));
        assert!(is_saturated(&[vec![2, 3]]));
        assert!(!is_saturated(&[vec![1, 1], vec![2, 2]]));
        assert!(is_saturated(&[vec![1, 1, 0], vec![0, 1, 1]]));
        assert!(!is_saturated(&[vec![1, 1, 0], vec![1, -1, 0]]));
    }

    #[test]
    fn lattice_bases() {
        let b = lattice_basis(&[vec![2, 0], vec![0, 2], vec![1, 1]]);
        assert_eq!(b.len(), 2);
        assert_eq!(echelon_coords(&b, &[1, -1]).map(|c| c.len()), Some(2));
        assert_eq!(echelon_coords(&b, &[1, 0]), None);
        assert!(lattice_basis(&[vec![0, 0]]).is_empty());
    }

    #[test]
    fn parallelogram_is_a_square() {
        let host = pts(&[&[0, 0], &[1, 0], &[1, 1], &[2, 1]]);
        assert!(find(ReferenceKind::Cube(2), &host).is_some());
        // the same shape on an index-2 sublattice is only a plain copy
        let wide = pts(&[&[0, 0], &[2, 0], &[0, 1], &[2, 1]]);
        assert!(find(ReferenceKind::Cube(2), &wide).is_some());
        assert!(find_saturated(ReferenceKind::Cube(2), &host).is_some());
        assert!(find_saturated(ReferenceKind::Cube(2), &wide).is_none());
    }

    #[test]
    fn inside_the_cube() {
        let cube = build_reference(ReferenceKind::Cube(3)).unwrap().vertices;
        let c = find(ReferenceKind::Cube(2), &cube).unwrap();
        assert_eq!(c.host_indices.len(), 4);
        // the 3-semicube is a unimodular tetrahedron of D3
        assert!(find(ReferenceKind::Semicube(3), &cube).is_some());
        // the two middle layers of the cube form J(4,2), which is also the
        // arithmetic type of the 3-cross
        assert!(find(ReferenceKind::Hypersimplex { n: 4, s: 2 }, &cube).is_some());
        assert!(find_saturated(ReferenceKind::Cross(3), &cube).is_some());
        assert!(find(ReferenceKind::Hypersimplex { n: 5, s: 2 }, &cube).is_none());
        assert!(find(ReferenceKind::Cube(4), &cube).is_none());
    }

    #[test]
    fn hypersimplex_homology() {
        // J(n,s) and J(n,n-s) are arithmetically equivalent
        let b = build_reference(ReferenceKind::Hypersimplex { n: 5, s: 3 }).unwrap();
        assert!(find(ReferenceKind::Hypersimplex { n: 5, s: 2 }, &b.vertices).is_some());
    }

    #[test]
    fn budget_is_reported() {
        let cube = build_reference(ReferenceKind::Cube(4)).unwrap();
        let t = build_reference(ReferenceKind::Cube(3)).unwrap();
        let opts = ArithmeticOptions { budget: Budget::nodes(1), ..Default::default() };
        assert!(matches!(find_arithmetic_copy(&t, &cube.vertices, &opts), Err(crate::Error::BudgetExceeded { .. })));
    }
}
