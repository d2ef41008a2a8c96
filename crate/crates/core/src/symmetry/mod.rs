//! Automorphism groups of vertex sets and lattices, and invariant forms.

mod perm;
mod search;

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::budget::Budget;
use crate::enumerate::{shortest_vectors, vectors_up_to};
use crate::error::{Error, Result};
use crate::exactmath::{affine_basis, row_reduce_integer, IntMatrix, Rational};
use crate::geometry::distance_matrix;
use crate::qlattice::{LatticePoint, QuadraticForm};

pub use perm::{orbits, Permutation, StabilizerChain};
use search::{search_chain, Domain};

/// `Q[vᵢ - vⱼ]` for every pair of vertices.
pub fn distance_coloring(form: &QuadraticForm, vertices: &[LatticePoint]) -> Result<Vec<Vec<Rational>>> {
    vertices
        .iter()
        .map(|a| {
            vertices
                .iter()
                .map(|b| {
                    let d: Vec<i64> = a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect();
                    form.eval_int(&d)
                })
                .collect()
        })
        .collect()
}

/// Isometry group of a vertex set, as permutations of the vertex indices.
#[derive(Debug, Clone)]
pub struct PermutationGroup {
    pub degree: usize,
    pub generators: Vec<Permutation>,
    /// Linear part of each generator's affine extension.
    pub linear_parts: Vec<IntMatrix>,
    /// Affinely independent vertices fixed per record.
    pub base: Vec<usize>,
    pub orbit_sizes: Vec<usize>,
    pub order: BigUint,
    /// Generators whose affine extension has a non-integral linear part.
    pub certification_failures: usize,
}

impl PermutationGroup {
    pub fn is_certified(&self) -> bool {
        self.certification_failures == 0
    }

    /// Independent Schreier-Sims chain built from the generators alone.
    pub fn stabilizer_chain(&self) -> StabilizerChain {
        StabilizerChain::new(self.degree, &self.generators)
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits(self.degree, &self.generators)
    }
}

pub fn polytope_automorphisms(form: &QuadraticForm, vertices: &[LatticePoint]) -> Result<PermutationGroup> {
    polytope_automorphisms_with(form, vertices, Budget::UNLIMITED)
}

pub fn polytope_automorphisms_with(
    form: &QuadraticForm,
    vertices: &[LatticePoint],
    budget: Budget,
) -> Result<PermutationGroup> {
    let mut d = PolytopeDomain::new(form, vertices)?;
    let chain = search_chain(&mut d, &mut budget.meter())?;
    let mut generators = Vec::new();
    let mut linear_parts = Vec::new();
    let mut certification_failures = 0;
    for (p, a) in chain.generators {
        match a {
            Some(a) => linear_parts.push(a),
            None => certification_failures += 1,
        }
        generators.push(p);
    }
    Ok(PermutationGroup {
        degree: vertices.len(),
        generators,
        linear_parts,
        base: d.base,
        order: product(&chain.orbit_sizes),
        orbit_sizes: chain.orbit_sizes,
        certification_failures,
    })
}

fn product(sizes: &[usize]) -> BigUint {
    sizes.iter().fold(BigUint::one(), |acc, &s| acc * BigUint::from(s))
}

/// Stable partition refinement of the complete graph coloured by `dist`.
fn refine_colors(dist: &[Vec<i64>]) -> Vec<usize> {
    let n = dist.len();
    let mut color = vec![0usize; n];
    let mut classes = 1;
    loop {
        let sigs: Vec<(usize, Vec<(i64, usize)>)> = (0..n)
            .map(|i| {
                let mut s: Vec<(i64, usize)> = (0..n).filter(|&j| j != i).map(|j| (dist[i][j], color[j])).collect();
                s.sort_unstable();
                (color[i], s)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        color = sigs.iter().map(|s| distinct.binary_search(s).expect("present")).collect();
        if distinct.len() == classes {
            return color;
        }
        classes = distinct.len();
    }
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `A = B'·adj / det` when integral.
fn divide_exact(m: &IntMatrix, det: i64) -> Option<IntMatrix> {
    let rows: Vec<Vec<i64>> = m
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| (x % det == 0).then_some(x / det)).collect::<Option<Vec<i64>>>())
        .collect::<Option<_>>()?;
    IntMatrix::from_rows(&rows).ok()
}

struct PolytopeDomain {
    coords: Vec<Vec<i64>>,
    dist: Vec<Vec<i64>>,
    color: Vec<usize>,
    gram: IntMatrix,
    base: Vec<usize>,
    adj: IntMatrix,
    det: i64,
    /// `adj · (v - v_base0)` for every vertex.
    u: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
}

impl PolytopeDomain {
    fn new(form: &QuadraticForm, vertices: &[LatticePoint]) -> Result<Self> {
        let n = form.dim();
        let gram = form
            .integer_gram()
            .ok_or_else(|| Error::InvalidParameter("Gram matrix does not scale to integers".into()))?;
        let coords: Vec<Vec<i64>> = vertices.iter().map(|v| v.0.clone()).collect();
        if coords.iter().any(|c| c.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: coords.iter().map(Vec::len).find(|&l| l != n).unwrap_or(0) });
        }
        let dist = distance_matrix(&gram, vertices);
        let color = refine_colors(&dist);
        let mut class_size = HashMap::new();
        color.iter().for_each(|&c| *class_size.entry(c).or_insert(0usize) += 1);
        let mut order: Vec<usize> = (0..coords.len()).collect();
        order.sort_by_key(|&i| (class_size[&color[i]], color[i], i));
        let ordered: Vec<Vec<i64>> = order.iter().map(|&i| coords[i].clone()).collect();
        let base: Vec<usize> = affine_basis(&ordered).into_iter().map(|k| order[k]).collect();
        if base.len() != n + 1 {
            return Err(Error::NotFullDimensional { rank: base.len().saturating_sub(1), dim: n });
        }
        let cols: Vec<Vec<i64>> = base[1..].iter().map(|&k| sub(&coords[k], &coords[base[0]])).collect();
        let bmat = IntMatrix::from_columns(&cols)?;
        let (adj, det) = bmat
            .adjugate()
            .ok_or_else(|| Error::InvalidParameter("affine basis adjugate overflows".into()))?;
        let u = coords.iter().map(|c| adj.mul_vec(&sub(c, &coords[base[0]]))).collect();
        let index = coords.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        Ok(PolytopeDomain { coords, dist, color, gram, base, adj, det, u, index })
    }
}

impl Domain for PolytopeDomain {
    type Elem = (Permutation, Option<IntMatrix>);

    fn num_points(&self) -> usize {
        self.coords.len()
    }

    fn base(&self) -> &[usize] {
        &self.base
    }

    fn candidates(&self, images: &[usize]) -> Vec<usize> {
        let b = self.base[images.len()];
        (0..self.coords.len())
            .filter(|&v| {
                self.color[v] == self.color[b]
                    && images.iter().zip(&self.base).all(|(&img, &bj)| self.dist[v][img] == self.dist[b][bj])
            })
            .collect()
    }

    fn complete(&mut self, images: &[usize]) -> Option<Self::Elem> {
        let n = self.gram.rows();
        let img0 = &self.coords[images[0]];
        let cols: Vec<Vec<i64>> = images[1..].iter().map(|&k| sub(&self.coords[k], img0)).collect();
        let bp = IntMatrix::from_columns(&cols).ok()?;
        let det = self.det as i128;
        let mut seen = vec![false; self.coords.len()];
        let mut map = Vec::with_capacity(self.coords.len());
        for u in &self.u {
            let mut p = Vec::with_capacity(n);
            for i in 0..n {
                let num: i128 =
                    det * img0[i] as i128 + (0..n).map(|k| bp[(i, k)] as i128 * u[k] as i128).sum::<i128>();
                if num % det != 0 {
                    return None;
                }
                p.push(i64::try_from(num / det).ok()?);
            }
            let j = *self.index.get(&p)?;
            if seen[j] {
                return None;
            }
            seen[j] = true;
            map.push(j);
        }
        let perm = Permutation::from_images(map)?;
        let scaled = bp.mul(&self.adj);
        // the base distances match, so the extension preserves Q up to det²
        let lhs = scaled.congruence(&self.gram);
        let d2 = self.det * self.det;
        let preserves = (0..n).all(|i| (0..n).all(|j| lhs[(i, j)] == d2 * self.gram[(i, j)]));
        if !preserves {
            return None;
        }
        let linear = divide_exact(&scaled, self.det).filter(IntMatrix::is_unimodular);
        Some((perm, linear))
    }

    fn apply(&self, g: &Self::Elem, p: usize) -> usize {
        g.0.apply(p)
    }
}

/// Automorphism group `{T ∈ GL(n,Z) : TᵀGT = G}` of a lattice form.
#[derive(Debug, Clone)]
pub struct LatticeAutGroup {
    pub dim: usize,
    pub generators: Vec<IntMatrix>,
    /// Basis vectors whose images determine an element.
    pub base: Vec<LatticePoint>,
    pub orbit_sizes: Vec<usize>,
    pub order: BigUint,
    /// Size of the invariant vector set searched over.
    pub point_count: usize,
}

impl LatticeAutGroup {
    /// Generators as row-major integer matrices.
    pub fn generator_rows(&self) -> Vec<Vec<Vec<i64>>> {
        self.generators.iter().map(IntMatrix::to_rows).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeOptions {
    /// Largest invariant vector set to search over.
    pub max_vectors: usize,
    pub budget: Budget,
}

impl Default for LatticeOptions {
    fn default() -> Self {
        LatticeOptions { max_vectors: 10_000, budget: Budget::UNLIMITED }
    }
}

pub fn lattice_automorphisms(form: &QuadraticForm) -> Result<LatticeAutGroup> {
    lattice_automorphisms_with(form, LatticeOptions::default())
}

pub fn lattice_automorphisms_with(form: &QuadraticForm, options: LatticeOptions) -> Result<LatticeAutGroup> {
    form.require_positive_definite()?;
    let n = form.dim();
    let gram = form
        .integer_gram()
        .ok_or_else(|| Error::InvalidParameter("Gram matrix does not scale to integers".into()))?;
    if n == 0 {
        return Ok(LatticeAutGroup {
            dim: 0,
            generators: Vec::new(),
            base: Vec::new(),
            orbit_sizes: Vec::new(),
            order: BigUint::one(),
            point_count: 0,
        });
    }
    let mut d = LatticeDomain::new(&gram, options.max_vectors)?;
    let chain = search_chain(&mut d, &mut options.budget.meter())?;
    Ok(LatticeAutGroup {
        dim: n,
        generators: chain.generators,
        base: d.base.iter().map(|&i| LatticePoint(d.pts[i].clone())).collect(),
        order: product(&chain.orbit_sizes),
        orbit_sizes: chain.orbit_sizes,
        point_count: d.pts.len(),
    })
}

struct LatticeDomain {
    gram: IntMatrix,
    pts: Vec<Vec<i64>>,
    /// `G·p` for every point.
    gp: Vec<Vec<i64>>,
    norm: Vec<i64>,
    classes: HashMap<i64, Vec<usize>>,
    base: Vec<usize>,
    /// Inner products among base vectors.
    base_ip: Vec<Vec<i64>>,
    adj: IntMatrix,
    det: i64,
    index: HashMap<Vec<i64>, usize>,
}

fn idot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rank_of(rows: &[&Vec<i64>], n: usize) -> usize {
    let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    row_reduce_integer(rows, n).rank
}

impl LatticeDomain {
    fn new(gram: &IntMatrix, max_vectors: usize) -> Result<Self> {
        let n = gram.rows();
        let form = QuadraticForm::from_int_matrix(gram)?;
        // vectors up to the largest diagonal entry span the lattice, so the
        // smallest spanning norm bound lies between the minimum and that
        let max_diag = (0..n).map(|i| gram[(i, i)]).max().expect("n > 0");
        let mut bound: i64 = shortest_vectors(&form)?.minimum.to_integer().try_into().expect("small norm");
        let mut vecs;
        loop {
            vecs = vectors_up_to(&form, &Rational::from_integer(bound.into()), max_vectors)?;
            let all: Vec<&Vec<i64>> = vecs.iter().map(|(p, _)| &p.0).collect();
            if bound >= max_diag || rank_of(&all, n) == n {
                break;
            }
            bound += 1;
        }
        let mut by_norm: Vec<(i64, Vec<i64>)> =
            vecs.into_iter().map(|(p, q)| (q.to_integer().try_into().expect("small norm"), p.0)).collect();
        by_norm.sort();
        let mut cut = by_norm.len();
        let mut k = 0;
        while k < by_norm.len() {
            let nk = by_norm[k].0;
            let mut e = k;
            while e < by_norm.len() && by_norm[e].0 == nk {
                e += 1;
            }
            let prefix: Vec<&Vec<i64>> = by_norm[..e].iter().map(|(_, p)| p).collect();
            if rank_of(&prefix, n) == n {
                cut = e;
                break;
            }
            k = e;
        }
        by_norm.truncate(cut);
        let norm: Vec<i64> = by_norm.iter().map(|(q, _)| *q).collect();
        let pts: Vec<Vec<i64>> = by_norm.into_iter().map(|(_, p)| p).collect();
        let gp: Vec<Vec<i64>> = pts.iter().map(|p| gram.mul_vec(p)).collect();
        let mut classes: HashMap<i64, Vec<usize>> = HashMap::new();
        for (i, &q) in norm.iter().enumerate() {
            classes.entry(q).or_default().push(i);
        }
        let mut order: Vec<usize> = (0..pts.len()).collect();
        order.sort_by(|&a, &b| (classes[&norm[a]].len(), norm[a], &pts[a]).cmp(&(classes[&norm[b]].len(), norm[b], &pts[b])));
        let mut base: Vec<usize> = Vec::new();
        for &i in &order {
            let mut rows: Vec<&Vec<i64>> = base.iter().map(|&b| &pts[b]).collect();
            rows.push(&pts[i]);
            if rank_of(&rows, n) == rows.len() {
                base.push(i);
                if base.len() == n {
                    break;
                }
            }
        }
        let cols: Vec<Vec<i64>> = base.iter().map(|&b| pts[b].clone()).collect();
        let (adj, det) = IntMatrix::from_columns(&cols)?
            .adjugate()
            .ok_or_else(|| Error::InvalidParameter("basis adjugate overflows".into()))?;
        let base_ip = base.iter().map(|&a| base.iter().map(|&b| idot(&pts[a], &gp[b])).collect()).collect();
        let index = pts.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        Ok(LatticeDomain { gram: gram.clone(), pts, gp, norm, classes, base, base_ip, adj, det, index })
    }
}

impl Domain for LatticeDomain {
    type Elem = IntMatrix;

    fn num_points(&self) -> usize {
        self.pts.len()
    }

    fn base(&self) -> &[usize] {
        &self.base
    }

    fn candidates(&self, images: &[usize]) -> Vec<usize> {
        let k = images.len();
        let b = self.base[k];
        self.classes[&self.norm[b]]
            .iter()
            .copied()
            .filter(|&w| images.iter().enumerate().all(|(j, &img)| idot(&self.pts[w], &self.gp[img]) == self.base_ip[k][j]))
            .collect()
    }

    fn complete(&mut self, images: &[usize]) -> Option<IntMatrix> {
        let cols: Vec<Vec<i64>> = images.iter().map(|&i| self.pts[i].clone()).collect();
        let bp = IntMatrix::from_columns(&cols).ok()?;
        let a = divide_exact(&bp.mul(&self.adj), self.det)?;
        (a.congruence(&self.gram) == self.gram).then_some(a)
    }

    fn apply(&self, g: &IntMatrix, p: usize) -> usize {
        self.index[&g.mul_vec(&self.pts[p])]
    }
}

/// Largest set of coordinates that can be permuted arbitrarily while fixing
/// the Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateSymmetry {
    pub k: usize,
    /// Zero-based coordinate indices.
    pub subset: Vec<usize>,
}

pub fn coordinate_symmetric_subgroup(form: &QuadraticForm) -> CoordinateSymmetry {
    let n = form.dim();
    let g = form.gram();
    assert!(n < 32, "coordinate subsets are enumerated exhaustively");
    let mut best = CoordinateSymmetry { k: n.min(1), subset: if n > 0 { vec![0] } else { Vec::new() } };
    for mask in 1u32..(1u32 << n) {
        let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if s.len() < best.k || (s.len() == best.k && s >= best.subset) {
            continue;
        }
        let d = &g[(s[0], s[0])];
        if s.iter().any(|&i| &g[(i, i)] != d) {
            continue;
        }
        if s.len() > 1 {
            let off = &g[(s[0], s[1])];
            if s.iter().any(|&i| s.iter().any(|&j| i != j && &g[(i, j)] != off)) {
                continue;
            }
        }
        let outside_ok = (0..n)
            .filter(|l| !s.contains(l))
            .all(|l| s.iter().all(|&i| g[(i, l)] == g[(s[0], l)]));
        if outside_ok {
            best = CoordinateSymmetry { k: s.len(), subset: s };
        }
    }
    best
}

/// Dimension of `{S symmetric : TᵀST = S for every generator T}`.
pub fn quad_inv_dim(n: usize, generators: &[IntMatrix]) -> usize {
    let vars: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for t in generators {
        for &(a, b) in &vars {
            let row: Vec<BigInt> = vars
                .iter()
                .map(|&(i, j)| {
                    let mut c = if i == j {
                        t[(i, a)] * t[(i, b)]
                    } else {
                        t[(i, a)] * t[(j, b)] + t[(j, a)] * t[(i, b)]
                    };
                    if (i, j) == (a, b) {
                        c -= 1;
                    }
                    BigInt::from(c)
                })
                .collect();
            rows.push(row);
        }
    }
    vars.len() - row_reduce_integer(rows, vars.len()).rank
}

/// `-I`, which fixes every quadratic form.
pub fn negative_identity(n: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    (0..n).for_each(|i| m[(i, i)] = -1);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_reference, ReferenceKind};

    fn fact(n: u64) -> BigUint {
        (1..=n).map(BigUint::from).fold(BigUint::one(), |a, b| a * b)
    }

    #[test]
    fn segment_group() {
        let v = vec![LatticePoint(vec![0]), LatticePoint(vec![1])];
        let g = polytope_automorphisms(&QuadraticForm::identity(1), &v).unwrap();
        assert_eq!(g.order, BigUint::from(2u32));
        assert!(g.is_certified());
        let c = distance_coloring(&QuadraticForm::identity(1), &v).unwrap();
        assert_eq!(c[0][1], Rational::one());
    }

    #[test]
    fn cube_and_cross_groups() {
        for k in 1..=4u64 {
            let hyperoctahedral = BigUint::from(1u64 << k) * fact(k);
            for kind in [ReferenceKind::Cube(k as usize), ReferenceKind::Cross(k as usize)] {
                if kind == ReferenceKind::Cross(1) {
                    continue;
                }
                let p = build_reference(kind).unwrap();
                let g = polytope_automorphisms(&p.form, &p.vertices).unwrap();
                assert_eq!(g.order, hyperoctahedral, "{kind}");
                assert_eq!(g.stabilizer_chain().order(), g.order);
                assert!(g.is_certified());
            }
        }
    }

    #[test]
    fn identity_form_automorphisms() {
        for n in 1..=5u64 {
            let g = lattice_automorphisms(&QuadraticForm::identity(n as usize)).unwrap();
            assert_eq!(g.order, BigUint::from(1u64 << n) * fact(n));
            for t in &g.generators {
                assert!(t.is_unimodular());
                assert_eq!(t.congruence(&IntMatrix::identity(n as usize)), IntMatrix::identity(n as usize));
            }
        }
    }

    #[test]
    fn hexagonal_lattice() {
        let f = QuadraticForm::from_int_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(lattice_automorphisms(&f).unwrap().order, BigUint::from(12u32));
    }

    #[test]
    fn vector_limit_is_reported() {
        let f = QuadraticForm::identity(4);
        let opts = LatticeOptions { max_vectors: 3, budget: Budget::UNLIMITED };
        assert!(matches!(lattice_automorphisms_with(&f, opts), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn coordinate_subgroups() {
        let diag = QuadraticForm::from_int_rows(&[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]]).unwrap();
        assert_eq!(coordinate_symmetric_subgroup(&diag).k, 1);
        let s = coordinate_symmetric_subgroup(&QuadraticForm::identity(4));
        assert_eq!((s.k, s.subset), (4, vec![0, 1, 2, 3]));
        // last coordinate couples differently
        let g = QuadraticForm::from_int_rows(&[vec![2, 1, 1], vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        assert_eq!(coordinate_symmetric_subgroup(&g).subset, vec![1, 2]);
    }

    #[test]
    fn quad_inv_dimensions() {
        assert_eq!(quad_inv_dim(8, &[]), 36);
        let g = lattice_automorphisms(&QuadraticForm::identity(3)).unwrap();
        assert_eq!(quad_inv_dim(3, &g.generators), 1);
        assert_eq!(quad_inv_dim(3, &[negative_identity(3)]), 6);
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(quad_inv_dim(2, &[swap]), 2);
    }

    #[test]
    fn refinement_separates_classes() {
        // path 0-1-2: endpoints share a colour, the middle differs
        let d = vec![vec![0, 1, 4], vec![1, 0, 1], vec![4, 1, 0]];
        let c = refine_colors(&d);
        assert_eq!(c[0], c[2]);
        assert_ne!(c[0], c[1]);
    }
}
