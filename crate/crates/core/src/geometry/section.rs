//! Scaled-isometric copies and sections of a reference polytope inside a host
//! polytope.
//!
//! A copy is an injective map `t ↦ h(t)` from target vertices to host vertices
//! with `D_host[h(s), h(t)] = λ · D_target[s, t]` for one rational `λ > 0`.
//! A copy is a section when its affine span meets the host in no other vertex.

use num_bigint::BigInt;

use super::reference::{distance_matrix, ReferenceKind, ReferencePolytope};
use crate::budget::{Budget, Meter};
use crate::error::Result;
use crate::exactmath::{affine_rank, row_reduce_integer, IntMatrix, Rational};
use crate::qlattice::LatticePoint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    /// Host vertex index for each target vertex.
    pub host_indices: Vec<usize>,
    /// Host norm divided by target norm.
    pub lambda: Rational,
    pub is_section: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectionOptions {
    /// Reject copies whose affine span contains further host vertices.
    pub require_section: bool,
    pub budget: Budget,
}

impl Default for SectionOptions {
    fn default() -> Self {
        SectionOptions { require_section: true, budget: Budget::UNLIMITED }
    }
}

/// Search for a scaled-isometric section of `target` among `host_vertices`.
///
/// Returns `Ok(None)` when the exhaustive search finds none and
/// [`crate::Error::BudgetExceeded`] when it runs out of nodes.
pub fn find_scaled_isometric_section(
    target: &ReferencePolytope,
    host_gram: &IntMatrix,
    host_vertices: &[LatticePoint],
    options: SectionOptions,
) -> Result<Option<Section>> {
    let mut meter = options.budget.meter();
    find_with_meter(target, host_gram, host_vertices, options.require_section, &mut meter)
}

pub(crate) fn find_with_meter(
    target: &ReferencePolytope,
    host_gram: &IntMatrix,
    host_vertices: &[LatticePoint],
    require_section: bool,
    meter: &mut Meter,
) -> Result<Option<Section>> {
    let m = target.vertices.len();
    let n_host = host_vertices.len();
    if m == 0 || m > n_host {
        return Ok(None);
    }
    let target_coords: Vec<Vec<i64>> = target.vertices.iter().map(|v| v.0.clone()).collect();
    let host_dim = host_vertices[0].dim();
    if affine_rank(&target_coords) > host_dim {
        return Ok(None);
    }
    let dt = target.distance_matrix();
    let dh = distance_matrix(host_gram, host_vertices);
    let host = HostIndex::new(&dh);

    if m == 1 {
        return Ok(Some(Section { host_indices: vec![0], lambda: Rational::from_integer(1.into()), is_section: n_host == 1 }));
    }
    let d0 = dt[0].iter().copied().filter(|&x| x > 0).min().expect("distinct target vertices");
    for &s in &host.values {
        let lambda = Rational::new(BigInt::from(s), BigInt::from(d0));
        let Some(req) = required_classes(&dt, &lambda, &host) else {
            continue;
        };
        let mut search = Search {
            m,
            words: n_host.div_ceil(64),
            req: &req,
            host: &host,
            host_vertices,
            require_section,
            meter,
            assignment: vec![usize::MAX; m],
        };
        let domains = search.initial_domains();
        if let Some(found) = search.dfs(domains)? {
            let is_section = is_affine_section(host_vertices, &found);
            return Ok(Some(Section { host_indices: found, lambda, is_section }));
        }
    }
    Ok(None)
}

struct HostIndex {
    values: Vec<i64>,
    /// `nb[h][k]`: bitset of host vertices at norm `values[k]` from `h`.
    nb: Vec<Vec<Vec<u64>>>,
    /// `counts[h][k]`: number of host vertices at norm `values[k]` from `h`.
    counts: Vec<Vec<usize>>,
}

impl HostIndex {
    fn new(dh: &[Vec<i64>]) -> Self {
        let n = dh.len();
        let mut values: Vec<i64> = dh.iter().flatten().copied().filter(|&x| x > 0).collect();
        values.sort_unstable();
        values.dedup();
        let words = n.div_ceil(64);
        let mut nb = vec![vec![vec![0u64; words]; values.len()]; n];
        let mut counts = vec![vec![0usize; values.len()]; n];
        for h in 0..n {
            for g in 0..n {
                if g == h {
                    continue;
                }
                let k = values.binary_search(&dh[h][g]).expect("value present");
                nb[h][k][g / 64] |= 1 << (g % 64);
                counts[h][k] += 1;
            }
        }
        HostIndex { values, nb, counts }
    }
}

/// Host norm class for every target pair under scale `lambda`, if all exist.
fn required_classes(dt: &[Vec<i64>], lambda: &Rational, host: &HostIndex) -> Option<Vec<Vec<usize>>> {
    let m = dt.len();
    let mut req = vec![vec![usize::MAX; m]; m];
    for a in 0..m {
        for b in 0..m {
            if a == b {
                continue;
            }
            let v = lambda * Rational::from_integer(dt[a][b].into());
            if !v.is_integer() {
                return None;
            }
            let v: i64 = v.to_integer().try_into().ok()?;
            req[a][b] = host.values.binary_search(&v).ok()?;
        }
    }
    Some(req)
}

struct Search<'a> {
    m: usize,
    words: usize,
    req: &'a [Vec<usize>],
    host: &'a HostIndex,
    host_vertices: &'a [LatticePoint],
    require_section: bool,
    meter: &'a mut Meter,
    assignment: Vec<usize>,
}

impl Search<'_> {
    fn initial_domains(&self) -> Vec<Vec<u64>> {
        let n_host = self.host.nb.len();
        let k = self.host.values.len();
        (0..self.m)
            .map(|a| {
                let mut need = vec![0usize; k];
                for b in 0..self.m {
                    if b != a {
                        need[self.req[a][b]] += 1;
                    }
                }
                let mut d = vec![0u64; self.words];
                for h in 0..n_host {
                    if (0..k).all(|c| self.host.counts[h][c] >= need[c]) {
                        d[h / 64] |= 1 << (h % 64);
                    }
                }
                d
            })
            .collect()
    }

    fn dfs(&mut self, domains: Vec<Vec<u64>>) -> Result<Option<Vec<usize>>> {
        // most constrained unassigned target vertex
        let next = (0..self.m)
            .filter(|&a| self.assignment[a] == usize::MAX)
            .min_by_key(|&a| (popcount(&domains[a]), a));
        let Some(a) = next else {
            if self.require_section && !is_affine_section(self.host_vertices, &self.assignment) {
                return Ok(None);
            }
            return Ok(Some(self.assignment.clone()));
        };
        for h in iter_bits(&domains[a]) {
            self.meter.tick()?;
            let mut child = domains.clone();
            let mut dead = false;
            for b in 0..self.m {
                if b == a || self.assignment[b] != usize::MAX {
                    continue;
                }
                let mask = &self.host.nb[h][self.req[a][b]];
                let mut any = 0u64;
                for (w, m) in child[b].iter_mut().zip(mask) {
                    *w &= m;
                    any |= *w;
                }
                if any == 0 {
                    dead = true;
                    break;
                }
            }
            if dead {
                continue;
            }
            self.assignment[a] = h;
            if let Some(found) = self.dfs(child)? {
                return Ok(Some(found));
            }
            self.assignment[a] = usize::MAX;
        }
        Ok(None)
    }
}

fn popcount(bits: &[u64]) -> u32 {
    bits.iter().map(|w| w.count_ones()).sum()
}

fn iter_bits(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let t = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + t)
        })
    })
}

/// Whether the affine span of the chosen host vertices contains no other host vertex.
pub fn is_affine_section(host_vertices: &[LatticePoint], chosen: &[usize]) -> bool {
    let Some(&first) = chosen.first() else {
        return true;
    };
    let n = host_vertices[first].dim();
    let base = &host_vertices[first].0;
    let diff = |p: &LatticePoint| -> Vec<BigInt> {
        p.0.iter().zip(base).map(|(a, b)| BigInt::from(a - b)).collect()
    };
    let rows: Vec<Vec<BigInt>> = chosen.iter().map(|&i| diff(&host_vertices[i])).collect();
    let rank = row_reduce_integer(rows.clone(), n).rank;
    if rank == n {
        return chosen.len() == host_vertices.len();
    }
    let mut in_set = vec![false; host_vertices.len()];
    chosen.iter().for_each(|&i| in_set[i] = true);
    for (i, p) in host_vertices.iter().enumerate() {
        if in_set[i] {
            continue;
        }
        let mut r = rows.clone();
        r.push(diff(p));
        if row_reduce_integer(r, n).rank == rank {
            return false;
        }
    }
    true
}

/// Next members of the family used for the one-step maximality check.
pub fn extension_candidates(kind: ReferenceKind) -> Vec<ReferenceKind> {
    match kind {
        ReferenceKind::Cube(k) => vec![ReferenceKind::Cube(k + 1)],
        ReferenceKind::Semicube(k) => vec![ReferenceKind::Semicube(k + 1)],
        ReferenceKind::Hypersimplex { n, s } => vec![
            ReferenceKind::Hypersimplex { n: n + 1, s },
            ReferenceKind::Hypersimplex { n: n + 1, s: s + 1 },
        ],
        ReferenceKind::G6 => vec![ReferenceKind::Tope35, ReferenceKind::G7],
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::reference::build_reference;

    fn host_of(kind: ReferenceKind) -> (IntMatrix, Vec<LatticePoint>) {
        let p = build_reference(kind).unwrap();
        (p.form.integer_gram().unwrap(), p.vertices)
    }

    #[test]
    fn square_in_cube() {
        let (g, v) = host_of(ReferenceKind::Cube(3));
        let t = build_reference(ReferenceKind::Cube(2)).unwrap();
        let s = find_scaled_isometric_section(&t, &g, &v, SectionOptions::default()).unwrap().unwrap();
        assert!(s.is_section);
        assert_eq!(s.lambda, Rational::from_integer(1.into()));
    }

    #[test]
    fn triangle_in_cube() {
        // J(3,1) has all norms 2, realised by face diagonals such as 000, 110, 101
        let (g, v) = host_of(ReferenceKind::Cube(3));
        let tri = build_reference(ReferenceKind::Hypersimplex { n: 3, s: 1 }).unwrap();
        let s = find_scaled_isometric_section(&tri, &g, &v, SectionOptions::default()).unwrap();
        let s = s.unwrap();
        assert_eq!(s.lambda, Rational::from_integer(1.into()));
    }

    #[test]
    fn cube_absent_from_cross() {
        let (g, v) = host_of(ReferenceKind::Cross(3));
        let t = build_reference(ReferenceKind::Cube(3)).unwrap();
        assert_eq!(find_scaled_isometric_section(&t, &g, &v, SectionOptions::default()).unwrap(), None);
    }

    #[test]
    fn section_flag() {
        let (_, v) = host_of(ReferenceKind::Cube(2));
        // a diagonal of the square is an affine section
        assert!(is_affine_section(&v, &[0, 3]));
        let (_, v) = host_of(ReferenceKind::Cube(3));
        // the segment 000-001 spans a line containing no other cube vertex
        assert!(is_affine_section(&v, &[0, 1]));
        // three vertices of a square face do not form a section
        assert!(!is_affine_section(&v, &[0, 1, 2]));
    }

    #[test]
    fn budget_is_reported() {
        let (g, v) = host_of(ReferenceKind::Cube(4));
        let t = build_reference(ReferenceKind::Cube(3)).unwrap();
        let opts = SectionOptions { require_section: true, budget: Budget::nodes(2) };
        assert!(matches!(
            find_scaled_isometric_section(&t, &g, &v, opts),
            Err(crate::Error::BudgetExceeded { .. })
        ));
    }
}
