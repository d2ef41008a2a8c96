//! Lattice width and lamina witnesses.

use crate::exactmath::{affine_basis, IntMatrix};
use crate::qlattice::LatticePoint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaminaWitness {
    pub functional: Vec<i64>,
    /// Distinct values `a·v`, ascending.
    pub values: Vec<i64>,
    pub spread: i64,
}

impl LaminaWitness {
    pub fn lamina_number(&self) -> i64 {
        self.spread + 1
    }
}

/// `max(a·v) - min(a·v)`
pub fn width_from_functional(vertices: &[LatticePoint], a: &[i64]) -> i64 {
    let vals = vertices.iter().map(|v| dot(a, v.coords()));
    let (lo, hi) = vals.fold((i64::MAX, i64::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)));
    if lo > hi {
        0
    } else {
        hi - lo
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Find a nonzero integer functional whose values on the vertices fit in a
/// window of `width + 1` consecutive integers.
///
/// Any such functional takes values in `{0..=width}` (after translation) on a
/// fixed affine basis, and is determined by those values, so trying all
/// `(width+1)^(n+1)` assignments is complete.
pub fn functional_with_width(vertices: &[LatticePoint], width: i64) -> Option<LaminaWitness> {
    let n = vertices.first()?.dim();
    let coords: Vec<Vec<i64>> = vertices.iter().map(|v| v.0.clone()).collect();
    let basis = affine_basis(&coords);
    if basis.len() != n + 1 {
        return None;
    }
    let base = &coords[basis[0]];
    // rows (v_k - v_0)ᵀ, so M a = Δt
    let rows: Vec<Vec<i64>> = basis[1..]
        .iter()
        .map(|&k| coords[k].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let m = IntMatrix::from_rows(&rows).ok()?;
    let (adj, det) = m.adjugate()?;
    let diffs: Vec<Vec<i64>> =
        coords.iter().map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect()).collect();

    let w = width + 1;
    let total = (w as u64).checked_pow((n + 1) as u32)?;
    let mut t = vec![0i64; n + 1];
    for code in 0..total {
        let mut c = code;
        for slot in t.iter_mut() {
            *slot = (c % w as u64) as i64;
            c /= w as u64;
        }
        let delta: Vec<i64> = t[1..].iter().map(|x| x - t[0]).collect();
        if delta.iter().all(|&x| x == 0) {
            continue;
        }
        let num = adj.mul_vec(&delta);
        if num.iter().any(|x| x % det != 0) {
            continue;
        }
        let a: Vec<i64> = num.iter().map(|x| x / det).collect();
        if a.iter().all(|&x| x == 0) {
            continue;
        }
        let ok = diffs.iter().all(|d| {
            let v = dot(&a, d) + t[0];
            (0..=width).contains(&v)
        });
        if ok {
            let mut values: Vec<i64> = coords.iter().map(|p| dot(&a, p)).collect();
            values.sort_unstable();
            values.dedup();
            let spread = values.last().unwrap() - values[0];
            return Some(LaminaWitness { functional: a, values, spread });
        }
    }
    None
}

/// Lamina number search result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LaminaOutcome {
    /// Minimal spread found; lamina number is `spread + 1`.
    Found(LaminaWitness),
    /// No functional of spread <= 2 exists, so the lamina number is at least 4.
    AtLeastFour,
}

impl LaminaOutcome {
    pub fn lamina_number(&self) -> Option<i64> {
        match self {
            LaminaOutcome::Found(w) => Some(w.lamina_number()),
            LaminaOutcome::AtLeastFour => None,
        }
    }
}

/// Smallest spread in {1, 2}; width 0 is impossible for a full-dimensional set.
pub fn lamina_witness_search(vertices: &[LatticePoint]) -> LaminaOutcome {
    for width in 1..=2 {
        if let Some(w) = functional_with_width(vertices, width) {
            return LaminaOutcome::Found(w);
        }
    }
    LaminaOutcome::AtLeastFour
}
