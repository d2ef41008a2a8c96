//! Compressed vertex-orbit notation.
//!
//! `[1^2,0^3;-1] × 10` is the set of vectors whose first five entries are the
//! distinct arrangements of {1,1,0,0,0} and whose sixth entry is -1; the
//! trailing `× 10` is the number of vectors and is checked on parse. Blocks
//! separated by `;` are permuted independently.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::qlattice::LatticePoint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrbit {
    /// Source text, kept for diagnostics and serialization.
    pub text: String,
    /// Each block's multiset, sorted ascending.
    pub blocks: Vec<Vec<i64>>,
    pub multiplicity: u64,
}

impl VertexOrbit {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Product over blocks of the multinomial `len! / Π mult!`.
    pub fn arrangement_count(&self) -> BigUint {
        self.blocks.iter().map(|b| multinomial(b)).product()
    }

    /// All vectors of the orbit, in lexicographic order.
    pub fn expand(&self) -> Vec<LatticePoint> {
        let per_block: Vec<Vec<Vec<i64>>> = self.blocks.iter().map(|b| arrangements(b)).collect();
        let mut out: Vec<Vec<i64>> = vec![Vec::new()];
        for choices in &per_block {
            let mut next = Vec::with_capacity(out.len() * choices.len());
            for prefix in &out {
                for c in choices {
                    let mut v = prefix.clone();
                    v.extend_from_slice(c);
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(LatticePoint).collect()
    }
}

impl fmt::Display for VertexOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

fn multinomial(block: &[i64]) -> BigUint {
    let mut total = factorial(block.len());
    let mut i = 0;
    while i < block.len() {
        let j = block[i..].iter().take_while(|&&x| x == block[i]).count();
        total /= factorial(j);
        i += j;
    }
    total
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

/// Distinct permutations of a sorted multiset, lexicographically.
fn arrangements(sorted: &[i64]) -> Vec<Vec<i64>> {
    let mut cur = sorted.to_vec();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

fn next_permutation(v: &mut [i64]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn parse_orbit(text: &str) -> Result<VertexOrbit> {
    let err = |reason: &str| Error::Orbit { text: text.to_string(), reason: reason.to_string() };
    let s = text.trim();
    let body_start = s.strip_prefix('[').ok_or_else(|| err("expected '['"))?;
    let close = body_start.find(']').ok_or_else(|| err("missing ']'"))?;
    let body = &body_start[..close];
    let tail = body_start[close + 1..].trim();
    let tail = tail
        .strip_prefix('×')
        .or_else(|| tail.strip_prefix('x'))
        .or_else(|| tail.strip_prefix('*'))
        .ok_or_else(|| err("expected '×' after ']'"))?
        .trim();
    let multiplicity: u64 = tail.parse().map_err(|_| err("multiplicity is not a non-negative integer"))?;

    let mut blocks = Vec::new();
    for block in body.split(';') {
        let mut entries = Vec::new();
        for entry in block.split(',') {
            let entry = entry.trim();
            if entry.is_empty() {
                return Err(err("empty entry"));
            }
            let (value, count) = match entry.split_once('^') {
                Some((v, k)) => {
                    let k = k.trim();
                    let k = k.strip_prefix('{').and_then(|k| k.strip_suffix('}')).unwrap_or(k);
                    let k: usize = k.trim().parse().map_err(|_| err("bad exponent"))?;
                    if k == 0 {
                        return Err(err("zero exponent"));
                    }
                    (v.trim(), k)
                }
                None => (entry, 1),
            };
            let value: i64 = value.parse().map_err(|_| err("entry is not an integer"))?;
            entries.extend(std::iter::repeat_n(value, count));
        }
        entries.sort_unstable();
        blocks.push(entries);
    }
    let orbit = VertexOrbit { text: s.to_string(), blocks, multiplicity };
    let count = orbit.arrangement_count();
    if count.to_u64() != Some(multiplicity) {
        return Err(err(&format!("declared multiplicity {multiplicity} but blocks give {count}")));
    }
    Ok(orbit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g6_orbit() {
        let o = parse_orbit("[1^2,0^3;-1] × 10").unwrap();
        assert_eq!(o.blocks, vec![vec![0, 0, 0, 1, 1], vec![-1]]);
        let v = o.expand();
        assert_eq!(v.len(), 10);
        assert!(v.iter().all(|p| p.0[5] == -1 && p.0[..5].iter().sum::<i64>() == 2));
    }

    #[test]
    fn origin() {
        let o = parse_orbit("[0^6] × 1").unwrap();
        assert_eq!(o.expand(), vec![LatticePoint(vec![0; 6])]);
    }

    #[test]
    fn many_blocks() {
        let o = parse_orbit("[0;0,1;0^3;-1;1] × 2").unwrap();
        assert_eq!(o.blocks.len(), 5);
        assert_eq!(
            o.expand(),
            vec![
                LatticePoint(vec![0, 0, 1, 0, 0, 0, -1, 1]),
                LatticePoint(vec![0, 1, 0, 0, 0, 0, -1, 1]),
            ]
        );
    }

    #[test]
    fn alternate_spellings() {
        let a = parse_orbit("[1^{2},0^3;-1] x 10").unwrap();
        let b = parse_orbit("[1^2,0^3;-1]*10").unwrap();
        assert_eq!(a.blocks, b.blocks);
    }

    #[test]
    fn checksum_mismatch() {
        let e = parse_orbit("[1^2,0^3;-1] × 11").unwrap_err();
        assert!(matches!(e, Error::Orbit { .. }));
        assert!(e.to_string().contains("11"));
    }

    #[test]
    fn grammar_errors() {
        for bad in ["1,0] × 2", "[1,0 × 2", "[1,,0] × 2", "[1,a] × 2", "[1^x] × 1", "[1,0]"] {
            assert!(parse_orbit(bad).is_err(), "{bad}");
        }
    }
}
