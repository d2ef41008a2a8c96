//! Geometric invariants of vertex sets and reference polytopes.

mod arithmetic;
mod lamina;
mod reference;
mod section;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Result;
use crate::exactmath::Rational;
use crate::qlattice::{LatticePoint, QuadraticForm};

pub use arithmetic::{find_arithmetic_copy, is_saturated, lattice_basis, ArithmeticCopy, ArithmeticOptions};
pub use lamina::{
    functional_with_width, lamina_witness_search, width_from_functional, LaminaOutcome, LaminaWitness,
};
pub use reference::{
    build_reference, distance_matrix, dn_basis, fit_sphere, upsilon_orbits, upsilon_vertices,
    verify_an_dn_cell, CellVerdict, DCell, ReferenceKind, ReferencePolytope,
};
pub use section::{
    extension_candidates, find_scaled_isometric_section, is_affine_section, Section, SectionOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryType {
    CentrallySymmetric,
    Antisymmetric,
}

impl fmt::Display for SymmetryType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymmetryType::CentrallySymmetric => "centrally-symmetric",
            SymmetryType::Antisymmetric => "antisymmetric",
        })
    }
}

impl FromStr for SymmetryType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "centrally-symmetric" => Ok(SymmetryType::CentrallySymmetric),
            "antisymmetric" => Ok(SymmetryType::Antisymmetric),
            _ => Err(format!("unknown symmetry type {s:?}")),
        }
    }
}

/// Distinct nonzero `Q[vᵢ - vⱼ]`, ascending.
pub fn spectrum(form: &QuadraticForm, vertices: &[LatticePoint]) -> Result<Vec<Rational>> {
    let mut out = BTreeSet::new();
    for (i, a) in vertices.iter().enumerate() {
        for b in &vertices[i + 1..] {
            let d: Vec<i64> = a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect();
            let v = form.eval_int(&d)?;
            if !v.is_zero() {
                out.insert(v);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Centrally symmetric iff `v ↦ 2c - v` maps the vertex set onto itself.
pub fn symmetry_type(vertices: &[LatticePoint], center: &[Rational]) -> SymmetryType {
    let two_c: Vec<Rational> = center.iter().map(|x| x * Rational::from_integer(BigInt::from(2))).collect();
    if two_c.iter().any(|x| !x.is_integer()) {
        return SymmetryType::Antisymmetric;
    }
    let two_c: Vec<BigInt> = two_c.iter().map(|x| x.to_integer()).collect();
    let set: BTreeSet<&LatticePoint> = vertices.iter().collect();
    let maps_onto = vertices.iter().all(|v| {
        let img: Option<Vec<i64>> =
            two_c.iter().zip(&v.0).map(|(c, x)| i64::try_from(c - BigInt::from(*x)).ok()).collect();
        img.is_some_and(|p| set.contains(&LatticePoint(p)))
    });
    if maps_onto {
        SymmetryType::CentrallySymmetric
    } else {
        SymmetryType::Antisymmetric
    }
}
