//! The embedded catalog of perfect Delaunay polytopes and its text format.

mod format;
mod orbit;

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactmath::{IntMatrix, Rational, RationalVector};
use crate::geometry::{ReferenceKind, SymmetryType};
use crate::qlattice::{AffineQuadraticFunction, LatticePoint, QuadraticForm};

pub use format::{parse_catalog, serialize_catalog};
pub use orbit::{parse_orbit, VertexOrbit};

const BUILTIN: &str = include_str!("../../data/catalog.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordStatus {
    Available,
    /// Placeholder keeping the numbering; no data.
    Unavailable,
}

/// Values printed alongside a record. Absent fields were not stated.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Expected {
    pub vertex_count: Option<usize>,
    pub iso_order: Option<BigInt>,
    pub lattice_aut_order: Option<BigInt>,
    pub symmetric_subgroup_k: Option<usize>,
    pub shortest_count: Option<usize>,
    pub quadinv_dim: Option<usize>,
    pub spectrum: Option<Vec<Rational>>,
    pub lamina: Option<usize>,
    pub symmetry_type: Option<SymmetryType>,
    pub subpolytopes: Option<Vec<ReferenceKind>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeRecord {
    pub id: String,
    pub dim: usize,
    pub status: RecordStatus,
    pub gram: Option<IntMatrix>,
    pub center: Option<RationalVector>,
    pub radius2: Option<Rational>,
    pub orbits: Vec<VertexOrbit>,
    pub expected: Expected,
    pub lamina_functional: Option<Vec<i64>>,
    pub notes: Vec<String>,
}

impl PolytopeRecord {
    pub fn is_available(&self) -> bool {
        self.status == RecordStatus::Available
    }

    fn unavailable(&self) -> Error {
        Error::InvalidParameter(format!("record {} has no data", self.id))
    }

    pub fn form(&self) -> Result<QuadraticForm> {
        QuadraticForm::from_int_matrix(self.gram.as_ref().ok_or_else(|| self.unavailable())?)
    }

    /// `Q[x - c] - ρ²` as stored.
    pub fn affine_function(&self) -> Result<AffineQuadraticFunction> {
        let center = self.center.clone().ok_or_else(|| self.unavailable())?;
        let radius2 = self.radius2.clone().ok_or_else(|| self.unavailable())?;
        AffineQuadraticFunction::new(self.form()?, center, radius2)
    }

    /// Notes of the form `discrepancy <field> printed=<a> implied=<b>`.
    pub fn discrepancies(&self) -> impl Iterator<Item = &str> {
        self.notes.iter().map(String::as_str).filter(|n| n.starts_with("discrepancy "))
    }
}

/// Sorted union of all orbit expansions; orbits must be disjoint and the
/// total must match the stated vertex count.
pub fn expand_record(r: &PolytopeRecord) -> Result<Vec<LatticePoint>> {
    if !r.is_available() {
        return Err(r.unavailable());
    }
    let mut seen = BTreeSet::new();
    for o in &r.orbits {
        if o.dim() != r.dim {
            return Err(Error::Orbit {
                text: o.text.clone(),
                reason: format!("length {} in a dimension-{} record", o.dim(), r.dim),
            });
        }
        for p in o.expand() {
            if !seen.insert(p.clone()) {
                return Err(Error::Orbit {
                    text: o.text.clone(),
                    reason: format!("vertex {p} already produced by another orbit"),
                });
            }
        }
    }
    if let Some(k) = r.expected.vertex_count {
        if k != seen.len() {
            return Err(Error::InvalidParameter(format!(
                "record {}: orbits give {} vertices, expected {k}",
                r.id,
                seen.len()
            )));
        }
    }
    Ok(seen.into_iter().collect())
}

/// The catalog compiled into the library.
pub fn builtin() -> Vec<PolytopeRecord> {
    parse_catalog(BUILTIN).expect("embedded catalog is valid")
}

pub fn builtin_text() -> &'static str {
    BUILTIN
}

pub fn load_catalog(path: &std::path::Path) -> Result<Vec<PolytopeRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Catalog {
        line: 0,
        reason: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_catalog(&text)
}

pub fn find<'a>(records: &'a [PolytopeRecord], id: &str) -> Option<&'a PolytopeRecord> {
    records.iter().find(|r| r.id == id)
}
