//! Exact verification of perfect Delaunay polytopes on integer lattices.
//!
//! The crate embeds a catalog of perfect Delaunay polytopes in dimensions 1,
//! 6, 7 and 8 and provides the exact machinery to check each entry:
//! lattice-point enumeration, the perfection rank test, automorphism groups,
//! lamina numbers and scaled-isometric sections.

pub mod budget;
pub mod error;
pub mod exactmath;
pub mod qlattice;
pub mod enumerate;
pub mod perfection;
pub mod geometry;
pub mod symmetry;
pub mod catalog;

pub use budget::Budget;
pub use error::{Error, Result};
pub use exactmath::{IntMatrix, Rational, RationalMatrix, RationalVector, SymmetricRationalMatrix};
pub use qlattice::{AffineQuadraticFunction, LatticePoint, QuadraticForm};
