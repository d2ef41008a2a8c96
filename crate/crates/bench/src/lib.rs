//! Shared fixtures for the benchmarks.

use perfdel::catalog::{builtin, expand_record, find};
use perfdel::{AffineQuadraticFunction, IntMatrix, LatticePoint, QuadraticForm};

pub struct Fixture {
    pub gram: IntMatrix,
    pub form: QuadraticForm,
    pub function: AffineQuadraticFunction,
    pub vertices: Vec<LatticePoint>,
}

/// A built-in record with its vertices expanded.
pub fn fixture(id: &str) -> Fixture {
    let cat = builtin();
    let r = find(&cat, id).unwrap_or_else(|| panic!("no record {id}"));
    Fixture {
        gram: r.gram.clone().unwrap(),
        form: r.form().unwrap(),
        function: r.affine_function().unwrap(),
        vertices: expand_record(r).unwrap(),
    }
}
