//! The Υⁿ series driver.

use std::fmt::Write;

use perfdel::catalog::{builtin, expand_record, find};
use perfdel::enumerate::verify_delaunay;
use perfdel::geometry::upsilon_vertices;
use perfdel::perfection::{infer_quadratic, normalize_primitive, perfection_check};
use perfdel::{AffineQuadraticFunction, Result};

#[derive(Debug, Clone)]
pub struct SeriesOutcome {
    pub n: usize,
    pub vertex_count: usize,
    pub nullspace_dimension: usize,
    pub function: Option<AffineQuadraticFunction>,
    pub delaunay: bool,
    /// For n = 7, whether vertices and function equal the 35-tope record.
    pub matches_35_tope: Option<bool>,
}

impl SeriesOutcome {
    pub fn ok(&self) -> bool {
        self.nullspace_dimension == 1
            && self.delaunay
            && self.vertex_count == self.n * (self.n + 3) / 2
            && self.matches_35_tope != Some(false)
    }
}

pub fn run_series(n: usize) -> Result<SeriesOutcome> {
    let vertices = upsilon_vertices(n)?;
    let perfection = perfection_check(&vertices)?;
    let function = if perfection.is_perfect { Some(infer_quadratic(&vertices)?) } else { None };
    let delaunay = match &function {
        Some(f) => verify_delaunay(f, &vertices)?.pass,
        None => false,
    };
    let matches_35_tope = if n == 7 {
        let cat = builtin();
        let rec = find(&cat, "35-tope").expect("built-in record");
        let stored = normalize_primitive(&rec.affine_function()?);
        Some(expand_record(rec)? == vertices && function.as_ref() == Some(&stored))
    } else {
        None
    };
    Ok(SeriesOutcome {
        n,
        vertex_count: vertices.len(),
        nullspace_dimension: perfection.nullspace_dimension,
        function,
        delaunay,
        matches_35_tope,
    })
}

pub fn format_function(f: &AffineQuadraticFunction) -> String {
    let mut out = String::from("gram =\n");
    let g = f.form.gram().as_matrix();
    for i in 0..f.dim() {
        let row: Vec<String> = g.row(i).iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "  {}", row.join(" "));
    }
    let (den, nums) = f.center_parts();
    let nums: Vec<String> = nums.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "center = 1/{den} * ({})", nums.join(","));
    let _ = writeln!(out, "radius2 = {}", f.radius2);
    out
}

impl std::fmt::Display for SeriesOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Upsilon({})", self.n)?;
        writeln!(f, "vertices = {} (n(n+3)/2 = {})", self.vertex_count, self.n * (self.n + 3) / 2)?;
        writeln!(f, "nullspace dimension = {}", self.nullspace_dimension)?;
        writeln!(f, "perfect = {}", self.nullspace_dimension == 1)?;
        writeln!(f, "delaunay = {}", self.delaunay)?;
        if let Some(func) = &self.function {
            f.write_str(&format_function(func))?;
        }
        if let Some(m) = self.matches_35_tope {
            writeln!(f, "matches 35-tope record = {m}")?;
        }
        Ok(())
    }
}
