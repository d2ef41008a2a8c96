//! Reference polytopes: hypersimplices, cubes, semicubes, cross-polytopes,
//! the Gosset polytopes and the Υⁿ series, plus the Aₙ/Dₙ Delaunay cells.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::catalog::{self, parse_orbit, PolytopeRecord};
use crate::enumerate::{verify_delaunay, DelaunayVerdict};
use crate::error::{Error, Result};
use crate::exactmath::{int_vector, row_reduce, IntMatrix, Rational, RationalMatrix};
use crate::qlattice::{an_form, AffineQuadraticFunction, LatticePoint, QuadraticForm};

/// Which Dₙ cell to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DCell {
    /// Cross-polytope about the odd point e₁.
    Cross,
    /// Even-weight vertices of the unit cube.
    Semicube,
    /// Odd-weight vertices of the unit cube, translated by eₙ.
    ShiftedSemicube,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReferenceKind {
    /// {0,1}-vectors of length n with coordinate sum s.
    Hypersimplex { n: usize, s: usize },
    Semicube(usize),
    Cross(usize),
    Cube(usize),
    G6,
    G7,
    Tope35,
    Upsilon(usize),
    /// {0,1}-vectors of length n with sum q-1 or q.
    ASlab { n: usize, q: usize },
    DCell { n: usize, cell: DCell },
}

impl fmt::Display for ReferenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ReferenceKind::Hypersimplex { n, s } => write!(f, "J({n},{s})"),
            ReferenceKind::Semicube(k) => write!(f, "1/2H({k})"),
            ReferenceKind::Cross(k) => write!(f, "cross({k})"),
            ReferenceKind::Cube(k) => write!(f, "H({k})"),
            ReferenceKind::G6 => f.write_str("G6"),
            ReferenceKind::G7 => f.write_str("G7"),
            ReferenceKind::Tope35 => f.write_str("35-tope"),
            ReferenceKind::Upsilon(n) => write!(f, "Upsilon({n})"),
            ReferenceKind::ASlab { n, q } => write!(f, "A_slab({n},{q})"),
            ReferenceKind::DCell { n, cell } => {
                let c = match cell {
                    DCell::Cross => "cross",
                    DCell::Semicube => "semicube",
                    DCell::ShiftedSemicube => "shifted-semicube",
                };
                write!(f, "D_cell({n},{c})")
            }
        }
    }
}

impl FromStr for ReferenceKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let bad = || format!("unknown polytope {s:?}");
        let args = |prefix: &str| -> Option<Vec<usize>> {
            let inner = s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
            inner.split(',').map(|x| x.trim().parse().ok()).collect()
        };
        let one = |prefix: &str| args(prefix).filter(|a| a.len() == 1).map(|a| a[0]);
        let two = |prefix: &str| args(prefix).filter(|a| a.len() == 2).map(|a| (a[0], a[1]));
        match s {
            "G6" => return Ok(ReferenceKind::G6),
            "G7" => return Ok(ReferenceKind::G7),
            "35-tope" => return Ok(ReferenceKind::Tope35),
            _ => {}
        }
        if let Some(k) = one("1/2H") {
            return Ok(ReferenceKind::Semicube(k));
        }
        if let Some(k) = one("H") {
            return Ok(ReferenceKind::Cube(k));
        }
        if let Some(k) = one("cross") {
            return Ok(ReferenceKind::Cross(k));
        }
        if let Some(n) = one("Upsilon") {
            return Ok(ReferenceKind::Upsilon(n));
        }
        if let Some((n, s)) = two("J") {
            return Ok(ReferenceKind::Hypersimplex { n, s });
        }
        if let Some((n, q)) = two("A_slab") {
            return Ok(ReferenceKind::ASlab { n, q });
        }
        if let Some(inner) = s.strip_prefix("D_cell(").and_then(|x| x.strip_suffix(')')) {
            let (n, c) = inner.split_once(',').ok_or_else(bad)?;
            let n = n.trim().parse().map_err(|_| bad())?;
            let cell = match c.trim() {
                "cross" => DCell::Cross,
                "semicube" => DCell::Semicube,
                "shifted-semicube" => DCell::ShiftedSemicube,
                _ => return Err(bad()),
            };
            return Ok(ReferenceKind::DCell { n, cell });
        }
        Err(bad())
    }
}

impl ReferenceKind {
    /// Vertex count without building the polytope.
    pub fn vertex_count(&self) -> BigInt {
        let two_pow = |k: usize| BigInt::from(2).pow(k as u32);
        match *self {
            ReferenceKind::Hypersimplex { n, s } => binomial(n, s),
            ReferenceKind::Semicube(k) => if k == 0 { BigInt::from(1) } else { two_pow(k - 1) },
            ReferenceKind::Cross(k) => BigInt::from(2 * k),
            ReferenceKind::Cube(k) => two_pow(k),
            ReferenceKind::G6 => BigInt::from(27),
            ReferenceKind::G7 => BigInt::from(56),
            ReferenceKind::Tope35 => BigInt::from(35),
            ReferenceKind::Upsilon(n) => BigInt::from(n * (n + 3) / 2),
            ReferenceKind::ASlab { n, q } => {
                let lower = if q == 0 { BigInt::zero() } else { binomial(n, q - 1) };
                lower + binomial(n, q)
            }
            ReferenceKind::DCell { n, cell: DCell::Cross } => BigInt::from(2 * n),
            ReferenceKind::DCell { n, .. } => two_pow(n.saturating_sub(1)),
        }
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferencePolytope {
    pub kind: ReferenceKind,
    pub form: QuadraticForm,
    pub vertices: Vec<LatticePoint>,
}

impl ReferencePolytope {
    /// Pairwise norms `Q[vᵢ - vⱼ]` under the natural form, scaled to integers.
    pub fn distance_matrix(&self) -> Vec<Vec<i64>> {
        let g = self.form.integer_gram().expect("reference forms are integral");
        distance_matrix(&g, &self.vertices)
    }
}

pub fn distance_matrix(gram: &IntMatrix, vertices: &[LatticePoint]) -> Vec<Vec<i64>> {
    let m = vertices.len();
    let mut d = vec![vec![0; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let diff: Vec<i64> =
                vertices[i].0.iter().zip(&vertices[j].0).map(|(a, b)| a - b).collect();
            let gd = gram.mul_vec(&diff);
            let v: i64 = diff.iter().zip(&gd).map(|(a, b)| a * b).sum();
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    d
}

/// 0/1 vectors of length `n` whose weight passes `keep`, lexicographically.
fn binary_vectors(n: usize, keep: impl Fn(usize) -> bool) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        if keep(mask.count_ones() as usize) {
            out.push(LatticePoint((0..n).map(|i| ((mask >> (n - 1 - i)) & 1) as i64).collect()));
        }
    }
    out
}

fn catalog_polytope(kind: ReferenceKind, id: &str) -> Result<ReferencePolytope> {
    let records = catalog::builtin();
    let r: &PolytopeRecord = catalog::find(&records, id)
        .ok_or_else(|| Error::InvalidParameter(format!("catalog has no {id}")))?;
    Ok(ReferencePolytope { kind, form: r.form()?, vertices: catalog::expand_record(r)? })
}

/// Orbit strings of Υⁿ.
pub fn upsilon_orbits(n: usize) -> Vec<String> {
    let m = n - 1;
    vec![
        format!("[1^{m};{}] × 1", -(n as i64 - 3)),
        format!("[0,1^{};{}] × {m}", n - 2, -(n as i64 - 4)),
        format!("[1^2,0^{};-1] × {}", n - 3, m * (m - 1) / 2),
        format!("[0^{n}] × 1"),
        format!("[1,0^{};0] × {m}", n - 2),
        format!("[-1,0^{};1] × {m}", n - 2),
    ]
}

/// Vertices of Υⁿ, sorted.
pub fn upsilon_vertices(n: usize) -> Result<Vec<LatticePoint>> {
    if n < 7 {
        return Err(Error::InvalidParameter(format!("Upsilon(n) needs n >= 7, got {n}")));
    }
    let mut out = Vec::new();
    for o in upsilon_orbits(n) {
        out.extend(parse_orbit(&o)?.expand());
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Coordinates of Dₙ used for cells: basis e₁+e₂, e₂-e₁, e₃-e₂, …, eₙ-eₙ₋₁
/// (columns of the returned matrix).
pub fn dn_basis(n: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    m[(0, 0)] = 1;
    if n > 1 {
        m[(1, 0)] = 1;
    }
    for k in 1..n {
        m[(k, k)] = 1;
        m[(k - 1, k)] = -1;
    }
    m
}

fn dn_cell(n: usize, cell: DCell) -> Result<ReferencePolytope> {
    if n < 2 {
        return Err(Error::InvalidParameter("D_n cells need n >= 2".into()));
    }
    let euclid: Vec<Vec<i64>> = match cell {
        DCell::Cross => {
            let mut pts = vec![vec![0; n], {
                let mut v = vec![0; n];
                v[0] = 2;
                v
            }];
            for i in 1..n {
                for s in [-1, 1] {
                    let mut v = vec![0; n];
                    v[0] = 1;
                    v[i] = s;
                    pts.push(v);
                }
            }
            pts
        }
        DCell::Semicube => binary_vectors(n, |w| w % 2 == 0).into_iter().map(|p| p.0).collect(),
        DCell::ShiftedSemicube => binary_vectors(n, |w| w % 2 == 1)
            .into_iter()
            .map(|p| {
                let mut v = p.0;
                v[n - 1] += 1;
                v
            })
            .collect(),
    };
    let b = dn_basis(n);
    let (adj, det) = b.adjugate().expect("basis is nonsingular");
    let mut vertices = Vec::with_capacity(euclid.len());
    for p in &euclid {
        let z = adj.mul_vec(p);
        if z.iter().any(|x| x % det != 0) {
            return Err(Error::InvalidParameter(format!("{p:?} is not in D_{n}")));
        }
        vertices.push(LatticePoint(z.iter().map(|x| x / det).collect()));
    }
    vertices.sort();
    let form = QuadraticForm::from_int_matrix(&b.transpose().mul(&b))?;
    Ok(ReferencePolytope { kind: ReferenceKind::DCell { n, cell }, form, vertices })
}

pub fn build_reference(kind: ReferenceKind) -> Result<ReferencePolytope> {
    let bad = |msg: &str| Err(Error::InvalidParameter(format!("{kind}: {msg}")));
    let p = match kind {
        ReferenceKind::Hypersimplex { n, s } => {
            if n == 0 || s > n {
                return bad("need 0 <= s <= n and n >= 1");
            }
            ReferencePolytope { kind, form: an_form(n), vertices: binary_vectors(n, |w| w == s) }
        }
        ReferenceKind::Semicube(k) | ReferenceKind::Cube(k) | ReferenceKind::Cross(k) => {
            if k == 0 || k > 16 {
                return bad("size must be in 1..=16");
            }
            let vertices = match kind {
                ReferenceKind::Semicube(_) => binary_vectors(k, |w| w % 2 == 0),
                ReferenceKind::Cube(_) => binary_vectors(k, |_| true),
                _ => {
                    let mut v = Vec::new();
                    for i in 0..k {
                        for s in [-1, 1] {
                            let mut x = vec![0; k];
                            x[i] = s;
                            v.push(LatticePoint(x));
                        }
                    }
                    v.sort();
                    v
                }
            };
            ReferencePolytope { kind, form: QuadraticForm::identity(k), vertices }
        }
        ReferenceKind::G6 => catalog_polytope(kind, "G6")?,
        ReferenceKind::G7 => catalog_polytope(kind, "G7")?,
        ReferenceKind::Tope35 => catalog_polytope(kind, "35-tope")?,
        ReferenceKind::Upsilon(n) => {
            let vertices = upsilon_vertices(n)?;
            let f = crate::perfection::infer_quadratic(&vertices)?;
            ReferencePolytope { kind, form: f.form, vertices }
        }
        ReferenceKind::ASlab { n, q } => {
            if n == 0 || q == 0 || q > n {
                return bad("need 1 <= q <= n");
            }
            ReferencePolytope { kind, form: an_form(n), vertices: binary_vectors(n, |w| w + 1 == q || w == q) }
        }
        ReferenceKind::DCell { n, cell } => dn_cell(n, cell)?,
    };
    Ok(p)
}

/// Center and radius of the sphere through `vertices` for a given quadratic
/// part: solve `2 B(v, c) - κ = Q[v]` for `(c, κ)`, then `ρ² = Q[c] - κ`.
pub fn fit_sphere(form: &QuadraticForm, vertices: &[LatticePoint]) -> Result<AffineQuadraticFunction> {
    let n = form.dim();
    let g = form.gram().as_matrix();
    let mut rows = Vec::with_capacity(vertices.len());
    for v in vertices {
        let x = int_vector(v.coords());
        let gx = g.mul_vec(&x)?;
        let mut row: Vec<Rational> = gx.iter().map(|t| t * Rational::from_integer(2.into())).collect();
        row.push(Rational::from_integer((-1).into()));
        row.push(-form.eval_form(&x)?);
        rows.push(row);
    }
    // homogeneous system in (c, κ, 1)
    let red = row_reduce(&RationalMatrix::from_rows(rows)?);
    if red.nullspace.len() != 1 || red.nullspace[0][n + 1].is_zero() {
        return Err(Error::InvalidParameter("vertices do not determine a unique sphere".into()));
    }
    let v = &red.nullspace[0];
    let scale = v[n + 1].clone();
    let center: Vec<Rational> = v[..n].iter().map(|x| x / &scale).collect();
    let kappa = &v[n] / &scale;
    let radius2 = form.eval_form(&center)? - kappa;
    AffineQuadraticFunction::new(form.clone(), center, radius2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellVerdict {
    pub kind: ReferenceKind,
    pub function: AffineQuadraticFunction,
    pub delaunay: DelaunayVerdict,
}

impl CellVerdict {
    pub fn pass(&self) -> bool {
        self.delaunay.pass
    }
}

/// Build an Aₙ slab or Dₙ cell, fit its sphere, and run the Delaunay check.
pub fn verify_an_dn_cell(kind: ReferenceKind) -> Result<CellVerdict> {
    match kind {
        ReferenceKind::ASlab { n, .. } | ReferenceKind::DCell { n, .. } if n <= 8 => {}
        _ => return Err(Error::InvalidParameter(format!("{kind} is not an A_n/D_n cell of supported size"))),
    }
    let p = build_reference(kind)?;
    let function = fit_sphere(&p.form, &p.vertices)?;
    let delaunay = verify_delaunay(&function, &p.vertices)?;
    Ok(CellVerdict { kind, function, delaunay })
}
