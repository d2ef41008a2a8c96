//! The per-record checks run by `perfdel verify`.

use std::cell::OnceCell;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use perfdel::catalog::{expand_record, PolytopeRecord};
use perfdel::enumerate::{shortest_vectors, verify_delaunay};
use perfdel::geometry::{
    build_reference, extension_candidates, find_arithmetic_copy, find_scaled_isometric_section,
    lamina_witness_search, spectrum, symmetry_type, width_from_functional, ArithmeticOptions, ReferenceKind,
    SectionOptions,
};
use perfdel::perfection::{infer_quadratic, normalize_primitive, perfection_check};
use perfdel::symmetry::{
    coordinate_symmetric_subgroup, lattice_automorphisms_with, negative_identity, polytope_automorphisms,
    quad_inv_dim, LatticeAutGroup, LatticeOptions, PermutationGroup,
};
use perfdel::{AffineQuadraticFunction, Budget, Error, LatticePoint, QuadraticForm, Rational};

/// Search nodes granted per second of `--budget`.
pub const NODES_PER_SECOND: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    VertexCount,
    OnSphere,
    DelaunayEmptiness,
    Perfection,
    InferMatchesStored,
    Spectrum,
    ShortestCount,
    IsoOrder,
    LatticeAutOrder,
    QuadinvDim,
    SymmetricSubgroup,
    SymmetryType,
    Lamina,
    Subpolytopes,
}

impl Check {
    pub const ALL: [Check; 14] = [
        Check::VertexCount,
        Check::OnSphere,
        Check::DelaunayEmptiness,
        Check::Perfection,
        Check::InferMatchesStored,
        Check::Spectrum,
        Check::ShortestCount,
        Check::IsoOrder,
        Check::LatticeAutOrder,
        Check::QuadinvDim,
        Check::SymmetricSubgroup,
        Check::SymmetryType,
        Check::Lamina,
        Check::Subpolytopes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::VertexCount => "vertex-count",
            Check::OnSphere => "on-sphere",
            Check::DelaunayEmptiness => "delaunay-emptiness",
            Check::Perfection => "perfection",
            Check::InferMatchesStored => "infer-matches-stored",
            Check::Spectrum => "spectrum",
            Check::ShortestCount => "shortest-count",
            Check::IsoOrder => "iso-order",
            Check::LatticeAutOrder => "lattice-aut-order",
            Check::QuadinvDim => "quadinv-dim",
            Check::SymmetricSubgroup => "symmetric-subgroup",
            Check::SymmetryType => "symmetry-type",
            Check::Lamina => "lamina",
            Check::Subpolytopes => "subpolytopes",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown check {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Budget,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
            Status::Budget => "BUDGET",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub record: String,
    pub check: Check,
    pub expected: String,
    pub computed: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Wall time, only filled in when timings are requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    /// Seconds per budgeted check, converted to search nodes.
    pub budget_seconds: u64,
    pub timings: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { budget_seconds: 60, timings: false }
    }
}

impl Settings {
    pub fn lattice_budget(&self) -> Budget {
        Budget::nodes(self.budget_seconds.saturating_mul(NODES_PER_SECOND))
    }

    /// Each section search gets twice the lattice allowance.
    pub fn section_budget(&self) -> Budget {
        Budget::nodes(self.budget_seconds.saturating_mul(2 * NODES_PER_SECOND))
    }
}

struct Outcome {
    expected: String,
    computed: String,
    status: Status,
    notes: Vec<String>,
}

impl Outcome {
    fn new(expected: impl ToString, computed: impl ToString, status: Status) -> Self {
        Outcome { expected: expected.to_string(), computed: computed.to_string(), status, notes: Vec::new() }
    }

    fn compare<T: PartialEq + ToString>(expected: Option<T>, computed: T) -> Self {
        match expected {
            Some(e) => {
                let status = if e == computed { Status::Pass } else { Status::Fail };
                Outcome::new(e.to_string(), computed.to_string(), status)
            }
            None => Outcome::new("-", computed.to_string(), Status::Skipped).note("no stored value"),
        }
    }

    fn error(e: &Error) -> Self {
        Outcome::new("-", format!("error: {e}"), error_status(e))
    }

    fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }
}

/// Everything computed once per record and shared between checks.
struct Subject<'a> {
    record: &'a PolytopeRecord,
    settings: &'a Settings,
    vertices: Vec<LatticePoint>,
    form: QuadraticForm,
    function: AffineQuadraticFunction,
    iso: OnceCell<Result<PermutationGroup, Error>>,
    lattice: OnceCell<Result<LatticeAutGroup, Error>>,
}

impl Subject<'_> {
    fn iso(&self) -> &Result<PermutationGroup, Error> {
        self.iso.get_or_init(|| polytope_automorphisms(&self.form, &self.vertices))
    }

    fn lattice(&self) -> &Result<LatticeAutGroup, Error> {
        self.lattice.get_or_init(|| {
            let opts = LatticeOptions { budget: self.settings.lattice_budget(), ..Default::default() };
            lattice_automorphisms_with(&self.form, opts)
        })
    }
}

/// Run `checks` on one record, in the given order.
pub fn run_record(record: &PolytopeRecord, checks: &[Check], settings: &Settings) -> Vec<CheckResult> {
    let result = |check: Check, o: Outcome, millis: Option<u64>| CheckResult {
        record: record.id.clone(),
        check,
        expected: o.expected,
        computed: o.computed,
        status: o.status,
        notes: o.notes,
        millis,
    };
    if !record.is_available() {
        return checks
            .iter()
            .map(|&c| result(c, Outcome::new("-", "-", Status::Skipped).note("source unavailable"), None))
            .collect();
    }
    let subject = expand_record(record).and_then(|vertices| {
        Ok(Subject {
            record,
            settings,
            vertices,
            form: record.form()?,
            function: record.affine_function()?,
            iso: OnceCell::new(),
            lattice: OnceCell::new(),
        })
    });
    let subject = match subject {
        Ok(s) => s,
        Err(e) => {
            let msg = format!("cannot load record: {e}");
            return checks.iter().map(|&c| result(c, Outcome::new("-", &msg, Status::Fail), None)).collect();
        }
    };
    checks
        .iter()
        .map(|&c| {
            let start = Instant::now();
            let mut o = run_check(&subject, c);
            let millis = settings.timings.then(|| start.elapsed().as_millis() as u64);
            o.notes.extend(record_notes(record, c));
            result(c, o, millis)
        })
        .collect()
}

/// Stored annotations that concern a check.
fn record_notes(record: &PolytopeRecord, check: Check) -> Vec<String> {
    let key = match check {
        Check::IsoOrder => "discrepancy iso_order",
        Check::OnSphere => "discrepancy radius2",
        Check::VertexCount => "discrepancy orbit",
        Check::Spectrum => "printed spectrum",
        _ => return Vec::new(),
    };
    record.notes.iter().filter(|n| n.starts_with(key)).cloned().collect()
}

fn run_check(s: &Subject, check: Check) -> Outcome {
    let r = match check {
        Check::VertexCount => Ok(Outcome::compare(s.record.expected.vertex_count, s.vertices.len())),
        Check::OnSphere => on_sphere(s),
        Check::DelaunayEmptiness => delaunay(s),
        Check::Perfection => perfection(s),
        Check::InferMatchesStored => infer_matches(s),
        Check::Spectrum => spectrum_check(s),
        Check::ShortestCount => {
            shortest_vectors(&s.form).map(|m| Outcome::compare(s.record.expected.shortest_count, m.minimizers.len()))
        }
        Check::IsoOrder => iso_order(s),
        Check::LatticeAutOrder => lattice_order(s),
        Check::QuadinvDim => quadinv(s),
        Check::SymmetricSubgroup => Ok(symmetric_subgroup(s)),
        Check::SymmetryType => {
            let t = symmetry_type(&s.vertices, &s.function.center);
            Ok(Outcome::compare(s.record.expected.symmetry_type.map(|x| x.to_string()), t.to_string()))
        }
        Check::Lamina => Ok(lamina(s)),
        Check::Subpolytopes => Ok(subpolytopes(s)),
    };
    r.unwrap_or_else(|e| Outcome::error(&e))
}

fn fmt_set(v: &[Rational]) -> String {
    let items: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(","))
}

fn error_status(e: &Error) -> Status {
    if matches!(e, Error::BudgetExceeded { .. }) {
        Status::Budget
    } else {
        Status::Fail
    }
}

/// FAIL outranks BUDGET, which outranks PASS.
fn worsen(status: &mut Status, new: Status) {
    if new == Status::Fail || (new == Status::Budget && *status == Status::Pass) {
        *status = new;
    }
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn on_sphere(s: &Subject) -> Result<Outcome, Error> {
    let mut on = 0;
    for v in &s.vertices {
        if s.function.eval_point(v)?.is_zero() {
            on += 1;
        }
    }
    let n = s.vertices.len();
    Ok(Outcome::new(format!("{n}/{n}"), format!("{on}/{n}"), pass_if(on == n)))
}

fn delaunay(s: &Subject) -> Result<Outcome, Error> {
    let v = verify_delaunay(&s.function, &s.vertices)?;
    let expected = format!("interior 0, boundary {}", s.vertices.len());
    let computed = format!("interior {}, boundary {}", v.interior.len(), v.boundary_count);
    let mut o = Outcome::new(expected, computed, pass_if(v.pass));
    if let Some((p, _)) = v.interior.first() {
        o = o.note(format!("interior point {p}"));
    }
    if let Some(p) = v.unexpected.first() {
        o = o.note(format!("unlisted boundary point {p}"));
    }
    Ok(o)
}

fn perfection(s: &Subject) -> Result<Outcome, Error> {
    let v = perfection_check(&s.vertices)?;
    Ok(Outcome::new(1, v.nullspace_dimension, pass_if(v.is_perfect)).note("nullspace dimension"))
}

fn infer_matches(s: &Subject) -> Result<Outcome, Error> {
    let inferred = infer_quadratic(&s.vertices)?;
    let stored = normalize_primitive(&s.function);
    let mut diffs = Vec::new();
    if inferred.form != stored.form {
        diffs.push("gram");
    }
    if inferred.center != stored.center {
        diffs.push("center");
    }
    if inferred.radius2 != stored.radius2 {
        diffs.push("radius2");
    }
    let computed = if diffs.is_empty() { "equal".to_string() } else { format!("differs in {}", diffs.join(", ")) };
    Ok(Outcome::new("equal", computed, pass_if(diffs.is_empty())))
}

fn spectrum_check(s: &Subject) -> Result<Outcome, Error> {
    let sp = spectrum(&s.form, &s.vertices)?;
    let expected = s.record.expected.spectrum.as_deref();
    let mut o = Outcome::compare(expected.map(fmt_set), fmt_set(&sp));
    if o.status == Status::Fail {
        // report, without accepting, agreement up to the common factor of the values
        let content = sp.iter().fold(BigInt::zero(), |g, x| g.gcd(&x.to_integer()));
        if content > BigInt::one() {
            let c = Rational::from_integer(content.clone());
            let scaled: Vec<Rational> = sp.iter().map(|x| x / &c).collect();
            if expected == Some(scaled.as_slice()) {
                o = o.note(format!("stored values equal the computed ones divided by {content}"));
            }
        }
    }
    Ok(o)
}

fn iso_order(s: &Subject) -> Result<Outcome, Error> {
    let g = s.iso().as_ref().map_err(Clone::clone)?;
    let mut o = Outcome::compare(s.record.expected.iso_order.as_ref().map(ToString::to_string), g.order.to_string());
    if !g.is_certified() {
        o.status = Status::Fail;
        o = o.note(format!("{} generators have no integral affine extension", g.certification_failures));
    }
    let chain = g.stabilizer_chain().order();
    if chain != g.order {
        o.status = Status::Fail;
        o = o.note(format!("Schreier-Sims order {chain} disagrees"));
    }
    Ok(o)
}

/// `|O| / |Iso|` when both are known and it divides evenly.
fn ratio_note(s: &Subject, order: &BigUint) -> Option<String> {
    let iso = s.iso().as_ref().ok()?;
    if iso.order.is_zero() || !(order % &iso.order).is_zero() {
        return None;
    }
    Some(format!("|O|/|Iso| = {}", order / &iso.order))
}

fn lattice_order(s: &Subject) -> Result<Outcome, Error> {
    let g = s.lattice().as_ref().map_err(Clone::clone)?;
    let o = Outcome::compare(s.record.expected.lattice_aut_order.as_ref().map(ToString::to_string), g.order.to_string());
    Ok(match ratio_note(s, &g.order) {
        Some(n) => o.note(n),
        None => o,
    })
}

fn quadinv(s: &Subject) -> Result<Outcome, Error> {
    let n = s.record.dim;
    let (gens, source) = match s.lattice() {
        Ok(g) => (g.generators.clone(), "generators: lattice automorphisms"),
        Err(_) => {
            let iso = s.iso().as_ref().map_err(Clone::clone)?;
            let mut gens = iso.linear_parts.clone();
            gens.push(negative_identity(n));
            (gens, "generators: isometry linear parts and -I")
        }
    };
    Ok(Outcome::compare(s.record.expected.quadinv_dim, quad_inv_dim(n, &gens)).note(source))
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |a, i| a * BigUint::from(i))
}

fn symmetric_subgroup(s: &Subject) -> Outcome {
    let w = coordinate_symmetric_subgroup(&s.form);
    let computed = format!("S{} on coordinates {:?}", w.k, w.subset.iter().map(|i| i + 1).collect::<Vec<_>>());
    let Some(k) = s.record.expected.symmetric_subgroup_k else {
        return Outcome::new("-", computed, Status::Skipped).note("no stored value");
    };
    let expected = format!("S{k}");
    if w.k >= k {
        return Outcome::new(expected, computed, Status::Pass);
    }
    match s.lattice() {
        Ok(g) if (&g.order % factorial(k)).is_zero() => Outcome::new(expected, computed, Status::Skipped)
            .note(format!("unwitnessed: no coordinate action; {k}! divides |O| = {}", g.order)),
        Ok(g) => Outcome::new(expected, computed, Status::Fail).note(format!("{k}! does not divide |O| = {}", g.order)),
        Err(e) => Outcome::new(expected, computed, Status::Skipped).note(format!("unwitnessed; |O| unavailable: {e}")),
    }
}

fn lamina(s: &Subject) -> Outcome {
    let found = lamina_witness_search(&s.vertices);
    let computed = match found.lamina_number() {
        Some(l) => l.to_string(),
        None => ">=4".to_string(),
    };
    let expected = s.record.expected.lamina;
    let mut o = Outcome::compare(expected.map(|l| l.to_string()), computed);
    if let (Some(a), Some(l)) = (&s.record.lamina_functional, expected) {
        let w = width_from_functional(&s.vertices, a) + 1;
        if w != l as i64 {
            o.status = Status::Fail;
            o = o.note(format!("stored functional gives {w} laminae"));
        } else {
            o = o.note("stored functional attains it");
        }
    }
    o
}

const MAXIMALITY_NOTE: &str = "maximal means no copy of the next family member (one-step check)";
const CUBE_NOTE: &str = "H(k) read as the k-cube and 1/2H(k) as the k-semicube";
const ARITHMETIC_NOTE: &str = "cube, semicube and J(n,s) copies are up to affine lattice equivalence";

fn is_metric(kind: ReferenceKind) -> bool {
    matches!(kind, ReferenceKind::G6 | ReferenceKind::G7 | ReferenceKind::Tope35)
}

enum Found {
    Yes(String),
    No,
}

fn search(s: &Subject, kind: ReferenceKind, first_images: &Option<Vec<usize>>) -> Result<Found, Error> {
    let target = build_reference(kind)?;
    if is_metric(kind) {
        let gram = s.record.gram.as_ref().expect("available record");
        let opts = SectionOptions { require_section: true, budget: s.settings.section_budget() };
        Ok(match find_scaled_isometric_section(&target, gram, &s.vertices, opts)? {
            Some(sec) => Found::Yes(format!("{kind} (λ={})", sec.lambda)),
            None => Found::No,
        })
    } else {
        let opts = ArithmeticOptions {
            budget: s.settings.section_budget(),
            first_images: first_images.clone(),
            saturated: false,
        };
        Ok(match find_arithmetic_copy(&target, &s.vertices, &opts)? {
            Some(_) => Found::Yes(kind.to_string()),
            None => Found::No,
        })
    }
}

fn subpolytopes(s: &Subject) -> Outcome {
    let Some(listed) = &s.record.expected.subpolytopes else {
        return Outcome::new("-", "-", Status::Skipped).note("no stored value");
    };
    let expected: Vec<String> = listed.iter().map(ToString::to_string).collect();
    // host isometries permute copies, so the first image can be an orbit representative
    let first_images = match s.iso() {
        Ok(g) if g.is_certified() => Some(g.orbits().iter().map(|o| o[0]).collect()),
        _ => None,
    };
    let host_count = s.vertices.len();
    let mut computed = Vec::new();
    let mut notes = Vec::new();
    let mut status = Status::Pass;
    for &kind in listed {
        match search(s, kind, &first_images) {
            Ok(Found::Yes(label)) => computed.push(label),
            Ok(Found::No) => {
                computed.push(format!("no {kind}"));
                worsen(&mut status, Status::Fail);
                continue;
            }
            Err(e) => {
                computed.push(format!("{kind}?"));
                notes.push(format!("search for {kind}: {e}"));
                worsen(&mut status, error_status(&e));
                continue;
            }
        }
        for ext in extension_candidates(kind) {
            // a proper subpolytope has fewer vertices than the host
            if ext.vertex_count() >= host_count.into() {
                continue;
            }
            match search(s, ext, &first_images) {
                Ok(Found::No) => {}
                Ok(Found::Yes(label)) => {
                    notes.push(format!("{kind} extends to {label}"));
                    worsen(&mut status, Status::Fail);
                }
                Err(e) => {
                    notes.push(format!("extension {ext} of {kind}: {e}"));
                    worsen(&mut status, error_status(&e));
                }
            }
        }
    }
    notes.push(MAXIMALITY_NOTE.to_string());
    if listed.iter().any(|k| matches!(k, ReferenceKind::Cube(_) | ReferenceKind::Semicube(_))) {
        notes.push(CUBE_NOTE.to_string());
    }
    if listed.iter().any(|&k| !is_metric(k)) {
        notes.push(ARITHMETIC_NOTE.to_string());
    }
    Outcome { expected: expected.join(", "), computed: computed.join(", "), status, notes }
}
