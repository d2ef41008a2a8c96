//! Line-oriented catalog text format.
//!
//! ```text
//! [polytope "segment"]
//! dim = 1
//! gram =
//!   1
//! center = 1/2 * (1)
//! radius2 = 1/4
//! orbit = "[0] × 1"
//! orbit = "[1] × 1"
//! expected.vertex_count = 2
//! lamina_functional = (1)
//! note = "free text"
//! ```
//!
//! Placeholder records carry `status = unavailable` right after the header.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{parse_orbit, Expected, PolytopeRecord, RecordStatus};
use crate::error::{Error, Result};
use crate::exactmath::{common_denominator, IntMatrix, Rational};
use crate::geometry::ReferenceKind;

pub fn parse_catalog(text: &str) -> Result<Vec<PolytopeRecord>> {
    let mut records = Vec::new();
    let mut cur: Option<Builder> = None;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
    while let Some((no, raw)) = lines.next() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |reason: String| Error::Catalog { line: no, reason };
        if let Some(rest) = line.strip_prefix("[polytope ") {
            if let Some(b) = cur.take() {
                records.push(b.finish()?);
            }
            let id = rest
                .strip_suffix(']')
                .and_then(unquote)
                .ok_or_else(|| err("malformed section header".into()))?;
            cur = Some(Builder::new(id.to_string(), no));
            continue;
        }
        let b = cur.as_mut().ok_or_else(|| err("key outside of a [polytope] section".into()))?;
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| err(format!("expected 'key = value', found {line:?}")))?;
        match key {
            "status" => match value {
                "unavailable" => b.rec.status = RecordStatus::Unavailable,
                "available" => b.rec.status = RecordStatus::Available,
                _ => return Err(err(format!("unknown status {value:?}"))),
            },
            "dim" => b.rec.dim = value.parse().map_err(|_| err("dim is not an integer".into()))?,
            "gram" => {
                if b.rec.dim == 0 {
                    return Err(err("gram before dim".into()));
                }
                let mut rows = Vec::with_capacity(b.rec.dim);
                for _ in 0..b.rec.dim {
                    let (rno, row) =
                        lines.next().ok_or_else(|| err("gram ended early".into()))?;
                    let row: Vec<i64> = row
                        .split_whitespace()
                        .map(i64::from_str)
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| Error::Catalog { line: rno, reason: "bad gram entry".into() })?;
                    if row.len() != b.rec.dim {
                        return Err(Error::Catalog {
                            line: rno,
                            reason: format!("gram row has {} entries, expected {}", row.len(), b.rec.dim),
                        });
                    }
                    rows.push(row);
                }
                let g = IntMatrix::from_rows(&rows).map_err(|e| err(e.to_string()))?;
                if g != g.transpose() {
                    return Err(err("gram is not symmetric".into()));
                }
                b.rec.gram = Some(g);
            }
            "center" => {
                let (den, nums) = value
                    .split_once('*')
                    .ok_or_else(|| err("center must be '<int>/<int> * (...)'".into()))?;
                let scale = parse_rational(den.trim()).ok_or_else(|| err("bad center scale".into()))?;
                let nums = parse_tuple(nums.trim()).ok_or_else(|| err("bad center vector".into()))?;
                if nums.len() != b.rec.dim {
                    return Err(err(format!("center has {} entries, expected {}", nums.len(), b.rec.dim)));
                }
                b.rec.center =
                    Some(nums.into_iter().map(|x| Rational::from_integer(x.into()) * &scale).collect());
            }
            "radius2" => {
                let r = parse_rational(value).ok_or_else(|| err("bad radius2".into()))?;
                if r.is_negative() {
                    return Err(err("negative radius2".into()));
                }
                b.rec.radius2 = Some(r);
            }
            "orbit" => {
                let t = unquote(value).ok_or_else(|| err("orbit must be quoted".into()))?;
                let o = parse_orbit(t).map_err(|e| err(e.to_string()))?;
                b.rec.orbits.push(o);
            }
            "lamina_functional" => {
                let a = parse_tuple(value).ok_or_else(|| err("bad lamina_functional".into()))?;
                if a.len() != b.rec.dim {
                    return Err(err("lamina_functional has wrong length".into()));
                }
                b.rec.lamina_functional = Some(a);
            }
            "note" => {
                let t = unquote(value).ok_or_else(|| err("note must be quoted".into()))?;
                b.rec.notes.push(t.to_string());
            }
            _ => match key.strip_prefix("expected.") {
                Some(name) => parse_expected(&mut b.rec.expected, name, value).map_err(err)?,
                None => return Err(err(format!("unknown key {key:?}"))),
            },
        }
    }
    if let Some(b) = cur.take() {
        records.push(b.finish()?);
    }
    Ok(records)
}

struct Builder {
    rec: PolytopeRecord,
    line: usize,
}

impl Builder {
    fn new(id: String, line: usize) -> Self {
        Builder {
            rec: PolytopeRecord {
                id,
                dim: 0,
                status: RecordStatus::Available,
                gram: None,
                center: None,
                radius2: None,
                orbits: Vec::new(),
                expected: Expected::default(),
                lamina_functional: None,
                notes: Vec::new(),
            },
            line,
        }
    }

    fn finish(self) -> Result<PolytopeRecord> {
        let r = self.rec;
        let err = |reason: String| Error::Catalog { line: self.line, reason: format!("{}: {reason}", r.id) };
        if r.dim == 0 {
            return Err(err("missing dim".into()));
        }
        if r.status == RecordStatus::Available {
            for (present, key) in [
                (r.gram.is_some(), "gram"),
                (r.center.is_some(), "center"),
                (r.radius2.is_some(), "radius2"),
                (!r.orbits.is_empty(), "orbit"),
            ] {
                if !present {
                    return Err(err(format!("missing {key}")));
                }
            }
        }
        Ok(r)
    }
}

fn unquote(s: &str) -> Option<&str> {
    s.strip_prefix('"')?.strip_suffix('"')
}

fn parse_rational(s: &str) -> Option<Rational> {
    Rational::from_str(s.trim()).ok()
}

fn parse_tuple(s: &str) -> Option<Vec<i64>> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    inner.split(',').map(|x| x.trim().parse().ok()).collect()
}

fn parse_expected(e: &mut Expected, name: &str, value: &str) -> std::result::Result<(), String> {
    let int = || value.parse::<usize>().map_err(|_| format!("expected.{name} is not an integer"));
    let big = || BigInt::from_str(value).map_err(|_| format!("expected.{name} is not an integer"));
    match name {
        "vertex_count" => e.vertex_count = Some(int()?),
        "iso_order" => e.iso_order = Some(big()?),
        "lattice_aut_order" => e.lattice_aut_order = Some(big()?),
        "symmetric_subgroup_k" => e.symmetric_subgroup_k = Some(int()?),
        "shortest_count" => e.shortest_count = Some(int()?),
        "quadinv_dim" => e.quadinv_dim = Some(int()?),
        "lamina" => e.lamina = Some(int()?),
        "spectrum" => {
            let inner = value
                .strip_prefix('{')
                .and_then(|v| v.strip_suffix('}'))
                .ok_or("spectrum must be '{a,b,...}'")?;
            let mut values: Vec<Rational> = inner
                .split(',')
                .map(|x| parse_rational(x).ok_or(format!("bad spectrum value {x:?}")))
                .collect::<std::result::Result<_, _>>()?;
            values.sort();
            e.spectrum = Some(values);
        }
        "symmetry_type" => e.symmetry_type = Some(value.parse()?),
        "subpolytopes" => {
            e.subpolytopes = Some(
                split_top_level(value)
                    .into_iter()
                    .map(|s| s.parse::<ReferenceKind>())
                    .collect::<std::result::Result<_, _>>()?,
            )
        }
        _ => return Err(format!("unknown expected field {name:?}")),
    }
    Ok(())
}

/// Split on commas that are not inside parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0usize, 0usize);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.retain(|x| !x.is_empty());
    out
}

pub fn serialize_catalog(records: &[PolytopeRecord]) -> String {
    let mut out = String::new();
    for (i, r) in records.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        write_record(&mut out, r);
    }
    out
}

fn write_record(out: &mut String, r: &PolytopeRecord) {
    let _ = writeln!(out, "[polytope \"{}\"]", r.id);
    if r.status == RecordStatus::Unavailable {
        out.push_str("status = unavailable\n");
    }
    let _ = writeln!(out, "dim = {}", r.dim);
    if let Some(g) = &r.gram {
        out.push_str("gram =\n");
        for i in 0..g.rows() {
            let row: Vec<String> = g.row(i).iter().map(i64::to_string).collect();
            let _ = writeln!(out, "  {}", row.join(" "));
        }
    }
    if let Some(c) = &r.center {
        let den = common_denominator(c);
        let d = Rational::from_integer(den.clone());
        let nums: Vec<String> = c.iter().map(|x| (x * &d).to_integer().to_string()).collect();
        let _ = writeln!(out, "center = 1/{den} * ({})", nums.join(","));
    }
    if let Some(r2) = &r.radius2 {
        let _ = writeln!(out, "radius2 = {}", fraction(r2));
    }
    for o in &r.orbits {
        let _ = writeln!(out, "orbit = \"{}\"", o.text);
    }
    write_expected(out, &r.expected);
    if let Some(a) = &r.lamina_functional {
        let a: Vec<String> = a.iter().map(i64::to_string).collect();
        let _ = writeln!(out, "lamina_functional = ({})", a.join(","));
    }
    for n in &r.notes {
        let _ = writeln!(out, "note = \"{n}\"");
    }
}

fn fraction(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn spectrum_value(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        fraction(q)
    }
}

fn write_expected(out: &mut String, e: &Expected) {
    let mut put = |k: &str, v: String| {
        let _ = writeln!(out, "expected.{k} = {v}");
    };
    if let Some(v) = e.vertex_count {
        put("vertex_count", v.to_string());
    }
    if let Some(v) = &e.iso_order {
        put("iso_order", v.to_string());
    }
    if let Some(v) = &e.lattice_aut_order {
        put("lattice_aut_order", v.to_string());
    }
    if let Some(v) = e.symmetric_subgroup_k {
        put("symmetric_subgroup_k", v.to_string());
    }
    if let Some(v) = e.shortest_count {
        put("shortest_count", v.to_string());
    }
    if let Some(v) = e.quadinv_dim {
        put("quadinv_dim", v.to_string());
    }
    if let Some(v) = &e.spectrum {
        let s: Vec<String> = v.iter().map(spectrum_value).collect();
        put("spectrum", format!("{{{}}}", s.join(",")));
    }
    if let Some(v) = e.lamina {
        put("lamina", v.to_string());
    }
    if let Some(v) = e.symmetry_type {
        put("symmetry_type", v.to_string());
    }
    if let Some(v) = &e.subpolytopes {
        let s: Vec<String> = v.iter().map(ToString::to_string).collect();
        put("subpolytopes", s.join(", "));
    }
}
