use std::collections::BTreeSet;

use proptest::prelude::*;

use perfdel::catalog::{builtin, expand_record, find, parse_catalog, parse_orbit, serialize_catalog};
use perfdel::enumerate::verify_delaunay;
use perfdel::perfection::{infer_quadratic, normalize_primitive, perfection_check};

#[test]
fn built_in_catalog_shape() {
    let cat = builtin();
    assert_eq!(cat.len(), 31);
    assert_eq!(cat.iter().filter(|r| r.is_available()).count(), 29);
    let ids: Vec<&str> = cat.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(&ids[..4], ["segment", "G6", "G7", "35-tope"]);
    for i in 1..=27 {
        assert!(ids.contains(&format!("D8_{i}").as_str()));
    }
    assert!(!find(&cat, "D8_4").unwrap().is_available());
    assert!(!find(&cat, "D8_25").unwrap().is_available());
}

#[test]
fn vertex_counts() {
    let cat = builtin();
    let count = |id: &str| expand_record(find(&cat, id).unwrap()).unwrap().len();
    assert_eq!(count("segment"), 2);
    assert_eq!(count("G6"), 27);
    assert_eq!(count("G7"), 56);
    assert_eq!(count("35-tope"), 35);
    assert_eq!(count("D8_22"), 79);
    for r in cat.iter().filter(|r| r.dim == 8 && r.is_available()) {
        let n = expand_record(r).unwrap().len();
        assert!((44..=79).contains(&n), "{} has {n}", r.id);
    }
}

#[test]
fn records_are_perfect_and_circumscribed() {
    for r in builtin().iter().filter(|r| r.is_available()) {
        let v = expand_record(r).unwrap();
        let e = r.affine_function().unwrap();
        assert!(e.all_on_sphere(&v).unwrap(), "{}", r.id);
        let p = perfection_check(&v).unwrap();
        assert_eq!(p.nullspace_dimension, 1, "{}", r.id);
        assert_eq!(infer_quadratic(&v).unwrap(), normalize_primitive(&e), "{}", r.id);
    }
}

#[test]
fn records_are_delaunay() {
    for r in builtin().iter().filter(|r| r.is_available()) {
        let v = expand_record(r).unwrap();
        let d = verify_delaunay(&r.affine_function().unwrap(), &v).unwrap();
        assert!(d.pass, "{}: {:?}", r.id, d);
        assert_eq!(d.boundary_count, v.len());
    }
}

#[test]
fn round_trip_is_stable() {
    let text = serialize_catalog(&builtin());
    let again = parse_catalog(&text).unwrap();
    assert_eq!(again, builtin());
    assert_eq!(serialize_catalog(&again), text);
}

fn block_text(block: &[i64]) -> String {
    block.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

proptest! {
    #[test]
    fn orbit_checksum_law(blocks in prop::collection::vec(prop::collection::vec(-2i64..=2, 1..5), 1..4)) {
        let body = blocks.iter().map(|b| block_text(b)).collect::<Vec<_>>().join(";");
        // an unlikely multiplicity is rejected, and the error reports the true one
        let probe = parse_orbit(&format!("[{body}] × 100000"));
        let count: usize = blocks
            .iter()
            .map(|b| b.iter().permutations_distinct())
            .product();
        prop_assert!(probe.is_err());
        let o = parse_orbit(&format!("[{body}] × {count}")).unwrap();
        let pts = o.expand();
        prop_assert_eq!(pts.len(), count);
        let distinct: BTreeSet<_> = pts.iter().collect();
        prop_assert_eq!(distinct.len(), count);
        for p in &pts {
            let mut offset = 0;
            for b in &blocks {
                let mut got = p.0[offset..offset + b.len()].to_vec();
                let mut want = b.clone();
                got.sort_unstable();
                want.sort_unstable();
                prop_assert_eq!(got, want);
                offset += b.len();
            }
        }
    }
}

trait DistinctPermutations {
    fn permutations_distinct(self) -> usize;
}

impl<'a, I: Iterator<Item = &'a i64>> DistinctPermutations for I {
    /// `len! / Π mult!` by brute-force enumeration of index permutations.
    fn permutations_distinct(self) -> usize {
        let v: Vec<i64> = self.copied().collect();
        let mut seen = BTreeSet::new();
        let mut idx: Vec<usize> = (0..v.len()).collect();
        heap(&mut idx, v.len(), &mut |p| {
            seen.insert(p.iter().map(|&i| v[i]).collect::<Vec<_>>());
        });
        seen.len()
    }
}

fn heap(a: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        f(a);
        return;
    }
    for i in 0..k {
        heap(a, k - 1, f);
        let j = if k.is_multiple_of(2) { i } else { 0 };
        a.swap(j, k - 1);
    }
}
