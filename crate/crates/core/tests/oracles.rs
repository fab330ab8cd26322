//! Values frozen from an independent brute-force implementation (its own
//! point count, group law and pair enumeration), and a slope-free check of
//! the chord-tangent law.

mod common;

use std::collections::BTreeMap;

use common::{chord_tangent_holds, coords};
use fflattice::{minimal_vectors, scan_curves, CurveSpec};

fn histogram_and_minimal_total(p: u64) -> (BTreeMap<usize, usize>, usize) {
    let mut hist = BTreeMap::new();
    let mut total = 0;
    for t in scan_curves(p, p).unwrap() {
        *hist.entry(t.n()).or_default() += 1;
        if t.n() >= 4 {
            total += minimal_vectors(&t).unwrap().count();
        }
    }
    (hist, total)
}

#[test]
fn point_counts_and_minimal_totals_over_f5() {
    let (hist, total) = histogram_and_minimal_total(5);
    let want = BTreeMap::from([(2, 20), (3, 40), (4, 60), (5, 40), (6, 80), (7, 40), (8, 60), (9, 40), (10, 20)]);
    assert_eq!(hist, want);
    assert_eq!(total, 16200);
}

#[test]
fn point_counts_and_minimal_totals_over_f7() {
    let (hist, total) = histogram_and_minimal_total(7);
    let want = BTreeMap::from([
        (3, 42),
        (4, 168),
        (5, 126),
        (6, 252),
        (7, 168),
        (8, 252),
        (9, 168),
        (10, 252),
        (11, 126),
        (12, 168),
        (13, 42),
    ]);
    assert_eq!(hist, want);
    assert_eq!(total, 186984);
}

#[test]
fn places_are_ordered_infinity_then_affine() {
    let spec: CurveSpec = "5:1,0,1,1".parse().unwrap();
    let t = spec.build().unwrap().enumerate_places();
    let got: Vec<Option<(i64, i64)>> = t.places().iter().map(|&pt| coords(pt)).collect();
    let want = [None, Some((0, 1)), Some((0, 4)), Some((2, 1)), Some((2, 4)), Some((3, 1)), Some((3, 4)), Some((4, 2)), Some((4, 3))];
    assert_eq!(got, want);
}

#[test]
fn chord_tangent_on_every_pair_of_small_curves() {
    for t in scan_curves(3, 7).unwrap() {
        for i in 0..t.n() {
            for j in 0..t.n() {
                assert!(chord_tangent_holds(&t, i, j), "{}: {i} + {j}", t.curve().spec());
            }
        }
    }
}

#[test]
fn chord_tangent_on_larger_fields() {
    for s in ["101:1,0,2,3", "97:3,5,0,7", "13:6,1,1,2", "31:1,0,0,5"] {
        let spec: CurveSpec = s.parse().unwrap();
        let t = spec.build().unwrap().enumerate_places();
        for i in 0..t.n() {
            for j in (i..t.n()).step_by(3) {
                assert!(chord_tangent_holds(&t, i, j), "{s}: {i} + {j}");
            }
        }
    }
}
