#![allow(dead_code)]

use std::io::Write;
use std::time::Instant;

use fflattice::{CurvePoint, PlaceTable};

/// Affine coordinates as plain integers in [0, p).
pub fn coords(pt: CurvePoint) -> Option<(i64, i64)> {
    match pt {
        CurvePoint::Infinity => None,
        CurvePoint::Affine(x, y) => Some((x.value() as i64, y.value() as i64)),
    }
}

fn poly_mul(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y).rem_euclid(p);
        }
    }
    out
}

/// Checks R = P + Q from the table against the geometry of the curve,
/// without slope formulas or field inversion: either P, Q are opposite
/// (vertical line, R = Q_inf), or some line y = l(x - x_P) + y_P through
/// P (and Q) meets the curve exactly in x_P, x_Q, x_R with multiplicity,
/// passing through -R.
pub fn chord_tangent_holds(t: &PlaceTable, i: usize, j: usize) -> bool {
    let spec = t.curve().spec();
    let p = spec.p as i64;
    let [a3, a2, a1, a0] = spec.coeffs;
    let r = t.add(i, j);
    let (pp, qq, rr) = (coords(t.place(i)), coords(t.place(j)), coords(t.place(r)));
    let (Some((x1, y1)), Some((x2, y2))) = (pp, qq) else {
        // the identity
        let other = if pp.is_none() { j } else { i };
        return r == other;
    };
    let opposite = x1 == x2 && (y1 + y2) % p == 0;
    let Some((x3, y3)) = rr else {
        return opposite;
    };
    if opposite {
        return false;
    }
    // a3 (x - x1)(x - x2)(x - x3), low degree first
    let target = poly_mul(
        &poly_mul(&[(-x1).rem_euclid(p), 1], &[(-x2).rem_euclid(p), 1], p),
        &[(-a3 * x3).rem_euclid(p), a3],
        p,
    );
    (0..p).any(|l| {
        let through = |x: i64, y: i64| (l * (x - x1) + y1 - y).rem_euclid(p) == 0;
        if !through(x2, y2) || !through(x3, (p - y3) % p) {
            return false;
        }
        // f(x) - (l x + (y1 - l x1))^2
        let c = (y1 - l * x1).rem_euclid(p);
        let sq = poly_mul(&[c, l], &[c, l], p);
        let g: Vec<i64> = [a0, a1, a2, a3]
            .iter()
            .zip(sq.iter().chain(std::iter::repeat(&0)))
            .map(|(f, s)| (f - s).rem_euclid(p))
            .collect();
        g == target
    })
}

pub struct Criterion {
    id: u32,
    title: &'static str,
    start: Instant,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Criterion {
    pub fn new(id: u32, title: &'static str) -> Self {
        Criterion {
            id,
            title,
            start: Instant::now(),
            checked: 0,
            failures: Vec::new(),
        }
    }

    pub fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    /// Prints the verdict line (straight to stderr, so it shows even when
    /// the harness captures output) and fails the test on any failure.
    pub fn finish(self, detail: &str) {
        let verdict = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        let line = format!(
            "criterion {} [{}]: {verdict} ({} curves, {detail}, {:.1}s)",
            self.id,
            self.title,
            self.checked,
            self.start.elapsed().as_secs_f64()
        );
        let _ = writeln!(std::io::stderr(), "{line}");
        assert!(
            self.failures.is_empty(),
            "{line}\n{}",
            self.failures.iter().take(20).cloned().collect::<Vec<_>>().join("\n")
        );
    }
}
