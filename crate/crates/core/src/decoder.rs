//! Rounding decoder for L_P and the covering-radius bound it certifies.
//!
//! A point v of the span of A_{n-1} is rounded coordinatewise to w1
//! (half-integers go down), the group sum sum a_i P_i = P_j of w1 is read
//! off, and w1 is corrected into the lattice by moving one unit from
//! coordinate j to coordinate 0 and fixing coordinate 0 so the sum is zero.

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::Serialize;

use crate::curve::PlaceTable;
use crate::error::{Error, Result};

/// Tolerance on the coordinate sum of a real input.
pub const SPAN_TOLERANCE: f64 = 1e-9;
/// Slack on the general covering bound.
pub const BOUND_SLACK: f64 = 1e-9;
/// Slack on the sqrt(2) bound for integer inputs.
pub const INTEGER_SLACK: f64 = 1e-12;

/// (sqrt(n^2 + 4n + 8) + sqrt(n)) / 2.
pub fn covering_bound(n: usize) -> f64 {
    let n = n as f64;
    0.5 * ((n * n + 4.0 * n + 8.0).sqrt() + n.sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecodeTrace {
    pub input: Vec<f64>,
    pub w1: Vec<i64>,
    #[serde(rename = "S")]
    pub s: i64,
    pub j: usize,
    pub w2: Vec<i64>,
    pub distance: f64,
    pub bound: f64,
}

/// Nearest integer, ties rounded down: ceil(r - 1/2).
#[inline]
fn round_half_down(r: f64) -> i64 {
    // truncation plus a fix-up; f64::ceil is a libm call on baseline x86-64
    let x = r - 0.5;
    let t = x as i64;
    if (t as f64) < x {
        t + 1
    } else {
        t
    }
}

struct Step {
    s: i64,
    j: usize,
    distance: f64,
}

/// Decodes the already-projected `v` into `w1`/`w2` and checks every
/// inequality the construction promises.
fn decode_core(t: &PlaceTable, v: &[f64], w1: &mut [i64], w2: &mut [i64]) -> Result<Step> {
    let n = v.len();
    let mut round_err = 0.0;
    let mut integral = true;
    for (a, &r) in w1.iter_mut().zip(v) {
        *a = round_half_down(r);
        let e = r - *a as f64;
        integral &= e == 0.0;
        round_err += e * e;
    }
    let s: i64 = w1.iter().sum();
    let j = t.group_sum(w1);
    let tail: i64 = w1[1..].iter().sum();
    w2.copy_from_slice(w1);
    if j == 0 {
        w2[0] = -tail;
    } else {
        w2[0] = -tail + 1;
        w2[j] -= 1;
    }
    let distance = v
        .iter()
        .zip(w2.iter())
        .map(|(&r, &a)| (r - a as f64).powi(2))
        .sum::<f64>()
        .sqrt();

    if t.group_sum(w2) != 0 || w2.iter().sum::<i64>() != 0 {
        return Err(Error::Internal(format!("decoded vector {w2:?} is not in the lattice")));
    }
    if round_err.sqrt() > (n as f64 / 4.0).sqrt() + BOUND_SLACK {
        return Err(Error::violation("Thm3.4", "rounding error exceeds sqrt(n)/2"));
    }
    if 2 * s.abs() > n as i64 {
        return Err(Error::violation("Thm3.4", format!("|S| = {} exceeds n/2", s.abs())));
    }
    let bound = covering_bound(n);
    if distance > bound + BOUND_SLACK {
        return Err(Error::violation(
            "Thm3.4",
            format!("decode distance {distance} exceeds covering bound {bound}"),
        ));
    }
    if integral && distance > 2f64.sqrt() + INTEGER_SLACK {
        return Err(Error::violation(
            "Thm3.4",
            format!("integer input decoded at distance {distance} > sqrt(2)"),
        ));
    }
    Ok(Step { s, j, distance })
}

fn project(t: &PlaceTable, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != t.n() {
        return Err(Error::LengthMismatch(v.len(), t.n()));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NotInSpan(f64::NAN));
    }
    let sum: f64 = v.iter().sum();
    if sum.abs() >= SPAN_TOLERANCE {
        return Err(Error::NotInSpan(sum));
    }
    let mean = sum / v.len() as f64;
    Ok(v.iter().map(|x| x - mean).collect())
}

/// Decodes a point of the span of A_{n-1} to a nearby lattice vector.
pub fn decode(t: &PlaceTable, v: &[f64]) -> Result<DecodeTrace> {
    let input = project(t, v)?;
    let n = input.len();
    let mut w1 = vec![0; n];
    let mut w2 = vec![0; n];
    let step = decode_core(t, &input, &mut w1, &mut w2)?;
    Ok(DecodeTrace {
        input,
        w1,
        s: step.s,
        j: step.j,
        w2,
        distance: step.distance,
        bound: covering_bound(n),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoveringReport {
    pub n: usize,
    pub bound: f64,
    pub standard_bound: f64,
    /// The analytic bound improves on n - 1; only expected for large n.
    pub beats_standard: bool,
    pub max_observed: f64,
    pub a_n1_max: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Coordinate range of the random samples.
pub const SAMPLE_RANGE: f64 = 10.0;

/// Decodes `samples` random points of the span (coordinates uniform in
/// [-10, 10], projected to sum zero) and `samples` random points of A_{n-1}
/// (coordinates 1..n uniform in [-10, 10], coordinate 0 balancing).
pub fn covering_report(t: &PlaceTable, samples: usize, seed: u64) -> Result<CoveringReport> {
    let n = t.n();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut v = vec![0.0; n];
    let mut w1 = vec![0; n];
    let mut w2 = vec![0; n];
    let mut max_observed = 0f64;
    let mut a_n1_max = 0f64;

    let real = Uniform::new_inclusive(-SAMPLE_RANGE, SAMPLE_RANGE);
    for _ in 0..samples {
        for x in v.iter_mut() {
            *x = real.sample(&mut rng);
        }
        let mean = v.iter().sum::<f64>() / n as f64;
        v.iter_mut().for_each(|x| *x -= mean);
        let step = decode_core(t, &v, &mut w1, &mut w2)?;
        max_observed = max_observed.max(step.distance);
    }

    let r = SAMPLE_RANGE as i64;
    let int = Uniform::new_inclusive(-r, r);
    for _ in 0..samples {
        let mut tail = 0;
        for x in v.iter_mut().skip(1) {
            let c = int.sample(&mut rng);
            tail += c;
            *x = c as f64;
        }
        v[0] = -tail as f64;
        let step = decode_core(t, &v, &mut w1, &mut w2)?;
        a_n1_max = a_n1_max.max(step.distance);
    }

    let bound = covering_bound(n);
    let standard_bound = n as f64 - 1.0;
    Ok(CoveringReport {
        n,
        bound,
        standard_bound,
        beats_standard: bound < standard_bound,
        max_observed,
        a_n1_max,
        samples,
        seed,
    })
}
