//! The lattice L_P inside A_{n-1}: generators, HNF basis, membership, and
//! the determinant / class-number report.

use std::collections::HashSet;

use serde::Serialize;

use crate::curve::{GroupStructure, PlaceTable};
use crate::error::{Error, Result};
use crate::function_field::DivisorVector;
use crate::hnf::{gram_determinant, Hnf, IntMatrix};
use crate::membership::OracleRegistry;

/// e_P + e_Q - e_R - e_0 for every unordered pair {P, Q}, R = P + Q,
/// without zeros or duplicates, in order of first appearance.
pub fn generators(t: &PlaceTable) -> Vec<DivisorVector> {
    let n = t.n();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in 0..n {
        for q in p..n {
            let mut v = vec![0i64; n];
            v[p] += 1;
            v[q] += 1;
            v[t.add(p, q)] -= 1;
            v[0] -= 1;
            let v = DivisorVector(v);
            if !v.is_zero() && seen.insert(v.clone()) {
                out.push(v);
            }
        }
    }
    out
}

/// HNF basis of L_P with its exact Gram determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    hnf: Hnf,
    gram_det: i128,
}

impl LatticeBasis {
    pub fn from_generators(n: usize, gens: &[DivisorVector]) -> Result<Self> {
        let hnf = Hnf::from_rows(n, gens.iter().map(DivisorVector::as_slice));
        let expected = n.saturating_sub(1);
        if hnf.rank() != expected {
            return Err(Error::RankDeficient {
                rank: hnf.rank(),
                expected,
            });
        }
        let gram_det = gram_determinant(hnf.rows());
        Ok(LatticeBasis { hnf, gram_det })
    }

    pub fn n(&self) -> usize {
        self.hnf.cols()
    }

    pub fn rank(&self) -> usize {
        self.hnf.rank()
    }

    pub fn rows(&self) -> &IntMatrix {
        self.hnf.rows()
    }

    pub fn hnf(&self) -> &Hnf {
        &self.hnf
    }

    pub fn gram_det(&self) -> i128 {
        self.gram_det
    }

    /// Volume of the fundamental domain, sqrt(det(B B^T)).
    pub fn volume(&self) -> f64 {
        (self.gram_det as f64).sqrt()
    }
}

/// Basis of L_P for a curve with at least two rational places.
pub fn basis(t: &PlaceTable) -> Result<LatticeBasis> {
    if t.n() < 2 {
        return Err(Error::TooFewPlaces { n: t.n(), need: 2 });
    }
    LatticeBasis::from_generators(t.n(), &generators(t))
}

/// Membership, decided by every registered oracle; disagreement is an
/// internal error.
pub fn contains(t: &PlaceTable, b: &LatticeBasis, v: &[i64]) -> Result<bool> {
    OracleRegistry::with_defaults().decide(t, b, v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeReport {
    pub n: usize,
    pub epsilon: usize,
    pub det_squared: i128,
    pub index_in_an1: i128,
    pub h_f: usize,
    pub det_bound_ok: bool,
}

fn exact_sqrt(x: i128) -> Option<i128> {
    if x < 0 {
        return None;
    }
    let mut r = (x as f64).sqrt() as i128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    (r * r == x).then_some(r)
}

/// Index in A_{n-1} from det^2 = index^2 * n, compared against h_F = n
/// (for genus 1 the degree-0 class group is in bijection with the points).
pub fn report(t: &PlaceTable, b: &LatticeBasis, g: &GroupStructure) -> Result<LatticeReport> {
    let n = t.n();
    let det_squared = b.gram_det();
    let index_in_an1 = if det_squared % n as i128 == 0 {
        exact_sqrt(det_squared / n as i128)
    } else {
        None
    }
    .ok_or_else(|| Error::Internal(format!("det^2 = {det_squared} is not n times a square")))?;
    Ok(LatticeReport {
        n,
        epsilon: g.epsilon,
        det_squared,
        index_in_an1,
        h_f: n,
        det_bound_ok: index_in_an1 <= n as i128,
    })
}

/// Cosets of L_P in A_{n-1}, counted from canonical representatives, and the
/// number of distinct group sums those representatives take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CosetCensus {
    pub cosets: usize,
    pub distinct_group_values: usize,
}

/// Enumerates A_{n-1}/L_P via the HNF of L_P in the coordinates
/// (v_1, ..., v_{n-1}) of A_{n-1}.
pub fn coset_census(t: &PlaceTable, b: &LatticeBasis) -> Result<CosetCensus> {
    const LIMIT: usize = 1 << 20;
    let n = t.n();
    let reduced = Hnf::from_rows(n - 1, b.rows().iter().map(|r| &r[1..]));
    if reduced.rank() != n - 1 {
        return Err(Error::Internal("basis does not have full rank in A_(n-1)".into()));
    }
    let diag: Vec<usize> = reduced
        .rows()
        .iter()
        .zip(reduced.pivots())
        .map(|(r, &c)| r[c] as usize)
        .collect();
    let cosets = diag.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d).filter(|&x| x <= LIMIT));
    let cosets = cosets.ok_or_else(|| Error::Internal("index too large to enumerate".into()))?;

    let mut values = HashSet::new();
    let mut digits = vec![0usize; n - 1];
    let mut v = vec![0i64; n];
    for _ in 0..cosets {
        for (i, &d) in digits.iter().enumerate() {
            v[i + 1] = d as i64;
        }
        v[0] = -v[1..].iter().sum::<i64>();
        values.insert(t.group_sum(&v));
        for (d, &m) in digits.iter_mut().zip(&diag) {
            *d += 1;
            if *d < m {
                break;
            }
            *d = 0;
        }
    }
    Ok(CosetCensus {
        cosets,
        distinct_group_values: values.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;
    use crate::field::PrimeField;
    use crate::function_field::FunctionField;

    fn table(p: u64, c: [i64; 4]) -> PlaceTable {
        Curve::new(&PrimeField::new(p).unwrap(), c).unwrap().enumerate_places()
    }

    #[test]
    fn generators_are_principal_and_degree_zero() {
        let t = table(5, [1, 0, 1, 1]);
        let ff = FunctionField::new(&t);
        let gens = generators(&t);
        assert!(gens.len() <= 45);
        assert!(!gens.is_empty());
        for g in &gens {
            assert_eq!(g.degree(), 0);
            assert!(ff.is_principal(g).unwrap());
        }
    }

    #[test]
    fn determinant_examples() {
        for (p, c, n) in [(5, [1, 0, 1, 1], 9i128), (5, [1, 0, -1, 0], 8)] {
            let t = table(p, c);
            let b = basis(&t).unwrap();
            assert_eq!(b.rank() as i128, n - 1);
            assert_eq!(b.gram_det(), n * n * n);
            let r = report(&t, &b, &t.group_structure().unwrap()).unwrap();
            assert_eq!((r.index_in_an1, r.h_f as i128), (n, n));
            assert!(r.det_bound_ok);
            let census = coset_census(&t, &b).unwrap();
            assert_eq!(census.cosets as i128, n);
            assert_eq!(census.distinct_group_values as i128, n);
            for row in b.rows() {
                assert_eq!(row.iter().sum::<i64>(), 0);
                assert!(contains(&t, &b, row).unwrap());
            }
        }
    }

    #[test]
    fn membership_examples() {
        let t = table(5, [1, 0, 1, 1]);
        let b = basis(&t).unwrap();
        let n = t.n();
        for g in generators(&t) {
            assert!(contains(&t, &b, g.as_slice()).unwrap());
        }
        for i in 0..n {
            for j in 0..n {
                let mut v = vec![0; n];
                v[i] += 1;
                v[j] -= 1;
                assert_eq!(contains(&t, &b, &v).unwrap(), i == j);
            }
        }
        let mut v = vec![0; n];
        v[3] = 9;
        assert!(!contains(&t, &b, &v).unwrap());
        assert!(contains(&t, &b, &[0, 0]).is_err());
    }

    #[test]
    fn two_point_curve() {
        // y^2 = x^3 + 2x^2 + 2 over F_3 has the points O and (2, 0)
        let t = table(3, [1, 2, 0, 2]);
        assert_eq!(t.n(), 2);
        let b = basis(&t).unwrap();
        assert_eq!(b.rows(), &vec![vec![2, -2]]);
        assert_eq!(b.gram_det(), 8);
    }

    #[test]
    fn one_point_curve_has_no_lattice() {
        let t = table(3, [1, 0, -1, 2]);
        assert_eq!(t.n(), 1);
        assert_eq!(basis(&t).unwrap_err(), Error::TooFewPlaces { n: 1, need: 2 });
    }
}
