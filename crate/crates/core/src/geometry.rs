//! Minimum distance, minimal vectors, well-roundedness and packing density
//! of L_P.

use std::collections::{BTreeSet, HashSet};
use std::f64::consts::PI;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::curve::PlaceTable;
use crate::error::{Error, Result};
use crate::function_field::DivisorVector;
use crate::hnf::Hnf;
use crate::lattice::{contains, LatticeBasis};

/// Calls `f` on every vector of A_{n-1} whose squared norm lies in
/// `min_norm..=max_norm`, excluding zero. Stops early on `Break`.
pub fn for_each_short_vector<F>(n: usize, min_norm: i64, max_norm: i64, mut f: F) -> ControlFlow<()>
where
    F: FnMut(&[i64]) -> ControlFlow<()>,
{
    fn rec<F: FnMut(&[i64]) -> ControlFlow<()>>(
        v: &mut Vec<i64>,
        n: usize,
        sum: i64,
        norm: i64,
        lo: i64,
        hi: i64,
        f: &mut F,
    ) -> ControlFlow<()> {
        if v.len() == n {
            if sum == 0 && norm >= lo.max(1) {
                return f(v);
            }
            return ControlFlow::Continue(());
        }
        let budget = hi - norm;
        let mut x = 0i64;
        while (x + 1) * (x + 1) <= budget {
            x += 1;
        }
        for c in -x..=x {
            let s = sum + c;
            let nn = norm + c * c;
            // each unit of remaining |sum| costs at least 1 in norm
            if nn + s.abs() > hi || (v.len() + 1 == n && s != 0) {
                continue;
            }
            v.push(c);
            let r = rec(v, n, s, nn, lo, hi, f);
            v.pop();
            r?;
        }
        ControlFlow::Continue(())
    }
    rec(&mut Vec::with_capacity(n), n, 0, 0, min_norm, max_norm, &mut f)
}

/// Squared minimum distance: 4 for n >= 4, 6 for n = 3.
pub fn minimum_distance_formula(n: usize) -> Result<i64> {
    match n {
        0..=2 => Err(Error::TooFewPlaces { n, need: 3 }),
        3 => Ok(6),
        _ => Ok(4),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimumDistance {
    pub d_squared: i64,
    pub d: f64,
    pub witness: DivisorVector,
}

/// The minimum distance, confirmed by brute force: no nonzero vector of
/// A_{n-1} shorter than the formula value lies in L_P, and one of exactly
/// that length does.
pub fn minimum_distance(t: &PlaceTable, b: &LatticeBasis) -> Result<MinimumDistance> {
    let n = t.n();
    let d_squared = minimum_distance_formula(n)?;
    let mut failure = Ok(());
    let _ = for_each_short_vector(n, 1, d_squared - 1, |v| match contains(t, b, v) {
        Ok(false) => ControlFlow::Continue(()),
        Ok(true) => {
            failure = Err(Error::violation(
                "Lemma3.1",
                format!("lattice vector {v:?} shorter than the minimum"),
            ));
            ControlFlow::Break(())
        }
        Err(e) => {
            failure = Err(e);
            ControlFlow::Break(())
        }
    });
    failure?;

    let mut witness = None;
    let mut failure = Ok(());
    let _ = for_each_short_vector(n, d_squared, d_squared, |v| match contains(t, b, v) {
        Ok(true) => {
            witness = Some(DivisorVector(v.to_vec()));
            ControlFlow::Break(())
        }
        Ok(false) => ControlFlow::Continue(()),
        Err(e) => {
            failure = Err(e);
            ControlFlow::Break(())
        }
    });
    failure?;
    let witness = witness.ok_or_else(|| {
        Error::violation("Lemma3.1", format!("no lattice vector of squared norm {d_squared}"))
    })?;
    Ok(MinimumDistance {
        d_squared,
        d: (d_squared as f64).sqrt(),
        witness,
    })
}

/// The minimal vectors of L_P, sorted, closed under negation.
#[derive(Clone, Debug)]
pub struct MinimalVectorSet {
    n: usize,
    d_squared: i64,
    vectors: Vec<DivisorVector>,
    lookup: HashSet<DivisorVector>,
}

impl MinimalVectorSet {
    pub fn from_vectors(n: usize, d_squared: i64, vectors: impl IntoIterator<Item = DivisorVector>) -> Self {
        let sorted: BTreeSet<DivisorVector> = vectors.into_iter().collect();
        let vectors: Vec<_> = sorted.into_iter().collect();
        let lookup = vectors.iter().cloned().collect();
        MinimalVectorSet {
            n,
            d_squared,
            vectors,
            lookup,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d_squared(&self) -> i64 {
        self.d_squared
    }

    pub fn vectors(&self) -> &[DivisorVector] {
        &self.vectors
    }

    pub fn count(&self) -> usize {
        self.vectors.len()
    }

    pub fn contains(&self, v: &DivisorVector) -> bool {
        self.lookup.contains(v)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i64]> {
        self.vectors.iter().map(DivisorVector::as_slice)
    }
}

/// For n >= 4, every e_P + e_Q - e_R - e_S with {P,Q} and {R,S} distinct
/// pairs of distinct places with P + Q = R + S. For n = 3 the six vectors
/// +-(P + Q - 2Q_inf), +-(P - 2Q + Q_inf), +-(-2P + Q + Q_inf).
pub fn minimal_vectors(t: &PlaceTable) -> Result<MinimalVectorSet> {
    let n = t.n();
    let d_squared = minimum_distance_formula(n)?;
    if n == 3 {
        let base = [[-2, 1, 1], [1, 1, -2], [1, -2, 1]];
        let vs = base
            .iter()
            .flat_map(|v| [DivisorVector(v.to_vec()), DivisorVector(v.iter().map(|x| -x).collect())]);
        return Ok(MinimalVectorSet::from_vectors(n, d_squared, vs));
    }
    let mut by_sum: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for p in 0..n {
        for q in p + 1..n {
            by_sum[t.add(p, q)].push((p, q));
        }
    }
    let mut out = Vec::new();
    for pairs in &by_sum {
        for (i, &(p, q)) in pairs.iter().enumerate() {
            for (j, &(r, s)) in pairs.iter().enumerate() {
                if i != j {
                    let mut v = vec![0i64; n];
                    v[p] = 1;
                    v[q] = 1;
                    v[r] = -1;
                    v[s] = -1;
                    out.push(DivisorVector(v));
                }
            }
        }
    }
    Ok(MinimalVectorSet::from_vectors(n, d_squared, out))
}

/// n/eps * (n-eps)(n-eps-2)/4 + (n - n/eps) * n(n-2)/4.
pub fn minimal_count_formula(n: usize, epsilon: usize) -> Result<usize> {
    if epsilon == 0 || n % epsilon != 0 {
        return Err(Error::EpsilonDivisibility { n, epsilon });
    }
    let (n_, e) = (n as i64, epsilon as i64);
    let image = n_ / e;
    let total = image * (n_ - e) * (n_ - e - 2) + (n_ - image) * n_ * (n_ - 2);
    if total % 4 != 0 || total < 0 {
        return Err(Error::Internal(format!(
            "minimal-vector count for (n, eps) = ({n}, {epsilon}) is not a non-negative integer"
        )));
    }
    Ok((total / 4) as usize)
}

/// Minimal vectors span a space of dimension n - 1.
pub fn is_well_rounded(m: &MinimalVectorSet) -> bool {
    m.count() > 0 && Hnf::from_rows(m.n(), m.rows()).rank() + 1 == m.n()
}

/// The minimal vectors generate the whole lattice.
pub fn generated_by_minimal(m: &MinimalVectorSet, b: &LatticeBasis) -> bool {
    &Hnf::from_rows(m.n(), m.rows()).into_rows() == b.rows()
}

/// A generator written as a signed combination of two minimal vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub target: DivisorVector,
    pub terms: [(i64, DivisorVector); 2],
}

impl Decomposition {
    pub fn combined(&self) -> DivisorVector {
        let [(s1, v1), (s2, v2)] = &self.terms;
        &v1.scaled(*s1) + &v2.scaled(*s2)
    }
}

fn divisor(n: usize, plus: &[usize], minus: &[usize]) -> DivisorVector {
    let mut v = vec![0i64; n];
    for &i in plus {
        v[i] += 1;
    }
    for &i in minus {
        v[i] -= 1;
    }
    DivisorVector(v)
}

/// Writes a non-minimal generator +-(P + Q - R - Q_inf) as a sum or
/// difference of two minimal vectors, using the smallest-index auxiliary
/// place U that keeps all four places of each term distinct.
pub fn decompose_generator(
    t: &PlaceTable,
    m: &MinimalVectorSet,
    v: &DivisorVector,
) -> Result<Decomposition> {
    let n = t.n();
    if v.len() != n {
        return Err(Error::LengthMismatch(v.len(), n));
    }
    if m.contains(v) {
        return Err(Error::AlreadyMinimal);
    }
    if n < 5 {
        return Err(Error::NoEligiblePlace);
    }
    let (p, q) = (1..n)
        .flat_map(|p| (p..n).map(move |q| (p, q)))
        .find(|&(p, q)| {
            let g = divisor(n, &[p, q], &[t.add(p, q), 0]);
            g == *v || -&g == *v
        })
        .ok_or(Error::NotAGenerator)?;
    let r = t.add(p, q);

    // (u, s) and the two terms, each given with the sign it carries when
    // the target is -P - Q + R + Q_inf.
    let (terms, target) = if p == q {
        // -2P + R + Q_inf = (-P - U + S + Q_inf) - (P + S - R - U), S = P + U
        let two_p = t.add(p, p);
        let u = (1..n)
            .find(|&u| u != p && u != two_p && u != t.neg(p))
            .ok_or(Error::NoEligiblePlace)?;
        let s = t.add(p, u);
        (
            [
                (1, divisor(n, &[s, 0], &[p, u])),
                (-1, divisor(n, &[p, s], &[r, u])),
            ],
            divisor(n, &[r, 0], &[p, p]),
        )
    } else if r == 0 {
        // P + Q - 2Q_inf = (Q + U - S - Q_inf) + (P + S - U - Q_inf), S = Q + U
        let two_p = t.add(p, p);
        let u = (1..n)
            .find(|&u| u != p && u != q && u != two_p)
            .ok_or(Error::NoEligiblePlace)?;
        let s = t.add(q, u);
        (
            [
                (-1, divisor(n, &[q, u], &[s, 0])),
                (-1, divisor(n, &[p, s], &[u, 0])),
            ],
            divisor(n, &[0, 0], &[p, q]),
        )
    } else {
        return Err(Error::Internal(format!("generator {v} has four distinct places but is not minimal")));
    };

    // the generator is +-target; flip the signs to match
    let flip = if target == *v {
        1
    } else {
        debug_assert_eq!(-&target, *v);
        -1
    };
    let [(s1, v1), (s2, v2)] = terms;
    let d = Decomposition {
        target: v.clone(),
        terms: [(s1 * flip, v1), (s2 * flip, v2)],
    };
    for (_, w) in &d.terms {
        if !m.contains(w) {
            return Err(Error::violation("Thm3.3", format!("term {w} is not minimal")));
        }
    }
    if d.combined() != *v {
        return Err(Error::violation("Thm3.3", format!("terms do not recombine to {v}")));
    }
    Ok(d)
}

/// Volume of the k-dimensional unit ball, pi^(k/2) / Gamma(k/2 + 1).
pub fn unit_ball_volume(k: usize) -> f64 {
    // w_k = w_{k-2} * 2 pi / k
    let mut w = if k % 2 == 0 { 1.0 } else { 2.0 };
    let mut j = k % 2;
    while j < k {
        j += 2;
        w *= 2.0 * PI / j as f64;
    }
    w
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PackingDensity {
    pub value: f64,
    /// Set when the value exceeds 1, which no genuine lattice packing can.
    pub degenerate: bool,
}

/// Density w_k (d/2)^k / det of a rank k = n - 1 lattice.
pub fn packing_density(n: usize, d: f64, det: f64) -> PackingDensity {
    let k = n.saturating_sub(1);
    let value = unit_ball_volume(k) * (d / 2.0).powi(k as i32) / det;
    PackingDensity {
        value,
        degenerate: value > 1.0,
    }
}
