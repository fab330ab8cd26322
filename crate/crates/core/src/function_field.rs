//! The functions F(P,Q) with divisor -P - Q + R + Q_inf (R = P + Q), words
//! in them, and the factorization of principal divisors into such words.
//!
//! Functions are kept structurally: an [`FFunction`] records its defining
//! lines and the three place indices, and every check runs on divisors.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Neg, Sub};

use serde::Serialize;

use crate::curve::{LineFunction, LineKind, PlaceTable};
use crate::error::{Error, Result};

/// An integer vector indexed by the place table, read as a divisor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DivisorVector(pub Vec<i64>);

impl DivisorVector {
    pub fn zero(n: usize) -> Self {
        DivisorVector(vec![0; n])
    }

    /// The unit divisor e_i.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        DivisorVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn norm_squared(&self) -> i64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn scaled(&self, k: i64) -> Self {
        DivisorVector(self.0.iter().map(|c| c * k).collect())
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for DivisorVector {
    fn from(v: Vec<i64>) -> Self {
        DivisorVector(v)
    }
}

impl Index<usize> for DivisorVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl AddAssign<&DivisorVector> for DivisorVector {
    fn add_assign(&mut self, rhs: &DivisorVector) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

impl Add for &DivisorVector {
    type Output = DivisorVector;
    fn add(self, rhs: &DivisorVector) -> DivisorVector {
        DivisorVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivisorVector {
    type Output = DivisorVector;
    fn sub(self, rhs: &DivisorVector) -> DivisorVector {
        DivisorVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DivisorVector {
    type Output = DivisorVector;
    fn neg(self) -> DivisorVector {
        DivisorVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for DivisorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Which of the three defining cases F(P,Q) falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FKind {
    /// P or Q is Q_inf: F = 1.
    Constant,
    /// R = Q_inf: F = 1 / m(P,Q).
    InverseLine { denominator: LineFunction },
    /// P, Q, R affine: F = (x - x(R)) / m(P,Q).
    Ratio {
        numerator: LineFunction,
        denominator: LineFunction,
    },
}

/// The function F(P,Q), identified by the indices of P, Q and R = P + Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FFunction {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub kind: FKind,
}

impl FFunction {
    /// -P - Q + R + Q_inf.
    pub fn divisor(&self, n: usize) -> DivisorVector {
        let mut d = DivisorVector::zero(n);
        self.accumulate(&mut d.0, 1);
        d
    }

    #[inline]
    fn accumulate(&self, acc: &mut [i64], e: i64) {
        acc[self.p] -= e;
        acc[self.q] -= e;
        acc[self.r] += e;
        acc[0] += e;
    }
}

/// One `{p_index, q_index, exponent}` record of a serialized word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WordFactor {
    pub p_index: usize,
    pub q_index: usize,
    pub exponent: i64,
}

/// A formal product of F(P,Q) functions with nonzero integer exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FWord {
    n: usize,
    factors: Vec<(FFunction, i64)>,
}

impl FWord {
    pub fn empty(n: usize) -> Self {
        FWord { n, factors: Vec::new() }
    }

    pub fn single(n: usize, f: FFunction, exponent: i64) -> Self {
        let mut w = FWord::empty(n);
        w.push(f, exponent);
        w
    }

    pub fn push(&mut self, f: FFunction, exponent: i64) {
        if exponent != 0 {
            self.factors.push((f, exponent));
        }
    }

    /// Appends `other` raised to `exponent`.
    pub fn push_word(&mut self, other: &FWord, exponent: i64) {
        for &(f, e) in &other.factors {
            self.push(f, e * exponent);
        }
    }

    pub fn factors(&self) -> &[(FFunction, i64)] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Sum of exponent-weighted factor divisors.
    pub fn divisor(&self) -> DivisorVector {
        let mut acc = vec![0; self.n];
        for (f, e) in &self.factors {
            f.accumulate(&mut acc, *e);
        }
        DivisorVector(acc)
    }

    pub fn records(&self) -> Vec<WordFactor> {
        self.factors
            .iter()
            .map(|(f, e)| WordFactor {
                p_index: f.p,
                q_index: f.q,
                exponent: *e,
            })
            .collect()
    }
}

impl Serialize for FWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.records().serialize(s)
    }
}

/// All F(P,Q) for one curve, built once per place table.
pub struct FunctionField<'a> {
    table: &'a PlaceTable,
    functions: Vec<FFunction>,
}

impl<'a> FunctionField<'a> {
    pub fn new(table: &'a PlaceTable) -> Self {
        let n = table.n();
        let curve = table.curve();
        let k = curve.field();
        let mut functions = Vec::with_capacity(n * n);
        for p in 0..n {
            for q in 0..n {
                let r = table.add(p, q);
                let kind = if p == 0 || q == 0 {
                    FKind::Constant
                } else {
                    let m = curve
                        .line_m(table.place(p), table.place(q))
                        .expect("places lie on the curve");
                    match table.place(r).x() {
                        None => FKind::InverseLine { denominator: m },
                        Some(xr) => FKind::Ratio {
                            numerator: LineFunction {
                                kind: LineKind::Vertical,
                                a: k.one(),
                                b: k.zero(),
                                c: -xr,
                            },
                            denominator: m,
                        },
                    }
                };
                functions.push(FFunction { p, q, r, kind });
            }
        }
        FunctionField { table, functions }
    }

    pub fn table(&self) -> &PlaceTable {
        self.table
    }

    pub fn n(&self) -> usize {
        self.table.n()
    }

    pub fn f_function(&self, p: usize, q: usize) -> Result<FFunction> {
        self.table.check_index(p)?;
        self.table.check_index(q)?;
        Ok(self.f(p, q))
    }

    #[inline]
    fn f(&self, p: usize, q: usize) -> FFunction {
        self.functions[p * self.n() + q]
    }

    /// T_k(P) = F(P,P) F(P,2P) ... F(P,(k-1)P); requires k = ord(P).
    pub fn torsion_word(&self, p: usize, k: i64) -> Result<FWord> {
        self.table.check_index(p)?;
        let order = self.table.order(p);
        if k < 2 || k != order as i64 {
            return Err(Error::TorsionOrder { k, order });
        }
        let mut w = FWord::empty(self.n());
        for i in 1..k {
            w.push(self.f(p, self.table.mul(i, p)), 1);
        }
        Ok(w)
    }

    fn check_divisor(&self, d: &DivisorVector) -> Result<()> {
        if d.len() != self.n() {
            return Err(Error::LengthMismatch(d.len(), self.n()));
        }
        match d.degree() {
            0 => Ok(()),
            deg => Err(Error::NonzeroDegree(deg)),
        }
    }

    /// A degree-0 divisor on the rational places is principal iff its
    /// coefficients sum the points to Q_inf.
    pub fn is_principal(&self, d: &DivisorVector) -> Result<bool> {
        self.check_divisor(d)?;
        Ok(self.table.group_sum(d.as_slice()) == 0)
    }

    /// A word whose divisor is `d`.
    ///
    /// Negative coefficients away from Q_inf are cleared with powers of
    /// torsion words, then the remaining effective part Q_1 + ... + Q_t
    /// (ascending index, with multiplicity) is peeled off with
    /// F(Q_{t-1}, Q_t), F(Q_{t-2}, T_1), ..., F(Q_1, T_{t-2}), where T_i are
    /// the partial sums Q_{t-i} + ... + Q_t.
    pub fn factor_principal(&self, d: &DivisorVector) -> Result<FWord> {
        if !self.is_principal(d)? {
            return Err(Error::NotPrincipal);
        }
        let n = self.n();
        let t = self.table;
        let mut rest = d.0.clone();
        let mut word = FWord::empty(n);

        for j in 1..n {
            if rest[j] < 0 {
                // T_k(P_j)^l, written out in place
                let k = t.order(j) as i64;
                let l = (-rest[j] + k - 1) / k;
                for i in 1..k {
                    word.push(self.f(j, t.mul(i, j)), l);
                }
                rest[j] += l * k;
                rest[0] -= l * k;
            }
        }
        word.factors.reserve(rest[1..].iter().sum::<i64>().max(0) as usize);

        let effective: Vec<usize> = (1..n)
            .flat_map(|i| std::iter::repeat_n(i, rest[i] as usize))
            .collect();
        if let Some((&last, init)) = effective.split_last() {
            let mut acc = last;
            for &q in init.iter().rev() {
                word.push(self.f(q, acc), -1);
                acc = t.add(q, acc);
            }
            if acc != 0 {
                return Err(Error::Internal("partial sums do not close at Q_inf".into()));
            }
        }

        if word.divisor() != *d {
            return Err(Error::Internal(format!("factorization of {d} lost its divisor")));
        }
        Ok(word)
    }

    /// F(P,Q) when P + Q = R (the space L(P+Q-R-Q_inf) is then spanned by
    /// it), otherwise `None`.
    pub fn rr_nontrivial(&self, p: usize, q: usize, r: usize) -> Result<Option<FFunction>> {
        self.table.check_index(r)?;
        let f = self.f_function(p, q)?;
        Ok((f.r == r).then_some(f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{Curve, CurvePoint};
    use crate::field::PrimeField;

    fn table(p: u64, c: [i64; 4]) -> PlaceTable {
        Curve::new(&PrimeField::new(p).unwrap(), c).unwrap().enumerate_places()
    }

    fn unit_diff(n: usize, i: usize, j: usize) -> DivisorVector {
        &DivisorVector::unit(n, i) - &DivisorVector::unit(n, j)
    }

    #[test]
    fn f_function_cases() {
        let t = table(5, [1, 0, 1, 1]);
        let ff = FunctionField::new(&t);
        let n = t.n();
        for p in 0..n {
            let f = ff.f_function(p, 0).unwrap();
            assert_eq!(f.kind, FKind::Constant);
            assert!(f.divisor(n).is_zero());
            if p != 0 {
                let f = ff.f_function(p, t.neg(p)).unwrap();
                assert!(matches!(f.kind, FKind::InverseLine { .. }));
                let mut expect = DivisorVector::zero(n);
                expect.0[p] -= 1;
                expect.0[t.neg(p)] -= 1;
                expect.0[0] += 2;
                assert_eq!(f.divisor(n), expect);
            }
        }
        let f = ff.f_function(1, 3).unwrap();
        let d = f.divisor(n);
        assert!(matches!(f.kind, FKind::Ratio { .. }));
        assert_eq!((d[1], d[3], d[f.r], d[0]), (-1, -1, 1, 1));
        assert!(ff.f_function(0, n).is_err());
    }

    // Divisor of F read off from its line factors; independent of the
    // index formula -P - Q + R + Q_inf.
    fn divisor_from_lines(t: &PlaceTable, f: &FFunction) -> DivisorVector {
        let c = t.curve();
        let n = t.n();
        let line_div = |m: &LineFunction| {
            let mut d = DivisorVector::zero(n);
            let mut deg = 0;
            for (pt, mult) in c.line_zeros(m) {
                d.0[t.index_of(&pt).unwrap()] += mult as i64;
                deg += mult as i64;
            }
            d.0[0] -= deg;
            d
        };
        match f.kind {
            FKind::Constant => DivisorVector::zero(n),
            FKind::InverseLine { denominator } => -&line_div(&denominator),
            FKind::Ratio { numerator, denominator } => &line_div(&numerator) - &line_div(&denominator),
        }
    }

    #[test]
    fn f_divisors_agree_with_line_zeros() {
        for (p, c) in [(5, [1, 0, 1, 1]), (5, [1, 0, -1, 0]), (7, [3, 1, 0, 3]), (11, [1, 2, 3, 4])] {
            let t = table(p, c);
            let ff = FunctionField::new(&t);
            for a in 0..t.n() {
                for b in 0..t.n() {
                    let f = ff.f_function(a, b).unwrap();
                    assert_eq!(f.divisor(t.n()), divisor_from_lines(&t, &f), "F({a},{b})");
                }
            }
        }
    }

    #[test]
    fn line_divisor_is_p_plus_q_plus_r_prime() {
        let t = table(7, [1, 0, 3, 2]);
        let c = t.curve();
        for a in 1..t.n() {
            for b in 1..t.n() {
                let r = t.add(a, b);
                if r == 0 {
                    continue;
                }
                let m = c.line_m(t.place(a), t.place(b)).unwrap();
                let mut got = vec![0i64; t.n()];
                for (pt, mult) in c.line_zeros(&m) {
                    got[t.index_of(&pt).unwrap()] += mult as i64;
                }
                let mut expect = vec![0i64; t.n()];
                for i in [a, b, t.neg(r)] {
                    expect[i] += 1;
                }
                assert_eq!(got, expect);
            }
        }
    }

    #[test]
    fn word_divisor_basics() {
        let t = table(5, [1, 0, 1, 1]);
        let ff = FunctionField::new(&t);
        let n = t.n();
        assert!(FWord::empty(n).divisor().is_zero());
        let f = ff.f_function(1, 3).unwrap();
        assert_eq!(FWord::single(n, f, 1).divisor(), f.divisor(n));
        let mut w = FWord::single(n, f, 1);
        w.push(f, -1);
        assert!(w.divisor().is_zero());
        assert_eq!(
            triples(&w.records()),
            vec![(1, 3, 1), (1, 3, -1)]
        );
    }

    fn triples(r: &[WordFactor]) -> Vec<(usize, usize, i64)> {
        r.iter().map(|f| (f.p_index, f.q_index, f.exponent)).collect()
    }

    #[test]
    fn torsion_words() {
        let t = table(5, [1, 0, -1, 0]);
        let ff = FunctionField::new(&t);
        let n = t.n();
        for p in 1..n {
            let k = t.order(p) as i64;
            let w = ff.torsion_word(p, k).unwrap();
            assert_eq!(w.len() as i64, k - 1);
            let expect = unit_diff(n, 0, p).scaled(k);
            assert_eq!(w.divisor(), expect);
            if k == 2 {
                assert_eq!(w.factors()[0].0, ff.f_function(p, p).unwrap());
            }
            assert!(ff.torsion_word(p, k + 1).is_err());
        }
        assert_eq!(
            ff.torsion_word(0, 1).unwrap_err(),
            Error::TorsionOrder { k: 1, order: 1 }
        );
    }

    #[test]
    fn smaller_multiples_are_not_principal() {
        let t = table(7, [1, 0, 3, 2]);
        let ff = FunctionField::new(&t);
        for p in 1..t.n() {
            for k in 1..t.order(p) as i64 {
                assert!(!ff.is_principal(&unit_diff(t.n(), 0, p).scaled(k)).unwrap());
            }
        }
    }

    #[test]
    fn principality() {
        let t = table(5, [1, 0, 1, 1]);
        let ff = FunctionField::new(&t);
        let n = t.n();
        assert!(ff.is_principal(&DivisorVector::zero(n)).unwrap());
        for i in 0..n {
            for j in 0..n {
                assert_eq!(ff.is_principal(&unit_diff(n, i, j)).unwrap(), i == j);
            }
        }
        assert_eq!(
            ff.is_principal(&DivisorVector::unit(n, 2)).unwrap_err(),
            Error::NonzeroDegree(1)
        );
    }

    #[test]
    fn factorization_examples() {
        let t = table(5, [1, 0, 1, 1]);
        let ff = FunctionField::new(&t);
        let n = t.n();
        assert!(ff.factor_principal(&DivisorVector::zero(n)).unwrap().is_empty());
        for a in 0..n {
            for b in 0..n {
                let d = ff.f_function(a, b).unwrap().divisor(n);
                assert_eq!(ff.factor_principal(&d).unwrap().divisor(), d);
                let d = -&d;
                assert_eq!(ff.factor_principal(&d).unwrap().divisor(), d);
            }
        }
        for p in 1..n {
            let k = t.order(p) as i64;
            let d = unit_diff(n, 0, p).scaled(k);
            assert_eq!(ff.factor_principal(&d).unwrap().divisor(), d);
        }
        assert_eq!(
            ff.factor_principal(&unit_diff(n, 1, 2)).unwrap_err(),
            Error::NotPrincipal
        );
    }

    #[test]
    fn riemann_roch_criterion() {
        let t = table(7, [1, 0, 3, 2]);
        let ff = FunctionField::new(&t);
        let n = t.n();
        for p in 0..n {
            for q in 0..n {
                let hits: Vec<_> = (0..n)
                    .filter_map(|r| ff.rr_nontrivial(p, q, r).unwrap().map(|f| (r, f)))
                    .collect();
                assert_eq!(hits.len(), 1);
                assert_eq!(hits[0].0, t.add(p, q));
            }
        }
        // P = Q_inf: the space is spanned by the constant 1
        let f = ff.rr_nontrivial(0, 3, 3).unwrap().unwrap();
        assert_eq!(f.kind, FKind::Constant);
        assert_eq!(t.place(0), CurvePoint::Infinity);
    }
}
