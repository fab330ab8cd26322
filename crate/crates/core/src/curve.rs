//! The curve y^2 = f(x) over F_p, its rational points and the chord-tangent
//! group law.
//!
//! `f` is an arbitrary square-free cubic `a3 x^3 + a2 x^2 + a1 x + a0`, not
//! just a short Weierstrass form, so the third intersection of a line of
//! slope `l` with the curve has x-coordinate `(l^2 - a2)/a3 - x1 - x2`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};

/// A rational point: the point at infinity (the place Q_inf) or an affine pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Infinity,
    Affine(FieldElement, FieldElement),
}

impl CurvePoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<FieldElement> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine(x, _) => Some(*x),
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "O"),
            CurvePoint::Affine(x, y) => write!(f, "({x},{y})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LineKind {
    Constant1,
    Vertical,
    Chord,
}

/// The line function m(P,Q) = a x + b y + c.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LineFunction {
    pub kind: LineKind,
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
}

impl LineFunction {
    /// Value of a x + b y + c at an affine point; `None` at infinity.
    pub fn eval(&self, pt: CurvePoint) -> Option<FieldElement> {
        match pt {
            CurvePoint::Infinity => None,
            CurvePoint::Affine(x, y) => Some(self.a * x + self.b * y + self.c),
        }
    }
}

// Dense polynomials over F_p, lowest degree first, no trailing zeros.
mod poly {
    use crate::field::{FieldElement, PrimeField};

    pub type Poly = Vec<FieldElement>;

    pub fn trim(mut p: Poly) -> Poly {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        p
    }

    pub fn eval(p: &[FieldElement], x: FieldElement, k: &PrimeField) -> FieldElement {
        p.iter().rev().fold(k.zero(), |acc, &c| acc * x + c)
    }

    pub fn derivative(p: &[FieldElement], k: &PrimeField) -> Poly {
        trim(
            p.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| k.element(i as i64) * c)
                .collect(),
        )
    }

    pub fn rem(a: &[FieldElement], b: &[FieldElement]) -> Poly {
        let mut r = trim(a.to_vec());
        let lead_inv = b.last().expect("nonzero divisor").inv().expect("trimmed");
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let q = *r.last().unwrap() * lead_inv;
            for (i, &c) in b.iter().enumerate() {
                r[shift + i] = r[shift + i] - q * c;
            }
            r = trim(r);
        }
        r
    }

    pub fn gcd(a: &[FieldElement], b: &[FieldElement]) -> Poly {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b);
            a = b;
            b = r;
        }
        a
    }

    /// Divides by (x - r), assuming r is a root.
    pub fn deflate(p: &[FieldElement], r: FieldElement) -> Poly {
        let mut out = vec![r; p.len() - 1];
        let mut carry = *p.last().unwrap();
        for i in (0..p.len() - 1).rev() {
            out[i] = carry;
            carry = p[i] + carry * r;
        }
        trim(out)
    }

    /// Roots in F_p with multiplicity, in increasing order.
    pub fn roots(p: &[FieldElement], k: &PrimeField) -> Vec<(FieldElement, usize)> {
        let mut out = Vec::new();
        let mut g = trim(p.to_vec());
        for r in k.elements() {
            let mut m = 0;
            while g.len() > 1 && eval(&g, r, k).is_zero() {
                g = deflate(&g, r);
                m += 1;
            }
            if m > 0 {
                out.push((r, m));
            }
        }
        out
    }
}

/// Parsed `p:a3,a2,a1,a0` curve description, coefficients reduced mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveSpec {
    pub p: u64,
    pub coeffs: [i64; 4],
}

impl CurveSpec {
    pub fn new(p: u64, coeffs: [i64; 4]) -> Self {
        let m = p as i64;
        CurveSpec {
            p,
            coeffs: coeffs.map(|c| if m > 0 { c.rem_euclid(m) } else { c }),
        }
    }

    pub fn build(&self) -> Result<Curve> {
        let field = PrimeField::new(self.p)?;
        Curve::new(&field, self.coeffs)
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a3, a2, a1, a0] = self.coeffs;
        write!(f, "{}:{a3},{a2},{a1},{a0}", self.p)
    }
}

impl FromStr for CurveSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::BadCurveSpec(s.to_string(), why.to_string());
        let (p, rest) = s.trim().split_once(':').ok_or_else(|| bad("missing `:`"))?;
        let p: u64 = p.trim().parse().map_err(|_| bad("modulus is not an integer"))?;
        let coeffs: Vec<i64> = rest
            .split(',')
            .map(|c| c.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("coefficient is not an integer"))?;
        let coeffs: [i64; 4] = coeffs
            .try_into()
            .map_err(|_| bad("expected four coefficients a3,a2,a1,a0"))?;
        if p < 3 {
            return Err(Error::NotOddPrime(p));
        }
        Ok(CurveSpec::new(p, coeffs))
    }
}

impl Serialize for CurveSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The elliptic curve y^2 = f(x) with f a square-free cubic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    field: PrimeField,
    // a0, a1, a2, a3
    f: [FieldElement; 4],
}

impl Curve {
    /// `coeffs` is `[a3, a2, a1, a0]`.
    pub fn new(field: &PrimeField, coeffs: [i64; 4]) -> Result<Self> {
        let [a3, a2, a1, a0] = coeffs.map(|c| field.element(c));
        if a3.is_zero() {
            return Err(Error::DegreeTooLow);
        }
        let f = vec![a0, a1, a2, a3];
        let df = poly::derivative(&f, field);
        if poly::gcd(&f, &df).len() != 1 {
            return Err(Error::NotSquareFree);
        }
        Ok(Curve {
            field: field.clone(),
            f: [a0, a1, a2, a3],
        })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn spec(&self) -> CurveSpec {
        let [a0, a1, a2, a3] = self.f.map(|c| c.value() as i64);
        CurveSpec::new(self.field.modulus() as u64, [a3, a2, a1, a0])
    }

    pub fn f(&self, x: FieldElement) -> FieldElement {
        poly::eval(&self.f, x, &self.field)
    }

    fn f_prime(&self, x: FieldElement) -> FieldElement {
        let k = &self.field;
        let [_, a1, a2, a3] = self.f;
        k.element(3) * a3 * x * x + k.element(2) * a2 * x + a1
    }

    /// Roots of f in F_p.
    pub fn cubic_roots(&self) -> Vec<FieldElement> {
        poly::roots(&self.f, &self.field)
            .into_iter()
            .map(|(r, _)| r)
            .collect()
    }

    pub fn point(&self, x: i64, y: i64) -> Result<CurvePoint> {
        let pt = CurvePoint::Affine(self.field.element(x), self.field.element(y));
        self.check(pt)?;
        Ok(pt)
    }

    pub fn contains(&self, pt: CurvePoint) -> bool {
        match pt {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => {
                x.modulus() == self.field.modulus()
                    && y.modulus() == self.field.modulus()
                    && y * y == self.f(x)
            }
        }
    }

    fn check(&self, pt: CurvePoint) -> Result<()> {
        if self.contains(pt) {
            Ok(())
        } else {
            Err(Error::NotOnCurve(pt.to_string()))
        }
    }

    /// Slope of m(P,Q) for affine P, Q that are not inverse to each other.
    fn slope(&self, p: (FieldElement, FieldElement), q: (FieldElement, FieldElement)) -> FieldElement {
        let ((x1, y1), (x2, y2)) = (p, q);
        if x1 == x2 {
            self.f_prime(x1)
                .div(self.field.element(2) * y1)
                .expect("tangent at a point with y != 0")
        } else {
            (y2 - y1).div(x2 - x1).expect("distinct x")
        }
    }

    pub fn negate(&self, pt: CurvePoint) -> CurvePoint {
        match pt {
            CurvePoint::Infinity => pt,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(x, -y),
        }
    }

    pub fn add(&self, p: CurvePoint, q: CurvePoint) -> Result<CurvePoint> {
        self.check(p)?;
        self.check(q)?;
        let (p_xy, q_xy) = match (p, q) {
            (CurvePoint::Infinity, _) => return Ok(q),
            (_, CurvePoint::Infinity) => return Ok(p),
            (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) => ((x1, y1), (x2, y2)),
        };
        if p_xy.0 == q_xy.0 && p_xy.1 == -q_xy.1 {
            return Ok(CurvePoint::Infinity);
        }
        let [_, _, a2, a3] = self.f;
        let l = self.slope(p_xy, q_xy);
        let x3 = (l * l - a2).div(a3)? - p_xy.0 - q_xy.0;
        let y3 = l * (x3 - p_xy.0) + p_xy.1;
        Ok(CurvePoint::Affine(x3, -y3))
    }

    pub fn scalar_mul(&self, k: i64, pt: CurvePoint) -> Result<CurvePoint> {
        self.check(pt)?;
        let mut base = if k < 0 { self.negate(pt) } else { pt };
        let mut e = k.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(acc, base)?;
            }
            base = self.add(base, base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// The line m(P,Q): 1 if either point is at infinity, the vertical
    /// x - x(P) when Q = -P, otherwise the chord (tangent when P = Q).
    pub fn line_m(&self, p: CurvePoint, q: CurvePoint) -> Result<LineFunction> {
        self.check(p)?;
        self.check(q)?;
        let k = &self.field;
        let (p_xy, q_xy) = match (p, q) {
            (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) => ((x1, y1), (x2, y2)),
            _ => {
                return Ok(LineFunction {
                    kind: LineKind::Constant1,
                    a: k.zero(),
                    b: k.zero(),
                    c: k.one(),
                })
            }
        };
        if p_xy.0 == q_xy.0 && p_xy.1 == -q_xy.1 {
            return Ok(LineFunction {
                kind: LineKind::Vertical,
                a: k.one(),
                b: k.zero(),
                c: -p_xy.0,
            });
        }
        let l = self.slope(p_xy, q_xy);
        Ok(LineFunction {
            kind: LineKind::Chord,
            a: l,
            b: -k.one(),
            c: p_xy.1 - l * p_xy.0,
        })
    }

    /// Affine zeros of a line function on the curve, with intersection
    /// multiplicities, sorted by point.
    pub fn line_zeros(&self, line: &LineFunction) -> Vec<(CurvePoint, usize)> {
        let k = &self.field;
        match line.kind {
            LineKind::Constant1 => Vec::new(),
            LineKind::Vertical => {
                let x0 = -line.c * line.a.inv().expect("vertical line has a != 0");
                let ys = k.square_roots(self.f(x0)).expect("same field");
                match ys.as_slice() {
                    [y] => vec![(CurvePoint::Affine(x0, *y), 2)],
                    _ => ys.iter().map(|&y| (CurvePoint::Affine(x0, y), 1)).collect(),
                }
            }
            LineKind::Chord => {
                // y = s x + t on the line; zeros are roots of f(x) - (s x + t)^2
                let binv = line.b.inv().expect("chord has b != 0");
                let s = -line.a * binv;
                let t = -line.c * binv;
                let [a0, a1, a2, a3] = self.f;
                let two = k.element(2);
                let g = vec![a0 - t * t, a1 - two * s * t, a2 - s * s, a3];
                poly::roots(&g, k)
                    .into_iter()
                    .map(|(x, m)| (CurvePoint::Affine(x, s * x + t), m))
                    .collect()
            }
        }
    }

    /// Rational places: Q_inf first, then affine points by (x, y).
    pub fn enumerate_places(&self) -> PlaceTable {
        PlaceTable::new(self)
    }
}

/// The rational places P_0 = Q_inf, P_1, ..., P_{n-1} together with the group
/// law tabulated on indices.
#[derive(Clone, Debug)]
pub struct PlaceTable {
    curve: Curve,
    places: Vec<CurvePoint>,
    index_of: HashMap<CurvePoint, usize>,
    sum: Vec<u32>,
    neg: Vec<usize>,
    orders: Vec<usize>,
    multiples: Vec<Vec<u32>>,
    // k * P_i for |k| <= SMALL_MULTIPLE, row-major in i
    small: Vec<u32>,
}

const SMALL_MULTIPLE: i64 = 32;
const SMALL_WIDTH: usize = 2 * SMALL_MULTIPLE as usize + 1;

impl PlaceTable {
    fn new(curve: &Curve) -> Self {
        let k = curve.field();
        let mut places = vec![CurvePoint::Infinity];
        for x in k.elements() {
            for y in k.square_roots(curve.f(x)).expect("same field") {
                places.push(CurvePoint::Affine(x, y));
            }
        }
        let n = places.len();
        let index_of: HashMap<_, _> = places.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        // Infinity sorts first, so the whole list is ordered
        let find = |pt: &CurvePoint| places.binary_search(pt).expect("sum of places is a place");
        let mut sum = vec![0u32; n * n];
        for i in 0..n {
            for j in i..n {
                let r = curve.add(places[i], places[j]).expect("places lie on the curve");
                let r = find(&r) as u32;
                sum[i * n + j] = r;
                sum[j * n + i] = r;
            }
        }
        let neg = places.iter().map(|&p| find(&curve.negate(p))).collect();
        let mut multiples = Vec::with_capacity(n);
        for i in 0..n {
            let mut m = vec![0u32];
            let mut acc = i;
            while acc != 0 {
                m.push(acc as u32);
                acc = sum[acc * n + i] as usize;
            }
            multiples.push(m);
        }
        let orders = multiples.iter().map(Vec::len).collect();
        let mut small = Vec::with_capacity(n * SMALL_WIDTH);
        for m in &multiples {
            let k0 = (-SMALL_MULTIPLE).rem_euclid(m.len() as i64) as usize;
            small.extend(m.iter().cycle().skip(k0).take(SMALL_WIDTH));
        }
        PlaceTable {
            curve: curve.clone(),
            places,
            index_of,
            sum,
            neg,
            orders,
            multiples,
            small,
        }
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn n(&self) -> usize {
        self.places.len()
    }

    pub fn places(&self) -> &[CurvePoint] {
        &self.places
    }

    pub fn place(&self, i: usize) -> CurvePoint {
        self.places[i]
    }

    pub fn index_of(&self, pt: &CurvePoint) -> Option<usize> {
        self.index_of.get(pt).copied()
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n() {
            Ok(())
        } else {
            Err(Error::PlaceIndex(i, self.n()))
        }
    }

    /// Index of P_i + P_j.
    #[inline]
    pub fn add(&self, i: usize, j: usize) -> usize {
        self.sum[i * self.places.len() + j] as usize
    }

    #[inline]
    pub fn neg(&self, i: usize) -> usize {
        self.neg[i]
    }

    /// Index of k * P_i.
    #[inline]
    pub fn mul(&self, k: i64, i: usize) -> usize {
        if k.abs() <= SMALL_MULTIPLE {
            return self.small[i * SMALL_WIDTH + (k + SMALL_MULTIPLE) as usize] as usize;
        }
        let m = &self.multiples[i];
        m[k.rem_euclid(m.len() as i64) as usize] as usize
    }

    pub fn order(&self, i: usize) -> usize {
        self.orders[i]
    }

    /// Index of the group sum of coeffs[i] * P_i. The P_0 term vanishes.
    #[inline]
    pub fn group_sum(&self, coeffs: &[i64]) -> usize {
        debug_assert_eq!(coeffs.len(), self.n());
        let mut acc = 0;
        for (i, &c) in coeffs.iter().enumerate().skip(1) {
            if c != 0 {
                acc = self.add(acc, self.mul(c, i));
            }
        }
        acc
    }

    /// |n - (p + 1)| <= 2 sqrt(p).
    pub fn hasse_ok(&self) -> bool {
        let p = self.curve.field().modulus() as i64;
        let d = self.n() as i64 - (p + 1);
        d * d <= 4 * p
    }

    pub fn group_structure(&self) -> Result<GroupStructure> {
        GroupStructure::new(self)
    }
}

/// Group order, 2-torsion count and element orders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupStructure {
    pub n: usize,
    pub epsilon: usize,
    pub doubling_image_size: usize,
    pub orders: Vec<usize>,
}

impl GroupStructure {
    fn new(t: &PlaceTable) -> Result<Self> {
        let n = t.n();
        let epsilon = 1 + t.curve().cubic_roots().len();
        if n % epsilon != 0 {
            return Err(Error::Internal(format!(
                "2-torsion count {epsilon} does not divide group order {n}"
            )));
        }
        Ok(GroupStructure {
            n,
            epsilon,
            doubling_image_size: n / epsilon,
            orders: t.orders.clone(),
        })
    }
}
