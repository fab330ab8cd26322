//! Arithmetic in F_p for odd primes p.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest modulus accepted; the square-root table is O(p).
pub const MAX_MODULUS: u64 = 1 << 24;

/// The prime field F_p together with its table of square roots.
#[derive(Clone)]
pub struct PrimeField {
    p: u32,
    // sqrt[a] = smallest y with y^2 = a, if a is a square
    sqrt: Arc<[Option<u32>]>,
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for PrimeField {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if p == 2 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        let mut sqrt = vec![None; p as usize];
        for y in 0..p {
            let sq = (y * y % p) as usize;
            if sqrt[sq].is_none() {
                sqrt[sq] = Some(y as u32);
            }
        }
        Ok(PrimeField {
            p: p as u32,
            sqrt: sqrt.into(),
        })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary integer into the field.
    pub fn element(&self, value: i64) -> FieldElement {
        FieldElement {
            value: value.rem_euclid(self.p as i64) as u32,
            modulus: self.p,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.p).map(move |v| FieldElement {
            value: v,
            modulus: self.p,
        })
    }

    /// All y with y^2 = a, in increasing order.
    pub fn square_roots(&self, a: FieldElement) -> Result<Vec<FieldElement>> {
        if a.modulus != self.p {
            return Err(Error::ModulusMismatch(a.modulus, self.p));
        }
        Ok(match self.sqrt[a.value as usize] {
            None => Vec::new(),
            Some(0) => vec![self.zero()],
            Some(y) => {
                let lo = y.min(self.p - y);
                vec![self.element(lo as i64), self.element((self.p - lo) as i64)]
            }
        })
    }

    pub fn is_square(&self, a: FieldElement) -> bool {
        self.sqrt[a.value as usize].is_some()
    }
}

/// An element of F_p, carrying its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u32,
    modulus: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Selects one of the three ring operations for [`FieldElement::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl FieldElement {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn with(self, value: u64) -> Self {
        FieldElement {
            value: (value % self.modulus as u64) as u32,
            modulus: self.modulus,
        }
    }

    /// Checked binary operation; fails when the moduli differ.
    pub fn arith(self, other: Self, op: ArithOp) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        let p = self.modulus as u64;
        let (a, b) = (self.value as u64, other.value as u64);
        Ok(self.with(match op {
            ArithOp::Add => a + b,
            ArithOp::Sub => a + p - b,
            ArithOp::Mul => a * b,
        }))
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::DivisionByZero(self.modulus));
        }
        let (mut r0, mut r1) = (self.modulus as i64, self.value as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(FieldElement {
            value: t0.rem_euclid(self.modulus as i64) as u32,
            modulus: self.modulus,
        })
    }

    pub fn div(self, other: Self) -> Result<Self> {
        Ok(self * other.inv()?)
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = self.with(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

// The operator impls are for internal use where both operands are known to
// live in the same field; mixing moduli there is a programming error.

impl Add for FieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.arith(rhs, ArithOp::Add).expect("field operands share a modulus")
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.arith(rhs, ArithOp::Sub).expect("field operands share a modulus")
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.arith(rhs, ArithOp::Mul).expect("field operands share a modulus")
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        self.with(self.modulus as u64 - self.value as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(PrimeField::new(2).unwrap_err(), Error::NotOddPrime(2));
        assert_eq!(PrimeField::new(9).unwrap_err(), Error::NotOddPrime(9));
        assert_eq!(PrimeField::new(1).unwrap_err(), Error::NotOddPrime(1));
        assert!(PrimeField::new(3).is_ok());
        assert!(matches!(
            PrimeField::new(MAX_MODULUS + 1),
            Err(Error::ModulusTooLarge(_))
        ));
    }

    #[test]
    fn small_arithmetic() {
        let k = f(5);
        assert_eq!(k.element(3) + k.element(4), k.element(2));
        assert_eq!(k.element(3).inv().unwrap(), k.element(2));
        assert_eq!(k.element(1).inv().unwrap(), k.element(1));
        assert_eq!(k.element(4).inv().unwrap(), k.element(4));
        assert_eq!(k.element(-1), k.element(4));
        assert_eq!(k.zero().inv().unwrap_err(), Error::DivisionByZero(5));
    }

    #[test]
    fn mismatched_moduli() {
        let a = f(5).element(1);
        let b = f(7).element(1);
        assert_eq!(a.arith(b, ArithOp::Add), Err(Error::ModulusMismatch(5, 7)));
    }

    #[test]
    fn square_roots_match_enumeration() {
        for p in [3u64, 5, 7, 11, 13, 17] {
            let k = f(p);
            let mut total = 0;
            for a in k.elements() {
                let roots = k.square_roots(a).unwrap();
                let brute: Vec<_> = k.elements().filter(|&y| y * y == a).collect();
                assert_eq!(roots, brute, "p = {p}, a = {a}");
                assert!(roots.len() <= 2);
                assert_eq!(roots.len() == 1, a.is_zero());
                total += roots.len();
            }
            assert_eq!(total, p as usize);
        }
        let k = f(5);
        assert_eq!(k.square_roots(k.element(0)).unwrap(), vec![k.element(0)]);
        assert_eq!(
            k.square_roots(k.element(4)).unwrap(),
            vec![k.element(2), k.element(3)]
        );
        assert!(k.square_roots(k.element(3)).unwrap().is_empty());
    }

    #[test]
    fn field_axioms_exhaustive() {
        for p in [3u64, 5, 7, 11, 13] {
            let k = f(p);
            let els: Vec<_> = k.elements().collect();
            for &a in &els {
                assert_eq!(a * k.one(), a);
                assert_eq!(a - a, k.zero());
                assert_eq!(a + (-a), k.zero());
                if !a.is_zero() {
                    assert_eq!(a * a.inv().unwrap(), k.one());
                    assert_eq!(a.inv().unwrap().inv().unwrap(), a);
                    assert_eq!(a.pow(p - 1), k.one());
                }
                for &b in &els {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    for &c in &els {
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }
}
