//! Exact coefficient fields: the rationals and the prime fields GF(p).
//!
//! Every [`FieldElement`] carries the [`FieldSpec`] it lives in, so mixing
//! elements of different fields is caught at the operation that mixes them.
//! The `try_*` methods report the mismatch as an error; the operator impls
//! (`&a + &b`, ...) are for code that has already checked its inputs share a
//! field and panic otherwise.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    PrimeField,
}

/// The coefficient field K: either Q or GF(p) for a prime p < 2^32.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    modulus: Option<u64>,
}

impl FieldSpec {
    pub const RATIONALS: FieldSpec = FieldSpec { modulus: None };

    pub fn rationals() -> Self {
        Self::RATIONALS
    }

    /// GF(p). The modulus is checked for primality here, once.
    pub fn prime(p: u64) -> Result<Self> {
        if p > u64::from(u32::MAX) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec { modulus: Some(p) })
    }

    pub fn kind(&self) -> FieldKind {
        match self.modulus {
            None => FieldKind::Rationals,
            Some(_) => FieldKind::PrimeField,
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    /// 0 for Q, p for GF(p).
    pub fn characteristic(&self) -> u64 {
        self.modulus.unwrap_or(0)
    }

    pub fn zero(&self) -> FieldElement {
        self.int(0)
    }

    pub fn one(&self) -> FieldElement {
        self.int(1)
    }

    /// The image of an integer in this field.
    pub fn int(&self, v: i64) -> FieldElement {
        let value = match self.modulus {
            None => Value::Rational(BigRational::from_integer(BigInt::from(v))),
            Some(p) => Value::Residue(v.rem_euclid(p as i64) as u64),
        };
        FieldElement { spec: *self, value }
    }

    pub fn bigint(&self, v: &BigInt) -> FieldElement {
        let value = match self.modulus {
            None => Value::Rational(BigRational::from_integer(v.clone())),
            Some(p) => Value::Residue(reduce_bigint(v, p)),
        };
        FieldElement { spec: *self, value }
    }

    /// `num / den` in this field; fails when `den` vanishes in the field.
    pub fn ratio(&self, num: &BigInt, den: &BigInt) -> Result<FieldElement> {
        match self.modulus {
            None => {
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(FieldElement {
                    spec: *self,
                    value: Value::Rational(BigRational::new(num.clone(), den.clone())),
                })
            }
            Some(_) => self.bigint(num).try_div(&self.bigint(den)),
        }
    }

    pub fn rational(&self, q: &BigRational) -> Result<FieldElement> {
        self.ratio(q.numer(), q.denom())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modulus {
            None => write!(f, "Q"),
            Some(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `Q` and `Fp:<prime>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::rationals());
        }
        let digits = s
            .strip_prefix("Fp:")
            .ok_or_else(|| Error::Malformed(format!("unknown field `{s}` (expected Q or Fp:<prime>)")))?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Malformed(format!("bad modulus in `{s}`")));
        }
        let p: u64 = digits.parse().map_err(|_| Error::ModulusOutOfRange(u64::MAX))?;
        FieldSpec::prime(p)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) || p.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d * d <= p {
        if p.is_multiple_of(d) || p.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Value {
    Rational(BigRational),
    Residue(u64),
}

/// An exact scalar. Rationals are kept in lowest terms with positive
/// denominator; residues are kept in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    spec: FieldSpec,
    value: Value,
}

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rational(q) => q.is_zero(),
            Value::Residue(r) => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Rational(q) => q.is_one(),
            Value::Residue(r) => *r == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rational(q) => Some(q),
            Value::Residue(_) => None,
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match &self.value {
            Value::Residue(r) => Some(*r),
            Value::Rational(_) => None,
        }
    }

    /// True when the printed form starts with a minus sign. Residues never do.
    pub fn is_negative(&self) -> bool {
        match &self.value {
            Value::Rational(q) => q.is_negative(),
            Value::Residue(_) => false,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.spec, other.spec))
        }
    }

    fn with(&self, value: Value) -> Self {
        FieldElement { spec: self.spec, value }
    }

    fn modulus(&self) -> u64 {
        self.spec.modulus.expect("residue in a prime field")
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => self.with(Value::Rational(a + b)),
            (Value::Residue(a), Value::Residue(b)) => {
                let p = self.modulus();
                self.with(Value::Residue(((*a as u128 + *b as u128) % p as u128) as u64))
            }
            _ => unreachable!("spec equality implies representation equality"),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => self.with(Value::Rational(a * b)),
            (Value::Residue(a), Value::Residue(b)) => {
                let p = self.modulus();
                self.with(Value::Residue(mul_mod(*a, *b, p)))
            }
            _ => unreachable!("spec equality implies representation equality"),
        })
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.value {
            Value::Rational(q) => self.with(Value::Rational(q.recip())),
            Value::Residue(r) => {
                let p = self.modulus();
                self.with(Value::Residue(pow_mod(*r, p - 2, p)))
            }
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.spec.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(acc)
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        match &self.value {
            Value::Rational(q) => self.with(Value::Rational(-q)),
            Value::Residue(r) => {
                let p = self.modulus();
                self.with(Value::Residue(if *r == 0 { 0 } else { p - r }))
            }
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        -&self
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("operands share a field")
            }
        }

        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$checked(&rhs).expect("operands share a field")
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl PartialOrd for FieldElement {
    /// Only rationals are ordered; residues compare by representative so that
    /// elements can be sorted deterministically.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.spec != other.spec {
            return None;
        }
        Some(match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => a.cmp(b),
            (Value::Residue(a), Value::Residue(b)) => a.cmp(b),
            _ => unreachable!(),
        })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Value::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Value::Residue(r) => write!(f, "{r}"),
        }
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The falling factorial (d)_k = d(d-1)...(d-k+1) embedded in the field;
/// (d)_0 = 1. Negative `d` is allowed (Laurent exponents).
pub fn falling_factorial(d: i64, k: u32, spec: FieldSpec) -> FieldElement {
    match spec.modulus {
        None => {
            let mut acc = BigInt::one();
            for i in 0..i64::from(k) {
                let factor = BigInt::from(d) - i;
                if factor.is_zero() {
                    return spec.zero();
                }
                acc *= factor;
            }
            spec.bigint(&acc)
        }
        Some(p) => {
            let mut acc = 1u64 % p;
            for i in 0..i64::from(k) {
                let factor = (i128::from(d) - i128::from(i)).rem_euclid(i128::from(p)) as u64;
                acc = mul_mod(acc, factor, p);
            }
            FieldElement {
                spec,
                value: Value::Residue(acc),
            }
        }
    }
}
