use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use serde::{Serialize, Serializer};

use super::{write_term, Monomial};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// A univariate power or Laurent series with dense coefficients.
///
/// `coeffs[i]` is the coefficient of `x^(offset + i)`. The storage offset is
/// never positive, so power series start at `x^0`. A truncated series stores
/// exactly the window `[offset, precision)`; an exact series stores its
/// support and every coefficient outside the stored range is zero.
///
/// Arithmetic between series of different fields panics; the public entry
/// points of this crate validate families before doing arithmetic.
#[derive(Clone, Debug)]
pub struct Series {
    spec: FieldSpec,
    offset: i64,
    coeffs: Vec<FieldElement>,
    precision: Option<i64>,
}

impl Series {
    pub fn zero(spec: FieldSpec) -> Self {
        Series {
            spec,
            offset: 0,
            coeffs: Vec::new(),
            precision: None,
        }
    }

    /// An exact polynomial `coeffs[0] + coeffs[1] x + ...`.
    pub fn polynomial(spec: FieldSpec, coeffs: Vec<FieldElement>) -> Self {
        Series {
            spec,
            offset: 0,
            coeffs,
            precision: None,
        }
        .normalize()
    }

    pub fn monomial(coefficient: FieldElement, exponent: i64) -> Self {
        let spec = coefficient.spec();
        Self::from_terms(spec, [(exponent, coefficient)], None).expect("exact series")
    }

    /// Builds a series from `(exponent, coefficient)` pairs. Repeated exponents
    /// are summed. With `precision = Some(T)` the result is truncated at `T`
    /// and terms of exponent `>= T` are dropped; with `None` it is exact.
    pub fn from_terms(
        spec: FieldSpec,
        terms: impl IntoIterator<Item = (i64, FieldElement)>,
        precision: Option<i64>,
    ) -> Result<Self> {
        let terms: Vec<(i64, FieldElement)> = terms.into_iter().collect();
        for (_, c) in &terms {
            if c.spec() != spec {
                return Err(Error::FieldMismatch(spec, c.spec()));
            }
        }
        let lowest = terms.iter().map(|(e, _)| *e).min().unwrap_or(0).min(0);
        let offset = match precision {
            Some(t) => lowest.min(t - 1),
            None => lowest,
        };
        let end = match precision {
            Some(t) => t,
            None => terms.iter().map(|(e, _)| e + 1).max().unwrap_or(offset).max(offset),
        };
        let mut coeffs = vec![spec.zero(); (end - offset) as usize];
        for (e, c) in terms {
            if e < end {
                let slot = &mut coeffs[(e - offset) as usize];
                *slot = &*slot + &c;
            }
        }
        Ok(Series {
            spec,
            offset,
            coeffs,
            precision,
        }
        .normalize())
    }

    /// A truncated series with `coeffs[i]` the coefficient of `x^(offset+i)`,
    /// known up to (excluding) `precision`.
    pub fn truncated(spec: FieldSpec, offset: i64, coeffs: Vec<FieldElement>, precision: i64) -> Result<Self> {
        Self::from_terms(
            spec,
            coeffs.into_iter().enumerate().map(|(i, c)| (offset + i as i64, c)),
            Some(precision),
        )
    }

    fn normalize(mut self) -> Self {
        let zeros = |v: &[FieldElement]| v.iter().take_while(|c| c.is_zero()).count();
        if self.precision.is_none() {
            while self.coeffs.last().is_some_and(FieldElement::is_zero) {
                self.coeffs.pop();
            }
            if self.coeffs.is_empty() {
                self.offset = 0;
                return self;
            }
        }
        let removable = zeros(&self.coeffs)
            .min((-self.offset).max(0) as usize)
            .min(self.coeffs.len().saturating_sub(1));
        if removable > 0 {
            self.coeffs.drain(..removable);
            self.offset += removable as i64;
        }
        self
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    /// Lowest exponent the storage can represent.
    pub fn valuation_offset(&self) -> i64 {
        self.offset
    }

    /// `Some(T)` for a series truncated at `T`; `None` for an exact series.
    pub fn precision(&self) -> Option<i64> {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    fn end(&self) -> i64 {
        self.offset + self.coeffs.len() as i64
    }

    /// Coefficient of `x^e`, or `None` when it lies beyond the precision.
    pub fn coeff(&self, e: i64) -> Option<FieldElement> {
        if self.precision.is_some_and(|t| e >= t) {
            return None;
        }
        if e < self.offset || e >= self.end() {
            return Some(self.spec.zero());
        }
        Some(self.coeffs[(e - self.offset) as usize].clone())
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &FieldElement)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.offset + i as i64, c))
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_zero)
    }

    /// True for the exact zero series (as opposed to zero up to precision).
    pub fn is_exact_zero(&self) -> bool {
        self.is_exact() && self.is_zero()
    }

    /// The least exponent with a nonzero coefficient; `None` when the series
    /// is zero up to its precision (no known order).
    pub fn order(&self) -> Option<i64> {
        self.terms().next().map(|(e, _)| e)
    }

    /// Largest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Option<i64> {
        self.terms().last().map(|(e, _)| e)
    }

    pub fn leading_monomial(&self) -> Result<Monomial<i64>> {
        self.terms()
            .next()
            .map(|(e, c)| Monomial::new(c.clone(), e))
            .ok_or(Error::NoKnownOrder)
    }

    /// A lower bound for the true order: the order when known, the precision otherwise.
    fn order_bound(&self) -> i64 {
        self.order().unwrap_or_else(|| self.end())
    }

    /// Coefficients of exponents `lo..hi` as a dense vector.
    ///
    /// Panics if the window reaches past the precision of a truncated series.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<FieldElement> {
        (lo..hi)
            .map(|e| self.coeff(e).expect("window within precision"))
            .collect()
    }

    /// Lowers the precision to `t` (an exact series becomes truncated at `t`).
    /// Raising the precision of a truncated series is a no-op.
    pub fn truncate(&self, t: i64) -> Series {
        let t = self.precision.map_or(t, |p| p.min(t));
        let offset = self.offset.min(t - 1);
        let coeffs = self.window(offset, t);
        Series {
            spec: self.spec,
            offset,
            coeffs,
            precision: Some(t),
        }
        .normalize()
    }

    /// Termwise `d/dx`. A truncated series loses one unit of precision.
    pub fn derivative(&self) -> Result<Series> {
        let offset = if self.offset == 0 { 0 } else { self.offset - 1 };
        let precision = self.precision.map(|t| t - 1);
        if let Some(t) = precision {
            if t <= offset {
                return Err(Error::PrecisionExhausted(
                    "derivative would have an empty precision window".into(),
                ));
            }
        }
        let end = precision.unwrap_or_else(|| self.end() - 1).max(offset);
        let coeffs = (offset..end)
            .map(|k| {
                let c = self.coeff(k + 1).expect("inside window");
                &c * &self.spec.int(k + 1)
            })
            .collect();
        Ok(Series {
            spec: self.spec,
            offset,
            coeffs,
            precision,
        }
        .normalize())
    }

    fn assert_same_field(&self, other: &Series) {
        assert_eq!(self.spec, other.spec, "series over different fields");
    }

    pub fn add(&self, other: &Series) -> Series {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.combine(other, |a, b| a - b)
    }

    fn combine(&self, other: &Series, op: impl Fn(&FieldElement, &FieldElement) -> FieldElement) -> Series {
        self.assert_same_field(other);
        let precision = match (self.precision, other.precision) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let offset = match precision {
            Some(t) => self.offset.min(other.offset).min(t - 1),
            None => self.offset.min(other.offset),
        };
        let end = precision.unwrap_or_else(|| self.end().max(other.end()));
        let coeffs = (offset..end)
            .map(|e| op(&self.coeff(e).unwrap(), &other.coeff(e).unwrap()))
            .collect();
        Series {
            spec: self.spec,
            offset,
            coeffs,
            precision,
        }
        .normalize()
    }

    pub fn neg(&self) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            ..self.clone()
        }
        .normalize()
    }

    /// Product. If `f` is known modulo `x^T1` and `g` has order at least
    /// `w2`, `f*g` is known modulo `x^(T1 + w2)`; the result precision is the
    /// smaller of the two such bounds.
    pub fn mul(&self, other: &Series) -> Series {
        self.assert_same_field(other);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Series::zero(self.spec);
        }
        let precision = match (self.precision, other.precision) {
            (None, None) => None,
            (Some(a), None) => Some(a + other.order_bound()),
            (None, Some(b)) => Some(b + self.order_bound()),
            (Some(a), Some(b)) => Some((a + other.order_bound()).min(b + self.order_bound())),
        };
        let offset = self.offset + other.offset;
        let end = precision.unwrap_or(self.end() + other.end() - 1);
        let len = (end - offset).max(0) as usize;
        let mut coeffs = vec![self.spec.zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= len {
                    break;
                }
                if !b.is_zero() {
                    coeffs[k] = &coeffs[k] + &(a * b);
                }
            }
        }
        Series {
            spec: self.spec,
            offset,
            coeffs,
            precision,
        }
        .normalize()
    }

    /// `sum_i weights[i] * family[i]`, with the pessimistic precision of the family.
    pub fn linear_combine(family: &[Series], weights: &[FieldElement]) -> Result<Series> {
        let first = family.first().ok_or(Error::EmptyFamily)?;
        if family.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: family.len(),
                got: weights.len(),
            });
        }
        let spec = first.spec;
        for s in family {
            if s.spec != spec {
                return Err(Error::FieldMismatch(spec, s.spec));
            }
        }
        for w in weights {
            if w.spec() != spec {
                return Err(Error::FieldMismatch(spec, w.spec()));
            }
        }
        Ok(family
            .iter()
            .zip(weights)
            .fold(Series::zero(spec), |acc, (f, w)| acc.add(&f.scale(w))))
    }

    /// `f(x + c)`, expanded by the (generalized) binomial theorem.
    ///
    /// The input must be finitely supported. Positive powers expand exactly;
    /// each `x^-k` becomes the power series of `(x + c)^-k` around 0, so a
    /// Laurent input needs `c != 0` and yields a series truncated at `precision`.
    pub fn translate(&self, c: &FieldElement, precision: i64) -> Result<Series> {
        if !self.is_exact() {
            return Err(Error::NotFinite);
        }
        if c.spec() != self.spec {
            return Err(Error::FieldMismatch(self.spec, c.spec()));
        }
        let laurent = self.order().is_some_and(|o| o < 0);
        if laurent && c.is_zero() {
            return Err(Error::PoleAtOrigin);
        }
        let end = if laurent {
            precision.max(1)
        } else {
            self.degree().map_or(0, |d| d + 1)
        };
        let mut out = vec![self.spec.zero(); end.max(0) as usize];
        for (e, a) in self.terms() {
            // coefficient of x^i in (x + c)^e is binom(e, i) c^(e - i)
            let top = if e >= 0 { (e + 1).min(end) } else { end };
            for i in 0..top {
                let b = self.spec.bigint(&generalized_binomial(e, i));
                if b.is_zero() {
                    continue;
                }
                let term = &(a * &b) * &c.pow(e - i)?;
                out[i as usize] = &out[i as usize] + &term;
            }
        }
        if laurent {
            Series::truncated(self.spec, 0, out, end)
        } else {
            Ok(Series::polynomial(self.spec, out))
        }
    }
}

/// binom(e, i) for any integer `e` and `i >= 0`: `(e)_i / i!`.
fn generalized_binomial(e: i64, i: i64) -> BigInt {
    if e >= 0 {
        if i > e {
            return BigInt::from(0);
        }
        binomial(BigInt::from(e), BigInt::from(i))
    } else {
        // binom(-k, i) = (-1)^i binom(k + i - 1, i)
        let b = binomial(BigInt::from(-e + i - 1), BigInt::from(i));
        if i % 2 == 0 {
            b
        } else {
            -b
        }
    }
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.precision == other.precision && self.terms().eq(other.terms())
    }
}

impl Eq for Series {}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, (e, c)) in self.terms().enumerate() {
            write_term(&mut out, c, &[("x".to_string(), e)], i == 0);
        }
        if out.is_empty() {
            out.push('0');
        }
        if let Some(t) = self.precision {
            out.push_str(&format!(" @prec={t}"));
        }
        f.write_str(&out)
    }
}

impl Serialize for Series {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
