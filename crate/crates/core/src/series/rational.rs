use std::fmt;

use super::{Poly, Series};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// A rational function `num / den` in lowest terms with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.spec() != den.spec() {
            return Err(Error::FieldMismatch(num.spec(), den.spec()));
        }
        let spec = num.spec();
        if num.is_zero() {
            return Ok(RationalFunction {
                num,
                den: Poly::constant(spec.one()),
            });
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g)?.expect("gcd divides");
        let den = den.div_exact(&g)?.expect("gcd divides");
        let lead = den.leading_coefficient().expect("nonzero").inv()?;
        Ok(RationalFunction {
            num: num.scale(&lead),
            den: den.scale(&lead),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        let spec = p.spec();
        RationalFunction {
            num: p,
            den: Poly::constant(spec.one()),
        }
    }

    /// An exact Laurent polynomial viewed as `p(x) / x^k`.
    pub fn from_laurent(s: &Series) -> Result<Self> {
        if !s.is_exact() {
            return Err(Error::NotFinite);
        }
        let spec = s.spec();
        let k = s.order().map_or(0, |o| (-o).max(0));
        let end = s.degree().map_or(0, |d| d + 1);
        let num = Poly::new(spec, s.window(-k, end.max(-k)));
        Self::new(num, Poly::x_pow(spec, k as usize))
    }

    pub fn spec(&self) -> FieldSpec {
        self.num.spec()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .expect("nonzero denominators")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero denominators")
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 {
            Self::from_poly(Poly::constant(self.spec().one())).div(self)?
        } else {
            self.clone()
        };
        let mut acc = Self::from_poly(Poly::constant(self.spec().one()));
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    /// Multiplicity of 0 as a root of the denominator.
    pub fn pole_order_at_zero(&self) -> usize {
        self.den.lowest_exponent().unwrap_or(0)
    }

    pub fn has_pole_at(&self, c: &FieldElement) -> bool {
        self.den.eval(c).is_zero()
    }

    /// `Some` when the denominator is a power of `x`, i.e. the function is an
    /// exact Laurent polynomial.
    pub fn as_laurent_polynomial(&self) -> Option<Series> {
        let k = self.pole_order_at_zero();
        if self.den.degree() != Some(k) {
            return None;
        }
        Some(
            Series::from_terms(
                self.spec(),
                self.num
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (i as i64 - k as i64, c.clone())),
                None,
            )
            .expect("uniform field"),
        )
    }

    /// The Laurent expansion around 0, truncated at `precision`.
    pub fn laurent_series(&self, precision: i64) -> Result<Series> {
        let k = self.pole_order_at_zero() as i64;
        let unit = self.den.shift_down(k as usize);
        let n = (precision + k).max(0) as usize;
        let coeffs = self.num.series_quotient(&unit, n)?;
        Series::from_terms(
            self.spec(),
            coeffs.into_iter().enumerate().map(|(i, c)| (i as i64 - k, c)),
            Some(precision),
        )
    }

    /// `f(x + c)`.
    pub fn translate(&self, c: &FieldElement) -> Self {
        Self::new(self.num.translate(c), self.den.translate(c)).expect("translation keeps denominator nonzero")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_laurent_polynomial() {
            Some(s) => write!(f, "{s}"),
            None => write!(f, "({})/({})", self.num, self.den),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::RATIONALS
    }

    fn p(c: &[i64]) -> Poly {
        Poly::new(q(), c.iter().map(|&v| q().int(v)).collect())
    }

    #[test]
    fn reduces_to_lowest_terms() {
        let f = RationalFunction::new(p(&[0, 1, 1]), p(&[2, 2])).unwrap(); // (x^2 + x) / (2x + 2)
        assert_eq!(f.as_laurent_polynomial().unwrap().to_string(), "1/2*x");
        let g = RationalFunction::new(p(&[1, 1]), p(&[0, 1])).unwrap(); // (x+1)/x
        assert_eq!(g.to_string(), "x^-1 + 1");
        assert!(RationalFunction::new(p(&[1]), p(&[])).is_err());
    }

    #[test]
    fn laurent_expansion() {
        // 1 / (x - x^2) = x^-1 + 1 + x + ...
        let f = RationalFunction::new(p(&[1]), p(&[0, 1, -1])).unwrap();
        let s = f.laurent_series(3).unwrap();
        let expected = Series::from_terms(q(), (-1..3).map(|e| (e, q().one())), Some(3)).unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn arithmetic_round_trip() {
        let a = RationalFunction::new(p(&[1]), p(&[1, -1])).unwrap();
        let b = RationalFunction::new(p(&[0, 1]), p(&[1, -1])).unwrap();
        let sum = a.add(&b);
        assert_eq!(sum.to_string(), "(-1 - x)/(-1 + x)");
        assert!(sum.sub(&a).sub(&b).is_zero());
        assert_eq!(a.pow(-1).unwrap().mul(&a), RationalFunction::from_poly(p(&[1])));
        let x = RationalFunction::from_poly(p(&[0, 1]));
        assert!(x.pow(-2).unwrap().has_pole_at(&q().zero()));
    }
}
