use std::fmt;

use super::Series;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// A dense univariate polynomial over K, without trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    spec: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(spec: FieldSpec, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        Poly { spec, coeffs }
    }

    pub fn zero(spec: FieldSpec) -> Self {
        Poly::new(spec, Vec::new())
    }

    pub fn constant(c: FieldElement) -> Self {
        Poly::new(c.spec(), vec![c])
    }

    /// `x^k`.
    pub fn x_pow(spec: FieldSpec, k: usize) -> Self {
        let mut coeffs = vec![spec.zero(); k + 1];
        coeffs[k] = spec.one();
        Poly { spec, coeffs }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Multiplicity of the root 0.
    pub fn lowest_exponent(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn leading_coefficient(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.spec.zero())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(self.spec, (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(self.spec, (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.spec, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        Poly::new(self.spec, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.spec);
        }
        let mut out = vec![self.spec.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Poly::new(self.spec, out)
    }

    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let lead = divisor.leading_coefficient().ok_or(Error::DivisionByZero)?;
        let inv = lead.inv()?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(self.spec), self.clone()));
        }
        let mut quot = vec![self.spec.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = &rem[k + i] - &(&c * d);
            }
            quot[k] = c;
        }
        Ok((Poly::new(self.spec, quot), Poly::new(self.spec, rem)))
    }

    /// Quotient of an exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Option<Poly>> {
        let (q, r) = self.div_rem(divisor)?;
        Ok(r.is_zero().then_some(q))
    }

    pub fn monic(&self) -> Poly {
        match self.leading_coefficient() {
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, c: &FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(self.spec.zero(), |acc, a| &(&acc * c) + a)
    }

    /// `p(x + c)` by Horner's scheme.
    pub fn translate(&self, c: &FieldElement) -> Poly {
        let x_plus_c = Poly::new(self.spec, vec![c.clone(), self.spec.one()]);
        self.coeffs.iter().rev().fold(Poly::zero(self.spec), |acc, a| {
            acc.mul(&x_plus_c).add(&Poly::constant(a.clone()))
        })
    }

    /// `p / x^k`; the caller guarantees `x^k` divides `p`.
    pub fn shift_down(&self, k: usize) -> Poly {
        Poly::new(self.spec, self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn to_series(&self) -> Series {
        Series::polynomial(self.spec, self.coeffs.clone())
    }

    /// The polynomial behind an exact series with no negative exponents.
    pub fn from_series(s: &Series) -> Option<Poly> {
        if !s.is_exact() || s.order().is_some_and(|o| o < 0) {
            return None;
        }
        let end = s.degree().map_or(0, |d| d + 1);
        Some(Poly::new(s.spec(), s.window(0, end)))
    }

    /// First `n` coefficients of the power series `self / divisor`, which
    /// requires `divisor(0) != 0`.
    pub fn series_quotient(&self, divisor: &Poly, n: usize) -> Result<Vec<FieldElement>> {
        let d0 = divisor.coeff(0);
        let inv0 = d0.inv()?;
        let mut out: Vec<FieldElement> = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = self.coeff(i);
            for j in 1..=i.min(divisor.coeffs.len().saturating_sub(1)) {
                acc = &acc - &(&divisor.coeffs[j] * &out[i - j]);
            }
            out.push(&acc * &inv0);
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_series())
    }
}
