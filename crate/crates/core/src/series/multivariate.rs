use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{var_name, write_term, Monomial, MultiIndex};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// A sparse multivariate series in `x1..xm`, truncated by total degree.
///
/// Terms are kept in a `BTreeMap` keyed by exponent vector, so iteration
/// follows the lexicographic order and the first entry is the leading
/// monomial. A truncated series knows every term of total degree `< T`; an
/// exact series is a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MSeries {
    spec: FieldSpec,
    nvars: usize,
    terms: BTreeMap<MultiIndex, FieldElement>,
    precision: Option<u32>,
}

fn total_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl MSeries {
    pub fn zero(spec: FieldSpec, nvars: usize) -> Self {
        MSeries {
            spec,
            nvars,
            terms: BTreeMap::new(),
            precision: None,
        }
    }

    pub fn monomial(coefficient: FieldElement, exponent: MultiIndex) -> Self {
        let spec = coefficient.spec();
        let m = exponent.len();
        Self::from_terms(spec, m, [(exponent, coefficient)], None).expect("well-formed monomial")
    }

    /// Builds a series from `(exponent, coefficient)` pairs; repeated exponents
    /// are summed, zero coefficients dropped, and with `precision = Some(T)`
    /// terms of total degree `>= T` discarded.
    pub fn from_terms(
        spec: FieldSpec,
        nvars: usize,
        terms: impl IntoIterator<Item = (MultiIndex, FieldElement)>,
        precision: Option<u32>,
    ) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::Malformed(
                "a multivariate series needs at least one variable".into(),
            ));
        }
        if precision == Some(0) {
            return Err(Error::PrecisionExhausted(
                "total-degree precision must be positive".into(),
            ));
        }
        let mut out = MSeries {
            spec,
            nvars,
            terms: BTreeMap::new(),
            precision,
        };
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::LengthMismatch {
                    expected: nvars,
                    got: e.len(),
                });
            }
            if c.spec() != spec {
                return Err(Error::FieldMismatch(spec, c.spec()));
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, e: MultiIndex, c: FieldElement) {
        if self.precision.is_some_and(|t| total_degree(&e) >= t) || c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn num_vars(&self) -> usize {
        self.nvars
    }

    /// `Some(T)` when truncated at total degree `T`, `None` when exact.
    pub fn precision(&self) -> Option<u32> {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    /// Nonzero terms in increasing lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &FieldElement)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `x^e`, or `None` beyond the precision.
    pub fn coeff(&self, e: &[u32]) -> Option<FieldElement> {
        if self.precision.is_some_and(|t| total_degree(e) >= t) {
            return None;
        }
        Some(self.terms.get(e).cloned().unwrap_or_else(|| self.spec.zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.is_exact() && self.is_zero()
    }

    /// Lex-minimal exponent of a nonzero term.
    pub fn leading_exponent(&self) -> Option<&MultiIndex> {
        self.terms.keys().next()
    }

    pub fn leading_monomial(&self) -> Result<Monomial<MultiIndex>> {
        self.terms
            .iter()
            .next()
            .map(|(e, c)| Monomial::new(c.clone(), e.clone()))
            .ok_or(Error::NoKnownOrder)
    }

    /// Smallest total degree of a nonzero term; the precision when none is known.
    fn degree_bound(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| total_degree(e))
            .min()
            .or(self.precision)
            .unwrap_or(0)
    }

    /// Largest total degree of a nonzero term.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| total_degree(e)).max()
    }

    fn assert_compatible(&self, other: &MSeries) {
        assert_eq!(self.spec, other.spec, "series over different fields");
        assert_eq!(self.nvars, other.nvars, "series in different numbers of variables");
    }

    pub fn truncate(&self, t: u32) -> MSeries {
        let t = self.precision.map_or(t, |p| p.min(t));
        MSeries {
            spec: self.spec,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) < t)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
            precision: Some(t),
        }
    }

    pub fn add(&self, other: &MSeries) -> MSeries {
        self.assert_compatible(other);
        let precision = match (self.precision, other.precision) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut out = MSeries {
            precision,
            ..self.clone()
        };
        if let Some(t) = precision {
            out.terms.retain(|e, _| total_degree(e) < t);
        }
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MSeries {
        MSeries {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &MSeries) -> MSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> MSeries {
        if c.is_zero() {
            return MSeries {
                terms: BTreeMap::new(),
                ..self.clone()
            };
        }
        MSeries {
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
            ..self.clone()
        }
    }

    /// Product, known up to total degree `min(T1 + d2, T2 + d1)` where `d` is
    /// the lowest total degree of the other factor.
    pub fn mul(&self, other: &MSeries) -> MSeries {
        self.assert_compatible(other);
        if self.is_exact_zero() || other.is_exact_zero() {
            return MSeries::zero(self.spec, self.nvars);
        }
        let precision = match (self.precision, other.precision) {
            (None, None) => None,
            (Some(a), None) => Some(a + other.degree_bound()),
            (None, Some(b)) => Some(b + self.degree_bound()),
            (Some(a), Some(b)) => Some((a + other.degree_bound()).min(b + self.degree_bound())),
        };
        let mut out = MSeries {
            spec: self.spec,
            nvars: self.nvars,
            terms: BTreeMap::new(),
            precision,
        };
        for (ea, a) in &self.terms {
            for (eb, b) in &other.terms {
                let e: MultiIndex = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, a * b);
            }
        }
        out
    }

    /// `d/dx_var`; a truncated series loses one degree of precision.
    pub fn partial(&self, var: usize) -> Result<MSeries> {
        self.partial_power(var, 1)
    }

    fn partial_power(&self, var: usize, times: u32) -> Result<MSeries> {
        if var >= self.nvars {
            return Err(Error::VariableOutOfRange {
                index: var,
                vars: self.nvars,
            });
        }
        if times == 0 {
            return Ok(self.clone());
        }
        let precision = match self.precision {
            Some(t) if t <= times => {
                return Err(Error::PrecisionExhausted(
                    "partial derivative would leave no known terms".into(),
                ))
            }
            Some(t) => Some(t - times),
            None => None,
        };
        let mut out = MSeries {
            spec: self.spec,
            nvars: self.nvars,
            terms: BTreeMap::new(),
            precision,
        };
        for (e, c) in &self.terms {
            if e[var] < times {
                continue;
            }
            let factor = crate::field::falling_factorial(i64::from(e[var]), times, self.spec);
            let mut e2 = e.clone();
            e2[var] -= times;
            out.add_term(e2, c * &factor);
        }
        Ok(out)
    }

    /// Applies `(d/dx1)^j1 ... (d/dxm)^jm`.
    pub fn apply_derivative(&self, j: &[u32]) -> Result<MSeries> {
        if j.len() != self.nvars {
            return Err(Error::LengthMismatch {
                expected: self.nvars,
                got: j.len(),
            });
        }
        let mut out = self.clone();
        for (var, &times) in j.iter().enumerate() {
            out = out.partial_power(var, times)?;
        }
        Ok(out)
    }

    pub fn linear_combine(family: &[MSeries], weights: &[FieldElement]) -> Result<MSeries> {
        let first = family.first().ok_or(Error::EmptyFamily)?;
        if family.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: family.len(),
                got: weights.len(),
            });
        }
        for s in family {
            if s.spec != first.spec {
                return Err(Error::FieldMismatch(first.spec, s.spec));
            }
            if s.nvars != first.nvars {
                return Err(Error::LengthMismatch {
                    expected: first.nvars,
                    got: s.nvars,
                });
            }
        }
        if let Some(w) = weights.iter().find(|w| w.spec() != first.spec) {
            return Err(Error::FieldMismatch(first.spec, w.spec()));
        }
        Ok(family
            .iter()
            .zip(weights)
            .fold(MSeries::zero(first.spec, first.nvars), |acc, (f, w)| {
                acc.add(&f.scale(w))
            }))
    }
}

impl fmt::Display for MSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let powers: Vec<(String, i64)> = e
                .iter()
                .enumerate()
                .map(|(k, &p)| (var_name(k, self.nvars), i64::from(p)))
                .collect();
            write_term(&mut out, c, &powers, i == 0);
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

impl Serialize for MSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::RATIONALS
    }

    fn ms(terms: &[(&[u32], i64)], prec: Option<u32>) -> MSeries {
        MSeries::from_terms(q(), 2, terms.iter().map(|(e, c)| (e.to_vec(), q().int(*c))), prec).unwrap()
    }

    #[test]
    fn partial_derivatives() {
        assert_eq!(ms(&[(&[1, 1], 1)], None).partial(0).unwrap(), ms(&[(&[0, 1], 1)], None));
        assert!(ms(&[(&[1, 0], 1)], None).partial(1).unwrap().is_exact_zero());
        assert_eq!(ms(&[(&[2, 0], 3)], None).partial(0).unwrap(), ms(&[(&[1, 0], 6)], None));
        assert_eq!(ms(&[(&[2, 0], 3)], Some(5)).partial(0).unwrap().precision(), Some(4));
        assert!(matches!(ms(&[], Some(1)).partial(0), Err(Error::PrecisionExhausted(_))));
        assert!(matches!(
            ms(&[], None).partial(2),
            Err(Error::VariableOutOfRange { .. })
        ));
    }

    #[test]
    fn leading_monomials_follow_lex() {
        // x1*x2 + x2^3: (0,3) <lex (1,1)
        let f = ms(&[(&[1, 1], 1), (&[0, 3], 1)], None);
        assert_eq!(f.leading_exponent(), Some(&vec![0, 3]));
        assert_eq!(
            ms(&[(&[0, 0], 5), (&[1, 0], 1)], None)
                .leading_monomial()
                .unwrap()
                .to_string(),
            "5"
        );
        // x1^2 + x1*x2: (1,1) <lex (2,0)
        assert_eq!(
            ms(&[(&[2, 0], 1), (&[1, 1], 1)], None).leading_exponent(),
            Some(&vec![1, 1])
        );
        assert_eq!(ms(&[], Some(3)).leading_monomial(), Err(Error::NoKnownOrder));
    }

    #[test]
    fn product_precision() {
        // (1 + x1 + O(deg 3)) * (x2 + O(deg 4)) is known below degree 4
        let a = ms(&[(&[0, 0], 1), (&[1, 0], 1)], Some(3));
        let b = ms(&[(&[0, 1], 1)], Some(4));
        let p = a.mul(&b);
        assert_eq!(p.precision(), Some(4));
        assert_eq!(p, ms(&[(&[0, 1], 1), (&[1, 1], 1)], Some(4)));
    }

    #[test]
    fn display() {
        let f = ms(&[(&[0, 0], 3), (&[1, 1], -1), (&[0, 2], 2)], None);
        assert_eq!(f.to_string(), "3 + 2*x2^2 - x1*x2");
        assert_eq!(ms(&[], Some(2)).to_string(), "0 @prec=2");
    }
}
