//! Univariate Wronskians, the closed form for monomial families and the
//! Vandermonde identities behind it.

use crate::det::{series_determinant, DetMethod};
use crate::error::{Error, Result};
use crate::field::{falling_factorial, FieldElement, FieldSpec};
use crate::linalg;
use crate::series::{Monomial, Series};

/// The matrix whose row `i` holds the `i`-th derivatives of the family.
#[derive(Clone, Debug)]
pub struct WronskianMatrix {
    rows: Vec<Vec<Series>>,
}

impl WronskianMatrix {
    pub fn new(family: &[Series]) -> Result<Self> {
        let spec = check_family(family)?;
        let _ = spec;
        let mut rows = vec![family.to_vec()];
        for _ in 1..family.len() {
            let next = rows
                .last()
                .expect("nonempty")
                .iter()
                .map(Series::derivative)
                .collect::<Result<Vec<_>>>()?;
            rows.push(next);
        }
        Ok(WronskianMatrix { rows })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Series>] {
        &self.rows
    }

    /// `min input precision - (n - 1)`, or `None` for an exact family.
    pub fn result_precision(&self) -> Option<i64> {
        self.rows.last()?.iter().filter_map(Series::precision).min()
    }

    pub fn determinant(&self, method: DetMethod) -> Series {
        series_determinant(&self.rows, method)
    }
}

pub(crate) fn check_family(family: &[Series]) -> Result<FieldSpec> {
    let spec = family.first().ok_or(Error::EmptyFamily)?.spec();
    if let Some(bad) = family.iter().find(|f| f.spec() != spec) {
        return Err(Error::FieldMismatch(spec, bad.spec()));
    }
    Ok(spec)
}

/// The Wronskian `det [f_j^(i)]` of a family of series.
///
/// Exact families give an exact result. Truncated families give a result
/// valid to a pessimistic precision; a family whose precision cannot
/// survive `n - 1` derivatives is an error.
pub fn wronskian(family: &[Series]) -> Result<Series> {
    wronskian_with(family, DetMethod::Auto)
}

pub fn wronskian_with(family: &[Series], method: DetMethod) -> Result<Series> {
    Ok(WronskianMatrix::new(family)?.determinant(method))
}

/// `prod_{i<j} (d_j - d_i)` in the field.
pub fn vandermonde(exponents: &[i64], spec: FieldSpec) -> FieldElement {
    let mut acc = spec.one();
    for (i, &di) in exponents.iter().enumerate() {
        for &dj in &exponents[i + 1..] {
            acc = &acc * &spec.int(dj - di);
        }
    }
    acc
}

/// Determinant of the matrix with entries `(d_j)_k`, `k = 0..n-1`.
///
/// Since `(d)_k` is monic of degree `k` in `d`, column operations turn this
/// matrix into the Vandermonde matrix, so the result equals
/// [`vandermonde`] on the same exponents.
pub fn falling_factorial_matrix_det(exponents: &[i64], spec: FieldSpec) -> FieldElement {
    let n = exponents.len();
    let m: Vec<Vec<FieldElement>> = (0..n)
        .map(|k| {
            exponents
                .iter()
                .map(|&d| falling_factorial(d, k as u32, spec))
                .collect()
        })
        .collect();
    linalg::determinant(&m, spec)
}

fn binom2(n: usize) -> i64 {
    (n * n.saturating_sub(1) / 2) as i64
}

/// The Wronskian of `a_1 x^d_1, ..., a_n x^d_n` in closed form:
/// `V(d) * x^(sum d - n(n-1)/2) * prod a_i`. Returns `None` when it vanishes
/// (repeated exponents, or a Vandermonde factor divisible by the
/// characteristic).
pub fn monomial_wronskian_closed_form(monomials: &[Monomial<i64>]) -> Result<Option<Monomial<i64>>> {
    let spec = monomials.first().ok_or(Error::EmptyFamily)?.coefficient.spec();
    if let Some(bad) = monomials.iter().find(|m| m.coefficient.spec() != spec) {
        return Err(Error::FieldMismatch(spec, bad.coefficient.spec()));
    }
    let exponents: Vec<i64> = monomials.iter().map(|m| m.exponent).collect();
    let coefficient = monomials
        .iter()
        .fold(vandermonde(&exponents, spec), |acc, m| &acc * &m.coefficient);
    if coefficient.is_zero() {
        return Ok(None);
    }
    let exponent = exponents.iter().sum::<i64>() - binom2(monomials.len());
    Ok(Some(Monomial::new(coefficient, exponent)))
}

/// The three factors of the closed form, reported separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormFactors {
    pub vandermonde: FieldElement,
    pub exponent: i64,
    pub coefficient_product: FieldElement,
}

pub fn monomial_wronskian_factors(monomials: &[Monomial<i64>]) -> Result<ClosedFormFactors> {
    let spec = monomials.first().ok_or(Error::EmptyFamily)?.coefficient.spec();
    let exponents: Vec<i64> = monomials.iter().map(|m| m.exponent).collect();
    let mut product = spec.one();
    for m in monomials {
        product = product.try_mul(&m.coefficient)?;
    }
    Ok(ClosedFormFactors {
        vandermonde: vandermonde(&exponents, spec),
        exponent: exponents.iter().sum::<i64>() - binom2(monomials.len()),
        coefficient_product: product,
    })
}
