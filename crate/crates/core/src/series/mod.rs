//! Truncated univariate power/Laurent series, truncated multivariate series,
//! dense polynomials and rational functions over an exact field.
//!
//! A series is either *exact* (finitely supported: every coefficient outside
//! the stored window is known to be zero) or *truncated* at a precision `T`
//! (coefficients of exponent, resp. total degree, `>= T` are unknown).
//! Binary operations propagate precision pessimistically: the result never
//! claims a coefficient that the inputs do not determine.

mod monomial;
mod multivariate;
mod poly;
mod rational;
mod univariate;

pub use monomial::{lex_cmp, Monomial, MultiIndex};
pub use multivariate::MSeries;
pub use poly::Poly;
pub use rational::RationalFunction;
pub use univariate::Series;

use crate::field::FieldElement;

/// Name of variable `i` (0-based) among `m`: `x` when univariate, else `x1`, `x2`, ...
pub(crate) fn var_name(i: usize, m: usize) -> String {
    if m == 1 {
        "x".to_string()
    } else {
        format!("x{}", i + 1)
    }
}

/// Appends one term in the text format, e.g. ` - 3/2*x1^2*x2`.
pub(crate) fn write_term(out: &mut String, coeff: &FieldElement, powers: &[(String, i64)], first: bool) {
    let negative = coeff.is_negative();
    match (first, negative) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
    let magnitude = if negative { -coeff } else { coeff.clone() };
    let factors: Vec<String> = powers
        .iter()
        .filter(|(_, e)| *e != 0)
        .map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect();
    if factors.is_empty() {
        out.push_str(&magnitude.to_string());
    } else {
        if !magnitude.is_one() {
            out.push_str(&magnitude.to_string());
            out.push('*');
        }
        out.push_str(&factors.join("*"));
    }
}
