//! Exact linear-dependence certificates for families of polynomials, power
//! series, Laurent series, rational functions and multivariate series.
//!
//! A family is either shown dependent by an explicit vector `c` with
//! `sum c_i f_i = 0`, or shown independent by reducing it to series of
//! pairwise distinct orders and exhibiting a nonzero Wronskian leading term.

pub mod certify;
pub mod det;
pub mod error;
pub mod field;
pub mod genwronskian;
pub mod linalg;
pub mod parse;
pub mod reduction;
pub mod series;
pub mod wronskian;

pub use error::{Error, ParseError, Result};
pub use field::{falling_factorial, FieldElement, FieldKind, FieldSpec};
pub use series::{lex_cmp, MSeries, Monomial, MultiIndex, Poly, RationalFunction, Series};

pub use certify::{
    certify_multivariate, certify_rational, certify_univariate, rank_oracle, rank_oracle_multivariate,
    verify_certificate, verify_multivariate_certificate, verify_rational_certificate, Certificate, InconclusiveReason,
    OracleReport, Strategy, Verdict, Witness,
};
pub use genwronskian::{
    enumerate_gen_wronskian_specs, generalized_wronskian, monomial_gen_wronskian_matrix,
    phi_vandermonde_of_linear_forms, DiffOp, GenWronskianSpec,
};
pub use reduction::{
    reduce_to_distinct_leading_exponents, reduce_to_distinct_orders, verify_wronskian_transfer, ReductionResult,
    ReductionStatus,
};
pub use wronskian::{falling_factorial_matrix_det, monomial_wronskian_closed_form, vandermonde, wronskian};
