//! Dependence decisions with machine-checkable certificates.
//!
//! * Dependent: a vector `c` with `sum c_i f_i = 0`.
//! * Independent: an invertible transform `A` such that `g = f * A` has
//!   pairwise distinct orders, plus the leading monomial of `W(g)`. In
//!   characteristic zero that leading monomial is the closed-form Wronskian
//!   of the leading monomials of `g`, which is nonzero because the orders
//!   are distinct; since `W(g) = W(f) det A`, `W(f)` is nonzero too.
//! * Inconclusive: the precision ran out, or (characteristic `p`) the
//!   Wronskian vanishes although the family is independent.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::genwronskian::{first_monomial_witness, monomial_gen_wronskian_closed_form, GenWronskianSpec};
use crate::linalg::{self, Matrix};
use crate::reduction::{
    reduce_to_distinct_leading_exponents, reduce_to_distinct_orders, Reducible, ReductionResult, ReductionStatus,
};
use crate::series::{MSeries, Monomial, MultiIndex, Poly, RationalFunction, Series};
use crate::wronskian::{monomial_wronskian_closed_form, wronskian};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Independent,
    Dependent,
    DependentUpToPrecision,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Independent => "Independent",
            Verdict::Dependent => "Dependent",
            Verdict::DependentUpToPrecision => "DependentUpToPrecision",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InconclusiveReason {
    PrecisionExhausted,
    CharPCaveat,
}

impl fmt::Display for InconclusiveReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InconclusiveReason::PrecisionExhausted => "PrecisionExhausted",
            InconclusiveReason::CharPCaveat => "CharPCaveat",
        })
    }
}

/// How the Wronskian leading monomial of an independence witness was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessSource {
    /// Closed form on the leading monomials of `g`.
    ClosedForm,
    /// Full expansion of `W(g)` (used in characteristic `p` when the closed
    /// form vanishes).
    FullExpansion,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeadingData {
    Univariate {
        members: Vec<Monomial<i64>>,
        wronskian: Monomial<i64>,
    },
    Multivariate {
        members: Vec<Monomial<MultiIndex>>,
        operators: GenWronskianSpec,
        wronskian: Monomial<MultiIndex>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceWitness {
    pub transform: Matrix,
    pub leading: LeadingData,
    pub source: WitnessSource,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Dependence {
        vector: Vec<FieldElement>,
    },
    Independence(IndependenceWitness),
    Caveat {
        reason: InconclusiveReason,
        oracle_rank: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    LaurentExpansion,
    Translation,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::LaurentExpansion => "laurent",
            Strategy::Translation => "translate",
        })
    }
}

/// How rational functions were turned into series, so a checker can redo it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub strategy: Strategy,
    pub shift: FieldElement,
    pub precision: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub witness: Witness,
    pub expansion: Option<Expansion>,
}

impl Certificate {
    fn new(verdict: Verdict, witness: Witness) -> Self {
        Certificate {
            verdict,
            witness,
            expansion: None,
        }
    }

    pub fn dependence_vector(&self) -> Option<&[FieldElement]> {
        match &self.witness {
            Witness::Dependence { vector } => Some(vector),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let strings = |v: &[FieldElement]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
        let witness = match &self.witness {
            Witness::Dependence { vector } => json!({ "kind": "dependence", "vector": strings(vector) }),
            Witness::Caveat { reason, oracle_rank } => {
                json!({ "kind": "caveat", "reason": reason.to_string(), "oracle_rank": oracle_rank })
            }
            Witness::Independence(w) => {
                let transform: Vec<Vec<String>> = w.transform.iter().map(|r| strings(r)).collect();
                let source = match w.source {
                    WitnessSource::ClosedForm => "closed_form",
                    WitnessSource::FullExpansion => "full_expansion",
                };
                let mut v = json!({ "kind": "independence", "transform": transform, "source": source });
                match &w.leading {
                    LeadingData::Univariate { members, wronskian } => {
                        v["orders"] = json!(members.iter().map(|t| t.exponent).collect::<Vec<_>>());
                        v["leading_monomials"] = json!(members);
                        v["wronskian_leading_monomial"] = json!(wronskian);
                    }
                    LeadingData::Multivariate {
                        members,
                        operators,
                        wronskian,
                    } => {
                        v["orders"] = json!(members.iter().map(|t| &t.exponent).collect::<Vec<_>>());
                        v["leading_monomials"] = json!(members);
                        v["operators"] = json!(operators);
                        v["wronskian_leading_monomial"] = json!(wronskian);
                    }
                }
                v
            }
        };
        let mut out = json!({ "verdict": self.verdict.to_string(), "witness": witness });
        if let Some(e) = &self.expansion {
            out["expansion"] = json!({
                "strategy": e.strategy.to_string(),
                "shift": e.shift.to_string(),
                "precision": e.precision,
            });
        }
        out
    }
}

/// Rank of a family's coefficient matrix and, when deficient, a kernel vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub rank: usize,
    pub kernel: Option<Vec<FieldElement>>,
}

/// Coefficient matrix (rows: exponents, columns: members) and exact elimination.
pub fn rank_oracle(family: &[Series]) -> Result<OracleReport> {
    let family = Series::prepare(family)?;
    let mut exps: Vec<i64> = family.iter().flat_map(|f| f.terms().map(|(e, _)| e)).collect();
    exps.sort_unstable();
    exps.dedup();
    let rows: Matrix = exps
        .iter()
        .map(|&e| family.iter().map(|f| f.coeff(e).expect("below precision")).collect())
        .collect();
    let (rank, kernel) = linalg::rank_and_kernel(&rows, family.len(), family[0].spec());
    Ok(OracleReport { rank, kernel })
}

pub fn rank_oracle_multivariate(family: &[MSeries]) -> Result<OracleReport> {
    let family = MSeries::prepare(family)?;
    let spec = family[0].spec();
    let mut exps: Vec<&MultiIndex> = family.iter().flat_map(|f| f.terms().map(|(e, _)| e)).collect();
    exps.sort_unstable();
    exps.dedup();
    let rows: Matrix = exps
        .iter()
        .map(|e| {
            family
                .iter()
                .map(|f| f.coeff(e).unwrap_or_else(|| spec.zero()))
                .collect()
        })
        .collect();
    let (rank, kernel) = linalg::rank_and_kernel(&rows, family.len(), spec);
    Ok(OracleReport { rank, kernel })
}

/// `n * max_degree + n(n-1)/2 + 1`: enough room for the closed-form
/// Wronskian exponent of any leading-monomial witness.
pub fn default_precision_budget(n: usize, max_degree: i64) -> i64 {
    let n = n as i64;
    n * max_degree.max(0) + n * (n - 1) / 2 + 1
}

fn dependence<S: Reducible>(family: &[S], c: Vec<FieldElement>) -> Certificate {
    let verdict = if family.iter().all(S::exact) {
        Verdict::Dependent
    } else {
        Verdict::DependentUpToPrecision
    };
    Certificate::new(verdict, Witness::Dependence { vector: c })
}

fn inconclusive(reason: InconclusiveReason, oracle_rank: Option<usize>) -> Certificate {
    Certificate::new(Verdict::Inconclusive, Witness::Caveat { reason, oracle_rank })
}

fn leads_univariate(g: &[Series]) -> Vec<Monomial<i64>> {
    g.iter()
        .map(|s| s.leading_monomial().expect("nonzero column"))
        .collect()
}

/// Decides linear dependence of univariate (power or Laurent) series.
pub fn certify_univariate(family: &[Series]) -> Result<Certificate> {
    let red = reduce_to_distinct_orders(family)?;
    let spec = red.g[0].spec();
    match red.status {
        ReductionStatus::DependenceFound(c) => Ok(dependence(family, c)),
        ReductionStatus::PrecisionExhausted => Ok(inconclusive(InconclusiveReason::PrecisionExhausted, None)),
        ReductionStatus::DistinctOrders => {
            let members = leads_univariate(&red.g);
            if let Some(w) = monomial_wronskian_closed_form(&members)? {
                return Ok(independent(red, members, w, WitnessSource::ClosedForm));
            }
            // Only reachable in characteristic p: a Vandermonde factor is divisible by p.
            let full = match wronskian(&red.g) {
                Ok(w) => w,
                Err(Error::PrecisionExhausted(_)) => {
                    return Ok(inconclusive(InconclusiveReason::PrecisionExhausted, None))
                }
                Err(e) => return Err(e),
            };
            if let Ok(lm) = full.leading_monomial() {
                return Ok(independent(red, members, lm, WitnessSource::FullExpansion));
            }
            debug_assert!(spec.characteristic() > 0);
            let oracle = rank_oracle(family)?;
            Ok(inconclusive(InconclusiveReason::CharPCaveat, Some(oracle.rank)))
        }
    }
}

fn independent(
    red: ReductionResult<Series>,
    members: Vec<Monomial<i64>>,
    wronskian: Monomial<i64>,
    source: WitnessSource,
) -> Certificate {
    Certificate::new(
        Verdict::Independent,
        Witness::Independence(IndependenceWitness {
            transform: red.transform,
            leading: LeadingData::Univariate { members, wronskian },
            source,
        }),
    )
}

/// Decides linear dependence of multivariate series (characteristic zero).
pub fn certify_multivariate(family: &[MSeries]) -> Result<Certificate> {
    let spec = family.first().ok_or(Error::EmptyFamily)?.spec();
    if spec.characteristic() != 0 {
        return Err(Error::PositiveCharacteristic(spec));
    }
    let red = reduce_to_distinct_leading_exponents(family)?;
    match red.status {
        ReductionStatus::DependenceFound(c) => Ok(dependence(family, c)),
        ReductionStatus::PrecisionExhausted => Ok(inconclusive(InconclusiveReason::PrecisionExhausted, None)),
        ReductionStatus::DistinctOrders => {
            let members: Vec<Monomial<MultiIndex>> = red
                .g
                .iter()
                .map(|s| s.leading_monomial().expect("nonzero column"))
                .collect();
            let exponents: Vec<MultiIndex> = members.iter().map(|t| t.exponent.clone()).collect();
            let (operators, _) = first_monomial_witness(&exponents, spec)?
                .ok_or_else(|| Error::Malformed("distinct exponents without a nonzero generalized Wronskian".into()))?;
            let wronskian = monomial_gen_wronskian_closed_form(&members, &operators)?.expect("witness is nonzero");
            Ok(Certificate::new(
                Verdict::Independent,
                Witness::Independence(IndependenceWitness {
                    transform: red.transform,
                    leading: LeadingData::Multivariate {
                        members,
                        operators,
                        wronskian,
                    },
                    source: WitnessSource::ClosedForm,
                }),
            ))
        }
    }
}

fn check_vector(n: usize, c: &[FieldElement]) -> Result<()> {
    if c.len() != n {
        return Err(Error::Malformed(format!(
            "dependence vector has {} entries for {n} members",
            c.len()
        )));
    }
    Ok(())
}

fn check_transform_shape(n: usize, a: &Matrix) -> Result<()> {
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::Malformed(format!("transform is not {n}x{n}")));
    }
    Ok(())
}

fn columns_of<S: Reducible>(
    family: &[S],
    a: &Matrix,
    combine: impl Fn(&[S], &[FieldElement]) -> Result<S>,
) -> Result<Vec<S>> {
    (0..a.len())
        .map(|j| {
            let col: Vec<FieldElement> = a.iter().map(|r| r[j].clone()).collect();
            combine(family, &col)
        })
        .collect()
}

/// Re-checks a certificate for a univariate family from scratch.
pub fn verify_certificate(family: &[Series], cert: &Certificate) -> Result<bool> {
    let f = Series::prepare(family)?;
    let n = f.len();
    let spec = f[0].spec();
    match (&cert.verdict, &cert.witness) {
        (Verdict::Dependent | Verdict::DependentUpToPrecision, Witness::Dependence { vector }) => {
            check_vector(n, vector)?;
            if vector.iter().all(FieldElement::is_zero) {
                return Ok(false);
            }
            let sum = Series::linear_combine(&f, vector)?;
            Ok(match cert.verdict {
                Verdict::Dependent => sum.is_exact_zero(),
                _ => sum.is_zero(),
            })
        }
        (Verdict::Independent, Witness::Independence(w)) => {
            let LeadingData::Univariate {
                members,
                wronskian: claimed,
            } = &w.leading
            else {
                return Err(Error::Malformed("multivariate witness for a univariate family".into()));
            };
            check_transform_shape(n, &w.transform)?;
            if members.len() != n || linalg::determinant(&w.transform, spec).is_zero() {
                return Ok(false);
            }
            let g = columns_of(&f, &w.transform, Series::linear_combine)?;
            let leads: Vec<Option<Monomial<i64>>> = g.iter().map(|s| s.leading_monomial().ok()).collect();
            if leads.iter().zip(members).any(|(l, m)| l.as_ref() != Some(m)) {
                return Ok(false);
            }
            let mut orders: Vec<i64> = members.iter().map(|m| m.exponent).collect();
            orders.sort_unstable();
            if orders.windows(2).any(|p| p[0] == p[1]) {
                return Ok(false);
            }
            let recomputed = match w.source {
                WitnessSource::ClosedForm => monomial_wronskian_closed_form(members)?,
                WitnessSource::FullExpansion => wronskian(&g)?.leading_monomial().ok(),
            };
            Ok(recomputed.as_ref() == Some(claimed))
        }
        (Verdict::Inconclusive, Witness::Caveat { reason, .. }) => Ok(match reason {
            InconclusiveReason::CharPCaveat => {
                spec.characteristic() > 0 && wronskian(&f).map(|w| w.is_zero()).unwrap_or(false)
            }
            InconclusiveReason::PrecisionExhausted => true,
        }),
        _ => Err(Error::Malformed("verdict does not match witness".into())),
    }
}

pub fn verify_multivariate_certificate(family: &[MSeries], cert: &Certificate) -> Result<bool> {
    let f = MSeries::prepare(family)?;
    let n = f.len();
    let spec = f[0].spec();
    match (&cert.verdict, &cert.witness) {
        (Verdict::Dependent | Verdict::DependentUpToPrecision, Witness::Dependence { vector }) => {
            check_vector(n, vector)?;
            if vector.iter().all(FieldElement::is_zero) {
                return Ok(false);
            }
            let sum = MSeries::linear_combine(&f, vector)?;
            Ok(match cert.verdict {
                Verdict::Dependent => sum.is_exact_zero(),
                _ => sum.is_zero(),
            })
        }
        (Verdict::Independent, Witness::Independence(w)) => {
            let LeadingData::Multivariate {
                members,
                operators,
                wronskian,
            } = &w.leading
            else {
                return Err(Error::Malformed("univariate witness for a multivariate family".into()));
            };
            check_transform_shape(n, &w.transform)?;
            if members.len() != n || linalg::determinant(&w.transform, spec).is_zero() {
                return Ok(false);
            }
            let g = columns_of(&f, &w.transform, MSeries::linear_combine)?;
            if g.iter()
                .zip(members)
                .any(|(s, m)| s.leading_monomial().ok().as_ref() != Some(m))
            {
                return Ok(false);
            }
            let recomputed = monomial_gen_wronskian_closed_form(members, operators)?;
            Ok(recomputed.as_ref() == Some(wronskian))
        }
        (Verdict::Inconclusive, Witness::Caveat { reason, .. }) => {
            Ok(*reason == InconclusiveReason::PrecisionExhausted)
        }
        _ => Err(Error::Malformed("verdict does not match witness".into())),
    }
}

fn check_rational_family(family: &[RationalFunction]) -> Result<FieldSpec> {
    let spec = family.first().ok_or(Error::EmptyFamily)?.spec();
    if let Some(bad) = family.iter().find(|f| f.spec() != spec) {
        return Err(Error::FieldMismatch(spec, bad.spec()));
    }
    Ok(spec)
}

/// Precision at which a dependence of the expansions forces an exact one.
///
/// With `L = prod D_i`, each `L f_i` is a polynomial of degree at most
/// `B = max(deg N_i + deg L - deg D_i)`. If `sum c_i f_i` vanishes below
/// `x^T` then `sum c_i L f_i` vanishes below `x^(T + ord_0 L)`, and a
/// polynomial of degree `<= B` vanishing below `x^(B+1)` is zero.
fn exactness_precision(family: &[RationalFunction], shifted_pole_free: bool) -> i64 {
    let deg = |p: &Poly| p.degree().map_or(0, |d| d as i64);
    let deg_l: i64 = family.iter().map(|f| deg(f.denominator())).sum();
    let b = family
        .iter()
        .map(|f| deg(f.numerator()) + deg_l - deg(f.denominator()))
        .max()
        .unwrap_or(0);
    let ord_l: i64 = if shifted_pole_free {
        0
    } else {
        family.iter().map(|f| f.pole_order_at_zero() as i64).sum()
    };
    b - ord_l + 1
}

/// Candidate translation points `0, 1, -1, 2, -2, ...` (distinct in the field).
pub fn translation_candidates(spec: FieldSpec, count: usize) -> Vec<FieldElement> {
    let limit = match spec.modulus() {
        Some(p) => count.min(p as usize),
        None => count,
    };
    (0..limit as i64)
        .map(|k| {
            let v = if k % 2 == 1 { (k + 1) / 2 } else { -(k / 2) };
            spec.int(v)
        })
        .collect()
}

/// The first candidate at which no denominator vanishes, and its index.
pub fn find_translation_point(family: &[RationalFunction]) -> Result<(usize, FieldElement)> {
    let spec = check_rational_family(family)?;
    let roots_bound: usize = family.iter().map(|f| f.denominator().degree().unwrap_or(0)).sum();
    let candidates = translation_candidates(spec, roots_bound + 1);
    let tried = candidates.len();
    candidates
        .into_iter()
        .enumerate()
        .find(|(_, c)| family.iter().all(|f| !f.has_pole_at(c)))
        .ok_or(Error::NoTranslationPoint(tried))
}

/// Series expansions of a rational family under `strategy`.
pub fn expand_rational_family(
    family: &[RationalFunction],
    strategy: Strategy,
    precision: Option<i64>,
) -> Result<(Vec<Series>, Expansion)> {
    let spec = check_rational_family(family)?;
    let n = family.len();
    let max_deg = family
        .iter()
        .map(|f| f.numerator().degree().max(f.denominator().degree()).unwrap_or(0) as i64)
        .max()
        .unwrap_or(0);
    let (shift, shifted) = match strategy {
        Strategy::LaurentExpansion => (spec.zero(), family.to_vec()),
        Strategy::Translation => {
            let (_, c) = find_translation_point(family)?;
            let shifted = family.iter().map(|f| f.translate(&c)).collect();
            (c, shifted)
        }
    };
    let lowest = -(shifted.iter().map(|f| f.pole_order_at_zero() as i64).max().unwrap_or(0));
    let precision = precision.unwrap_or_else(|| {
        exactness_precision(family, strategy == Strategy::Translation)
            .max(default_precision_budget(n, max_deg))
            .max(lowest + n as i64)
    });
    let series = shifted
        .iter()
        .map(|f| f.laurent_series(precision))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        series,
        Expansion {
            strategy,
            shift,
            precision,
        },
    ))
}

/// Decides linear dependence of rational functions by expanding them as
/// series around 0 (Laurent) or around a translation point that is not a pole.
///
/// A dependence found among the expansions is checked exactly on the
/// rational functions; with the default precision it always passes.
pub fn certify_rational(family: &[RationalFunction], strategy: Strategy) -> Result<Certificate> {
    certify_rational_with(family, strategy, None)
}

pub fn certify_rational_with(
    family: &[RationalFunction],
    strategy: Strategy,
    precision: Option<i64>,
) -> Result<Certificate> {
    let (series, expansion) = expand_rational_family(family, strategy, precision)?;
    let mut cert = certify_univariate(&series)?;
    if let Witness::Dependence { vector } = &cert.witness {
        if rational_combination(family, vector)?.is_zero() {
            cert.verdict = Verdict::Dependent;
        }
    }
    cert.expansion = Some(expansion);
    Ok(cert)
}

fn rational_combination(family: &[RationalFunction], c: &[FieldElement]) -> Result<RationalFunction> {
    check_vector(family.len(), c)?;
    let spec = check_rational_family(family)?;
    Ok(family
        .iter()
        .zip(c)
        .fold(RationalFunction::from_poly(Poly::zero(spec)), |acc, (f, w)| {
            acc.add(&f.scale(w))
        }))
}

pub fn verify_rational_certificate(family: &[RationalFunction], cert: &Certificate) -> Result<bool> {
    let expansion = cert
        .expansion
        .as_ref()
        .ok_or_else(|| Error::Malformed("rational certificate without expansion data".into()))?;
    if let (Verdict::Dependent, Witness::Dependence { vector }) = (&cert.verdict, &cert.witness) {
        return Ok(!vector.iter().all(FieldElement::is_zero) && rational_combination(family, vector)?.is_zero());
    }
    let shifted: Vec<RationalFunction> = family.iter().map(|f| f.translate(&expansion.shift)).collect();
    if expansion.strategy == Strategy::LaurentExpansion && !expansion.shift.is_zero() {
        return Ok(false);
    }
    if expansion.strategy == Strategy::Translation && shifted.iter().any(|f| f.pole_order_at_zero() > 0) {
        return Ok(false);
    }
    let series = shifted
        .iter()
        .map(|f| f.laurent_series(expansion.precision))
        .collect::<Result<Vec<_>>>()?;
    verify_certificate(&series, cert)
}
