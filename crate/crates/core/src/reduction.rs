//! Column-echelon elimination: replace a family `f` by `g = f * A` with `A`
//! invertible, until the members of `g` have pairwise distinct orders
//! (univariate) or pairwise distinct lex-leading exponents (multivariate).
//!
//! Since every operation is "add a multiple of one column to another",
//! `g_j = sum_i f_i A_ij` holds exactly throughout and `det A = 1`. A column
//! that becomes zero (up to precision) exposes a dependence: the matching
//! column of `A`.

use std::fmt;

use num_integer::binomial;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::linalg::{self, Matrix};
use crate::series::{MSeries, MultiIndex, Series};
use crate::wronskian::wronskian;

/// What the elimination needs from a series type.
pub trait Reducible: Clone + fmt::Display + Serialize {
    /// Order (univariate) or leading exponent (multivariate); smaller leads.
    type Key: Ord + Clone + fmt::Debug + Serialize;

    fn field(&self) -> FieldSpec;
    /// Leading key and coefficient; `None` when zero up to precision.
    fn lead(&self) -> Option<(Self::Key, FieldElement)>;
    /// `self + c * other`.
    fn add_scaled(&self, other: &Self, c: &FieldElement) -> Self;
    fn exact(&self) -> bool;
    /// Validates the family and truncates it to a common precision.
    fn prepare(family: &[Self]) -> Result<Vec<Self>>;
    /// How many distinct keys fit below the common precision (`None` if unbounded).
    fn key_capacity(family: &[Self]) -> Option<u128>;
}

impl Reducible for Series {
    type Key = i64;

    fn field(&self) -> FieldSpec {
        self.spec()
    }

    fn lead(&self) -> Option<(i64, FieldElement)> {
        self.terms().next().map(|(e, c)| (e, c.clone()))
    }

    fn add_scaled(&self, other: &Self, c: &FieldElement) -> Self {
        self.add(&other.scale(c))
    }

    fn exact(&self) -> bool {
        self.is_exact()
    }

    fn prepare(family: &[Self]) -> Result<Vec<Self>> {
        let spec = family.first().ok_or(Error::EmptyFamily)?.spec();
        if let Some(bad) = family.iter().find(|f| f.spec() != spec) {
            return Err(Error::FieldMismatch(spec, bad.spec()));
        }
        Ok(match family.iter().filter_map(Series::precision).min() {
            Some(t) => family.iter().map(|f| f.truncate(t)).collect(),
            None => family.to_vec(),
        })
    }

    fn key_capacity(family: &[Self]) -> Option<u128> {
        let t = family.iter().filter_map(Series::precision).min()?;
        let lo = family.iter().map(Series::valuation_offset).min().unwrap_or(0);
        Some((t - lo).max(0) as u128)
    }
}

impl Reducible for MSeries {
    type Key = MultiIndex;

    fn field(&self) -> FieldSpec {
        self.spec()
    }

    fn lead(&self) -> Option<(MultiIndex, FieldElement)> {
        self.terms().next().map(|(e, c)| (e.clone(), c.clone()))
    }

    fn add_scaled(&self, other: &Self, c: &FieldElement) -> Self {
        self.add(&other.scale(c))
    }

    fn exact(&self) -> bool {
        self.is_exact()
    }

    fn prepare(family: &[Self]) -> Result<Vec<Self>> {
        let first = family.first().ok_or(Error::EmptyFamily)?;
        for f in family {
            if f.spec() != first.spec() {
                return Err(Error::FieldMismatch(first.spec(), f.spec()));
            }
            if f.num_vars() != first.num_vars() {
                return Err(Error::LengthMismatch {
                    expected: first.num_vars(),
                    got: f.num_vars(),
                });
            }
        }
        Ok(match family.iter().filter_map(MSeries::precision).min() {
            Some(t) => family.iter().map(|f| f.truncate(t)).collect(),
            None => family.to_vec(),
        })
    }

    fn key_capacity(family: &[Self]) -> Option<u128> {
        let t = family.iter().filter_map(MSeries::precision).min()?;
        let m = family[0].num_vars() as u128;
        // monomials of total degree < t
        Some(binomial(u128::from(t) - 1 + m, m))
    }
}

/// One elementary column operation on `A` (and on `g`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ColumnOp {
    Swap {
        a: usize,
        b: usize,
    },
    /// column `target` += `factor` * column `source`
    AddScaled {
        target: usize,
        source: usize,
        factor: FieldElement,
    },
    Scale {
        column: usize,
        factor: FieldElement,
    },
}

impl ColumnOp {
    /// Determinant of the elementary matrix.
    pub fn determinant(&self, spec: FieldSpec) -> FieldElement {
        match self {
            ColumnOp::Swap { .. } => -spec.one(),
            ColumnOp::AddScaled { .. } => spec.one(),
            ColumnOp::Scale { factor, .. } => factor.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionStatus {
    DistinctOrders,
    /// A nonzero `c` with `sum c_i f_i = 0` up to the working precision,
    /// normalized so its first nonzero entry is 1.
    DependenceFound(Vec<FieldElement>),
    /// The common precision window cannot hold `n` distinct orders.
    PrecisionExhausted,
}

impl ReductionStatus {
    pub fn name(&self) -> &'static str {
        match self {
            ReductionStatus::DistinctOrders => "DistinctOrders",
            ReductionStatus::DependenceFound(_) => "DependenceFound",
            ReductionStatus::PrecisionExhausted => "PrecisionExhausted",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReductionResult<S> {
    pub g: Vec<S>,
    /// `A[i][j]`: coefficient of `f_i` in `g_j`.
    pub transform: Matrix,
    pub ops: Vec<ColumnOp>,
    pub status: ReductionStatus,
    spec: FieldSpec,
}

impl<S: Reducible> ReductionResult<S> {
    /// `det A` as the running product over the recorded operations.
    pub fn det_transform(&self) -> FieldElement {
        self.ops
            .iter()
            .fold(self.spec.one(), |acc, op| &acc * &op.determinant(self.spec))
    }

    /// Leading keys of `g` (`None` for a column that is zero up to precision).
    pub fn orders(&self) -> Vec<Option<S::Key>> {
        self.g.iter().map(|s| s.lead().map(|(k, _)| k)).collect()
    }

    pub fn to_json(&self) -> Value {
        let a: Vec<Vec<String>> = self
            .transform
            .iter()
            .map(|row| row.iter().map(ToString::to_string).collect())
            .collect();
        let mut v = json!({
            "g": self.g.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "A": a,
            "det_A": self.det_transform().to_string(),
            "status": self.status.name(),
            "orders": self.orders(),
        });
        if let ReductionStatus::DependenceFound(c) = &self.status {
            v["dependence"] = json!(c.iter().map(ToString::to_string).collect::<Vec<_>>());
        }
        v
    }
}

fn reduce<S: Reducible>(family: &[S]) -> Result<ReductionResult<S>> {
    let mut g = S::prepare(family)?;
    let n = g.len();
    let spec = g[0].field();
    let mut a = linalg::identity(n, spec);
    let mut ops = Vec::new();
    let result = |g, a, ops, status| ReductionResult {
        g,
        transform: a,
        ops,
        status,
        spec,
    };
    if S::key_capacity(&g).is_some_and(|cap| cap < n as u128) {
        return Ok(result(g, a, ops, ReductionStatus::PrecisionExhausted));
    }
    loop {
        let mut leads = Vec::with_capacity(n);
        for (j, s) in g.iter().enumerate() {
            match s.lead() {
                Some(l) => leads.push(l),
                None => {
                    let c = linalg::normalize_vector((0..n).map(|i| a[i][j].clone()).collect());
                    return Ok(result(g, a, ops, ReductionStatus::DependenceFound(c)));
                }
            }
        }
        // smallest key carried by two or more columns
        let mut shared: Option<&S::Key> = None;
        for (i, (k, _)) in leads.iter().enumerate() {
            if leads[i + 1..].iter().any(|(k2, _)| k2 == k) && shared.is_none_or(|s| k < s) {
                shared = Some(k);
            }
        }
        let Some(key) = shared.cloned() else {
            return Ok(result(g, a, ops, ReductionStatus::DistinctOrders));
        };
        let mut cols = (0..n).filter(|&j| leads[j].0 == key);
        let p = cols.next().expect("shared key");
        let inv = leads[p].1.inv()?;
        for j in cols {
            let factor = -(&leads[j].1 * &inv);
            g[j] = g[j].add_scaled(&g[p], &factor);
            for row in a.iter_mut() {
                row[j] = &row[j] + &(&factor * &row[p]);
            }
            ops.push(ColumnOp::AddScaled {
                target: j,
                source: p,
                factor,
            });
        }
    }
}

/// Eliminates until the orders of the family are pairwise distinct.
pub fn reduce_to_distinct_orders(family: &[Series]) -> Result<ReductionResult<Series>> {
    reduce(family)
}

/// Eliminates until the lex-leading exponents are pairwise distinct.
pub fn reduce_to_distinct_leading_exponents(family: &[MSeries]) -> Result<ReductionResult<MSeries>> {
    reduce(family)
}

/// Checks `[g] = [f] * A` within the common precision.
pub fn check_transform(f: &[Series], result: &ReductionResult<Series>) -> Result<bool> {
    let f = Series::prepare(f)?;
    for (j, gj) in result.g.iter().enumerate() {
        let col: Vec<FieldElement> = result.transform.iter().map(|row| row[j].clone()).collect();
        if !Series::linear_combine(&f, &col)?.sub(gj).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `W(g) = W(f) * det A` coefficientwise within the common window.
pub fn verify_wronskian_transfer(f: &[Series], result: &ReductionResult<Series>) -> Result<bool> {
    if result.status != ReductionStatus::DistinctOrders {
        return Err(Error::Malformed(format!(
            "transfer check needs a DistinctOrders reduction, got {}",
            result.status.name()
        )));
    }
    let wf = wronskian(&Series::prepare(f)?)?;
    let wg = wronskian(&result.g)?;
    Ok(wg.sub(&wf.scale(&result.det_transform())).is_zero())
}
