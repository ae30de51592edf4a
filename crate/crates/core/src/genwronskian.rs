//! Generalized Wronskians of multivariate families.
//!
//! A generalized Wronskian picks, for each row `s = 0..n-1`, a derivative
//! `D^j = (d/dx1)^j1 ... (d/dxm)^jm` with `|j| <= s`, and takes the
//! determinant of `[D^{j_s} f_i]`.
//!
//! Enumeration order is fixed. Within a row, operators are ordered
//! lexicographically by the word of variable indices they spell
//! (`D1^2*D2` spells `1 1 2`), so for two variables the second row reads
//! `id, D1, D1^2, D1*D2, D2, D2^2`. Across rows the tuples advance like an
//! odometer with the last row turning fastest.

use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use num_integer::binomial;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::det::{cofactor_determinant, DetRing, PartialMinors};
use crate::error::{Error, Result};
use crate::field::{falling_factorial, FieldElement, FieldSpec};
use crate::series::{MSeries, Monomial, MultiIndex};

/// One row operator together with the row it sits in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffOp {
    pub multi_index: MultiIndex,
    pub order_bound: usize,
}

impl DiffOp {
    pub fn new(multi_index: MultiIndex, order_bound: usize) -> Result<Self> {
        let total: u64 = multi_index.iter().map(|&v| u64::from(v)).sum();
        if total > order_bound as u64 {
            return Err(Error::Malformed(format!(
                "operator of order {total} in row {order_bound}"
            )));
        }
        Ok(DiffOp {
            multi_index,
            order_bound,
        })
    }

    pub fn total_order(&self) -> u32 {
        self.multi_index.iter().sum()
    }

    pub fn label(&self) -> String {
        op_label(&self.multi_index)
    }
}

fn op_label(j: &[u32]) -> String {
    let parts: Vec<String> = j
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(v, &k)| {
            if k == 1 {
                format!("D{}", v + 1)
            } else {
                format!("D{}^{k}", v + 1)
            }
        })
        .collect();
    if parts.is_empty() {
        "id".to_string()
    } else {
        parts.join("*")
    }
}

/// A choice of operator for every row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenWronskianSpec {
    ops: Vec<MultiIndex>,
}

impl GenWronskianSpec {
    pub fn new(ops: Vec<MultiIndex>) -> Result<Self> {
        let m = ops.first().ok_or(Error::EmptyFamily)?.len();
        if m == 0 {
            return Err(Error::Malformed("operators need at least one variable".into()));
        }
        for (s, j) in ops.iter().enumerate() {
            if j.len() != m {
                return Err(Error::LengthMismatch {
                    expected: m,
                    got: j.len(),
                });
            }
            DiffOp::new(j.clone(), s)?;
        }
        Ok(GenWronskianSpec { ops })
    }

    /// The ordinary Wronskian in variable `var`: row `s` is `(d/dx_var)^s`.
    pub fn ordinary(n: usize, m: usize, var: usize) -> Result<Self> {
        if var >= m {
            return Err(Error::VariableOutOfRange { index: var, vars: m });
        }
        Self::new(
            (0..n)
                .map(|s| {
                    let mut j = vec![0; m];
                    j[var] = s as u32;
                    j
                })
                .collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.ops.len()
    }

    pub fn num_vars(&self) -> usize {
        self.ops[0].len()
    }

    pub fn ops(&self) -> &[MultiIndex] {
        &self.ops
    }

    pub fn diff_ops(&self) -> Vec<DiffOp> {
        self.ops
            .iter()
            .enumerate()
            .map(|(s, j)| DiffOp {
                multi_index: j.clone(),
                order_bound: s,
            })
            .collect()
    }

    /// `(id, D1, D2)` style rendering.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.ops.iter().map(|j| op_label(j)).collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for GenWronskianSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(&self.ops).expect("plain integers"))
    }
}

impl FromStr for GenWronskianSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let ops: Vec<MultiIndex> =
            serde_json::from_str(s).map_err(|e| Error::Malformed(format!("operator list: {e}")))?;
        Self::new(ops)
    }
}

impl Serialize for GenWronskianSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.ops.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GenWronskianSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let ops = Vec::<MultiIndex>::deserialize(d)?;
        Self::new(ops).map_err(serde::de::Error::custom)
    }
}

fn word(j: &[u32]) -> Vec<usize> {
    j.iter()
        .enumerate()
        .flat_map(|(v, &k)| std::iter::repeat_n(v, k as usize))
        .collect()
}

/// All operators allowed in row `s` over `m` variables, in enumeration order.
pub fn row_choices(s: usize, m: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; m];
    fn rec(var: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if var == cur.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[var] = k;
            rec(var + 1, left - k, cur, out);
        }
        cur[var] = 0;
    }
    rec(0, s as u32, &mut cur, &mut out);
    out.sort_by_key(|j| word(j));
    out
}

/// `prod_{s<n} C(s+m, m)`, or `None` on overflow.
pub fn spec_count(n: usize, m: usize) -> Option<u128> {
    (0..n).try_fold(1u128, |acc, s| acc.checked_mul(binomial((s + m) as u128, m as u128)))
}

/// Streams every spec for an `n`-member, `m`-variable family in enumeration order.
#[derive(Clone, Debug)]
pub struct GenSpecIter {
    choices: Vec<Vec<MultiIndex>>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for GenSpecIter {
    type Item = GenWronskianSpec;

    fn next(&mut self) -> Option<GenWronskianSpec> {
        if self.done {
            return None;
        }
        let spec = GenWronskianSpec {
            ops: self
                .digits
                .iter()
                .zip(&self.choices)
                .map(|(&d, c)| c[d].clone())
                .collect(),
        };
        self.done = true;
        for row in (0..self.digits.len()).rev() {
            self.digits[row] += 1;
            if self.digits[row] < self.choices[row].len() {
                self.done = false;
                break;
            }
            self.digits[row] = 0;
        }
        Some(spec)
    }
}

pub fn gen_wronskian_specs(n: usize, m: usize) -> GenSpecIter {
    GenSpecIter {
        choices: (0..n).map(|s| row_choices(s, m)).collect(),
        digits: vec![0; n],
        done: n == 0 || m == 0,
    }
}

/// Materialized enumeration; prefer [`gen_wronskian_specs`] for large counts.
pub fn enumerate_gen_wronskian_specs(n: usize, m: usize) -> Vec<GenWronskianSpec> {
    gen_wronskian_specs(n, m).collect()
}

fn check_mfamily(family: &[MSeries]) -> Result<(FieldSpec, usize)> {
    let first = family.first().ok_or(Error::EmptyFamily)?;
    let (spec, m) = (first.spec(), first.num_vars());
    for f in family {
        if f.spec() != spec {
            return Err(Error::FieldMismatch(spec, f.spec()));
        }
        if f.num_vars() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                got: f.num_vars(),
            });
        }
    }
    Ok((spec, m))
}

fn check_shape(spec: &GenWronskianSpec, n: usize, m: usize) -> Result<()> {
    if spec.size() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: spec.size(),
        });
    }
    if spec.num_vars() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            got: spec.num_vars(),
        });
    }
    Ok(())
}

/// `det [D^{j_s} f_i]`, valid to the pessimistic precision of its entries.
pub fn generalized_wronskian(family: &[MSeries], spec: &GenWronskianSpec) -> Result<MSeries> {
    let (_, m) = check_mfamily(family)?;
    check_shape(spec, family.len(), m)?;
    let matrix = spec
        .ops()
        .iter()
        .map(|j| family.iter().map(|f| f.apply_derivative(j)).collect())
        .collect::<Result<Vec<Vec<MSeries>>>>()?;
    Ok(cofactor_determinant(&matrix))
}

/// `det [(alpha_i)_{j_s}]` with the multi-index falling factorial
/// `(alpha)_j = (alpha_1)_{j_1} ... (alpha_m)_{j_m}`.
pub fn monomial_gen_wronskian_matrix(
    exponents: &[MultiIndex],
    spec: &GenWronskianSpec,
    field: FieldSpec,
) -> Result<FieldElement> {
    let m = exponents.first().ok_or(Error::EmptyFamily)?.len();
    if let Some(bad) = exponents.iter().find(|a| a.len() != m) {
        return Err(Error::LengthMismatch {
            expected: m,
            got: bad.len(),
        });
    }
    check_shape(spec, exponents.len(), m)?;
    let matrix: Vec<Vec<FieldElement>> = spec
        .ops()
        .iter()
        .map(|j| exponents.iter().map(|a| multi_falling(a, j, field)).collect())
        .collect();
    Ok(cofactor_determinant(&matrix))
}

pub(crate) fn multi_falling(alpha: &[u32], j: &[u32], field: FieldSpec) -> FieldElement {
    alpha.iter().zip(j).fold(field.one(), |acc, (&a, &k)| {
        &acc * &falling_factorial(i64::from(a), k, field)
    })
}

/// The generalized Wronskian of a family of monomials, in closed form:
/// `prod a_i * x^(sum alpha_i - sum j_s) * det [(alpha_i)_{j_s}]`.
pub fn monomial_gen_wronskian_closed_form(
    monomials: &[Monomial<MultiIndex>],
    spec: &GenWronskianSpec,
) -> Result<Option<Monomial<MultiIndex>>> {
    let field = monomials.first().ok_or(Error::EmptyFamily)?.coefficient.spec();
    let exponents: Vec<MultiIndex> = monomials.iter().map(|t| t.exponent.clone()).collect();
    let mut coefficient = monomial_gen_wronskian_matrix(&exponents, spec, field)?;
    for t in monomials {
        coefficient = coefficient.try_mul(&t.coefficient)?;
    }
    if coefficient.is_zero() {
        return Ok(None);
    }
    let m = spec.num_vars();
    let exponent = (0..m)
        .map(|v| {
            let up: u32 = exponents.iter().map(|a| a[v]).sum();
            let down: u32 = spec.ops().iter().map(|j| j[v]).sum();
            up - down
        })
        .collect();
    Ok(Some(Monomial::new(coefficient, exponent)))
}

/// `prod_{i<j} (L_j - L_i)` with `L_i = u_1 alpha_{i,1} + ... + u_m alpha_{i,m}`,
/// as an exact polynomial in `u_1..u_m`. It vanishes iff two exponents coincide.
pub fn phi_vandermonde_of_linear_forms(exponents: &[MultiIndex], m: usize, field: FieldSpec) -> Result<MSeries> {
    if field.characteristic() != 0 {
        return Err(Error::PositiveCharacteristic(field));
    }
    if m == 0 {
        return Err(Error::Malformed("phi needs at least one variable".into()));
    }
    if let Some(bad) = exponents.iter().find(|a| a.len() != m) {
        return Err(Error::LengthMismatch {
            expected: m,
            got: bad.len(),
        });
    }
    let mut acc = MSeries::monomial(field.one(), vec![0; m]);
    for (i, ai) in exponents.iter().enumerate() {
        for aj in &exponents[i + 1..] {
            let terms = (0..m).map(|k| {
                let mut e = vec![0; m];
                e[k] = 1;
                (e, field.int(i64::from(aj[k]) - i64::from(ai[k])))
            });
            acc = acc.mul(&MSeries::from_terms(field, m, terms, None)?);
        }
    }
    Ok(acc)
}

/// Walks every spec in enumeration order with the rows `rows[j]` supplied
/// per operator, calling `visit(spec, determinant)` at each leaf.
///
/// Determinants of shared row prefixes are computed once. When every minor
/// of a prefix is exactly zero, all completions are reported as zero
/// without further work. Returns the value `visit` broke with, if any.
fn walk<R, B>(
    n: usize,
    m: usize,
    rows: &HashMap<MultiIndex, Vec<R>>,
    zero: &R,
    visit: &mut dyn FnMut(&[MultiIndex], &R) -> ControlFlow<B>,
) -> Option<B>
where
    R: DetRing,
{
    let choices: Vec<Vec<MultiIndex>> = (0..n).map(|s| row_choices(s, m)).collect();
    let mut chosen: Vec<MultiIndex> = Vec::with_capacity(n);
    fn rec<R: DetRing, B>(
        choices: &[Vec<MultiIndex>],
        rows: &HashMap<MultiIndex, Vec<R>>,
        zero: &R,
        state: Option<&PartialMinors<R>>,
        dead: bool,
        chosen: &mut Vec<MultiIndex>,
        visit: &mut dyn FnMut(&[MultiIndex], &R) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let s = chosen.len();
        if s == choices.len() {
            let det = if dead {
                zero
            } else {
                state.and_then(PartialMinors::determinant).expect("square")
            };
            return visit(chosen, det);
        }
        let dead = dead || state.is_some_and(PartialMinors::all_zero);
        for j in &choices[s] {
            chosen.push(j.clone());
            let flow = if dead {
                rec(choices, rows, zero, None, true, chosen, visit)
            } else {
                let row = &rows[j];
                let next = match state {
                    None => PartialMinors::first_row(row),
                    Some(st) => st.push_row(row),
                };
                rec(choices, rows, zero, Some(&next), false, chosen, visit)
            };
            chosen.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
    match rec(&choices, rows, zero, None, false, &mut chosen, visit) {
        ControlFlow::Break(b) => Some(b),
        ControlFlow::Continue(()) => None,
    }
}

fn all_ops(n: usize, m: usize) -> Vec<MultiIndex> {
    let mut v: Vec<MultiIndex> = row_choices(n.saturating_sub(1), m);
    v.sort();
    v
}

/// Evaluates every generalized Wronskian of `family` in enumeration order.
///
/// `visit` receives each spec and its value and may stop the walk early;
/// the value it breaks with is returned.
pub fn for_each_generalized_wronskian<B>(
    family: &[MSeries],
    mut visit: impl FnMut(&GenWronskianSpec, &MSeries) -> ControlFlow<B>,
) -> Result<Option<B>> {
    let (spec, m) = check_mfamily(family)?;
    let n = family.len();
    let mut rows = HashMap::new();
    for j in all_ops(n, m) {
        let row = family
            .iter()
            .map(|f| f.apply_derivative(&j))
            .collect::<Result<Vec<_>>>()?;
        rows.insert(j, row);
    }
    let zero = MSeries::zero(spec, m);
    Ok(walk(n, m, &rows, &zero, &mut |ops, det| {
        visit(&GenWronskianSpec { ops: ops.to_vec() }, det)
    }))
}

/// The first spec (in enumeration order) whose monomial matrix
/// `det [(alpha_i)_{j_s}]` on the given exponents is nonzero.
pub fn first_monomial_witness(
    exponents: &[MultiIndex],
    field: FieldSpec,
) -> Result<Option<(GenWronskianSpec, FieldElement)>> {
    let m = exponents.first().ok_or(Error::EmptyFamily)?.len();
    if m == 0 {
        return Err(Error::Malformed("exponents need at least one variable".into()));
    }
    if let Some(bad) = exponents.iter().find(|a| a.len() != m) {
        return Err(Error::LengthMismatch {
            expected: m,
            got: bad.len(),
        });
    }
    let n = exponents.len();
    let rows: HashMap<MultiIndex, Vec<FieldElement>> = all_ops(n, m)
        .into_iter()
        .map(|j| {
            let row = exponents.iter().map(|a| multi_falling(a, &j, field)).collect();
            (j, row)
        })
        .collect();
    Ok(walk(n, m, &rows, &field.zero(), &mut |ops, det| {
        if det.is_zero() {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break((GenWronskianSpec { ops: ops.to_vec() }, det.clone()))
        }
    }))
}
