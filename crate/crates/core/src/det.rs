//! Determinants of matrices over the series rings.
//!
//! Two kernels:
//!
//! * Cofactor expansion, organized row by row: after `k` rows we hold the
//!   determinant of every `k x k` minor on those rows, indexed by its column
//!   set. Adding a row expands each new minor along that row. Families of
//!   matrices sharing their first rows (generalized Wronskians enumerated in
//!   odometer order) reuse the shared prefix.
//! * Fraction-free (Bareiss) elimination for larger univariate matrices. A
//!   truncated power series ring is not an integral domain (`x^3 * x^3 = 0`
//!   modulo `x^5`), so exact Bareiss division is not available on truncated
//!   entries. Instead each entry is lifted to the polynomial formed by its
//!   known coefficients, Bareiss runs exactly over `K[x]`, and the result is
//!   re-truncated to a precision bound valid for the true determinant.

use crate::field::{FieldElement, FieldSpec};
use crate::series::{MSeries, Poly, Series};

/// The ring operations the cofactor kernel needs.
pub trait DetRing: Clone {
    /// Additive identity, exact (it must not lower any precision).
    fn ring_zero(&self) -> Self;
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_sub(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    /// True only for an exact zero.
    fn ring_is_zero(&self) -> bool;
}

impl DetRing for FieldElement {
    fn ring_zero(&self) -> Self {
        self.spec().zero()
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
}

impl DetRing for Series {
    fn ring_zero(&self) -> Self {
        Series::zero(self.spec())
    }
    fn ring_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn ring_is_zero(&self) -> bool {
        self.is_exact_zero()
    }
}

impl DetRing for MSeries {
    fn ring_zero(&self) -> Self {
        MSeries::zero(self.spec(), self.num_vars())
    }
    fn ring_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn ring_is_zero(&self) -> bool {
        self.is_exact_zero()
    }
}

/// Determinants of all `k x k` minors on the first `k` rows of an `n`-column matrix.
#[derive(Clone, Debug)]
pub struct PartialMinors<R> {
    columns: usize,
    rows: usize,
    // indexed by column bitmask; only masks with `rows` bits are populated
    minors: Vec<Option<R>>,
}

impl<R: DetRing> PartialMinors<R> {
    /// Starts from the first row.
    pub fn first_row(row: &[R]) -> Self {
        let n = row.len();
        assert!((1..32).contains(&n), "matrix size out of range");
        let mut minors = vec![None; 1 << n];
        for (c, entry) in row.iter().enumerate() {
            minors[1 << c] = Some(entry.clone());
        }
        PartialMinors {
            columns: n,
            rows: 1,
            minors,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Adds the next row, expanding every new minor along it.
    pub fn push_row(&self, row: &[R]) -> Self {
        let n = self.columns;
        assert_eq!(row.len(), n);
        assert!(self.rows < n, "matrix already square");
        let k = self.rows; // index of the new row
        let zero = row[0].ring_zero();
        let mut minors = vec![None; 1 << n];
        for mask in 0usize..(1 << n) {
            if mask.count_ones() as usize != k + 1 {
                continue;
            }
            let mut acc = zero.clone();
            let mut pos = 0;
            for (c, entry) in row.iter().enumerate() {
                if mask & (1 << c) == 0 {
                    continue;
                }
                let sub = self.minors[mask & !(1 << c)].as_ref().expect("minor present");
                if !entry.ring_is_zero() && !sub.ring_is_zero() {
                    let term = entry.ring_mul(sub);
                    acc = if (k + pos).is_multiple_of(2) {
                        acc.ring_add(&term)
                    } else {
                        acc.ring_sub(&term)
                    };
                }
                pos += 1;
            }
            minors[mask] = Some(acc);
        }
        PartialMinors {
            columns: n,
            rows: k + 1,
            minors,
        }
    }

    /// True when every current minor is exactly zero, so every completion of
    /// these rows has determinant zero.
    pub fn all_zero(&self) -> bool {
        self.minors.iter().flatten().all(DetRing::ring_is_zero)
    }

    /// The determinant, once all rows are in.
    pub fn determinant(&self) -> Option<&R> {
        (self.rows == self.columns)
            .then(|| self.minors[(1 << self.columns) - 1].as_ref())
            .flatten()
    }
}

/// Determinant of a square matrix by cofactor expansion.
pub fn cofactor_determinant<R: DetRing>(m: &[Vec<R>]) -> R {
    let mut state = PartialMinors::first_row(&m[0]);
    for row in &m[1..] {
        state = state.push_row(row);
    }
    state.determinant().expect("square matrix").clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetMethod {
    /// Cofactor expansion up to 4x4, Bareiss beyond.
    Auto,
    Cofactor,
    Bareiss,
}

/// Determinant of a square matrix of univariate series.
pub fn series_determinant(m: &[Vec<Series>], method: DetMethod) -> Series {
    let use_bareiss = match method {
        DetMethod::Auto => m.len() > 4,
        DetMethod::Cofactor => false,
        DetMethod::Bareiss => true,
    };
    if use_bareiss {
        bareiss_series_determinant(m)
    } else {
        cofactor_determinant(m)
    }
}

/// Precision bound for the determinant of a matrix of series.
///
/// If entry `e` is known modulo `x^T_e` and has order at least `w_e`, a
/// Leibniz term through entry `(i, j)` has its error in degree at least
/// `T_ij + sum of the orders of the other factors`, and those factors lie in
/// the other rows and columns. Taking the smallest order per remaining row
/// (outside column `j`) gives a lower bound for every such term. Terms
/// forced through an exactly-zero row carry no error. Returns `None` when
/// every entry is exact.
fn determinant_precision(m: &[Vec<Series>]) -> Option<i64> {
    let n = m.len();
    let mut bound: Option<i64> = None;
    let mut any_truncated = false;
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let Some(t) = e.precision() else { continue };
            any_truncated = true;
            let mut rest = 0i64;
            let mut forced_zero = false;
            for (l, other) in m.iter().enumerate() {
                if l == i {
                    continue;
                }
                match (0..n)
                    .filter(|&c| c != j && !other[c].is_exact_zero())
                    .map(|c| order_bound(&other[c]))
                    .min()
                {
                    Some(w) => rest += w,
                    None => forced_zero = true,
                }
            }
            if !forced_zero {
                let candidate = t + rest;
                bound = Some(bound.map_or(candidate, |b| b.min(candidate)));
            }
        }
    }
    match (any_truncated, bound) {
        (false, _) => None,
        (true, Some(b)) => Some(b),
        // every error term vanishes exactly; any precision is valid
        (true, None) => Some(m.iter().flatten().filter_map(Series::precision).max().unwrap_or(0)),
    }
}

fn order_bound(e: &Series) -> i64 {
    e.order().or(e.precision()).unwrap_or(0)
}

fn bareiss_series_determinant(m: &[Vec<Series>]) -> Series {
    let n = m.len();
    let spec: FieldSpec = m[0][0].spec();
    if m.iter().any(|row| row.iter().all(Series::is_exact_zero)) {
        return Series::zero(spec);
    }
    let precision = determinant_precision(m);
    let shift = m.iter().flatten().map(Series::valuation_offset).min().unwrap_or(0);
    let lift = |e: &Series| -> Poly {
        let end = e.precision().unwrap_or_else(|| e.degree().map_or(shift, |d| d + 1));
        Poly::new(spec, e.window(shift, end.max(shift)))
    };
    let mut a: Vec<Vec<Poly>> = m.iter().map(|row| row.iter().map(lift).collect()).collect();
    let mut negate = false;
    let mut prev = Poly::constant(spec.one());
    let mut det = Poly::zero(spec);
    'outer: {
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        negate = !negate;
                    }
                    None => break 'outer,
                }
            }
            if k == n - 1 {
                det = a[k][k].clone();
                break 'outer;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                    a[i][j] = num
                        .div_exact(&prev)
                        .expect("nonzero divisor")
                        .expect("Bareiss division is exact");
                }
            }
            prev = a[k][k].clone();
        }
    }
    if negate {
        det = det.neg();
    }
    // det(lifted) = x^(-n*shift) det(known parts)
    let base = n as i64 * shift;
    let terms = det
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| (base + i as i64, c.clone()));
    match precision {
        Some(t) => Series::from_terms(spec, terms, Some(t)).expect("uniform field"),
        None => Series::from_terms(spec, terms, None).expect("uniform field"),
    }
}
