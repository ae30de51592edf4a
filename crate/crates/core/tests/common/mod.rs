//! Reference implementations that share no code with the library: sparse
//! BigRational polynomials, permutation-expansion determinants and textbook
//! Gaussian elimination. Slow, obvious, and used only as test oracles.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use wronskian_core::{FieldElement, FieldSpec, MSeries, Series};

pub type Q = BigRational;
/// Sparse Laurent polynomial in one variable, no zero coefficients stored.
pub type LPoly = BTreeMap<i64, Q>;
/// Sparse polynomial in several variables.
pub type MPoly = BTreeMap<Vec<u32>, Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_q(c: &FieldElement) -> Q {
    c.as_rational().expect("rational coefficient").clone()
}

pub fn from_q(c: &Q) -> FieldElement {
    FieldSpec::RATIONALS.rational(c).expect("finite rational")
}

fn insert<K: Ord>(p: &mut BTreeMap<K, Q>, k: K, c: Q) {
    let slot = p.entry(k).or_insert_with(Q::zero);
    *slot += c;
    p.retain(|_, v| !v.is_zero());
}

pub fn lp_from_series(s: &Series) -> LPoly {
    s.terms().map(|(e, c)| (e, to_q(c))).collect()
}

pub fn lp_to_series(p: &LPoly) -> Series {
    Series::from_terms(FieldSpec::RATIONALS, p.iter().map(|(&e, c)| (e, from_q(c))), None).unwrap()
}

pub fn lp_from_terms(terms: &[(i64, i64)]) -> LPoly {
    let mut p = LPoly::new();
    for &(e, c) in terms {
        insert(&mut p, e, q(c));
    }
    p
}

pub fn lp_add(a: &LPoly, b: &LPoly) -> LPoly {
    let mut out = a.clone();
    for (e, c) in b {
        insert(&mut out, *e, c.clone());
    }
    out
}

pub fn lp_scale(a: &LPoly, c: &Q) -> LPoly {
    a.iter()
        .map(|(e, v)| (*e, v * c))
        .filter(|(_, v)| !v.is_zero())
        .collect()
}

pub fn lp_mul(a: &LPoly, b: &LPoly) -> LPoly {
    let mut out = LPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            insert(&mut out, ea + eb, ca * cb);
        }
    }
    out
}

pub fn lp_deriv(a: &LPoly) -> LPoly {
    a.iter()
        .filter(|(e, _)| **e != 0)
        .map(|(e, c)| (e - 1, c * q(*e)))
        .collect()
}

pub fn lp_deriv_k(a: &LPoly, k: usize) -> LPoly {
    (0..k).fold(a.clone(), |acc, _| lp_deriv(&acc))
}

/// All permutations of `0..n` with their signs.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    if n == 0 {
        return vec![(Vec::new(), true)];
    }
    let mut out = Vec::new();
    for (p, even) in permutations(n - 1) {
        // insert n-1 at every position; moving it left by k transpositions flips parity k times
        for pos in 0..=p.len() {
            let mut v = p.clone();
            v.insert(pos, n - 1);
            let shifts = p.len() - pos;
            out.push((v, even == (shifts % 2 == 0)));
        }
    }
    out
}

/// Leibniz expansion over any commutative ring given by closures.
pub fn leibniz<T: Clone>(
    m: &[Vec<T>],
    one: T,
    zero: T,
    mul: impl Fn(&T, &T) -> T,
    add: impl Fn(&T, &T) -> T,
    neg: impl Fn(&T) -> T,
) -> T {
    let n = m.len();
    let mut acc = zero;
    for (perm, even) in permutations(n) {
        let mut term = one.clone();
        for (row, &col) in perm.iter().enumerate() {
            term = mul(&term, &m[row][col]);
        }
        acc = if even { add(&acc, &term) } else { add(&acc, &neg(&term)) };
    }
    acc
}

pub fn det_q(m: &[Vec<Q>]) -> Q {
    leibniz(m, Q::one(), Q::zero(), |a, b| a * b, |a, b| a + b, |a| -a)
}

/// Wronskian by explicit differentiation and permutation expansion.
pub fn oracle_wronskian(family: &[LPoly]) -> LPoly {
    let n = family.len();
    let rows: Vec<Vec<LPoly>> = (0..n)
        .map(|k| family.iter().map(|f| lp_deriv_k(f, k)).collect())
        .collect();
    leibniz(&rows, lp_from_terms(&[(0, 1)]), LPoly::new(), lp_mul, lp_add, |a| {
        lp_scale(a, &q(-1))
    })
}

/// Textbook row reduction.
pub fn rank_q(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &pivot;
                for k in 0..cols {
                    let v = &rows[rank][k] * &f;
                    rows[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of a family of sparse polynomials: columns are members.
pub fn family_rank<K: Ord + Clone>(family: &[BTreeMap<K, Q>]) -> usize {
    let keys: std::collections::BTreeSet<K> = family.iter().flat_map(|f| f.keys().cloned()).collect();
    let rows: Vec<Vec<Q>> = keys
        .iter()
        .map(|k| {
            family
                .iter()
                .map(|f| f.get(k).cloned().unwrap_or_else(Q::zero))
                .collect()
        })
        .collect();
    if rows.is_empty() {
        return 0;
    }
    rank_q(rows)
}

pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let inv = |a: u64| {
        let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, piv);
        let ip = inv(rows[rank][c]);
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_multiple_of(p) {
                let f = rows[r][c] * ip % p;
                for k in 0..cols {
                    rows[r][k] = (rows[r][k] + p - f * rows[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn vandermonde_q(d: &[i64]) -> Q {
    let mut acc = Q::one();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            acc *= q(d[j] - d[i]);
        }
    }
    acc
}

pub fn falling_q(d: i64, k: usize) -> Q {
    (0..k as i64).fold(Q::one(), |acc, i| acc * q(d - i))
}

// multivariate

pub fn mp_from_mseries(s: &MSeries) -> MPoly {
    s.terms().map(|(e, c)| (e.clone(), to_q(c))).collect()
}

pub fn mp_to_mseries(p: &MPoly, m: usize) -> MSeries {
    MSeries::from_terms(
        FieldSpec::RATIONALS,
        m,
        p.iter().map(|(e, c)| (e.clone(), from_q(c))),
        None,
    )
    .unwrap()
}

pub fn mp_add(a: &MPoly, b: &MPoly) -> MPoly {
    let mut out = a.clone();
    for (e, c) in b {
        insert(&mut out, e.clone(), c.clone());
    }
    out
}

pub fn mp_scale(a: &MPoly, c: &Q) -> MPoly {
    a.iter()
        .map(|(e, v)| (e.clone(), v * c))
        .filter(|(_, v)| !v.is_zero())
        .collect()
}

pub fn mp_mul(a: &MPoly, b: &MPoly) -> MPoly {
    let mut out = MPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            insert(&mut out, e, ca * cb);
        }
    }
    out
}

/// `D^j`: differentiate `j[v]` times in variable `v`, term by term.
pub fn mp_deriv(a: &MPoly, j: &[u32]) -> MPoly {
    let mut out = MPoly::new();
    for (e, c) in a {
        if e.iter().zip(j).any(|(x, y)| x < y) {
            continue;
        }
        let mut coef = c.clone();
        for (x, y) in e.iter().zip(j) {
            coef *= falling_q(i64::from(*x), *y as usize);
        }
        let ne: Vec<u32> = e.iter().zip(j).map(|(x, y)| x - y).collect();
        insert(&mut out, ne, coef);
    }
    out
}

pub fn oracle_gen_wronskian(family: &[MPoly], ops: &[Vec<u32>], m: usize) -> MPoly {
    let rows: Vec<Vec<MPoly>> = ops
        .iter()
        .map(|j| family.iter().map(|f| mp_deriv(f, j)).collect())
        .collect();
    let one: MPoly = [(vec![0; m], Q::one())].into_iter().collect();
    leibniz(&rows, one, MPoly::new(), mp_mul, mp_add, |a| mp_scale(a, &q(-1)))
}

/// All operator tuples by brute force: every tuple with `|j_s| <= s`, in
/// the same order the library documents (last row fastest, each row in
/// word-lex order of its derivative word).
pub fn brute_specs(n: usize, m: usize) -> Vec<Vec<Vec<u32>>> {
    fn words(len: usize, m: usize, start: usize) -> Vec<Vec<usize>> {
        if len == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for v in start..m {
            for mut w in words(len - 1, m, v) {
                w.insert(0, v);
                out.push(w);
            }
        }
        out
    }
    let row = |s: usize| -> Vec<Vec<u32>> {
        let mut all: Vec<Vec<usize>> = (0..=s).flat_map(|len| words(len, m, 0)).collect();
        all.sort();
        all.into_iter()
            .map(|w| {
                let mut j = vec![0u32; m];
                for v in w {
                    j[v] += 1;
                }
                j
            })
            .collect()
    };
    let mut specs: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
    for s in 0..n {
        let choices = row(s);
        specs = specs
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c.clone());
                    p
                })
            })
            .collect();
    }
    specs
}

pub fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
