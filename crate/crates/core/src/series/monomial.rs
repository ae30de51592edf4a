use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{var_name, write_term};
use crate::field::FieldElement;

/// Exponent vector of a multivariate monomial, one entry per variable.
pub type MultiIndex = Vec<u32>;

/// Lexicographic comparison of exponent vectors, first variable compared first.
///
/// This is the monomial order used for multivariate leading monomials: the
/// leading monomial of a series is its lex-*minimal* term, so `x2^3` leads
/// `x1*x2 + x2^3` because `(0,3) < (1,1)`.
pub fn lex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    a.cmp(b)
}

/// A single term `coefficient * x^exponent`. The exponent is an `i64` for
/// univariate (possibly Laurent) monomials and a [`MultiIndex`] otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial<E> {
    pub coefficient: FieldElement,
    pub exponent: E,
}

impl<E> Monomial<E> {
    pub fn new(coefficient: FieldElement, exponent: E) -> Self {
        Monomial { coefficient, exponent }
    }
}

impl fmt::Display for Monomial<i64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_term(&mut out, &self.coefficient, &[("x".to_string(), self.exponent)], true);
        f.write_str(&out)
    }
}

impl fmt::Display for Monomial<MultiIndex> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.exponent.len();
        let powers: Vec<(String, i64)> = self
            .exponent
            .iter()
            .enumerate()
            .map(|(i, &e)| (var_name(i, m), i64::from(e)))
            .collect();
        let mut out = String::new();
        write_term(&mut out, &self.coefficient, &powers, true);
        f.write_str(&out)
    }
}

impl Serialize for Monomial<i64> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for Monomial<MultiIndex> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn all_indices(m: usize, max_total: u32) -> Vec<MultiIndex> {
        let mut out = vec![vec![]];
        for _ in 0..m {
            out = out
                .into_iter()
                .flat_map(|v: MultiIndex| {
                    let used: u32 = v.iter().sum();
                    (0..=max_total - used).map(move |e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn lex_is_a_total_order() {
        for m in 1..=3 {
            let idx = all_indices(m, 4);
            for a in &idx {
                for b in &idx {
                    let ab = lex_cmp(a, b);
                    assert_eq!(ab, lex_cmp(b, a).reverse());
                    assert_eq!(ab == Ordering::Equal, a == b);
                    for c in &idx {
                        if ab != Ordering::Greater && lex_cmp(b, c) != Ordering::Greater {
                            assert_ne!(lex_cmp(a, c), Ordering::Greater);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lex_is_compatible_with_products_and_derivatives() {
        let idx = all_indices(3, 4);
        let add = |a: &MultiIndex, b: &MultiIndex| -> MultiIndex { a.iter().zip(b).map(|(x, y)| x + y).collect() };
        for a in &idx {
            for b in &idx {
                for shift in &idx {
                    assert_eq!(lex_cmp(a, b), lex_cmp(&add(a, shift), &add(b, shift)));
                }
                // d/dx_k shifts a nonzero term's exponent down by e_k
                for k in 0..3 {
                    if a[k] > 0 && b[k] > 0 {
                        let mut a2 = a.clone();
                        let mut b2 = b.clone();
                        a2[k] -= 1;
                        b2[k] -= 1;
                        assert_eq!(lex_cmp(a, b), lex_cmp(&a2, &b2));
                    }
                }
            }
        }
    }

    #[test]
    fn display() {
        let q = FieldSpec::RATIONALS;
        assert_eq!(Monomial::new(q.int(-1), -5i64).to_string(), "-x^-5");
        assert_eq!(Monomial::new(q.int(2), 0i64).to_string(), "2");
        assert_eq!(Monomial::new(q.int(45), 6i64).to_string(), "45*x^6");
        assert_eq!(Monomial::new(q.int(1), vec![1u32, 0]).to_string(), "x1");
        assert_eq!(Monomial::new(q.int(-3), vec![2u32, 1]).to_string(), "-3*x1^2*x2");
    }
}
