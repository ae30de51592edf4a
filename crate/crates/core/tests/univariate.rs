mod common;

use common::*;
use num_traits::Zero;
use proptest::prelude::*;
use wronskian_core::reduction::check_transform;
use wronskian_core::wronskian::monomial_wronskian_factors;
use wronskian_core::{
    certify_univariate, falling_factorial, falling_factorial_matrix_det, monomial_wronskian_closed_form, rank_oracle,
    reduce_to_distinct_orders, vandermonde, verify_certificate, verify_wronskian_transfer, wronskian, FieldSpec,
    Monomial, ReductionStatus, Series, Verdict,
};

const QQ: FieldSpec = FieldSpec::RATIONALS;

fn coeff() -> impl Strategy<Value = i64> {
    (-9i64..=9).prop_filter("nonzero", |c| *c != 0)
}

fn laurent_poly(lo: i64, hi: i64, max_terms: usize) -> impl Strategy<Value = LPoly> {
    prop::collection::vec((lo..=hi, -9i64..=9), 1..=max_terms).prop_map(|t| lp_from_terms(&t))
}

fn poly_family(n: std::ops::RangeInclusive<usize>, deg: i64) -> impl Strategy<Value = Vec<LPoly>> {
    prop::collection::vec(laurent_poly(0, deg, 5), n)
}

fn series(p: &LPoly) -> Series {
    lp_to_series(p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn wronskian_matches_permutation_expansion(fam in poly_family(1..=4, 8)) {
        let lib = wronskian(&fam.iter().map(series).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(lp_from_series(&lib), oracle_wronskian(&fam));
    }

    #[test]
    fn wronskian_on_laurent_members(fam in prop::collection::vec(laurent_poly(-6, 6, 3), 1..=3)) {
        let lib = wronskian(&fam.iter().map(series).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(lp_from_series(&lib), oracle_wronskian(&fam));
    }

    #[test]
    fn swapping_members_negates(fam in poly_family(2..=4, 6), i in 0usize..4, j in 0usize..4) {
        let n = fam.len();
        let (i, j) = (i % n, j % n);
        prop_assume!(i != j);
        let s: Vec<Series> = fam.iter().map(series).collect();
        let mut t = s.clone();
        t.swap(i, j);
        prop_assert_eq!(wronskian(&t).unwrap(), wronskian(&s).unwrap().neg());
    }

    #[test]
    fn multilinear_in_first_member(fam in poly_family(2..=3, 6), h in laurent_poly(0, 6, 4), a in coeff(), b in coeff()) {
        let s: Vec<Series> = fam.iter().map(series).collect();
        let a_el = QQ.int(a);
        let b_el = QQ.int(b);
        let mut mixed = s.clone();
        mixed[0] = s[0].scale(&a_el).add(&series(&h).scale(&b_el));
        let mut with_h = s.clone();
        with_h[0] = series(&h);
        let lhs = wronskian(&mixed).unwrap();
        let rhs = wronskian(&s).unwrap().scale(&a_el).add(&wronskian(&with_h).unwrap().scale(&b_el));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn closed_form_equals_direct_wronskian(
        terms in prop::collection::vec((-20i64..=20, coeff()), 1..=5)
    ) {
        let monomials: Vec<Monomial<i64>> = terms.iter().map(|&(e, c)| Monomial::new(QQ.int(c), e)).collect();
        let fam: Vec<Series> = monomials.iter().map(|m| Series::monomial(m.coefficient.clone(), m.exponent)).collect();
        let direct = wronskian(&fam).unwrap();
        match monomial_wronskian_closed_form(&monomials).unwrap() {
            None => prop_assert!(direct.is_exact_zero()),
            Some(m) => prop_assert_eq!(direct, Series::monomial(m.coefficient, m.exponent)),
        }
        // the factors themselves, against direct products
        let f = monomial_wronskian_factors(&monomials).unwrap();
        let d: Vec<i64> = terms.iter().map(|t| t.0).collect();
        prop_assert_eq!(to_q(&f.vandermonde), vandermonde_q(&d));
        let prod = terms.iter().fold(q(1), |acc, t| acc * q(t.1));
        prop_assert_eq!(to_q(&f.coefficient_product), prod);
        let n = terms.len() as i64;
        prop_assert_eq!(f.exponent, d.iter().sum::<i64>() - n * (n - 1) / 2);
    }

    #[test]
    fn falling_factorial_det_is_vandermonde(d in prop::collection::vec(-10i64..=10, 1..=6)) {
        let ff = falling_factorial_matrix_det(&d, QQ);
        prop_assert_eq!(&ff, &vandermonde(&d, QQ));
        // and against a permutation expansion of the falling-factorial matrix
        let m: Vec<Vec<Q>> = (0..d.len()).map(|k| d.iter().map(|&x| falling_q(x, k)).collect()).collect();
        prop_assert_eq!(to_q(&ff), det_q(&m));
    }

    #[test]
    fn falling_factorial_reduces_mod_p(d in -30i64..=30, k in 0u32..8, pi in 0usize..4) {
        let p = [2u64, 3, 5, 7][pi];
        let fp = FieldSpec::prime(p).unwrap();
        let exact = falling_q(d, k as usize);
        let expect = fp.rational(&exact).unwrap();
        prop_assert_eq!(falling_factorial(d, k, fp), expect);
        prop_assert_eq!(falling_factorial(p as i64 + d, k, fp), falling_factorial(d, k, fp));
    }

    #[test]
    fn reduction_transfers_the_wronskian(fam in poly_family(1..=4, 10)) {
        let s: Vec<Series> = fam.iter().map(series).collect();
        let r = reduce_to_distinct_orders(&s).unwrap();
        prop_assert!(check_transform(&s, &r).unwrap());
        prop_assert!(r.det_transform().is_one());
        if r.status == ReductionStatus::DistinctOrders {
            prop_assert!(verify_wronskian_transfer(&s, &r).unwrap());
            let orders: Vec<i64> = r.orders().into_iter().map(|o| o.unwrap()).collect();
            let mut sorted = orders.clone();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), orders.len());
        }
    }

    #[test]
    fn leading_monomial_transfer(fam in poly_family(1..=4, 10)) {
        let s: Vec<Series> = fam.iter().map(series).collect();
        let r = reduce_to_distinct_orders(&s).unwrap();
        prop_assume!(r.status == ReductionStatus::DistinctOrders);
        let leads: Vec<Monomial<i64>> = r.g.iter().map(|g| g.leading_monomial().unwrap()).collect();
        let w0 = monomial_wronskian_closed_form(&leads).unwrap().expect("distinct orders give a nonzero closed form");
        let w = wronskian(&r.g).unwrap();
        prop_assert_eq!(w.leading_monomial().unwrap(), w0);
    }

    #[test]
    fn certifier_agrees_with_rank(fam in poly_family(1..=5, 12), combo in prop::collection::vec(-3i64..=3, 5), dep in any::<bool>()) {
        let mut fam = fam;
        if dep && fam.len() >= 2 {
            let last = fam[..fam.len() - 1]
                .iter()
                .zip(&combo)
                .fold(LPoly::new(), |acc, (f, &c)| lp_add(&acc, &lp_scale(f, &q(c))));
            *fam.last_mut().unwrap() = last;
        }
        let s: Vec<Series> = fam.iter().map(series).collect();
        let cert = certify_univariate(&s).unwrap();
        prop_assert!(verify_certificate(&s, &cert).unwrap());
        let independent = family_rank(&fam) == fam.len();
        prop_assert_eq!(cert.verdict == Verdict::Independent, independent);
        if !independent {
            prop_assert_eq!(cert.verdict, Verdict::Dependent);
            prop_assert!(wronskian(&s).unwrap().is_exact_zero());
        }
        prop_assert_eq!(rank_oracle(&s).unwrap().rank, family_rank(&fam));
    }

    #[test]
    fn field_inverse(n in -1000i64..1000, d in 1i64..1000, pi in 0usize..5) {
        prop_assume!(n != 0);
        let spec = if pi == 0 { QQ } else { FieldSpec::prime([2u64, 3, 5, 7, 1_000_003][pi]).unwrap() };
        let a = spec.ratio(&n.into(), &d.into());
        prop_assume!(a.is_ok());
        let a = a.unwrap();
        prop_assume!(!a.is_zero());
        prop_assert!((&a * &a.inv().unwrap()).is_one());
    }
}

#[test]
fn char_p_family_has_zero_wronskian_but_full_rank() {
    for p in [2u64, 3, 5, 7] {
        let fp = FieldSpec::prime(p).unwrap();
        let fam = [Series::monomial(fp.one(), 0), Series::monomial(fp.one(), p as i64)];
        assert!(wronskian(&fam).unwrap().is_exact_zero());
        let rows = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(rank_mod_p(rows, p), 2);
        assert_eq!(rank_oracle(&fam).unwrap().rank, 2);
        assert_eq!(certify_univariate(&fam).unwrap().verdict, Verdict::Inconclusive);
    }
}

#[test]
fn truncated_dependence_is_only_up_to_precision() {
    // 1/(1-x) and 1 + x + x^2 agree below x^3
    let geometric = Series::truncated(QQ, 0, vec![QQ.one(); 3], 3).unwrap();
    let poly = series(&lp_from_terms(&[(0, 1), (1, 1), (2, 1)]));
    let cert = certify_univariate(&[geometric.clone(), poly.clone()]).unwrap();
    assert_eq!(cert.verdict, Verdict::DependentUpToPrecision);
    assert!(verify_certificate(&[geometric, poly], &cert).unwrap());
}

#[test]
fn oracle_self_check() {
    // W(x, x^2) = x^2 and W(1/x, 1/x^2) = -x^-4, by hand
    assert_eq!(
        oracle_wronskian(&[lp_from_terms(&[(1, 1)]), lp_from_terms(&[(2, 1)])]),
        lp_from_terms(&[(2, 1)])
    );
    assert_eq!(
        oracle_wronskian(&[lp_from_terms(&[(-1, 1)]), lp_from_terms(&[(-2, 1)])]),
        lp_from_terms(&[(-4, -1)])
    );
    assert_eq!(permutations(4).iter().filter(|p| p.1).count(), 12);
    assert!(det_q(&[vec![q(1), q(2)], vec![q(2), q(4)]]).is_zero());
    assert_eq!(det_q(&[vec![qr(1, 2), q(0)], vec![q(0), q(4)]]), q(2));
}
