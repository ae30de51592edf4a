mod common;

use common::*;
use proptest::prelude::*;
use wronskian_core::certify::find_translation_point;
use wronskian_core::parse::{parse_mseries, parse_rational, parse_series, FamilyFile, UnivariateFamily};
use wronskian_core::{
    certify_rational, verify_rational_certificate, FieldSpec, MSeries, Poly, RationalFunction, Series,
    Strategy as Expand, Verdict,
};

const QQ: FieldSpec = FieldSpec::RATIONALS;

fn poly(coeffs: &[i64]) -> Poly {
    Poly::new(QQ, coeffs.iter().map(|&c| QQ.int(c)).collect())
}

fn rational() -> impl proptest::strategy::Strategy<Value = RationalFunction> {
    (
        prop::collection::vec(-4i64..=4, 1..=4),
        prop::collection::vec(-3i64..=3, 1..=4),
        0usize..=2,
    )
        .prop_filter_map("nonzero denominator", |(num, den, xpow)| {
            // multiply the denominator by x^xpow to force poles at the origin sometimes
            let mut d = vec![0; xpow];
            d.extend(den);
            let den = poly(&d);
            (!den.is_zero() && den.degree().unwrap() <= 3).then(|| RationalFunction::new(poly(&num), den).unwrap())
        })
}

fn rational_family() -> impl proptest::strategy::Strategy<Value = Vec<RationalFunction>> {
    (
        prop::collection::vec(rational(), 1..=4),
        prop::collection::vec(-2i64..=2, 4),
        any::<bool>(),
    )
        .prop_map(|(mut fam, combo, dep)| {
            if dep && fam.len() >= 2 {
                let n = fam.len();
                let mut last = RationalFunction::from_poly(Poly::zero(QQ));
                for (f, &c) in fam[..n - 1].iter().zip(&combo) {
                    last = last.add(&f.scale(&QQ.int(c)));
                }
                fam[n - 1] = last;
            }
            fam
        })
}

/// Rank over Q(x) by clearing denominators: numerators times L/D_i as polynomials.
fn oracle_rational_rank(fam: &[RationalFunction]) -> usize {
    let l = fam.iter().fold(poly(&[1]), |acc, f| acc.mul(f.denominator()));
    let cleared: Vec<LPoly> = fam
        .iter()
        .map(|f| {
            let cofactor = l.div_exact(f.denominator()).unwrap().unwrap();
            let p = f.numerator().mul(&cofactor);
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| (i as i64, to_q(c)))
                .filter(|(_, c)| *c != q(0))
                .collect()
        })
        .collect();
    family_rank(&cleared)
}

/// Well-formed expression text: sums, products, quotients and small powers.
fn expr_text() -> impl proptest::strategy::Strategy<Value = String> {
    let leaf = prop_oneof![
        (0i64..20).prop_map(|n| n.to_string()),
        Just("x".to_string()),
        (1i64..4).prop_map(|k| format!("x^{k}")),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} + {b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} - {b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})/({b})")),
            (inner.clone(), -2i64..=3).prop_map(|(a, k)| format!("({a})^{k}")),
            inner.prop_map(|a| format!("-({a})")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_expressions_round_trip(text in expr_text()) {
        // division by a zero expression is a legitimate error; anything else must print and re-parse
        if let Ok((f, _)) = parse_rational(&text, QQ) {
            let (back, _) = parse_rational(&f.to_string(), QQ).unwrap();
            prop_assert_eq!(&back, &f);
            if let Some(s) = f.as_laurent_polynomial() {
                prop_assert_eq!(parse_series(&text, QQ).unwrap(), s);
            }
        }
    }

    #[test]
    fn strategies_agree_with_each_other_and_the_oracle(fam in rational_family()) {
        let laurent = certify_rational(&fam, Expand::LaurentExpansion).unwrap();
        let translated = certify_rational(&fam, Expand::Translation).unwrap();
        prop_assert_eq!(laurent.verdict, translated.verdict);
        prop_assert!(verify_rational_certificate(&fam, &laurent).unwrap());
        prop_assert!(verify_rational_certificate(&fam, &translated).unwrap());
        let independent = oracle_rational_rank(&fam) == fam.len();
        prop_assert_eq!(laurent.verdict == Verdict::Independent, independent);
        if !independent {
            prop_assert_eq!(laurent.verdict, Verdict::Dependent);
        }
        let (index, _) = find_translation_point(&fam).unwrap();
        prop_assert!(index < 10);
    }

    #[test]
    fn series_display_round_trips(terms in prop::collection::vec((-8i64..=8, -20i64..=20, 1i64..=6), 0..6), prec in prop::option::of(-4i64..=12)) {
        let s = Series::from_terms(QQ, terms.iter().map(|&(e, n, d)| (e, QQ.ratio(&n.into(), &d.into()).unwrap())), prec).unwrap();
        let text = s.to_string();
        prop_assert_eq!(parse_series(&text, QQ).unwrap(), s, "{}", text);
    }

    #[test]
    fn mseries_display_round_trips(terms in prop::collection::vec((0u32..5, 0u32..5, 0u32..3, -9i64..=9), 0..6)) {
        let s = MSeries::from_terms(QQ, 3, terms.iter().map(|&(a, b, c, k)| (vec![a, b, c], QQ.int(k))), None).unwrap();
        let text = s.to_string();
        prop_assert_eq!(parse_mseries(&text, QQ, 3).unwrap(), s, "{}", text);
    }

    #[test]
    fn rational_display_round_trips(f in rational()) {
        let text = f.to_string();
        let (back, prec) = parse_rational(&text, QQ).unwrap();
        prop_assert_eq!(back, f);
        prop_assert_eq!(prec, None);
    }

    #[test]
    fn parser_never_panics(text in "[-+*/^()@=;#:x0-9 \\n.a-z]{0,60}") {
        let _ = FamilyFile::parse(&text).map(|f| {
            let _ = f.univariate();
            let _ = f.multivariate();
        });
        let _ = parse_series(&text, QQ);
        let _ = parse_rational(&text, QQ);
    }

    #[test]
    fn gf_p_coefficients_parse_as_residues(n in -50i64..50, pi in 0usize..4) {
        let p = [2u64, 3, 5, 7][pi];
        let fp = FieldSpec::prime(p).unwrap();
        let s = parse_series(&format!("{n}*x^2"), fp).unwrap();
        let r = n.rem_euclid(p as i64) as u64;
        match s.coeff(2).unwrap().residue() {
            Some(v) => prop_assert_eq!(v, r),
            None => prop_assert!(false),
        }
    }
}

#[test]
fn family_file_end_to_end() {
    let file = FamilyFile::parse("field: Q\n# comment\n1/(1-x); 1/(1+x)\n1/(1-x^2)\n").unwrap();
    let UnivariateFamily::Rational { members, precision } = file.univariate().unwrap() else {
        panic!("expected rational family");
    };
    assert_eq!(precision, None);
    // 1/(1-x) + 1/(1+x) = 2/(1-x^2)
    let cert = certify_rational(&members, Expand::LaurentExpansion).unwrap();
    assert_eq!(cert.verdict, Verdict::Dependent);
    let v: Vec<String> = cert
        .dependence_vector()
        .unwrap()
        .iter()
        .map(ToString::to_string)
        .collect();
    assert_eq!(v, ["1", "1", "-2"]);
}

#[test]
fn pole_at_origin_needs_laurent_window() {
    let fam = vec![
        RationalFunction::new(poly(&[1]), poly(&[0, 1])).unwrap(),
        RationalFunction::new(poly(&[1]), poly(&[0, 0, 1])).unwrap(),
    ];
    for strategy in [Expand::LaurentExpansion, Expand::Translation] {
        let cert = certify_rational(&fam, strategy).unwrap();
        assert_eq!(cert.verdict, Verdict::Independent);
        assert!(verify_rational_certificate(&fam, &cert).unwrap());
    }
}

#[test]
fn parse_errors_are_located() {
    let err = FamilyFile::parse("field: Q\nvars: 0\n").unwrap_err();
    assert_eq!((err.line, err.column), (2, 7));
    let err = parse_series("1 + * x", QQ).unwrap_err();
    assert_eq!((err.line, err.column), (1, 5));
}
