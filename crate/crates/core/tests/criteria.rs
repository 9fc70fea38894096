use fop_core::arith::{BigComplex, Precision, Rational};
use fop_core::corpus;
use fop_core::criteria::{
    assumption_check, classify_shift, quarter_shift_admissible, shift_class_of, DensityEvidence, ShiftAmount,
    ShiftClassKind,
};
use fop_core::local::ExponentList;
use fop_core::monodromy::{JordanData, JordanEigen};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Gaps in units of `1/N`: 0, 1/N, 2/N, 1, 2.
fn gap_units(code: usize, n: i64) -> i64 {
    [0, 1, 2, n, 2 * n][code]
}

#[test]
fn assumption_table_exhaustive() {
    for n in 1..=12i64 {
        for g1 in 0..5 {
            for g2 in 0..5 {
                for g3 in 0..5 {
                    let u = [gap_units(g1, n), gap_units(g2, n), gap_units(g3, n)];
                    let base = q(1, 7);
                    let mut acc = 0i64;
                    let mut v = vec![base.clone()];
                    for x in u {
                        acc += x;
                        v.push(Rational::from(&base + &q(acc, n)));
                    }
                    let k = 1 + u.iter().filter(|&&x| x != 0).count();
                    let want = match k {
                        1 => (true, true),
                        2 => (false, true),
                        3 => (true, false),
                        _ => (u[1] == 1, u[0] == 1),
                    };
                    let got = assumption_check(&ExponentList::from_rationals(&v), Some(n as u64)).unwrap();
                    assert_eq!(got, want, "N={n} gaps={u:?}");
                }
            }
        }
    }
}

#[test]
fn assumption_check_rejects_numeric_exponents() {
    use fop_core::local::Exponent;
    let p = Precision::DEFAULT;
    let e = ExponentList::new(vec![
        Exponent::Numeric(BigComplex::from_f64(0.3, 0.1, p)),
        Exponent::Rational(q(0, 1)),
        Exponent::Rational(q(1, 1)),
        Exponent::Rational(q(2, 1)),
    ]);
    assert!(assumption_check(&e, Some(1)).is_err());
}

fn density() -> impl Strategy<Value = DensityEvidence> {
    prop_oneof![Just(DensityEvidence::HasMum), Just(DensityEvidence::AssumeDense), Just(DensityEvidence::Unknown)]
}

fn expected_class(n: i64, d: i64, dens: DensityEvidence) -> ShiftClassKind {
    let r = q(n, d);
    let den = r.denom().to_i64().unwrap();
    match den {
        1 | 2 => ShiftClassKind::HalfIntegerSymplectic,
        4 if dens == DensityEvidence::Unknown => ShiftClassKind::QuarterConditional,
        4 => ShiftClassKind::QuarterNonsymplectic,
        _ => ShiftClassKind::DetObstructed,
    }
}

/// Random 4-dimensional Jordan data over roots of unity of small order.
fn jordan_data() -> impl Strategy<Value = JordanData> {
    let frac = prop_oneof![Just(1i64), Just(2), Just(3), Just(4), Just(5), Just(6), Just(8), Just(12)]
        .prop_flat_map(|d| (0..d).prop_map(move |a| q(a, d)));
    let parts = prop_oneof![
        Just(vec![4usize]),
        Just(vec![2, 2]),
        Just(vec![2, 1, 1]),
        Just(vec![1, 1, 1, 1]),
        Just(vec![3, 1]),
    ];
    parts.prop_flat_map(move |p| {
        let n = p.len();
        (Just(p), prop::collection::vec(frac.clone(), n))
    })
    .prop_map(|(parts, fracs)| {
        let prec = Precision::DEFAULT;
        let mut eig: Vec<JordanEigen> = Vec::new();
        for (b, f) in parts.into_iter().zip(fracs) {
            match eig.iter_mut().find(|e| e.fraction == f) {
                Some(e) => {
                    e.blocks.push(b);
                    e.blocks.sort_by(|a, b| b.cmp(a));
                }
                None => eig.push(JordanEigen {
                    order: f.denom().to_u32().unwrap(),
                    value: BigComplex::root_of_unity(&f, prec),
                    fraction: f,
                    blocks: vec![b],
                }),
            }
        }
        eig.sort_by(|a, b| a.fraction.cmp(&b.fraction));
        JordanData { eigenvalues: eig, order: 1 }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn shift_class_is_periodic(n in -200i64..200, d in 1i64..30, dens in density()) {
        let a = ShiftAmount::Rational(q(n, d));
        let b = ShiftAmount::Rational(Rational::from(&q(n, d) + 1u32));
        let ca = shift_class_of(&a, dens).0;
        prop_assert_eq!(ca, shift_class_of(&b, dens).0);
        prop_assert_eq!(ca, expected_class(n, d, dens));
    }

    #[test]
    fn quarter_admissibility_symmetric_under_i(jd in jordan_data()) {
        let g = quarter_shift_admissible(&jd);
        let h = quarter_shift_admissible(&jd.scaled(&q(1, 4)));
        prop_assert_eq!(g.admissible, h.admissible);
        prop_assert!(!g.defect, "abstract and literal checks disagree on {:?}", g.e);
        prop_assert_eq!(g.e_prime.clone(), h.e.clone());
    }
}

#[test]
fn classify_shift_on_ploc() {
    let p = corpus::get("ploc").unwrap().operator().unwrap();
    let prec = Precision::DEFAULT;
    let c = classify_shift(&p, &ShiftAmount::Rational(q(1, 4)), DensityEvidence::HasMum, prec).unwrap();
    assert_eq!(c.class, ShiftClassKind::QuarterNonsymplectic);
    assert_eq!(c.mum_points, vec!["-1".to_string()]);
    let h = classify_shift(&p, &ShiftAmount::Rational(q(3, 2)), DensityEvidence::HasMum, prec).unwrap();
    assert_eq!(h.class, ShiftClassKind::HalfIntegerSymplectic);
    assert!(h.arithmetic_preserved);
    let no_mum = fop_core::opformat::parse("T*(T-1)*(T-3)*(T-4) - t*(T+1/3)*(T+1/2)^2*(T+2/3)").unwrap();
    assert!(classify_shift(&no_mum, &ShiftAmount::Rational(q(1, 4)), DensityEvidence::HasMum, prec).is_err());
}
