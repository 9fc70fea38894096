use fop_core::arith::{Poly, Precision, Rational};
use fop_core::corpus;
use fop_core::frobenius::{apply_operator, frobenius_basis};
use fop_core::local::{local_exponents, Location};
use fop_core::operator::{Moebius, ThetaOperator};
use fop_core::opformat::{from_json, parse, print, to_json};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn corpus_ops() -> Vec<ThetaOperator> {
    corpus::all().iter().map(|e| e.operator().unwrap()).collect()
}

fn rational() -> impl Strategy<Value = Rational> {
    (-24i64..=24, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

fn small_op() -> impl Strategy<Value = ThetaOperator> {
    (1usize..=4)
        .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-9i64..=9, 1..=4), n + 1))
        .prop_map(|cs| ThetaOperator::from_polys(cs.iter().map(|c| Poly::from_ints(c)).collect()))
        .prop_filter("nonzero leading", |op| !op.is_zero() && op.order() >= 1)
}

/// Random well-formed expression text.
fn expr_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("T".to_string()),
        Just("t".to_string()),
        Just("D".to_string()),
        (1u32..9, 1u32..5).prop_map(|(n, d)| format!("{n}/{d}")),
        (0u32..7).prop_map(|n| n.to_string()),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}*{b}")),
            (inner.clone(), 0u32..3).prop_map(|(a, e)| format!("({a})^{e}")),
            inner.prop_map(|a| format!("(-({a}))")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn shift_is_additive(i in 0usize..15, a in rational(), b in rational()) {
        let p = &corpus_ops()[i];
        let two = p.shift(&a).shift(&b);
        let one = p.shift(&Rational::from(&a + &b));
        prop_assert_eq!(two, one);
    }

    #[test]
    fn parse_print_roundtrip(op in small_op()) {
        prop_assert_eq!(parse(&print(&op)).unwrap(), op);
    }

    #[test]
    fn print_parse_idempotent(text in expr_text()) {
        let op = parse(&text).unwrap();
        let once = print(&op);
        prop_assert_eq!(print(&parse(&once).unwrap()), once);
    }

    #[test]
    fn json_roundtrip(op in small_op()) {
        prop_assert_eq!(from_json(&to_json(&op)).unwrap(), op);
    }

    #[test]
    fn moebius_functorial_up_to_equivalence(i in 0usize..15, c in 1i64..4) {
        let p = &corpus_ops()[i];
        let m1 = Moebius::from_ints(1, c, 0, 1).unwrap();
        let m2 = Moebius::inversion();
        let step = p.moebius_pullback(&m1).moebius_pullback(&m2);
        let direct = p.moebius_pullback(&m1.compose(&m2));
        prop_assert!(step.equivalent(&direct));
    }
}

#[test]
fn shift_text_roundtrip() {
    let p = corpus::get("no2").unwrap().operator().unwrap();
    let s = p.shift(&q(1, 2));
    assert_eq!(parse(&print(&s)).unwrap(), s);
}

#[test]
fn corpus_json_is_byte_stable() {
    for e in corpus::all() {
        let op = e.operator().unwrap();
        let text = to_json(&op);
        assert_eq!(to_json(&from_json(&text).unwrap()), text, "{}", e.id);
    }
}

#[test]
fn quarter_shift_of_ploc_at_zero() {
    let p = corpus::get("ploc").unwrap().operator().unwrap();
    let e = local_exponents(&p.shift(&q(1, 4)), &Location::zero(), Precision::DEFAULT).unwrap();
    assert_eq!(e.rationals().unwrap(), vec![q(1, 2), q(1, 2), q(1, 1), q(1, 1)]);
}

#[test]
fn shifted_frobenius_residual_valuation() {
    const K: usize = 40;
    let prec = Precision::DEFAULT;
    for (id, alpha) in [("no2", q(1, 3)), ("ploc", q(1, 4)), ("no53", q(-5, 2))] {
        let p = corpus::get(id).unwrap().operator().unwrap();
        let shifted = p.shift(&alpha);
        for y in frobenius_basis(&p, &Location::zero(), K, prec).unwrap() {
            let z = y.times_power(&alpha);
            let r = apply_operator(&shifted, &z).unwrap();
            // exponents at 0 are nonnegative here, so offset ≥ K − 3 suffices
            if let Some(off) = r.valuation_offset {
                assert!(off + 3 >= K, "{id}: offset {off}");
            }
        }
    }
}
