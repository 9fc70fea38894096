use fop_core::arith::{Precision, Rational};
use fop_core::corpus::{self, ListMembership};
use fop_core::criteria::twist_pipeline;
use fop_core::local::{fuchs_relation_check, riemann_symbol};

#[test]
fn every_symbol_matches_and_satisfies_fuchs() {
    let prec = Precision::DEFAULT;
    for e in corpus::all() {
        let (rs, check) = corpus::verify_symbol(&e, prec).unwrap();
        assert!(check.passed, "{}: {:?}", e.id, check.mismatches);
        assert!(check.max_location_error < 1e-30, "{}", e.id);
        let f = fuchs_relation_check(&rs, 4).unwrap();
        assert!(f.ok, "{}", e.id);
    }
}

#[test]
fn fuchs_values_from_printed_tables() {
    let prec = Precision::DEFAULT;
    for (id, s, sum) in [("no21", 4, 12), ("no267", 8, 36), ("no2", 3, 6)] {
        let op = corpus::get(id).unwrap().operator().unwrap();
        let rs = riemann_symbol(&op, prec).unwrap();
        assert_eq!(rs.entries.len(), s, "{id}");
        assert_eq!(fuchs_relation_check(&rs, 4).unwrap().lhs, sum, "{id}");
    }
}

#[test]
fn a_list_verifies() {
    let prec = Precision::DEFAULT;
    for e in corpus::all().into_iter().filter(|e| e.list == ListMembership::A) {
        let r = corpus::verify(&e, prec, 120).unwrap();
        assert!(r.passed && r.assumptions.all_a, "{}", e.id);
    }
}

#[test]
fn twists_break_both_assumptions_at_the_origin_only() {
    let prec = Precision::DEFAULT;
    for (id, k) in [("no2", 1), ("no2", -1), ("no16", 3), ("no242", 1), ("ploc", 1)] {
        let op = corpus::get(id).unwrap().operator().unwrap();
        let r = twist_pipeline(&op, k, None, prec, 120).unwrap();
        let h = |j: i64| Rational::from((k + 2 * j, 2));
        assert_eq!(r.exponents_at_zero, vec![h(0), h(1), h(2), h(3)], "{id}");
        assert_eq!(r.n_at_zero, Some(2), "{id}");
        assert_eq!(r.ab_at_zero, (false, false), "{id}");
        assert!(r.others_unchanged, "{id}: {:?}", r.changed_points);
        assert_eq!(r.inherited_infinite_index, r.original.infinite_index_implied);
    }
}

#[test]
fn unknown_entry() {
    assert!(matches!(corpus::get("no3"), Err(fop_core::Error::UnknownCorpusEntry(_))));
}
