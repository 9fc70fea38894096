use fop_core::arith::{BigComplex, CMatrix, Precision, Rational};
use fop_core::symplectic::{invariant_form_space, symplectic_certificate, FormVerdict, SkewForm, DEFAULT_SEED};
use proptest::prelude::*;

fn prec() -> Precision {
    Precision::DEFAULT
}

fn c(n: i64, d: i64) -> BigComplex {
    BigComplex::from_rational(&Rational::from((n, d)), prec())
}

fn int_matrix(v: &[i64]) -> CMatrix {
    CMatrix::from_rows((0..4).map(|i| (0..4).map(|j| c(v[4 * i + j], 1)).collect()).collect())
}

/// `x ↦ x + s·ω(v, x)·v` for the standard form `ω`.
fn transvection(v: &[i64; 4], s: i64) -> CMatrix {
    let j = SkewForm::standard(prec()).matrix();
    let col = CMatrix::from_rows(v.iter().map(|&x| vec![c(x, 1)]).collect());
    let outer = &(&col * &col.transpose()) * &j;
    &CMatrix::identity(4, prec()) + &outer.scale(&c(s, 1))
}

fn vec4() -> impl Strategy<Value = [i64; 4]> {
    prop::array::uniform4(-3i64..=3).prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pfaffian_squares_to_determinant(e in prop::array::uniform6((-30i64..=30, 1i64..=7))) {
        let f = SkewForm::new(std::array::from_fn(|k| c(e[k].0, e[k].1)));
        let pf = f.pfaffian();
        let det = f.matrix().det();
        let scale = 1.0 + det.abs_f64();
        prop_assert!((&(&pf * &pf) - &det).abs_f64() < 1e-30 * scale);
    }

    #[test]
    fn invariant_forms_are_conjugation_equivariant(
        vs in prop::collection::vec((vec4(), 1i64..=2), 3),
        p in prop::collection::vec(-2i64..=2, 16),
    ) {
        let pm = int_matrix(&p);
        prop_assume!(pm.det().abs_f64() > 0.5);
        let pinv = pm.inverse().unwrap();
        let mats: Vec<CMatrix> = vs.iter().map(|(v, s)| transvection(v, *s)).collect();
        let conj: Vec<CMatrix> = mats.iter().map(|m| &(&pinv * m) * &pm).collect();
        let a = invariant_form_space(&mats.iter().collect::<Vec<_>>(), prec(), DEFAULT_SEED).unwrap();
        let b = invariant_form_space(&conj.iter().collect::<Vec<_>>(), prec(), DEFAULT_SEED).unwrap();
        prop_assert_eq!(a.dimension(), b.dimension());
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.verdict, FormVerdict::NondegenerateExists);
        // Pᵀ Ω P is invariant under P⁻¹ M P
        let moved = SkewForm::from_matrix(&(&(&pm.transpose() * &SkewForm::standard(prec()).matrix()) * &pm));
        for m in &conj {
            prop_assert!(moved.invariance_residual(m, 1) < 1e-25);
        }
    }
}

#[test]
fn transvection_group_preserves_standard_form() {
    let m = &transvection(&[1, 0, 2, -1], 1) * &transvection(&[0, 1, 1, 3], 2);
    assert!(SkewForm::standard(prec()).invariance_residual(&m, 1) < 1e-30);
    let cert = symplectic_certificate(&m, prec()).unwrap();
    assert!(cert.passes(), "{cert:?}");
}

#[test]
fn scalar_multiple_of_symplectic_is_rejected() {
    let m = transvection(&[1, 1, 0, 0], 1).scale(&BigComplex::i(prec()));
    let cert = symplectic_certificate(&m, prec()).unwrap();
    assert!(!cert.passes());
    let space = invariant_form_space(&[&m], prec(), DEFAULT_SEED).unwrap();
    // MᵀΩM = −Ω for every form Ω fixed by the transvection
    assert_eq!(space.verdict, FormVerdict::ZeroOnly);
}
