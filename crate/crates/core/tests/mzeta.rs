use std::f64::consts::PI;

use num_complex::Complex64;

use fractal_zeta::measures::ExtReal;
use fractal_zeta::mzeta::{
    check_scale_hypotheses, mzeta_bruteforce, mzeta_infinity, mzeta_neg_infinity, oracle_check,
    pole_set, region_components, regularity_region, regularity_regions, variant_report,
    ExtremeRegularity, MeasureMode, PointMassMeasure, ScaleSequence, Span,
};
use fractal_zeta::rational::{int, rat, to_f64};
use fractal_zeta::strings::{realize_cantor_configuration, GeometricString, OpenInterval, Variant};
use fractal_zeta::zeta::Window;
use fractal_zeta::{Error, Rational};

fn real(s: f64) -> Complex64 {
    Complex64::new(s, 0.0)
}

fn scales() -> Vec<ScaleSequence> {
    vec![
        ScaleSequence::cantor_default(),
        ScaleSequence::geometric(rat(2, 15), rat(1, 3)).unwrap(),
        ScaleSequence::geometric(rat(4, 27), rat(1, 3)).unwrap(),
    ]
}

fn finite_string(pairs: &[(Rational, Rational)]) -> PointMassMeasure {
    let ivs = pairs
        .iter()
        .map(|(a, b)| OpenInterval::new(a.clone(), b.clone()))
        .collect();
    PointMassMeasure::new(GeometricString::new(ivs).unwrap())
}

#[test]
fn positive_infinity_ignores_scales_and_layout() {
    let mut forms = Vec::new();
    for v in Variant::ALL {
        for ns in scales() {
            forms.push(mzeta_infinity(&PointMassMeasure::exact(v), &ns).unwrap());
        }
        let explicit = ScaleSequence::explicit(vec![rat(1, 4), rat(1, 10), rat(1, 50)]).unwrap();
        forms.push(mzeta_infinity(&PointMassMeasure::exact(v), &explicit).unwrap());
    }
    assert!(forms.windows(2).all(|w| w[0] == w[1]));
    assert_eq!(forms[0].render(), "(1/3)^s/(1 - 2*(1/3)^s)");
    for s in [0.8, 1.0, 2.0] {
        let z = forms[0].eval(real(s));
        let x = 3f64.powf(-s);
        assert!((z.re - x / (1.0 - 2.0 * x)).abs() < 1e-14);
    }
}

#[test]
fn one_interval_string() {
    let m = finite_string(&[(rat(1, 5), rat(7, 10))]);
    assert_eq!(m.mode(), &MeasureMode::Finite);
    let cf = mzeta_infinity(&m, &ScaleSequence::cantor_default()).unwrap();
    assert_eq!(cf.render(), "(1/2)^s");
    assert!(pole_set(&cf, &Window::new(-5.0, 5.0, -50.0, 50.0).unwrap()).is_empty());
}

#[test]
fn translation_invariance() {
    let base = [
        (rat(0, 1), rat(1, 4)),
        (rat(1, 4), rat(1, 3)),
        (rat(1, 2), rat(3, 5)),
    ];
    let reference =
        mzeta_infinity(&finite_string(&base), &ScaleSequence::cantor_default()).unwrap();
    for shift in [rat(1, 7), rat(1, 3), rat(2, 5)] {
        let moved: Vec<_> = base.iter().map(|(a, b)| (a + &shift, b + &shift)).collect();
        let cf = mzeta_infinity(&finite_string(&moved), &ScaleSequence::cantor_default()).unwrap();
        assert_eq!(cf, reference);
    }
    assert_eq!(
        reference.render(),
        "(1/4)^s + (1/6)^s + (1/10)^s + (1/12)^s"
    );
}

#[test]
fn finitely_many_atoms_have_no_negative_region() {
    let m = finite_string(&[(rat(1, 5), rat(2, 5)), (rat(1, 2), rat(9, 10))]);
    let ns = ScaleSequence::cantor_default();
    let region = regularity_region(&m, &rat(1, 100), ExtReal::NegInf).unwrap();
    assert!(region.components.is_empty());
    assert_eq!(mzeta_neg_infinity(&m, &ns).unwrap().render(), "0");
    assert_eq!(
        mzeta_bruteforce(&m, &ns, ExtReal::NegInf, real(2.0), 6)
            .unwrap()
            .value,
        real(0.0)
    );
}

#[test]
fn cantor_regions_at_first_stage() {
    let m = PointMassMeasure::exact(Variant::Omega1);
    let plus = region_components(&m, &rat(1, 9), ExtremeRegularity::PosInf).unwrap();
    assert!(plus.contains(&Span::new(rat(1, 3), rat(2, 3))));
    let minus = regularity_region(&m, &rat(1, 9), ExtReal::NegInf).unwrap();
    assert_eq!(
        minus.components,
        vec![Span::new(int(0), rat(4, 9)), Span::new(rat(5, 9), int(1))]
    );
    assert!(minus.components.iter().all(|c| c.length() == rat(4, 9)));
    assert!(matches!(
        regularity_region(&m, &rat(1, 9), ExtReal::Finite(0.5)),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn regions_are_disjoint_and_ordered() {
    for v in Variant::ALL {
        let m = PointMassMeasure::exact(v);
        for alpha in [ExtReal::PosInf, ExtReal::NegInf] {
            for r in regularity_regions(&m, &ScaleSequence::cantor_default(), alpha, 8).unwrap() {
                for w in r.components.windows(2) {
                    assert!(w[0].hi < w[1].lo || (alpha == ExtReal::PosInf && w[0].hi <= w[1].lo));
                }
                for k in &r.new_intervals {
                    assert!(k.lo < k.hi);
                }
            }
        }
    }
}

#[test]
fn new_interval_counts() {
    let ns = ScaleSequence::cantor_default();
    let s = real(2.0);
    let one = PointMassMeasure::exact(Variant::Omega1);
    let plus = mzeta_bruteforce(&one, &ns, ExtReal::PosInf, s, 8).unwrap();
    assert_eq!(plus.new_counts, vec![1, 2, 4, 8, 16, 32, 64, 128]);
    let minus = mzeta_bruteforce(&one, &ns, ExtReal::NegInf, s, 8).unwrap();
    assert_eq!(minus.new_counts, vec![2, 2, 4, 8, 16, 32, 64, 128]);
    let two = PointMassMeasure::exact(Variant::Omega2);
    let minus = mzeta_bruteforce(&two, &ns, ExtReal::NegInf, s, 8).unwrap();
    assert_eq!(minus.new_counts, vec![1, 0, 0, 0, 0, 0, 0, 0]);
}

#[test]
fn printed_closed_forms() {
    let ns = ScaleSequence::cantor_default();
    let render = |v| {
        mzeta_neg_infinity(&PointMassMeasure::exact(v), &ns)
            .unwrap()
            .render()
    };
    assert_eq!(
        render(Variant::Omega1),
        "2*(4/9)^s + 2*(1/27)^s/(1 - 2*(1/3)^s)"
    );
    assert_eq!(render(Variant::Omega2), "(1/9)^s");
    assert_eq!(
        render(Variant::Omega3),
        "(2/7)^s + (11/63)^s + 2*(2/81)^s/(1 - 2*(1/9)^s)"
    );
    // 2(2/81)^s = 2^(s+1)/81^s, the printed series numerator.
    let cf = mzeta_neg_infinity(&PointMassMeasure::exact(Variant::Omega3), &ns).unwrap();
    let series = cf.series_part.as_ref().unwrap();
    for s in [1.0, 1.7, 3.0] {
        let printed = 2f64.powf(s + 1.0) / 81f64.powf(s) / (1.0 - 2.0 * 9f64.powf(-s));
        assert!((series.eval(real(s)).re - printed).abs() < 1e-15 * printed.max(1.0));
    }
    let one = mzeta_neg_infinity(&PointMassMeasure::exact(Variant::Omega1), &ns).unwrap();
    let at2 = 2.0 * (4.0f64 / 9.0).powi(2) + (2.0 / 729.0) / (1.0 - 2.0 / 9.0);
    assert!((one.eval(real(2.0)).re - at2).abs() < 1e-15);
}

#[test]
fn closed_forms_match_stage_sums_for_several_scales() {
    for v in Variant::ALL {
        let m = PointMassMeasure::exact(v);
        for ns in scales() {
            let check = oracle_check(&m, &ns, 12, &[2.0, 2.5]).unwrap();
            assert!(
                check.max_relative_error < 1e-6,
                "{v:?} {ns:?}: {}",
                check.max_relative_error
            );
        }
    }
}

#[test]
fn hypotheses_are_checked() {
    let bad_first = ScaleSequence::geometric(rat(1, 3), rat(1, 3)).unwrap();
    let e = check_scale_hypotheses(&bad_first).unwrap_err();
    assert!(matches!(e, Error::Hypothesis(_)));
    assert!(e.to_string().contains("l_1 > eta_1"));

    let too_wide = ScaleSequence::geometric(rat(1, 5), rat(1, 3)).unwrap();
    let e = mzeta_neg_infinity(&PointMassMeasure::exact(Variant::Omega1), &too_wide).unwrap_err();
    assert!(e.to_string().contains("l_1 > 2 eta_1"), "{e}");

    let too_small = ScaleSequence::geometric(rat(1, 30), rat(1, 3)).unwrap();
    assert!(check_scale_hypotheses(&too_small).is_err());
    assert!(check_scale_hypotheses(&ScaleSequence::cantor_default()).is_ok());

    assert!(ScaleSequence::explicit(vec![rat(1, 9), rat(1, 9)]).is_err());
    assert!(ScaleSequence::geometric(rat(1, 9), int(1)).is_err());
}

#[test]
fn non_geometric_scales_have_no_lattice_form() {
    let ns = ScaleSequence::geometric(rat(1, 9), rat(1, 4)).unwrap();
    for v in [Variant::Omega1, Variant::Omega3] {
        match mzeta_neg_infinity(&PointMassMeasure::exact(v), &ns) {
            Err(Error::Unsupported(_)) | Err(Error::Hypothesis(_)) => {}
            other => panic!("{v:?}: {other:?}"),
        }
    }
}

#[test]
fn pole_sets_discriminate_layouts() {
    let ns = ScaleSequence::cantor_default();
    let w = Window::new(-1.0, 2.0, -15.0, 15.0).unwrap();
    let poles = |v| {
        pole_set(
            &mzeta_neg_infinity(&PointMassMeasure::exact(v), &ns).unwrap(),
            &w,
        )
    };

    let d1 = 2f64.ln() / 3f64.ln();
    let p1 = 2.0 * PI / 3f64.ln();
    let one = poles(Variant::Omega1);
    assert_eq!(one.len(), 5);
    for (k, d) in (-2..=2).zip(&one) {
        assert!((d.omega - Complex64::new(d1, k as f64 * p1)).norm() < 1e-12);
    }
    assert!(poles(Variant::Omega2).is_empty());

    let d3 = 2f64.ln() / 9f64.ln();
    let p3 = 2.0 * PI / 9f64.ln();
    let three = poles(Variant::Omega3);
    assert_eq!(three.len(), 2 * (15.0 / p3).floor() as usize + 1);
    assert!((d3 - 0.31546).abs() < 1e-5);
    for d in &three {
        assert!((d.omega.re - d3).abs() < 1e-14);
        let k = (d.omega.im / p3).round();
        assert!((d.omega.im - k * p3).abs() < 1e-12);
    }
}

#[test]
fn entire_parts_stay_bounded_near_poles() {
    let ns = ScaleSequence::cantor_default();
    let w = Window::new(-1.0, 2.0, -30.0, 30.0).unwrap();
    for v in Variant::ALL {
        let cf = mzeta_neg_infinity(&PointMassMeasure::exact(v), &ns).unwrap();
        let mut centers: Vec<Complex64> = pole_set(&cf, &w).iter().map(|d| d.omega).collect();
        centers.push(Complex64::new(2f64.ln() / 3f64.ln(), 0.0));
        for c in centers {
            for i in -20..=20 {
                for j in -20..=20 {
                    let s = c + Complex64::new(i as f64 * 1e-4, j as f64 * 1e-4);
                    let bound: f64 = cf
                        .entire_part
                        .iter()
                        .map(|t| to_f64(&t.coeff).abs() * to_f64(&t.base).powf(s.re))
                        .sum();
                    let z = cf.eval_entire(s);
                    assert!(z.is_finite() && z.norm() <= bound * (1.0 + 1e-12));
                }
            }
        }
    }
}

#[test]
fn superset_extension_rule_does_not_reproduce_the_closed_form() {
    // Counting every component that is not a superset of an earlier one
    // (components only shrink at -∞) overcounts the stage-1 chunks.
    let ns = ScaleSequence::cantor_default();
    let m = PointMassMeasure::exact(Variant::Omega1);
    let s = 2.0;
    let closed = mzeta_neg_infinity(&m, &ns).unwrap().eval(real(s)).re;
    let regions = regularity_regions(&m, &ns, ExtReal::NegInf, 12).unwrap();
    let mut literal = 0.0;
    let mut previous: Vec<Span> = Vec::new();
    for r in &regions {
        for c in &r.components {
            if !previous.iter().any(|p| c.contains_span(p)) {
                literal += to_f64(&c.length()).powf(s);
            }
        }
        previous = r.components.clone();
    }
    let ours = mzeta_bruteforce(&m, &ns, ExtReal::NegInf, real(s), 12)
        .unwrap()
        .value
        .re;
    assert!(((ours - closed) / closed).abs() < 1e-6);
    assert!(
        ((literal - closed) / closed).abs() > 1e-2,
        "literal {literal} vs closed {closed}"
    );
}

#[test]
fn truncated_mode_agrees_with_exact_regions() {
    let ns = ScaleSequence::cantor_default();
    for v in Variant::ALL {
        let exact = PointMassMeasure::exact(v);
        let cut = PointMassMeasure::truncated(realize_cantor_configuration(v, 9).unwrap()).unwrap();
        let a = regularity_regions(&exact, &ns, ExtReal::PosInf, 7).unwrap();
        let b = regularity_regions(&cut, &ns, ExtReal::PosInf, 7).unwrap();
        assert_eq!(a, b, "{v:?}");
        // At -∞ the unresolved tail of a truncation is one wide chunk, so the
        // truncated region can only be larger.
        let a = regularity_regions(&exact, &ns, ExtReal::NegInf, 7).unwrap();
        let b = regularity_regions(&cut, &ns, ExtReal::NegInf, 7).unwrap();
        if v == Variant::Omega1 {
            assert_eq!(a, b);
        }
        for (ra, rb) in a.iter().zip(&b) {
            for k in &ra.components {
                assert!(
                    rb.components.iter().any(|big| big.contains_span(k)),
                    "{v:?} stage {}",
                    ra.stage
                );
            }
        }
        assert!(matches!(
            regularity_regions(&cut, &ns, ExtReal::PosInf, 12),
            Err(Error::Resolution(_))
        ));
        assert!(matches!(
            mzeta_neg_infinity(&cut, &ns),
            Err(Error::Unsupported(_))
        ));
    }
}

#[test]
fn reports_flag_reconstructions() {
    let ns = ScaleSequence::cantor_default();
    let w = Window::new(-1.0, 2.0, -15.0, 15.0).unwrap();
    for v in Variant::ALL {
        let r = variant_report(v, &ns, &w, None).unwrap();
        assert_eq!(r.reconstruction, v != Variant::Omega1);
        assert_eq!(r.zeta_infty, "(1/3)^s/(1 - 2*(1/3)^s)");
        assert!(r.oracle.is_none());
        assert_eq!(r.variant, v.label());
    }
    let r = variant_report(Variant::Omega2, &ns, &w, Some((10, &[2.0]))).unwrap();
    assert!(r.oracle.unwrap().max_relative_error < 1e-6);
}
