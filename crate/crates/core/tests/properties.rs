use num_complex::Complex64;
use proptest::prelude::*;

use fractal_zeta::measures::{
    census, measure_cdf, regularity_value, BinomialMeasureSpec, RegularityIndex,
};
use fractal_zeta::pzeta::{binary_entropy, sigma_formula};
use fractal_zeta::rational::{format_rational, int, parse_rational, pow, rat};
use fractal_zeta::strings::{
    minkowski_dimension_from_lengths, GeometricString, LatticeStringSpec, LengthSequence,
    OpenInterval,
};
use fractal_zeta::tube::{tube_volume_direct, tube_volume_direct_exact};
use fractal_zeta::zeta::{zeta_closed_form_lattice, zeta_truncated};
use fractal_zeta::Rational;

/// `(r, m)` with `m r < 1`.
fn lattice_spec() -> impl Strategy<Value = LatticeStringSpec> {
    (1u64..=6, 2i64..=12, 1i64..=4).prop_filter_map("needs m r < 1", |(m, den, num)| {
        LatticeStringSpec::new(rat(num, den), m).ok()
    })
}

fn measure_spec() -> impl Strategy<Value = BinomialMeasureSpec> {
    (2u32..=6, 1i64..=20, 1i64..=6).prop_filter_map("needs w > 1", |(h, num, den)| {
        BinomialMeasureSpec::new(h, rat(num, den)).ok()
    })
}

fn unit_rational() -> impl Strategy<Value = Rational> {
    (0i64..=1000, 1i64..=1000).prop_map(|(a, b)| rat(a.min(b), b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_text_round_trip(num in -10_000i64..10_000, den in 1i64..10_000) {
        let q = rat(num, den);
        prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }

    #[test]
    fn partial_totals_are_exact(spec in lattice_spec(), n in 1usize..30) {
        let mr = spec.ratio() * int(spec.multiplier() as i64);
        prop_assert_eq!(spec.partial_total(n), int(1) - pow(&mr, n as u32));
        prop_assert!(spec.lengths(n).entries().windows(2).all(|w| w[0].length > w[1].length));
    }

    #[test]
    fn dimension_matches_log_ratio(spec in lattice_spec()) {
        let d = minkowski_dimension_from_lengths(&spec.lengths(3)).value;
        let expected = (spec.multiplier() as f64).ln() / spec.log_inv_ratio();
        prop_assert!((d - expected).abs() <= 1e-8);
        prop_assert!((0.0..1.0).contains(&d));
    }

    #[test]
    fn series_and_closed_form_agree(spec in lattice_spec(), re in 0.25f64..3.0, im in -40.0f64..40.0) {
        let s = Complex64::new(spec.dimension() + re, im);
        let t = zeta_truncated(&spec.lengths(200), s, 200).unwrap();
        let closed = zeta_closed_form_lattice(&spec, s).unwrap().value;
        prop_assert!((t.value - closed).norm() <= t.error_bound().unwrap() + 8.0 * f64::EPSILON * closed.norm());
    }

    #[test]
    fn denominator_is_periodic(spec in lattice_spec(), re in -1.0f64..2.0, im in -10.0f64..10.0) {
        let s = Complex64::new(re, im);
        let shifted = s + Complex64::new(0.0, spec.period());
        if let (Ok(a), Ok(b)) = (zeta_closed_form_lattice(&spec, s), zeta_closed_form_lattice(&spec, shifted)) {
            let l1 = spec.first_length();
            let phase = (Complex64::new(0.0, spec.period()) * fractal_zeta::rational::ln_rational(&l1)).exp();
            prop_assert!((b.value - a.value * phase).norm() <= 1e-9 * a.value.norm().max(1.0));
        }
    }

    #[test]
    fn tube_volume_bounded_and_monotone(spec in lattice_spec(), a in unit_rational(), b in unit_rational()) {
        let ls = spec.lengths(1);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assume!(lo > int(0));
        let v_lo = tube_volume_direct_exact(&ls, &lo).unwrap();
        let v_hi = tube_volume_direct_exact(&ls, &hi).unwrap();
        prop_assert!(v_lo <= v_hi);
        prop_assert!(v_hi <= int(1) && v_lo > int(0));
        let f = tube_volume_direct(&ls, fractal_zeta::rational::to_f64(&hi)).unwrap().volume;
        prop_assert!((f - fractal_zeta::rational::to_f64(&v_hi)).abs() <= 1e-12);
    }

    #[test]
    fn cdf_is_monotone(spec in measure_spec(), a in unit_rational(), b in unit_rational()) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let x = measure_cdf(&spec, &lo, 12).unwrap();
        let y = measure_cdf(&spec, &hi, 12).unwrap();
        prop_assert!(x.lower() <= y.upper());
        prop_assert!(x.lower() <= x.upper());
        prop_assert!(y.upper() <= &int(1));
    }

    #[test]
    fn census_conserves_mass(spec in measure_spec(), n in 1usize..=10) {
        let rows = census(&spec, n).unwrap();
        let total: Rational = rows.iter().map(|r| &r.mass * int(r.count as i64)).sum();
        prop_assert_eq!(total, int(1));
        let count: u64 = rows.iter().map(|r| r.count).sum();
        prop_assert_eq!(count, 1u64 << n);
    }

    #[test]
    fn spectrum_is_reflection_symmetric(h in 2u32..=7, w in 3i64..=30, k2 in 1u64..=64, k1_seed in 0u64..1000) {
        let spec = BinomialMeasureSpec::new(h, int(w)).unwrap();
        let k1 = k1_seed % (k2 + 1);
        prop_assume!(RegularityIndex::new(k1, k2).is_ok());
        let idx = RegularityIndex::new(k1, k2).unwrap();
        let a = sigma_formula(&spec, regularity_value(&spec, idx)).unwrap();
        let b = sigma_formula(&spec, regularity_value(&spec, idx.reflected())).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
        prop_assert!((a - binary_entropy(idx.fraction()) / (h as f64).ln()).abs() <= 1e-12);
    }

    #[test]
    fn geometric_string_documents_round_trip(cuts in proptest::collection::btree_set(1i64..1000, 2..20)) {
        let pts: Vec<Rational> = cuts.iter().map(|&c| rat(c, 1000)).collect();
        let ivs: Vec<OpenInterval> = pts.chunks_exact(2).map(|p| OpenInterval::new(p[0].clone(), p[1].clone())).collect();
        let gs = GeometricString::new(ivs).unwrap();
        let json = serde_json::to_string(&gs.to_document()).unwrap();
        let back = GeometricString::from_document(&serde_json::from_str(&json).unwrap()).unwrap();
        prop_assert_eq!(back.intervals(), gs.intervals());
    }

    #[test]
    fn length_documents_round_trip(spec in lattice_spec(), n in 1usize..20) {
        let ls = spec.lengths(n);
        let json = serde_json::to_string(&ls.to_document()).unwrap();
        let back = LengthSequence::from_document(&serde_json::from_str(&json).unwrap()).unwrap();
        prop_assert_eq!(back.entries(), ls.entries());
        prop_assert_eq!(back.total(), ls.total());
    }
}
