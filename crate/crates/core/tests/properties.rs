use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use qedcorr::bell::{
    minimize, mixture_s, normalize_angle, s_value, scan, BellResult, BellSettings,
    DeterministicStrategy, NelderMeadOptions, ScanOptions,
};
use qedcorr::correlations::{joint, marginal, marginalization_check, Detector, Scenario};
use qedcorr::kinematics::{
    electron_spinor_final, measurement_two_spinor, moller_momenta, FinalElectron, SpinConvention,
    Speed,
};

fn scenario() -> impl Strategy<Value = Scenario> {
    prop::sample::select(Scenario::ALL.to_vec())
}

fn speed() -> impl Strategy<Value = Speed> {
    (0.0..=1.0f64).prop_map(|b| Speed::new(b).unwrap())
}

fn angle() -> impl Strategy<Value = f64> {
    0.0..TAU
}

proptest! {
    #[test]
    fn probabilities_lie_in_unit_interval(sc in scenario(), b in speed(), c1 in angle(), c2 in angle()) {
        let p = joint(sc, b, c1, c2);
        prop_assert!((-1e-15..=1.0 + 1e-15).contains(&p));
        for (d, c) in [(Detector::First, c1), (Detector::Second, c2)] {
            let m = marginal(sc, b, d, c);
            prop_assert!((-1e-15..=1.0 + 1e-15).contains(&m));
            prop_assert!(p <= m + 1e-14);
        }
    }

    #[test]
    fn marginals_and_completeness(sc in scenario(), b in speed(), c1 in angle(), c2 in angle()) {
        let check = marginalization_check(sc, b, c1, c2);
        prop_assert!(check.passed, "residual {}", check.residual);
    }

    #[test]
    fn full_turn_periodicity(sc in scenario(), b in speed(), c1 in angle(), c2 in angle()) {
        let p = joint(sc, b, c1, c2);
        prop_assert!((joint(sc, b, c1 + TAU, c2) - p).abs() < 1e-12);
        prop_assert!((joint(sc, b, c1, c2 - TAU) - p).abs() < 1e-12);
    }

    #[test]
    fn s_is_unchanged_by_whole_turns(sc in scenario(), b in speed(), a in prop::array::uniform4(angle()), k in -3i32..3) {
        let s0 = s_value(&BellSettings::new(sc, b, a)).s;
        let shifted = a.map(|x| x + k as f64 * TAU);
        let s1 = s_value(&BellSettings::new(sc, b, shifted)).s;
        prop_assert!((s0 - s1).abs() < 1e-12);
    }

    #[test]
    fn normalized_angles_stay_in_range(x in -1e4..1e4f64) {
        let a = normalize_angle(x);
        prop_assert!((0.0..TAU).contains(&a));
        prop_assert!(((a - x) / TAU - ((a - x) / TAU).round()).abs() < 1e-9);
    }

    #[test]
    fn violation_predicate_and_margin(s in -3.0..2.0f64) {
        let r = BellResult::from_s(s);
        prop_assert_eq!(r.violated, s > 1e-12 || s < -1.0 - 1e-12);
        prop_assert_eq!(r.margin, (s).max(-1.0 - s).max(0.0));
        prop_assert!(r.margin >= 0.0);
    }

    #[test]
    fn s_stays_within_the_physical_range(sc in scenario(), b in speed(), a in prop::array::uniform4(angle())) {
        // Each S is a combination of probabilities bounded by the quantum (Tsirelson-type) limits.
        let s = s_value(&BellSettings::new(sc, b, a)).s;
        prop_assert!(s >= -(1.0 + 2f64.sqrt()) / 2.0 - 1e-12);
        prop_assert!(s <= (2f64.sqrt() - 1.0) / 2.0 + 1e-12);
    }

    #[test]
    fn strategy_mixtures_respect_the_local_bound(w in prop::collection::vec(0.0..1.0f64, 16)) {
        prop_assume!(w.iter().sum::<f64>() > 1e-6);
        let mix: Vec<_> = w.iter().copied().zip(DeterministicStrategy::all()).collect();
        let s = mixture_s(&mix);
        prop_assert!((-1.0 - 1e-12..=1e-12).contains(&s));
    }

    #[test]
    fn out_of_range_speeds_are_rejected(b in prop_oneof![-10.0..-1e-12f64, 1.0 + 1e-12..10.0f64]) {
        prop_assert!(Speed::new(b).is_err());
    }

    #[test]
    fn outgoing_spinors_are_unit_normalized(b in 0.0..0.99f64, th in angle(), c in angle()) {
        let beta = Speed::new(b).unwrap();
        for conv in [SpinConvention::MollerTheta0, SpinConvention::UnpolarizedZ] {
            let xi = measurement_two_spinor(c, conv);
            let u = electron_spinor_final(FinalElectron::P2Prime, xi, beta, th).unwrap();
            prop_assert!((u.bar_dot(&u).re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn momenta_conserve_and_stay_on_shell(b in 0.0..0.99f64, th in angle()) {
        let k = moller_momenta(Speed::new(b).unwrap(), th).unwrap();
        let total = k.p1 + k.p2 - k.p1_prime - k.p2_prime;
        prop_assert!(total.components().iter().all(|c| c.abs() < 1e-12));
        for p in [k.p1, k.p2, k.p1_prime, k.p2_prime] {
            prop_assert!((p.invariant_mass_sq() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn simplex_never_worsens_the_start(x0 in prop::array::uniform2(-3.0..3.0f64)) {
        let f = |x: &[f64; 2]| (2.0 * x[0]).sin() * x[1].cos() + 0.1 * x[0] * x[0];
        let m = minimize(f, x0, &NelderMeadOptions::default());
        prop_assert!(m.value <= f(&x0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn scan_is_deterministic_and_refinement_dominates(sc in scenario(), b in speed()) {
        let opts = ScanOptions { coarse_step: PI / 12.0, refine: true };
        let first = scan(sc, &[b], &opts).unwrap();
        let again = scan(sc, &[b], &opts).unwrap();
        prop_assert_eq!(&first, &again);
        let p = &first.points[0];
        prop_assert!(p.best.margin >= p.coarse.margin);
        prop_assert_eq!(s_value(&p.settings), p.best);
    }
}
