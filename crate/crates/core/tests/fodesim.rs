use std::collections::BTreeMap;
use std::f64::consts::PI;

use fracfvt_core::fodesim::{
    certificate_integral, certificate_integral_fn, periodicity_report, restart, rhs_registry, solve,
    solve_classical_rk4, FodeError, FodeProblem, Trajectory,
};
use fracfvt_core::fraccalc::{SampledSignal, TimeGrid};
use fracfvt_core::report::Status;
use proptest::prelude::*;

fn rotation() -> fracfvt_core::fodesim::Rhs {
    rhs_registry("rotation", &BTreeMap::new()).unwrap()
}

#[test]
fn fractional_rotation_approaches_classical_as_alpha_tends_to_one() {
    let (horizon, h) = (10.0, 5e-3);
    let reference = solve_classical_rk4(&rotation(), &[1.0, 0.0], horizon, h).unwrap();
    let mut errs = Vec::new();
    for alpha in [0.9, 0.99, 0.999] {
        let p = FodeProblem::new(alpha, rotation(), vec![1.0, 0.0], horizon, h).unwrap();
        let tr = solve(&p).unwrap();
        let err = tr
            .states
            .values()
            .iter()
            .zip(reference.states.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        errs.push(err);
    }
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert!(errs[2] < 0.05, "{errs:?}");
}

#[test]
fn restarts_are_refused() {
    let p = FodeProblem::new(0.6, rotation(), vec![1.0, 0.0], 2.0, 0.01).unwrap();
    let tr = solve(&p).unwrap();
    assert_eq!(restart(&tr, 2.0).unwrap_err(), FodeError::RestartUnsupported);
}

#[test]
fn cosine_certificate_is_bounded_away_from_zero() {
    // mpmath quadrature of ∫₀^{2π} (2π−τ)^{1−α} (−sin τ) dτ
    let oracle = [(0.3, -3.225_748_730_570_509), (0.5, -1.894_693_378_204_330), (0.7, -0.944_396_772_261_781)];
    let g = TimeGrid::span(0.0, 7.0, 1e-3).unwrap();
    let cos = Trajectory::from_signal(SampledSignal::from_fn(g, f64::cos).unwrap());
    for (alpha, want) in oracle {
        let sampled = certificate_integral(&cos, 2.0 * PI, alpha).unwrap().components[0];
        let quad = certificate_integral_fn(|t| -t.sin(), 2.0 * PI, alpha).unwrap();
        assert!((sampled - want).abs() <= 1e-4, "alpha {alpha}: {sampled}");
        assert!((quad - want).abs() <= 1e-10, "alpha {alpha}: {quad}");
        assert!(sampled.abs() >= 0.5);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn constant_trajectories_have_zero_certificate(
        c0 in -50.0f64..50.0,
        c1 in -50.0f64..50.0,
        period in 0.5f64..9.0,
        alpha in 0.05f64..0.95,
    ) {
        let g = TimeGrid::span(0.0, 10.0, 1e-2).unwrap();
        let flat = Trajectory::from_signal(SampledSignal::from_vec_fn(g, 2, |_| vec![c0, c1]).unwrap());
        prop_assert!(certificate_integral(&flat, period, alpha).unwrap().norm <= 1e-12);
    }
}

#[test]
fn rotation_report_contrasts_orders() {
    let cands: Vec<f64> = (0..60).map(|i| 1.0 + 19.0 * i as f64 / 59.0).collect();
    let p = FodeProblem::new(0.8, rotation(), vec![1.0, 0.0], 30.0, 0.01).unwrap();
    let tr = solve(&p).unwrap();
    let (rec, scan) = periodicity_report(&p, &tr, &cands, 4.0, None, 0.05).unwrap();
    assert_eq!(rec.status, Status::Pass, "{rec:?}");
    assert!(scan.min_residual >= 0.05);
    assert!(rec.get_f64("certificate_norm").unwrap() > 0.0);

    let zero = rhs_registry("zero", &BTreeMap::new()).unwrap();
    let p = FodeProblem::new(0.5, zero, vec![1.0], 30.0, 0.01).unwrap();
    let tr = solve(&p).unwrap();
    let (rec, scan) = periodicity_report(&p, &tr, &cands, 4.0, None, 0.05).unwrap();
    assert_eq!(rec.status, Status::Inconclusive);
    assert!(scan.curve.iter().all(|(_, r)| *r == 0.0));
}
