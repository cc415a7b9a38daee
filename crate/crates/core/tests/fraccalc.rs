use fracfvt_core::fraccalc::{
    caputo_derivative, cesaro_profile, rl_integral, semigroup_defect, FracOrder, SampledSignal, TimeGrid,
};
use fracfvt_core::specfun::gamma;
use proptest::prelude::*;

fn grid(h: f64, t_end: f64) -> TimeGrid {
    TimeGrid::span(0.0, t_end, h).unwrap()
}

fn order(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rl_integral_is_linear(
        a in -5.0f64..5.0,
        b in -5.0f64..5.0,
        alpha in 0.05f64..3.0,
        fs in prop::collection::vec(-10.0f64..10.0, 40),
        gs in prop::collection::vec(-10.0f64..10.0, 40),
    ) {
        let g = TimeGrid::new(0.0, 0.05, 40).unwrap();
        let f = SampledSignal::scalar(g, fs).unwrap();
        let h = SampledSignal::scalar(g, gs).unwrap();
        let lhs = rl_integral(&f.combine(a, &h, b).unwrap(), order(alpha)).unwrap();
        let (if_, ih) = (rl_integral(&f, order(alpha)).unwrap(), rl_integral(&h, order(alpha)).unwrap());
        let rhs = if_.combine(a, &ih, b).unwrap();
        let scale = a.abs() * if_.max_abs() + b.abs() * ih.max_abs();
        for (x, y) in lhs.values().iter().zip(rhs.values()) {
            prop_assert!((x - y).abs() <= 1e-12 * scale.max(1e-300));
        }
    }

    #[test]
    fn rl_integral_preserves_sign(
        alpha in 0.05f64..3.0,
        fs in prop::collection::vec(0.0f64..10.0, 60),
    ) {
        let f = SampledSignal::scalar(TimeGrid::new(0.0, 0.1, 60).unwrap(), fs).unwrap();
        let i = rl_integral(&f, order(alpha)).unwrap();
        prop_assert!(i.values().iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn caputo_kills_constants(c in -100.0f64..100.0, alpha in 0.05f64..2.95) {
        prop_assume!(alpha.fract() != 0.0);
        let x = SampledSignal::from_fn(grid(0.01, 2.0), |_| c).unwrap();
        prop_assert!(caputo_derivative(&x, order(alpha)).unwrap().max_abs() <= 1e-10);
    }

    #[test]
    fn cesaro_profile_of_constant(c in -10.0f64..10.0, alpha in 0.0f64..4.0) {
        let x = SampledSignal::from_fn(grid(0.01, 3.0), |_| c).unwrap();
        let g = cesaro_profile(&x, alpha).unwrap();
        for v in &g.values()[1..] {
            prop_assert!((v - c / (alpha + 1.0)).abs() <= 1e-8);
        }
    }
}

fn power_rule_error(alpha: f64, beta: f64, h: f64) -> f64 {
    let f = SampledSignal::from_fn(grid(h, 1.0), |t| t.powf(beta)).unwrap();
    let i = rl_integral(&f, order(alpha)).unwrap();
    let c = gamma(beta + 1.0).unwrap() / gamma(alpha + beta + 1.0).unwrap();
    i.grid()
        .times()
        .zip(i.values())
        .fold(0.0, |m, (t, v)| m.max((v - c * t.powf(alpha + beta)).abs()))
}

#[test]
fn power_rule_second_order() {
    for alpha in [0.25, 0.5, 1.5] {
        // piecewise-linear signals are integrated exactly
        for beta in [0.0, 1.0] {
            assert!(power_rule_error(alpha, beta, 1e-2) <= 1e-12, "alpha {alpha} beta {beta}");
        }
        let ratio = power_rule_error(alpha, 2.5, 1e-2) / power_rule_error(alpha, 2.5, 5e-3);
        assert!((3.5..=4.5).contains(&ratio), "alpha {alpha}: ratio {ratio}");
    }
}

#[test]
fn semigroup_order_for_smooth_signal() {
    let defect = |h| semigroup_defect(&SampledSignal::from_fn(grid(h, 5.0), f64::sin).unwrap(), 0.3, 0.7).unwrap();
    let (a, b) = (defect(4e-3), defect(2e-3));
    assert!((a / b).log2() >= 1.8, "order {}", (a / b).log2());
}

#[test]
fn zero_signal_has_zero_defect() {
    let z = SampledSignal::from_fn(grid(0.01, 1.0), |_| 0.0).unwrap();
    assert_eq!(semigroup_defect(&z, 0.4, 0.9).unwrap(), 0.0);
}
