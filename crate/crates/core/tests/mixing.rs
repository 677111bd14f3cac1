//! Mixing bounds against each other, against the oracle and against their
//! large-n limits.

use jmshuffle::mixing::{
    character_expectations, character_lower_bound, cutoff_step, cutoff_time, default_threshold,
    l2_upper_bound, limit_profile, poisson_tv, profile_comparison_bound, variance_lower_bound,
    CharacterLowerBound, L2Series, TruncatedL2, DEFAULT_POISSON_TOL,
};
use jmshuffle::oracle::exact_tv_curve;
use jmshuffle::spectrum::{spectrum_kstar, ShuffleSpec};

#[test]
fn sandwich_n5_k2() {
    let spec = ShuffleSpec::kstar(5, 2).unwrap();
    let series = L2Series::new(&spectrum_kstar(5, 2).unwrap()).unwrap();
    let lower = CharacterLowerBound::new(5, 2).unwrap();
    for p in exact_tv_curve(&spec, 80).unwrap().points() {
        assert!(lower.bound(p.t) <= p.value + 1e-12, "t = {}", p.t);
        if p.t > 0 {
            assert!(p.value <= series.bound(p.t) + 1e-12, "t = {}", p.t);
        }
    }
}

#[test]
fn l2_bound_exceeds_tv_at_small_cutoff() {
    let t = cutoff_step(5, 2, 3.0);
    let tv = exact_tv_curve(&ShuffleSpec::kstar(5, 2).unwrap(), t)
        .unwrap()
        .value_at(t)
        .unwrap();
    let l2 = l2_upper_bound(&spectrum_kstar(5, 2).unwrap(), t).unwrap();
    assert!(l2 > tv, "l2 {l2} vs tv {tv} at t = {t}");
}

#[test]
fn chebyshev_form_lower_bound_below_tv_n8_k3() {
    let tv = exact_tv_curve(&ShuffleSpec::kstar(8, 3).unwrap(), 60).unwrap();
    for p in tv.points() {
        for l in [1.0, 2.0, 3.0] {
            if let Ok(b) = variance_lower_bound(8, 3, p.t, l) {
                assert!(b.max(0.0) <= p.value + 1e-12, "t = {}, l = {l}", p.t);
            }
        }
        assert!(character_lower_bound(8, 3, p.t).unwrap() <= p.value + 1e-12);
    }
}

#[test]
fn more_active_positions_mix_faster_n5() {
    let slow = exact_tv_curve(&ShuffleSpec::kstar(5, 1).unwrap(), 40).unwrap();
    let fast = exact_tv_curve(&ShuffleSpec::kstar(5, 5).unwrap(), 40).unwrap();
    for (a, b) in slow.points().iter().zip(fast.points()) {
        assert!(b.value <= a.value + 1e-12, "t = {}", a.t);
    }
}

#[test]
fn start_tv_is_one_minus_inverse_factorial() {
    for n in 2..=6 {
        let tv = exact_tv_curve(&ShuffleSpec::kstar(n, 1).unwrap(), 0).unwrap();
        let expected = 1.0 - 1.0 / (1..=n).product::<usize>() as f64;
        assert!((tv.value_at(0).unwrap() - expected).abs() < 1e-14);
    }
}

fn first_moment(n: usize, k: usize, c: f64) -> f64 {
    1.0 + character_expectations(n, k, cutoff_step(n, k, c))
        .unwrap()
        .standard
        .unwrap()
}

#[test]
fn first_moment_approaches_limit() {
    for c in [0.0f64, 0.5, 1.0] {
        let target = 1.0 + (-c).exp();
        for k_of in [|_: usize| 1, |_: usize| 2, |n: usize| n - 1, |n: usize| n] {
            let errors: Vec<f64> = [50usize, 100, 200, 400]
                .iter()
                .map(|&n| ((first_moment(n, k_of(n), c) - target) / target).abs())
                .collect();
            assert!(
                errors.windows(2).all(|w| w[1] < w[0]),
                "c = {c}: {errors:?}"
            );
            assert!(errors[3] < 0.10, "c = {c}: {errors:?}");
        }
    }
}

#[test]
fn first_moment_limit_for_linear_k() {
    let c: f64 = 0.0;
    for alpha in [0.25, 0.5] {
        let target = 1.0 + (1.0 - alpha) * (-c).exp();
        let errors: Vec<f64> = [100usize, 400, 1600]
            .iter()
            .map(|&n| (first_moment(n, (alpha * n as f64) as usize, c) - target).abs() / target)
            .collect();
        assert!(
            errors.windows(2).all(|w| w[1] < w[0]),
            "alpha = {alpha}: {errors:?}"
        );
        assert!(errors[2] < 0.01, "alpha = {alpha}: {errors:?}");
    }
}

#[test]
fn variance_approaches_limit() {
    let c: f64 = 0.5;
    let target = 1.0 + (-c).exp();
    for k in [1usize, 2, 399, 400] {
        let t = cutoff_step(400, k, c);
        let var = character_expectations(400, k, t)
            .unwrap()
            .variance()
            .unwrap();
        assert!(
            ((var - target) / target).abs() < 0.10,
            "k = {k}: variance {var}"
        );
    }
}

#[test]
fn chebyshev_form_approaches_asymptotic_value() {
    let c: f64 = 2.0;
    let l = c.exp() / 2.0;
    let limit = 1.0 - 1.0 / (std::f64::consts::E * l) - (1.0 + 2.0 * l) / (l * l);
    let at = |n: usize| {
        let t = cutoff_step(n, 1, -c);
        variance_lower_bound(n, 1, t, l).unwrap()
    };
    let (small, large) = (at(100), at(3200));
    assert!((large - limit).abs() < (small - limit).abs());
    assert!((large - limit).abs() < 0.05, "{large} vs {limit}");
    assert!((default_threshold(c) - (-c).exp() / 2.0).abs() < 1e-15);
}

#[test]
fn truncated_matches_exact_at_moderate_n() {
    for (n, k) in [(20, 1), (20, 7), (20, 20), (24, 23)] {
        let exact = L2Series::new(&spectrum_kstar(n, k).unwrap()).unwrap();
        let truncated = TruncatedL2::new(n, k, 8).unwrap();
        for c in [0.0, 2.0, 4.0] {
            let t = cutoff_step(n, k, c);
            let (e, b) = (exact.bound(t), truncated.bound(t));
            assert!(b >= e * (1.0 - 1e-12), "n = {n}, k = {k}, t = {t}");
        }
    }
}

#[test]
fn limit_profile_reference_values() {
    assert!((poisson_tv(2.0, 1.0, DEFAULT_POISSON_TOL) - 0.329753).abs() < 1e-6);
    assert!(limit_profile(-10.0) > 1.0 - 1e-9);
    assert!(limit_profile(10.0) < 1e-4);
    assert!(
        (poisson_tv(1.0 + (-1.0f64).exp(), 1.0, DEFAULT_POISSON_TOL) - limit_profile(1.0)).abs()
            < 1e-15
    );
}

#[test]
fn profile_comparison_vanishes_for_random_transpositions() {
    assert!(profile_comparison_bound(20, 20, 0.0).unwrap() < 1e-12);
    assert!(profile_comparison_bound(12, 3, 1.0).unwrap() > 0.0);
}

#[test]
fn cutoff_time_scales_with_window() {
    let t0 = cutoff_time(100, 1, 0.0);
    let t1 = cutoff_time(100, 1, 1.0);
    assert!((t1 - t0 - 100.0).abs() < 1e-9);
    assert!((cutoff_time(100, 100, 1.0) - cutoff_time(100, 100, 0.0) - 50.0).abs() < 1e-9);
}
