use std::f64::consts::PI;

use proptest::prelude::*;

use wright_hopf::bifurcation::{
    classify, classify_sequence, hopf_threshold, normal_form_k, Direction, SequenceCase,
    DEFAULT_TOL, H_LIMIT,
};
use wright_hopf::cooke::{branch_map_check, cooke_map};
use wright_hopf::nonlinearity::taylor_from_samples;
use wright_hopf::period_bounds::{
    bound_all_subcritical, bound_supercritical, bound_switching, linear_period,
};
use wright_hopf::spectral::critical_value;
use wright_hopf::{Nonlinearity, Preset};

fn k_range() -> impl Strategy<Value = i64> {
    -50i64..=50
}

proptest! {
    #[test]
    fn k_sign_matches_threshold(b in -3.0..3.0f64, c in -5.0..5.0f64, k in k_range()) {
        let d = c - hopf_threshold(k) * b * b;
        prop_assume!(d.abs() > 1e-9);
        prop_assert_eq!(normal_form_k(b, c, k).signum(), d.signum());
    }

    #[test]
    fn schwarzian_identity_for_cubics(b in -3.0..3.0f64, c in -5.0..5.0f64) {
        let f = Nonlinearity::cubic(b, c);
        let s = f.schwarzian(0.0).unwrap();
        prop_assert!((s - 6.0 * (c - b * b)).abs() <= 1e-8);
    }

    #[test]
    fn below_first_threshold_all_super(b in -3.0..3.0f64, gap in 1e-6..4.0f64, k in k_range()) {
        prop_assume!(b.abs() > 1e-3);
        let c = hopf_threshold(0) * b * b - gap;
        prop_assert_eq!(classify(b, c, k, DEFAULT_TOL), Direction::Supercritical);
        prop_assert_eq!(classify_sequence(b, c, DEFAULT_TOL).case, SequenceCase::AllSuper);
    }

    #[test]
    fn above_max_threshold_all_sub(b in -3.0..3.0f64, gap in 1e-6..4.0f64, k in k_range()) {
        prop_assume!(b.abs() > 1e-3);
        let c = hopf_threshold(-1) * b * b + gap;
        prop_assert_eq!(classify(b, c, k, DEFAULT_TOL), Direction::Subcritical);
        prop_assert_eq!(classify_sequence(b, c, DEFAULT_TOL).case, SequenceCase::AllSub);
    }

    #[test]
    fn sequence_agrees_with_pointwise(b in -3.0..3.0f64, ratio in 1.2..1.6f64) {
        prop_assume!(b.abs() > 1e-2);
        let c = ratio * b * b;
        let seq = classify_sequence(b, c, DEFAULT_TOL);
        for k in -60..=60 {
            let expected = classify(b, c, k, DEFAULT_TOL);
            prop_assert_eq!(seq.direction_at(k), expected);
            let by_case = match seq.case {
                SequenceCase::AllSuper => Direction::Supercritical,
                SequenceCase::AllSub => Direction::Subcritical,
                SequenceCase::BoundaryCase => {
                    if k >= 0 { Direction::Subcritical } else { Direction::Supercritical }
                }
                SequenceCase::SwitchNonneg => match seq.n {
                    Some(n) if (0..=n).contains(&k) => Direction::Subcritical,
                    _ if k == 0 && seq.n.is_none() => Direction::Degenerate,
                    _ => Direction::Supercritical,
                },
                SequenceCase::SwitchNeg => match seq.n {
                    Some(n) if (n..=-1).contains(&k) => Direction::Supercritical,
                    _ if k == -1 && seq.n.is_none() => Direction::Degenerate,
                    _ => Direction::Subcritical,
                },
                SequenceCase::Degenerate => Direction::Degenerate,
            };
            prop_assert_eq!(by_case, expected, "k = {}", k);
        }
    }

    #[test]
    fn threshold_monotone(k in 0i64..100_000) {
        prop_assert!(hopf_threshold(k) < hopf_threshold(k + 1));
        prop_assert!(hopf_threshold(k + 1) < H_LIMIT);
        let n = -k - 1;
        prop_assert!(hopf_threshold(n) > hopf_threshold(n - 1));
        prop_assert!(hopf_threshold(n - 1) > H_LIMIT);
        prop_assert!(hopf_threshold(n) <= hopf_threshold(-1));
    }

    #[test]
    fn cooke_composition(mu in 0.1..20.0f64, t in 0.05..10.0f64, l1 in 0u32..=20, l2 in 0u32..=20) {
        let a = cooke_map(mu, t, l1).unwrap();
        let ab = cooke_map(a.mu_out, a.period_out, l2).unwrap();
        let direct = cooke_map(mu, t, l1 + l2).unwrap();
        prop_assert!((ab.mu_out - direct.mu_out).abs() <= 1e-12 * direct.mu_out);
        prop_assert!((ab.period_out - direct.period_out).abs() <= 1e-12 * direct.period_out);
    }

    #[test]
    fn cooke_period_decreasing(mu in 0.1..20.0f64, t in 0.05..10.0f64, l in 0u32..50) {
        let a = cooke_map(mu, t, l).unwrap();
        let b = cooke_map(mu, t, l + 1).unwrap();
        prop_assert!(b.period_out < a.period_out);
    }

    #[test]
    fn bounds_shrink_to_linear_period(k in 0u32..20, n_off in 0u32..5) {
        let n = k + n_off;
        let eta = 1e-9;
        let t0 = linear_period(k);
        prop_assert!((bound_supercritical(k, eta).unwrap().lower.unwrap() - t0).abs() < 1e-8);
        prop_assert!((bound_all_subcritical(k, eta).unwrap().upper.unwrap() - t0).abs() < 1e-8);
        let sw = bound_switching(k, eta, n).unwrap();
        prop_assert!((sw.lower.unwrap() - t0).abs() < 1e-8);
        if let Some(u) = sw.upper {
            prop_assert!((u - t0).abs() < 1e-8);
        }
    }

    #[test]
    fn interior_gap_formula(k in 0u32..10, n_off in 1u32..6, eta in 1e-4..1.0f64) {
        let n = k + n_off;
        let b = bound_switching(k, eta, n).unwrap();
        let (lo, hi) = (b.lower.unwrap(), b.upper.unwrap());
        let m = (n - k) as f64;
        let gap = 2.0 * eta / PI * (1.0 / m - 1.0 / (m + 1.0)) / ((4 * k + 1) as f64 - 2.0 * eta / PI);
        prop_assert!(hi > lo);
        prop_assert!(((hi - lo) - gap).abs() <= 1e-12 * hi);
    }

    #[test]
    fn bound_monotone_in_eta(k in 0u32..10, eta in 1e-4..1.0f64, d in 1e-4..0.5f64) {
        let lo1 = bound_supercritical(k, eta).unwrap().lower.unwrap();
        let lo2 = bound_supercritical(k, eta + d).unwrap().lower.unwrap();
        prop_assert!(lo2 < lo1);
        let hi1 = bound_all_subcritical(k, eta).unwrap().upper.unwrap();
        let hi2 = bound_all_subcritical(k, eta + d).unwrap().upper.unwrap();
        prop_assert!(hi2 > hi1);
    }

    #[test]
    fn supercritical_bound_survives_cooke(k in 0u32..10, l in 1u32..10, eta in 1e-4..2.0f64, excess in 0.0..3.0f64) {
        let lower = bound_supercritical(k, eta).unwrap().lower.unwrap();
        let t = lower * (1.0 + excess);
        let image = cooke_map(critical_value(k as i64) + eta, t, l).unwrap();
        prop_assert!(image.mu_out > critical_value((k + l) as i64));
    }

    #[test]
    fn scaling_keeps_normalized_coefficients(b in -2.0..2.0f64, c in -3.0..3.0f64, a in 0.1..10.0f64) {
        let f = Nonlinearity::cubic(b, c);
        let g = f.scaled(a).unwrap();
        prop_assert!((g.d1() - a * f.d1()).abs() <= 1e-12 * a);
        prop_assert!((g.b() - b).abs() <= 1e-9);
        prop_assert!((g.c() - c).abs() <= 1e-9);
        prop_assert!((g.original_mu(2.0) - 2.0 / a).abs() <= 1e-12);
    }
}

#[test]
fn branch_map_small_indices() {
    for k in 0..=20 {
        for l in 0..=20 {
            assert!(branch_map_check(k, l), "k = {k}, l = {l}");
        }
    }
}

#[test]
fn presets_reproduced_from_samples() {
    for name in Preset::NAMES.iter().copied().filter(|n| !n.starts_with("cubic")).chain(["cubic(0.3,-1.2)"]) {
        let f: Nonlinearity = wright_hopf::make_builtin(name).unwrap();
        let t = taylor_from_samples(|x| f.eval(x)).unwrap();
        assert!((t.d1 - f.d1()).abs() < 1e-6, "{name}");
        assert!((t.b - f.b()).abs() < 1e-6, "{name}");
        assert!((t.c - f.c()).abs() < 1e-6, "{name}");
    }
}

#[test]
fn degenerate_is_reported() {
    for k in -5..=5 {
        let b = 0.7;
        let c = hopf_threshold(k) * b * b;
        assert_eq!(classify(b, c, k, DEFAULT_TOL), Direction::Degenerate);
    }
}
