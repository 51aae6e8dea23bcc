use std::f64::consts::{FRAC_PI_2, PI};

use point_interaction::oracle_well::{bound_state_kappa, phase_shift, scattering_length, tune_depth, zero_range_limit_study};
use point_interaction::specfun;
use point_interaction::states::bound_state;
use point_interaction::{Coupling, Dimension, SquareWell};

/// Plain bisection on the 2D bound-state matching condition
/// `q J1(qR)/J0(qR) = kappa K1(kappa R)/K0(kappa R)` in kappa.
fn kappa_2d_by_bisection(w: &SquareWell) -> f64 {
    let (r, v0) = (w.radius, w.depth);
    let f = |kappa: f64| {
        let q = (v0 - kappa * kappa).sqrt();
        let k0 = specfun::mod_bessel_k0(kappa * r).unwrap();
        let k1 = specfun::mod_bessel_k1(kappa * r).unwrap();
        q * specfun::j1(q * r) * k0 - kappa * k1 * specfun::j0(q * r)
    };
    // deepest root: scan down from the bottom of the well
    let top = v0.sqrt() * (1.0 - 1e-12);
    let n = 20000;
    let mut hi = top;
    for i in 1..n {
        let lo = top * (1.0 - i as f64 / n as f64);
        if f(lo).signum() != f(hi).signum() {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if f(m).signum() == f(a).signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            return 0.5 * (a + b);
        }
        hi = lo;
    }
    panic!("no bound state found");
}

#[test]
fn tuned_2d_well_binds_at_the_transcendental_root() {
    let w = tune_depth(Dimension::Two, 0.01, &Coupling::two_d(1.0).unwrap()).unwrap();
    let oracle = kappa_2d_by_bisection(&w);
    assert!((oracle - 1.0).abs() < 1e-6, "{oracle}");
    assert!((bound_state_kappa(&w).unwrap() - oracle).abs() < 1e-6);
}

#[test]
fn depth_divergence_law() {
    let c = Coupling::three_d(0.7).unwrap();
    let mut prev = f64::INFINITY;
    for r in [1e-1, 1e-2, 1e-3, 1e-4] {
        let w = tune_depth(Dimension::Three, r, &c).unwrap();
        let dev = (w.depth * r * r - FRAC_PI_2 * FRAC_PI_2).abs();
        assert!(dev < prev);
        prev = dev;
    }
    assert!(prev < 1e-3);
}

#[test]
fn low_energy_tangent_matches_family() {
    // tan(-delta0)/k -> -1/k_b' to first order in k R
    for kbp in [1.0, -1.0, 0.4] {
        let c = Coupling::three_d(kbp).unwrap();
        let r = 1e-3;
        let w = tune_depth(Dimension::Three, r, &c).unwrap();
        for k in [1e-3, 1e-2, 0.1] {
            let lhs = (-phase_shift(k, &w).unwrap()).tan() / k;
            let want = -1.0 / kbp;
            assert!((lhs - want).abs() <= 5.0 * k * r * want.abs().max(1.0) + 1e-9, "kbp {kbp}, k {k}: {lhs}");
        }
    }
}

#[test]
fn levinson_for_one_bound_state() {
    let w = tune_depth(Dimension::Three, 0.5, &Coupling::three_d(-1.0).unwrap()).unwrap();
    assert!(bound_state_kappa(&w).is_ok());
    let d0 = phase_shift(1e-6, &w).unwrap();
    let d_inf = phase_shift(400.0, &w).unwrap();
    assert!((d0 - d_inf - PI).abs() < 0.05, "{d0} - {d_inf}");
    // coarse continuity along the way
    let mut prev = d0;
    for i in 1..=80 {
        let d = phase_shift(i as f64 * 0.5, &w).unwrap();
        assert!((d - prev).abs() < 0.5);
        prev = d;
    }
}

#[test]
fn bound_state_converges_to_point_interaction() {
    for (dim, c) in [
        (Dimension::Three, Coupling::three_d(-1.5).unwrap()),
        (Dimension::Two, Coupling::two_d(0.8).unwrap()),
    ] {
        let want = bound_state(&c).unwrap().kappa;
        let errs: Vec<f64> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|r| (bound_state_kappa(&tune_depth(dim, *r, &c).unwrap()).unwrap() - want).abs())
            .collect();
        assert!(errs[2] < errs[0] || errs[0] < 1e-9, "{dim:?}: {errs:?}");
        assert!(errs[2] < 1e-2, "{dim:?}: {errs:?}");
    }
}

#[test]
fn unbound_sign_has_no_bound_state_in_the_limit() {
    let w = tune_depth(Dimension::Three, 1e-2, &Coupling::three_d(1.0).unwrap()).unwrap();
    assert!(bound_state_kappa(&w).is_err());
    assert!(scattering_length(&w).unwrap() < 0.0);
}

#[test]
fn threshold_well_has_divergent_scattering_length() {
    let w = SquareWell::new(Dimension::Three, 1.0, FRAC_PI_2 * FRAC_PI_2 * (1.0 - 1e-10)).unwrap();
    assert!(scattering_length(&w).unwrap().abs() > 1e9);
}

#[test]
fn study_orders_rows_and_reports_rate() {
    let c = Coupling::three_d(1.0).unwrap();
    let radii = [0.2, 0.1, 0.05, 0.025, 0.0125];
    let t = zero_range_limit_study(Dimension::Three, &c, 0.5, &radii).unwrap();
    let got: Vec<f64> = t.rows.iter().map(|r| r.radius).collect();
    assert_eq!(got, radii);
    assert!(t.monotone_tail);
    // effective-range correction is linear in R
    let rate = t.observed_rate.unwrap();
    assert!((rate - 1.0).abs() < 0.1, "{rate}");
    assert!(t.rows[0].error > t.final_error());
}
