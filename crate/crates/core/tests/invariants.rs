//! Randomized invariants: channel physicality, closed-form identities,
//! inversion round trips, scaling laws, and statistical gates.

use approx::assert_abs_diff_eq;
use macrocat_core::game::{
    p_guess_tms, sigma_max_cat, sigma_max_tms, simulate_tms_game, GameParams, StateKind,
};
use macrocat_core::gaussian::GaussianState;
use macrocat_core::macroscopicity::{equivalent_cat_photon_number, n_eff_cat};
use macrocat_core::{cavity, Error};
use proptest::prelude::*;
use std::f64::consts::FRAC_PI_2;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn loss_preserves_physicality(
        g in 0.0..3.0f64,
        eta1 in 0.0..=1.0f64,
        eta2 in 0.0..=1.0f64,
    ) {
        let state = GaussianState::two_mode_squeezed_vacuum(g).unwrap();
        let lossy = state.apply_loss(&[eta1, eta2]).unwrap();
        let min = lossy
            .symplectic_eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        prop_assert!(min >= 0.5 - 1e-9, "min symplectic eigenvalue {min}");
    }

    #[test]
    fn quadrature_noise_preserves_physicality(
        g in 0.0..3.0f64,
        angle in 0.0..std::f64::consts::TAU,
        dh in 0.0..2.0f64,
        mode in 0usize..2,
    ) {
        let state = GaussianState::two_mode_squeezed_vacuum(g).unwrap();
        let noisy = state.apply_quadrature_noise(mode, angle, dh).unwrap();
        let min = noisy
            .symplectic_eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        prop_assert!(min >= 0.5 - 1e-9, "min symplectic eigenvalue {min}");
    }

    #[test]
    fn tms_variance_closed_form(g in 0.0..3.0f64, phi in 0.0..std::f64::consts::TAU) {
        // Sum and difference combinations against the cosh/sinh form.
        let state = GaussianState::two_mode_squeezed_vacuum(g).unwrap();
        let c = (2.0 * g).cosh();
        let s = (2.0 * g).sinh();
        let sum = macrocat_core::QuadratureObservable::new(
            vec![(0, phi, 1.0), (1, phi, 1.0)],
        ).unwrap();
        let diff = macrocat_core::QuadratureObservable::new(
            vec![(0, phi, 1.0), (1, phi, -1.0)],
        ).unwrap();
        let v_sum = state.quadrature_variance(&sum).unwrap();
        let v_diff = state.quadrature_variance(&diff).unwrap();
        let scale = 1.0f64.max(c);
        prop_assert!((v_sum - (c - s * (2.0 * phi).cos())).abs() <= 1e-12 * scale);
        prop_assert!((v_diff - (c + s * (2.0 * phi).cos())).abs() <= 1e-12 * scale);
    }

    #[test]
    fn witness_identity_and_separable_floor(g in 0.0..3.0f64, n1 in 0.0..4.0f64, n2 in 0.0..4.0f64) {
        let tms = GaussianState::two_mode_squeezed_vacuum(g).unwrap();
        let ds = tms.duan_simon_value(1.0, 0.0, FRAC_PI_2, 0.0, FRAC_PI_2).unwrap();
        prop_assert!((ds - 2.0 * (-2.0 * g).exp()).abs() <= 1e-12);

        let thermal = GaussianState::thermal(&[n1, n2]).unwrap();
        let floor = thermal.duan_simon_value(1.0, 0.0, FRAC_PI_2, 0.0, FRAC_PI_2).unwrap();
        prop_assert!(floor >= 2.0 - 1e-12);
    }

    #[test]
    fn sigma_max_round_trip(p in 0.51..0.99f64, g in 0.3..3.0f64) {
        match sigma_max_tms(p, g) {
            Ok(sigma) => {
                let back = p_guess_tms(g, sigma);
                prop_assert!((back - p).abs() <= 1e-9, "p {p}, back {back}");
            }
            Err(Error::OutOfRange(_)) => {
                prop_assert!(p > p_guess_tms(g, 0.0));
            }
            Err(e) => return Err(TestCaseError::fail(format!("unexpected error {e}"))),
        }
    }

    #[test]
    fn equivalent_cat_solver_round_trip(a in 0.1..10.0f64) {
        let n_eff = n_eff_cat(a);
        let photon = equivalent_cat_photon_number(n_eff).unwrap();
        prop_assert!((photon - a * a.tanh()).abs() <= 1e-9 * (1.0 + a));
    }

    #[test]
    fn cavity_uncertainty_and_floor(
        chi in 0.2..2.0f64,
        ratio in 0.0..2.5f64,
        t in 0.0..4.0f64,
    ) {
        let lambda = chi * ratio;
        let params = cavity::CavityParams::new(chi, lambda, t).unwrap();
        let (minus, plus) = cavity::delta_variances(&params);
        prop_assert!(minus <= plus + 1e-12);
        prop_assert!(minus * plus >= 0.25 - 1e-9);
        prop_assert!(minus >= lambda / (2.0 * (lambda + chi)) - 1e-12);
    }
}

#[test]
fn monte_carlo_matches_analytic_across_seeds() {
    // Statistical gate: at least 95 of 100 independent seeds land
    // within four standard errors of the closed form.
    let (g, sigma) = (0.9, 0.6);
    let analytic = p_guess_tms(g, sigma);
    let mut within = 0;
    for seed in 0..100u64 {
        let params = GameParams::new(StateKind::Tms { g }, sigma, 20_000, seed).unwrap();
        let result = simulate_tms_game(&params).unwrap();
        if (result.p_guess_empirical - analytic).abs() < 4.0 * result.standard_error {
            within += 1;
        }
    }
    assert!(within >= 95, "only {within} of 100 runs within 4 standard errors");
}

fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[test]
fn tolerable_noise_scales_as_sqrt_photon_number() {
    let p_target = 0.75;

    // Two-mode squeezed state over g in [1, 3].
    let mut tms_points = Vec::new();
    for i in 0..=20 {
        let g = 1.0 + 2.0 * i as f64 / 20.0;
        let n = 2.0 * g.sinh().powi(2);
        tms_points.push((n, sigma_max_tms(p_target, g).unwrap()));
    }
    let slope = log_log_slope(&tms_points);
    assert!((slope - 0.5).abs() < 0.02, "tms slope {slope}");

    // Cat state over the asymptotic intensity range.
    let mut cat_points = Vec::new();
    for i in 0..=20 {
        let alpha_sq = 10.0 * 100.0f64.powf(i as f64 / 20.0);
        let n = alpha_sq * alpha_sq.tanh();
        cat_points.push((n, sigma_max_cat(p_target, alpha_sq.sqrt()).unwrap()));
    }
    let slope = log_log_slope(&cat_points);
    assert!((slope - 0.5).abs() < 0.02, "cat slope {slope}");
}

#[test]
fn noise_caps_match_degraded_states_at_large_squeezing() {
    // Large-g limits: the certifiable-size ceilings equal the bound of
    // the noise-degraded ideal state. The residual e^{-2g} offset and
    // the cosh-cancellation noise both sit below 1e-4 at g = 8.
    use macrocat_core::macroscopicity::{cap_loss, cap_quadrature_noise, n_eff_lower_bound, BoundConvention};
    let g = 8.0;
    let (dh1, dh2) = (0.04, 0.06);
    let state = GaussianState::two_mode_squeezed_vacuum(g).unwrap();
    let noisy = state
        .apply_quadrature_noise(0, 0.0, dh1)
        .unwrap()
        .apply_quadrature_noise(1, 0.0, dh2)
        .unwrap();
    let v = noisy.conjugate_squeezed_variance().unwrap();
    let bound = n_eff_lower_bound(v, BoundConvention::AsPrinted).unwrap();
    assert_abs_diff_eq!(bound, cap_quadrature_noise(dh1, dh2).unwrap(), epsilon = 1e-4);

    let eta = 0.85;
    let lossy = state.apply_loss(&[eta, eta]).unwrap();
    let v = lossy.conjugate_squeezed_variance().unwrap();
    let bound = n_eff_lower_bound(v, BoundConvention::AsPrinted).unwrap();
    assert_abs_diff_eq!(bound, cap_loss(eta).unwrap(), epsilon = 1e-4);

    // And the approach is monotone in g.
    let closer = |gg: f64| {
        let s = GaussianState::two_mode_squeezed_vacuum(gg)
            .unwrap()
            .apply_loss(&[eta, eta])
            .unwrap();
        let v = s.conjugate_squeezed_variance().unwrap();
        (n_eff_lower_bound(v, BoundConvention::AsPrinted).unwrap() - cap_loss(eta).unwrap()).abs()
    };
    assert!(closer(4.0) < closer(2.0));
}

#[test]
fn phase_noise_cap_log_slope_over_window() {
    // Least-squares slope of log(cap) against g over [2, 4].
    use macrocat_core::macroscopicity::cap_phase_noise;
    let mut points = Vec::new();
    for i in 0..=20 {
        let g = 2.0 + 2.0 * i as f64 / 20.0;
        points.push((g.exp(), cap_phase_noise(0.01, g).unwrap()));
    }
    // log cap vs log e^g = g: slope in g of the log directly.
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for (i, &(_, cap)) in points.iter().enumerate() {
        let g = 2.0 + 2.0 * i as f64 / 20.0;
        let l = cap.ln();
        sx += g;
        sy += l;
        sxx += g * g;
        sxy += g * l;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    assert!((slope + 2.0).abs() < 0.01, "slope {slope}");
}
