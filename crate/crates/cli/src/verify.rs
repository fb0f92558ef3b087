//! The `verify` subcommand: runs the cross-representation oracle suite
//! and reports the worst deviation of each check against its tolerance.
//! Deterministic for a fixed seed; any breach is a gate failure.

use macrocat_core::coherence::{self, EnvelopeModel, GridSpec, GridState};
use macrocat_core::fock::{FockVector, TwoModeOperator};
use macrocat_core::game::{p_guess_tms, sigma_max_tms, simulate_tms_game, GameParams, StateKind};
use macrocat_core::gaussian::{GaussianState, QuadratureObservable};
use macrocat_core::rng::stream_rng;
use macrocat_core::cavity::{self, CavityParams, ScalarState};
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::FRAC_PI_2;

pub struct Check {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

/// Run every check; the list and its order are fixed.
pub fn run_suite(seed: u64) -> Vec<Check> {
    vec![
        gaussian_vs_fock(),
        witness_closed_form(seed),
        cavity_closed_vs_rk4(),
        coherence_decomposition(),
        game_monte_carlo(seed),
        sigma_max_round_trip(seed),
    ]
}

fn gaussian_vs_fock() -> Check {
    let cutoff = 50;
    let mut worst: f64 = 0.0;
    for g in [0.15, 0.35, 0.55, 0.7] {
        let gauss = GaussianState::two_mode_squeezed_vacuum(g).unwrap();
        let fock = FockVector::tms(g, cutoff).unwrap();
        for theta in [0.0, 0.9, FRAC_PI_2] {
            for terms in [
                vec![(0usize, theta, 1.0)],
                vec![(0usize, theta, 1.0), (1, theta, 1.0)],
                vec![(0usize, theta, 1.0), (1, theta, -1.0)],
            ] {
                let obs = QuadratureObservable::new(terms.clone()).unwrap();
                let op = TwoModeOperator::quadrature_sum(&terms, cutoff).unwrap();
                let dv = (gauss.quadrature_variance(&obs).unwrap()
                    - fock.variance(&op).unwrap())
                .abs();
                worst = worst.max(dv);
            }
        }
        worst = worst.max(
            (gauss.mean_photon_number() - fock.mean_total_photon_number().unwrap()).abs(),
        );
    }
    Check { name: "gaussian-vs-fock moments", max_deviation: worst, tolerance: 1e-8 }
}

fn witness_closed_form(seed: u64) -> Check {
    let mut rng = stream_rng(seed, 1);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let g: f64 = rng.gen_range(0.0..3.0);
        let state = GaussianState::two_mode_squeezed_vacuum(g).unwrap();
        let ds = state
            .duan_simon_value(1.0, 0.0, FRAC_PI_2, 0.0, FRAC_PI_2)
            .unwrap();
        worst = worst.max((ds - 2.0 * (-2.0 * g).exp()).abs());
    }
    Check { name: "witness closed form", max_deviation: worst, tolerance: 1e-12 }
}

fn cavity_closed_vs_rk4() -> Check {
    let initial = ScalarState::new(Complex64::new(0.6, -0.2), Complex64::new(0.3, 0.4), -0.2);
    let mut worst: f64 = 0.0;
    for chi in [0.5, 1.0, 1.5] {
        for lambda in [0.0, 0.5, 1.0, 1.5] {
            for t in [0.4, 1.0, 2.0] {
                let params = CavityParams::new(chi, lambda, t).unwrap();
                let closed = cavity::propagate_scalars(initial, &params);
                let numeric = cavity::ode_integrate(initial, &params, 0.004).unwrap();
                let dev = ((closed.eta - numeric.eta).norm_sqr()
                    + (closed.mu - numeric.mu).norm_sqr()
                    + (closed.kappa - numeric.kappa).powi(2))
                .sqrt();
                worst = worst.max(dev);
            }
        }
    }
    Check { name: "cavity closed form vs rk4", max_deviation: worst, tolerance: 1e-8 }
}

fn coherence_decomposition() -> Check {
    let spec = GridSpec::new(8.0, 256).unwrap();
    let mut worst: f64 = 0.0;
    for (g1, g2) in [(1.0, 2.0), (0.7, 3.0)] {
        let state = GridState::gaussian_two_mode(
            spec,
            (-0.8f64).exp(),
            (0.8f64).exp(),
            EnvelopeModel::Gaussian { gamma1: g1, gamma2: g2 },
        )
        .unwrap();
        let both = coherence::momentum_moments_decohered(&state).unwrap();
        let a = both.decomposition.unwrap();
        let b = both.direct;
        worst = worst
            .max((a.p1_sq - b.p1_sq).abs())
            .max((a.p2_sq - b.p2_sq).abs())
            .max((a.p1_p2 - b.p1_p2).abs());
    }
    Check { name: "decoherence decomposition a-vs-b", max_deviation: worst, tolerance: 1e-6 }
}

fn game_monte_carlo(seed: u64) -> Check {
    let (g, sigma) = (1.0, 0.5);
    let params = GameParams::new(StateKind::Tms { g }, sigma, 200_000, seed).unwrap();
    let result = simulate_tms_game(&params).unwrap();
    let analytic = p_guess_tms(g, sigma);
    let dev = (result.p_guess_empirical - analytic).abs();
    Check {
        name: "game monte carlo vs analytic",
        max_deviation: dev,
        tolerance: 4.0 * result.standard_error,
    }
}

fn sigma_max_round_trip(seed: u64) -> Check {
    let mut rng = stream_rng(seed, 2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let g = rng.gen_range(0.5..3.0);
        let ceiling = p_guess_tms(g, 0.0);
        let p = 0.5 + rng.gen_range(0.02..0.98) * (ceiling - 0.5);
        let sigma = sigma_max_tms(p, g).unwrap();
        worst = worst.max((p_guess_tms(g, sigma) - p).abs());
    }
    Check { name: "sigma_max round trip", max_deviation: worst, tolerance: 1e-9 }
}
