//! The coarse-grained sign-guessing game.
//!
//! Alice measures her mode with a sharp quadrature detector and bins the
//! outcome by sign; Bob measures his mode through a detector with
//! Gaussian read-out noise of spread σ and guesses Alice's bin from the
//! sign of his outcome. The analytic guess probability, its exact
//! inversion σ_max(p), and seeded Monte Carlo simulators (the ground
//! truth the formulas are tested against) live here.
//!
//! For the two-mode squeezed state the x outcomes are anti-correlated
//! under this crate's convention, so Bob's decision rule flips the sign
//! of his noisy outcome; the guess probability is unchanged by that
//! relabeling.

use serde::{Deserialize, Serialize};

use crate::gaussian::{GaussianState, QuadratureSampler};
use crate::rng::stream_rng;
use crate::special::{erf, inverse_erf};
use crate::{Error, Result};

/// Which state Alice prepares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StateKind {
    /// Two-mode squeezed vacuum with squeezing parameter `g`.
    Tms { g: f64 },
    /// Entangled cat `(|↑⟩|α⟩ − |↓⟩|−α⟩)/√2` with real amplitude `α`.
    Cat { alpha: f64 },
}

/// Game configuration: state, Bob's detector spread, sample budget, seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameParams {
    pub state: StateKind,
    pub detector_sigma: f64,
    pub samples: u64,
    pub seed: u64,
}

impl GameParams {
    pub fn new(state: StateKind, detector_sigma: f64, samples: u64, seed: u64) -> Result<Self> {
        if !(detector_sigma >= 0.0) {
            return Err(Error::InvalidArgument("detector sigma must be >= 0".into()));
        }
        if samples == 0 {
            return Err(Error::InvalidArgument("samples must be >= 1".into()));
        }
        match state {
            StateKind::Tms { g } if !g.is_finite() => {
                return Err(Error::InvalidArgument("g must be finite".into()))
            }
            StateKind::Cat { alpha } if !alpha.is_finite() => {
                return Err(Error::InvalidArgument("alpha must be finite".into()))
            }
            _ => {}
        }
        Ok(Self { state, detector_sigma, samples, seed })
    }
}

/// Empirical outcome of a simulated game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameResult {
    pub p_guess_empirical: f64,
    /// Binomial standard error `sqrt(p (1 − p) / samples)`.
    pub standard_error: f64,
    pub samples_used: u64,
}

/// Guess probability for the two-mode squeezed state:
/// `1/2 + arctan(sinh 2g / √(1 + 2σ² cosh 2g)) / π`.
pub fn p_guess_tms(g: f64, sigma: f64) -> f64 {
    let s = (2.0 * g).sinh();
    let c = (2.0 * g).cosh();
    0.5 + (s / (1.0 + 2.0 * sigma * sigma * c).sqrt()).atan() / std::f64::consts::PI
}

/// Guess probability for the cat game under the sign-binning rule:
/// Bob's outcome is `N(±√2 α, 1/2 + σ²)`, so
/// `P = (1 + erf(α / √(1/2 + σ²))) / 2`.
pub fn p_guess_cat(alpha: f64, sigma: f64) -> f64 {
    (1.0 + erf(alpha / (0.5 + sigma * sigma).sqrt())) / 2.0
}

/// Largest detector spread that still achieves `p_target`, by exact
/// algebraic inversion of the guess-probability formula:
/// `σ² = (sinh² 2g · cot²(π (p − 1/2)) − 1) / (2 cosh 2g)`.
/// Round-trips through [`p_guess_tms`] to better than 1e-9.
pub fn sigma_max_tms(p_target: f64, g: f64) -> Result<f64> {
    if !(p_target > 0.5 && p_target < 1.0) {
        return Err(Error::OutOfRange(format!(
            "p_target {p_target} outside (1/2, 1)"
        )));
    }
    let ceiling = p_guess_tms(g, 0.0);
    if p_target > ceiling {
        return Err(Error::OutOfRange(format!(
            "p_target {p_target} above the noiseless ceiling {ceiling}"
        )));
    }
    let s = (2.0 * g).sinh();
    let c = (2.0 * g).cosh();
    let tan = (std::f64::consts::PI * (p_target - 0.5)).tan();
    let sigma_sq = (s * s / (tan * tan) - 1.0) / (2.0 * c);
    Ok(sigma_sq.max(0.0).sqrt())
}

/// The σ_max expression in its published form,
/// `√((−1 + N(1/2 + N) cot²(1/2 − P)) / (2 + 2N))` with `N = 2 sinh² g`.
/// Kept verbatim as a diagnostic; it does not round-trip through
/// [`p_guess_tms`] (its prefactor and the missing π in the cotangent
/// argument disagree with the direct inversion), so callers should
/// treat [`sigma_max_tms`] as the operative value. Returns `None` when
/// the radicand is negative.
pub fn sigma_max_tms_printed(p_target: f64, g: f64) -> Option<f64> {
    let n = 2.0 * g.sinh().powi(2);
    let cot = 1.0 / (0.5 - p_target).tan();
    let radicand = (-1.0 + n * (0.5 + n) * cot * cot) / (2.0 + 2.0 * n);
    (radicand >= 0.0).then(|| radicand.sqrt())
}

/// Tolerable noise for the cat game in its published form,
/// `√(α² / erf⁻¹(p)² − 1/2)`. Errors when the radicand is negative
/// (`p_target` not attainable at this amplitude).
pub fn sigma_max_cat(p_target: f64, alpha: f64) -> Result<f64> {
    if !(p_target > 0.5 && p_target < 1.0) {
        return Err(Error::OutOfRange(format!(
            "p_target {p_target} outside (1/2, 1)"
        )));
    }
    let k = inverse_erf(p_target)?;
    let radicand = alpha * alpha / (k * k) - 0.5;
    if radicand < 0.0 {
        return Err(Error::OutOfRange(format!(
            "p_target {p_target} not attainable at alpha {alpha}"
        )));
    }
    Ok(radicand.sqrt())
}

/// Exact inversion of the sign-binning probability [`p_guess_cat`]:
/// `σ² = α² / erf⁻¹(2p − 1)² − 1/2`. This is the value the Monte Carlo
/// simulator reproduces; the published form ([`sigma_max_cat`]) uses
/// `erf⁻¹(p)` instead and is reported alongside for comparison.
pub fn sigma_max_cat_sign_binning(p_target: f64, alpha: f64) -> Result<f64> {
    if !(p_target > 0.5 && p_target < 1.0) {
        return Err(Error::OutOfRange(format!(
            "p_target {p_target} outside (1/2, 1)"
        )));
    }
    let k = inverse_erf(2.0 * p_target - 1.0)?;
    let radicand = alpha * alpha / (k * k) - 0.5;
    if radicand < 0.0 {
        return Err(Error::OutOfRange(format!(
            "p_target {p_target} not attainable at alpha {alpha}"
        )));
    }
    Ok(radicand.sqrt())
}

fn result_from_hits(hits: u64, samples: u64) -> GameResult {
    let p = hits as f64 / samples as f64;
    GameResult {
        p_guess_empirical: p,
        standard_error: (p * (1.0 - p) / samples as f64).sqrt(),
        samples_used: samples,
    }
}

/// Monte Carlo run of the two-mode game. Draws `(x₁, x₂)` from the
/// exact joint Gaussian, adds read-out noise of spread σ to Bob's
/// outcome, and applies the sign rule (with the convention's sign flip).
/// Deterministic in the seed.
pub fn simulate_tms_game(params: &GameParams) -> Result<GameResult> {
    let StateKind::Tms { g } = params.state else {
        return Err(Error::InvalidArgument("simulate_tms_game needs a tms state".into()));
    };
    let state = GaussianState::two_mode_squeezed_vacuum(g)?;
    let sampler = QuadratureSampler::new(&state, &[0.0, 0.0])?;
    let mut rng = stream_rng(params.seed, 0);
    let sigma = params.detector_sigma;
    let mut hits = 0u64;
    let mut pair = [0.0f64; 2];
    for _ in 0..params.samples {
        sampler.sample_into(&mut rng, &mut pair);
        let noise: f64 = rand::Rng::sample(&mut rng, rand_distr::StandardNormal);
        let bob = pair[1] + sigma * noise;
        // Anti-correlated x: Bob bets on the opposite sign of his outcome.
        if (pair[0] >= 0.0) != (bob >= 0.0) {
            hits += 1;
        }
    }
    Ok(result_from_hits(hits, params.samples))
}

/// Monte Carlo run of the cat game: a fair coin picks `|α⟩` or `|−α⟩`,
/// Bob's x outcome is `N(±√2 α, 1/2 + σ²)`, and he guesses by sign.
pub fn simulate_cat_game(params: &GameParams) -> Result<GameResult> {
    let StateKind::Cat { alpha } = params.state else {
        return Err(Error::InvalidArgument("simulate_cat_game needs a cat state".into()));
    };
    let mut rng = stream_rng(params.seed, 0);
    let spread = (0.5 + params.detector_sigma * params.detector_sigma).sqrt();
    let center = std::f64::consts::SQRT_2 * alpha;
    let mut hits = 0u64;
    for _ in 0..params.samples {
        let up = rand::Rng::gen_bool(&mut rng, 0.5);
        let z: f64 = rand::Rng::sample(&mut rng, rand_distr::StandardNormal);
        let outcome = if up { center } else { -center } + spread * z;
        if (outcome >= 0.0) == up {
            hits += 1;
        }
    }
    Ok(result_from_hits(hits, params.samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn guess_probability_limits() {
        for sigma in [0.0, 0.5, 10.0] {
            assert_abs_diff_eq!(p_guess_tms(0.0, sigma), 0.5, epsilon = 1e-15);
        }
        assert!(p_guess_tms(1.0, 1e6) - 0.5 < 1e-5);
        assert!(p_guess_tms(1.0, 1e6) > 0.5);
        assert_abs_diff_eq!(p_guess_tms(1.0, 0.0), 0.9143631844053802, epsilon = 1e-12);
    }

    #[test]
    fn guess_probability_monotonicity() {
        let mut prev = 1.0;
        for i in 0..40 {
            let sigma = 0.1 * i as f64;
            let p = p_guess_tms(0.8, sigma);
            assert!(p < prev, "not decreasing in sigma at {sigma}");
            prev = p;
        }
        let mut prev = 0.5;
        for i in 1..40 {
            let g = 0.1 * i as f64;
            let p = p_guess_tms(g, 0.3);
            assert!(p > prev, "not increasing in g at {g}");
            prev = p;
        }
    }

    #[test]
    fn sigma_max_round_trips() {
        for (g, p) in [(0.5, 0.6), (1.0, 0.75), (2.0, 0.9), (3.0, 0.55)] {
            let sigma = sigma_max_tms(p, g).unwrap();
            assert_abs_diff_eq!(p_guess_tms(g, sigma), p, epsilon = 1e-9);
        }
    }

    #[test]
    fn sigma_max_boundary_and_errors() {
        let g = 0.7;
        let ceiling = p_guess_tms(g, 0.0);
        let near = ceiling - 1e-12;
        assert!(sigma_max_tms(near, g).unwrap() < 1e-4);
        assert!(sigma_max_tms(ceiling + 1e-9, g).is_err());
        assert!(sigma_max_tms(0.5, g).is_err());
        assert!(sigma_max_tms(1.0, g).is_err());
    }

    #[test]
    fn printed_form_disagrees_with_inversion() {
        // The published expression is kept as a diagnostic only; check
        // it evaluates and does not round-trip.
        let (g, p) = (1.0, 0.75);
        let printed = sigma_max_tms_printed(p, g).unwrap();
        let exact = sigma_max_tms(p, g).unwrap();
        assert!((printed - exact).abs() > 1e-3);
    }

    #[test]
    fn cat_sigma_max_boundary() {
        // Radicand hits zero exactly at p = erf(√2 α).
        let alpha = 1.1;
        let p = erf(std::f64::consts::SQRT_2 * alpha);
        let sigma = sigma_max_cat(p, alpha).unwrap();
        assert_abs_diff_eq!(sigma, 0.0, epsilon = 1e-6);
        assert!(sigma_max_cat(p + 1e-6, alpha).is_err());
    }

    #[test]
    fn cat_sigma_max_printed_value() {
        // α² = 4, p = 0.9: √(4 / erf⁻¹(0.9)² − 1/2).
        let sigma = sigma_max_cat(0.9, 2.0).unwrap();
        assert_abs_diff_eq!(sigma, 1.5674476309419588, epsilon = 1e-10);
    }

    #[test]
    fn cat_sign_binning_round_trips() {
        for (alpha, p) in [(1.0, 0.8), (2.0, 0.9), (3.0, 0.95)] {
            let sigma = sigma_max_cat_sign_binning(p, alpha).unwrap();
            assert_abs_diff_eq!(p_guess_cat(alpha, sigma), p, epsilon = 1e-9);
        }
    }

    #[test]
    fn tms_simulation_matches_analytic() {
        let params =
            GameParams::new(StateKind::Tms { g: 1.0 }, 0.5, 200_000, 0xfeed).unwrap();
        let result = simulate_tms_game(&params).unwrap();
        let analytic = p_guess_tms(1.0, 0.5);
        assert!(
            (result.p_guess_empirical - analytic).abs() < 4.0 * result.standard_error,
            "empirical {} vs analytic {analytic} (stderr {})",
            result.p_guess_empirical,
            result.standard_error
        );
    }

    #[test]
    fn tms_simulation_at_zero_squeezing() {
        let params = GameParams::new(StateKind::Tms { g: 0.0 }, 0.3, 100_000, 7).unwrap();
        let result = simulate_tms_game(&params).unwrap();
        assert!((result.p_guess_empirical - 0.5).abs() < 3.0 * result.standard_error);
    }

    #[test]
    fn cat_simulation_matches_analytic() {
        let params = GameParams::new(StateKind::Cat { alpha: 2.0 }, 1.0, 200_000, 3).unwrap();
        let result = simulate_cat_game(&params).unwrap();
        let analytic = p_guess_cat(2.0, 1.0);
        assert!(
            (result.p_guess_empirical - analytic).abs() < 4.0 * result.standard_error,
            "empirical {} vs analytic {analytic}",
            result.p_guess_empirical
        );
    }

    #[test]
    fn cat_simulation_degenerate_cases() {
        let zero = GameParams::new(StateKind::Cat { alpha: 0.0 }, 0.2, 100_000, 5).unwrap();
        let r = simulate_cat_game(&zero).unwrap();
        assert!((r.p_guess_empirical - 0.5).abs() < 3.0 * r.standard_error);

        let noisy = GameParams::new(StateKind::Cat { alpha: 1.0 }, 1e4, 100_000, 5).unwrap();
        let r = simulate_cat_game(&noisy).unwrap();
        assert!((r.p_guess_empirical - 0.5).abs() < 4.0 * r.standard_error);
    }

    #[test]
    fn simulations_are_deterministic() {
        let params = GameParams::new(StateKind::Tms { g: 0.8 }, 0.4, 10_000, 42).unwrap();
        assert_eq!(simulate_tms_game(&params).unwrap(), simulate_tms_game(&params).unwrap());
        let cat = GameParams::new(StateKind::Cat { alpha: 1.5 }, 0.4, 10_000, 42).unwrap();
        assert_eq!(simulate_cat_game(&cat).unwrap(), simulate_cat_game(&cat).unwrap());
    }

    #[test]
    fn params_validation() {
        assert!(GameParams::new(StateKind::Tms { g: 1.0 }, -0.1, 10, 0).is_err());
        assert!(GameParams::new(StateKind::Tms { g: 1.0 }, 0.1, 0, 0).is_err());
        assert!(GameParams::new(StateKind::Tms { g: f64::NAN }, 0.1, 10, 0).is_err());
        let p = GameParams::new(StateKind::Cat { alpha: 1.0 }, 0.1, 10, 0).unwrap();
        assert!(simulate_tms_game(&p).is_err());
    }

    #[test]
    fn stderr_matches_binomial_formula() {
        let params = GameParams::new(StateKind::Tms { g: 0.6 }, 0.2, 50_000, 9).unwrap();
        let r = simulate_tms_game(&params).unwrap();
        let expected =
            (r.p_guess_empirical * (1.0 - r.p_guess_empirical) / r.samples_used as f64).sqrt();
        assert_abs_diff_eq!(r.standard_error, expected, epsilon = 1e-15);
    }
}
