//! Two-mode parametric amplification in a lossy cavity.
//!
//! The intracavity dynamics is gain χ (from `H = iχ(a†b† − ab)`)
//! alternating with per-mode loss λ. Characteristic-function operators
//! `e^κ e^{i(η a† + μ b†)} e^{i(η* a + μ* b)}` keep their form under one
//! infinitesimal step, so the whole evolution reduces to three scalars
//! `(η(t), μ(t), κ(t))` with the closed-form solution
//!
//! ```text
//! (η, μ*)ᵀ ↦ e^{-λt} [cosh χt, sinh χt; sinh χt, cosh χt] (η₀, μ₀*)ᵀ
//! κ(t) = κ₀ − χ ∫₀ᵗ (η*(s)μ*(s) + η(s)μ(s)) ds.
//! ```
//!
//! That yields the squeezed/anti-squeezed variances Δ∓(t) of the joint
//! quadrature distribution and the threshold behaviour at χ = λ. A
//! fourth-order Runge–Kutta integrator of the same scalar system acts
//! as the independent oracle for the closed forms. Only the products
//! χt and λt matter; χ and λ are rates in one common arbitrary unit.
//!
//! For the measured angles θ (mode a) and ξ (mode b), the joint
//! distribution is squeezed along `(x − y)/√2` when `cos(θ+ξ) > 0`;
//! this amplifier convention correlates the x quadratures, mirroring
//! the crate's two-mode-squeezing convention under `x₂ → −x₂`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

type C64 = Complex64;

/// Amplifier configuration: rates, evolution time, coherent seeds, and
/// the two measured quadrature angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    pub chi: f64,
    pub lambda: f64,
    pub t: f64,
    pub seed_alpha: C64,
    pub seed_beta: C64,
    pub theta: f64,
    pub xi: f64,
}

impl CavityParams {
    pub fn new(chi: f64, lambda: f64, t: f64) -> Result<Self> {
        if !(chi > 0.0) {
            return Err(Error::InvalidArgument(format!("gain must be > 0, got {chi}")));
        }
        if !(lambda >= 0.0) {
            return Err(Error::InvalidArgument(format!("loss must be >= 0, got {lambda}")));
        }
        if !(t >= 0.0) {
            return Err(Error::InvalidArgument(format!("time must be >= 0, got {t}")));
        }
        Ok(Self {
            chi,
            lambda,
            t,
            seed_alpha: C64::new(0.0, 0.0),
            seed_beta: C64::new(0.0, 0.0),
            theta: 0.0,
            xi: 0.0,
        })
    }

    pub fn with_seeds(mut self, alpha: C64, beta: C64) -> Self {
        self.seed_alpha = alpha;
        self.seed_beta = beta;
        self
    }

    pub fn with_angles(mut self, theta: f64, xi: f64) -> Self {
        self.theta = theta;
        self.xi = xi;
        self
    }
}

/// The scalar triple `(η, μ, κ)` the evolution acts on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarState {
    pub eta: C64,
    pub mu: C64,
    pub kappa: f64,
}

impl ScalarState {
    pub fn new(eta: C64, mu: C64, kappa: f64) -> Self {
        Self { eta, mu, kappa }
    }
}

/// `(e^{a t} − 1)/a`, exact at `a = 0`; `expm1` keeps it cancellation
/// free through the degenerate gain-equals-loss point.
fn exp_ratio(a: f64, t: f64) -> f64 {
    if a == 0.0 {
        t
    } else {
        f64::exp_m1(a * t) / a
    }
}

/// Integrals `I_c = ∫₀ᵗ e^{-2λs} cosh 2χs ds` and
/// `I_s = ∫₀ᵗ e^{-2λs} sinh 2χs ds`.
fn kernel_integrals(chi: f64, lambda: f64, t: f64) -> (f64, f64) {
    let grow = exp_ratio(2.0 * (chi - lambda), t);
    let decay = exp_ratio(-2.0 * (chi + lambda), t);
    ((grow + decay) / 2.0, (grow - decay) / 2.0)
}

/// Squeezed and anti-squeezed variances `(Δ₋, Δ₊)` of the joint
/// quadrature distribution at time `t`:
/// `Δ₋ = (λ + χ e^{-2t(λ+χ)}) / (2(λ+χ))`,
/// `Δ₊ = (λ − χ e^{2t(χ−λ)}) / (2(λ−χ))`, with the λ = χ limit
/// `Δ₊ = 1/2 + χt` handled exactly.
pub fn delta_variances(params: &CavityParams) -> (f64, f64) {
    let (ic, is) = kernel_integrals(params.chi, params.lambda, params.t);
    let minus = 0.5 + params.chi * (is - ic);
    let plus = 0.5 + params.chi * (is + ic);
    (minus, plus)
}

/// Closed-form propagation of the scalar triple over time `t`.
pub fn propagate_scalars(initial: ScalarState, params: &CavityParams) -> ScalarState {
    let (chi, lambda, t) = (params.chi, params.lambda, params.t);
    let decay = (-lambda * t).exp();
    let ch = (chi * t).cosh() * decay;
    let sh = (chi * t).sinh() * decay;
    let eta = initial.eta * ch + initial.mu.conj() * sh;
    let mu = initial.mu * ch + initial.eta.conj() * sh;
    let (ic, is) = kernel_integrals(chi, lambda, t);
    let cross = 2.0 * (initial.eta * initial.mu).re;
    let norms = initial.eta.norm_sqr() + initial.mu.norm_sqr();
    let kappa = initial.kappa - chi * (cross * ic + norms * is);
    ScalarState { eta, mu, kappa }
}

/// Fourth-order Runge–Kutta integration of
/// `η̇ = χ μ* − λ η`, `μ̇ = χ η* − λ μ` with the κ quadrature
/// accumulated by Simpson's rule on half-step values. Global error
/// O(step⁴). The step must satisfy `step ≤ 0.01 / max(χ, λ)`.
pub fn ode_integrate(initial: ScalarState, params: &CavityParams, step: f64) -> Result<ScalarState> {
    let (chi, lambda, t_final) = (params.chi, params.lambda, params.t);
    if !(step > 0.0) {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    if step > 0.01 / chi.max(lambda) {
        return Err(Error::Precondition(format!(
            "step {step} too large; need <= {:.3e}",
            0.01 / chi.max(lambda)
        )));
    }

    let deriv = |eta: C64, mu: C64| -> (C64, C64) {
        (mu.conj() * chi - eta * lambda, eta.conj() * chi - mu * lambda)
    };
    let rk4_step = |eta: C64, mu: C64, h: f64| -> (C64, C64) {
        let (k1e, k1m) = deriv(eta, mu);
        let (k2e, k2m) = deriv(eta + k1e * (h / 2.0), mu + k1m * (h / 2.0));
        let (k3e, k3m) = deriv(eta + k2e * (h / 2.0), mu + k2m * (h / 2.0));
        let (k4e, k4m) = deriv(eta + k3e * h, mu + k3m * h);
        (
            eta + (k1e + k2e * 2.0 + k3e * 2.0 + k4e) * (h / 6.0),
            mu + (k1m + k2m * 2.0 + k3m * 2.0 + k4m) * (h / 6.0),
        )
    };
    let kappa_rate = |eta: C64, mu: C64| -2.0 * chi * (eta * mu).re;

    let mut eta = initial.eta;
    let mut mu = initial.mu;
    let mut kappa = initial.kappa;
    let steps = (t_final / step).ceil() as usize;
    let mut t = 0.0;
    for _ in 0..steps {
        let h = step.min(t_final - t);
        if h <= 0.0 {
            break;
        }
        // Two half steps give the Simpson midpoint.
        let (eta_mid, mu_mid) = rk4_step(eta, mu, h / 2.0);
        let (eta_end, mu_end) = rk4_step(eta_mid, mu_mid, h / 2.0);
        kappa += h / 6.0
            * (kappa_rate(eta, mu) + 4.0 * kappa_rate(eta_mid, mu_mid) + kappa_rate(eta_end, mu_end));
        eta = eta_end;
        mu = mu_end;
        t += h;
    }
    Ok(ScalarState { eta, mu, kappa })
}

/// Means and principal variances of the joint Gaussian for coherent
/// seeds `(α, β)` measured at quadrature angles `(θ, ξ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointQuadratureDistribution {
    /// `⟨x_θ⟩` on mode a.
    pub mean_x: f64,
    /// `⟨y_ξ⟩` on mode b.
    pub mean_y: f64,
    /// Squeezed principal variance.
    pub delta_minus: f64,
    /// Anti-squeezed principal variance.
    pub delta_plus: f64,
    /// `cos(θ + ξ)`; sets which diagonal carries the squeezing. At
    /// `cos(θ+ξ) = ±1` the principal variances are exactly `Δ∓`;
    /// misaligned angles interpolate the off-diagonal correlation.
    pub axis_cos: f64,
}

impl JointQuadratureDistribution {
    /// Covariance matrix of `(x, y)`:
    /// diagonal `(Δ₊ + Δ₋)/2`, off-diagonal `cos(θ+ξ)(Δ₊ − Δ₋)/2`.
    pub fn covariance(&self) -> [[f64; 2]; 2] {
        let m = (self.delta_plus + self.delta_minus) / 2.0;
        let q = self.axis_cos * (self.delta_plus - self.delta_minus) / 2.0;
        [[m, q], [q, m]]
    }

    /// Probability density at `(x, y)`.
    pub fn density(&self, x: f64, y: f64) -> f64 {
        let [[m, q], [_, _]] = self.covariance();
        let det = m * m - q * q;
        let dx = x - self.mean_x;
        let dy = y - self.mean_y;
        let quad = (m * dx * dx - 2.0 * q * dx * dy + m * dy * dy) / det;
        (-0.5 * quad).exp() / (2.0 * std::f64::consts::PI * det.sqrt())
    }
}

/// Joint quadrature distribution of the evolved state.
pub fn joint_distribution(params: &CavityParams) -> JointQuadratureDistribution {
    let (chi, lambda, t) = (params.chi, params.lambda, params.t);
    let decay = (-lambda * t).exp();
    let ch = (chi * t).cosh() * decay;
    let sh = (chi * t).sinh() * decay;
    let (alpha, beta) = (params.seed_alpha, params.seed_beta);
    let e_theta = C64::from_polar(1.0, params.theta);
    let e_xi = C64::from_polar(1.0, params.xi);
    // ⟨x_θ⟩ = √2 Re[(α* cosh + β sinh e^{...}) phases]: the linear part
    // of the evolved characteristic exponent.
    let mean_x = std::f64::consts::SQRT_2
        * (alpha.conj() * e_theta * ch + beta.conj() * e_theta.conj() * sh).re;
    let mean_y = std::f64::consts::SQRT_2
        * (beta.conj() * e_xi * ch + alpha.conj() * e_xi.conj() * sh).re;
    let (minus, plus) = delta_variances(params);
    JointQuadratureDistribution {
        mean_x,
        mean_y,
        delta_minus: minus,
        delta_plus: plus,
        axis_cos: (params.theta + params.xi).cos(),
    }
}

/// Density of the joint quadrature law at `(x, y)`.
pub fn joint_probability(params: &CavityParams, x: f64, y: f64) -> f64 {
    joint_distribution(params).density(x, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdClass {
    /// λ > χ: both variances saturate.
    Below,
    /// λ = χ: the anti-squeezed variance grows linearly.
    At,
    /// λ < χ: the anti-squeezed variance grows exponentially.
    Above,
}

/// Long-time behaviour of the amplifier at the given rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub class: ThresholdClass,
    /// `Δ₋(t → ∞) = λ / (2(λ + χ))`, the squeezing floor
    /// `(1/2)/(1 + χ/λ)` set by the gain-to-loss ratio.
    pub delta_minus_limit: f64,
    /// `Δ₊(t → ∞) = λ / (2(λ − χ))` below threshold; unbounded at or
    /// above it.
    pub delta_plus_limit: Option<f64>,
}

pub fn threshold_report(chi: f64, lambda: f64) -> Result<ThresholdReport> {
    if !(chi > 0.0) {
        return Err(Error::InvalidArgument(format!("gain must be > 0, got {chi}")));
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidArgument(format!("loss must be >= 0, got {lambda}")));
    }
    let rel = (lambda - chi) / chi;
    let class = if rel.abs() <= 1e-12 {
        ThresholdClass::At
    } else if rel > 0.0 {
        ThresholdClass::Below
    } else {
        ThresholdClass::Above
    };
    Ok(ThresholdReport {
        class,
        delta_minus_limit: lambda / (2.0 * (lambda + chi)),
        delta_plus_limit: match class {
            ThresholdClass::Below => Some(lambda / (2.0 * (lambda - chi))),
            _ => None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn variances_start_at_vacuum() {
        let p = CavityParams::new(1.3, 0.7, 0.0).unwrap();
        let (minus, plus) = delta_variances(&p);
        assert_abs_diff_eq!(minus, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(plus, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn closed_form_matches_expressions() {
        // Generic parameters against the direct formulas.
        let (chi, lambda, t) = (1.1, 0.6, 1.4);
        let p = CavityParams::new(chi, lambda, t).unwrap();
        let (minus, plus) = delta_variances(&p);
        let expect_minus = (lambda + chi * (-2.0 * t * (lambda + chi)).exp()) / (2.0 * (lambda + chi));
        let expect_plus = (lambda - chi * (2.0 * t * (chi - lambda)).exp()) / (2.0 * (lambda - chi));
        assert_abs_diff_eq!(minus, expect_minus, epsilon = 1e-12);
        assert_abs_diff_eq!(plus, expect_plus, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_rates_limit() {
        let chi = 0.9;
        let t = 1.7;
        let p = CavityParams::new(chi, chi, t).unwrap();
        let (minus, plus) = delta_variances(&p);
        assert_abs_diff_eq!(plus, 0.5 + chi * t, epsilon = 1e-12);
        let expect_minus = (chi + chi * (-4.0 * chi * t).exp()) / (4.0 * chi);
        assert_abs_diff_eq!(minus, expect_minus, epsilon = 1e-12);
        // Near-degenerate parameters stay smooth.
        let p_eps = CavityParams::new(chi, chi * (1.0 + 1e-9), t).unwrap();
        let (m2, p2) = delta_variances(&p_eps);
        assert_abs_diff_eq!(m2, minus, epsilon = 1e-8);
        assert_abs_diff_eq!(p2, plus, epsilon = 1e-8);
    }

    #[test]
    fn lossless_cavity_stays_pure() {
        for t in [0.3, 0.8, 1.5] {
            let chi = 1.0;
            let p = CavityParams::new(chi, 0.0, t).unwrap();
            let (minus, plus) = delta_variances(&p);
            assert_abs_diff_eq!(minus, (-2.0 * chi * t).exp() / 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(minus * plus, 0.25, epsilon = 1e-10);
        }
    }

    #[test]
    fn variances_are_monotone_and_bounded() {
        let (chi, lambda) = (1.0, 0.8);
        let floor = lambda / (2.0 * (lambda + chi));
        let mut prev_minus = 0.5;
        let mut prev_plus = 0.5;
        for i in 1..=60 {
            let t = 0.1 * i as f64;
            let (minus, plus) = delta_variances(&CavityParams::new(chi, lambda, t).unwrap());
            assert!(minus <= prev_minus + 1e-12);
            assert!(plus >= prev_plus - 1e-12);
            assert!(minus >= floor - 1e-12);
            assert!(minus * plus >= 0.25 - 1e-10);
            prev_minus = minus;
            prev_plus = plus;
        }
    }

    #[test]
    fn propagation_identity_and_decoupled_limits() {
        let initial = ScalarState::new(C64::new(0.4, 0.2), C64::new(-0.3, 0.5), -0.7);
        let p0 = CavityParams::new(1.0, 0.5, 0.0).unwrap();
        let out = propagate_scalars(initial, &p0);
        assert_abs_diff_eq!((out.eta - initial.eta).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!((out.mu - initial.mu).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(out.kappa, initial.kappa, epsilon = 1e-14);

        // χ → 0 is pure decay (approximated by a tiny gain).
        let p = CavityParams::new(1e-14, 0.5, 2.0).unwrap();
        let out = propagate_scalars(initial, &p);
        let decay = (-0.5 * 2.0f64).exp();
        assert_abs_diff_eq!((out.eta - initial.eta * decay).norm(), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(out.kappa, initial.kappa, epsilon = 1e-10);
    }

    #[test]
    fn rk4_matches_closed_form() {
        let initial = ScalarState::new(C64::new(0.7, -0.1), C64::new(0.2, 0.4), -0.3);
        let p = CavityParams::new(1.0, 0.6, 1.5).unwrap();
        let closed = propagate_scalars(initial, &p);
        let numeric = ode_integrate(initial, &p, 0.005).unwrap();
        assert_abs_diff_eq!((closed.eta - numeric.eta).norm(), 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!((closed.mu - numeric.mu).norm(), 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(closed.kappa, numeric.kappa, epsilon = 1e-8);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let initial = ScalarState::new(C64::new(0.5, 0.3), C64::new(-0.2, 0.1), 0.0);
        let p = CavityParams::new(1.0, 0.4, 1.0).unwrap();
        let exact = propagate_scalars(initial, &p);
        let err = |step: f64| {
            let n = ode_integrate(initial, &p, step).unwrap();
            ((n.eta - exact.eta).norm_sqr()
                + (n.mu - exact.mu).norm_sqr()
                + (n.kappa - exact.kappa).powi(2))
            .sqrt()
        };
        let e1 = err(0.008);
        let e2 = err(0.004);
        let order = (e1 / e2).log2();
        assert!(order > 3.5, "observed order {order} (errors {e1:.3e}, {e2:.3e})");
    }

    #[test]
    fn rk4_step_guard() {
        let initial = ScalarState::new(C64::new(0.1, 0.0), C64::new(0.0, 0.0), 0.0);
        let p = CavityParams::new(2.0, 0.1, 1.0).unwrap();
        assert!(ode_integrate(initial, &p, 0.1).is_err());
        assert!(ode_integrate(initial, &p, -0.1).is_err());
    }

    #[test]
    fn kappa_monotone_for_positive_real_seeds() {
        let initial = ScalarState::new(C64::new(0.6, 0.0), C64::new(0.4, 0.0), 0.0);
        let mut prev = 0.0;
        for i in 1..=20 {
            let p = CavityParams::new(1.0, 0.5, 0.1 * i as f64).unwrap();
            let out = propagate_scalars(initial, &p);
            assert!(out.kappa <= prev + 1e-12, "kappa rose at t = {}", 0.1 * i as f64);
            prev = out.kappa;
        }
    }

    #[test]
    fn joint_distribution_normalizes() {
        let p = CavityParams::new(1.0, 0.7, 0.9)
            .unwrap()
            .with_seeds(C64::new(0.8, 0.1), C64::new(-0.2, 0.3));
        let dist = joint_distribution(&p);
        let span = 8.0 * dist.delta_plus.sqrt();
        let n = 400;
        let h = 2.0 * span / n as f64;
        let mut mass = 0.0;
        for i in 0..=n {
            for j in 0..=n {
                let x = dist.mean_x - span + i as f64 * h;
                let y = dist.mean_y - span + j as f64 * h;
                let w = simpson_weight(i, n) * simpson_weight(j, n);
                mass += w * dist.density(x, y);
            }
        }
        mass *= (h / 3.0) * (h / 3.0);
        assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-6);
    }

    fn simpson_weight(i: usize, n: usize) -> f64 {
        if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        }
    }

    #[test]
    fn principal_variances_match_delta_by_integration() {
        // Aligned angles: the (x∓y)/√2 axes carry Δ∓ exactly.
        let p = CavityParams::new(1.0, 0.6, 0.8).unwrap();
        let dist = joint_distribution(&p);
        let span = 8.0 * dist.delta_plus.sqrt();
        let n = 400;
        let h = 2.0 * span / n as f64;
        let (mut m_minus, mut m_plus, mut mass) = (0.0, 0.0, 0.0);
        for i in 0..=n {
            for j in 0..=n {
                let x = -span + i as f64 * h;
                let y = -span + j as f64 * h;
                let w = simpson_weight(i, n) * simpson_weight(j, n) * dist.density(x, y);
                let u = (x - y) / std::f64::consts::SQRT_2;
                let v = (x + y) / std::f64::consts::SQRT_2;
                m_minus += w * u * u;
                m_plus += w * v * v;
                mass += w;
            }
        }
        m_minus /= mass;
        m_plus /= mass;
        assert_abs_diff_eq!(m_minus, dist.delta_minus, epsilon = 1e-6);
        assert_abs_diff_eq!(m_plus, dist.delta_plus, epsilon = 1e-6);
    }

    #[test]
    fn misaligned_angles_rotate_the_squeezed_axis() {
        let base = CavityParams::new(1.0, 0.5, 1.0).unwrap();
        let aligned = joint_distribution(&base);
        let flipped = joint_distribution(&base.with_angles(0.0, std::f64::consts::PI));
        assert_abs_diff_eq!(aligned.axis_cos, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(flipped.axis_cos, -1.0, epsilon = 1e-12);
        // Off-diagonal covariance flips sign.
        assert_abs_diff_eq!(
            aligned.covariance()[0][1],
            -flipped.covariance()[0][1],
            epsilon = 1e-12
        );
        // Orthogonal angle sum removes the correlation entirely.
        let neutral = joint_distribution(&base.with_angles(0.0, std::f64::consts::FRAC_PI_2));
        assert_abs_diff_eq!(neutral.covariance()[0][1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn seeded_means_displace_with_gain() {
        // At t = 0 the means are the coherent-state quadratures.
        let p = CavityParams::new(1.0, 0.4, 0.0)
            .unwrap()
            .with_seeds(C64::new(1.2, 0.5), C64::new(-0.3, 0.8));
        let dist = joint_distribution(&p);
        assert_abs_diff_eq!(dist.mean_x, std::f64::consts::SQRT_2 * 1.2, epsilon = 1e-12);
        assert_abs_diff_eq!(dist.mean_y, std::f64::consts::SQRT_2 * -0.3, epsilon = 1e-12);
        // The seed does not change the variances.
        let unseeded = joint_distribution(&CavityParams::new(1.0, 0.4, 0.9).unwrap());
        let seeded = joint_distribution(
            &CavityParams::new(1.0, 0.4, 0.9)
                .unwrap()
                .with_seeds(C64::new(2.0, 0.0), C64::new(0.0, 1.0)),
        );
        assert_abs_diff_eq!(unseeded.delta_minus, seeded.delta_minus, epsilon = 1e-14);
        assert_abs_diff_eq!(unseeded.delta_plus, seeded.delta_plus, epsilon = 1e-14);
    }

    #[test]
    fn threshold_classification() {
        let below = threshold_report(1.0, 2.0).unwrap();
        assert_eq!(below.class, ThresholdClass::Below);
        assert_abs_diff_eq!(below.delta_plus_limit.unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(below.delta_minus_limit, 1.0 / 3.0, epsilon = 1e-12);

        let at = threshold_report(1.0, 1.0).unwrap();
        assert_eq!(at.class, ThresholdClass::At);
        assert!(at.delta_plus_limit.is_none());
        assert_abs_diff_eq!(at.delta_minus_limit, 0.25, epsilon = 1e-12);

        let above = threshold_report(1.0, 0.5).unwrap();
        assert_eq!(above.class, ThresholdClass::Above);
        assert!(above.delta_plus_limit.is_none());
        assert_abs_diff_eq!(above.delta_minus_limit, 1.0 / 6.0, epsilon = 1e-12);

        assert!(threshold_report(0.0, 1.0).is_err());
    }

    #[test]
    fn asymptotics_reach_the_threshold_limits() {
        // Below threshold the exact variances approach the report's
        // limits; above threshold Δ₊ grows like e^{2t(χ−λ)}.
        let below = threshold_report(0.7, 1.4).unwrap();
        let (minus, plus) = delta_variances(&CavityParams::new(0.7, 1.4, 40.0).unwrap());
        assert_abs_diff_eq!(minus, below.delta_minus_limit, epsilon = 1e-10);
        assert_abs_diff_eq!(plus, below.delta_plus_limit.unwrap(), epsilon = 1e-10);

        let (chi, lambda) = (1.0, 0.5);
        let (_, p1) = delta_variances(&CavityParams::new(chi, lambda, 14.0).unwrap());
        let (_, p2) = delta_variances(&CavityParams::new(chi, lambda, 15.0).unwrap());
        let rate = (p2 / p1).ln();
        assert_abs_diff_eq!(rate, 2.0 * (chi - lambda), epsilon = 1e-6);
    }
}
