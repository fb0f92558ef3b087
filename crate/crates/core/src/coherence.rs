//! Discretized two-mode position-basis states with a decoherence
//! envelope.
//!
//! A state is `ρ = ∫ p(x₁,x₂) p*(x̄₁,x̄₂) f₁(x₁−x̄₁) f₂(x₂−x̄₂)
//! |x₁,x₂⟩⟨x̄₁,x̄₂| dx dx̄` with `‖p‖ = 1` and `f` an even envelope,
//! `f(0) = 1`, `|f| ≤ 1`. Position statistics only see the diagonal
//! `|p|²`; momentum moments pick up envelope derivatives at zero
//! separation:
//!
//! ```text
//! ⟨p₁⟩   = ⟨p₁⟩_{f≡1}
//! ⟨p₁²⟩  = ⟨p₁²⟩_{f≡1} − f₁''(0)
//! ⟨p₁p₂⟩ = ⟨p₁p₂⟩_{f≡1} − f₁'(0) f₂'(0)
//! ```
//!
//! Two independent evaluations are provided: the decomposition above
//! (analytic envelope curvature plus pure-state spectral moments), and
//! a direct route that never materializes the four-index kernel — the
//! separable structure reduces everything to the 2-D autocorrelation
//! `C(u,v) = ∫ p(x+u, y+v) p*(x,y) dx dy` (one FFT pass), the product
//! `H = C · f₁f₂`, and derivatives of `H` at zero separation. For
//! smooth envelopes those derivatives come from the Fourier transform
//! of `H` (which *is* the joint momentum density of ρ); for the step
//! envelope, whose derivatives at 0 vanish identically for any ε > 0,
//! they are taken by a local stencil on the plateau, which is what
//! makes the observed witness value ε-independent.
//!
//! The grid spans `[−L, L]` per axis with `M` points (spacing
//! `2L/(M−1)`); transforms treat it as periodic with period `M·Δ`,
//! valid for states that decay below ~1e-12 at the boundary. The
//! documented adequacy condition is Nyquist momentum `π/Δ` at least
//! several times the state's momentum spread; the moment routines
//! enforce it by checking spectral mass near the Nyquist edge.

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

type C64 = Complex64;

const NORM_TOL: f64 = 1e-10;
const NYQUIST_BAND: f64 = 0.75;
// Above the FFT noise floor of the three-transform kernel route, well
// below any genuine undersampling signature.
const NYQUIST_MASS_TOL: f64 = 1e-7;

/// Square position grid `[−L, L]²` with `M` points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    half_range: f64,
    points: usize,
}

impl GridSpec {
    /// `points` must be a power of two (≥ 8) and `half_range` positive.
    pub fn new(half_range: f64, points: usize) -> Result<Self> {
        if !(half_range > 0.0) {
            return Err(Error::InvalidArgument("half_range must be positive".into()));
        }
        if points < 8 || !points.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "points must be a power of two >= 8, got {points}"
            )));
        }
        Ok(Self { half_range, points })
    }

    pub fn half_range(&self) -> f64 {
        self.half_range
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_range / (self.points as f64 - 1.0)
    }

    /// Largest representable momentum, `π / spacing`.
    pub fn nyquist_momentum(&self) -> f64 {
        std::f64::consts::PI / self.spacing()
    }

    pub fn axis(&self) -> Vec<f64> {
        let d = self.spacing();
        (0..self.points).map(|i| -self.half_range + i as f64 * d).collect()
    }

    /// DFT wavenumbers in FFT index order (period `M·Δ`).
    pub fn wavenumbers(&self) -> Vec<f64> {
        let m = self.points;
        let period = m as f64 * self.spacing();
        (0..m)
            .map(|i| {
                let idx = if i < m / 2 { i as f64 } else { i as f64 - m as f64 };
                std::f64::consts::TAU * idx / period
            })
            .collect()
    }

    /// Shift distances in FFT index order (`0, Δ, …, −Δ`).
    fn shifts(&self) -> Vec<f64> {
        let m = self.points;
        let d = self.spacing();
        (0..m)
            .map(|i| {
                let idx = if i <= m / 2 { i as f64 } else { i as f64 - m as f64 };
                idx * d
            })
            .collect()
    }
}

/// Separable decoherence envelope `f(x₁−x̄₁) f(x₂−x̄₂)`; even in each
/// argument with `f(0) = 1`, `|f| ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EnvelopeModel {
    /// `exp(−u²/(2γ₁²)) exp(−v²/(2γ₂²))`.
    Gaussian { gamma1: f64, gamma2: f64 },
    /// `1` for `|u| < ε`, `0` otherwise, on both axes.
    Step { epsilon: f64 },
    /// No decoherence.
    Unity,
}

impl EnvelopeModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            EnvelopeModel::Gaussian { gamma1, gamma2 } => {
                if !(*gamma1 > 0.0) || !(*gamma2 > 0.0) {
                    return Err(Error::InvalidArgument("envelope widths must be positive".into()));
                }
            }
            EnvelopeModel::Step { epsilon } => {
                if !(*epsilon > 0.0) {
                    return Err(Error::InvalidArgument("step half-width must be positive".into()));
                }
            }
            EnvelopeModel::Unity => {}
        }
        Ok(())
    }

    /// Envelope factor along the given axis (0 or 1) at separation `u`.
    pub fn value(&self, axis: usize, u: f64) -> f64 {
        match self {
            EnvelopeModel::Gaussian { gamma1, gamma2 } => {
                let g = if axis == 0 { *gamma1 } else { *gamma2 };
                (-u * u / (2.0 * g * g)).exp()
            }
            EnvelopeModel::Step { epsilon } => {
                if u.abs() < *epsilon {
                    1.0
                } else {
                    0.0
                }
            }
            EnvelopeModel::Unity => 1.0,
        }
    }

    /// `f''(0)` along the given axis; `None` for the step envelope
    /// (not twice differentiable in the classical sense — its local
    /// derivatives on the plateau vanish for every ε > 0).
    pub fn curvature_at_zero(&self, axis: usize) -> Option<f64> {
        match self {
            EnvelopeModel::Gaussian { gamma1, gamma2 } => {
                let g = if axis == 0 { *gamma1 } else { *gamma2 };
                Some(-1.0 / (g * g))
            }
            EnvelopeModel::Step { .. } => None,
            EnvelopeModel::Unity => Some(0.0),
        }
    }

    pub fn is_smooth(&self) -> bool {
        !matches!(self, EnvelopeModel::Step { .. })
    }
}

/// Normalized two-mode amplitudes `p(x₁, x₂)` on a grid, with the
/// decoherence envelope that turns them into a (generally mixed) state.
#[derive(Debug, Clone)]
pub struct GridState {
    spec: GridSpec,
    amplitudes: Array2<C64>,
    envelope: EnvelopeModel,
}

impl GridState {
    /// Amplitudes must already be grid-normalized
    /// (`Σ |p|² Δ² = 1` within 1e-10).
    pub fn new(spec: GridSpec, amplitudes: Array2<C64>, envelope: EnvelopeModel) -> Result<Self> {
        envelope.validate()?;
        let m = spec.points();
        if amplitudes.nrows() != m || amplitudes.ncols() != m {
            return Err(Error::DimensionMismatch(format!(
                "amplitudes are {}x{}, expected {m}x{m}",
                amplitudes.nrows(),
                amplitudes.ncols()
            )));
        }
        let d = spec.spacing();
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * d * d;
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!(
                "grid norm {norm} deviates from 1 by more than {NORM_TOL:.0e}"
            )));
        }
        Ok(Self { spec, amplitudes, envelope })
    }

    /// Normalize the given amplitudes on the grid, then construct.
    pub fn normalized(
        spec: GridSpec,
        amplitudes: Array2<C64>,
        envelope: EnvelopeModel,
    ) -> Result<Self> {
        let d = spec.spacing();
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * d * d;
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidArgument("amplitudes have no finite norm".into()));
        }
        let scale = 1.0 / norm.sqrt();
        Self::new(spec, amplitudes.mapv(|a| a * scale), envelope)
    }

    /// Pure Gaussian wavefunction with prescribed variances of the
    /// collective coordinates: `V(x₁+x₂) = v_sum`, `V(x₁−x₂) = v_diff`.
    /// The two-mode squeezed wavefunction at parameter g is
    /// `(v_sum, v_diff) = (e^{-2g}, e^{2g})`.
    pub fn gaussian_two_mode(
        spec: GridSpec,
        v_sum: f64,
        v_diff: f64,
        envelope: EnvelopeModel,
    ) -> Result<Self> {
        if !(v_sum > 0.0) || !(v_diff > 0.0) {
            return Err(Error::InvalidArgument("variances must be positive".into()));
        }
        let axis = spec.axis();
        let m = spec.points();
        let mut amp = Array2::zeros((m, m));
        for (i, &x1) in axis.iter().enumerate() {
            for (j, &x2) in axis.iter().enumerate() {
                let s = x1 + x2;
                let d = x1 - x2;
                amp[(i, j)] = C64::new((-s * s / (4.0 * v_sum) - d * d / (4.0 * v_diff)).exp(), 0.0);
            }
        }
        Self::normalized(spec, amp, envelope)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn amplitudes(&self) -> &Array2<C64> {
        &self.amplitudes
    }

    pub fn envelope(&self) -> &EnvelopeModel {
        &self.envelope
    }

    pub fn with_envelope(&self, envelope: EnvelopeModel) -> Result<Self> {
        envelope.validate()?;
        Ok(Self { spec: self.spec, amplitudes: self.amplitudes.clone(), envelope })
    }
}

/// First and second momentum moments of a two-mode state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub p1: f64,
    pub p2: f64,
    pub p1_sq: f64,
    pub p2_sq: f64,
    pub p1_p2: f64,
}

impl MomentSet {
    pub fn var_sum(&self) -> f64 {
        self.p1_sq + self.p2_sq + 2.0 * self.p1_p2 - (self.p1 + self.p2).powi(2)
    }

    pub fn var_diff(&self) -> f64 {
        self.p1_sq + self.p2_sq - 2.0 * self.p1_p2 - (self.p1 - self.p2).powi(2)
    }
}

/// Moments computed both ways for a decohered state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoheredMoments {
    /// Decomposition route (pure-state moments plus analytic envelope
    /// curvature); absent for envelopes without a classical curvature.
    pub decomposition: Option<MomentSet>,
    /// Direct route through the autocorrelation kernel.
    pub direct: MomentSet,
}

fn fft2(data: &Array2<C64>, inverse: bool) -> Array2<C64> {
    let m = data.nrows();
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(m)
    } else {
        planner.plan_fft_forward(m)
    };
    let mut out = data.clone();
    let mut buf = vec![C64::new(0.0, 0.0); m];
    for mut row in out.rows_mut() {
        for (b, v) in buf.iter_mut().zip(row.iter()) {
            *b = *v;
        }
        fft.process(&mut buf);
        for (v, b) in row.iter_mut().zip(buf.iter()) {
            *v = *b;
        }
    }
    for mut col in out.columns_mut() {
        for (b, v) in buf.iter_mut().zip(col.iter()) {
            *b = *v;
        }
        fft.process(&mut buf);
        for (v, b) in col.iter_mut().zip(buf.iter()) {
            *v = *b;
        }
    }
    out
}

/// Moments of a nonnegative spectral weight array over the wavenumber
/// grid, with a Nyquist-band mass check.
fn spectral_moments(spec: &GridSpec, weights: &Array2<f64>) -> Result<MomentSet> {
    let k = spec.wavenumbers();
    let edge = NYQUIST_BAND * spec.nyquist_momentum();
    let mut total = 0.0;
    let mut edge_mass = 0.0;
    let (mut p1, mut p2, mut p1_sq, mut p2_sq, mut p1_p2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, &k1) in k.iter().enumerate() {
        for (j, &k2) in k.iter().enumerate() {
            let w = weights[(i, j)];
            total += w;
            if k1.abs() > edge || k2.abs() > edge {
                edge_mass += w.abs();
            }
            p1 += w * k1;
            p2 += w * k2;
            p1_sq += w * k1 * k1;
            p2_sq += w * k2 * k2;
            p1_p2 += w * k1 * k2;
        }
    }
    if !(total > 0.0) {
        return Err(Error::InvalidArgument("spectral weight has no mass".into()));
    }
    if edge_mass / total.abs() > NYQUIST_MASS_TOL {
        return Err(Error::GridTooCoarse(format!(
            "{:.2e} of the spectral mass sits beyond {NYQUIST_BAND} of the Nyquist momentum",
            edge_mass / total.abs()
        )));
    }
    Ok(MomentSet {
        p1: p1 / total,
        p2: p2 / total,
        p1_sq: p1_sq / total,
        p2_sq: p2_sq / total,
        p1_p2: p1_p2 / total,
    })
}

/// Momentum moments of the pure state `p(x₁,x₂)` (envelope ignored),
/// via the spectral density `|ψ̂|²`.
pub fn momentum_moments_ideal(state: &GridState) -> Result<MomentSet> {
    let psi_hat = fft2(&state.amplitudes, false);
    let weights = psi_hat.mapv(|z| z.norm_sqr());
    spectral_moments(&state.spec, &weights)
}

/// Decomposition route: ideal moments plus analytic envelope curvature.
/// Errors with [`Error::UnsupportedEnvelope`] for the step envelope.
pub fn momentum_moments_decomposition(state: &GridState) -> Result<MomentSet> {
    let (c1, c2) = match (
        state.envelope.curvature_at_zero(0),
        state.envelope.curvature_at_zero(1),
    ) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::UnsupportedEnvelope(
                "step envelope has no classical curvature; use the direct route".into(),
            ))
        }
    };
    let mut m = momentum_moments_ideal(state)?;
    m.p1_sq -= c1;
    m.p2_sq -= c2;
    // Cross term picks up f₁'(0) f₂'(0) = 0 for even envelopes.
    Ok(m)
}

/// Direct route through the separable kernel: autocorrelation × envelope.
pub fn momentum_moments_direct(state: &GridState) -> Result<MomentSet> {
    let spectrum = fft2(&state.amplitudes, false).mapv(|z| C64::new(z.norm_sqr(), 0.0));
    let autocorr = fft2(&spectrum, true);
    let shifts = state.spec.shifts();
    match state.envelope {
        EnvelopeModel::Step { epsilon } => {
            stencil_moments(&state.spec, &autocorr, epsilon)
        }
        _ => {
            let m = state.spec.points();
            let mut kernel = autocorr;
            for i in 0..m {
                for j in 0..m {
                    let f = state.envelope.value(0, shifts[i]) * state.envelope.value(1, shifts[j]);
                    kernel[(i, j)] *= f;
                }
            }
            let momentum_density = fft2(&kernel, false).mapv(|z| z.re);
            spectral_moments(&state.spec, &momentum_density)
        }
    }
}

/// Local derivatives of the autocorrelation at zero separation. Valid
/// for the step envelope: `f ≡ 1` on `|u| < ε`, so every derivative of
/// `C·f` at 0 equals the derivative of `C` alone — for any ε > 0,
/// which is exactly why the observed moments cannot depend on ε. When
/// the plateau covers the stencil the two evaluations coincide
/// literally; below grid resolution this local rule is the defining
/// continuum limit.
fn stencil_moments(spec: &GridSpec, autocorr: &Array2<C64>, _epsilon: f64) -> Result<MomentSet> {
    let m = spec.points();
    let d = spec.spacing();
    let c00 = autocorr[(0, 0)].re;
    if !(c00 > 0.0) {
        return Err(Error::InvalidArgument("autocorrelation has no mass".into()));
    }
    let at = |i: isize, j: isize| {
        autocorr[(
            i.rem_euclid(m as isize) as usize,
            j.rem_euclid(m as isize) as usize,
        )]
    };
    // ⟨p⟩ = i ∂_u H|₀, ⟨p²⟩ = −∂²_u H|₀, ⟨p₁p₂⟩ = −∂_u∂_v H|₀.
    let p1 = (C64::new(0.0, 1.0) * (at(1, 0) - at(-1, 0)) / (2.0 * d)).re / c00;
    let p2 = (C64::new(0.0, 1.0) * (at(0, 1) - at(0, -1)) / (2.0 * d)).re / c00;
    let p1_sq = -((at(1, 0) - at(0, 0) * 2.0 + at(-1, 0)).re) / (d * d) / c00;
    let p2_sq = -((at(0, 1) - at(0, 0) * 2.0 + at(0, -1)).re) / (d * d) / c00;
    let p1_p2 = -((at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)).re) / (4.0 * d * d) / c00;
    Ok(MomentSet { p1, p2, p1_sq, p2_sq, p1_p2 })
}

/// Both evaluations of the decohered momentum moments. The
/// decomposition entry is `None` for the step envelope.
pub fn momentum_moments_decohered(state: &GridState) -> Result<DecoheredMoments> {
    let direct = momentum_moments_direct(state)?;
    let decomposition = match momentum_moments_decomposition(state) {
        Ok(m) => Some(m),
        Err(Error::UnsupportedEnvelope(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(DecoheredMoments { decomposition, direct })
}

/// Position moments of the state (set by the diagonal `|p|²` alone, so
/// the envelope does not enter).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositionMoments {
    pub x1: f64,
    pub x2: f64,
    pub var_x1: f64,
    pub var_x2: f64,
    pub cov: f64,
}

impl PositionMoments {
    pub fn var_sum(&self) -> f64 {
        self.var_x1 + self.var_x2 + 2.0 * self.cov
    }

    pub fn var_diff(&self) -> f64 {
        self.var_x1 + self.var_x2 - 2.0 * self.cov
    }
}

pub fn position_moments(state: &GridState) -> PositionMoments {
    let axis = state.spec.axis();
    let mut total = 0.0;
    let (mut m1, mut m2) = (0.0, 0.0);
    for (i, &x1) in axis.iter().enumerate() {
        for (j, &x2) in axis.iter().enumerate() {
            let w = state.amplitudes[(i, j)].norm_sqr();
            total += w;
            m1 += w * x1;
            m2 += w * x2;
        }
    }
    m1 /= total;
    m2 /= total;
    let (mut v1, mut v2, mut cov) = (0.0, 0.0, 0.0);
    for (i, &x1) in axis.iter().enumerate() {
        for (j, &x2) in axis.iter().enumerate() {
            let w = state.amplitudes[(i, j)].norm_sqr();
            v1 += w * (x1 - m1) * (x1 - m1);
            v2 += w * (x2 - m2) * (x2 - m2);
            cov += w * (x1 - m1) * (x2 - m2);
        }
    }
    PositionMoments {
        x1: m1,
        x2: m2,
        var_x1: v1 / total,
        var_x2: v2 / total,
        cov: cov / total,
    }
}

/// Witness value `V(x₁+x₂) + V(p₁−p₂)` of the (possibly decohered)
/// grid state, with the momentum part taken from the direct route.
/// Matches the squeezed-angle witness of the Gaussian module on
/// two-mode-squeezed test states.
pub fn duan_simon_value(state: &GridState) -> Result<f64> {
    let x = position_moments(state);
    let p = momentum_moments_direct(state)?;
    Ok(x.var_sum() + p.var_diff())
}

/// Certified lower bound on the envelope width `min(γ₁, γ₂)` from an
/// observed conjugate-sum variance: `1/√v`. Numerically identical to
/// [`coherence_range`](crate::macroscopicity::coherence_range); the two
/// names carry the two readings (envelope width floor vs. certified
/// correlation range).
pub fn certified_coherence_width(v_minus_observed: f64) -> Result<f64> {
    crate::macroscopicity::coherence_range(v_minus_observed)
}
