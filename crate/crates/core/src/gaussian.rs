//! n-mode Gaussian states as first and second moments.
//!
//! Covariance matrices use the ordering `(x₁, p₁, x₂, p₂, …)` with the
//! vacuum normalized to `V(x) = V(p) = 1/2`. See the crate docs for the
//! quadrature and squeezing sign conventions; the closed forms quoted in
//! the tests all refer to those conventions.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::rng::stream_rng;
use crate::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-8;

/// Mean vector and covariance matrix of an n-mode Gaussian state.
///
/// Construction symmetrizes the covariance (averaging with its
/// transpose) to absorb floating-point drift; the physicality check
/// (symplectic eigenvalues ≥ 1/2) is opt-in via [`check_physical`]
/// (Self::check_physical) to keep hot paths cheap.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    n_modes: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Build a state from moments. `mean` has length `2 n_modes` and
    /// `cov` is `2n × 2n`, both in `(x₁, p₁, …)` ordering.
    pub fn new(n_modes: usize, mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidArgument("n_modes must be >= 1".into()));
        }
        let dim = 2 * n_modes;
        if mean.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "mean has length {}, expected {dim}",
                mean.len()
            )));
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "cov is {}x{}, expected {dim}x{dim}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        if mean.iter().any(|m| !m.is_finite()) || cov.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("moments must be finite".into()));
        }
        let asym = (&cov - cov.transpose()).abs().max();
        if asym > SYMMETRY_TOL {
            return Err(Error::InvalidArgument(format!(
                "covariance asymmetry {asym:.3e} exceeds {SYMMETRY_TOL:.0e}"
            )));
        }
        let cov = (&cov + cov.transpose()) * 0.5;
        Ok(Self { n_modes, mean, cov })
    }

    /// Vacuum of `n_modes` modes: zero mean, covariance `I/2`.
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidArgument("n_modes must be >= 1".into()));
        }
        let dim = 2 * n_modes;
        Ok(Self {
            n_modes,
            mean: DVector::zeros(dim),
            cov: DMatrix::identity(dim, dim) * 0.5,
        })
    }

    /// Two-mode squeezed vacuum from the propagator
    /// `exp(g (a₁a₂ − a₁†a₂†))`:
    /// `V(xᵢ) = V(pᵢ) = cosh(2g)/2`, `⟨x₁x₂⟩ = −sinh(2g)/2`,
    /// `⟨p₁p₂⟩ = +sinh(2g)/2`, mean photon number `2 sinh² g`.
    pub fn two_mode_squeezed_vacuum(g: f64) -> Result<Self> {
        if !g.is_finite() {
            return Err(Error::InvalidArgument("squeezing parameter must be finite".into()));
        }
        let c = (2.0 * g).cosh() / 2.0;
        let s = (2.0 * g).sinh() / 2.0;
        let mut cov = DMatrix::zeros(4, 4);
        cov[(0, 0)] = c;
        cov[(1, 1)] = c;
        cov[(2, 2)] = c;
        cov[(3, 3)] = c;
        cov[(0, 2)] = -s;
        cov[(2, 0)] = -s;
        cov[(1, 3)] = s;
        cov[(3, 1)] = s;
        Ok(Self {
            n_modes: 2,
            mean: DVector::zeros(4),
            cov,
        })
    }

    /// Product of thermal states with the given mean occupations.
    pub fn thermal(occupations: &[f64]) -> Result<Self> {
        if occupations.is_empty() {
            return Err(Error::InvalidArgument("need at least one mode".into()));
        }
        if occupations.iter().any(|n| !n.is_finite() || *n < 0.0) {
            return Err(Error::InvalidArgument("occupations must be finite and >= 0".into()));
        }
        let n_modes = occupations.len();
        let dim = 2 * n_modes;
        let mut cov = DMatrix::zeros(dim, dim);
        for (i, nbar) in occupations.iter().enumerate() {
            let v = nbar + 0.5;
            cov[(2 * i, 2 * i)] = v;
            cov[(2 * i + 1, 2 * i + 1)] = v;
        }
        Ok(Self {
            n_modes,
            mean: DVector::zeros(dim),
            cov,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Same second moments, new mean vector.
    pub fn with_mean(&self, mean: DVector<f64>) -> Result<Self> {
        Self::new(self.n_modes, mean, self.cov.clone())
    }

    /// Displace one mode by `(dx, dp)`.
    pub fn displaced(&self, mode: usize, dx: f64, dp: f64) -> Result<Self> {
        self.check_mode(mode)?;
        let mut mean = self.mean.clone();
        mean[2 * mode] += dx;
        mean[2 * mode + 1] += dp;
        self.with_mean(mean)
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes {
            return Err(Error::DimensionMismatch(format!(
                "mode {mode} out of range for {} modes",
                self.n_modes
            )));
        }
        Ok(())
    }

    /// `Σᵢ (V(xᵢ) + V(pᵢ) + ⟨xᵢ⟩² + ⟨pᵢ⟩² − 1) / 2`.
    pub fn mean_photon_number(&self) -> f64 {
        (0..self.n_modes)
            .map(|i| {
                let (ix, ip) = (2 * i, 2 * i + 1);
                (self.cov[(ix, ix)]
                    + self.cov[(ip, ip)]
                    + self.mean[ix] * self.mean[ix]
                    + self.mean[ip] * self.mean[ip]
                    - 1.0)
                    / 2.0
            })
            .sum()
    }

    /// `⟨obs⟩ = wᵀ mean` for the observable's weight vector `w`.
    pub fn quadrature_mean(&self, obs: &QuadratureObservable) -> Result<f64> {
        let w = obs.weight_vector(self.n_modes)?;
        Ok(w.dot(&self.mean))
    }

    /// `V(obs) = wᵀ C w`.
    pub fn quadrature_variance(&self, obs: &QuadratureObservable) -> Result<f64> {
        let w = obs.weight_vector(self.n_modes)?;
        Ok((&self.cov * &w).dot(&w))
    }

    /// Covariance of two quadrature observables, `w_Aᵀ C w_B`.
    pub fn quadrature_covariance(
        &self,
        a: &QuadratureObservable,
        b: &QuadratureObservable,
    ) -> Result<f64> {
        let wa = a.weight_vector(self.n_modes)?;
        let wb = b.weight_vector(self.n_modes)?;
        Ok((&self.cov * &wb).dot(&wa))
    }

    /// Two-mode separability witness
    /// `V(|a| X₁^φ + X₂^Φ/a) + V(|a| X₁^{φ'} − X₂^{Φ'}/a)`.
    ///
    /// Separable states satisfy the bound `≥ a² + 1/a²` (= 2 at `|a| = 1`)
    /// whenever `φ − φ' = Φ − Φ' = π/2 (mod π)`; smaller values witness
    /// entanglement. For the two-mode squeezed vacuum at `a = 1`,
    /// angles `(0, π/2, 0, π/2)` give `2 e^{-2g}`.
    pub fn duan_simon_value(
        &self,
        a: f64,
        phi: f64,
        phi_prime: f64,
        cphi: f64,
        cphi_prime: f64,
    ) -> Result<f64> {
        if a == 0.0 || !a.is_finite() {
            return Err(Error::InvalidArgument("witness parameter a must be finite and nonzero".into()));
        }
        if self.n_modes < 2 {
            return Err(Error::DimensionMismatch("witness needs at least two modes".into()));
        }
        let first = QuadratureObservable::new(vec![(0, phi, a.abs()), (1, cphi, 1.0 / a)])?;
        let second =
            QuadratureObservable::new(vec![(0, phi_prime, a.abs()), (1, cphi_prime, -1.0 / a)])?;
        Ok(self.quadrature_variance(&first)? + self.quadrature_variance(&second)?)
    }

    /// Variances of the two squeezed combinations of this crate's
    /// two-mode squeezing convention: `(V(x₁ + x₂), V(p₁ − p₂))`.
    pub fn squeezed_pair_variances(&self) -> Result<(f64, f64)> {
        let x_sum = QuadratureObservable::new(vec![(0, 0.0, 1.0), (1, 0.0, 1.0)])?;
        let p_diff = QuadratureObservable::new(vec![
            (0, std::f64::consts::FRAC_PI_2, 1.0),
            (1, std::f64::consts::FRAC_PI_2, -1.0),
        ])?;
        Ok((
            self.quadrature_variance(&x_sum)?,
            self.quadrature_variance(&p_diff)?,
        ))
    }

    /// Variances of the anti-squeezed combinations: `(V(x₁ − x₂), V(p₁ + p₂))`.
    pub fn antisqueezed_pair_variances(&self) -> Result<(f64, f64)> {
        let x_diff = QuadratureObservable::new(vec![(0, 0.0, 1.0), (1, 0.0, -1.0)])?;
        let p_sum = QuadratureObservable::new(vec![
            (0, std::f64::consts::FRAC_PI_2, 1.0),
            (1, std::f64::consts::FRAC_PI_2, 1.0),
        ])?;
        Ok((
            self.quadrature_variance(&x_diff)?,
            self.quadrature_variance(&p_sum)?,
        ))
    }

    /// Variance of the squeezed conjugate combination `V(p₁ − p₂)`, the
    /// quantity entering the effective-size lower bound and the
    /// coherence range.
    pub fn conjugate_squeezed_variance(&self) -> Result<f64> {
        Ok(self.squeezed_pair_variances()?.1)
    }

    /// Pure loss channel, transmission `ηᵢ` per mode: means scale by
    /// `√ηᵢ`, covariance blocks by `√(ηᵢηⱼ)` with `(1 − ηᵢ)/2 · I` of
    /// vacuum refilled on each diagonal block.
    pub fn apply_loss(&self, transmissions: &[f64]) -> Result<Self> {
        if transmissions.len() != self.n_modes {
            return Err(Error::DimensionMismatch(format!(
                "{} transmissions for {} modes",
                transmissions.len(),
                self.n_modes
            )));
        }
        if transmissions.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return Err(Error::InvalidArgument("transmissions must lie in [0, 1]".into()));
        }
        let dim = 2 * self.n_modes;
        let mut mean = self.mean.clone();
        let mut cov = self.cov.clone();
        let roots: Vec<f64> = transmissions.iter().map(|t| t.sqrt()).collect();
        for i in 0..dim {
            mean[i] *= roots[i / 2];
            for j in 0..dim {
                cov[(i, j)] *= roots[i / 2] * roots[j / 2];
            }
        }
        for (i, eta) in transmissions.iter().enumerate() {
            cov[(2 * i, 2 * i)] += (1.0 - eta) / 2.0;
            cov[(2 * i + 1, 2 * i + 1)] += (1.0 - eta) / 2.0;
        }
        Self::new(self.n_modes, mean, cov)
    }

    /// Random displacements generated by `X^θ` with variance `Δ²h`:
    /// adds `Δ²h` to the variance of the conjugate quadrature
    /// `X^{θ+π/2}` of the given mode. Noise along `X^0` therefore
    /// broadens the momentum distribution.
    pub fn apply_quadrature_noise(&self, mode: usize, angle: f64, added_variance: f64) -> Result<Self> {
        self.check_mode(mode)?;
        if !(added_variance >= 0.0) {
            return Err(Error::InvalidArgument("noise variance must be >= 0".into()));
        }
        let conj = angle + std::f64::consts::FRAC_PI_2;
        let (ux, up) = (conj.cos(), conj.sin());
        let mut cov = self.cov.clone();
        let (ix, ip) = (2 * mode, 2 * mode + 1);
        cov[(ix, ix)] += added_variance * ux * ux;
        cov[(ix, ip)] += added_variance * ux * up;
        cov[(ip, ix)] += added_variance * ux * up;
        cov[(ip, ip)] += added_variance * up * up;
        Self::new(self.n_modes, self.mean.clone(), cov)
    }

    /// Symplectic spectrum of the covariance matrix (n values, each
    /// ≥ 1/2 for physical states, = 1/2 for pure ones).
    ///
    /// The spectrum {±iν} of ΩC satisfies (ΩC)² = −PC with the
    /// symmetric positive P = ΩᵀCΩ, so ν² are the eigenvalues of
    /// P^{1/2} C P^{1/2}. That keeps the whole computation inside
    /// symmetric eigensolves, which always converge (the unsymmetric
    /// Schur route does not, for some lossy covariances).
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        let dim = 2 * self.n_modes;
        let mut omega = DMatrix::zeros(dim, dim);
        for i in 0..self.n_modes {
            omega[(2 * i, 2 * i + 1)] = 1.0;
            omega[(2 * i + 1, 2 * i)] = -1.0;
        }
        let p = omega.transpose() * &self.cov * &omega;
        let p = (&p + p.transpose()) * 0.5;
        let eigen = nalgebra::SymmetricEigen::new(p);
        let mut root = eigen.eigenvectors.clone();
        for (k, lambda) in eigen.eigenvalues.iter().enumerate() {
            let scale = lambda.max(0.0).sqrt();
            for r in 0..dim {
                root[(r, k)] *= scale;
            }
        }
        let p_half = &root * eigen.eigenvectors.transpose();
        let b = &p_half * &self.cov * &p_half;
        let b = (&b + b.transpose()) * 0.5;
        let mut nus: Vec<f64> = nalgebra::SymmetricEigen::new(b)
            .eigenvalues
            .iter()
            .map(|mu| mu.max(0.0).sqrt())
            .collect();
        nus.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // Each symplectic eigenvalue appears twice; keep one of each.
        nus.iter().step_by(2).copied().collect()
    }

    /// Check all symplectic eigenvalues are ≥ 1/2 − tol.
    pub fn check_physical(&self, tol: f64) -> Result<()> {
        let min = self
            .symplectic_eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < 0.5 - tol {
            return Err(Error::Precondition(format!(
                "smallest symplectic eigenvalue {min:.6e} below 1/2"
            )));
        }
        Ok(())
    }

    /// True when every symplectic eigenvalue is within `tol` of 1/2.
    pub fn is_pure(&self, tol: f64) -> bool {
        self.symplectic_eigenvalues()
            .into_iter()
            .all(|nu| (nu - 0.5).abs() <= tol)
    }
}

/// A weighted sum of rotated quadratures `Σᵢ wᵢ X_{modeᵢ}^{θᵢ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureObservable {
    terms: Vec<(usize, f64, f64)>,
}

impl QuadratureObservable {
    /// `terms` are `(mode index, angle, weight)`. Angles are reduced
    /// modulo 2π; weights must be finite and nonzero.
    pub fn new(terms: Vec<(usize, f64, f64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidArgument("observable needs at least one term".into()));
        }
        let mut reduced = Vec::with_capacity(terms.len());
        for (mode, angle, weight) in terms {
            if !angle.is_finite() {
                return Err(Error::InvalidArgument("angle must be finite".into()));
            }
            if !weight.is_finite() || weight == 0.0 {
                return Err(Error::InvalidArgument("weights must be finite and nonzero".into()));
            }
            reduced.push((mode, angle.rem_euclid(std::f64::consts::TAU), weight));
        }
        Ok(Self { terms: reduced })
    }

    /// Single quadrature `X_mode^θ`.
    pub fn single(mode: usize, angle: f64) -> Self {
        Self::new(vec![(mode, angle, 1.0)]).expect("unit weight is valid")
    }

    pub fn terms(&self) -> &[(usize, f64, f64)] {
        &self.terms
    }

    /// Expansion in the `(x₁, p₁, …)` basis:
    /// each term contributes `w (cos θ, sin θ)` on its mode.
    pub fn weight_vector(&self, n_modes: usize) -> Result<DVector<f64>> {
        let mut w = DVector::zeros(2 * n_modes);
        for &(mode, angle, weight) in &self.terms {
            if mode >= n_modes {
                return Err(Error::DimensionMismatch(format!(
                    "mode {mode} out of range for {n_modes} modes"
                )));
            }
            w[2 * mode] += weight * angle.cos();
            w[2 * mode + 1] += weight * angle.sin();
        }
        Ok(w)
    }
}

/// Exact sampler for the commuting joint of one quadrature per mode.
///
/// Factorizes the marginal covariance spectrally; eigenvalues within
/// 1e-12 of zero (squeezed marginals) are clipped to zero.
pub struct QuadratureSampler {
    mean: DVector<f64>,
    factor: DMatrix<f64>,
}

impl QuadratureSampler {
    pub fn new(state: &GaussianState, angles: &[f64]) -> Result<Self> {
        let n = state.n_modes();
        if angles.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} angles for {n} modes",
                angles.len()
            )));
        }
        let mut mean = DVector::zeros(n);
        let mut sigma = DMatrix::zeros(n, n);
        let units: Vec<(f64, f64)> = angles.iter().map(|t| (t.cos(), t.sin())).collect();
        for i in 0..n {
            mean[i] = units[i].0 * state.mean[2 * i] + units[i].1 * state.mean[2 * i + 1];
            for j in 0..n {
                let c = &state.cov;
                sigma[(i, j)] = units[i].0 * units[j].0 * c[(2 * i, 2 * j)]
                    + units[i].0 * units[j].1 * c[(2 * i, 2 * j + 1)]
                    + units[i].1 * units[j].0 * c[(2 * i + 1, 2 * j)]
                    + units[i].1 * units[j].1 * c[(2 * i + 1, 2 * j + 1)];
            }
        }
        let eigen = nalgebra::SymmetricEigen::new(sigma);
        let mut factor = eigen.eigenvectors.clone();
        for (k, lambda) in eigen.eigenvalues.iter().enumerate() {
            let clipped = if *lambda < 0.0 {
                debug_assert!(*lambda > -1e-12, "marginal covariance not PSD: {lambda}");
                0.0
            } else {
                *lambda
            };
            let scale = clipped.sqrt();
            for r in 0..factor.nrows() {
                factor[(r, k)] *= scale;
            }
        }
        Ok(Self { mean, factor })
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len()
    }

    /// Draw one joint outcome into `out` (length `n_modes`).
    pub fn sample_into<R: Rng>(&self, rng: &mut R, out: &mut [f64]) {
        let n = self.mean.len();
        debug_assert_eq!(out.len(), n);
        let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        for (i, slot) in out.iter_mut().enumerate() {
            let mut acc = self.mean[i];
            for (k, zk) in z.iter().enumerate() {
                acc += self.factor[(i, k)] * zk;
            }
            *slot = acc;
        }
    }
}

/// `count` i.i.d. joint outcomes of the quadratures `X_i^{θᵢ}` as a
/// `count × n_modes` matrix, deterministic in `seed` (stream 0 of the
/// crate's splitting rule).
pub fn sample_quadratures(
    state: &GaussianState,
    angles: &[f64],
    count: usize,
    seed: u64,
) -> Result<DMatrix<f64>> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be >= 1".into()));
    }
    let sampler = QuadratureSampler::new(state, angles)?;
    let n = sampler.n_modes();
    let mut rng = stream_rng(seed, 0);
    let mut out = DMatrix::zeros(count, n);
    let mut row = vec![0.0; n];
    for r in 0..count {
        sampler.sample_into(&mut rng, &mut row);
        for (c, v) in row.iter().enumerate() {
            out[(r, c)] = *v;
        }
    }
    Ok(out)
}

/// Symplectic building blocks, mainly used to construct test states.
pub mod transform {
    use super::*;

    /// `state ↦ (S m, S C Sᵀ)`.
    pub fn apply_symplectic(state: &GaussianState, s: &DMatrix<f64>) -> Result<GaussianState> {
        let dim = 2 * state.n_modes();
        if s.nrows() != dim || s.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "symplectic is {}x{}, expected {dim}x{dim}",
                s.nrows(),
                s.ncols()
            )));
        }
        let mean = s * state.mean();
        let cov = s * state.cov() * s.transpose();
        GaussianState::new(state.n_modes(), mean, cov)
    }

    /// Phase rotation of one mode: `x' = x cos θ + p sin θ`,
    /// `p' = −x sin θ + p cos θ` (so `X^θ` becomes the new `x`).
    pub fn rotation(n_modes: usize, mode: usize, theta: f64) -> DMatrix<f64> {
        let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
        let (c, si) = (theta.cos(), theta.sin());
        s[(2 * mode, 2 * mode)] = c;
        s[(2 * mode, 2 * mode + 1)] = si;
        s[(2 * mode + 1, 2 * mode)] = -si;
        s[(2 * mode + 1, 2 * mode + 1)] = c;
        s
    }

    /// Single-mode squeezer `x → e^{−r} x`, `p → e^{r} p`.
    pub fn single_mode_squeeze(n_modes: usize, mode: usize, r: f64) -> DMatrix<f64> {
        let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
        s[(2 * mode, 2 * mode)] = (-r).exp();
        s[(2 * mode + 1, 2 * mode + 1)] = r.exp();
        s
    }

    /// Beam splitter mixing two modes by angle θ (θ = π/4 is 50/50).
    pub fn beam_splitter(n_modes: usize, mode_a: usize, mode_b: usize, theta: f64) -> DMatrix<f64> {
        let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
        let (c, si) = (theta.cos(), theta.sin());
        for off in 0..2 {
            let ia = 2 * mode_a + off;
            let ib = 2 * mode_b + off;
            s[(ia, ia)] = c;
            s[(ia, ib)] = si;
            s[(ib, ia)] = -si;
            s[(ib, ib)] = c;
        }
        s
    }

    /// Two-mode squeezer with this crate's propagator sign:
    /// `x₁' = x₁ cosh g − x₂ sinh g`, `p₁' = p₁ cosh g + p₂ sinh g`,
    /// and symmetrically for mode 2.
    pub fn two_mode_squeeze(n_modes: usize, mode_a: usize, mode_b: usize, g: f64) -> DMatrix<f64> {
        let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
        let (ch, sh) = (g.cosh(), g.sinh());
        let (xa, pa, xb, pb) = (2 * mode_a, 2 * mode_a + 1, 2 * mode_b, 2 * mode_b + 1);
        s[(xa, xa)] = ch;
        s[(xa, xb)] = -sh;
        s[(xb, xb)] = ch;
        s[(xb, xa)] = -sh;
        s[(pa, pa)] = ch;
        s[(pa, pb)] = sh;
        s[(pb, pb)] = ch;
        s[(pb, pa)] = sh;
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn tms(g: f64) -> GaussianState {
        GaussianState::two_mode_squeezed_vacuum(g).unwrap()
    }

    #[test]
    fn vacuum_normalization() {
        let v = GaussianState::vacuum(1).unwrap();
        for theta in [0.0, 0.3, FRAC_PI_2, 2.0] {
            let var = v
                .quadrature_variance(&QuadratureObservable::single(0, theta))
                .unwrap();
            assert_abs_diff_eq!(var, 0.5, epsilon = 1e-15);
        }
        assert!(GaussianState::vacuum(0).is_err());
    }

    #[test]
    fn vacuum_witness_and_photons() {
        let v = GaussianState::vacuum(2).unwrap();
        let ds = v.duan_simon_value(1.0, 0.0, FRAC_PI_2, 0.0, FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(ds, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.mean_photon_number(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn tms_reduces_to_vacuum_at_zero() {
        assert_eq!(tms(0.0), GaussianState::vacuum(2).unwrap());
        assert!(GaussianState::two_mode_squeezed_vacuum(f64::NAN).is_err());
    }

    #[test]
    fn tms_photon_number() {
        for g in [0.1, 0.5, 1.3, 2.0] {
            assert_abs_diff_eq!(
                tms(g).mean_photon_number(),
                2.0 * g.sinh().powi(2),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn tms_squeezed_pair_is_2_exp_minus_2g() {
        // Both squeezed combinations carry e^{-2g}; their sum is the
        // witness value 2 e^{-2g}.
        let g = 0.5;
        let (vx, vp) = tms(g).squeezed_pair_variances().unwrap();
        assert_abs_diff_eq!(vx + vp, 0.7357588823428846, epsilon = 1e-12);
        let (ax, ap) = tms(g).antisqueezed_pair_variances().unwrap();
        assert_abs_diff_eq!(ax, (2.0 * g).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(ap, (2.0 * g).exp(), epsilon = 1e-12);
    }

    #[test]
    fn tms_sum_variance_closed_form() {
        // V(X₁^φ + X₂^{φ'}) = cosh 2g − sinh 2g cos(φ + φ') in this
        // crate's convention; the difference flips the cosine sign.
        for (g, phi, psi) in [(0.3, 0.2, 0.7), (0.9, -1.1, 0.4), (1.7, 2.2, 2.9)] {
            let state = tms(g);
            let sum = QuadratureObservable::new(vec![(0, phi, 1.0), (1, psi, 1.0)]).unwrap();
            let diff = QuadratureObservable::new(vec![(0, phi, 1.0), (1, psi, -1.0)]).unwrap();
            let c = (2.0 * g).cosh();
            let s = (2.0 * g).sinh();
            assert_abs_diff_eq!(
                state.quadrature_variance(&sum).unwrap(),
                c - s * (phi + psi).cos(),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                state.quadrature_variance(&diff).unwrap(),
                c + s * (phi + psi).cos(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn duan_simon_squeezed_angles() {
        for g in [0.2, 0.5, 1.0, 2.5] {
            let ds = tms(g)
                .duan_simon_value(1.0, 0.0, FRAC_PI_2, 0.0, FRAC_PI_2)
                .unwrap();
            assert_abs_diff_eq!(ds, 2.0 * (-2.0 * g).exp(), epsilon = 1e-12);
        }
        assert!(tms(1.0).duan_simon_value(0.0, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn thermal_products_respect_witness_bound() {
        for (n1, n2, a) in [(0.0, 0.0, 1.0), (0.5, 1.5, 1.0), (2.0, 0.1, 0.7), (3.0, 3.0, 1.8)] {
            let state = GaussianState::thermal(&[n1, n2]).unwrap();
            let ds = state
                .duan_simon_value(a, 0.0, FRAC_PI_2, 0.0, FRAC_PI_2)
                .unwrap();
            assert!(ds >= a * a + 1.0 / (a * a) - 1e-12, "ds = {ds}");
        }
    }

    #[test]
    fn loss_endpoints() {
        let state = tms(0.8);
        let same = state.apply_loss(&[1.0, 1.0]).unwrap();
        assert_abs_diff_eq!((state.cov() - same.cov()).abs().max(), 0.0, epsilon = 1e-14);
        let vac = state.apply_loss(&[0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(
            (vac.cov() - GaussianState::vacuum(2).unwrap().cov()).abs().max(),
            0.0,
            epsilon = 1e-14
        );
        assert!(state.apply_loss(&[1.1, 0.5]).is_err());
        assert!(state.apply_loss(&[0.5]).is_err());
    }

    #[test]
    fn loss_interpolates_squeezed_variance() {
        let g = 0.7;
        for eta in [0.2, 0.6, 0.9] {
            let lossy = tms(g).apply_loss(&[eta, eta]).unwrap();
            let (_, v_p) = lossy.squeezed_pair_variances().unwrap();
            assert_abs_diff_eq!(v_p, eta * (-2.0 * g).exp() + (1.0 - eta), epsilon = 1e-12);
        }
    }

    #[test]
    fn quadrature_noise_broadens_conjugate() {
        let g = 0.6;
        let (dh1, dh2) = (0.07, 0.11);
        let noisy = tms(g)
            .apply_quadrature_noise(0, 0.0, dh1)
            .unwrap()
            .apply_quadrature_noise(1, 0.0, dh2)
            .unwrap();
        let (_, v_p) = noisy.squeezed_pair_variances().unwrap();
        assert_abs_diff_eq!(v_p, (-2.0 * g).exp() + dh1 + dh2, epsilon = 1e-12);

        // Zero noise is the identity.
        let same = tms(g).apply_quadrature_noise(0, 1.2, 0.0).unwrap();
        assert_abs_diff_eq!((same.cov() - tms(g).cov()).abs().max(), 0.0, epsilon = 1e-14);
        assert!(tms(g).apply_quadrature_noise(0, 0.0, -0.1).is_err());
    }

    #[test]
    fn quadrature_noise_on_vacuum() {
        let noisy = GaussianState::vacuum(1)
            .unwrap()
            .apply_quadrature_noise(0, 0.0, 0.5)
            .unwrap();
        let v = noisy
            .quadrature_variance(&QuadratureObservable::single(0, FRAC_PI_2))
            .unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn displaced_vacuum_photon_number() {
        let alpha: f64 = 1.3;
        let state = GaussianState::vacuum(1)
            .unwrap()
            .displaced(0, 2f64.sqrt() * alpha, 0.0)
            .unwrap();
        assert_abs_diff_eq!(state.mean_photon_number(), alpha * alpha, epsilon = 1e-12);
    }

    #[test]
    fn symplectic_spectrum() {
        let vac = GaussianState::vacuum(2).unwrap();
        for nu in vac.symplectic_eigenvalues() {
            assert_abs_diff_eq!(nu, 0.5, epsilon = 1e-12);
        }
        assert!(tms(1.5).is_pure(1e-9));
        assert!(!GaussianState::thermal(&[1.0, 0.0]).unwrap().is_pure(1e-9));
        assert!(tms(1.5).check_physical(1e-9).is_ok());
    }

    #[test]
    fn observable_validation() {
        assert!(QuadratureObservable::new(vec![]).is_err());
        assert!(QuadratureObservable::new(vec![(0, 0.0, 0.0)]).is_err());
        assert!(QuadratureObservable::new(vec![(0, f64::INFINITY, 1.0)]).is_err());
        let obs = QuadratureObservable::new(vec![(0, -PI, 1.0)]).unwrap();
        assert_abs_diff_eq!(obs.terms()[0].1, PI, epsilon = 1e-12);
        // Out-of-range mode surfaces at evaluation time.
        let state = GaussianState::vacuum(1).unwrap();
        let bad = QuadratureObservable::single(3, 0.0);
        assert!(state.quadrature_variance(&bad).is_err());
    }

    #[test]
    fn sampler_matches_moments() {
        let state = tms(1.0);
        let n = 200_000;
        let samples = sample_quadratures(&state, &[0.0, 0.0], n, 11).unwrap();
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        let mut v1 = 0.0;
        let mut v2 = 0.0;
        let mut c12 = 0.0;
        for r in 0..n {
            m1 += samples[(r, 0)];
            m2 += samples[(r, 1)];
        }
        m1 /= n as f64;
        m2 /= n as f64;
        for r in 0..n {
            let (a, b) = (samples[(r, 0)] - m1, samples[(r, 1)] - m2);
            v1 += a * a;
            v2 += b * b;
            c12 += a * b;
        }
        v1 /= n as f64;
        v2 /= n as f64;
        c12 /= n as f64;
        let rho = c12 / (v1 * v2).sqrt();
        // Correlation of the x quadratures is −tanh 2g in this convention.
        assert_abs_diff_eq!(rho, -(2.0f64).tanh(), epsilon = 0.003);
        let c = (2.0f64).cosh() / 2.0;
        assert!((v1 - c).abs() < 5.0 * c * (2.0 / n as f64).sqrt());
        assert!((v2 - c).abs() < 5.0 * c * (2.0 / n as f64).sqrt());
    }

    #[test]
    fn sampling_is_deterministic() {
        let state = tms(0.4);
        let a = sample_quadratures(&state, &[0.0, FRAC_PI_2], 64, 99).unwrap();
        let b = sample_quadratures(&state, &[0.0, FRAC_PI_2], 64, 99).unwrap();
        assert_eq!(a, b);
        let c = sample_quadratures(&state, &[0.0, FRAC_PI_2], 64, 100).unwrap();
        assert_ne!(a, c);
        assert!(sample_quadratures(&state, &[0.0], 64, 0).is_err());
        assert!(sample_quadratures(&state, &[0.0, 0.0], 0, 0).is_err());
    }

    #[test]
    fn transforms_compose_to_tms() {
        let vac = GaussianState::vacuum(2).unwrap();
        let s = transform::two_mode_squeeze(2, 0, 1, 0.9);
        let built = transform::apply_symplectic(&vac, &s).unwrap();
        let direct = tms(0.9);
        assert_abs_diff_eq!((built.cov() - direct.cov()).abs().max(), 0.0, epsilon = 1e-12);
    }
}
