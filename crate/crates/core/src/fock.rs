//! Truncated Fock-space states and operators.
//!
//! This is the brute-force side of the crate: everything the Gaussian
//! representation computes in closed form is recomputed here from
//! explicit amplitude arrays and dense single-mode matrices, so the two
//! routes can be checked against each other at small squeezing.
//!
//! Truncation is never hidden: constructors record an analytic tail
//! bound and error when it exceeds the requested tolerance, and
//! renormalization is an explicit call. Expectation values are Rayleigh
//! quotients (divided by the stored norm), so a sub-tolerance tail does
//! not bias them. Two-mode operators are kept as sums of Kronecker
//! terms `A ⊗ B` and applied to the amplitude matrix as `A Ψ Bᵀ`;
//! dense storage of single-mode factors is fine up to the documented
//! ceiling of cutoff ≈ 100 (≈10⁴ basis states per mode pair).

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::{Error, Result};

/// Tail tolerance used by the default constructors.
pub const DEFAULT_TAIL_TOL: f64 = 1e-9;

type C64 = Complex64;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Relative sign between the two coherent components of a cat state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatParity {
    /// `|α⟩ + |−α⟩`: support on even photon numbers.
    Even,
    /// `|α⟩ − |−α⟩`: support on odd photon numbers.
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorLabel {
    Annihilation,
    Creation,
    Quadrature(f64),
    Number,
}

/// Dense single-mode operator on the truncated basis `{|0⟩ … |cutoff⟩}`.
#[derive(Debug, Clone)]
pub struct FockOperator {
    cutoff: usize,
    matrix: Array2<C64>,
    label: OperatorLabel,
}

impl FockOperator {
    pub fn annihilation(cutoff: usize) -> Self {
        let dim = cutoff + 1;
        let mut m = Array2::zeros((dim, dim));
        for n in 1..dim {
            m[(n - 1, n)] = c((n as f64).sqrt());
        }
        Self { cutoff, matrix: m, label: OperatorLabel::Annihilation }
    }

    pub fn creation(cutoff: usize) -> Self {
        let dim = cutoff + 1;
        let mut m = Array2::zeros((dim, dim));
        for n in 1..dim {
            m[(n, n - 1)] = c((n as f64).sqrt());
        }
        Self { cutoff, matrix: m, label: OperatorLabel::Creation }
    }

    pub fn number(cutoff: usize) -> Self {
        let dim = cutoff + 1;
        let mut m = Array2::zeros((dim, dim));
        for n in 0..dim {
            m[(n, n)] = c(n as f64);
        }
        Self { cutoff, matrix: m, label: OperatorLabel::Number }
    }

    /// `X^θ = (a e^{-iθ} + a† e^{iθ})/√2`, matching the crate convention.
    pub fn quadrature(theta: f64, cutoff: usize) -> Self {
        let dim = cutoff + 1;
        let phase = C64::from_polar(1.0, theta);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let mut m = Array2::zeros((dim, dim));
        for n in 1..dim {
            let amp = (n as f64).sqrt() * inv_sqrt2;
            m[(n - 1, n)] = phase.conj() * amp;
            m[(n, n - 1)] = phase * amp;
        }
        Self { cutoff, matrix: m, label: OperatorLabel::Quadrature(theta) }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn label(&self) -> OperatorLabel {
        self.label
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let dim = self.matrix.nrows();
        for i in 0..dim {
            for j in 0..dim {
                if (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn apply(&self, amplitudes: &Array1<C64>) -> Array1<C64> {
        self.matrix.dot(amplitudes)
    }
}

/// Two-mode operator stored as a sum of Kronecker terms `coeff · A ⊗ B`
/// (`None` factors are identities). Never materialized as a
/// `(cutoff+1)² × (cutoff+1)²` matrix; applied directly to amplitude
/// matrices.
#[derive(Debug, Clone)]
pub struct TwoModeOperator {
    cutoff: usize,
    terms: Vec<KronTerm>,
}

#[derive(Debug, Clone)]
struct KronTerm {
    coeff: C64,
    mode1: Option<Array2<C64>>,
    mode2: Option<Array2<C64>>,
}

impl TwoModeOperator {
    pub fn on_mode_1(op: &FockOperator) -> Self {
        Self {
            cutoff: op.cutoff,
            terms: vec![KronTerm { coeff: c(1.0), mode1: Some(op.matrix.clone()), mode2: None }],
        }
    }

    pub fn on_mode_2(op: &FockOperator) -> Self {
        Self {
            cutoff: op.cutoff,
            terms: vec![KronTerm { coeff: c(1.0), mode1: None, mode2: Some(op.matrix.clone()) }],
        }
    }

    pub fn kron(a: &FockOperator, b: &FockOperator) -> Result<Self> {
        if a.cutoff != b.cutoff {
            return Err(Error::DimensionMismatch(format!(
                "cutoffs {} and {} differ",
                a.cutoff, b.cutoff
            )));
        }
        Ok(Self {
            cutoff: a.cutoff,
            terms: vec![KronTerm {
                coeff: c(1.0),
                mode1: Some(a.matrix.clone()),
                mode2: Some(b.matrix.clone()),
            }],
        })
    }

    /// `Σᵢ wᵢ X_{modeᵢ}^{θᵢ}`, the Fock-space mirror of
    /// [`QuadratureObservable`](crate::gaussian::QuadratureObservable).
    pub fn quadrature_sum(terms: &[(usize, f64, f64)], cutoff: usize) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidArgument("observable needs at least one term".into()));
        }
        let mut out = Vec::with_capacity(terms.len());
        for &(mode, theta, weight) in terms {
            let q = FockOperator::quadrature(theta, cutoff);
            let term = match mode {
                0 => KronTerm { coeff: c(weight), mode1: Some(q.matrix), mode2: None },
                1 => KronTerm { coeff: c(weight), mode1: None, mode2: Some(q.matrix) },
                _ => {
                    return Err(Error::DimensionMismatch(format!(
                        "mode {mode} out of range for two modes"
                    )))
                }
            };
            out.push(term);
        }
        Ok(Self { cutoff, terms: out })
    }

    /// `n̂₁ + n̂₂`.
    pub fn total_number(cutoff: usize) -> Self {
        let n = FockOperator::number(cutoff);
        let mut op = Self::on_mode_1(&n);
        op.terms.push(KronTerm { coeff: c(1.0), mode1: None, mode2: Some(n.matrix) });
        op
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn scaled(mut self, factor: C64) -> Self {
        for t in &mut self.terms {
            t.coeff *= factor;
        }
        self
    }

    pub fn plus(mut self, other: Self) -> Result<Self> {
        if self.cutoff != other.cutoff {
            return Err(Error::DimensionMismatch(format!(
                "cutoffs {} and {} differ",
                self.cutoff, other.cutoff
            )));
        }
        self.terms.extend(other.terms);
        Ok(self)
    }

    /// `O Ψ` for an amplitude matrix Ψ indexed `(n₁, n₂)`.
    pub fn apply(&self, amplitudes: &Array2<C64>) -> Array2<C64> {
        let mut out = Array2::<C64>::zeros(amplitudes.raw_dim());
        for term in &self.terms {
            let mut part = match &term.mode1 {
                Some(a) => a.dot(amplitudes),
                None => amplitudes.clone(),
            };
            if let Some(b) = &term.mode2 {
                part = part.dot(&b.t());
            }
            out.zip_mut_with(&part, |o, p| *o += term.coeff * p);
        }
        out
    }
}

/// Single-mode truncated state vector.
#[derive(Debug, Clone)]
pub struct SingleModeVector {
    cutoff: usize,
    amplitudes: Array1<C64>,
    tail_bound: f64,
}

impl SingleModeVector {
    pub fn from_amplitudes(amplitudes: Array1<C64>, tail_bound: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("empty amplitude array".into()));
        }
        Ok(Self { cutoff: amplitudes.len() - 1, amplitudes, tail_bound })
    }

    /// Coherent state `|α⟩` truncated at `cutoff`.
    pub fn coherent(alpha: C64, cutoff: usize) -> Result<Self> {
        Self::coherent_with_tolerance(alpha, cutoff, DEFAULT_TAIL_TOL)
    }

    pub fn coherent_with_tolerance(alpha: C64, cutoff: usize, tol: f64) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::InvalidArgument("cutoff must be >= 1".into()));
        }
        let dim = cutoff + 1;
        let mut amp = Array1::zeros(dim);
        let mut cur = c((-alpha.norm_sqr() / 2.0).exp());
        for n in 0..dim {
            amp[n] = cur;
            cur *= alpha / c(((n + 1) as f64).sqrt());
        }
        let bound = poisson_tail_bound(alpha.norm_sqr(), cutoff);
        if bound > tol {
            return Err(Error::TruncationTail { bound, tol });
        }
        Ok(Self { cutoff, amplitudes: amp, tail_bound: bound })
    }

    /// Normalized cat state `|α⟩ ± |−α⟩`. Even cats occupy only even
    /// photon numbers, odd cats only odd ones; the odd cat tends to
    /// `|1⟩` as α → 0. Recommended cutoff ≥ `⌈|α|² + 8|α|⌉`.
    pub fn cat(alpha: C64, parity: CatParity, cutoff: usize) -> Result<Self> {
        Self::cat_with_tolerance(alpha, parity, cutoff, DEFAULT_TAIL_TOL)
    }

    pub fn cat_with_tolerance(
        alpha: C64,
        parity: CatParity,
        cutoff: usize,
        tol: f64,
    ) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::InvalidArgument("cutoff must be >= 1".into()));
        }
        let a2 = alpha.norm_sqr();
        let dim = cutoff + 1;
        let overlap = (-2.0 * a2).exp();
        let (norm_sq, keep_even) = match parity {
            CatParity::Even => (2.0 * (1.0 + overlap), true),
            CatParity::Odd => (2.0 * (1.0 - overlap), false),
        };
        let mut amp: Array1<C64> = Array1::zeros(dim);
        if norm_sq == 0.0 {
            // α = 0, odd parity: the limit state is |1⟩.
            amp[1] = c(1.0);
            return Ok(Self { cutoff, amplitudes: amp, tail_bound: 0.0 });
        }
        let scale = 2.0 / norm_sq.sqrt();
        let mut cur = c((-a2 / 2.0).exp());
        for n in 0..dim {
            if (n % 2 == 0) == keep_even {
                amp[n] = cur * c(scale);
            }
            cur *= alpha / c(((n + 1) as f64).sqrt());
        }
        // Cat amplitudes are bounded by 2/norm times the coherent ones.
        let bound = (4.0 / norm_sq * poisson_tail_bound(a2, cutoff)).min(1.0);
        if bound > tol {
            return Err(Error::TruncationTail { bound, tol });
        }
        Ok(Self { cutoff, amplitudes: amp, tail_bound: bound })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm_deficit(&self) -> f64 {
        1.0 - self.norm_squared()
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn renormalized(&self) -> Self {
        let norm = self.norm_squared().sqrt();
        Self {
            cutoff: self.cutoff,
            amplitudes: self.amplitudes.mapv(|a| a / c(norm)),
            tail_bound: self.tail_bound,
        }
    }

    fn check_op(&self, op: &FockOperator) -> Result<()> {
        if op.cutoff != self.cutoff {
            return Err(Error::DimensionMismatch(format!(
                "operator cutoff {} vs state cutoff {}",
                op.cutoff, self.cutoff
            )));
        }
        Ok(())
    }

    pub fn expectation_complex(&self, op: &FockOperator) -> Result<C64> {
        self.check_op(op)?;
        let applied = op.apply(&self.amplitudes);
        let inner: C64 = self
            .amplitudes
            .iter()
            .zip(applied.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(inner / self.norm_squared())
    }

    pub fn expectation(&self, op: &FockOperator) -> Result<f64> {
        let z = self.expectation_complex(op)?;
        debug_assert!(z.im.abs() < 1e-9, "non-Hermitian expectation {z}");
        Ok(z.re)
    }

    /// `⟨O²⟩ − ⟨O⟩²` for Hermitian `O`, via `‖Oψ‖²`.
    pub fn variance(&self, op: &FockOperator) -> Result<f64> {
        self.check_op(op)?;
        let applied = op.apply(&self.amplitudes);
        let second: f64 = applied.iter().map(|a| a.norm_sqr()).sum::<f64>() / self.norm_squared();
        let first = self.expectation(op)?;
        Ok(second - first * first)
    }

    /// Pure-state quantum Fisher information, `4 V(O)`.
    pub fn qfi(&self, op: &FockOperator) -> Result<f64> {
        Ok(4.0 * self.variance(op)?)
    }

    pub fn mean_photon_number(&self) -> Result<f64> {
        self.expectation(&FockOperator::number(self.cutoff))
    }

    /// Tensor product `self ⊗ other` as a two-mode state. Cutoffs must
    /// match so the result stays compatible with two-mode operators.
    pub fn product(&self, other: &SingleModeVector) -> Result<FockVector> {
        if self.cutoff != other.cutoff {
            return Err(Error::DimensionMismatch(format!(
                "cutoffs {} and {} differ",
                self.cutoff, other.cutoff
            )));
        }
        let dim = self.cutoff + 1;
        let mut amp = Array2::zeros((dim, dim));
        for i in 0..dim {
            for j in 0..dim {
                amp[(i, j)] = self.amplitudes[i] * other.amplitudes[j];
            }
        }
        let tail = self.tail_bound + other.tail_bound;
        FockVector::from_amplitudes(amp, tail)
    }
}

/// Two-mode truncated state with amplitudes indexed `(n₁, n₂)`.
#[derive(Debug, Clone)]
pub struct FockVector {
    cutoff: usize,
    amplitudes: Array2<C64>,
    tail_bound: f64,
}

impl FockVector {
    pub fn from_amplitudes(amplitudes: Array2<C64>, tail_bound: f64) -> Result<Self> {
        if amplitudes.nrows() != amplitudes.ncols() || amplitudes.is_empty() {
            return Err(Error::InvalidArgument("amplitude array must be square and nonempty".into()));
        }
        Ok(Self { cutoff: amplitudes.nrows() - 1, amplitudes, tail_bound })
    }

    /// Two-mode squeezed vacuum from the propagator
    /// `exp(g (a₁a₂ − a₁†a₂†))`: amplitude `sech g · (−tanh g)^k` on
    /// `|k, k⟩`, zero elsewhere (magnitudes follow the
    /// `√(1 − tanh²g) tanh^k g` law, signs alternate with this
    /// propagator convention). Exact geometric tail:
    /// `tanh^{2(cutoff+1)} g`.
    pub fn tms(g: f64, cutoff: usize) -> Result<Self> {
        Self::tms_with_tolerance(g, cutoff, DEFAULT_TAIL_TOL)
    }

    pub fn tms_with_tolerance(g: f64, cutoff: usize, tol: f64) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::InvalidArgument("cutoff must be >= 1".into()));
        }
        if !g.is_finite() {
            return Err(Error::InvalidArgument("squeezing parameter must be finite".into()));
        }
        let t = g.tanh();
        let sech = (1.0 - t * t).sqrt();
        let dim = cutoff + 1;
        let mut amp = Array2::zeros((dim, dim));
        let mut cur = sech;
        for k in 0..dim {
            amp[(k, k)] = c(cur);
            cur *= -t;
        }
        let bound = t.abs().powi(2 * (cutoff as i32 + 1));
        if bound > tol {
            return Err(Error::TruncationTail { bound, tol });
        }
        Ok(Self { cutoff, amplitudes: amp, tail_bound: bound })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amplitudes(&self) -> &Array2<C64> {
        &self.amplitudes
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm_deficit(&self) -> f64 {
        1.0 - self.norm_squared()
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn renormalized(&self) -> Self {
        let norm = self.norm_squared().sqrt();
        Self {
            cutoff: self.cutoff,
            amplitudes: self.amplitudes.mapv(|a| a / c(norm)),
            tail_bound: self.tail_bound,
        }
    }

    fn check_op(&self, op: &TwoModeOperator) -> Result<()> {
        if op.cutoff != self.cutoff {
            return Err(Error::DimensionMismatch(format!(
                "operator cutoff {} vs state cutoff {}",
                op.cutoff, self.cutoff
            )));
        }
        Ok(())
    }

    pub fn expectation_complex(&self, op: &TwoModeOperator) -> Result<C64> {
        self.check_op(op)?;
        let applied = op.apply(&self.amplitudes);
        let inner: C64 = self
            .amplitudes
            .iter()
            .zip(applied.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(inner / self.norm_squared())
    }

    pub fn expectation(&self, op: &TwoModeOperator) -> Result<f64> {
        let z = self.expectation_complex(op)?;
        debug_assert!(z.im.abs() < 1e-9, "non-Hermitian expectation {z}");
        Ok(z.re)
    }

    /// `⟨O²⟩ − ⟨O⟩²` for Hermitian `O`.
    pub fn variance(&self, op: &TwoModeOperator) -> Result<f64> {
        self.check_op(op)?;
        let applied = op.apply(&self.amplitudes);
        let second: f64 = applied.iter().map(|a| a.norm_sqr()).sum::<f64>() / self.norm_squared();
        let first = self.expectation(op)?;
        Ok(second - first * first)
    }

    /// Pure-state quantum Fisher information, `4 V(O)`.
    pub fn qfi(&self, op: &TwoModeOperator) -> Result<f64> {
        Ok(4.0 * self.variance(op)?)
    }

    /// Symmetrized covariance `⟨{A,B}⟩/2 − ⟨A⟩⟨B⟩` for Hermitian A, B.
    pub fn covariance(&self, a: &TwoModeOperator, b: &TwoModeOperator) -> Result<f64> {
        self.check_op(a)?;
        self.check_op(b)?;
        let va = a.apply(&self.amplitudes);
        let vb = b.apply(&self.amplitudes);
        let inner: C64 = va.iter().zip(vb.iter()).map(|(x, y)| x.conj() * y).sum();
        Ok(inner.re / self.norm_squared() - self.expectation(a)? * self.expectation(b)?)
    }

    pub fn mean_total_photon_number(&self) -> Result<f64> {
        self.expectation(&TwoModeOperator::total_number(self.cutoff))
    }
}

/// Poisson tail mass above `cutoff` for intensity `a`, bounded by the
/// geometric-ratio estimate `t_{N+1} / (1 − a/(N+2))`. Returns 1 when
/// the ratio bound does not apply (cutoff below the Poisson bulk).
fn poisson_tail_bound(a: f64, cutoff: usize) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let n1 = cutoff as f64 + 1.0;
    let ratio = a / (n1 + 1.0);
    if ratio >= 1.0 {
        return 1.0;
    }
    // log t_{N+1} = -a + (N+1) ln a - ln (N+1)!
    let mut log_term = -a + n1 * a.ln();
    for k in 1..=(cutoff + 1) {
        log_term -= (k as f64).ln();
    }
    (log_term.exp() / (1.0 - ratio)).min(1.0)
}

/// Values of the normalized Hermite functions `φ₀(x) … φ_{n_max}(x)`
/// (harmonic-oscillator eigenfunctions for `V(x) = 1/2` units), by the
/// stable upward three-term recurrence. The normalized functions are
/// uniformly bounded, so no rescaling is needed at any order.
pub fn hermite_functions(n_max: usize, x: f64) -> Vec<f64> {
    let mut phi = Vec::with_capacity(n_max + 1);
    let phi0 = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
    phi.push(phi0);
    if n_max == 0 {
        return phi;
    }
    phi.push(std::f64::consts::SQRT_2 * x * phi0);
    for n in 1..n_max {
        let next = (2.0 / (n as f64 + 1.0)).sqrt() * x * phi[n]
            - (n as f64 / (n as f64 + 1.0)).sqrt() * phi[n - 1];
        phi.push(next);
    }
    phi
}

fn check_grid(grid: &[f64], cutoff: usize) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::InvalidArgument("grid needs at least two points".into()));
    }
    // Position-space oscillation wavenumber of φ_N is ~ sqrt(2N+1);
    // require better than two points per half-oscillation.
    let k_max = (2.0 * cutoff as f64 + 1.0).sqrt();
    let mut max_spacing: f64 = 0.0;
    for w in grid.windows(2) {
        let d = w[1] - w[0];
        if d <= 0.0 {
            return Err(Error::InvalidArgument("grid must be strictly increasing".into()));
        }
        max_spacing = max_spacing.max(d);
    }
    if max_spacing * k_max > std::f64::consts::FRAC_PI_2 {
        return Err(Error::GridTooCoarse(format!(
            "spacing {max_spacing:.3e} cannot resolve cutoff {cutoff} (needs <= {:.3e})",
            std::f64::consts::FRAC_PI_2 / k_max
        )));
    }
    Ok(())
}

/// Position wavefunction `ψ(x₁, x₂)` of a two-mode state on a 1-D grid
/// (same grid for both axes), via the Hermite-function expansion.
pub fn joint_x_wavefunction(state: &FockVector, grid: &[f64]) -> Result<Array2<C64>> {
    check_grid(grid, state.cutoff)?;
    let dim = state.cutoff + 1;
    let mut phi = Array2::<C64>::zeros((grid.len(), dim));
    for (i, &x) in grid.iter().enumerate() {
        for (n, v) in hermite_functions(state.cutoff, x).into_iter().enumerate() {
            phi[(i, n)] = c(v);
        }
    }
    Ok(phi.dot(&state.amplitudes).dot(&phi.t()))
}

/// `|ψ(x₁, x₂)|²` on the grid; integrates to the state norm.
pub fn joint_x_distribution(state: &FockVector, grid: &[f64]) -> Result<Array2<f64>> {
    Ok(joint_x_wavefunction(state, grid)?.mapv(|z| z.norm_sqr()))
}
