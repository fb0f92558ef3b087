//! Continuous-variable quantum-optics numerics.
//!
//! The crate models n-mode Gaussian states by their first and second
//! moments ([`gaussian`]), cross-checks every closed form against a
//! truncated two-mode Fock-space computation ([`fock`]), and builds the
//! higher-level analyses on top: the coarse-grained sign-guessing game
//! ([`game`]), effective-size measures with their measurable lower
//! bounds and noise caps ([`macroscopicity`]), a two-mode parametric
//! amplifier in a lossy cavity ([`cavity`]), and a discretized
//! position-basis decoherence model ([`coherence`]).
//!
//! # Conventions
//!
//! ħ = 1 everywhere. The rotated quadrature of a mode is
//!
//! ```text
//! X^θ = (a e^{-iθ} + a† e^{iθ}) / √2,
//! ```
//!
//! so `X^0 = x`, `X^{π/2} = p`, `[x, p] = i`, and the vacuum has
//! `V(x) = V(p) = 1/2`. Covariance matrices are ordered
//! `(x₁, p₁, x₂, p₂, …)`.
//!
//! Two-mode squeezing uses the propagator `exp(g (a₁a₂ − a₁†a₂†))`.
//! For `g > 0` this makes the x quadratures anti-correlated and the p
//! quadratures correlated, so the squeezed combinations are `x₁ + x₂`
//! and `p₁ − p₂` (each of variance `e^{-2g}`), while `x₁ − x₂` and
//! `p₁ + p₂` are anti-squeezed (`e^{2g}`). The opposite convention is
//! the same state at `-g`. Use the named helpers on
//! [`GaussianState`] rather than relying on raw signs.

// Validation guards are written as `!(x > 0.0)` so NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cavity;
pub mod coherence;
pub mod fock;
pub mod game;
pub mod gaussian;
pub mod macroscopicity;
pub mod rng;
pub mod special;

mod error;

pub use error::{Error, Result};

pub use cavity::{CavityParams, JointQuadratureDistribution, ScalarState, ThresholdClass, ThresholdReport};
pub use coherence::{EnvelopeModel, GridSpec, GridState, MomentSet};
pub use fock::{FockOperator, FockVector, SingleModeVector, TwoModeOperator};
pub use game::{GameParams, GameResult, StateKind};
pub use gaussian::{GaussianState, QuadratureObservable};
pub use macroscopicity::{BoundConvention, EffectiveSizeReport, ExperimentRecord, SizeKind};

/// Vacuum variance of a single quadrature in this crate's units.
pub const VACUUM_VARIANCE: f64 = 0.5;
