//! Error-function helpers used by the guessing game.

use crate::{Error, Result};

/// Gauss error function.
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Inverse error function on (-1, 1), computed by Newton iteration on
/// `erf` from a Winitzki-style seed. Converges to better than 1e-14 in
/// at most a handful of steps over the whole open interval.
pub fn inverse_erf(y: f64) -> Result<f64> {
    if !(y > -1.0 && y < 1.0) {
        return Err(Error::OutOfRange(format!(
            "inverse_erf argument {y} outside (-1, 1)"
        )));
    }
    if y == 0.0 {
        return Ok(0.0);
    }

    // Seed: sgn(y) sqrt( sqrt((2/(πa) + L/2)^2 - L/a) - (2/(πa) + L/2) ),
    // L = ln(1 - y^2), a = 0.147. Accurate to ~2e-3 already.
    let a = 0.147;
    let l = (1.0 - y * y).ln();
    let c = 2.0 / (std::f64::consts::PI * a) + l / 2.0;
    let mut x = y.signum() * ((c * c - l / a).sqrt() - c).sqrt();

    // Newton: x <- x + (y - erf(x)) * sqrt(pi)/2 * exp(x^2).
    let half_sqrt_pi = std::f64::consts::PI.sqrt() / 2.0;
    for _ in 0..8 {
        let r = erf(x) - y;
        let step = r * half_sqrt_pi * (x * x).exp();
        x -= step;
        if step.abs() <= 1e-16 * (1.0 + x.abs()) {
            break;
        }
    }
    Ok(x)
}
