//! Semiclassical constants and the sharpness ratio.

use crate::error::{Error, Result};
use crate::numerics::special::{double_factorial, factorial, ln_gamma};
use std::f64::consts::PI;

/// One-dimensional semiclassical constant
/// L¹(σ) = Γ(σ+1) / (√(4π) Γ(σ+3/2)), evaluated through log-gamma.
pub fn lt_constant_1(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::Domain(format!("lt_constant_1: σ must be positive, got {sigma}")));
    }
    Ok((ln_gamma(sigma + 1.0) - ln_gamma(sigma + 1.5)).exp() / (4.0 * PI).sqrt())
}

/// Two-dimensional semiclassical constant
/// L²(σ) = Γ(σ+1) / (4π Γ(σ+2)) = 1 / (4π (σ+1)).
pub fn lt_constant_2(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::Domain(format!("lt_constant_2: σ must be positive, got {sigma}")));
    }
    Ok(1.0 / (4.0 * PI * (sigma + 1.0)))
}

/// Ratio of the upper-bound constant to the lower-bound constant in the
/// sharpness comparison, 2^{σ+3} π L¹(σ).
pub fn constant_ratio(sigma: f64) -> Result<f64> {
    Ok(2.0f64.powf(sigma + 3.0) * PI * lt_constant_1(sigma)?)
}

/// Closed form of `constant_ratio` at half-integer powers σ = n + 1/2:
/// 2^{3/2} π (2n+1)!! / (n+1)!.
pub fn half_integer_ratio(n: u64) -> f64 {
    2.0f64.powf(1.5) * PI * double_factorial(2 * n + 1) / factorial(n + 1)
}
