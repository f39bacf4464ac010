//! Spiral profiles r(θ) and the geometric quantities defined directly on
//! them: coil width, arc length, curvature, classification.

use crate::error::{Error, Result};
use crate::numerics::interp::Pchip;
use crate::numerics::quadrature;
use std::f64::consts::TAU;

/// Analytic or tabulated description of the radius function r(θ).
#[derive(Debug, Clone)]
pub enum ProfileFamily {
    /// r(θ) = c θ^α. The moment bound needs 0 < α < 1 (shrinking coils);
    /// other positive exponents are accepted for classification scans only.
    Power { scale: f64, exponent: f64 },
    /// r(θ) = c θ.
    Archimedean { scale: f64 },
    /// Monotone cubic interpolation of (θ, r) samples; derivatives come from
    /// the interpolant.
    Tabulated { interp: Pchip },
}

/// A simple spiral curve Γ = {(r(θ), θ)} in polar coordinates.
#[derive(Debug, Clone)]
pub struct SpiralProfile {
    family: ProfileFamily,
    /// Angle below which regularity checks are waived (analytic power
    /// profiles have unbounded r̈ near the origin).
    theta_min: f64,
    /// Number of analytic derivatives available (2 for analytic families,
    /// 1 for tabulated data).
    derivative_order: u32,
}

/// Width-function classification of a simple spiral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpiralClass {
    StrictlyExpanding,
    Expanding,
    StrictlyShrinking,
    Shrinking,
    AsymptoticallyArchimedean,
}

impl SpiralProfile {
    pub fn power(scale: f64, exponent: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::Domain("power profile: scale must be positive".into()));
        }
        if !(exponent > 0.0) || !exponent.is_finite() {
            return Err(Error::Domain("power profile: exponent must be positive".into()));
        }
        Ok(SpiralProfile {
            family: ProfileFamily::Power { scale, exponent },
            theta_min: TAU,
            derivative_order: 2,
        })
    }

    pub fn archimedean(scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::Domain("archimedean profile: scale must be positive".into()));
        }
        Ok(SpiralProfile {
            family: ProfileFamily::Archimedean { scale },
            theta_min: TAU,
            derivative_order: 2,
        })
    }

    /// Tabulated profile from strictly increasing (θ, r) samples.
    pub fn tabulated(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::Domain("tabulated profile needs at least 4 samples".into()));
        }
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0 && w[1].1 > w[0].1) {
                return Err(Error::Domain(
                    "tabulated profile samples must be strictly increasing in both coordinates".into(),
                ));
            }
        }
        if samples[0].0 < 0.0 {
            return Err(Error::Domain("tabulated profile angles must be nonnegative".into()));
        }
        let x: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let y: Vec<f64> = samples.iter().map(|s| s.1).collect();
        Ok(SpiralProfile {
            family: ProfileFamily::Tabulated { interp: Pchip::new(x, y)? },
            theta_min: samples[0].0.max(TAU),
            derivative_order: 1,
        })
    }

    pub fn with_theta_min(mut self, theta_min: f64) -> Self {
        self.theta_min = theta_min;
        self
    }

    pub fn theta_min(&self) -> f64 {
        self.theta_min
    }

    pub fn derivative_order(&self) -> u32 {
        self.derivative_order
    }

    pub fn family(&self) -> &ProfileFamily {
        &self.family
    }

    /// Evaluable parameter range.
    pub fn theta_range(&self) -> (f64, f64) {
        match &self.family {
            ProfileFamily::Tabulated { interp } => (interp.x_min(), interp.x_max()),
            _ => (0.0, f64::INFINITY),
        }
    }

    pub fn contains_theta(&self, theta: f64) -> bool {
        let (lo, hi) = self.theta_range();
        theta >= lo && theta <= hi
    }

    pub fn r(&self, theta: f64) -> f64 {
        match &self.family {
            ProfileFamily::Power { scale, exponent } => scale * theta.powf(*exponent),
            ProfileFamily::Archimedean { scale } => scale * theta,
            ProfileFamily::Tabulated { interp } => interp.eval(theta),
        }
    }

    pub fn dr(&self, theta: f64) -> f64 {
        match &self.family {
            ProfileFamily::Power { scale, exponent } => scale * exponent * theta.powf(exponent - 1.0),
            ProfileFamily::Archimedean { scale } => *scale,
            ProfileFamily::Tabulated { interp } => interp.eval_deriv(theta),
        }
    }

    pub fn ddr(&self, theta: f64) -> f64 {
        match &self.family {
            ProfileFamily::Power { scale, exponent } => {
                scale * exponent * (exponent - 1.0) * theta.powf(exponent - 2.0)
            }
            ProfileFamily::Archimedean { .. } => 0.0,
            ProfileFamily::Tabulated { interp } => {
                // second derivative of the C^1 interpolant by central differencing
                let (lo, hi) = self.theta_range();
                let h = ((hi - lo) * 1e-4).max(1e-6);
                let t0 = theta.clamp(lo + h, hi - h);
                (interp.eval_deriv(t0 + h) - interp.eval_deriv(t0 - h)) / (2.0 * h)
            }
        }
    }

    /// Cartesian point on the curve.
    pub fn point(&self, theta: f64) -> (f64, f64) {
        let r = self.r(theta);
        (r * theta.cos(), r * theta.sin())
    }

    /// Speed of the angular parametrization, √(ṙ² + r²) = ds/dθ.
    pub fn arc_speed(&self, theta: f64) -> f64 {
        let r = self.r(theta);
        let dr = self.dr(theta);
        (r * r + dr * dr).sqrt()
    }

    /// Normalized gap between consecutive coils, a(θ) = (r(θ) − r(θ−2π))/2π.
    pub fn width(&self, theta: f64) -> Result<f64> {
        if theta < TAU {
            return Err(Error::Domain(format!("width requires θ ≥ 2π, got {theta}")));
        }
        if !self.contains_theta(theta) || !self.contains_theta(theta - TAU) {
            return Err(Error::Range(format!("width: θ = {theta} outside the tabulated range")));
        }
        Ok((self.r(theta) - self.r(theta - TAU)) / TAU)
    }

    /// Arc length s(θ) from the start of the curve (θ = 0 for analytic
    /// families, the first sample for tabulated ones) by adaptive quadrature,
    /// relative error ≤ 1e-10.
    pub fn arc_length(&self, theta: f64) -> Result<f64> {
        let (lo, hi) = self.theta_range();
        if theta < lo || theta > hi {
            return Err(Error::Range(format!("arc_length: θ = {theta} outside [{lo}, {hi}]")));
        }
        if theta == lo {
            return Ok(0.0);
        }
        let rel = 1e-11;
        match &self.family {
            ProfileFamily::Power { scale, exponent } => {
                // τ = θ^α turns the θ^{α-1}-singular integrand into
                // (c/α) √(α² + τ^{2/α}), smooth at the origin.
                let a = *exponent;
                let c = *scale;
                let p = 2.0 / a;
                let (v, _) = quadrature::integrate(
                    |t| (a * a + t.powf(p)).sqrt(),
                    0.0,
                    theta.powf(a),
                    rel,
                    0.0,
                )?;
                Ok(v * c / a)
            }
            _ => {
                let (v, _) = quadrature::integrate(|t| self.arc_speed(t), lo, theta, rel, 0.0)?;
                Ok(v)
            }
        }
    }

    /// Arc length between two parameters (same quadrature as `arc_length`).
    pub fn arc_length_between(&self, theta_a: f64, theta_b: f64) -> Result<f64> {
        let (v, _) = quadrature::integrate(|t| self.arc_speed(t), theta_a, theta_b, 1e-12, 1e-300)?;
        Ok(v)
    }

    /// Curvature in the angular variable,
    /// γ(θ) = (r² + 2ṙ² − r r̈) / (r² + ṙ²)^{3/2}.
    pub fn curvature_theta(&self, theta: f64) -> Result<f64> {
        if !self.contains_theta(theta) {
            return Err(Error::Range(format!("curvature: θ = {theta} outside the profile range")));
        }
        let r = self.r(theta);
        let dr = self.dr(theta);
        let ddr = self.ddr(theta);
        let g2 = r * r + dr * dr;
        if g2 == 0.0 || !g2.is_finite() || !ddr.is_finite() {
            return Err(Error::Domain(format!(
                "curvature undefined at θ = {theta}: r and ṙ vanish simultaneously or derivatives blow up"
            )));
        }
        Ok((r * r + 2.0 * dr * dr - r * ddr) / g2.powf(1.5))
    }

    /// Invert the radius along the curve: smallest θ in range with r(θ) = ρ.
    pub fn theta_of_radius(&self, rho: f64) -> Result<f64> {
        if rho < 0.0 {
            return Err(Error::Domain("theta_of_radius: negative radius".into()));
        }
        match &self.family {
            ProfileFamily::Power { scale, exponent } => Ok((rho / scale).powf(1.0 / exponent)),
            ProfileFamily::Archimedean { scale } => Ok(rho / scale),
            ProfileFamily::Tabulated { interp } => {
                let (lo, hi) = (interp.x_min(), interp.x_max());
                if rho < interp.eval(lo) || rho > interp.eval(hi) {
                    return Err(Error::Range(format!("theta_of_radius: ρ = {rho} outside the tabulated radii")));
                }
                crate::numerics::rootfind::brent(|t| interp.eval(t) - rho, lo, hi, 1e-13 * (1.0 + hi), 200)
            }
        }
    }

    /// Regularity demanded of profiles entering the geometry cache: r
    /// strictly increasing and concave (r̈ ≤ 0) with bounded second
    /// derivative on [lo, hi]. The origin is exempt via `theta_min`.
    pub fn check_concavity(&self, lo: f64, hi: f64) -> Result<()> {
        let lo = lo.max(self.theta_min);
        if !(hi > lo) {
            return Err(Error::Domain("check_concavity: empty angle range".into()));
        }
        let n = 257;
        for i in 0..n {
            let t = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            let dr = self.dr(t);
            let ddr = self.ddr(t);
            if !(dr > 0.0) {
                return Err(Error::Assumption(format!("r is not strictly increasing at θ = {t}")));
            }
            if !ddr.is_finite() {
                return Err(Error::Assumption(format!("r̈ unbounded at θ = {t}")));
            }
            if ddr > 1e-9 * (1.0 + dr.abs()) {
                return Err(Error::Assumption(format!("r̈ = {ddr:.3e} > 0 at θ = {t}: coils do not shrink")));
            }
        }
        Ok(())
    }

    /// Classify by the monotonicity and limit of the width function a(θ).
    pub fn classify(&self) -> Result<SpiralClass> {
        let (range_lo, range_hi) = self.theta_range();
        let lo = (2.0 * TAU).max(range_lo + TAU);
        let hi = if range_hi.is_finite() { range_hi } else { 1e6 };
        if !(hi > lo * 1.5) {
            return Err(Error::Range("classify: profile range too short to scan the width function".into()));
        }
        // geometric scan grid
        let n = 160;
        let mut thetas = Vec::with_capacity(n);
        let mut widths = Vec::with_capacity(n);
        for i in 0..n {
            let t = lo * (hi / lo).powf(i as f64 / (n - 1) as f64);
            thetas.push(t);
            widths.push(self.width(t)?);
        }
        let mut increasing = true;
        let mut decreasing = true;
        for i in 0..n - 1 {
            let (w0, w1) = (widths[i], widths[i + 1]);
            // the difference quotient r(θ) − r(θ−2π) cancels ~θ/2π digits
            let tol = 1e-9 * (w0.abs() + w1.abs()) + 4.0 * f64::EPSILON * self.r(thetas[i + 1]).abs() / TAU;
            if w1 > w0 + tol {
                decreasing = false;
            }
            if w1 < w0 - tol {
                increasing = false;
            }
        }
        if !increasing && !decreasing {
            return Err(Error::NotSimple("width function a(θ) is not monotone on the scan range".into()));
        }
        let first = widths[0];
        let mid = widths[n / 2];
        let last = widths[n - 1];
        if decreasing && last < 0.05 * first {
            return Ok(SpiralClass::StrictlyShrinking);
        }
        if increasing && last > 20.0 * first {
            return Ok(SpiralClass::StrictlyExpanding);
        }
        // finite nonzero limit when the trailing samples have flattened out
        if (last - mid).abs() <= 0.02 * last.abs().max(f64::MIN_POSITIVE) {
            return Ok(SpiralClass::AsymptoticallyArchimedean);
        }
        Ok(if increasing { SpiralClass::Expanding } else { SpiralClass::Shrinking })
    }
}

/// a(θ) for the asymptotic estimate d(s) ≤ 2π a(θ(s)); exposed at module
/// level mirroring the other free-function operations.
pub fn width(profile: &SpiralProfile, theta: f64) -> Result<f64> {
    profile.width(theta)
}

pub fn arc_length(profile: &SpiralProfile, theta: f64) -> Result<f64> {
    profile.arc_length(theta)
}

pub fn curvature_theta(profile: &SpiralProfile, theta: f64) -> Result<f64> {
    profile.curvature_theta(theta)
}

pub fn classify(profile: &SpiralProfile) -> Result<SpiralClass> {
    profile.classify()
}

/// Closed-form curvature of the Archimedean spiral r = cθ in the angular
/// variable: (θ² + 2)/(c (θ² + 1)^{3/2}).
pub fn archimedean_curvature(scale: f64, theta: f64) -> f64 {
    (theta * theta + 2.0) / (scale * (theta * theta + 1.0).powf(1.5))
}
