//! Weyl-type eigenvalue counting for horn-shaped regions
//! {(s, u) : s > 0, 0 < u < f(s)} with f decreasing to zero, and the
//! chain-of-estimates lower bound used in the sharpness discussion.

use crate::bound::{threshold_set_general, width_integral_for};
use crate::error::{Error, Result};
use crate::geometry::GeometryCache;
use crate::numerics::interp::Pchip;
use crate::numerics::quadrature;
use std::f64::consts::PI;

/// Width profile of a horn: right-continuous, nonincreasing, tending to zero.
#[derive(Debug, Clone)]
pub enum HornProfile {
    /// f(s) = amplitude · e^{-rate·s}.
    Exponential { amplitude: f64, rate: f64 },
    /// f(s) = coefficient · (s + shift)^{-exponent}.
    Power { coefficient: f64, exponent: f64, shift: f64 },
    /// f ≡ height on [0, length), zero afterwards (rectangle-like).
    Constant { height: f64, length: f64 },
    /// Monotone cubic through decreasing samples; zero beyond the last node.
    Tabulated { interp: Pchip },
}

impl HornProfile {
    pub fn exponential(amplitude: f64, rate: f64) -> Result<Self> {
        if !(amplitude > 0.0 && rate > 0.0) {
            return Err(Error::Domain("exponential horn needs positive amplitude and rate".into()));
        }
        Ok(HornProfile::Exponential { amplitude, rate })
    }

    pub fn power(coefficient: f64, exponent: f64, shift: f64) -> Result<Self> {
        if !(coefficient > 0.0 && exponent > 0.0 && shift > 0.0) {
            return Err(Error::Domain("power horn needs positive coefficient, exponent and shift".into()));
        }
        Ok(HornProfile::Power { coefficient, exponent, shift })
    }

    pub fn constant(height: f64, length: f64) -> Result<Self> {
        if !(height > 0.0 && length > 0.0) {
            return Err(Error::Domain("constant horn needs positive height and length".into()));
        }
        Ok(HornProfile::Constant { height, length })
    }

    pub fn tabulated(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::Domain("tabulated horn needs at least 4 samples".into()));
        }
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0) || !(w[1].1 < w[0].1) {
                return Err(Error::Domain("tabulated horn samples must decrease strictly".into()));
            }
        }
        if !(samples.last().unwrap().1 > 0.0) {
            return Err(Error::Domain("tabulated horn widths must stay positive".into()));
        }
        let x: Vec<f64> = samples.iter().map(|p| p.0).collect();
        let y: Vec<f64> = samples.iter().map(|p| p.1).collect();
        Ok(HornProfile::Tabulated { interp: Pchip::new(x, y)? })
    }

    /// Width at arc parameter s ≥ 0.
    pub fn eval(&self, s: f64) -> f64 {
        if s < 0.0 {
            return 0.0;
        }
        match self {
            HornProfile::Exponential { amplitude, rate } => amplitude * (-rate * s).exp(),
            HornProfile::Power { coefficient, exponent, shift } => coefficient * (s + shift).powf(-exponent),
            HornProfile::Constant { height, length } => {
                if s < *length {
                    *height
                } else {
                    0.0
                }
            }
            HornProfile::Tabulated { interp } => {
                if s < interp.x_min() {
                    interp.eval(interp.x_min())
                } else if s > interp.x_max() {
                    0.0
                } else {
                    interp.eval(s)
                }
            }
        }
    }

    /// Largest s with f(s) ≥ threshold (0 when even f(0) is below it).
    pub fn support_end(&self, threshold: f64) -> f64 {
        if self.eval(0.0) < threshold {
            return 0.0;
        }
        match self {
            HornProfile::Exponential { amplitude, rate } => ((amplitude / threshold).ln() / rate).max(0.0),
            HornProfile::Power { coefficient, exponent, shift } => {
                ((coefficient / threshold).powf(1.0 / exponent) - shift).max(0.0)
            }
            HornProfile::Constant { length, .. } => *length,
            HornProfile::Tabulated { interp } => {
                if self.eval(interp.x_max()) >= threshold {
                    return interp.x_max();
                }
                crate::numerics::rootfind::brent(
                    |s| self.eval(s) - threshold,
                    interp.x_min(),
                    interp.x_max(),
                    1e-12 * (1.0 + interp.x_max()),
                    200,
                )
                .unwrap_or(interp.x_max())
            }
        }
    }

    /// Numerical witness that ∫₀^∞ exp(-t / f(s)²) ds converges for each
    /// sampled t > 0 (marching panels with a relative tail cutoff).
    pub fn check_integrability(&self, ts: &[f64]) -> Result<()> {
        for &t in ts {
            if !(t > 0.0) {
                return Err(Error::Domain("integrability check needs positive t".into()));
            }
            let mut total = 0.0;
            let mut s = 0.0;
            let mut converged = false;
            for _ in 0..1_000_000 {
                let (panel, _) = quadrature::integrate(
                    |x| {
                        let f = self.eval(x);
                        if f <= 0.0 {
                            0.0
                        } else {
                            (-t / (f * f)).exp()
                        }
                    },
                    s,
                    s + 1.0,
                    1e-9,
                    1e-30,
                )?;
                total += panel;
                s += 1.0;
                if panel <= 1e-14 * total.max(f64::MIN_POSITIVE) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::Domain(format!(
                    "integrability witness failed at t = {t}: the horn does not close fast enough"
                )));
            }
        }
        Ok(())
    }
}

/// The counting integral
/// ∫₀^∞ Σ_k ((λ/π² − k²/f(s)²)₊)^{1/2} ds, the large-λ asymptotic count of
/// Dirichlet eigenvalues below λ on the horn. Relative error ≤ 1e-6.
pub fn weyl_horn_count(horn: &HornProfile, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain("weyl_horn_count: λ must be positive".into()));
    }
    horn.check_integrability(&[1.0])?;
    let sqrt_lambda = lambda.sqrt();
    let k_max = (sqrt_lambda * horn.eval(0.0) / PI).floor() as usize;
    if k_max == 0 {
        return Ok(0.0);
    }
    let integrand = |s: f64| {
        let f = horn.eval(s);
        if f <= 0.0 {
            return 0.0;
        }
        let kk = (sqrt_lambda * f / PI).floor() as usize;
        let mut acc = 0.0;
        for k in 1..=kk {
            let v = lambda / (PI * PI) - (k as f64 / f) * (k as f64 / f);
            if v > 0.0 {
                acc += v.sqrt();
            }
        }
        acc
    };
    // panels between the kinks where the number of admissible modes changes
    let mut knots: Vec<f64> = (1..=k_max)
        .map(|k| horn.support_end(k as f64 * PI / sqrt_lambda))
        .collect();
    knots.push(0.0);
    knots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    knots.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let mut total = 0.0;
    for w in knots.windows(2) {
        if w[1] - w[0] < 1e-14 {
            continue;
        }
        let (v, _) = quadrature::integrate(integrand, w[0], w[1], 1e-8, 1e-12)?;
        total += v;
    }
    Ok(total)
}

/// Lower estimate of the counting integral: (Λ/2π²) ∫_{f ≥ π/√Λ} f(s) ds.
pub fn count_lower_estimate(horn: &HornProfile, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain("count_lower_estimate: Λ must be positive".into()));
    }
    let s_end = horn.support_end(PI / lambda.sqrt());
    if s_end <= 0.0 {
        return Ok(0.0);
    }
    let (v, _) = quadrature::integrate(|s| horn.eval(s), 0.0, s_end, 1e-10, 1e-14)?;
    Ok(lambda / (2.0 * PI * PI) * v)
}

/// Same lower estimate driven by a spiral geometry cache, with d(s) in place
/// of the horn width: (Λ/2π²) ∫_{d ≥ π/√Λ} d(s) ds.
pub fn count_lower_estimate_cache(cache: &GeometryCache, lambda: f64) -> Result<f64> {
    let set = threshold_set_general(cache, lambda, 1.0, false)?;
    let wi = width_integral_for(cache, &set)?;
    Ok(lambda / (2.0 * PI * PI) * wi)
}
