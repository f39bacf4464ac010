//! Fermi (parallel) coordinates: the inward-normal frame on the spiral, the
//! normal-width construction d(s), and point-to-curve distances.

use super::profile::SpiralProfile;
use crate::error::{Error, Result};
use std::f64::consts::{PI, TAU};

/// Unit inward normal at parameter θ:
/// N = (−(ṙ sinθ + r cosθ), ṙ cosθ − r sinθ) / √(ṙ² + r²).
pub fn inward_normal(profile: &SpiralProfile, theta: f64) -> (f64, f64) {
    let r = profile.r(theta);
    let dr = profile.dr(theta);
    let g = (r * r + dr * dr).sqrt();
    (-(dr * theta.sin() + r * theta.cos()) / g, (dr * theta.cos() - r * theta.sin()) / g)
}

/// Unit tangent at parameter θ (direction of increasing θ).
pub fn unit_tangent(profile: &SpiralProfile, theta: f64) -> (f64, f64) {
    let r = profile.r(theta);
    let dr = profile.dr(theta);
    let g = (r * r + dr * dr).sqrt();
    ((dr * theta.cos() - r * theta.sin()) / g, (dr * theta.sin() + r * theta.cos()) / g)
}

/// The parallel-coordinate map: the point at distance u ≥ 0 from Γ(θ) along
/// the inward normal,
/// x₁ = r cosθ − u (ṙ sinθ + r cosθ)/√(ṙ²+r²),
/// x₂ = r sinθ + u (ṙ cosθ − r sinθ)/√(ṙ²+r²).
pub fn fermi_point(profile: &SpiralProfile, theta: f64, u: f64) -> (f64, f64) {
    let (px, py) = profile.point(theta);
    let (nx, ny) = inward_normal(profile, theta);
    (px + u * nx, py + u * ny)
}

/// Intersection of the inward normal ray from Γ(θ) with the coil whose
/// angular offset is `gap` behind θ (the previous coil of the same spiral for
/// `gap = 2π`; a preceding arm for multi-arm geometries).
#[derive(Debug, Clone, Copy)]
pub struct NormalHit {
    /// Distance along the inward normal to the first intersection.
    pub u: f64,
    /// Parameter of the intersected curve point (the target point sits at
    /// polar angle τ + gap with radius r(τ)).
    pub tau: f64,
}

fn target_point(profile: &SpiralProfile, tau: f64, gap: f64) -> (f64, f64) {
    let r = profile.r(tau);
    let ang = tau + gap;
    (r * ang.cos(), r * ang.sin())
}

fn target_deriv(profile: &SpiralProfile, tau: f64, gap: f64) -> (f64, f64) {
    let r = profile.r(tau);
    let dr = profile.dr(tau);
    let ang = tau + gap;
    (dr * ang.cos() - r * ang.sin(), dr * ang.sin() + r * ang.cos())
}

/// Coarse angular scan over a window around τ ≈ θ − gap followed by a
/// two-variable Newton iteration on the intersection system
/// F(τ, u) = T(τ) − P − u N = 0. Returns the smallest positive crossing.
pub fn normal_intersection(
    profile: &SpiralProfile,
    theta: f64,
    gap: f64,
    half_window: f64,
) -> Result<NormalHit> {
    let p = profile.point(theta);
    let n = inward_normal(profile, theta);
    let (range_lo, _) = profile.theta_range();
    let scale = profile.r(theta).max(1e-300);

    let mut window = half_window;
    for attempt in 0..2 {
        let lo = (theta - gap - window).max(range_lo);
        let hi = (theta - gap + window).min(theta - 1e-9);
        if hi > lo {
            if let Some(hit) = scan_and_polish(profile, theta, gap, p, n, lo, hi, scale)? {
                return Ok(hit);
            }
        }
        if attempt == 0 {
            // widen once before giving up
            window = 3.0 * half_window;
        }
    }
    Err(Error::Geometry(format!(
        "inward normal at θ = {theta} does not meet the coil {gap:.3} behind within the scan window \
         (profile may not be shrinking there, or the point lies before the valid cache start)"
    )))
}

#[allow(clippy::too_many_arguments)]
fn scan_and_polish(
    profile: &SpiralProfile,
    theta: f64,
    gap: f64,
    p: (f64, f64),
    n: (f64, f64),
    lo: f64,
    hi: f64,
    scale: f64,
) -> Result<Option<NormalHit>> {
    // A target point T(τ) lies on the normal ray iff cross(N, T − P) = 0 and
    // (T − P)·N > 0.
    let cross = |tau: f64| {
        let t = target_point(profile, tau, gap);
        n.0 * (t.1 - p.1) - n.1 * (t.0 - p.0)
    };
    let along = |tau: f64| {
        let t = target_point(profile, tau, gap);
        (t.0 - p.0) * n.0 + (t.1 - p.1) * n.1
    };

    let samples = 400;
    let brackets = crate::numerics::rootfind::scan_brackets(cross, lo, hi, samples);
    let mut best: Option<NormalHit> = None;
    for (a, b) in brackets {
        let tau0 = crate::numerics::rootfind::brent(cross, a, b, 1e-12 * (1.0 + theta), 200)?;
        let u0 = along(tau0);
        if u0 <= 0.0 {
            continue;
        }
        if let Some(hit) = newton_polish(profile, gap, p, n, tau0, u0, scale) {
            if best.is_none_or(|b| hit.u < b.u) {
                best = Some(hit);
            }
        }
    }
    Ok(best)
}

fn newton_polish(
    profile: &SpiralProfile,
    gap: f64,
    p: (f64, f64),
    n: (f64, f64),
    mut tau: f64,
    mut u: f64,
    scale: f64,
) -> Option<NormalHit> {
    let tol = 1e-10 * scale;
    for _ in 0..40 {
        let t = target_point(profile, tau, gap);
        let f = (t.0 - p.0 - u * n.0, t.1 - p.1 - u * n.1);
        let res = f.0.hypot(f.1);
        if res <= tol {
            return Some(NormalHit { u, tau });
        }
        let dt = target_deriv(profile, tau, gap);
        // J = [dT/dτ, −N]
        let det = dt.0 * (-n.1) - (-n.0) * dt.1;
        if det.abs() < 1e-300 {
            return None;
        }
        let dtau = (-f.0 * (-n.1) - (-n.0) * (-f.1)) / det;
        let du = (dt.0 * (-f.1) - (-f.0) * dt.1) / det;
        tau += dtau;
        u += du;
        if !tau.is_finite() || !u.is_finite() {
            return None;
        }
    }
    // accept only a genuinely converged intersection
    let t = target_point(profile, tau, gap);
    let res = (t.0 - p.0 - u * n.0).hypot(t.1 - p.1 - u * n.1);
    if res <= tol && u > 0.0 {
        Some(NormalHit { u, tau })
    } else {
        None
    }
}

/// Dense-sampling oracle for the normal width: walk the target coil with
/// `samples` nodes over the same window and locate the first ray crossing by
/// linear interpolation of the cross product. Used by tests; kept here so
/// integration tests and the acceptance suite share one definition.
pub fn normal_intersection_bruteforce(
    profile: &SpiralProfile,
    theta: f64,
    gap: f64,
    half_window: f64,
    samples: usize,
) -> Option<f64> {
    let p = profile.point(theta);
    let n = inward_normal(profile, theta);
    let (range_lo, _) = profile.theta_range();
    let lo = (theta - gap - half_window).max(range_lo);
    let hi = (theta - gap + half_window).min(theta - 1e-9);
    if hi <= lo {
        return None;
    }
    let cross = |tau: f64| {
        let t = target_point(profile, tau, gap);
        n.0 * (t.1 - p.1) - n.1 * (t.0 - p.0)
    };
    let along = |tau: f64| {
        let t = target_point(profile, tau, gap);
        (t.0 - p.0) * n.0 + (t.1 - p.1) * n.1
    };
    let mut best: Option<f64> = None;
    let step = (hi - lo) / (samples - 1) as f64;
    let mut prev_tau = lo;
    let mut prev_c = cross(lo);
    for i in 1..samples {
        let tau = lo + i as f64 * step;
        let c = cross(tau);
        if prev_c == 0.0 || prev_c * c < 0.0 {
            let t = prev_tau + step * prev_c / (prev_c - c);
            let u = along(t);
            if u > 0.0 && best.is_none_or(|b| u < b) {
                best = Some(u);
            }
        }
        prev_tau = tau;
        prev_c = c;
    }
    best
}

/// Minimum distance from `p` to the curve over the parameter window, found by
/// a coarse scan plus local Newton on the foot equation (p − Γ)·Γ' = 0.
/// Returns (distance, argmin parameter).
pub fn distance_to_curve(
    profile: &SpiralProfile,
    p: (f64, f64),
    window: (f64, f64),
) -> Result<(f64, f64)> {
    let (range_lo, range_hi) = profile.theta_range();
    let lo = window.0.max(range_lo);
    let hi = window.1.min(range_hi);
    if !(hi >= lo) {
        return Err(Error::Domain("distance_to_curve: empty window".into()));
    }
    if hi == lo {
        let d = dist(profile, p, lo);
        return Ok((d, lo));
    }

    let dist2 = |tau: f64| {
        let (x, y) = profile.point(tau);
        (x - p.0) * (x - p.0) + (y - p.1) * (y - p.1)
    };

    // coarse scan dense enough to separate coils
    let coils = ((hi - lo) / TAU).ceil().max(1.0);
    let nscan = ((coils * 256.0) as usize).clamp(256, 20_000);
    let step = (hi - lo) / (nscan - 1) as f64;
    let mut best_tau = lo;
    let mut best_d2 = dist2(lo);
    let mut vals = Vec::with_capacity(nscan);
    for i in 0..nscan {
        let tau = lo + i as f64 * step;
        let d2 = dist2(tau);
        vals.push(d2);
        if d2 < best_d2 {
            best_d2 = d2;
            best_tau = tau;
        }
    }
    // refine every local minimum that comes close to the global one
    let mut out_tau = best_tau;
    let mut out_d2 = best_d2;
    for i in 0..nscan {
        let is_local_min = (i == 0 || vals[i] <= vals[i - 1]) && (i + 1 == nscan || vals[i] <= vals[i + 1]);
        if !is_local_min || vals[i] > best_d2 * 4.0 + 1e-300 {
            continue;
        }
        let a = if i == 0 { lo } else { lo + (i - 1) as f64 * step };
        let b = if i + 1 == nscan { hi } else { lo + (i + 1) as f64 * step };
        let tau = golden_min(&dist2, a, b, 1e-13 * (1.0 + hi.abs()));
        let d2 = dist2(tau);
        if d2 < out_d2 {
            out_d2 = d2;
            out_tau = tau;
        }
    }
    Ok((out_d2.sqrt(), out_tau))
}

fn dist(profile: &SpiralProfile, p: (f64, f64), tau: f64) -> f64 {
    let (x, y) = profile.point(tau);
    (x - p.0).hypot(y - p.1)
}

fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, xtol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Default half-window for the previous-coil scan.
pub const DEFAULT_HALF_WINDOW: f64 = PI / 2.0;
