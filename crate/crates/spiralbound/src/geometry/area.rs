//! Area of the central region: the part of the plane (minus the curve) not
//! covered by the parallel-coordinate strip {s > s0, 0 < u < d(s)}.

use super::cache::GeometryCache;
use super::fermi;
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

/// Stratified-sampling area estimate with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct AreaEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Is `p` inside the Fermi strip of this cache (s > s0, 0 < u < d(s))?
///
/// The perpendicular foot on the coil immediately outside `p` is located by
/// a radius-localized scan; `p` is in the strip iff it lies on the inward
/// side at a distance below the normal width there.
pub fn strip_membership(cache: &GeometryCache, p: (f64, f64)) -> Result<bool> {
    let profile = cache
        .profile()
        .ok_or_else(|| Error::Range("strip membership needs a profile-backed cache".into()))?;
    let rho = p.0.hypot(p.1);
    let phi = p.1.atan2(p.0);
    let tau_rho = match profile.theta_of_radius(rho) {
        Ok(t) => t,
        Err(_) => return Ok(false),
    };
    let m = ((tau_rho - phi) / TAU).round();
    let (range_lo, range_hi) = profile.theta_range();
    for k in [m - 1.0, m, m + 1.0] {
        let tau_c = phi + TAU * k;
        if tau_c <= range_lo || tau_c > range_hi {
            continue;
        }
        let window = ((tau_c - PI / 2.0).max(range_lo), (tau_c + PI / 2.0).min(range_hi));
        let Ok((dist, arg)) = fermi::distance_to_curve(profile, p, window) else {
            continue;
        };
        let (gx, gy) = profile.point(arg);
        let n = fermi::inward_normal(profile, arg);
        let u = (p.0 - gx) * n.0 + (p.1 - gy) * n.1;
        if u <= 0.0 {
            continue; // p lies outward of this coil
        }
        // require a genuine perpendicular foot
        if (u - dist).abs() > 1e-6 * (1.0 + dist) {
            continue;
        }
        let s = cache.s_at(arg)?;
        if s > cache.s0() && u < cache.d_interp(s) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Area of the central region by stratified grid counting inside the
/// bounding disc of radius r(θ(s₀)). The relative standard error of the
/// estimate is reported alongside; synthetic caches have no central region.
pub fn central_area(cache: &GeometryCache, mc_samples: usize, seed: u64) -> Result<AreaEstimate> {
    if cache.is_synthetic() {
        return Ok(AreaEstimate { value: 0.0, std_error: 0.0 });
    }
    let profile = cache.profile().unwrap();
    let theta0 = cache.theta_of_arc(cache.s0())?;
    let radius = profile.r(theta0);
    let half = radius * (1.0 + 1e-9);

    let per_cell = 8usize;
    let k = (((mc_samples.max(256) / per_cell) as f64).sqrt().floor() as usize).max(8);
    let cell = 2.0 * half / k as f64;
    let cell_area = cell * cell;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut value = 0.0;
    let mut variance = 0.0;
    for iy in 0..k {
        for ix in 0..k {
            let x0 = -half + ix as f64 * cell;
            let y0 = -half + iy as f64 * cell;
            // cells fully outside the bounding disc cannot intersect the region
            let cx = x0 + 0.5 * cell;
            let cy = y0 + 0.5 * cell;
            if cx.hypot(cy) > radius + cell {
                continue;
            }
            let mut hits = 0usize;
            for _ in 0..per_cell {
                let px = x0 + rng.gen::<f64>() * cell;
                let py = y0 + rng.gen::<f64>() * cell;
                if px.hypot(py) > radius {
                    continue;
                }
                if !strip_membership(cache, (px, py))? {
                    hits += 1;
                }
            }
            let p_hat = hits as f64 / per_cell as f64;
            value += p_hat * cell_area;
            variance += p_hat * (1.0 - p_hat) / per_cell as f64 * cell_area * cell_area;
        }
    }
    Ok(AreaEstimate { value, std_error: variance.sqrt() })
}
