//! Rasterization of the computational domains onto a uniform lattice.
//! A node is active iff it lies inside the domain with clearance h/2 from
//! the Dirichlet curve; inactive neighbors encode the boundary zeros.

use crate::error::{Error, Result};
use crate::geometry::SpiralProfile;
use crate::horn::HornProfile;
use std::f64::consts::{PI, TAU};

/// Active-node lattice for the five-point operator.
#[derive(Debug, Clone)]
pub struct DomainMask {
    pub h: f64,
    /// Position of lattice node (0, 0).
    pub origin: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    /// Dense node-index map, -1 for inactive nodes.
    pub node_index: Vec<i32>,
    /// Active nodes (ix, iy) in index order.
    pub nodes: Vec<(u32, u32)>,
    /// Truncation radius for disc-shaped masks (0 otherwise).
    pub r_max: f64,
}

impl DomainMask {
    pub fn active_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn position(&self, k: usize) -> (f64, f64) {
        let (ix, iy) = self.nodes[k];
        (self.origin.0 + ix as f64 * self.h, self.origin.1 + iy as f64 * self.h)
    }

    /// Node index at lattice coordinates, if the node exists and is active.
    pub fn index_at(&self, ix: i64, iy: i64) -> Option<usize> {
        if ix < 0 || iy < 0 || ix >= self.nx as i64 || iy >= self.ny as i64 {
            return None;
        }
        let v = self.node_index[iy as usize * self.nx + ix as usize];
        if v < 0 {
            None
        } else {
            Some(v as usize)
        }
    }

    fn from_predicate(
        h: f64,
        origin: (f64, f64),
        nx: usize,
        ny: usize,
        r_max: f64,
        mut active: impl FnMut(f64, f64) -> bool,
    ) -> Result<Self> {
        let mut node_index = vec![-1i32; nx * ny];
        let mut nodes = Vec::new();
        for iy in 0..ny {
            let y = origin.1 + iy as f64 * h;
            for ix in 0..nx {
                let x = origin.0 + ix as f64 * h;
                if active(x, y) {
                    node_index[iy * nx + ix] = nodes.len() as i32;
                    nodes.push((ix as u32, iy as u32));
                }
            }
        }
        if nodes.is_empty() {
            return Err(Error::Domain("mask has no active nodes".into()));
        }
        Ok(DomainMask { h, origin, nx, ny, node_index, nodes, r_max })
    }

    /// Interior lattice of the rectangle (0, width) x (0, height); `h` must
    /// divide both sides (within roundoff).
    pub fn rect(width: f64, height: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && width > h && height > h) {
            return Err(Error::Domain("rect mask: need h > 0 and sides > h".into()));
        }
        let nx_cells = (width / h).round();
        let ny_cells = (height / h).round();
        if (nx_cells * h - width).abs() > 1e-9 * width || (ny_cells * h - height).abs() > 1e-9 * height {
            return Err(Error::Domain("rect mask: h must divide both side lengths".into()));
        }
        let nx = nx_cells as usize - 1;
        let ny = ny_cells as usize - 1;
        Self::from_predicate(h, (h, h), nx, ny, 0.0, |_, _| true)
    }

    /// The plane cut by the spiral curve, truncated by a Dirichlet circle of
    /// radius `r_max`: active iff |p| < r_max and dist(p, Γ) > h/2.
    pub fn spiral(profile: &SpiralProfile, h: f64, r_max: f64) -> Result<Self> {
        if !(h > 0.0 && r_max > 4.0 * h) {
            return Err(Error::Domain("spiral mask: need h > 0 and r_max spanning several cells".into()));
        }
        if profile.r(profile.theta_range().1.min(1e12)) < r_max {
            return Err(Error::Domain("spiral mask: profile range does not reach the truncation disc".into()));
        }
        let k0 = (r_max / h).ceil() as usize + 1;
        let n_side = 2 * k0 + 1;
        let origin = (-(k0 as f64) * h, -(k0 as f64) * h);
        let half_h = 0.5 * h;
        Self::from_predicate(h, origin, n_side, n_side, r_max, |x, y| {
            if x.hypot(y) >= r_max {
                return false;
            }
            spiral_distance(profile, (x, y), 2.0 * h) > half_h
        })
    }

    /// Horn region {0 < s < s_max, 0 < u < f(s)} with node-removal clearance
    /// h/2 below the width curve.
    pub fn horn(horn: &HornProfile, h: f64, s_max: f64) -> Result<Self> {
        if !(h > 0.0 && s_max > 4.0 * h) {
            return Err(Error::Domain("horn mask: need h > 0 and s_max spanning several cells".into()));
        }
        let nx = (s_max / h).ceil() as usize - 1;
        let f0 = horn.eval(0.0);
        let ny = (f0 / h).ceil() as usize;
        Self::from_predicate(h, (h, h), nx, ny, 0.0, |s, u| u < horn.eval(s) - 0.5 * h)
    }
}

/// Distance from `p` to the spiral curve, localized by radius: only the coil
/// branches passing near |p| (and the center region) are searched.
pub fn spiral_distance(profile: &SpiralProfile, p: (f64, f64), slack: f64) -> f64 {
    let rho = p.0.hypot(p.1);
    // the curve starts at the origin
    let mut best: f64 = rho;
    let (range_lo, range_hi) = profile.theta_range();

    let dist2 = |tau: f64| {
        let (x, y) = profile.point(tau);
        (x - p.0) * (x - p.0) + (y - p.1) * (y - p.1)
    };
    let refine = |a: f64, b: f64| -> f64 {
        // golden-section, robust where the derivative of r blows up
        const INV_PHI: f64 = 0.618_033_988_749_894_9;
        let (mut a, mut b) = (a, b);
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let mut fc = dist2(c);
        let mut fd = dist2(d);
        for _ in 0..60 {
            if (b - a).abs() <= 1e-11 * (1.0 + b.abs()) {
                break;
            }
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                fc = dist2(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                fd = dist2(d);
            }
        }
        dist2(0.5 * (a + b)).sqrt()
    };

    let phi = p.1.atan2(p.0);
    if let Ok(tau_rho) = profile.theta_of_radius(rho) {
        let m = ((tau_rho - phi) / TAU).round();
        for k in [m - 1.0, m, m + 1.0] {
            let tau_c = phi + TAU * k;
            if tau_c < range_lo - PI || tau_c > range_hi {
                continue;
            }
            let a = (tau_c - PI / 2.0).max(range_lo);
            let b = (tau_c + PI / 2.0).min(range_hi);
            if b > a {
                best = best.min(refine(a, b));
            }
        }
    }
    // the innermost coils wind tightly; sweep them densely when p is nearby
    let inner_limit = 3.5 * PI;
    if rho < profile.r(inner_limit.min(range_hi)) + slack {
        let hi = inner_limit.min(range_hi);
        let n = 384;
        let mut best_tau = range_lo;
        let mut best_d2 = f64::INFINITY;
        for i in 0..=n {
            let tau = range_lo + (hi - range_lo) * i as f64 / n as f64;
            let d2 = dist2(tau);
            if d2 < best_d2 {
                best_d2 = d2;
                best_tau = tau;
            }
        }
        let step = (hi - range_lo) / n as f64;
        best = best.min(refine((best_tau - step).max(range_lo), (best_tau + step).min(hi)));
    }
    best
}

/// Exact eigenvalues of the five-point operator on the interior lattice of a
/// (width x height) rectangle with spacing h, ascending:
/// (4/h²)(sin²(m π h / (2 width)) + sin²(n π h / (2 height))).
pub fn rect_fd_spectrum(width: f64, height: f64, h: f64, below: f64) -> Vec<f64> {
    let nx = (width / h).round() as usize - 1;
    let ny = (height / h).round() as usize - 1;
    let mut out = Vec::new();
    for m in 1..=nx {
        for n in 1..=ny {
            let sm = (m as f64 * PI * h / (2.0 * width)).sin();
            let sn = (n as f64 * PI * h / (2.0 * height)).sin();
            let lam = 4.0 / (h * h) * (sm * sm + sn * sn);
            if lam < below {
                out.push(lam);
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fermi;
    use rand::{Rng, SeedableRng};

    #[test]
    fn unit_square_quarter_spacing_has_nine_nodes() {
        let mask = DomainMask::rect(1.0, 1.0, 0.25).unwrap();
        assert_eq!(mask.active_count(), 9);
    }

    #[test]
    fn halving_h_roughly_quadruples_the_count() {
        let profile = SpiralProfile::archimedean(1.0).unwrap();
        let c1 = DomainMask::spiral(&profile, 0.4, 6.0).unwrap().active_count();
        let c2 = DomainMask::spiral(&profile, 0.2, 6.0).unwrap().active_count();
        let ratio = c2 as f64 / c1 as f64;
        assert!((ratio - 4.0).abs() <= 0.4, "count ratio {ratio}");
    }

    #[test]
    fn no_active_node_hugs_the_curve() {
        let profile = SpiralProfile::archimedean(1.0).unwrap();
        let h = 0.25;
        let r_max = 8.0 * PI;
        let mask = DomainMask::spiral(&profile, h, r_max).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let theta_max = profile.theta_of_radius(r_max).unwrap();
        for _ in 0..1000 {
            let theta = rng.gen_range(0.0..theta_max);
            let (cx, cy) = profile.point(theta);
            // audit the 3x3 lattice neighborhood of the curve point
            let ix0 = ((cx - mask.origin.0) / h).floor() as i64;
            let iy0 = ((cy - mask.origin.1) / h).floor() as i64;
            for dy in -1..=2 {
                for dx in -1..=2 {
                    if let Some(k) = mask.index_at(ix0 + dx, iy0 + dy) {
                        let (px, py) = mask.position(k);
                        let dist = (px - cx).hypot(py - cy);
                        assert!(
                            dist > 0.5 * h - 1e-12,
                            "active node at distance {dist} < h/2 from the curve"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn localized_distance_agrees_with_global_scan() {
        let profile = SpiralProfile::power(0.5, 0.5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let x = rng.gen_range(-3.0..3.0);
            let y = rng.gen_range(-3.0..3.0);
            let local = spiral_distance(&profile, (x, y), 0.1);
            let hi = profile.theta_of_radius(5.0).unwrap();
            let (global, _) = fermi::distance_to_curve(&profile, (x, y), (0.0, hi)).unwrap();
            assert!(
                (local - global).abs() <= 1e-6 * (1.0 + global),
                "localized {local} vs global {global} at ({x}, {y})"
            );
        }
    }

    #[test]
    fn horn_mask_respects_the_width_curve() {
        let horn = HornProfile::exponential(1.0, 1.0).unwrap();
        let h = 0.05;
        let mask = DomainMask::horn(&horn, h, 4.0).unwrap();
        for k in 0..mask.active_count() {
            let (s, u) = mask.position(k);
            assert!(u < horn.eval(s) - 0.5 * h + 1e-12);
            assert!(s > 0.0 && u > 0.0);
        }
    }

    #[test]
    fn empty_mask_is_an_error() {
        let horn = HornProfile::exponential(0.05, 1.0).unwrap();
        assert!(DomainMask::horn(&horn, 0.04, 1.0).is_err());
    }

    #[test]
    fn rect_requires_divisible_sides() {
        assert!(DomainMask::rect(1.0, 1.0, 0.3).is_err());
    }

    #[test]
    fn rect_fd_spectrum_smallest_value() {
        let h = 0.25f64;
        let spec = rect_fd_spectrum(1.0, 1.0, h, 1e9);
        let expect = 8.0 / (h * h) * (PI * h / 2.0).sin().powi(2);
        assert!((spec[0] - expect).abs() < 1e-10);
        assert_eq!(spec.len(), 9);
    }
}
