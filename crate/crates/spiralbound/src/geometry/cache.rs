//! Tabulated spiral geometry: s(θ), θ(s), γ(s), d(s) on an adaptive grid,
//! the admissible start s₀ with d(s)γ(s) < 1 beyond it, and exact-backed
//! pointwise accessors used by the bound evaluation.

use super::fermi::{self, NormalHit};
use super::profile::SpiralProfile;
use crate::error::{Error, Result};
use crate::numerics::derivative;
use crate::numerics::interp::Pchip;
use crate::numerics::quadrature;
use std::f64::consts::TAU;
use std::sync::Arc;

/// Where the cached d(s) and γ(s) come from.
pub enum CacheSource {
    /// Full spiral pipeline from a profile.
    Profile(SpiralProfile),
    /// Direct functions of arc length (no angular parametrization). Used for
    /// model geometries such as d(s) = 1/s; the central region is empty by
    /// definition.
    Synthetic {
        d: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        gamma: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl std::fmt::Debug for CacheSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CacheSource::Profile(p) => f.debug_tuple("Profile").field(p).finish(),
            CacheSource::Synthetic { .. } => f.write_str("Synthetic"),
        }
    }
}

impl Clone for CacheSource {
    fn clone(&self) -> Self {
        match self {
            CacheSource::Profile(p) => CacheSource::Profile(p.clone()),
            CacheSource::Synthetic { d, gamma } => CacheSource::Synthetic { d: d.clone(), gamma: gamma.clone() },
        }
    }
}

/// Options controlling cache construction.
#[derive(Debug, Clone)]
pub struct CacheOptions {
    /// Upper end of the tabulated angular range.
    pub theta_hi: f64,
    /// Optional explicit lower end; by default the builder starts just past
    /// the first angle where the previous-coil intersection is well defined.
    pub theta_lo: Option<f64>,
    /// Safety margin in the admissibility condition d·γ ≤ 1 − margin.
    pub margin: f64,
    /// Relative tolerance for the interpolation grids.
    pub grid_tol: f64,
    /// Angular offset of the coil the inward normal is intersected with
    /// (2π for a single spiral; the inter-arm gap for multi-arm geometry).
    pub gap: f64,
    /// Initial grid size; doubled until the grid tolerance is met.
    pub initial_nodes: usize,
    pub max_nodes: usize,
}

impl Default for CacheOptions {
    fn default() -> Self {
        CacheOptions {
            theta_hi: 64.0 * TAU,
            theta_lo: None,
            margin: 0.05,
            grid_tol: 1e-8,
            gap: TAU,
            initial_nodes: 1024,
            max_nodes: 16384,
        }
    }
}

/// Estimated curvature derivatives in arc length, with error estimates from
/// the Richardson ladder.
#[derive(Debug, Clone, Copy)]
pub struct CurvatureDerivs {
    pub gamma: f64,
    pub d_gamma: f64,
    pub dd_gamma: f64,
    pub err_d_gamma: f64,
    pub err_dd_gamma: f64,
}

/// Immutable tabulated geometry of one spiral arm. Safe to share across
/// threads once built.
#[derive(Debug, Clone)]
pub struct GeometryCache {
    source: CacheSource,
    gap: f64,
    grid_tol: f64,
    margin: f64,
    s_grid: Vec<f64>,
    theta_grid: Vec<f64>,
    d_grid: Vec<f64>,
    gamma_grid: Vec<f64>,
    s_of_theta: Option<Pchip>,
    theta_of_s: Option<Pchip>,
    d_of_s: Pchip,
    gamma_of_s: Pchip,
    s0: f64,
    sup_dgamma: f64,
}

impl GeometryCache {
    /// Build the cache for a spiral profile.
    pub fn build(profile: SpiralProfile, opts: &CacheOptions) -> Result<Self> {
        if !(opts.theta_hi.is_finite()) || opts.theta_hi <= 2.0 * TAU {
            return Err(Error::Domain("cache: theta_hi must be finite and exceed 4π".into()));
        }
        if !(opts.margin > 0.0 && opts.margin < 1.0) {
            return Err(Error::Domain("cache: margin must lie in (0, 1)".into()));
        }
        if !(opts.gap > 0.0 && opts.gap <= TAU) {
            return Err(Error::Geometry("cache: coil gap must lie in (0, 2π]".into()));
        }
        profile.check_concavity(profile.theta_min(), opts.theta_hi)?;

        let theta_start = match opts.theta_lo {
            Some(t) => valid_start(&profile, opts, t)?,
            None => valid_start(&profile, opts, profile.theta_min().max(1.02 * opts.gap))?,
        };
        if theta_start >= opts.theta_hi {
            return Err(Error::Domain("cache: empty angular range after start adjustment".into()));
        }

        let mut n = opts.initial_nodes.max(64);
        loop {
            let cache = Self::build_with_grid(&profile, opts, theta_start, n)?;
            if cache.grid_converged(&profile)? || n >= opts.max_nodes {
                if n >= opts.max_nodes && !cache.grid_converged(&profile)? {
                    return Err(Error::Numerical(format!(
                        "cache grid did not reach tolerance {} with {} nodes",
                        opts.grid_tol, n
                    )));
                }
                return Ok(cache);
            }
            n *= 2;
        }
    }

    fn build_with_grid(profile: &SpiralProfile, opts: &CacheOptions, theta_start: f64, n: usize) -> Result<Self> {
        let ratio = opts.theta_hi / theta_start;
        let mut theta_grid = Vec::with_capacity(n);
        for i in 0..n {
            theta_grid.push(theta_start * ratio.powf(i as f64 / (n - 1) as f64));
        }
        let mut s_grid = Vec::with_capacity(n);
        let mut d_grid = Vec::with_capacity(n);
        let mut gamma_grid = Vec::with_capacity(n);

        let mut s_acc = profile.arc_length(theta_start)?;
        let mut warm: Option<NormalHit> = None;
        for (i, &th) in theta_grid.iter().enumerate() {
            if i > 0 {
                s_acc += profile.arc_length_between(theta_grid[i - 1], th)?;
            }
            s_grid.push(s_acc);
            gamma_grid.push(profile.curvature_theta(th)?);
            let hit = intersect_warm(profile, th, opts.gap, warm)?;
            d_grid.push(hit.u);
            warm = Some(hit);
        }

        let s_of_theta = Pchip::new(theta_grid.clone(), s_grid.clone())?;
        let theta_of_s = Pchip::new(s_grid.clone(), theta_grid.clone())?;
        let d_of_s = Pchip::new(s_grid.clone(), d_grid.clone())?;
        let gamma_of_s = Pchip::new(s_grid.clone(), gamma_grid.clone())?;

        let (s0, sup_dgamma) = find_s0_on_grid(&s_grid, &d_grid, &gamma_grid, opts.margin)?;

        Ok(GeometryCache {
            source: CacheSource::Profile(profile.clone()),
            gap: opts.gap,
            grid_tol: opts.grid_tol,
            margin: opts.margin,
            s_grid,
            theta_grid,
            d_grid,
            gamma_grid,
            s_of_theta: Some(s_of_theta),
            theta_of_s: Some(theta_of_s),
            d_of_s,
            gamma_of_s,
            s0,
            sup_dgamma,
        })
    }

    fn grid_converged(&self, profile: &SpiralProfile) -> Result<bool> {
        // Probe interpolation error at a subset of midpoints: round-trip of
        // the angular map and the accuracy of the d(s) table.
        let n = self.theta_grid.len();
        let stride = (n / 96).max(1);
        let s_of_theta = self.s_of_theta.as_ref().unwrap();
        let theta_of_s = self.theta_of_s.as_ref().unwrap();
        let mut warm: Option<NormalHit> = None;
        for i in (0..n - 1).step_by(stride) {
            let th = 0.5 * (self.theta_grid[i] + self.theta_grid[i + 1]);
            let round = theta_of_s.eval(s_of_theta.eval(th));
            if (round - th).abs() > self.grid_tol * (1.0 + th) {
                return Ok(false);
            }
            let hit = intersect_warm(profile, th, self.gap, warm)?;
            warm = Some(hit);
            let d_interp = self.d_of_s.eval(s_of_theta.eval(th));
            if (d_interp - hit.u).abs() > 100.0 * self.grid_tol * (1.0 + hit.u) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Cache backed by explicit d(s) and γ(s) functions. `s0` is located by
    /// the same margin scan as the profile path.
    pub fn synthetic(
        d: impl Fn(f64) -> f64 + Send + Sync + 'static,
        gamma: impl Fn(f64) -> f64 + Send + Sync + 'static,
        s_range: (f64, f64),
        margin: f64,
        grid_tol: f64,
    ) -> Result<Self> {
        if !(s_range.1 > s_range.0) {
            return Err(Error::Domain("synthetic cache: empty s range".into()));
        }
        let n = 2048;
        let mut s_grid = Vec::with_capacity(n);
        let mut d_grid = Vec::with_capacity(n);
        let mut gamma_grid = Vec::with_capacity(n);
        for i in 0..n {
            let s = s_range.0 + (s_range.1 - s_range.0) * i as f64 / (n - 1) as f64;
            s_grid.push(s);
            d_grid.push(d(s));
            gamma_grid.push(gamma(s));
        }
        let d_of_s = Pchip::new(s_grid.clone(), d_grid.clone())?;
        let gamma_of_s = Pchip::new(s_grid.clone(), gamma_grid.clone())?;
        let (s0, sup_dgamma) = find_s0_on_grid(&s_grid, &d_grid, &gamma_grid, margin)?;
        Ok(GeometryCache {
            source: CacheSource::Synthetic { d: Arc::new(d), gamma: Arc::new(gamma) },
            gap: TAU,
            grid_tol,
            margin,
            s_grid,
            theta_grid: Vec::new(),
            d_grid,
            gamma_grid,
            s_of_theta: None,
            theta_of_s: None,
            d_of_s,
            gamma_of_s,
            s0,
            sup_dgamma,
        })
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn s_min(&self) -> f64 {
        self.s_grid[0]
    }

    pub fn s_max(&self) -> f64 {
        *self.s_grid.last().unwrap()
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn grid_tol(&self) -> f64 {
        self.grid_tol
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// Supremum of d·γ over the cached nodes beyond s₀.
    pub fn sup_dgamma(&self) -> f64 {
        self.sup_dgamma
    }

    pub fn profile(&self) -> Option<&SpiralProfile> {
        match &self.source {
            CacheSource::Profile(p) => Some(p),
            CacheSource::Synthetic { .. } => None,
        }
    }

    pub fn is_synthetic(&self) -> bool {
        matches!(self.source, CacheSource::Synthetic { .. })
    }

    /// Cached nodes (s, θ, d, γ). θ is empty for synthetic caches.
    pub fn nodes(&self) -> (&[f64], &[f64], &[f64], &[f64]) {
        (&self.s_grid, &self.theta_grid, &self.d_grid, &self.gamma_grid)
    }

    /// Arc length at angle θ, exact-backed (grid node + one quadrature panel).
    pub fn s_at(&self, theta: f64) -> Result<f64> {
        let profile = self.profile().ok_or_else(|| {
            Error::Range("synthetic cache has no angular parametrization".into())
        })?;
        let i = match self.theta_grid.binary_search_by(|v| v.partial_cmp(&theta).unwrap()) {
            Ok(i) => i,
            Err(i) => i.clamp(1, self.theta_grid.len()) - 1,
        };
        let (v, _) = quadrature::integrate(
            |t| profile.arc_speed(t),
            self.theta_grid[i],
            theta,
            1e-13,
            1e-15 * (1.0 + self.s_grid[i].abs()),
        )?;
        Ok(self.s_grid[i] + v)
    }

    /// θ(s) without the cached-range guard, used internally for derivative
    /// stencils that may poke slightly past the grid.
    fn theta_at_unchecked(&self, s: f64) -> Result<f64> {
        let profile = self.profile().ok_or_else(|| {
            Error::Range("synthetic cache has no angular parametrization".into())
        })?;
        let interp = self.theta_of_s.as_ref().unwrap();
        let mut th = interp.eval(s).max(profile.theta_range().0 + 1e-12);
        let tol = 1e-12 * (1.0 + s.abs());
        for _ in 0..80 {
            let si = self.s_at(th)?;
            let err = si - s;
            if err.abs() <= tol {
                return Ok(th);
            }
            let speed = profile.arc_speed(th);
            if !(speed > 0.0) {
                break;
            }
            let mut step = err / speed;
            // keep the iterate inside the evaluable range
            let lo = profile.theta_range().0;
            if th - step <= lo {
                step = (th - lo) * 0.5;
            }
            th -= step;
        }
        Err(Error::Numerical(format!("θ(s) iteration did not converge at s = {s}")))
    }

    /// The inverse arc-length map. Root of s(θ) = s by a bracketed,
    /// interpolant-seeded Newton iteration; |s(θ) − s| ≤ 1e-9 (1 + s).
    pub fn theta_of_arc(&self, s: f64) -> Result<f64> {
        if s < self.s_min() - 1e-12 * (1.0 + s.abs()) || s > self.s_max() * (1.0 + 1e-12) {
            return Err(Error::Range(format!(
                "theta_of_arc: s = {s} outside the cached range [{}, {}]",
                self.s_min(),
                self.s_max()
            )));
        }
        self.theta_at_unchecked(s.clamp(self.s_min(), self.s_max()))
    }

    /// Curvature as a function of arc length.
    pub fn gamma_at(&self, s: f64) -> Result<f64> {
        match &self.source {
            CacheSource::Synthetic { gamma, .. } => Ok(gamma(s)),
            CacheSource::Profile(p) => p.curvature_theta(self.theta_at_unchecked(s)?),
        }
    }

    /// Normal width as a function of arc length (exact-backed).
    pub fn d_at(&self, s: f64) -> Result<f64> {
        match &self.source {
            CacheSource::Synthetic { d, .. } => Ok(d(s)),
            CacheSource::Profile(p) => {
                let th = self.theta_at_unchecked(s)?;
                Ok(fermi::normal_intersection(p, th, self.gap, fermi::DEFAULT_HALF_WINDOW)?.u)
            }
        }
    }

    /// Fast interpolated d(s) for rasterization and plotting.
    pub fn d_interp(&self, s: f64) -> f64 {
        self.d_of_s.eval(s)
    }

    pub fn gamma_interp(&self, s: f64) -> f64 {
        self.gamma_of_s.eval(s)
    }

    /// First and second curvature derivatives in arc length by
    /// Richardson-extrapolated central differences with step control.
    pub fn curvature_arc_derivatives(&self, s: f64) -> Result<CurvatureDerivs> {
        if s < self.s0 - 1e-9 * (1.0 + s.abs()) {
            return Err(Error::Domain(format!(
                "curvature_arc_derivatives: s = {s} lies before s0 = {}",
                self.s0
            )));
        }
        let gamma = self.gamma_at(s)?;
        // For profile caches γ(s) extends naturally past the grid ends, so
        // the stencil may lean out; synthetic closures are total functions.
        let h0 = 0.05 * (1.0 + s.abs());
        let h0 = match &self.source {
            CacheSource::Profile(p) => {
                // stay clear of the curve start where curvature blows up
                let room = (s - self.arc_floor(p)) / 2.5;
                h0.min(room.max(1e-6))
            }
            CacheSource::Synthetic { .. } => h0,
        };
        let f = |x: f64| self.gamma_at(x).unwrap_or(f64::NAN);
        let d1 = derivative::deriv1(f, s, h0);
        let d2 = derivative::deriv2(|x| self.gamma_at(x).unwrap_or(f64::NAN), s, h0);
        if !d1.value.is_finite() || !d2.value.is_finite() {
            return Err(Error::Numerical(format!("curvature derivative stencil failed at s = {s}")));
        }
        Ok(CurvatureDerivs {
            gamma,
            d_gamma: d1.value,
            dd_gamma: d2.value,
            err_d_gamma: d1.error,
            err_dd_gamma: d2.error,
        })
    }

    fn arc_floor(&self, profile: &SpiralProfile) -> f64 {
        // arc length of the smallest angle at which curvature is still
        // evaluable with some slack
        let lo = profile.theta_range().0;
        let th_floor = (lo + 0.05 * (self.theta_grid[0] - lo)).max(lo + 1e-6);
        profile.arc_length(th_floor).unwrap_or(0.0)
    }

    /// Normal width d(s) for s ≥ s₀ (the operation-level contract).
    pub fn normal_width(&self, s: f64) -> Result<f64> {
        if s < self.s0 - 1e-9 * (1.0 + s.abs()) {
            return Err(Error::Domain(format!("normal_width: s = {s} lies before s0 = {}", self.s0)));
        }
        self.d_at(s)
    }
}

fn intersect_warm(
    profile: &SpiralProfile,
    theta: f64,
    gap: f64,
    warm: Option<NormalHit>,
) -> Result<NormalHit> {
    if let Some(_prev) = warm {
        // nodes are close; most of the time the scan window can be skipped
        if let Ok(hit) = fermi::normal_intersection(profile, theta, gap, 0.35) {
            return Ok(hit);
        }
    }
    fermi::normal_intersection(profile, theta, gap, fermi::DEFAULT_HALF_WINDOW)
}

fn find_s0_on_grid(s: &[f64], d: &[f64], gamma: &[f64], margin: f64) -> Result<(f64, f64)> {
    let n = s.len();
    let dg: Vec<f64> = d.iter().zip(gamma).map(|(a, b)| a * b).collect();
    // smallest index beyond which d·γ ≤ 1 − margin everywhere
    let threshold = 1.0 - margin;
    let mut i0 = None;
    let mut ok_from = n;
    for i in (0..n).rev() {
        if dg[i] <= threshold {
            ok_from = i;
        } else {
            break;
        }
    }
    if ok_from < n {
        i0 = Some(ok_from);
    }
    let i0 = i0.ok_or_else(|| {
        Error::Assumption(format!(
            "d(s)·γ(s) ≤ {threshold} never holds up to the end of the scan range"
        ))
    })?;
    // tail must be trending down so the supremum beyond the grid is safe
    let k = (n / 10).max(8).min(n - 1);
    let tail = &dg[n - k..];
    let mut worst_rise: f64 = 0.0;
    for w in tail.windows(2) {
        worst_rise = worst_rise.max(w[1] - w[0]);
    }
    if worst_rise > 1e-9 * (1.0 + tail[0].abs()) {
        return Err(Error::Assumption(
            "d·γ is not decreasing over the last sample window; cannot certify the tail".into(),
        ));
    }
    let sup = dg[i0..].iter().cloned().fold(0.0f64, f64::max);
    Ok((s[i0], sup))
}

/// Smallest admissible arc length: builds the scan grid for `profile` and
/// returns s₀ with d(s)γ(s) ≤ 1 − margin beyond it.
pub fn find_s0(profile: &SpiralProfile, opts: &CacheOptions) -> Result<f64> {
    Ok(GeometryCache::build(profile.clone(), opts)?.s0())
}

fn valid_start(profile: &SpiralProfile, opts: &CacheOptions, request: f64) -> Result<f64> {
    // Walk forward until the inward normal meets the previous coil properly
    // and the width is bounded by the radial gap; near the curve start the
    // "previous coil" degenerates into the central region and the parallel
    // coordinates are not meaningful yet.
    let (range_lo, range_hi) = profile.theta_range();
    let mut th = request.max(range_lo + opts.gap * 1.001);
    let step = opts.gap / 32.0;
    let limit = opts.theta_hi.min(range_hi);
    while th < limit {
        if let Ok(hit) = fermi::normal_intersection(profile, th, opts.gap, fermi::DEFAULT_HALF_WINDOW) {
            let radial_gap = profile.r(th) - profile.r(th - opts.gap);
            if hit.u <= radial_gap * (1.0 + 1e-9) {
                return Ok(th);
            }
        }
        th += step;
    }
    Err(Error::Geometry(
        "no valid cache start: the previous-coil intersection never stabilizes on the requested range".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::profile::archimedean_curvature;
    use approx::assert_relative_eq;

    fn power_cache() -> GeometryCache {
        let profile = SpiralProfile::power(0.5, 0.5).unwrap();
        let opts = CacheOptions { theta_hi: 80.0, margin: 0.5, initial_nodes: 512, ..Default::default() };
        GeometryCache::build(profile, &opts).unwrap()
    }

    #[test]
    fn grid_is_strictly_increasing_and_round_trips() {
        let cache = power_cache();
        let (s, th, _, _) = cache.nodes();
        for w in s.windows(2) {
            assert!(w[1] > w[0]);
        }
        for i in (0..th.len()).step_by(37) {
            let theta = th[i] * 1.001;
            let s_val = cache.s_at(theta).unwrap();
            let back = cache.theta_of_arc(s_val).unwrap();
            assert!((back - theta).abs() <= 1e-8 * (1.0 + theta));
        }
    }

    #[test]
    fn theta_of_arc_contract() {
        let cache = power_cache();
        let profile = cache.profile().unwrap().clone();
        for f in [0.1, 0.33, 0.78, 0.99] {
            let s = cache.s_min() + f * (cache.s_max() - cache.s_min());
            let th = cache.theta_of_arc(s).unwrap();
            let resid = (profile.arc_length(th).unwrap() - s).abs();
            assert!(resid <= 1e-9 * (1.0 + s), "residual {resid}");
        }
    }

    #[test]
    fn theta_of_arc_range_error() {
        let cache = power_cache();
        assert!(matches!(cache.theta_of_arc(cache.s_max() * 2.0), Err(Error::Range(_))));
    }

    #[test]
    fn theta_of_arc_at_zero_arc_is_curve_start() {
        // forward-map identity at the lower end of the cached range
        let cache = power_cache();
        let s = cache.s_min();
        let th = cache.theta_of_arc(s).unwrap();
        assert_relative_eq!(cache.s_at(th).unwrap(), s, max_relative = 1e-10);
    }

    #[test]
    fn s0_satisfies_margin() {
        let cache = power_cache();
        let (s, _, d, g) = cache.nodes();
        let i0 = s.iter().position(|&x| x >= cache.s0()).unwrap();
        for j in i0..s.len() {
            assert!(d[j] * g[j] <= 0.5 + 1e-12, "d·γ must respect the margin beyond s0");
        }
        assert!(cache.sup_dgamma() <= 0.5 + 1e-12);
    }

    #[test]
    fn admissibility_and_width_bound_at_nodes() {
        let cache = power_cache();
        let profile = cache.profile().unwrap().clone();
        let (s, th, d, g) = cache.nodes();
        for j in 0..s.len() {
            assert!(d[j] * g[j] < 1.0 || s[j] < cache.s0());
            let a = profile.width(th[j]).unwrap();
            assert!(d[j] <= TAU * a * (1.0 + 1e-9), "d ≤ 2π a violated at node {j}");
        }
    }

    #[test]
    fn normal_width_before_s0_is_rejected() {
        let cache = power_cache();
        if cache.s0() > cache.s_min() {
            assert!(cache.normal_width(cache.s_min()).is_err() || cache.s0() == cache.s_min());
        }
    }

    #[test]
    fn normal_width_decreasing_on_power_profile() {
        let cache = power_cache();
        let mut prev = f64::INFINITY;
        let mut s = cache.s0();
        while s < cache.s_max().min(1000.0) {
            let d = cache.normal_width(s).unwrap();
            assert!(d < prev * (1.0 + 1e-9), "d(s) should decrease");
            prev = d;
            s += (cache.s_max() - cache.s0()) / 50.0;
        }
    }

    #[test]
    fn curvature_derivatives_match_archimedean_chain_rule() {
        let profile = SpiralProfile::archimedean(1.0).unwrap();
        let opts = CacheOptions { theta_hi: 60.0 * TAU, initial_nodes: 512, ..Default::default() };
        let cache = GeometryCache::build(profile, &opts).unwrap();
        // closed forms in θ for c = 1, then chain rule with s'(θ) = √(θ²+1)
        let dgamma_dtheta = |t: f64| -t * (t * t + 4.0) / (t * t + 1.0).powf(2.5);
        let ddgamma_dtheta = |t: f64| (2.0 * t.powi(4) + 13.0 * t * t - 4.0) / (t * t + 1.0).powf(3.5);
        for f in [0.2, 0.5, 0.8] {
            let s = cache.s0() + f * (cache.s_max() * 0.8 - cache.s0());
            let th = cache.theta_of_arc(s).unwrap();
            let sp = (th * th + 1.0).sqrt();
            let spp = th / sp;
            let d1_exact = dgamma_dtheta(th) / sp;
            let d2_exact = ddgamma_dtheta(th) / (sp * sp) - dgamma_dtheta(th) * spp / (sp * sp * sp);
            let derivs = cache.curvature_arc_derivatives(s).unwrap();
            assert_relative_eq!(derivs.gamma, archimedean_curvature(1.0, th), max_relative = 1e-10);
            assert_relative_eq!(derivs.d_gamma, d1_exact, max_relative = 1e-6);
            assert_relative_eq!(derivs.dd_gamma, d2_exact, max_relative = 1e-6, epsilon = 1e-10);
        }
    }

    #[test]
    fn curvature_derivatives_vanish_for_constant_gamma() {
        let cache = GeometryCache::synthetic(|_| 0.4, |_| 0.7, (1.0, 50.0), 0.05, 1e-8).unwrap();
        let derivs = cache.curvature_arc_derivatives(10.0).unwrap();
        assert_eq!(derivs.gamma, 0.7);
        assert!(derivs.d_gamma.abs() < 1e-10);
        assert!(derivs.dd_gamma.abs() < 1e-8);
    }

    #[test]
    fn curvature_derivative_self_consistency_half_step() {
        let cache = power_cache();
        let s = cache.s0() + 0.5 * (cache.s_max() - cache.s0());
        let derivs = cache.curvature_arc_derivatives(s).unwrap();
        // half-step re-estimate agrees within the combined reported error
        let f = |x: f64| cache.gamma_at(x).unwrap();
        let h = 0.01 * (1.0 + s);
        let fd = (f(s + h) - f(s - h)) / (2.0 * h);
        let fd_half = (f(s + 0.5 * h) - f(s - 0.5 * h)) / h;
        let richardson = (4.0 * fd_half - fd) / 3.0;
        assert!((richardson - derivs.d_gamma).abs() <= 1e-5 * derivs.d_gamma.abs().max(1e-10));
    }

    #[test]
    fn synthetic_constant_dgamma_s0_at_scan_start() {
        let cache = GeometryCache::synthetic(|_| 1.0, |_| 0.5, (2.0, 30.0), 0.05, 1e-8).unwrap();
        assert_eq!(cache.s0(), 2.0);
    }

    #[test]
    fn archimedean_s0_is_finite() {
        let profile = SpiralProfile::archimedean(1.0).unwrap();
        let opts = CacheOptions { theta_hi: 70.0 * TAU, initial_nodes: 512, ..Default::default() };
        let cache = GeometryCache::build(profile, &opts).unwrap();
        assert!(cache.s0() >= cache.s_min());
        assert!(cache.s0() < cache.s_max());
    }

    #[test]
    fn find_s0_respects_margin_default() {
        let profile = SpiralProfile::power(0.5, 0.5).unwrap();
        let opts = CacheOptions { theta_hi: 80.0, initial_nodes: 512, ..Default::default() };
        let s0 = find_s0(&profile, &opts).unwrap();
        let cache = GeometryCache::build(SpiralProfile::power(0.5, 0.5).unwrap(), &opts).unwrap();
        let dg = cache.d_at(s0).unwrap() * cache.gamma_at(s0).unwrap();
        assert!(dg <= 0.95 + 1e-9);
    }

    #[test]
    fn expanding_profile_fails_cache_build() {
        let profile = SpiralProfile::power(1.0, 2.0).unwrap();
        let opts = CacheOptions { theta_hi: 80.0, ..Default::default() };
        assert!(matches!(GeometryCache::build(profile, &opts), Err(Error::Assumption(_))));
    }
}
