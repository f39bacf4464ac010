//! Assembly of the moment bound: threshold sets, width integrals, the c₁ and
//! c₂ pieces, the bound itself, its large-Λ asymptotic form, the small-power
//! variant, and the sharpness lower bound.

use super::constants::{lt_constant_1, lt_constant_2};
use super::potential::{potential_w, sup_w};
use super::{BoundMode, BoundParams, BoundReport};
use crate::error::{Error, Result};
use crate::geometry::{central_area, AreaEstimate, GeometryCache};
use crate::numerics::{quadrature, rootfind};
use std::cell::RefCell;
use std::f64::consts::PI;

/// Default sampling effort for the central-region area.
pub const DEFAULT_MC_SAMPLES: usize = 65_536;
const DEFAULT_SEED: u64 = 0;

/// Upper bound for the one-dimensional constant ratio r(σ,1) at σ < 3/2.
const R_SIGMA_BOUND: f64 = 2.0;

/// The set {s ≥ s₀ : d(s) ≥ π (W(s) + kΛ)^{-1/2}} reduced to its right
/// endpoint.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdSet {
    /// Right endpoint s*; None when the set is empty.
    pub endpoint: Option<f64>,
    /// False when the indicator changed sign more than once on the scan grid
    /// (the set is then approximated by [s₀, s*] with s* the outermost
    /// crossing).
    pub single_interval: bool,
    /// The set reaches the end of the cached range; the width integral is a
    /// truncation of the full one.
    pub saturated: bool,
}

impl ThresholdSet {
    pub fn is_empty(&self) -> bool {
        self.endpoint.is_none()
    }
}

/// Locate the threshold endpoint for shift kΛ; `with_w` switches the W(s)
/// term in the indicator on or off.
pub fn threshold_set_general(cache: &GeometryCache, lambda: f64, k: f64, with_w: bool) -> Result<ThresholdSet> {
    if !(lambda > 0.0) {
        return Err(Error::Domain("threshold set: Λ must be positive".into()));
    }
    let lo = cache.s0();
    let hi = cache.s_max();
    let g = |s: f64| -> Result<f64> {
        let w = if with_w { potential_w(cache, s)? } else { 0.0 };
        Ok(cache.d_at(s)? * (w + k * lambda).sqrt() - PI)
    };
    let n = 193;
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let s = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        values.push((s, g(s)?));
    }
    let mut crossings: Vec<(f64, f64)> = Vec::new();
    for w in values.windows(2) {
        if w[0].1 == 0.0 || w[0].1 * w[1].1 < 0.0 {
            crossings.push((w[0].0, w[1].0));
        }
    }
    let g0 = values[0].1;
    let g_end = values[n - 1].1;

    if crossings.is_empty() {
        if g0 > 0.0 {
            return Ok(ThresholdSet { endpoint: Some(hi), single_interval: true, saturated: true });
        }
        return Ok(ThresholdSet { endpoint: None, single_interval: true, saturated: false });
    }
    if g_end > 0.0 {
        // positive again at the end of the range: treat as saturated and flag
        return Ok(ThresholdSet { endpoint: Some(hi), single_interval: false, saturated: true });
    }
    let err_cell: RefCell<Option<Error>> = RefCell::new(None);
    let g_plain = |s: f64| match g(s) {
        Ok(v) => v,
        Err(e) => {
            *err_cell.borrow_mut() = Some(e);
            f64::NAN
        }
    };
    let (a, b) = *crossings.last().unwrap();
    let endpoint = rootfind::brent(g_plain, a, b, 1e-11 * (1.0 + hi), 200)?;
    if let Some(e) = err_cell.into_inner() {
        return Err(e);
    }
    Ok(ThresholdSet {
        endpoint: Some(endpoint),
        single_interval: crossings.len() == 1 && g0 > 0.0,
        saturated: false,
    })
}

/// Threshold endpoint for the main integral of the bound, using the variant's
/// energy shift and the full W(s).
pub fn threshold_endpoint(cache: &GeometryCache, params: &BoundParams) -> Result<ThresholdSet> {
    params.validate()?;
    threshold_set_general(cache, params.lambda, params.variant.shift_factor(), true)
}

/// ∫ d(s) ds over [s₀, s*]; zero for an empty set. Relative error ≤ 1e-8.
pub fn width_integral_for(cache: &GeometryCache, set: &ThresholdSet) -> Result<f64> {
    let Some(s_star) = set.endpoint else {
        return Ok(0.0);
    };
    if s_star <= cache.s0() {
        return Ok(0.0);
    }
    let err_cell: RefCell<Option<Error>> = RefCell::new(None);
    let f = |s: f64| match cache.d_at(s) {
        Ok(v) => v,
        Err(e) => {
            *err_cell.borrow_mut() = Some(e);
            f64::NAN
        }
    };
    let (value, _) = quadrature::integrate(f, cache.s0(), s_star, 1e-9, 0.0)?;
    if let Some(e) = err_cell.into_inner() {
        return Err(e);
    }
    if !value.is_finite() {
        return Err(Error::Numerical("width integral did not evaluate to a finite value".into()));
    }
    Ok(value)
}

/// Width integral for the given parameters (threshold endpoint included).
pub fn width_integral(cache: &GeometryCache, params: &BoundParams) -> Result<f64> {
    let set = threshold_endpoint(cache, params)?;
    width_integral_for(cache, &set)
}

/// Precomputed Λ-independent pieces shared across a sweep.
#[derive(Debug, Clone, Copy)]
pub struct BoundPieces {
    pub sup_w: f64,
    pub area: AreaEstimate,
}

impl BoundPieces {
    pub fn compute(cache: &GeometryCache, mc_samples: usize, seed: u64) -> Result<Self> {
        Ok(BoundPieces { sup_w: sup_w(cache)?, area: central_area(cache, mc_samples, seed)? })
    }
}

/// c₁ from an explicit central-region volume: 2 L²(σ) vol.
pub fn c1_from_area(sigma: f64, area: f64) -> Result<f64> {
    Ok(2.0 * lt_constant_2(sigma)? * area)
}

/// c₁ = 2 L²(σ) vol(central region), with the area estimated by stratified
/// counting at the default sampling effort.
pub fn c1_constant(cache: &GeometryCache, sigma: f64) -> Result<f64> {
    let area = central_area(cache, DEFAULT_MC_SAMPLES, DEFAULT_SEED)?;
    c1_from_area(sigma, area.value)
}

/// The counting-term remainder
/// c₂(Λ) = r L¹(1/2) λ₁ᵖ/(π√Λ) (‖W‖∞ + 2Λ)^{3/2} ∫ d(s) ds over
/// {d ≥ π (W + 2Λ)^{-1/2}}, with r = 2 and λ₁ᵖ = ‖W‖∞ + Λ.
pub fn c2_term_with(cache: &GeometryCache, lambda: f64, sup_w_value: f64) -> Result<f64> {
    let set = threshold_set_general(cache, lambda, 2.0, true)?;
    let wi = width_integral_for(cache, &set)?;
    if wi == 0.0 {
        return Ok(0.0);
    }
    let l_half = lt_constant_1(0.5)?;
    let lam1_proxy = sup_w_value + lambda;
    Ok(R_SIGMA_BOUND * l_half * lam1_proxy / (PI * lambda.sqrt()) * (sup_w_value + 2.0 * lambda).powf(1.5) * wi)
}

/// c₂(Λ) with ‖W‖∞ computed on the spot.
pub fn c2_term(cache: &GeometryCache, params: &BoundParams) -> Result<f64> {
    params.validate()?;
    c2_term_with(cache, params.lambda, sup_w(cache)?)
}

fn assemble(
    cache: &GeometryCache,
    params: &BoundParams,
    pieces: &BoundPieces,
    prefactor: f64,
    include_c2: bool,
) -> Result<BoundReport> {
    let lambda = params.lambda;
    let sigma = params.sigma;
    let set = threshold_set_general(cache, lambda, params.variant.shift_factor(), true)?;
    let wi = width_integral_for(cache, &set)?;
    let integral_term = prefactor / PI * (pieces.sup_w + lambda).powf(sigma + 1.0) * wi;
    let c1_term = c1_from_area(sigma, pieces.area.value)? * lambda.powf(sigma + 1.0);
    let c2 = if include_c2 { c2_term_with(cache, lambda, pieces.sup_w)? } else { 0.0 };
    Ok(BoundReport {
        sigma,
        lambda,
        variant: params.variant,
        mode: params.mode,
        integral_term,
        c1_term,
        c2_term: c2,
        total: integral_term + c1_term + c2,
        sup_w: pieces.sup_w,
        s_star: set.endpoint,
        width_integral: wi,
        threshold_saturated: set.saturated,
        central_area: pieces.area.value,
        central_area_std_error: pieces.area.std_error,
    })
}

/// The moment bound for σ ≥ 3/2 with precomputed pieces.
pub fn moment_bound_with(cache: &GeometryCache, params: &BoundParams, pieces: &BoundPieces) -> Result<BoundReport> {
    params.validate()?;
    if params.mode != BoundMode::Standard {
        return Err(Error::Domain("moment_bound runs in standard mode; use small_sigma_bound for σ < 3/2".into()));
    }
    assemble(cache, params, pieces, lt_constant_1(params.sigma)?, true)
}

/// The moment bound for σ ≥ 3/2.
pub fn moment_bound(cache: &GeometryCache, params: &BoundParams) -> Result<BoundReport> {
    let pieces = BoundPieces::compute(cache, DEFAULT_MC_SAMPLES, DEFAULT_SEED)?;
    moment_bound_with(cache, params, &pieces)
}

/// Small-power variant (1/2 ≤ σ < 3/2): the semiclassical constant picks up
/// the factor 2 r(σ,1) = 4 and the c₂ term is dropped.
pub fn small_sigma_bound_with(
    cache: &GeometryCache,
    params: &BoundParams,
    pieces: &BoundPieces,
) -> Result<BoundReport> {
    params.validate()?;
    if params.mode != BoundMode::SmallSigma {
        return Err(Error::Domain("small_sigma_bound requires small-σ mode".into()));
    }
    assemble(cache, params, pieces, 2.0 * R_SIGMA_BOUND * lt_constant_1(params.sigma)?, false)
}

pub fn small_sigma_bound(cache: &GeometryCache, params: &BoundParams) -> Result<BoundReport> {
    let pieces = BoundPieces::compute(cache, DEFAULT_MC_SAMPLES, DEFAULT_SEED)?;
    small_sigma_bound_with(cache, params, &pieces)
}

/// Large-Λ form of the bound:
/// Λ^{σ+1} ((L¹(σ)/π) ∫_{d ≥ π/√Λ} d(s) ds + c₁), the threshold set taken
/// with W = 0.
pub fn asymptotic_bound_with(cache: &GeometryCache, sigma: f64, lambda: f64, area: f64) -> Result<f64> {
    if !(sigma >= 1.5) {
        return Err(Error::Domain(format!("asymptotic_bound requires σ ≥ 3/2, got {sigma}")));
    }
    if !(lambda > 0.0) {
        return Err(Error::Domain("asymptotic_bound: Λ must be positive".into()));
    }
    let set = threshold_set_general(cache, lambda, 1.0, false)?;
    let wi = width_integral_for(cache, &set)?;
    Ok(lambda.powf(sigma + 1.0) * (lt_constant_1(sigma)? / PI * wi + c1_from_area(sigma, area)?))
}

pub fn asymptotic_bound(cache: &GeometryCache, sigma: f64, lambda: f64) -> Result<f64> {
    let area = central_area(cache, DEFAULT_MC_SAMPLES, DEFAULT_SEED)?;
    asymptotic_bound_with(cache, sigma, lambda, area.value)
}

/// The sharpness lower bound for the model geometry d(s) = 1/s:
/// ((1 − w)² / (2^{σ+3} π²)) Λ^{σ+1} ln Λ, where w is the supremum of d·γ.
pub fn lower_bound_example(sigma: f64, lambda: f64, w: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&w) {
        return Err(Error::Domain(format!("lower_bound_example: w must lie in [0, 1), got {w}")));
    }
    if !(lambda > 1.0) {
        return Err(Error::Domain("lower_bound_example requires Λ > 1 so that ln Λ > 0".into()));
    }
    Ok((1.0 - w) * (1.0 - w) / (2.0f64.powf(sigma + 3.0) * PI * PI) * lambda.powf(sigma + 1.0) * lambda.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::{constant_ratio, ThresholdVariant};
    use crate::geometry::{CacheOptions, SpiralProfile};
    use approx::assert_relative_eq;

    fn inverse_s_cache(s_max: f64) -> GeometryCache {
        GeometryCache::synthetic(|s| 1.0 / s, |_| 0.0, (1.0, s_max), 0.05, 1e-8).unwrap()
    }

    fn power_cache() -> GeometryCache {
        let profile = SpiralProfile::power(0.5, 0.5).unwrap();
        let opts = CacheOptions { theta_hi: 80.0, margin: 0.5, initial_nodes: 512, ..Default::default() };
        GeometryCache::build(profile, &opts).unwrap()
    }

    #[test]
    fn threshold_empty_when_lambda_small() {
        let cache = inverse_s_cache(200.0);
        // d(s0) = 1, so the set is empty iff √(kΛ) < π
        let set = threshold_set_general(&cache, 1.0, 1.0, true).unwrap();
        assert!(set.is_empty());
    }

    #[test]
    fn threshold_closed_form_inverse_s() {
        let cache = inverse_s_cache(200.0);
        let lambda = 1.0e4;
        let set = threshold_set_general(&cache, lambda, 1.0, true).unwrap();
        let expect = lambda.sqrt() / PI;
        assert_relative_eq!(set.endpoint.unwrap(), expect, max_relative = 1e-9);
        assert!(set.single_interval);
        assert!(!set.saturated);
    }

    #[test]
    fn conservative_endpoint_dominates() {
        let cache = power_cache();
        for lambda in [30.0, 100.0, 400.0] {
            let s1 = threshold_set_general(&cache, lambda, 1.0, true).unwrap();
            let s2 = threshold_set_general(&cache, lambda, 2.0, true).unwrap();
            let e1 = s1.endpoint.unwrap_or(cache.s0());
            let e2 = s2.endpoint.unwrap_or(cache.s0());
            assert!(e2 >= e1 - 1e-9);
            let w1 = width_integral_for(&cache, &s1).unwrap();
            let w2 = width_integral_for(&cache, &s2).unwrap();
            assert!(w2 >= w1);
        }
    }

    #[test]
    fn width_integral_log_closed_form() {
        let cache = inverse_s_cache(200.0);
        let lambda = 1.0e4;
        let params = BoundParams::standard(1.5, lambda).with_variant(ThresholdVariant::AsStatedLambda);
        let wi = width_integral(&cache, &params).unwrap();
        let expect = (lambda.sqrt() / PI).ln();
        assert_relative_eq!(wi, expect, max_relative = 1e-8);
    }

    #[test]
    fn width_integral_empty_set_is_zero() {
        let cache = inverse_s_cache(200.0);
        let params = BoundParams::standard(1.5, 1.0);
        assert_eq!(width_integral(&cache, &params).unwrap(), 0.0);
    }

    #[test]
    fn width_integral_vs_dense_trapezoid_on_power_profile() {
        let cache = power_cache();
        let lambda = 100.0;
        let set = threshold_set_general(&cache, lambda, 2.0, true).unwrap();
        let s_star = set.endpoint.unwrap();
        let n = 20_000;
        let h = (s_star - cache.s0()) / n as f64;
        let mut acc = 0.5 * (cache.d_at(cache.s0()).unwrap() + cache.d_at(s_star).unwrap());
        for i in 1..n {
            acc += cache.d_at(cache.s0() + i as f64 * h).unwrap();
        }
        let oracle = acc * h;
        let wi = width_integral_for(&cache, &set).unwrap();
        assert_relative_eq!(wi, oracle, max_relative = 1e-6);
    }

    #[test]
    fn c1_values() {
        assert_eq!(c1_from_area(1.5, 0.0).unwrap(), 0.0);
        assert_relative_eq!(c1_from_area(1.0, 8.0 * PI).unwrap(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn c2_closed_form_inverse_s() {
        let cache = inverse_s_cache(200.0);
        let lambda = 1.0e3;
        let c2 = c2_term_with(&cache, lambda, 0.0).unwrap();
        let expect = 2.0 * 0.25 * lambda * (2.0 * lambda).powf(1.5) * ((2.0 * lambda).sqrt() / PI).ln()
            / (PI * lambda.sqrt());
        assert_relative_eq!(c2, expect, max_relative = 1e-7);
    }

    #[test]
    fn c2_vanishes_on_empty_set() {
        let cache = inverse_s_cache(200.0);
        assert_eq!(c2_term_with(&cache, 0.5, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn c2_large_lambda_scaling_bounded() {
        let cache = inverse_s_cache(40_000.0);
        for lambda in [1e2, 1e3, 1e4] {
            let c2 = c2_term_with(&cache, lambda, 0.0).unwrap();
            let set = threshold_set_general(&cache, lambda, 1.0, false).unwrap();
            let wi = width_integral_for(&cache, &set).unwrap();
            let ratio = c2 / (lambda * lambda * wi);
            assert!(ratio > 0.0 && ratio < 1.0, "c2 scaling ratio {ratio} at Λ = {lambda}");
        }
    }

    #[test]
    fn moment_bound_reduces_to_c1_when_sets_empty() {
        let cache = power_cache();
        let pieces = BoundPieces::compute(&cache, 8192, 1).unwrap();
        for variant in [ThresholdVariant::AsStatedLambda, ThresholdVariant::Conservative2Lambda] {
            let params = BoundParams::standard(1.5, 1.0).with_variant(variant);
            let rep = moment_bound_with(&cache, &params, &pieces).unwrap();
            assert_eq!(rep.width_integral, 0.0);
            assert_eq!(rep.c2_term, 0.0);
            assert_relative_eq!(rep.total, rep.c1_term, max_relative = 1e-14);
        }
    }

    #[test]
    fn moment_bound_termwise_recomposition() {
        let cache = power_cache();
        let pieces = BoundPieces::compute(&cache, 8192, 1).unwrap();
        let params = BoundParams::standard(1.5, 50.0);
        let rep = moment_bound_with(&cache, &params, &pieces).unwrap();
        let l1 = lt_constant_1(1.5).unwrap();
        let integral = l1 / PI * (rep.sup_w + 50.0f64).powf(2.5) * rep.width_integral;
        let c1 = c1_from_area(1.5, rep.central_area).unwrap() * 50.0f64.powf(2.5);
        let c2 = c2_term_with(&cache, 50.0, rep.sup_w).unwrap();
        assert_relative_eq!(rep.integral_term, integral, max_relative = 1e-12);
        assert_relative_eq!(rep.c1_term, c1, max_relative = 1e-12);
        assert_relative_eq!(rep.c2_term, c2, max_relative = 1e-6);
        assert_relative_eq!(rep.total, integral + c1 + c2, max_relative = 1e-6);
        assert!(rep.total >= rep.integral_term);
    }

    #[test]
    fn moment_bound_monotone_in_lambda() {
        let cache = power_cache();
        let pieces = BoundPieces::compute(&cache, 8192, 1).unwrap();
        let t50 = moment_bound_with(&cache, &BoundParams::standard(1.5, 50.0), &pieces).unwrap().total;
        let t100 = moment_bound_with(&cache, &BoundParams::standard(1.5, 100.0), &pieces).unwrap().total;
        assert!(t100 > t50);
    }

    #[test]
    fn moment_bound_monotone_in_potential() {
        // same d(s), larger constant curvature → larger ‖W‖ → larger bound
        let d_fn = |s: f64| 1.0 / s;
        let weak = GeometryCache::synthetic(d_fn, |_| 0.1, (1.0, 300.0), 0.05, 1e-8).unwrap();
        let strong = GeometryCache::synthetic(d_fn, |_| 0.3, (1.0, 300.0), 0.05, 1e-8).unwrap();
        let params = BoundParams::standard(1.5, 200.0);
        let pw = BoundPieces::compute(&weak, 1024, 1).unwrap();
        let ps = BoundPieces::compute(&strong, 1024, 1).unwrap();
        assert!(ps.sup_w > pw.sup_w);
        let bw = moment_bound_with(&weak, &params, &pw).unwrap().total;
        let bs = moment_bound_with(&strong, &params, &ps).unwrap().total;
        assert!(bs > bw);
    }

    #[test]
    fn moment_bound_rejects_small_sigma_mode() {
        let cache = inverse_s_cache(50.0);
        let pieces = BoundPieces { sup_w: 0.0, area: crate::geometry::AreaEstimate { value: 0.0, std_error: 0.0 } };
        let params = BoundParams::small_sigma(1.0, 10.0);
        assert!(moment_bound_with(&cache, &params, &pieces).is_err());
        assert!(BoundParams::standard(1.0, 10.0).validate().is_err());
    }

    #[test]
    fn small_sigma_prefactor_composition() {
        // 2 · r · L¹(1/2) = 2 · 2 · 1/4 = 1 exactly
        let prefactor = 2.0 * R_SIGMA_BOUND * lt_constant_1(0.5).unwrap();
        assert!((prefactor - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn small_sigma_bound_shape() {
        let cache = power_cache();
        let pieces = BoundPieces::compute(&cache, 8192, 1).unwrap();
        let params = BoundParams::small_sigma(0.5, 60.0);
        let rep = small_sigma_bound_with(&cache, &params, &pieces).unwrap();
        assert_eq!(rep.c2_term, 0.0);
        assert!(rep.total.is_finite() && rep.total > 0.0);
        let rep149 = small_sigma_bound_with(&cache, &BoundParams::small_sigma(1.49, 60.0), &pieces).unwrap();
        assert!(rep149.total.is_finite() && rep149.total > 0.0);
        // empty threshold set → only the c1 piece survives
        let rep_empty = small_sigma_bound_with(&cache, &BoundParams::small_sigma(0.5, 0.5), &pieces).unwrap();
        assert_relative_eq!(rep_empty.total, rep_empty.c1_term, max_relative = 1e-14);
        assert!(small_sigma_bound_with(&cache, &BoundParams::small_sigma(1.6, 60.0), &pieces).is_err());
    }

    #[test]
    fn asymptotic_closed_form_inverse_s() {
        let cache = inverse_s_cache(2000.0);
        let sigma = 1.5;
        let lambda = 1.0e6;
        let v = asymptotic_bound_with(&cache, sigma, lambda, 0.0).unwrap();
        let expect = lambda.powf(sigma + 1.0) * lt_constant_1(sigma).unwrap() / PI * (lambda.sqrt() / PI).ln();
        assert_relative_eq!(v, expect, max_relative = 1e-7);
    }

    #[test]
    fn asymptotic_zero_below_channel_cutoff() {
        let cache = inverse_s_cache(50.0);
        // d(s0) = 1: the W = 0 set is empty for Λ < π²
        let v = asymptotic_bound_with(&cache, 1.5, 9.0, 0.0).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn moment_over_asymptotic_near_one_at_large_lambda() {
        let cache = power_cache();
        let pieces = BoundPieces::compute(&cache, 16_384, 1).unwrap();
        let sigma = 2.5;
        for lambda in [1e2, 1e3, 1e4] {
            let params = BoundParams::standard(sigma, lambda).with_variant(ThresholdVariant::AsStatedLambda);
            let rep = moment_bound_with(&cache, &params, &pieces).unwrap();
            let asy = asymptotic_bound_with(&cache, sigma, lambda, pieces.area.value).unwrap();
            let ratio = rep.total / asy;
            assert!((ratio - 1.0).abs() <= 0.10, "ratio {ratio} at Λ = {lambda}");
        }
    }

    #[test]
    fn lower_bound_pinned_value_and_monotonicity() {
        let e = std::f64::consts::E;
        let v = lower_bound_example(1.5, e, 0.0).unwrap();
        let expect = e.powf(2.5) / (2.0f64.powf(4.5) * PI * PI);
        assert_relative_eq!(v, expect, max_relative = 1e-14);
        let v_half = lower_bound_example(1.5, e, 0.5).unwrap();
        let v_nine = lower_bound_example(1.5, e, 0.9).unwrap();
        assert!(v > v_half && v_half > v_nine);
        assert!(lower_bound_example(1.5, e, 1.0).is_err());
        assert!(lower_bound_example(1.5, 0.5, 0.0).is_err());
    }

    #[test]
    fn upper_lower_constant_extraction_identity() {
        // Dividing each closed form by its own logarithmic factor leaves
        // exactly the constant ratio 2^{σ+3} π L¹(σ).
        let cache = inverse_s_cache(2000.0);
        for sigma in [1.5, 2.5] {
            let lambda = 1.0e6;
            let upper = asymptotic_bound_with(&cache, sigma, lambda, 0.0).unwrap();
            let lower = lower_bound_example(sigma, lambda, 0.0).unwrap();
            let ratio = upper / lower;
            let log_factor = (lambda.sqrt() / PI).ln() / lambda.ln();
            assert_relative_eq!(ratio / log_factor, constant_ratio(sigma).unwrap(), max_relative = 1e-7);
        }
    }
}
