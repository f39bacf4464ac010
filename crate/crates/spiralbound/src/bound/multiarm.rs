//! Multi-arm spirals: the union of m angularly shifted copies of one profile
//! splits the plane into m spiral channels; each channel carries the
//! single-arm bound with the inter-arm gap in place of 2π.

use super::theorem::{
    asymptotic_bound_with, moment_bound_with, small_sigma_bound_with, threshold_set_general,
    width_integral_for, BoundPieces, DEFAULT_MC_SAMPLES,
};
use super::{BoundMode, BoundParams, BoundReport};
use crate::bound::constants::{lt_constant_1, lt_constant_2};
use crate::error::{Error, Result};
use crate::geometry::{CacheOptions, GeometryCache, SpiralProfile};
use std::f64::consts::{PI, TAU};

/// Validate arm offsets 0 = θ₀ < … < θ_{m-1} < 2π and return the angular gap
/// of each arm to its angularly preceding neighbor.
pub fn arm_gaps(offsets: &[f64]) -> Result<Vec<f64>> {
    if offsets.is_empty() {
        return Err(Error::Config("multi-arm: at least one arm offset required".into()));
    }
    if offsets[0].abs() > 1e-12 {
        return Err(Error::Config(format!("multi-arm: first offset must be 0, got {}", offsets[0])));
    }
    for w in offsets.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Geometry(format!(
                "multi-arm: offsets must be strictly ascending; arms at {} and {} overlap",
                w[0], w[1]
            )));
        }
    }
    let last = *offsets.last().unwrap();
    if !(last < TAU) {
        return Err(Error::Config(format!("multi-arm: offsets must stay below 2π, got {last}")));
    }
    let m = offsets.len();
    let mut gaps = Vec::with_capacity(m);
    gaps.push(TAU - last);
    for j in 1..m {
        gaps.push(offsets[j] - offsets[j - 1]);
    }
    Ok(gaps)
}

/// Build one geometry cache per arm. All arms share the base profile; the
/// only geometric difference is the coil gap of the inward-normal target.
pub fn build_arm_caches(
    profile: &SpiralProfile,
    offsets: &[f64],
    opts: &CacheOptions,
) -> Result<Vec<GeometryCache>> {
    let gaps = arm_gaps(offsets)?;
    gaps.into_iter()
        .map(|gap| {
            let arm_opts = CacheOptions { gap, ..opts.clone() };
            GeometryCache::build(profile.clone(), &arm_opts)
        })
        .collect()
}

/// Per-arm bounds and their sum.
#[derive(Debug, Clone)]
pub struct MultiArmBound {
    pub per_arm: Vec<BoundReport>,
    pub total: f64,
}

/// Evaluate the bound arm by arm and sum. With a single arm this is exactly
/// the single-spiral bound.
pub fn multi_arm_bound(caches: &[GeometryCache], params: &BoundParams) -> Result<MultiArmBound> {
    params.validate()?;
    if caches.is_empty() {
        return Err(Error::Config("multi-arm: no caches supplied".into()));
    }
    let mut per_arm = Vec::with_capacity(caches.len());
    for cache in caches {
        let pieces = BoundPieces::compute(cache, DEFAULT_MC_SAMPLES, 0)?;
        let report = match params.mode {
            BoundMode::Standard => moment_bound_with(cache, params, &pieces)?,
            BoundMode::SmallSigma => small_sigma_bound_with(cache, params, &pieces)?,
        };
        per_arm.push(report);
    }
    let total = per_arm.iter().map(|r| r.total).sum();
    Ok(MultiArmBound { per_arm, total })
}

/// Asymptotic multi-arm form:
/// Λ^{σ+1} ((L¹(σ)/π) Σ_j ∫_{d_j ≥ π/√Λ} d_j ds + c̃ m) with c̃ the largest
/// per-arm c₁.
pub fn multi_arm_asymptotic(caches: &[GeometryCache], sigma: f64, lambda: f64) -> Result<f64> {
    if caches.is_empty() {
        return Err(Error::Config("multi-arm: no caches supplied".into()));
    }
    if caches.len() == 1 {
        let pieces = BoundPieces::compute(&caches[0], DEFAULT_MC_SAMPLES, 0)?;
        return asymptotic_bound_with(&caches[0], sigma, lambda, pieces.area.value);
    }
    let mut sum_wi = 0.0;
    let mut c_max: f64 = 0.0;
    for cache in caches {
        let set = threshold_set_general(cache, lambda, 1.0, false)?;
        sum_wi += width_integral_for(cache, &set)?;
        let pieces = BoundPieces::compute(cache, DEFAULT_MC_SAMPLES, 0)?;
        c_max = c_max.max(2.0 * lt_constant_2(sigma)? * pieces.area.value);
    }
    Ok(lambda.powf(sigma + 1.0)
        * (lt_constant_1(sigma)? / PI * sum_wi + c_max * caches.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::ThresholdVariant;
    use approx::assert_relative_eq;

    #[test]
    fn gaps_partition_the_circle() {
        let gaps = arm_gaps(&[0.0, PI / 2.0, PI, 1.5 * PI]).unwrap();
        assert_eq!(gaps.len(), 4);
        assert_relative_eq!(gaps.iter().sum::<f64>(), TAU, max_relative = 1e-14);
        assert_relative_eq!(gaps[0], PI / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn single_arm_gap_is_full_turn() {
        assert_eq!(arm_gaps(&[0.0]).unwrap(), vec![TAU]);
    }

    #[test]
    fn overlapping_arms_are_rejected() {
        assert!(matches!(arm_gaps(&[0.0, 1.0, 1.0]), Err(Error::Geometry(_))));
        assert!(arm_gaps(&[0.0, TAU]).is_err());
        assert!(arm_gaps(&[0.1, 1.0]).is_err());
    }

    #[test]
    fn symmetric_two_arm_bounds_match_and_sum() {
        let profile = SpiralProfile::power(0.5, 0.5).unwrap();
        let opts = CacheOptions { theta_hi: 60.0, margin: 0.5, initial_nodes: 512, ..Default::default() };
        let caches = build_arm_caches(&profile, &[0.0, PI], &opts).unwrap();
        assert_eq!(caches.len(), 2);
        let params = BoundParams::standard(1.5, 80.0).with_variant(ThresholdVariant::Conservative2Lambda);
        let mab = multi_arm_bound(&caches, &params).unwrap();
        let a = mab.per_arm[0].total;
        let b = mab.per_arm[1].total;
        assert!((a - b).abs() <= 1e-10 * a.abs(), "symmetric arms must agree: {a} vs {b}");
        assert_relative_eq!(mab.total, a + b, max_relative = 1e-14);
        assert_relative_eq!(mab.total, 2.0 * a, max_relative = 1e-10);
    }

    #[test]
    fn one_arm_reduces_to_single_spiral_bound() {
        let profile = SpiralProfile::power(0.5, 0.5).unwrap();
        let opts = CacheOptions { theta_hi: 60.0, margin: 0.5, initial_nodes: 512, ..Default::default() };
        let caches = build_arm_caches(&profile, &[0.0], &opts).unwrap();
        let params = BoundParams::standard(1.5, 50.0);
        let mab = multi_arm_bound(&caches, &params).unwrap();
        let single_cache = GeometryCache::build(profile, &opts).unwrap();
        let pieces = BoundPieces::compute(&single_cache, DEFAULT_MC_SAMPLES, 0).unwrap();
        let single = moment_bound_with(&single_cache, &params, &pieces).unwrap();
        assert_eq!(mab.per_arm.len(), 1);
        assert_eq!(mab.total, single.total);
    }

    #[test]
    fn two_arms_have_smaller_gap_geometry() {
        // each arm of a symmetric pair sees half the coil gap, so its
        // normal width is smaller than the single-spiral one
        let profile = SpiralProfile::power(0.5, 0.5).unwrap();
        let opts = CacheOptions { theta_hi: 60.0, margin: 0.5, initial_nodes: 512, ..Default::default() };
        let two = build_arm_caches(&profile, &[0.0, PI], &opts).unwrap();
        let one = GeometryCache::build(profile, &opts).unwrap();
        let s = two[0].s0().max(one.s0()) * 1.5;
        let d_two = two[0].d_at(s).unwrap();
        let d_one = one.d_at(s).unwrap();
        assert!(d_two < d_one, "two-arm width {d_two} should undercut single-arm {d_one}");
    }
}
