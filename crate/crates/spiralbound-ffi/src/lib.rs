//! C ABI for the spiral spectral-bound library.
//!
//! Conventions: every fallible call returns an [`SbStatus`] code and writes
//! its result through out-pointers; `SB_STATUS_OK` is zero. Objects are
//! opaque handles created by `*_new`/`*_build` and released by the matching
//! `*_free`. The most recent error message of the calling thread is available
//! via [`sb_last_error`].

use spiralbound::bound::{self, BoundParams, BoundPieces, ThresholdVariant};
use spiralbound::eig::{self, DomainMask, SolveOptions};
use spiralbound::error::Error;
use spiralbound::geometry::{self, CacheOptions, GeometryCache, SpiralClass, SpiralProfile};
use spiralbound::horn::{self, HornProfile};
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbStatus {
    Ok = 0,
    DomainError = 1,
    RangeError = 2,
    NumericalError = 3,
    GeometryError = 4,
    AssumptionViolation = 5,
    NotSimple = 6,
    SolverError = 7,
    CountMismatch = 8,
    ConfigError = 9,
    IoError = 10,
    NullPointer = 11,
    Panic = 12,
}

/// Width-function classification of a spiral profile.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbSpiralClass {
    StrictlyExpanding = 0,
    Expanding = 1,
    StrictlyShrinking = 2,
    Shrinking = 3,
    AsymptoticallyArchimedean = 4,
}

/// Threshold-set variant of the moment bound.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbThresholdVariant {
    AsStatedLambda = 0,
    Conservative2Lambda = 1,
}

/// All pieces of one evaluated bound.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SbBoundReport {
    pub integral_term: f64,
    pub c1_term: f64,
    pub c2_term: f64,
    pub total: f64,
    pub sup_w: f64,
    /// Right endpoint of the threshold set; NaN when the set is empty.
    pub s_star: f64,
    pub width_integral: f64,
    /// 1 when the threshold set ran into the end of the cached range.
    pub threshold_saturated: i32,
}

/// Opaque spiral profile handle.
pub struct SbProfile(SpiralProfile);

/// Opaque geometry cache handle.
pub struct SbCache {
    cache: GeometryCache,
    mc_samples: usize,
    seed: u64,
    pieces: OnceLock<BoundPieces>,
}

/// Opaque horn profile handle.
pub struct SbHorn(HornProfile);

/// Opaque eigensolver result handle.
pub struct SbEigenResult(eig::EigenResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> SbStatus {
    match err {
        Error::Domain(_) => SbStatus::DomainError,
        Error::Range(_) => SbStatus::RangeError,
        Error::Numerical(_) => SbStatus::NumericalError,
        Error::Geometry(_) => SbStatus::GeometryError,
        Error::Assumption(_) => SbStatus::AssumptionViolation,
        Error::NotSimple(_) => SbStatus::NotSimple,
        Error::Solver(_) => SbStatus::SolverError,
        Error::CountMismatch { .. } => SbStatus::CountMismatch,
        Error::Config(_) => SbStatus::ConfigError,
        Error::Io(_) => SbStatus::IoError,
    }
}

fn run<T>(body: impl FnOnce() -> Result<T, Error>, sink: impl FnOnce(T)) -> SbStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(value)) => {
            sink(value);
            SbStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside the library");
            SbStatus::Panic
        }
    }
}

/// Most recent error message of the calling thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sb_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

macro_rules! nonnull {
    ($ptr:expr) => {
        if $ptr.is_null() {
            set_error("null pointer argument");
            return SbStatus::NullPointer;
        }
    };
}

// ---------------------------------------------------------------- profiles

/// Create a power spiral r(θ) = scale · θ^exponent.
///
/// # Safety
/// `out` must be a valid pointer; the returned handle must be released with
/// [`sb_profile_free`].
#[no_mangle]
pub unsafe extern "C" fn sb_profile_power(scale: f64, exponent: f64, out: *mut *mut SbProfile) -> SbStatus {
    nonnull!(out);
    run(
        || SpiralProfile::power(scale, exponent),
        |p| *out = Box::into_raw(Box::new(SbProfile(p))),
    )
}

/// Create an Archimedean spiral r(θ) = scale · θ.
///
/// # Safety
/// `out` must be a valid pointer; release the handle with [`sb_profile_free`].
#[no_mangle]
pub unsafe extern "C" fn sb_profile_archimedean(scale: f64, out: *mut *mut SbProfile) -> SbStatus {
    nonnull!(out);
    run(
        || SpiralProfile::archimedean(scale),
        |p| *out = Box::into_raw(Box::new(SbProfile(p))),
    )
}

/// Release a profile handle. NULL is ignored.
///
/// # Safety
/// `p` must be NULL or a pointer previously returned by a profile
/// constructor, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sb_profile_free(p: *mut SbProfile) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Coil width a(θ) = (r(θ) − r(θ−2π)) / 2π.
///
/// # Safety
/// `p` must be a live profile handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_profile_width(p: *const SbProfile, theta: f64, out: *mut f64) -> SbStatus {
    nonnull!(p);
    nonnull!(out);
    let profile = &(*p).0;
    run(|| profile.width(theta), |v| *out = v)
}

/// Arc length s(θ) from the start of the curve.
///
/// # Safety
/// `p` must be a live profile handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_profile_arc_length(p: *const SbProfile, theta: f64, out: *mut f64) -> SbStatus {
    nonnull!(p);
    nonnull!(out);
    let profile = &(*p).0;
    run(|| profile.arc_length(theta), |v| *out = v)
}

/// Curvature γ(θ).
///
/// # Safety
/// `p` must be a live profile handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_profile_curvature(p: *const SbProfile, theta: f64, out: *mut f64) -> SbStatus {
    nonnull!(p);
    nonnull!(out);
    let profile = &(*p).0;
    run(|| profile.curvature_theta(theta), |v| *out = v)
}

/// Point of the parallel-coordinate map at (θ, u).
///
/// # Safety
/// `p` must be a live profile handle; `out_x`, `out_y` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sb_profile_fermi_point(
    p: *const SbProfile,
    theta: f64,
    u: f64,
    out_x: *mut f64,
    out_y: *mut f64,
) -> SbStatus {
    nonnull!(p);
    nonnull!(out_x);
    nonnull!(out_y);
    let profile = &(*p).0;
    run(
        || Ok(geometry::fermi_point(profile, theta, u)),
        |(x, y)| {
            *out_x = x;
            *out_y = y;
        },
    )
}

/// Classify the spiral by the monotonicity and limit of its width function.
///
/// # Safety
/// `p` must be a live profile handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_profile_classify(p: *const SbProfile, out: *mut SbSpiralClass) -> SbStatus {
    nonnull!(p);
    nonnull!(out);
    let profile = &(*p).0;
    run(
        || profile.classify(),
        |c| {
            *out = match c {
                SpiralClass::StrictlyExpanding => SbSpiralClass::StrictlyExpanding,
                SpiralClass::Expanding => SbSpiralClass::Expanding,
                SpiralClass::StrictlyShrinking => SbSpiralClass::StrictlyShrinking,
                SpiralClass::Shrinking => SbSpiralClass::Shrinking,
                SpiralClass::AsymptoticallyArchimedean => SbSpiralClass::AsymptoticallyArchimedean,
            }
        },
    )
}

// ------------------------------------------------------------------ caches

/// Build the geometry cache over θ ∈ [start, theta_hi]. `margin` is the
/// safety margin in d·γ ≤ 1 − margin (pass 0 for the default 0.05); `gap`
/// is the coil gap (pass 0 for a single spiral, 2π).
///
/// # Safety
/// `p` must be a live profile handle and `out` a valid pointer; release the
/// handle with [`sb_cache_free`].
#[no_mangle]
pub unsafe extern "C" fn sb_cache_build(
    p: *const SbProfile,
    theta_hi: f64,
    margin: f64,
    gap: f64,
    seed: u64,
    out: *mut *mut SbCache,
) -> SbStatus {
    nonnull!(p);
    nonnull!(out);
    let profile = (*p).0.clone();
    run(
        || {
            let opts = CacheOptions {
                theta_hi,
                margin: if margin > 0.0 { margin } else { 0.05 },
                gap: if gap > 0.0 { gap } else { std::f64::consts::TAU },
                ..Default::default()
            };
            GeometryCache::build(profile, &opts)
        },
        |cache| {
            *out = Box::into_raw(Box::new(SbCache {
                cache,
                mc_samples: bound::DEFAULT_MC_SAMPLES,
                seed,
                pieces: OnceLock::new(),
            }))
        },
    )
}

/// Release a cache handle. NULL is ignored.
///
/// # Safety
/// `c` must be NULL or a pointer from [`sb_cache_build`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sb_cache_free(c: *mut SbCache) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Smallest admissible arc length s₀ of the cache.
///
/// # Safety
/// `c` must be a live cache handle.
#[no_mangle]
pub unsafe extern "C" fn sb_cache_s0(c: *const SbCache) -> f64 {
    if c.is_null() {
        return f64::NAN;
    }
    (*c).cache.s0()
}

/// Inward normal width d(s), s ≥ s₀.
///
/// # Safety
/// `c` must be a live cache handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_cache_normal_width(c: *const SbCache, s: f64, out: *mut f64) -> SbStatus {
    nonnull!(c);
    nonnull!(out);
    let cache = &(*c).cache;
    run(|| cache.normal_width(s), |v| *out = v)
}

/// Inverse arc-length map θ(s).
///
/// # Safety
/// `c` must be a live cache handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_cache_theta_of_arc(c: *const SbCache, s: f64, out: *mut f64) -> SbStatus {
    nonnull!(c);
    nonnull!(out);
    let cache = &(*c).cache;
    run(|| cache.theta_of_arc(s), |v| *out = v)
}

/// Effective potential W(s).
///
/// # Safety
/// `c` must be a live cache handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_cache_potential_w(c: *const SbCache, s: f64, out: *mut f64) -> SbStatus {
    nonnull!(c);
    nonnull!(out);
    let cache = &(*c).cache;
    run(|| bound::potential_w(cache, s), |v| *out = v)
}

fn cache_pieces(handle: &SbCache) -> Result<BoundPieces, Error> {
    if let Some(p) = handle.pieces.get() {
        return Ok(*p);
    }
    let p = BoundPieces::compute(&handle.cache, handle.mc_samples, handle.seed)?;
    let _ = handle.pieces.set(p);
    Ok(p)
}

fn variant_of(v: SbThresholdVariant) -> ThresholdVariant {
    match v {
        SbThresholdVariant::AsStatedLambda => ThresholdVariant::AsStatedLambda,
        SbThresholdVariant::Conservative2Lambda => ThresholdVariant::Conservative2Lambda,
    }
}

fn fill_report(rep: &spiralbound::bound::BoundReport, out: &mut SbBoundReport) {
    out.integral_term = rep.integral_term;
    out.c1_term = rep.c1_term;
    out.c2_term = rep.c2_term;
    out.total = rep.total;
    out.sup_w = rep.sup_w;
    out.s_star = rep.s_star.unwrap_or(f64::NAN);
    out.width_integral = rep.width_integral;
    out.threshold_saturated = rep.threshold_saturated as i32;
}

/// Evaluate the moment bound (σ ≥ 3/2).
///
/// # Safety
/// `c` must be a live cache handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_moment_bound(
    c: *const SbCache,
    sigma: f64,
    lambda: f64,
    variant: SbThresholdVariant,
    out: *mut SbBoundReport,
) -> SbStatus {
    nonnull!(c);
    nonnull!(out);
    let handle = &*c;
    run(
        || {
            let pieces = cache_pieces(handle)?;
            let params = BoundParams::standard(sigma, lambda).with_variant(variant_of(variant));
            bound::moment_bound_with(&handle.cache, &params, &pieces)
        },
        |rep| fill_report(&rep, &mut *out),
    )
}

/// Evaluate the small-power bound (1/2 ≤ σ < 3/2).
///
/// # Safety
/// `c` must be a live cache handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_small_sigma_bound(
    c: *const SbCache,
    sigma: f64,
    lambda: f64,
    variant: SbThresholdVariant,
    out: *mut SbBoundReport,
) -> SbStatus {
    nonnull!(c);
    nonnull!(out);
    let handle = &*c;
    run(
        || {
            let pieces = cache_pieces(handle)?;
            let params = BoundParams::small_sigma(sigma, lambda).with_variant(variant_of(variant));
            bound::small_sigma_bound_with(&handle.cache, &params, &pieces)
        },
        |rep| fill_report(&rep, &mut *out),
    )
}

/// Large-Λ asymptotic form of the bound.
///
/// # Safety
/// `c` must be a live cache handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_asymptotic_bound(
    c: *const SbCache,
    sigma: f64,
    lambda: f64,
    out: *mut f64,
) -> SbStatus {
    nonnull!(c);
    nonnull!(out);
    let handle = &*c;
    run(
        || {
            let pieces = cache_pieces(handle)?;
            bound::asymptotic_bound_with(&handle.cache, sigma, lambda, pieces.area.value)
        },
        |v| *out = v,
    )
}

// --------------------------------------------------------------- constants

/// One-dimensional semiclassical constant L¹(σ).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_lt_constant_1(sigma: f64, out: *mut f64) -> SbStatus {
    nonnull!(out);
    run(|| bound::lt_constant_1(sigma), |v| *out = v)
}

/// Two-dimensional semiclassical constant L²(σ) = 1/(4π(σ+1)).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_lt_constant_2(sigma: f64, out: *mut f64) -> SbStatus {
    nonnull!(out);
    run(|| bound::lt_constant_2(sigma), |v| *out = v)
}

/// Sharpness constant ratio 2^{σ+3} π L¹(σ).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_constant_ratio(sigma: f64, out: *mut f64) -> SbStatus {
    nonnull!(out);
    run(|| bound::constant_ratio(sigma), |v| *out = v)
}

/// Sharpness lower bound ((1−w)²/(2^{σ+3}π²)) Λ^{σ+1} ln Λ.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_lower_bound_example(sigma: f64, lambda: f64, w: f64, out: *mut f64) -> SbStatus {
    nonnull!(out);
    run(|| bound::lower_bound_example(sigma, lambda, w), |v| *out = v)
}

// ------------------------------------------------------------------- horns

/// Exponential horn width amplitude · e^{−rate·s}.
///
/// # Safety
/// `out` must be a valid pointer; release with [`sb_horn_free`].
#[no_mangle]
pub unsafe extern "C" fn sb_horn_exponential(amplitude: f64, rate: f64, out: *mut *mut SbHorn) -> SbStatus {
    nonnull!(out);
    run(
        || HornProfile::exponential(amplitude, rate),
        |h| *out = Box::into_raw(Box::new(SbHorn(h))),
    )
}

/// Constant horn of the given height on (0, length).
///
/// # Safety
/// `out` must be a valid pointer; release with [`sb_horn_free`].
#[no_mangle]
pub unsafe extern "C" fn sb_horn_constant(height: f64, length: f64, out: *mut *mut SbHorn) -> SbStatus {
    nonnull!(out);
    run(
        || HornProfile::constant(height, length),
        |h| *out = Box::into_raw(Box::new(SbHorn(h))),
    )
}

/// Release a horn handle. NULL is ignored.
///
/// # Safety
/// `h` must be NULL or a pointer from a horn constructor, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sb_horn_free(h: *mut SbHorn) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Weyl-type counting integral for the horn at energy λ.
///
/// # Safety
/// `h` must be a live horn handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_horn_weyl_count(h: *const SbHorn, lambda: f64, out: *mut f64) -> SbStatus {
    nonnull!(h);
    nonnull!(out);
    let horn_profile = &(*h).0;
    run(|| horn::weyl_horn_count(horn_profile, lambda), |v| *out = v)
}

/// Chain-of-estimates lower bound (Λ/2π²) ∫_{f ≥ π/√Λ} f ds.
///
/// # Safety
/// `h` must be a live horn handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_horn_lower_estimate(h: *const SbHorn, lambda: f64, out: *mut f64) -> SbStatus {
    nonnull!(h);
    nonnull!(out);
    let horn_profile = &(*h).0;
    run(|| horn::count_lower_estimate(horn_profile, lambda), |v| *out = v)
}

// ------------------------------------------------------------- eigensolver

/// Rasterize the spiral domain (truncation disc `r_max`, spacing `h`),
/// assemble the five-point operator and compute every eigenvalue below
/// `cutoff`, certified against the inertia count.
///
/// # Safety
/// `p` must be a live profile handle and `out` a valid pointer; release the
/// result with [`sb_eigen_free`].
#[no_mangle]
pub unsafe extern "C" fn sb_spiral_eigenvalues(
    p: *const SbProfile,
    h: f64,
    r_max: f64,
    cutoff: f64,
    seed: u64,
    out: *mut *mut SbEigenResult,
) -> SbStatus {
    nonnull!(p);
    nonnull!(out);
    let profile = &(*p).0;
    run(
        || {
            let mask = DomainMask::spiral(profile, h, r_max)?;
            let a = eig::assemble(&mask);
            let opts = SolveOptions { seed, ..Default::default() };
            eig::eigenvalues_below(&a, cutoff, h, &opts)
        },
        |r| *out = Box::into_raw(Box::new(SbEigenResult(r))),
    )
}

/// Release an eigensolver result. NULL is ignored.
///
/// # Safety
/// `r` must be NULL or a pointer from [`sb_spiral_eigenvalues`], not freed.
#[no_mangle]
pub unsafe extern "C" fn sb_eigen_free(r: *mut SbEigenResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of eigenvalues below the cutoff.
///
/// # Safety
/// `r` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn sb_eigen_count(r: *const SbEigenResult) -> usize {
    if r.is_null() {
        return 0;
    }
    (*r).0.eigenvalues.len()
}

/// The i-th eigenvalue (ascending); NaN when out of range.
///
/// # Safety
/// `r` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn sb_eigen_value(r: *const SbEigenResult, i: usize) -> f64 {
    if r.is_null() {
        return f64::NAN;
    }
    let result = &(*r).0;
    result.eigenvalues.get(i).copied().unwrap_or(f64::NAN)
}

/// Eigenvalue moment Σ (Λ − λ_i)^σ of the computed spectrum.
///
/// # Safety
/// `r` must be a live result handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_eigen_moment(
    r: *const SbEigenResult,
    sigma: f64,
    lambda: f64,
    out: *mut f64,
) -> SbStatus {
    nonnull!(r);
    nonnull!(out);
    let result = &(*r).0;
    run(|| eig::moment(result, sigma, lambda), |v| *out = v)
}
