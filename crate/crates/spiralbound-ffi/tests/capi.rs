//! Exercise the C ABI exactly as a foreign caller would: through raw
//! pointers and status codes.

use spiralbound_ffi::*;
use std::ffi::CStr;
use std::f64::consts::{PI, TAU};
use std::ptr;

#[test]
fn version_and_error_strings() {
    unsafe {
        let v = CStr::from_ptr(sb_version()).to_str().unwrap();
        assert!(!v.is_empty());
        // trigger an error and read it back
        let mut out = 0.0;
        let st = sb_lt_constant_1(-1.0, &mut out);
        assert_eq!(st, SbStatus::DomainError);
        let msg = CStr::from_ptr(sb_last_error()).to_str().unwrap();
        assert!(msg.contains("positive"));
    }
}

#[test]
fn profile_lifecycle_and_values() {
    unsafe {
        let mut p: *mut SbProfile = ptr::null_mut();
        assert_eq!(sb_profile_archimedean(1.0, &mut p), SbStatus::Ok);
        let mut w = 0.0;
        assert_eq!(sb_profile_width(p, 3.0 * PI, &mut w), SbStatus::Ok);
        assert!((w - 1.0).abs() < 1e-12);
        // domain error propagates as a status
        assert_eq!(sb_profile_width(p, PI, &mut w), SbStatus::DomainError);
        let mut g = 0.0;
        assert_eq!(sb_profile_curvature(p, 0.0, &mut g), SbStatus::Ok);
        assert!((g - 2.0).abs() < 1e-12);
        let mut class = SbSpiralClass::Shrinking;
        assert_eq!(sb_profile_classify(p, &mut class), SbStatus::Ok);
        assert_eq!(class, SbSpiralClass::AsymptoticallyArchimedean);
        let (mut x, mut y) = (0.0, 0.0);
        assert_eq!(sb_profile_fermi_point(p, PI / 2.0, 0.0, &mut x, &mut y), SbStatus::Ok);
        assert!(x.abs() < 1e-12 && (y - PI / 2.0).abs() < 1e-12);
        sb_profile_free(p);
    }
}

#[test]
fn null_pointers_are_rejected() {
    unsafe {
        let mut out = 0.0;
        assert_eq!(sb_profile_width(ptr::null(), 10.0, &mut out), SbStatus::NullPointer);
        assert_eq!(sb_lt_constant_1(1.5, ptr::null_mut()), SbStatus::NullPointer);
        // frees ignore NULL
        sb_profile_free(ptr::null_mut());
        sb_cache_free(ptr::null_mut());
        sb_horn_free(ptr::null_mut());
        sb_eigen_free(ptr::null_mut());
    }
}

#[test]
fn constants_match_closed_forms() {
    unsafe {
        let mut v = 0.0;
        assert_eq!(sb_lt_constant_1(1.5, &mut v), SbStatus::Ok);
        assert!((v - 3.0 / 16.0).abs() < 1e-13);
        assert_eq!(sb_lt_constant_2(1.0, &mut v), SbStatus::Ok);
        assert!((v - 1.0 / (8.0 * PI)).abs() < 1e-15);
        assert_eq!(sb_constant_ratio(1.5, &mut v), SbStatus::Ok);
        assert!((v - 3.0 * 2.0f64.sqrt() * PI).abs() < 1e-9);
        assert_eq!(sb_lower_bound_example(1.5, std::f64::consts::E, 0.0, &mut v), SbStatus::Ok);
        assert!((v - std::f64::consts::E.powf(2.5) / (2.0f64.powf(4.5) * PI * PI)).abs() < 1e-12);
        assert_eq!(sb_lower_bound_example(1.5, 10.0, 1.5, &mut v), SbStatus::DomainError);
    }
}

#[test]
fn cache_and_bound_through_the_abi() {
    unsafe {
        let mut p: *mut SbProfile = ptr::null_mut();
        assert_eq!(sb_profile_power(0.5, 0.5, &mut p), SbStatus::Ok);
        let mut c: *mut SbCache = ptr::null_mut();
        assert_eq!(sb_cache_build(p, 80.0, 0.5, 0.0, 0, &mut c), SbStatus::Ok);
        let s0 = sb_cache_s0(c);
        assert!(s0.is_finite() && s0 > 0.0);
        let mut d = 0.0;
        assert_eq!(sb_cache_normal_width(c, 2.0 * s0, &mut d), SbStatus::Ok);
        assert!(d > 0.0);
        let mut wv = 0.0;
        assert_eq!(sb_cache_potential_w(c, 2.0 * s0, &mut wv), SbStatus::Ok);
        assert!(wv >= 0.0);
        let mut theta = 0.0;
        assert_eq!(sb_cache_theta_of_arc(c, 2.0 * s0, &mut theta), SbStatus::Ok);
        assert!(theta > TAU);

        let mut rep = SbBoundReport {
            integral_term: 0.0,
            c1_term: 0.0,
            c2_term: 0.0,
            total: 0.0,
            sup_w: 0.0,
            s_star: 0.0,
            width_integral: 0.0,
            threshold_saturated: 0,
        };
        assert_eq!(
            sb_moment_bound(c, 1.5, 50.0, SbThresholdVariant::Conservative2Lambda, &mut rep),
            SbStatus::Ok
        );
        assert!(rep.total > 0.0);
        assert!((rep.total - (rep.integral_term + rep.c1_term + rep.c2_term)).abs() <= 1e-9 * rep.total);

        // small-σ variant drops the c2 piece
        let mut rep2 = rep;
        assert_eq!(
            sb_small_sigma_bound(c, 0.5, 50.0, SbThresholdVariant::Conservative2Lambda, &mut rep2),
            SbStatus::Ok
        );
        assert_eq!(rep2.c2_term, 0.0);
        assert!(rep2.total > 0.0);

        let mut asy = 0.0;
        assert_eq!(sb_asymptotic_bound(c, 1.5, 50.0, &mut asy), SbStatus::Ok);
        assert!(asy > 0.0);

        // σ below 3/2 in standard mode is a domain error
        assert_eq!(
            sb_moment_bound(c, 1.0, 50.0, SbThresholdVariant::AsStatedLambda, &mut rep),
            SbStatus::DomainError
        );

        sb_cache_free(c);
        sb_profile_free(p);
    }
}

#[test]
fn horn_counting_through_the_abi() {
    unsafe {
        let mut h: *mut SbHorn = ptr::null_mut();
        assert_eq!(sb_horn_constant(1.0, 2.5, &mut h), SbStatus::Ok);
        let mut count = 0.0;
        assert_eq!(sb_horn_weyl_count(h, 2.0 * PI * PI, &mut count), SbStatus::Ok);
        assert!((count - 2.5).abs() < 1e-8);
        sb_horn_free(h);

        assert_eq!(sb_horn_exponential(1.0, 1.0, &mut h), SbStatus::Ok);
        let mut lower = 0.0;
        assert_eq!(sb_horn_lower_estimate(h, 400.0, &mut lower), SbStatus::Ok);
        let expect = 400.0 / (2.0 * PI * PI) * (1.0 - PI / 400.0f64.sqrt());
        assert!((lower - expect).abs() < 1e-8 * expect);
        sb_horn_free(h);
    }
}

#[test]
fn eigensolver_through_the_abi() {
    unsafe {
        let mut p: *mut SbProfile = ptr::null_mut();
        assert_eq!(sb_profile_power(0.5, 0.5, &mut p), SbStatus::Ok);
        let mut r: *mut SbEigenResult = ptr::null_mut();
        assert_eq!(sb_spiral_eigenvalues(p, 0.1, 2.4, 24.0, 0, &mut r), SbStatus::Ok);
        let count = sb_eigen_count(r);
        assert!(count > 0);
        let first = sb_eigen_value(r, 0);
        assert!(first > 0.0 && first < 24.0);
        assert!(sb_eigen_value(r, count).is_nan());
        let mut m = 0.0;
        assert_eq!(sb_eigen_moment(r, 1.5, 20.0, &mut m), SbStatus::Ok);
        assert!(m >= 0.0);
        // moments past the cutoff are rejected
        assert_eq!(sb_eigen_moment(r, 1.5, 30.0, &mut m), SbStatus::DomainError);
        sb_eigen_free(r);
        sb_profile_free(p);
    }
}
