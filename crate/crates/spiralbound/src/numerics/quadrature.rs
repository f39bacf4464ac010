//! Adaptive Gauss-Kronrod quadrature (15-point Kronrod / 7-point Gauss).

use crate::error::{Error, Result};

/// Abscissae of the 15-point Kronrod rule on [-1, 1] (positive half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

/// Weights of the 15-point Kronrod rule, matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Weights of the embedded 7-point Gauss rule (nodes XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of one Kronrod panel: (kronrod value, error estimate, |f| integral estimate).
fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);

    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = fc.abs() * WGK[7];
    let mut fv = [0.0f64; 15];
    fv[7] = fc;

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();

    // QUADPACK-style rescaled error estimate.
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    let tiny = f64::MIN_POSITIVE / (50.0 * f64::EPSILON);
    if res_abs > tiny {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

/// Integrate `f` over `[a, b]` adaptively until the total error estimate is
/// below `max(abs_tol, rel_tol * |integral|)`.
///
/// Returns the integral and the final error estimate. Fails with a
/// `Numerical` error carrying the achieved tolerance if the panel budget is
/// exhausted first.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<(f64, f64)> {
    if a == b {
        return Ok((0.0, 0.0));
    }
    let (v, e) = kronrod15(&f, a, b);
    let mut panels = vec![Panel { a, b, value: v, err: e }];
    let max_panels = 4000;

    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        let target = abs_tol.max(rel_tol * total.abs());
        if err <= target {
            return Ok((total, err));
        }
        if panels.len() >= max_panels {
            return Err(Error::Numerical(format!(
                "quadrature did not converge: error {err:.3e} > target {target:.3e} after {} panels",
                panels.len()
            )));
        }
        // Split the worst panel.
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .unwrap();
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid == p.a || mid == p.b {
            // Interval no longer splittable; keep it and accept its error.
            panels.push(p);
            let total: f64 = panels.iter().map(|q| q.value).sum();
            let err: f64 = panels.iter().map(|q| q.err).sum();
            return Ok((total, err));
        }
        let (v1, e1) = kronrod15(&f, p.a, mid);
        let (v2, e2) = kronrod15(&f, mid, p.b);
        panels.push(Panel { a: p.a, b: mid, value: v1, err: e1 });
        panels.push(Panel { a: mid, b: p.b, value: v2, err: e2 });
    }
}

/// Convenience wrapper with a relative tolerance only.
pub fn integrate_rel<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    integrate(f, a, b, rel_tol, 0.0).map(|(v, _)| v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let (v, _) = integrate(|x| 3.0 * x * x, 0.0, 2.0, 1e-12, 0.0).unwrap();
        assert_relative_eq!(v, 8.0, max_relative = 1e-14);
    }

    #[test]
    fn oscillatory_integrand() {
        let (v, _) = integrate(|x| (10.0 * x).sin(), 0.0, 1.0, 1e-12, 0.0).unwrap();
        let exact = (1.0 - 10.0f64.cos()) / 10.0;
        assert_relative_eq!(v, exact, max_relative = 1e-11);
    }

    #[test]
    fn sqrt_endpoint_singularity() {
        // d/dx (2/3 x^{3/2}) = sqrt(x)
        let (v, _) = integrate(|x| x.sqrt(), 0.0, 1.0, 1e-11, 0.0).unwrap();
        assert_relative_eq!(v, 2.0 / 3.0, max_relative = 1e-10);
    }

    #[test]
    fn arc_length_of_archimedean_form() {
        // integral of sqrt(1 + x^2) has the closed form (x sqrt(1+x^2) + asinh x)/2
        let b = 2.0 * std::f64::consts::PI;
        let (v, _) = integrate(|x| (1.0 + x * x).sqrt(), 0.0, b, 1e-12, 0.0).unwrap();
        let exact = 0.5 * (b * (1.0 + b * b).sqrt() + b.asinh());
        assert_relative_eq!(v, exact, max_relative = 1e-12);
    }

    #[test]
    fn zero_width_interval() {
        let (v, e) = integrate(|x| x, 3.0, 3.0, 1e-12, 0.0).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(e, 0.0);
    }

    #[test]
    fn reversed_interval_is_signed() {
        let (v, _) = integrate(|x| x, 0.0, 1.0, 1e-12, 0.0).unwrap();
        let (w, _) = integrate(|x| x, 1.0, 0.0, 1e-12, 0.0).unwrap();
        assert_relative_eq!(v, -w, max_relative = 1e-14);
    }
}
