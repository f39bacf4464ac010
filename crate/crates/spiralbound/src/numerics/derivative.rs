//! Richardson-extrapolated central differences with automatic step control.
//!
//! The geometry cache exposes curvature as a function of arc length only
//! through pointwise evaluation, so first and second derivatives are taken
//! numerically. Fourth-order central stencils are combined over a ladder of
//! step sizes; the returned error estimate is the discrepancy between the two
//! best levels.

/// Value together with an absolute error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn d1_stencil<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h)
}

fn d2_stencil<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (-(f(x + 2.0 * h) + f(x - 2.0 * h)) + 16.0 * (f(x + h) + f(x - h)) - 30.0 * f(x)) / (12.0 * h * h)
}

fn ladder<S: Fn(f64) -> f64>(stencil: S, h0: f64, levels: usize) -> Estimate {
    // Walk h downward; at each level Richardson-combine with the previous
    // one (both stencils are O(h^4)) and keep the pair with the smallest
    // discrepancy. Stops early when roundoff starts to dominate.
    let mut best = Estimate { value: f64::NAN, error: f64::INFINITY };
    let mut prev: Option<f64> = None;
    let mut h = h0;
    let mut prev_err = f64::INFINITY;
    for _ in 0..levels {
        let v = stencil(h);
        if let Some(p) = prev {
            // The O(h^4) error of the h-step estimate is ~(p - v)/15 where v
            // is the h/2-step value; the combination cancels it.
            let combined = v + (v - p) / 15.0;
            let err = (v - p).abs() / 15.0 + f64::EPSILON * combined.abs();
            if err < best.error {
                best = Estimate { value: combined, error: err };
            }
            if err > 4.0 * prev_err {
                break; // roundoff regime
            }
            prev_err = err;
        }
        prev = Some(v);
        h *= 0.5;
    }
    if !best.value.is_finite() {
        best = Estimate { value: prev.unwrap_or(f64::NAN), error: f64::INFINITY };
    }
    best
}

/// First derivative of `f` at `x` with step ladder starting at `h0`.
pub fn deriv1<F: Fn(f64) -> f64>(f: F, x: f64, h0: f64) -> Estimate {
    ladder(|h| d1_stencil(&f, x, h), h0, 10)
}

/// Second derivative of `f` at `x`.
pub fn deriv2<F: Fn(f64) -> f64>(f: F, x: f64, h0: f64) -> Estimate {
    ladder(|h| d2_stencil(&f, x, h), h0, 10)
}
