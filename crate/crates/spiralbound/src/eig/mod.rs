//! Independent sparse finite-difference eigensolver for the Dirichlet
//! Laplacian on rasterized spiral and horn domains: assembly, inertia
//! counting, a restarted shift-invert Lanczos solve certified against the
//! inertia count, Richardson extrapolation across mesh pairs, and the
//! eigenvalue-moment evaluation.

pub mod lanczos;
pub mod mask;
pub mod matrix;
pub mod skyline;

pub use mask::{rect_fd_spectrum, spiral_distance, DomainMask};
pub use matrix::{assemble, Csr};
pub use skyline::{inertia_count, SkylineFactor};

use crate::error::{Error, Result};
use lanczos::{lanczos_sweep, lock_directions, rayleigh_ritz};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Options for the iterative solve.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Per-pair residual target ||A v - lambda v|| <= residual_tol * ||v||.
    pub residual_tol: f64,
    /// Seed for the deterministic start vectors.
    pub seed: u64,
    pub max_restarts: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { residual_tol: 1e-8, seed: 0, max_restarts: 10 }
    }
}

/// Richardson-combined eigenvalues from a mesh pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Extrapolated {
    pub values: Vec<f64>,
    /// Per-eigenvalue error estimate |lambda_fine - lambda_coarse| / 3.
    pub errors: Vec<f64>,
    /// The coarse and fine spacings (h, h/2).
    pub h_pair: (f64, f64),
}

/// Eigenvalues below a cutoff with the solve metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenResult {
    /// Ascending, all strictly below `cutoff`.
    pub eigenvalues: Vec<f64>,
    pub cutoff: f64,
    /// Count from the shifted factorization; always equals
    /// `eigenvalues.len()` for an accepted solve.
    pub inertia_count: usize,
    /// Grid spacing of the mask the operator came from.
    pub h: f64,
    /// Exact residual norms ||A v - lambda v|| per pair.
    pub residuals: Vec<f64>,
    pub extrapolated: Option<Extrapolated>,
}

/// All eigenvalues of `a` below `cutoff`, certified against the inertia
/// count. Restarted shift-invert Lanczos with full reorthogonalization; the
/// final values come from a Rayleigh-Ritz extraction in `a` itself.
pub fn eigenvalues_below(a: &Csr, cutoff: f64, h: f64, opts: &SolveOptions) -> Result<EigenResult> {
    let n_target = inertia_count(a, cutoff)?;
    if n_target == 0 {
        return Ok(EigenResult {
            eigenvalues: Vec::new(),
            cutoff,
            inertia_count: 0,
            h,
            residuals: Vec::new(),
            extrapolated: None,
        });
    }
    let n = a.n;
    if n_target > n {
        return Err(Error::Solver("inertia exceeds matrix dimension".into()));
    }

    // base factorization at the origin (the operator is positive definite;
    // fall back to a slightly negative shift if a pivot degenerates)
    let factor0 = SkylineFactor::factor(a, 0.0)
        .or_else(|_| SkylineFactor::factor(a, -1e-10 * a.diag_scale().max(1.0)))?;
    let apply0 = |v: &[f64]| factor0.solve(v);
    lanczos::apply_check(&apply0, n)?;

    let mut locked: Vec<Vec<f64>> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5b1d_77a3);
    let theta_floor = 1.0 / (1.3 * cutoff);

    let mut last_rr: Option<lanczos::RayleighRitz> = None;
    for restart in 0..opts.max_restarts {
        if restart % 2 == 0 {
            // shift-invert at the origin: eigenvalues below the cutoff are
            // the dominant part of the inverted spectrum
            let missing = n_target.saturating_sub(locked.len()).max(8);
            let m_max = (n_target + 140 + 90 * (restart / 2)).min(n);
            let pairs = lanczos_sweep(
                &apply0,
                n,
                m_max,
                &locked,
                &|theta: f64| theta >= theta_floor,
                missing + 10,
                &mut rng,
            )?;
            lock_directions(&mut locked, pairs.into_iter().map(|p| p.vector).collect());
        } else {
            // interior sweep just above the cutoff resolves the pairs that
            // cluster near it
            let sigma = cutoff * (1.0 + 1e-7);
            let factor_c = SkylineFactor::factor(a, sigma)
                .or_else(|_| SkylineFactor::factor(a, cutoff * (1.0 + 1e-6)))?;
            let apply_c = |v: &[f64]| factor_c.solve(v);
            let m_max = (220 + 80 * (restart / 2)).min(n);
            let pairs = lanczos_sweep(
                &apply_c,
                n,
                m_max,
                &locked,
                &|theta: f64| theta < 0.0,
                n_target.min(60) + 10,
                &mut rng,
            )?;
            lock_directions(&mut locked, pairs.into_iter().map(|p| p.vector).collect());
        }

        if locked.is_empty() {
            continue;
        }
        let mut rr = rayleigh_ritz(a, &locked)?;
        // inverse-iteration refinement of the extracted subspace
        for _ in 0..4 {
            let below = rr.values.iter().take_while(|&&v| v < cutoff).count();
            let ok = below == n_target
                && rr.residuals[..below].iter().all(|&r| r <= opts.residual_tol);
            if ok || below == 0 {
                break;
            }
            let refine_count = (below + 8).min(rr.vectors.len());
            let mut refined: Vec<Vec<f64>> = Vec::with_capacity(refine_count);
            for v in rr.vectors.iter().take(refine_count) {
                refined.push(apply0(v));
            }
            // keep moderately-above-cutoff directions as padding
            for (i, v) in rr.vectors.iter().enumerate().skip(refine_count) {
                if rr.values[i] < cutoff * 1.5 {
                    refined.push(v.clone());
                }
            }
            rr = rayleigh_ritz(a, &refined)?;
            locked = rr.vectors.clone();
        }

        let below = rr.values.iter().take_while(|&&v| v < cutoff).count();
        let resid_ok = rr.residuals[..below].iter().all(|&r| r <= opts.residual_tol);
        if below == n_target && resid_ok {
            return Ok(EigenResult {
                eigenvalues: rr.values[..below].to_vec(),
                cutoff,
                inertia_count: n_target,
                h,
                residuals: rr.residuals[..below].to_vec(),
                extrapolated: None,
            });
        }
        last_rr = Some(rr);
    }

    if let Some(rr) = last_rr {
        let below = rr.values.iter().take_while(|&&v| v < cutoff).count();
        if below != n_target {
            return Err(Error::CountMismatch { expected: n_target, found: below });
        }
        let worst = rr.residuals[..below].iter().cloned().fold(0.0f64, f64::max);
        return Err(Error::Solver(format!(
            "eigensolver did not reach the residual target: worst residual {worst:.3e} > {:.3e}",
            opts.residual_tol
        )));
    }
    Err(Error::Solver("eigensolver made no progress".into()))
}

/// Eigenvalue moment over the computed spectrum below Lambda; sigma = 0
/// gives the counting function.
pub fn moment(result: &EigenResult, sigma: f64, lambda: f64) -> Result<f64> {
    if result.cutoff < lambda {
        return Err(Error::Domain(format!(
            "moment: cutoff {} does not cover {lambda}; the spectrum below it is incomplete",
            result.cutoff
        )));
    }
    Ok(moment_of(&result.eigenvalues, sigma, lambda))
}

/// Moment of an explicit eigenvalue list (used for extrapolated spectra).
pub fn moment_of(values: &[f64], sigma: f64, lambda: f64) -> f64 {
    values.iter().filter(|&&ev| ev < lambda).map(|&ev| (lambda - ev).powf(sigma)).sum()
}

/// Pairwise Richardson combination (4 fine - coarse)/3 of two solves of the
/// same problem on meshes h and h/2.
pub fn extrapolate(coarse: &EigenResult, fine: &EigenResult) -> Result<Extrapolated> {
    if (fine.h - 0.5 * coarse.h).abs() > 1e-9 * coarse.h {
        return Err(Error::Domain(format!(
            "extrapolate: mesh pair must halve the spacing (got {} and {})",
            coarse.h, fine.h
        )));
    }
    if coarse.eigenvalues.len() != fine.eigenvalues.len() {
        return Err(Error::CountMismatch {
            expected: coarse.eigenvalues.len(),
            found: fine.eigenvalues.len(),
        });
    }
    let mut values = Vec::with_capacity(fine.eigenvalues.len());
    let mut errors = Vec::with_capacity(fine.eigenvalues.len());
    for (c, f) in coarse.eigenvalues.iter().zip(&fine.eigenvalues) {
        values.push((4.0 * f - c) / 3.0);
        errors.push((f - c).abs() / 3.0);
    }
    Ok(Extrapolated { values, errors, h_pair: (coarse.h, fine.h) })
}

/// Trim a result to its first `count` eigenvalues (used to align mesh pairs
/// before extrapolation when a near-cutoff eigenvalue crosses between grids).
pub fn truncate_to(result: &EigenResult, count: usize) -> EigenResult {
    let count = count.min(result.eigenvalues.len());
    EigenResult {
        eigenvalues: result.eigenvalues[..count].to_vec(),
        cutoff: result.cutoff,
        inertia_count: count,
        h: result.h,
        residuals: result.residuals[..count.min(result.residuals.len())].to_vec(),
        extrapolated: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn moment_direct_arithmetic() {
        let r = EigenResult {
            eigenvalues: vec![1.0, 2.0, 5.0],
            cutoff: 6.0,
            inertia_count: 3,
            h: 0.1,
            residuals: vec![0.0; 3],
            extrapolated: None,
        };
        let m = moment(&r, 1.5, 3.0).unwrap();
        assert_relative_eq!(m, 2.0f64.powf(1.5) + 1.0, max_relative = 1e-14);
        assert_eq!(moment(&r, 1.5, 0.5).unwrap(), 0.0);
        assert_eq!(moment(&r, 0.0, 3.0).unwrap(), 2.0);
        assert!(moment(&r, 1.5, 7.0).is_err());
    }

    #[test]
    fn extrapolate_fixed_point_and_errors() {
        let mk = |h: f64, vals: &[f64]| EigenResult {
            eigenvalues: vals.to_vec(),
            cutoff: 100.0,
            inertia_count: vals.len(),
            h,
            residuals: vec![0.0; vals.len()],
            extrapolated: None,
        };
        let same = extrapolate(&mk(0.2, &[3.0, 7.0]), &mk(0.1, &[3.0, 7.0])).unwrap();
        assert_eq!(same.values, vec![3.0, 7.0]);
        assert_eq!(same.errors, vec![0.0, 0.0]);

        let ex = extrapolate(&mk(0.2, &[3.3]), &mk(0.1, &[3.075])).unwrap();
        assert_relative_eq!(ex.values[0], 3.0, max_relative = 1e-14);
        assert_relative_eq!(ex.errors[0], 0.075, max_relative = 1e-12);

        assert!(extrapolate(&mk(0.2, &[1.0, 2.0]), &mk(0.1, &[1.0])).is_err());
        assert!(extrapolate(&mk(0.2, &[1.0]), &mk(0.15, &[1.0])).is_err());
    }

    #[test]
    fn diagonal_matrix_solve() {
        let a = Csr::diagonal(&[1.0, 2.0, 5.0, 9.0, 30.0]);
        let r = eigenvalues_below(&a, 10.0, 1.0, &SolveOptions::default()).unwrap();
        assert_eq!(r.inertia_count, 4);
        assert_eq!(r.eigenvalues.len(), 4);
        for (got, want) in r.eigenvalues.iter().zip([1.0, 2.0, 5.0, 9.0]) {
            assert_relative_eq!(*got, want, max_relative = 1e-10);
        }
    }

    #[test]
    fn empty_result_below_spectrum() {
        let a = Csr::diagonal(&[3.0, 4.0]);
        let r = eigenvalues_below(&a, 1.0, 1.0, &SolveOptions::default()).unwrap();
        assert!(r.eigenvalues.is_empty());
        assert_eq!(r.inertia_count, 0);
    }
}
