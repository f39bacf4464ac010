//! Shift-invert Lanczos with full reorthogonalization and deflation, plus
//! the Rayleigh-Ritz extraction used to merge candidate subspaces in the
//! original operator.

use super::matrix::Csr;
use crate::error::{Error, Result};
use crate::numerics::symeig;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let nv = norm(&v);
    for x in &mut v {
        *x /= nv;
    }
    v
}

/// Remove the components of `w` along every vector in each basis (one pass).
fn orthogonalize(w: &mut [f64], bases: &[&[Vec<f64>]]) {
    for basis in bases {
        for u in basis.iter() {
            let c = dot(w, u);
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi -= c * ui;
            }
        }
    }
}

/// Converged Ritz pair of the inverted operator.
pub struct RitzPair {
    pub theta: f64,
    pub resid_bound: f64,
    pub vector: Vec<f64>,
}

/// One Lanczos sweep on the operator `apply` (full reorthogonalization
/// against the own basis and the `locked` set). Ritz pairs passing `keep`
/// and the residual bound are returned; the sweep stops early once `needed`
/// of them have converged.
pub fn lanczos_sweep(
    apply: &dyn Fn(&[f64]) -> Vec<f64>,
    n: usize,
    m_max: usize,
    locked: &[Vec<f64>],
    keep: &dyn Fn(f64) -> bool,
    needed: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<RitzPair>> {
    let m_max = m_max.min(n.saturating_sub(locked.len())).max(1);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m_max);
    let mut alphas: Vec<f64> = Vec::with_capacity(m_max);
    let mut betas: Vec<f64> = Vec::with_capacity(m_max);

    let mut v = random_unit(n, rng);
    orthogonalize(&mut v, &[&basis, locked]);
    let nv = norm(&v);
    if nv < 1e-12 {
        return Ok(Vec::new());
    }
    for x in &mut v {
        *x /= nv;
    }
    basis.push(v);

    let check_every = 48usize;

    for k in 0..m_max {
        let mut w = apply(&basis[k]);
        if k > 0 {
            let beta = betas[k - 1];
            let prev = &basis[k - 1];
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= beta * pi;
            }
        }
        let alpha = dot(&w, &basis[k]);
        {
            let cur = &basis[k];
            for (wi, ci) in w.iter_mut().zip(cur) {
                *wi -= alpha * ci;
            }
        }
        alphas.push(alpha);
        // full reorthogonalization, two passes
        orthogonalize(&mut w, &[&basis, locked]);
        orthogonalize(&mut w, &[&basis, locked]);
        let mut beta = norm(&w);
        let scale = alphas.iter().map(|a| a.abs()).fold(0.0f64, f64::max).max(1e-300);
        if beta <= 1e-13 * scale {
            // invariant subspace: restart the recurrence in a fresh direction
            let mut fresh = random_unit(n, rng);
            orthogonalize(&mut fresh, &[&basis, locked]);
            orthogonalize(&mut fresh, &[&basis, locked]);
            let nf = norm(&fresh);
            if nf < 1e-10 {
                // whole complement exhausted
                return Ok(extract(&alphas, &betas, &basis, keep));
            }
            for x in &mut fresh {
                *x /= nf;
            }
            w = fresh;
            beta = 0.0;
        } else {
            for x in &mut w {
                *x /= beta;
            }
        }
        betas.push(beta);
        basis.push(w);

        let steps = alphas.len();
        let last = steps == m_max;
        if (steps.is_multiple_of(check_every) || last) && steps >= 2 {
            let converged = count_converged(&alphas, &betas, keep);
            if converged >= needed || last {
                return Ok(extract(&alphas, &betas, &basis, keep));
            }
        }
    }
    Ok(extract(&alphas, &betas, &basis, keep))
}

fn ritz_decomposition(alphas: &[f64], betas: &[f64]) -> Result<(symeig::SymEigen, f64)> {
    let m = alphas.len();
    let eig = symeig::tridiag_eigen(alphas, &betas[..m.saturating_sub(1)], m)?;
    let beta_last = betas.get(m - 1).copied().unwrap_or(0.0);
    Ok((eig, beta_last))
}

fn convergence_tol(eig: &symeig::SymEigen) -> f64 {
    let theta_scale = eig.values.iter().map(|t| t.abs()).fold(0.0f64, f64::max).max(1e-300);
    1e-11 * theta_scale
}

fn count_converged(alphas: &[f64], betas: &[f64], keep: &dyn Fn(f64) -> bool) -> usize {
    let Ok((eig, beta_last)) = ritz_decomposition(alphas, betas) else {
        return 0;
    };
    let tol = convergence_tol(&eig);
    let m = alphas.len();
    (0..m)
        .filter(|&j| {
            let theta = eig.values[j];
            keep(theta) && (beta_last * eig.vectors[(m - 1) * m + j]).abs() <= tol
        })
        .count()
}

fn extract(alphas: &[f64], betas: &[f64], basis: &[Vec<f64>], keep: &dyn Fn(f64) -> bool) -> Vec<RitzPair> {
    let m = alphas.len();
    if m == 0 {
        return Vec::new();
    }
    let Ok((eig, beta_last)) = ritz_decomposition(alphas, betas) else {
        return Vec::new();
    };
    let tol = convergence_tol(&eig);
    let n = basis[0].len();
    let mut out = Vec::new();
    for j in 0..m {
        let theta = eig.values[j];
        let resid = (beta_last * eig.vectors[(m - 1) * m + j]).abs();
        if !keep(theta) || resid > tol {
            continue;
        }
        let mut x = vec![0.0; n];
        for (i, base_vec) in basis.iter().take(m).enumerate() {
            let z = eig.vectors[i * m + j];
            if z != 0.0 {
                for (xi, bi) in x.iter_mut().zip(base_vec) {
                    *xi += z * bi;
                }
            }
        }
        let nx = norm(&x);
        if nx > 0.0 {
            for xi in &mut x {
                *xi /= nx;
            }
        }
        out.push(RitzPair { theta, resid_bound: resid, vector: x });
    }
    out
}

/// Rayleigh-Ritz in the original operator over the span of `basis`.
/// Returns ascending eigenvalue approximations, their vectors, and exact
/// residual norms ‖A x − λ x‖.
pub struct RayleighRitz {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
}

pub fn rayleigh_ritz(a: &Csr, basis: &[Vec<f64>]) -> Result<RayleighRitz> {
    let n = a.n;
    // orthonormalize (modified Gram-Schmidt, two passes), dropping
    // numerically dependent directions
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(basis.len());
    for vec in basis {
        let mut w = vec.clone();
        orthogonalize(&mut w, &[&q]);
        orthogonalize(&mut w, &[&q]);
        let nw = norm(&w);
        if nw > 1e-8 {
            for x in &mut w {
                *x /= nw;
            }
            q.push(w);
        }
    }
    let k = q.len();
    if k == 0 {
        return Ok(RayleighRitz { values: Vec::new(), vectors: Vec::new(), residuals: Vec::new() });
    }
    let mut aq: Vec<Vec<f64>> = Vec::with_capacity(k);
    for qi in &q {
        let mut y = vec![0.0; n];
        a.matvec(qi, &mut y);
        aq.push(y);
    }
    let mut s = vec![0.0f64; k * k];
    for i in 0..k {
        for j in i..k {
            let v = dot(&q[i], &aq[j]);
            s[i * k + j] = v;
            s[j * k + i] = v;
        }
    }
    let eig = symeig::sym_eigen(&s, k)?;
    let mut values = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for j in 0..k {
        let lambda = eig.values[j];
        let mut x = vec![0.0; n];
        let mut ax = vec![0.0; n];
        for i in 0..k {
            let z = eig.vectors[i * k + j];
            if z != 0.0 {
                for t in 0..n {
                    x[t] += z * q[i][t];
                    ax[t] += z * aq[i][t];
                }
            }
        }
        let mut r2 = 0.0;
        for t in 0..n {
            let r = ax[t] - lambda * x[t];
            r2 += r * r;
        }
        values.push(lambda);
        vectors.push(x);
        residuals.push(r2.sqrt());
    }
    Ok(RayleighRitz { values, vectors, residuals })
}

/// Append `fresh` directions to `locked`, dropping near-duplicates.
pub fn lock_directions(locked: &mut Vec<Vec<f64>>, fresh: Vec<Vec<f64>>) {
    for mut v in fresh {
        orthogonalize(&mut v, &[locked]);
        orthogonalize(&mut v, &[locked]);
        let nv = norm(&v);
        if nv > 1e-6 {
            for x in &mut v {
                *x /= nv;
            }
            locked.push(v);
        }
    }
}

/// Check that the factorization-based operator is usable as a linear map.
pub fn apply_check(apply: &dyn Fn(&[f64]) -> Vec<f64>, n: usize) -> Result<()> {
    let e0: Vec<f64> = (0..n).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect();
    let y = apply(&e0);
    if y.len() != n || y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Solver("operator application produced non-finite values".into()));
    }
    Ok(())
}
