//! Pipeline orchestration: build geometry, evaluate bounds, run the
//! eigensolver, compare, and emit machine-readable reports plus columnar
//! plot data.

use super::config::RunConfig;
use crate::bound::{
    self, arm_gaps, build_arm_caches, BoundMode, BoundParams, BoundPieces, BoundReport,
};
use crate::eig::{self, DomainMask, EigenResult, SolveOptions};
use crate::error::{Error, Result};
use crate::geometry::GeometryCache;
use crate::horn;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Pipeline selection. `Auto` runs whatever the config describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Auto,
    Geometry,
    Bound,
    Horn,
    Eigs,
    Compare,
    MultiArm,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeometrySummary {
    pub arm: usize,
    pub gap: f64,
    pub s0: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub sup_dgamma: f64,
    pub sup_w: f64,
    pub central_area: f64,
    pub central_area_std_error: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenSummary {
    pub h: f64,
    pub r_max: f64,
    pub cutoff: f64,
    pub active_nodes: usize,
    pub count: usize,
    pub inertia_count: usize,
    pub max_residual: f64,
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentRow {
    pub sigma: f64,
    pub lambda: f64,
    pub moment: f64,
    pub error_budget: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HornRow {
    pub lambda: f64,
    pub weyl_count: f64,
    pub lower_estimate: f64,
}

/// One line of the bound-versus-eigensolver comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub lambda: f64,
    pub sigma: f64,
    pub numerical_moment: f64,
    pub moment_error_budget: f64,
    pub bound_total: f64,
    pub integral_term: f64,
    pub c1_term: f64,
    pub c2_term: f64,
    /// bound_total / numerical_moment; must be ≥ 1 within the error budget.
    pub ratio: f64,
    pub asymptotic_bound: f64,
    pub lower_bound_example: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub seed: u64,
    pub threads: usize,
    pub geometry: Vec<GeometrySummary>,
    pub bounds: Vec<BoundReport>,
    pub multi_arm_totals: Vec<MultiArmTotal>,
    pub horn: Vec<HornRow>,
    pub eigen: Vec<EigenSummary>,
    pub extrapolated: Option<eig::Extrapolated>,
    pub moments: Vec<MomentRow>,
    pub comparison: Vec<ComparisonRow>,
    pub gates_passed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiArmTotal {
    pub sigma: f64,
    pub lambda: f64,
    pub total: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FailureManifest {
    pub stage: String,
    pub error: String,
}

/// Outcome of a pipeline run.
#[derive(Debug)]
pub struct RunOutcome {
    pub report: RunReport,
    pub report_path: PathBuf,
    pub gates_passed: bool,
}

fn write_failure(out_dir: &Path, stage: &str, error: &Error) {
    let manifest = FailureManifest { stage: stage.into(), error: error.to_string() };
    if let Ok(json) = serde_json::to_string_pretty(&manifest) {
        let _ = std::fs::create_dir_all(out_dir);
        let _ = std::fs::write(out_dir.join("failure_manifest.json"), json);
    }
}

/// Execute the requested pipelines and write `report.json` plus the `.dat`
/// plot files into `out_dir`. On error a failure manifest is flushed.
pub fn run(config: &RunConfig, stage: Stage, out_dir: &Path) -> Result<RunOutcome> {
    match run_inner(config, stage, out_dir) {
        Ok(outcome) => Ok(outcome),
        Err(e) => {
            write_failure(out_dir, stage_name(stage), &e);
            Err(e)
        }
    }
}

fn stage_name(stage: Stage) -> &'static str {
    match stage {
        Stage::Auto => "auto",
        Stage::Geometry => "geometry",
        Stage::Bound => "bound",
        Stage::Horn => "horn",
        Stage::Eigs => "eigs",
        Stage::Compare => "compare",
        Stage::MultiArm => "multiarm",
    }
}

fn run_inner(config: &RunConfig, stage: Stage, out_dir: &Path) -> Result<RunOutcome> {
    config.validate()?;
    std::fs::create_dir_all(out_dir)?;

    let want_bound = matches!(stage, Stage::Auto | Stage::Bound | Stage::Compare | Stage::MultiArm)
        && config.bound.is_some();
    let want_horn = matches!(stage, Stage::Auto | Stage::Horn) && config.horn.is_some();
    let want_eigs =
        matches!(stage, Stage::Auto | Stage::Eigs | Stage::Compare) && config.eigs.is_some();
    let want_compare = matches!(stage, Stage::Auto | Stage::Compare) && want_bound && want_eigs;
    let multi_arm = matches!(stage, Stage::MultiArm) || config.offsets().len() > 1;

    let mut report = RunReport {
        schema_version: 1,
        seed: config.seed,
        threads: config.threads,
        geometry: Vec::new(),
        bounds: Vec::new(),
        multi_arm_totals: Vec::new(),
        horn: Vec::new(),
        eigen: Vec::new(),
        extrapolated: None,
        moments: Vec::new(),
        comparison: Vec::new(),
        gates_passed: true,
    };

    // geometry (skipped for horn-only runs and configs without a profile)
    let mut caches: Vec<GeometryCache> = Vec::new();
    let mut pieces: Vec<BoundPieces> = Vec::new();
    let geometry_needed = match stage {
        Stage::Horn => false,
        Stage::Auto => config.profile.is_some(),
        _ => true,
    };
    if geometry_needed {
        let profile = config.build_profile()?;
        let offsets = config.offsets();
        arm_gaps(&offsets)?;
        caches = build_arm_caches(&profile, &offsets, &config.cache_options())?;
        for (j, cache) in caches.iter().enumerate() {
            let p = BoundPieces::compute(cache, config.geometry.mc_samples, config.seed)?;
            report.geometry.push(GeometrySummary {
                arm: j,
                gap: cache.gap(),
                s0: cache.s0(),
                s_min: cache.s_min(),
                s_max: cache.s_max(),
                sup_dgamma: cache.sup_dgamma(),
                sup_w: p.sup_w,
                central_area: p.area.value,
                central_area_std_error: p.area.std_error,
            });
            emit_geometry_dat(cache, j, out_dir)?;
            pieces.push(p);
        }
    }

    if want_bound {
        let bc = config.bound.as_ref().unwrap();
        for &sigma in &bc.sigma {
            for &lambda in &bc.lambda {
                let params = BoundParams {
                    sigma,
                    lambda,
                    variant: bc.threshold_variant,
                    mode: bc.mode,
                };
                if multi_arm && caches.len() > 1 {
                    let mut total = 0.0;
                    for (cache, p) in caches.iter().zip(&pieces) {
                        let rep = eval_bound(cache, &params, p)?;
                        total += rep.total;
                        report.bounds.push(rep);
                    }
                    report.multi_arm_totals.push(MultiArmTotal { sigma, lambda, total });
                } else {
                    report.bounds.push(eval_bound(&caches[0], &params, &pieces[0])?);
                }
            }
        }
    }

    if want_horn {
        let hc = config.horn.as_ref().unwrap();
        let horn_profile = config.build_horn()?;
        for &lambda in &hc.lambda {
            report.horn.push(HornRow {
                lambda,
                weyl_count: horn::weyl_horn_count(&horn_profile, lambda)?,
                lower_estimate: horn::count_lower_estimate(&horn_profile, lambda)?,
            });
        }
    }

    let mut results_by_h: Vec<EigenResult> = Vec::new();
    if want_eigs {
        let ec = config.eigs.as_ref().unwrap();
        let lambdas = eig_lambdas(config)?;
        let lambda_max = lambdas.last().copied().unwrap_or(0.0);
        if lambda_max > 0.0 {
            let profile = config.build_profile()?;
            let cutoff = ec.cutoff_factor * lambda_max;
            // independent jobs per mesh, merged in mesh order
            let jobs: Vec<(usize, f64)> = ec.h.iter().cloned().enumerate().collect();
            let solve_one = |h: f64| -> Result<(EigenSummary, EigenResult)> {
                let mask = DomainMask::spiral(&profile, h, ec.r_max)?;
                let a = eig::assemble(&mask);
                let opts = SolveOptions { seed: config.seed, ..Default::default() };
                let res = eig::eigenvalues_below(&a, cutoff, h, &opts)?;
                let summary = EigenSummary {
                    h,
                    r_max: ec.r_max,
                    cutoff,
                    active_nodes: mask.active_count(),
                    count: res.eigenvalues.len(),
                    inertia_count: res.inertia_count,
                    max_residual: res.residuals.iter().cloned().fold(0.0f64, f64::max),
                    eigenvalues: res.eigenvalues.clone(),
                    residuals: res.residuals.clone(),
                };
                Ok((summary, res))
            };
            let mut outputs: Vec<Option<Result<(EigenSummary, EigenResult)>>> =
                (0..jobs.len()).map(|_| None).collect();
            if config.threads > 1 && jobs.len() > 1 {
                std::thread::scope(|scope| {
                    let mut handles = Vec::new();
                    for chunk in jobs.chunks(config.threads.max(1)) {
                        for &(idx, h) in chunk {
                            handles.push((idx, scope.spawn(move || solve_one(h))));
                        }
                        let drained: Vec<_> = std::mem::take(&mut handles);
                        for (idx, handle) in drained {
                            outputs[idx] = Some(handle.join().expect("solver thread panicked"));
                        }
                    }
                });
            } else {
                for &(idx, h) in &jobs {
                    outputs[idx] = Some(solve_one(h));
                }
            }
            for out in outputs {
                let (summary, res) = out.expect("job not executed")?;
                report.eigen.push(summary);
                results_by_h.push(res);
            }
            if ec.extrapolate && results_by_h.len() >= 2 {
                let k = results_by_h.len();
                let (coarse, fine) = (&results_by_h[k - 2], &results_by_h[k - 1]);
                // align the mesh pair below a guard level between Λ and the
                // cutoff so near-cutoff crossings cannot break the pairing
                let guard = 0.5 * (lambda_max + cutoff);
                let n_c = coarse.eigenvalues.iter().take_while(|&&v| v < guard).count();
                let n_f = fine.eigenvalues.iter().take_while(|&&v| v < guard).count();
                let n = n_c.min(n_f);
                report.extrapolated = Some(eig::extrapolate(
                    &eig::truncate_to(coarse, n),
                    &eig::truncate_to(fine, n),
                )?);
            }
            // moments table over the requested powers
            let sigmas = ec
                .sigma
                .clone()
                .or_else(|| config.bound.as_ref().map(|b| b.sigma.clone()))
                .unwrap_or_default();
            for &sigma in &sigmas {
                for &lambda in &lambdas {
                    let (moment, error_budget) = best_moment(&report, &results_by_h, sigma, lambda)?;
                    report.moments.push(MomentRow { sigma, lambda, moment, error_budget });
                }
            }
        }
    }

    if want_compare {
        let bc = config.bound.as_ref().unwrap();
        let lambdas = eig_lambdas(config)?;
        let cache = &caches[0];
        let p = &pieces[0];
        let w = cache.sup_dgamma().min(1.0 - 1e-9);
        for &sigma in &bc.sigma {
            for &lambda in &lambdas {
                if !bc.lambda.contains(&lambda) {
                    continue;
                }
                let params =
                    BoundParams { sigma, lambda, variant: bc.threshold_variant, mode: bc.mode };
                let rep = eval_bound(cache, &params, p)?;
                let (m, budget) = best_moment(&report, &results_by_h, sigma, lambda)?;
                let asy = if sigma >= 1.5 {
                    bound::asymptotic_bound_with(cache, sigma, lambda, p.area.value)?
                } else {
                    0.0
                };
                let lower = if lambda > 1.0 { bound::lower_bound_example(sigma, lambda, w)? } else { 0.0 };
                let ratio = if m > 0.0 { rep.total / m } else { f64::INFINITY };
                if m + budget > rep.total {
                    report.gates_passed = false;
                }
                report.comparison.push(ComparisonRow {
                    lambda,
                    sigma,
                    numerical_moment: m,
                    moment_error_budget: budget,
                    bound_total: rep.total,
                    integral_term: rep.integral_term,
                    c1_term: rep.c1_term,
                    c2_term: rep.c2_term,
                    ratio,
                    asymptotic_bound: asy,
                    lower_bound_example: lower,
                });
            }
        }
    }

    emit_plot_data(&report, out_dir)?;
    let report_path = out_dir.join("report.json");
    std::fs::write(&report_path, to_json(&report)?)?;
    let gates_passed = report.gates_passed;
    Ok(RunOutcome { report, report_path, gates_passed })
}

fn eval_bound(cache: &GeometryCache, params: &BoundParams, pieces: &BoundPieces) -> Result<BoundReport> {
    match params.mode {
        BoundMode::Standard => bound::moment_bound_with(cache, params, pieces),
        BoundMode::SmallSigma => bound::small_sigma_bound_with(cache, params, pieces),
    }
}

fn eig_lambdas(config: &RunConfig) -> Result<Vec<f64>> {
    let ec = config.eigs.as_ref().ok_or_else(|| Error::Config("no [eigs] section".into()))?;
    if let Some(l) = &ec.lambda {
        return Ok(l.clone());
    }
    config
        .bound
        .as_ref()
        .map(|b| b.lambda.clone())
        .ok_or_else(|| Error::Config("eigs needs a lambda list (own or from [bound])".into()))
}

/// Moment at (σ, Λ) from the best available spectrum: the extrapolated list
/// when present, otherwise the finest mesh. The budget re-evaluates the
/// moment with each eigenvalue lowered by its error estimate plus the
/// residual allowance.
fn best_moment(
    report: &RunReport,
    results: &[EigenResult],
    sigma: f64,
    lambda: f64,
) -> Result<(f64, f64)> {
    if let Some(ex) = &report.extrapolated {
        let m = eig::moment_of(&ex.values, sigma, lambda);
        let lowered: Vec<f64> =
            ex.values.iter().zip(&ex.errors).map(|(v, e)| v - e - 1e-8 * (1.0 + v.abs())).collect();
        let upper = eig::moment_of(&lowered, sigma, lambda);
        return Ok((m, (upper - m).max(0.0)));
    }
    let finest = results
        .last()
        .ok_or_else(|| Error::Solver("no eigensolver results for the comparison".into()))?;
    let m = eig::moment(finest, sigma, lambda)?;
    Ok((m, 0.0))
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Config(format!("report serialization: {e}")))
}

fn fmt_row(values: &[f64]) -> String {
    let mut line = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            line.push(' ');
        }
        let _ = write!(line, "{v:.17e}");
    }
    line.push('\n');
    line
}

fn emit_geometry_dat(cache: &GeometryCache, arm: usize, out_dir: &Path) -> Result<()> {
    let (s, theta, d, gamma) = cache.nodes();
    let mut text = String::from("# s theta gamma d dgamma\n");
    for i in 0..s.len() {
        let th = theta.get(i).copied().unwrap_or(f64::NAN);
        text += &fmt_row(&[s[i], th, gamma[i], d[i], d[i] * gamma[i]]);
    }
    std::fs::write(out_dir.join(format!("geometry_arm{arm}.dat")), text)?;

    // d(s) and W(s) on a uniform grid beyond s0
    let mut wtext = String::from("# s d w\n");
    let n = 400;
    for i in 0..n {
        let sv = cache.s0() + (cache.s_max() - cache.s0()) * i as f64 / (n - 1) as f64;
        let dv = cache.d_interp(sv);
        let wv = bound::potential_w(cache, sv)?;
        wtext += &fmt_row(&[sv, dv, wv]);
    }
    std::fs::write(out_dir.join(format!("potential_arm{arm}.dat")), wtext)?;
    Ok(())
}

/// Columnar plot data: bound pieces vs Λ, moments vs Λ, ratio vs Λ, horn
/// counts, and per-arm totals for multi-arm runs.
pub fn emit_plot_data(report: &RunReport, out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    let mut btext = String::from("# sigma lambda integral_term c1_term c2_term total\n");
    for b in &report.bounds {
        btext += &fmt_row(&[b.sigma, b.lambda, b.integral_term, b.c1_term, b.c2_term, b.total]);
    }
    std::fs::write(out_dir.join("bound_vs_lambda.dat"), btext)?;

    let mut mtext = String::from("# sigma lambda moment budget\n");
    let mut rtext = String::from("# sigma lambda ratio\n");
    for c in &report.comparison {
        mtext += &fmt_row(&[c.sigma, c.lambda, c.numerical_moment, c.moment_error_budget]);
        rtext += &fmt_row(&[c.sigma, c.lambda, c.ratio]);
    }
    std::fs::write(out_dir.join("moment_vs_lambda.dat"), mtext)?;
    std::fs::write(out_dir.join("ratio_vs_lambda.dat"), rtext)?;

    if !report.moments.is_empty() {
        let mut text = String::from("# sigma lambda moment budget\n");
        for m in &report.moments {
            text += &fmt_row(&[m.sigma, m.lambda, m.moment, m.error_budget]);
        }
        std::fs::write(out_dir.join("moments.dat"), text)?;
    }

    if !report.horn.is_empty() {
        let mut htext = String::from("# lambda weyl_count lower_estimate\n");
        for h in &report.horn {
            htext += &fmt_row(&[h.lambda, h.weyl_count, h.lower_estimate]);
        }
        std::fs::write(out_dir.join("horn_counts.dat"), htext)?;
    }

    if !report.multi_arm_totals.is_empty() {
        let arms = report.geometry.len().max(1);
        for arm in 0..arms {
            let mut atext = String::from("# sigma lambda total\n");
            for b in report.bounds.iter().skip(arm).step_by(arms) {
                atext += &fmt_row(&[b.sigma, b.lambda, b.total]);
            }
            std::fs::write(out_dir.join(format!("bound_arm{arm}.dat")), atext)?;
        }
        let mut ttext = String::from("# sigma lambda total\n");
        for t in &report.multi_arm_totals {
            ttext += &fmt_row(&[t.sigma, t.lambda, t.total]);
        }
        std::fs::write(out_dir.join("bound_total.dat"), ttext)?;
    }
    Ok(())
}
