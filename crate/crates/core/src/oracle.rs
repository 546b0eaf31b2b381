//! Brute-force verification that does not rely on the critical-point theory.
//!
//! A candidate σ² is checked by scanning `g(λ; σ²)` on a dense grid over the
//! engine's search window and polishing every discrete local minimum with a
//! golden-section search. Bisection on σ² over that predicate pins σ²_opt.

use serde::Serialize;

use crate::characterizer::{is_strict, search_window, Diagnostics, Method, ProxyResult};
use crate::distribution::DiscreteDistribution;
use crate::error::{invalid, Error, Result};
use crate::roots::{golden_section_min, linspace};

/// Grid settings for [`is_variance_proxy`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridConfig {
    pub points: usize,
    pub refine_iterations: usize,
    /// At most this many of the lowest grid minima are refined.
    pub max_refined: usize,
    /// A violation must exceed `violation_scale · max(1, σ²)` to fail the check.
    pub violation_scale: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            points: 20_001,
            refine_iterations: 64,
            max_refined: 16,
            violation_scale: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub min_g: f64,
    pub argmin_lambda: f64,
    pub grid_points: usize,
    pub window: (f64, f64),
}

/// Checks `½λ²σ² ≥ M(λ)` on the search window.
pub fn is_variance_proxy(
    d: &DiscreteDistribution,
    sigma2: f64,
    grid: &GridConfig,
) -> Result<VerificationReport> {
    if !(sigma2 >= 0.0) || !sigma2.is_finite() {
        return Err(invalid("sigma2", sigma2, "must be finite and nonnegative"));
    }
    if d.len() < 2 {
        return Ok(VerificationReport {
            pass: true,
            min_g: 0.0,
            argmin_lambda: 0.0,
            grid_points: 0,
            window: (0.0, 0.0),
        });
    }

    let window = search_window(d)?;
    let g = |l: f64| d.g_eval(l, sigma2).unwrap_or(f64::NAN);
    let lambdas: Vec<f64> = linspace(window.0, window.1, grid.points).collect();
    let values: Vec<f64> = lambdas.iter().map(|&l| g(l)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("g"));
    }

    let n = values.len();
    let mut minima: Vec<usize> = (0..n)
        .filter(|&i| {
            let left = i == 0 || values[i] <= values[i - 1];
            let right = i == n - 1 || values[i] <= values[i + 1];
            left && right
        })
        .collect();
    minima.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    minima.truncate(grid.max_refined);

    let (mut best_lambda, mut best_g) = (0.0, 0.0);
    for i in 0..n {
        if values[i] < best_g {
            best_g = values[i];
            best_lambda = lambdas[i];
        }
    }
    for i in minima {
        let a = lambdas[i.saturating_sub(1)];
        let b = lambdas[(i + 1).min(n - 1)];
        let (l, v) = golden_section_min(g, a, b, grid.refine_iterations);
        if v < best_g {
            best_g = v;
            best_lambda = l;
        }
    }

    let tol = grid.violation_scale * sigma2.max(1.0);
    Ok(VerificationReport {
        pass: best_g >= -tol,
        min_g: best_g,
        argmin_lambda: best_lambda,
        grid_points: n,
        window,
    })
}

/// Smallest σ² in `[Var, range²/4]` passing [`is_variance_proxy`], to `rel_tol`.
///
/// Returns the upper end of the final bracket, so the value always passes.
pub fn bisect_optimal_proxy(d: &DiscreteDistribution, rel_tol: f64) -> Result<f64> {
    if !(rel_tol >= 1e-10) {
        return Err(invalid("rel_tol", rel_tol, "must be at least 1e-10"));
    }
    if d.len() < 2 {
        return Ok(0.0);
    }
    let grid = GridConfig::default();
    let passes = |s: f64| is_variance_proxy(d, s, &grid).map(|r| r.pass);

    let mut lo = d.variance();
    if passes(lo)? {
        return Ok(lo);
    }
    let mut hi = 0.25 * d.range() * d.range();
    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if passes(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// [`bisect_optimal_proxy`] wrapped as a [`ProxyResult`].
pub fn optimal_proxy_oracle(d: &DiscreteDistribution, rel_tol: f64) -> Result<ProxyResult> {
    let sigma2_opt = bisect_optimal_proxy(d, rel_tol)?;
    let variance = d.variance();
    Ok(ProxyResult {
        sigma2_opt,
        variance,
        strict: is_strict(sigma2_opt, variance),
        method: Method::Oracle,
        candidates: Vec::new(),
        diagnostics: Diagnostics {
            window: search_window(d).ok(),
            scan_points: GridConfig::default().points,
            ..Diagnostics::default()
        },
    })
}

/// One sample of the curves around `g(·; σ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub lambda: f64,
    pub g: f64,
    pub g1: f64,
    pub g2: f64,
    pub h: f64,
}

/// Samples `g`, `g'`, `g''` and `h` on `samples` uniform points of `[λ_min, λ_max]`.
pub fn export_curve(
    d: &DiscreteDistribution,
    sigma2: f64,
    lambda_min: f64,
    lambda_max: f64,
    samples: usize,
) -> Result<Vec<CurveRow>> {
    if !(lambda_min.is_finite() && lambda_max.is_finite()) {
        return Err(Error::NonFinite("curve range"));
    }
    if lambda_min >= lambda_max {
        return Err(invalid("lambda_min", lambda_min, "must be below lambda_max"));
    }
    if samples < 2 {
        return Err(invalid("samples", samples as f64, "must be at least 2"));
    }
    if !(sigma2 >= 0.0 && sigma2.is_finite()) {
        return Err(invalid("sigma2", sigma2, "must be finite and nonnegative"));
    }
    linspace(lambda_min, lambda_max, samples)
        .map(|lambda| {
            let c = d.cgf_at(lambda)?;
            Ok(CurveRow {
                lambda,
                g: 0.5 * lambda * lambda * sigma2 - c.m0,
                g1: lambda * sigma2 - c.m1,
                g2: sigma2 - c.m2,
                h: lambda * c.m1 - 2.0 * c.m0,
            })
        })
        .collect()
}
