//! General engine for the optimal variance proxy.
//!
//! For a centered CGF `M`, σ² is a proxy iff `g(λ; σ²) = ½λ²σ² − M(λ) ≥ 0`.
//! A tangency `g = g' = 0` at `λ_c ≠ 0` forces `σ² = M'(λ_c)/λ_c` and
//! `h(λ_c) = λ_c M'(λ_c) − 2 M(λ_c) = 0`. The optimum is the variance or the
//! largest `M'(λ_c)/λ_c` over roots of `h` that are local minima of `g`,
//! whichever is bigger.
//!
//! The engine brackets every sign change of `h` on a window that provably
//! contains all nonzero roots, refines each with Brent's method and classifies
//! it through `g''(λ_c; s_c) = s_c − M''(λ_c)`.

use std::fmt;

use log::debug;
use serde::{Serialize, Serializer};

use crate::distribution::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::roots::{golden_section_min, scan_sign_changes};

/// Added to `2 ln(1/w)` in the window bound; leaves residual terms near `e^-40`.
const WINDOW_SAFETY: f64 = 40.0;
const MAX_DOUBLINGS: u32 = 60;
const BASE_SCAN_POINTS: usize = 1024;
const SCAN_POINTS_PER_ATOM: usize = 64;
/// Relative |h| below which a non-crossing local minimum of |h| counts as a root.
const TANGENTIAL_ACCEPT: f64 = 1e-13;
/// Relative |h| below which a non-crossing minimum is worth reporting.
const TANGENTIAL_REPORT: f64 = 1e-6;
/// σ² within this relative margin of the variance is reported as strict.
pub const STRICT_REL_TOL: f64 = 1e-9;

/// Tunables for the root scan and candidate classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Multiplies the default scan density of `max(1024, 64·N)` points per half-line.
    pub scan_density: f64,
    pub brent_rel_tol: f64,
    /// Zero-exclusion radius is `zero_exclusion_scale / (x_max − x_min)`.
    pub zero_exclusion_scale: f64,
    /// A candidate is a local minimum when `g'' > local_min_tol · s_c`.
    pub local_min_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            scan_density: 1.0,
            brent_rel_tol: 1e-12,
            zero_exclusion_scale: 1e-4,
            local_min_tol: 1e-10,
        }
    }
}

impl SolverConfig {
    pub fn exclusion_radius(&self, d: &DiscreteDistribution) -> f64 {
        self.zero_exclusion_scale / d.range()
    }

    fn scan_points(&self, d: &DiscreteDistribution) -> usize {
        let base = BASE_SCAN_POINTS.max(SCAN_POINTS_PER_ATOM * d.len()) as f64;
        ((base * self.scan_density).ceil() as usize).max(16)
    }
}

/// A nonzero root of `h` with its candidate proxy `s_c = M'(λ_c)/λ_c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CandidatePoint {
    #[serde(rename = "lambda")]
    pub lambda_c: f64,
    #[serde(rename = "s")]
    pub s_c: f64,
    #[serde(rename = "local_min")]
    pub is_local_min: bool,
    #[serde(rename = "g2")]
    pub g2_at_candidate: f64,
}

/// Closed-form families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Bernoulli,
    Binomial,
    SymmetricThreeMass,
    AsymmetricThreeMass,
    DiscreteUniform,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Bernoulli => "bernoulli",
            Family::Binomial => "binomial",
            Family::SymmetricThreeMass => "symmetric-three-mass",
            Family::AsymmetricThreeMass => "asymmetric-three-mass",
            Family::DiscreteUniform => "discrete-uniform",
        }
    }
}

/// How a [`ProxyResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    GeneralEngine,
    ClosedForm(Family),
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::GeneralEngine => f.write_str("general-engine"),
            Method::ClosedForm(family) => write!(f, "closed-form:{}", family.name()),
            Method::Oracle => f.write_str("oracle"),
        }
    }
}

impl Serialize for Method {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A near-root of `h` where `h` touches zero without crossing it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentialRoot {
    pub lambda: f64,
    /// `|h| / (|λ M'| + 2|M|)` at the refined point.
    pub residual: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<(f64, f64)>,
    pub scan_points: usize,
    pub brackets_examined: usize,
    pub iterations: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tangential: Vec<TangentialRoot>,
}

/// Optimal proxy together with how it was found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProxyResult {
    pub sigma2_opt: f64,
    pub variance: f64,
    pub strict: bool,
    pub method: Method,
    pub candidates: Vec<CandidatePoint>,
    pub diagnostics: Diagnostics,
}

impl ProxyResult {
    pub(crate) fn closed_form(family: Family, sigma2_opt: f64, variance: f64, strict: bool) -> Self {
        Self {
            sigma2_opt,
            variance,
            strict,
            method: Method::ClosedForm(family),
            candidates: Vec::new(),
            diagnostics: Diagnostics::default(),
        }
    }

    /// Candidates that are local minima of `g`.
    pub fn local_minima(&self) -> impl Iterator<Item = &CandidatePoint> {
        self.candidates.iter().filter(|c| c.is_local_min)
    }
}

pub(crate) fn is_strict(sigma2: f64, variance: f64) -> bool {
    sigma2 <= variance * (1.0 + STRICT_REL_TOL)
}

/// Interval `(λ_lo, λ_hi)` outside of which `h < 0`.
pub fn search_window(d: &DiscreteDistribution) -> Result<(f64, f64)> {
    if d.len() < 2 {
        return Err(Error::SingleAtom);
    }
    let w = d.weights();
    let mu = d.mean();
    let hi = (2.0 * (1.0 / w[w.len() - 1]).ln() + WINDOW_SAFETY) / (d.x_max() - mu);
    let lo = -(2.0 * (1.0 / w[0]).ln() + WINDOW_SAFETY) / (mu - d.x_min());
    Ok((expand(d, lo)?, expand(d, hi)?))
}

fn expand(d: &DiscreteDistribution, mut end: f64) -> Result<f64> {
    for _ in 0..MAX_DOUBLINGS {
        if d.h_eval(end)? < 0.0 {
            return Ok(end);
        }
        end *= 2.0;
    }
    Err(Error::WindowExhausted(MAX_DOUBLINGS))
}

/// Outcome of scanning `h` on a window.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RootScan {
    /// Sign-change roots, ascending.
    pub roots: Vec<f64>,
    pub tangential: Vec<TangentialRoot>,
    pub scan_points: usize,
    pub brackets: usize,
    pub iterations: usize,
}

/// Finds the nonzero roots of `h` on `window`, outside the zero-exclusion interval.
pub fn find_h_roots(
    d: &DiscreteDistribution,
    window: (f64, f64),
    config: &SolverConfig,
) -> Result<RootScan> {
    let eps = config.exclusion_radius(d);
    let n = config.scan_points(d);
    let mut scan = RootScan::default();
    let (lo, hi) = window;
    if lo < -eps {
        scan_half_line(d, lo, -eps, n, config, &mut scan)?;
    }
    if hi > eps {
        scan_half_line(d, eps, hi, n, config, &mut scan)?;
    }
    scan.roots.sort_by(f64::total_cmp);
    Ok(scan)
}

fn scan_half_line(
    d: &DiscreteDistribution,
    a: f64,
    b: f64,
    n: usize,
    config: &SolverConfig,
    scan: &mut RootScan,
) -> Result<()> {
    let h = |l: f64| d.h_eval(l).unwrap_or(f64::NAN);
    let sweep = scan_sign_changes(h, a, b, n, config.brent_rel_tol)?;
    scan.scan_points += sweep.grid.len();
    scan.brackets += sweep.brackets;
    scan.iterations += sweep.iterations;
    scan.roots.extend_from_slice(&sweep.roots);

    let (grid, values) = (&sweep.grid, &sweep.values);
    for i in 1..grid.len() - 1 {
        let (hp, h0, hn) = (values[i - 1], values[i], values[i + 1]);
        let same_sign = hp * h0 > 0.0 && h0 * hn > 0.0;
        if !(same_sign && h0.abs() < hp.abs() && h0.abs() < hn.abs()) {
            continue;
        }
        let (lambda, abs_h) = golden_section_min(|l| h(l).abs(), grid[i - 1], grid[i + 1], 80);
        let residual = abs_h / term_scale(d, lambda)?;
        if residual < TANGENTIAL_REPORT {
            let accepted = residual < TANGENTIAL_ACCEPT;
            debug!("tangential near-root at {lambda:.6} (residual {residual:.3e}, accepted {accepted})");
            scan.tangential.push(TangentialRoot {
                lambda,
                residual,
                accepted,
            });
        }
    }
    Ok(())
}

fn term_scale(d: &DiscreteDistribution, lambda: f64) -> Result<f64> {
    let c = d.cgf_at(lambda)?;
    Ok((lambda * c.m1).abs() + 2.0 * c.m0.abs() + f64::MIN_POSITIVE)
}

/// Computes `s_c` at a critical point and decides whether `g(·; s_c)` has a
/// local minimum there.
pub fn classify_candidate(
    d: &DiscreteDistribution,
    lambda_c: f64,
    config: &SolverConfig,
) -> Result<CandidatePoint> {
    if d.len() < 2 {
        return Err(Error::SingleAtom);
    }
    if lambda_c.abs() < config.exclusion_radius(d) {
        return Err(Error::InsideExclusionZone(lambda_c));
    }
    let c = d.cgf_at(lambda_c)?;
    let s = c.m1 / lambda_c;
    let g2 = s - c.m2;
    let tau = config.local_min_tol * s.abs();

    let is_local_min = if g2 > tau {
        true
    } else if g2 < -tau {
        false
    } else {
        let g = |l: f64| d.cgf_at(l).map(|c| 0.5 * l * l * s - c.m0);
        let g0 = g(lambda_c)?;
        let mut ok = true;
        for scale in [1e-4, 1e-3, 1e-2] {
            let delta = scale * lambda_c.abs();
            if g(lambda_c - delta)? < g0 - 1e-14 || g(lambda_c + delta)? < g0 - 1e-14 {
                ok = false;
                break;
            }
        }
        ok
    };

    Ok(CandidatePoint {
        lambda_c,
        s_c: s,
        is_local_min,
        g2_at_candidate: g2,
    })
}

/// Optimal variance proxy of an arbitrary finite discrete distribution.
pub fn optimal_proxy_general(
    d: &DiscreteDistribution,
    config: &SolverConfig,
) -> Result<ProxyResult> {
    let variance = d.variance();
    if d.len() < 2 {
        return Ok(ProxyResult {
            sigma2_opt: 0.0,
            variance,
            strict: true,
            method: Method::GeneralEngine,
            candidates: Vec::new(),
            diagnostics: Diagnostics::default(),
        });
    }

    let window = search_window(d)?;
    let scan = find_h_roots(d, window, config)?;
    debug!(
        "window ({:.6}, {:.6}): {} sign-change roots, {} tangential",
        window.0,
        window.1,
        scan.roots.len(),
        scan.tangential.len()
    );

    let mut lambdas = scan.roots.clone();
    lambdas.extend(scan.tangential.iter().filter(|t| t.accepted).map(|t| t.lambda));
    lambdas.sort_by(f64::total_cmp);

    let candidates = lambdas
        .iter()
        .map(|&l| classify_candidate(d, l, config))
        .collect::<Result<Vec<_>>>()?;

    let sigma2_opt = candidates
        .iter()
        .filter(|c| c.is_local_min)
        .map(|c| c.s_c)
        .fold(variance, f64::max);

    Ok(ProxyResult {
        sigma2_opt,
        variance,
        strict: is_strict(sigma2_opt, variance),
        method: Method::GeneralEngine,
        candidates,
        diagnostics: Diagnostics {
            window: Some(window),
            scan_points: scan.scan_points,
            brackets_examined: scan.brackets,
            iterations: scan.iterations,
            tangential: scan.tangential,
        },
    })
}
