//! Exact or one-dimensional-root σ²_opt for families with known structure.

use serde::Serialize;

use crate::characterizer::{
    is_strict, search_window, CandidatePoint, Diagnostics, Family, Method, ProxyResult,
    SolverConfig,
};
use crate::distribution::DiscreteDistribution;
use crate::error::{invalid, Error, Result};
use crate::roots::{brent, scan_sign_changes};

/// Relative gap under which two masses are treated as equal (removable 0/0).
const EQUAL_MASS_TOL: f64 = 1e-12;
const MAX_DOUBLINGS: u32 = 60;
const SCAN_POINTS: usize = 1024;

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(invalid(name, p, "must lie in (0, 1)"))
    }
}

/// `2(q − p) / ln(q/p)`, continuously extended by `p + q` at `p = q`.
fn log_mean_ratio(p: f64, q: f64) -> f64 {
    if (q - p).abs() < EQUAL_MASS_TOL * (p + q) {
        p + q
    } else {
        2.0 * (q - p) / ((q - p) / p).ln_1p()
    }
}

/// Kearns–Saul proxy of a Bernoulli(p) variable: `(1 − 2p) / (2 ln((1 − p)/p))`.
pub fn bernoulli_proxy(p: f64) -> Result<f64> {
    check_probability("p", p)?;
    // 2(p - (1-p)) / ln(p/(1-p)) is four times the Bernoulli value
    Ok(0.25 * log_mean_ratio(1.0 - p, p))
}

pub fn binomial_proxy(n: u32, p: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n", 0.0, "must be at least 1"));
    }
    Ok(f64::from(n) * bernoulli_proxy(p)?)
}

/// Critical tilt of the symmetric 3-mass law where `g'''` changes sign; defined for `p < 1/6`.
pub fn symmetric_lambda0(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0 / 6.0) {
        return Err(invalid("p", p, "must lie in (0, 1/6)"));
    }
    Ok(((1.0 - 4.0 * p - 4.0 * p * p) / (2.0 * p * (1.0 - 2.0 * p))).acosh())
}

/// Upper bound `(1 − 2p)² / (4(1 − 4p))` on σ²_opt for the symmetric law with `p < 1/6`.
pub fn symmetric_sigma1_bound(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 0.25) {
        return Err(invalid("p", p, "must lie in (0, 1/4)"));
    }
    Ok((1.0 - 2.0 * p).powi(2) / (4.0 * (1.0 - 4.0 * p)))
}

/// The tighter implicit upper bound σ2²(p) for `p < 1/6`.
///
/// Solves `σ² = 2p sinh λ₂ / (λ₂ (1 + 2p cosh λ₂ − 2p))` with `λ₂(σ)` the larger
/// zero of `g''`. Diagnostic only; the solver path does not use it.
pub fn symmetric_sigma2_bound(p: f64) -> Result<f64> {
    symmetric_lambda0(p)?;
    let upper = symmetric_sigma1_bound(p)?;
    let lambda2 = |s: f64| {
        let disc = ((1.0 - 2.0 * p).powi(2) - 4.0 * (1.0 - 4.0 * p) * s).max(0.0);
        (((1.0 - 2.0 * p) * (1.0 - 2.0 * s) + disc.sqrt()) / (4.0 * p * s)).acosh()
    };
    let residual = |s: f64| {
        let l = lambda2(s);
        s - 2.0 * p * l.sinh() / (l * (1.0 + 2.0 * p * l.cosh() - 2.0 * p))
    };
    let lo = 2.0 * p * (1.0 + 1e-12);
    let hi = upper * (1.0 - 1e-12);
    Ok(brent(residual, lo, hi, 1e-13)?.x)
}

/// σ²_opt of the law on {−a, 0, a} with masses p, 1 − 2p, p.
pub fn symmetric_three_mass_proxy(p: f64, a: f64) -> Result<ProxyResult> {
    if !(p > 0.0 && p < 0.5) {
        return Err(invalid("p", p, "must lie in (0, 1/2)"));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid("a", a, "must be positive and finite"));
    }
    let scale = a * a;
    let variance = 2.0 * p * scale;
    if p >= 1.0 / 6.0 {
        return Ok(ProxyResult::closed_form(
            Family::SymmetricThreeMass,
            variance,
            variance,
            true,
        ));
    }

    let lambda0 = symmetric_lambda0(p)?;
    let u = |l: f64| 1.0 - 2.0 * p + 2.0 * p * l.cosh();
    let tangency = |l: f64| {
        let ul = u(l);
        p * l * l.sinh() - ul * ul.ln()
    };

    let lo = lambda0 * (1.0 + 1e-9);
    if !(tangency(lo) > 0.0) {
        return Err(Error::BracketExpansion("tangency equation not positive above λ0"));
    }
    let mut hi = 2.0 * lo;
    let mut doublings = 0;
    loop {
        let v = tangency(hi);
        if !v.is_finite() || doublings >= MAX_DOUBLINGS {
            return Err(Error::BracketExpansion("no sign change above λ0"));
        }
        if v < 0.0 {
            break;
        }
        hi *= 2.0;
        doublings += 1;
    }
    let root = brent(tangency, lo, hi, 1e-14)?;
    let lc = root.x;
    let s = 2.0 * p * lc.sinh() / (lc * u(lc));
    debug_assert!(2.0 * p * (1.0 - 1e-9) < s && s < symmetric_sigma1_bound(p)? * (1.0 + 1e-9));

    let ul = u(lc);
    let g2 = s + 2.0 * p * (2.0 * p * lc.cosh() - lc.cosh() - 2.0 * p) / (ul * ul);
    let candidate = |sign: f64| CandidatePoint {
        lambda_c: sign * lc / a,
        s_c: s * scale,
        is_local_min: g2 > 0.0,
        g2_at_candidate: g2 * scale,
    };
    Ok(ProxyResult {
        sigma2_opt: s * scale,
        variance,
        strict: false,
        method: Method::ClosedForm(Family::SymmetricThreeMass),
        candidates: vec![candidate(-1.0), candidate(1.0)],
        diagnostics: Diagnostics {
            window: Some((lambda0, hi)),
            scan_points: 0,
            brackets_examined: 1,
            iterations: root.iterations,
            tangential: Vec::new(),
        },
    })
}

/// Parameters of the law on {−a, 0, a} with masses p1, p3 = 1 − p1 − p2, p2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreeMassParams {
    pub p1: f64,
    pub p2: f64,
    pub a: f64,
}

impl ThreeMassParams {
    pub fn new(p1: f64, p2: f64, a: f64) -> Result<Self> {
        check_probability("p1", p1)?;
        check_probability("p2", p2)?;
        if p1 + p2 > 1.0 + 1e-12 {
            return Err(invalid("p1 + p2", p1 + p2, "must not exceed 1"));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(invalid("a", a, "must be positive and finite"));
        }
        Ok(Self { p1, p2, a })
    }

    pub fn p3(&self) -> f64 {
        (1.0 - self.p1 - self.p2).max(0.0)
    }

    /// True when `p3 ≤ 4√(p1 p2)`, where the proxy has the log-ratio closed form.
    pub fn in_closed_form_regime(&self) -> bool {
        self.p3() <= 4.0 * (self.p1 * self.p2).sqrt() * (1.0 + EQUAL_MASS_TOL)
    }

    pub fn distribution(&self) -> Result<DiscreteDistribution> {
        DiscreteDistribution::three_mass(self.p1, self.p2, self.a)
    }
}

/// σ²_opt of the asymmetric 3-mass law.
///
/// With `p1 ≤ p2` (reflect otherwise): for `p3 ≤ 4√(p1 p2)` the answer is
/// `2(p2 − p1)/ln(p2/p1)`. Otherwise the tangency points are the zeros of
///
/// ```text
/// F(λ) = λ u1(λ) − 2 u0(λ) ln u0(λ) + λ u0(λ)(p2 − p1)
/// u0(λ) = p1 e^−λ + p2 e^λ + p3,   u1 = u0'
/// ```
///
/// and the result is the largest of the variance, the log-ratio value and
/// `(u1/u0 − (p2 − p1))/λ` over zeros that are local minima of `g`.
pub fn asymmetric_three_mass_proxy(params: ThreeMassParams) -> Result<ProxyResult> {
    let ThreeMassParams { p1, p2, a } = ThreeMassParams::new(params.p1, params.p2, params.a)?;
    let reflected = p1 > p2;
    let (p1, p2) = if reflected { (p2, p1) } else { (p1, p2) };
    let p3 = (1.0 - p1 - p2).max(0.0);
    let mu = p2 - p1;
    let scale = a * a;
    let variance = (p1 + p2 - mu * mu) * scale;
    let equal = (p2 - p1).abs() < EQUAL_MASS_TOL * (p1 + p2);
    let log_ratio = log_mean_ratio(p1, p2);

    if p3 < 1e-15 {
        // two atoms at ±a: an affine image of Bernoulli(p2)
        let s = 4.0 * bernoulli_proxy(p2)? * scale;
        return Ok(ProxyResult::closed_form(
            Family::AsymmetricThreeMass,
            s,
            variance,
            equal,
        ));
    }
    if params.in_closed_form_regime() {
        return Ok(ProxyResult::closed_form(
            Family::AsymmetricThreeMass,
            log_ratio * scale,
            variance,
            equal,
        ));
    }

    // u0 − 1 via expm1 so that ln u0 keeps full precision near λ = 0, where F ~ λ³
    let u0_minus_one = |l: f64| p1 * (-l).exp_m1() + p2 * l.exp_m1();
    let u0 = |l: f64| 1.0 + u0_minus_one(l);
    let u1 = |l: f64| -p1 * (-l).exp() + p2 * l.exp();
    let f = |l: f64| {
        let v = u0(l);
        l * u1(l) - 2.0 * v * u0_minus_one(l).ln_1p() + l * v * mu
    };

    let unit = DiscreteDistribution::three_mass(p1, p2, 1.0)?;
    let window = search_window(&unit)?;
    let eps = SolverConfig::default().exclusion_radius(&unit);
    let reported = if reflected {
        (-window.1 / a, -window.0 / a)
    } else {
        (window.0 / a, window.1 / a)
    };
    let mut diagnostics = Diagnostics {
        window: Some(reported),
        ..Diagnostics::default()
    };
    let mut candidates = Vec::new();
    for (lo, hi) in [(window.0, -eps), (eps, window.1)] {
        let scan = scan_sign_changes(f, lo, hi, SCAN_POINTS, 1e-12)?;
        diagnostics.scan_points += scan.grid.len();
        diagnostics.brackets_examined += scan.brackets;
        diagnostics.iterations += scan.iterations;
        for l in scan.roots {
            let v = u0(l);
            let s = (u1(l) / v - mu) / l;
            let g2 = s - (v * p3 - p3 * p3 + 4.0 * p1 * p2) / (v * v);
            let sign = if reflected { -1.0 } else { 1.0 };
            candidates.push(CandidatePoint {
                lambda_c: sign * l / a,
                s_c: s * scale,
                is_local_min: g2 > 1e-10 * s,
                g2_at_candidate: g2 * scale,
            });
        }
    }
    candidates.sort_by(|x, y| x.lambda_c.total_cmp(&y.lambda_c));

    let sigma2_opt = candidates
        .iter()
        .filter(|c| c.is_local_min)
        .map(|c| c.s_c)
        .fold(variance.max(log_ratio * scale), f64::max);
    Ok(ProxyResult {
        sigma2_opt,
        variance,
        strict: is_strict(sigma2_opt, variance),
        method: Method::ClosedForm(Family::AsymmetricThreeMass),
        candidates,
        diagnostics,
    })
}

/// σ²_opt of the uniform law on {a + b, 2a + b, ..., Na + b}: always the variance.
pub fn discrete_uniform_proxy(n: u32, a: f64, b: f64) -> Result<ProxyResult> {
    if n == 0 {
        return Err(invalid("n", 0.0, "must be at least 1"));
    }
    if a == 0.0 || !a.is_finite() {
        return Err(invalid("a", a, "must be finite and nonzero"));
    }
    if !b.is_finite() {
        return Err(Error::NonFinite("b"));
    }
    let nf = f64::from(n);
    let v = a * a * (nf * nf - 1.0) / 12.0;
    Ok(ProxyResult::closed_form(Family::DiscreteUniform, v, v, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli_proxy(0.5).unwrap(), 0.25);
        assert_relative_eq!(
            bernoulli_proxy(0.1).unwrap(),
            0.8 / (2.0 * 9f64.ln()),
            max_relative = 1e-15
        );
        // mpmath, 30 digits
        assert_relative_eq!(bernoulli_proxy(0.01).unwrap(), 0.106_634_868_290_899_53, max_relative = 1e-14);
        assert_relative_eq!(bernoulli_proxy(0.25).unwrap(), 0.227_559_806_656_709_35, max_relative = 1e-14);
        for p in [0.01, 0.2, 0.37, 0.49999] {
            assert_relative_eq!(
                bernoulli_proxy(p).unwrap(),
                bernoulli_proxy(1.0 - p).unwrap(),
                max_relative = 1e-12
            );
        }
        assert!(bernoulli_proxy(0.0).is_err());
        assert!(bernoulli_proxy(1.0).is_err());
        assert!(bernoulli_proxy(f64::NAN).is_err());
    }

    #[test]
    fn bernoulli_near_half_is_continuous() {
        let near = bernoulli_proxy(0.5 - 1e-9).unwrap();
        assert!((near - 0.25).abs() < 1e-12);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial_proxy(1, 0.3).unwrap(), bernoulli_proxy(0.3).unwrap());
        assert_eq!(binomial_proxy(10, 0.5).unwrap(), 2.5);
        assert_relative_eq!(
            binomial_proxy(5, 0.1).unwrap(),
            5.0 * 0.8 / (2.0 * 9f64.ln()),
            max_relative = 1e-14
        );
        assert!(binomial_proxy(0, 0.5).is_err());
    }

    #[test]
    fn lambda0_values() {
        assert_relative_eq!(symmetric_lambda0(0.1).unwrap(), 3.5f64.acosh(), max_relative = 1e-14);
        assert_relative_eq!(symmetric_lambda0(0.1).unwrap(), 1.924_847_300_238_413_8, max_relative = 1e-14);
        assert_relative_eq!(symmetric_lambda0(0.05).unwrap(), 2.862_109_876_670_575, max_relative = 1e-14);
        assert!(symmetric_lambda0(1.0 / 6.0 - 1e-12).unwrap() < 1e-4);
        assert!(symmetric_lambda0(1.0 / 6.0).is_err());
        assert!(symmetric_lambda0(0.0).is_err());
    }

    #[test]
    fn symmetric_regime_one() {
        let r = symmetric_three_mass_proxy(0.25, 1.0).unwrap();
        assert_eq!(r.sigma2_opt, 0.5);
        assert!(r.strict);
        let r = symmetric_three_mass_proxy(1.0 / 6.0, 1.0).unwrap();
        assert_relative_eq!(r.sigma2_opt, 1.0 / 3.0, max_relative = 1e-15);
        assert!(r.strict);
    }

    #[test]
    fn symmetric_regime_two_matches_reference() {
        // mpmath solves of the tangency equation
        for (p, lc, s) in [
            (0.05, 5.451_873_736_343_375, 0.170_273_480_936_603_7),
            (0.1, 3.437_885_833_609_052, 0.230_965_548_968_610_9),
            (0.15, 1.541_779_163_340_395_6, 0.302_719_117_619_357_9),
        ] {
            let r = symmetric_three_mass_proxy(p, 1.0).unwrap();
            assert_relative_eq!(r.sigma2_opt, s, max_relative = 1e-12);
            assert_relative_eq!(r.candidates[1].lambda_c, lc, max_relative = 1e-11);
            assert!(!r.strict);
            assert!(r.candidates.iter().all(|c| c.is_local_min));
            assert!(2.0 * p < r.sigma2_opt && r.sigma2_opt < symmetric_sigma1_bound(p).unwrap());
        }
        let r = symmetric_three_mass_proxy(0.1, 1.0).unwrap();
        assert!(r.sigma2_opt > 0.2 && r.sigma2_opt < 0.266_667);
    }

    #[test]
    fn symmetric_scales_with_a() {
        let one = symmetric_three_mass_proxy(0.1, 1.0).unwrap().sigma2_opt;
        let three = symmetric_three_mass_proxy(0.1, 3.0).unwrap();
        assert_relative_eq!(three.sigma2_opt, 9.0 * one, max_relative = 1e-14);
        assert_relative_eq!(three.candidates[1].lambda_c, 3.437_885_833_609_052 / 3.0, max_relative = 1e-11);
    }

    #[test]
    fn symmetric_continuity_at_one_sixth() {
        let below = symmetric_three_mass_proxy(1.0 / 6.0 - 1e-7, 1.0).unwrap().sigma2_opt;
        assert!((below - 1.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn sigma2_bound_sits_between_optimum_and_sigma1() {
        for p in [0.02, 0.05, 0.1, 0.15] {
            let opt = symmetric_three_mass_proxy(p, 1.0).unwrap().sigma2_opt;
            let b2 = symmetric_sigma2_bound(p).unwrap();
            let b1 = symmetric_sigma1_bound(p).unwrap();
            assert!(opt <= b2 * (1.0 + 1e-12) && b2 <= b1, "p={p}: {opt} {b2} {b1}");
        }
    }

    #[test]
    fn symmetric_rejects_bad_input() {
        assert!(symmetric_three_mass_proxy(0.5, 1.0).is_err());
        assert!(symmetric_three_mass_proxy(0.0, 1.0).is_err());
        assert!(symmetric_three_mass_proxy(0.1, 0.0).is_err());
    }

    #[test]
    fn asymmetric_regime_a() {
        let params = ThreeMassParams::new(0.13, 0.25, 1.0).unwrap();
        assert!(params.in_closed_form_regime());
        let r = asymmetric_three_mass_proxy(params).unwrap();
        let expected = 0.24 / (25.0f64 / 13.0).ln();
        assert_relative_eq!(r.sigma2_opt, expected, max_relative = 1e-14);
        assert_relative_eq!(r.sigma2_opt, 0.367_013_742_312_327_5, max_relative = 1e-14);
        assert!(!r.strict);
        assert_relative_eq!(r.variance, 0.3656, max_relative = 1e-13);
    }

    #[test]
    fn asymmetric_regime_b_fig2() {
        let params = ThreeMassParams::new(0.05, 0.01, 1.0).unwrap();
        assert!(!params.in_closed_form_regime());
        let r = asymmetric_three_mass_proxy(params).unwrap();
        assert_relative_eq!(r.sigma2_opt, 0.156_220_370_682_017, max_relative = 1e-10);
        assert!(!r.strict);
        let lambdas: Vec<f64> = r.candidates.iter().map(|c| c.lambda_c).collect();
        assert_eq!(lambdas.len(), 3);
        assert_relative_eq!(lambdas[0], -5.800_623_529_852_33, max_relative = 1e-10);
        assert_relative_eq!(lambdas[1], 5f64.ln(), max_relative = 1e-10);
        assert_relative_eq!(lambdas[2], 8.696_782_283_178_72, max_relative = 1e-10);
        let minima: Vec<bool> = r.candidates.iter().map(|c| c.is_local_min).collect();
        assert_eq!(minima, vec![true, false, true]);
    }

    #[test]
    fn asymmetric_negative_side_candidate_dominates() {
        // the log-ratio/positive-zero formula alone gives 0.321691 here;
        // brute-force maximization of 2M(λ)/λ² gives 0.322038
        let params = ThreeMassParams::new(0.298_846_215_845_469_7, 0.073_721_423_827_591_81, 1.0).unwrap();
        let r = asymmetric_three_mass_proxy(params).unwrap();
        assert!((r.sigma2_opt - 0.322_037_6).abs() < 2e-6, "{}", r.sigma2_opt);
    }

    #[test]
    fn asymmetric_equal_masses_match_symmetric() {
        for p in [0.05, 0.1, 1.0 / 6.0, 0.25, 0.4] {
            let sym = symmetric_three_mass_proxy(p, 1.0).unwrap().sigma2_opt;
            let asym = asymmetric_three_mass_proxy(ThreeMassParams::new(p, p, 1.0).unwrap())
                .unwrap()
                .sigma2_opt;
            assert_relative_eq!(asym, sym, max_relative = 1e-8);
        }
        let r = asymmetric_three_mass_proxy(ThreeMassParams::new(0.25, 0.25, 1.0).unwrap()).unwrap();
        assert_eq!(r.sigma2_opt, 0.5);
        assert!(r.strict);
    }

    #[test]
    fn asymmetric_two_atom_degenerate() {
        let r = asymmetric_three_mass_proxy(ThreeMassParams::new(0.9, 0.1, 1.0).unwrap()).unwrap();
        assert_relative_eq!(r.sigma2_opt, 4.0 * bernoulli_proxy(0.1).unwrap(), max_relative = 1e-14);
    }

    #[test]
    fn asymmetric_rejects_bad_input() {
        assert!(ThreeMassParams::new(0.0, 0.2, 1.0).is_err());
        assert!(ThreeMassParams::new(0.6, 0.6, 1.0).is_err());
        assert!(ThreeMassParams::new(0.2, 0.2, -1.0).is_err());
    }

    #[test]
    fn uniform_values() {
        let r = discrete_uniform_proxy(2, 1.0, 0.0).unwrap();
        assert_eq!(r.sigma2_opt, 0.25);
        assert_eq!(r.sigma2_opt, bernoulli_proxy(0.5).unwrap());
        assert_eq!(discrete_uniform_proxy(10, 1.0, 0.0).unwrap().sigma2_opt, 8.25);
        assert_eq!(discrete_uniform_proxy(5, 2.0, 0.0).unwrap().sigma2_opt, 8.0);
        assert_eq!(discrete_uniform_proxy(1, 1.0, 0.0).unwrap().sigma2_opt, 0.0);
        assert!(discrete_uniform_proxy(0, 1.0, 0.0).is_err());
        assert!(discrete_uniform_proxy(3, 0.0, 0.0).is_err());
        assert!(discrete_uniform_proxy(3, 1.0, 0.0).unwrap().strict);
    }
}
