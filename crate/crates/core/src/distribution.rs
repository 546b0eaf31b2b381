//! Finite discrete distributions and their centered cumulant-generating function.
//!
//! All CGF quantities are taken for the centered variable `Y - E[Y]`:
//!
//! ```text
//! M(λ)   = ln Σ w_i exp(λ (x_i - μ))
//! M'(λ)  = Σ q_i (x_i - μ)            q_i ∝ w_i exp(λ (x_i - μ))
//! M''(λ) = Σ q_i (x_i - μ - M'(λ))²
//! ```
//!
//! The derivatives are moments of the exponentially tilted weights `q`, so
//! they are exact for finite support and cost O(N) per evaluation.

use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Relative distance (in units of the support range) under which two atoms merge.
const MERGE_TOL: f64 = 1e-12;

/// Gate used by [`DiscreteDistribution::from_pmf`].
const PMF_SUM_TOL: f64 = 1e-9;

/// Below this value of `max |λ (x_i - μ)|` the CGF is evaluated through
/// `expm1`/`ln_1p`, which keeps `M` accurate to full relative precision near 0.
const SMALL_EXPONENT: f64 = 1.0;

/// A random variable with finitely many atoms.
///
/// Atoms are strictly increasing, weights strictly positive and summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteDistribution {
    atoms: Vec<f64>,
    weights: Vec<f64>,
    #[serde(skip)]
    mean: f64,
}

/// Value and first two derivatives of the centered CGF at one λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CgfDerivatives {
    pub m0: f64,
    pub m1: f64,
    pub m2: f64,
}

impl DiscreteDistribution {
    /// Builds a distribution from atoms and nonnegative masses.
    ///
    /// Zero masses are dropped, atoms sorted, near-duplicates merged and the
    /// masses rescaled to sum to one.
    pub fn new(atoms: &[f64], weights: &[f64]) -> Result<Self> {
        if atoms.len() != weights.len() {
            return Err(Error::LengthMismatch {
                atoms: atoms.len(),
                weights: weights.len(),
            });
        }
        if atoms.is_empty() {
            return Err(Error::Empty);
        }
        if atoms.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("atoms"));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFinite("weights"));
        }
        if let Some(&w) = weights.iter().find(|&&w| w < 0.0) {
            return Err(Error::NegativeWeight(w));
        }

        let mut pairs: Vec<(f64, f64)> = atoms
            .iter()
            .zip(weights)
            .filter(|(_, &w)| w > 0.0)
            .map(|(&x, &w)| (x, w))
            .collect();
        if pairs.is_empty() {
            return Err(Error::ZeroMass);
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

        let range = pairs[pairs.len() - 1].0 - pairs[0].0;
        let merge_radius = MERGE_TOL * range;
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (x, w) in pairs {
            match merged.last_mut() {
                Some(last) if x - last.0 <= merge_radius => last.1 += w,
                _ => merged.push((x, w)),
            }
        }

        let total: f64 = merged.iter().map(|p| p.1).sum();
        let (atoms, weights): (Vec<f64>, Vec<f64>) =
            merged.into_iter().map(|(x, w)| (x, w / total)).unzip();
        Ok(Self::from_parts(atoms, weights))
    }

    /// Like [`new`](Self::new) but rejects masses whose total is not 1 within 1e-9.
    pub fn from_pmf(atoms: &[f64], weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if total.is_finite() && (total - 1.0).abs() > PMF_SUM_TOL {
            return Err(Error::NotNormalized(total));
        }
        Self::new(atoms, weights)
    }

    fn from_parts(atoms: Vec<f64>, weights: Vec<f64>) -> Self {
        let mean = atoms.iter().zip(&weights).map(|(x, w)| x * w).sum();
        Self {
            atoms,
            weights,
            mean,
        }
    }

    /// Two-point law on {0, 1} with `P(X = 1) = p`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(invalid("p", p, "must lie in (0, 1)"));
        }
        Self::new(&[0.0, 1.0], &[1.0 - p, p])
    }

    /// Binomial law on {0, ..., n}. Masses that underflow to zero are dropped.
    pub fn binomial(n: u32, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", 0.0, "must be at least 1"));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(invalid("p", p, "must lie in (0, 1)"));
        }
        let nf = f64::from(n);
        let log_odds = (p / (1.0 - p)).ln();
        let mut log_pmf = nf * (1.0 - p).ln();
        let mut atoms = Vec::with_capacity(n as usize + 1);
        let mut weights = Vec::with_capacity(n as usize + 1);
        for k in 0..=n {
            atoms.push(f64::from(k));
            weights.push(log_pmf.exp());
            let kf = f64::from(k);
            log_pmf += ((nf - kf) / (kf + 1.0)).ln() + log_odds;
        }
        Self::new(&atoms, &weights)
    }

    /// Law on {-a, 0, a} with masses `p1`, `1 - p1 - p2`, `p2`.
    pub fn three_mass(p1: f64, p2: f64, a: f64) -> Result<Self> {
        if !(p1 > 0.0 && p1 < 1.0) {
            return Err(invalid("p1", p1, "must lie in (0, 1)"));
        }
        if !(p2 > 0.0 && p2 < 1.0) {
            return Err(invalid("p2", p2, "must lie in (0, 1)"));
        }
        if p1 + p2 > 1.0 + 1e-12 {
            return Err(invalid("p1 + p2", p1 + p2, "must not exceed 1"));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(invalid("a", a, "must be positive and finite"));
        }
        let p3 = (1.0 - p1 - p2).max(0.0);
        Self::new(&[-a, 0.0, a], &[p1, p3, p2])
    }

    /// Uniform law on {1, ..., n}.
    pub fn uniform(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", 0.0, "must be at least 1"));
        }
        let atoms: Vec<f64> = (1..=n).map(f64::from).collect();
        let weights = vec![1.0 / f64::from(n); n as usize];
        Self::new(&atoms, &weights)
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn x_min(&self) -> f64 {
        self.atoms[0]
    }

    pub fn x_max(&self) -> f64 {
        self.atoms[self.atoms.len() - 1]
    }

    /// `x_max - x_min`; zero for a single atom.
    pub fn range(&self) -> f64 {
        self.x_max() - self.x_min()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.central_moment(2)
    }

    /// `E[(X - μ)^k]`.
    pub fn central_moment(&self, k: u32) -> f64 {
        let k = k as i32;
        self.atoms
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * (x - self.mean).powi(k))
            .sum()
    }

    /// Evaluates the centered CGF and its first two derivatives.
    pub fn cgf_at(&self, lambda: f64) -> Result<CgfDerivatives> {
        if !lambda.is_finite() {
            return Err(Error::NonFinite("lambda"));
        }
        let mu = self.mean;
        let spread = (self.x_max() - mu).max(mu - self.x_min());
        if lambda.abs() * spread <= SMALL_EXPONENT {
            Ok(self.cgf_small(lambda))
        } else {
            Ok(self.cgf_shifted(lambda))
        }
    }

    // Σ w_i d_i = 0 by centering, so the linear part of the sum drops out and
    // both M and M' are formed from expm1 terms without cancellation.
    fn cgf_small(&self, lambda: f64) -> CgfDerivatives {
        let mu = self.mean;
        let mut t = 0.0;
        let mut first = 0.0;
        for (x, w) in self.atoms.iter().zip(&self.weights) {
            let d = x - mu;
            let e = (lambda * d).exp_m1();
            t += w * e;
            first += w * d * e;
        }
        let s = 1.0 + t;
        let m0 = t.ln_1p();
        let m1 = first / s;
        let m2 = self
            .atoms
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| {
                let d = x - mu;
                w * (lambda * d).exp() * (d - m1) * (d - m1)
            })
            .sum::<f64>()
            / s;
        CgfDerivatives { m0, m1, m2 }
    }

    fn cgf_shifted(&self, lambda: f64) -> CgfDerivatives {
        let mu = self.mean;
        let shift = self
            .atoms
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w.ln() + lambda * (x - mu))
            .fold(f64::NEG_INFINITY, f64::max);
        let mut s = 0.0;
        let mut first = 0.0;
        for (x, w) in self.atoms.iter().zip(&self.weights) {
            let d = x - mu;
            let e = (w.ln() + lambda * d - shift).exp();
            s += e;
            first += e * d;
        }
        let m1 = first / s;
        let m2 = self
            .atoms
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| {
                let d = x - mu;
                (w.ln() + lambda * d - shift).exp() * (d - m1) * (d - m1)
            })
            .sum::<f64>()
            / s;
        CgfDerivatives {
            m0: shift + s.ln(),
            m1,
            m2,
        }
    }

    /// `g(λ; σ²) = ½ λ² σ² − M(λ)`; σ² is a variance proxy iff this is ≥ 0 for all λ.
    pub fn g_eval(&self, lambda: f64, sigma2: f64) -> Result<f64> {
        if !(sigma2 >= 0.0) {
            return Err(invalid("sigma2", sigma2, "must be nonnegative"));
        }
        Ok(0.5 * lambda * lambda * sigma2 - self.cgf_at(lambda)?.m0)
    }

    /// `h(λ) = λ M'(λ) − 2 M(λ)`, whose nonzero roots are the critical points.
    pub fn h_eval(&self, lambda: f64) -> Result<f64> {
        let c = self.cgf_at(lambda)?;
        Ok(h_from(lambda, &c))
    }

    /// Maps every atom through `x ↦ a x + b`.
    pub fn affine_transform(&self, a: f64, b: f64) -> Result<Self> {
        if a == 0.0 || !a.is_finite() {
            return Err(invalid("a", a, "must be finite and nonzero"));
        }
        if !b.is_finite() {
            return Err(Error::NonFinite("b"));
        }
        let mut atoms: Vec<f64> = self.atoms.iter().map(|x| a * x + b).collect();
        let mut weights = self.weights.clone();
        if a < 0.0 {
            atoms.reverse();
            weights.reverse();
        }
        Ok(Self::from_parts(atoms, weights))
    }
}

pub(crate) fn h_from(lambda: f64, c: &CgfDerivatives) -> f64 {
    lambda * c.m1 - 2.0 * c.m0
}
