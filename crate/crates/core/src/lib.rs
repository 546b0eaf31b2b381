//! Optimal sub-Gaussian variance proxies of finite discrete distributions.
//!
//! A centered random variable `X` is sub-Gaussian with variance proxy σ² when
//! `E[exp(λ(X − μ))] ≤ exp(λ²σ²/2)` for every real λ. The smallest such σ² is
//! the optimal proxy σ²_opt; it is never below the variance, and the variable is
//! called strictly sub-Gaussian when the two coincide.
//!
//! The crate offers three independent routes to σ²_opt:
//!
//! - [`characterizer::optimal_proxy_general`] locates the nonzero roots of
//!   `λM'(λ) − 2M(λ)` for the centered CGF `M`, keeps those where
//!   `g(λ; σ²) = ½λ²σ² − M(λ)` has a local minimum and returns the largest
//!   `M'(λ)/λ` (or the variance).
//! - [`closed_forms`] covers Bernoulli, binomial, symmetric and asymmetric
//!   3-mass laws and the discrete uniform law.
//! - [`oracle`] bisects on σ² with a dense grid check of `g ≥ 0`.
//!
//! ```
//! use subgauss::{optimal_proxy_general, DiscreteDistribution, SolverConfig};
//!
//! let d = DiscreteDistribution::new(&[-1.0, 0.0, 1.0], &[0.05, 0.94, 0.01])?;
//! let r = optimal_proxy_general(&d, &SolverConfig::default())?;
//! assert!(!r.strict);
//! assert!((r.sigma2_opt - 0.156_220_37).abs() < 1e-8);
//! # Ok::<(), subgauss::Error>(())
//! ```

// `!(x >= 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod characterizer;
pub mod cli;
pub mod closed_forms;
pub mod distribution;
pub mod error;
pub mod oracle;
pub mod roots;

pub use characterizer::{
    classify_candidate, find_h_roots, optimal_proxy_general, search_window, CandidatePoint,
    Family, Method, ProxyResult, SolverConfig,
};
pub use closed_forms::{
    asymmetric_three_mass_proxy, bernoulli_proxy, binomial_proxy, discrete_uniform_proxy,
    symmetric_lambda0, symmetric_three_mass_proxy, ThreeMassParams,
};
pub use distribution::{CgfDerivatives, DiscreteDistribution};
pub use error::{Error, Result};
pub use oracle::{
    bisect_optimal_proxy, export_curve, is_variance_proxy, CurveRow, GridConfig,
    VerificationReport,
};
