use thiserror::Error;

/// Errors raised while building distributions or computing proxies.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("atoms and weights differ in length ({atoms} vs {weights})")]
    LengthMismatch { atoms: usize, weights: usize },

    #[error("distribution needs at least one atom")]
    Empty,

    #[error("all weights are zero")]
    ZeroMass,

    #[error("negative weight {0}")]
    NegativeWeight(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("weights sum to {0}, expected 1 within 1e-9")]
    NotNormalized(f64),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("operation needs at least two atoms")]
    SingleAtom,

    #[error("lambda = {0} lies inside the zero-exclusion interval")]
    InsideExclusionZone(f64),

    #[error("search window expansion exhausted after {0} doublings")]
    WindowExhausted(u32),

    #[error("bracket expansion failed: {0}")]
    BracketExpansion(&'static str),

    #[error("no sign change on [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },

    #[error("root finder did not converge in {0} iterations")]
    NoConvergence(usize),

    #[error("{0}")]
    Spec(String),
}

impl Error {
    /// True for errors caused by malformed input rather than a solver breakdown.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::WindowExhausted(_)
                | Error::BracketExpansion(_)
                | Error::NotBracketed { .. }
                | Error::NoConvergence(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter {
        name,
        value,
        reason,
    }
}
