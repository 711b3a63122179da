use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("quadrature did not converge: estimate {estimate:e}, error estimate {error:e} after {subdivisions} subdivisions")]
    NonConvergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("iteration did not converge: {0}")]
    IterationLimit(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("integrand is not finite at interior point x = {0:e}")]
    NonFinite(f64),

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("grid is not uniform")]
    NonUniformGrid,

    #[error("time grid too short: {0}")]
    GridTooShort(String),

    #[error("energy variance is infinite")]
    InfiniteVariance,

    #[error("function vanishes at the origin")]
    ZeroAtOrigin,

    #[error("function does not vanish at the origin (value {0:e})")]
    NonzeroAtOrigin(f64),

    #[error("nondecay probability never crosses {level} on the grid")]
    NoCrossing { level: f64 },

    #[error("functional diverges: {0}")]
    Divergent(String),

    #[error("amplitude level {level} not reached on the grid")]
    LevelNotReached { level: f64 },

    #[error("bound not applicable: {0}")]
    BoundInapplicable(String),

    #[error("orthogonal state not reached on the grid")]
    NotReached,

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("exponent p = {p} outside the admissible range (0, {max}]")]
    POutOfRange { p: f64, max: f64 },

    #[error("central moment of order {0} diverges")]
    MomentDivergent(u32),

    #[error("negative energy variance {0:e}: state is inconsistent")]
    NegativeVariance(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("energy dispersion is zero")]
    ZeroDispersion,

    #[error("spectrum is not Hermitian: F(-w) != conj(F(w)) (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("unknown bound name `{0}`")]
    UnknownBoundName(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Errors that come from a numerical procedure rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::IterationLimit(_)
                | Error::NonFinite(_)
                | Error::Divergent(_)
                | Error::NoCrossing { .. }
                | Error::LevelNotReached { .. }
                | Error::NotReached
                | Error::MomentDivergent(_)
                | Error::InfiniteVariance
                | Error::NegativeVariance(_)
                | Error::ZeroDispersion
        )
    }
}
