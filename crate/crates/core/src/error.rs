use thiserror::Error;

use crate::numerics::NumericsError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cost {c} outside support [{lo}, {hi}]")]
    OutOfSupport { c: f64, lo: f64, hi: f64 },

    #[error("contribution {xi} outside prize domain [{lo}, {hi}]")]
    OutsidePrizeDomain { xi: f64, lo: f64, hi: f64 },

    #[error("virtual cost of {name} is not strictly increasing near c = {c}")]
    NotRegular { c: f64, name: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("h' cannot be inverted at slope {slope}: {reason}")]
    NotInvertible { slope: f64, reason: String },

    #[error("envelope check failed at c = {c}: direct {direct}, envelope {envelope}")]
    Inconsistent { c: f64, direct: f64, envelope: f64 },

    #[error("fixed-prize solve failed at V0 = {v0}, m = {m}: {source}")]
    FixedPrize {
        v0: f64,
        m: usize,
        #[source]
        source: NumericsError,
    },

    #[error("optimizer peak at boundary V0 = {v0} of [{lo}, {hi}] after widening")]
    PeakAtBoundary { v0: f64, lo: f64, hi: f64 },

    #[error(transparent)]
    Numerics(#[from] NumericsError),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("scenario parse error: {0}")]
    Scenario(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 1 for invalid input, 2 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_)
            | Error::OutOfSupport { .. }
            | Error::OutsidePrizeDomain { .. }
            | Error::NotRegular { .. }
            | Error::Unsupported(_)
            | Error::Scenario(_)
            | Error::Io { .. } => 1,
            Error::NotInvertible { .. }
            | Error::Inconsistent { .. }
            | Error::FixedPrize { .. }
            | Error::PeakAtBoundary { .. }
            | Error::Numerics(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
