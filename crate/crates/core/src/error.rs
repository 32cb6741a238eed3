use thiserror::Error;

/// Errors raised anywhere in the capacity pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{func}: pole at {at}")]
    Pole { func: &'static str, at: f64 },

    #[error("{func}: argument out of domain ({detail})")]
    Domain { func: &'static str, detail: String },

    #[error("{func}: parameter region not supported ({detail})")]
    UnsupportedRegion { func: &'static str, detail: String },

    #[error("meijer g: no straight contour separates the pole families (left {left}, right {right})")]
    PoleSeparation { left: f64, right: f64 },

    #[error("{what}: did not converge ({detail})")]
    NonConvergent { what: &'static str, detail: String },

    #[error("interference covariance is numerically singular (rcond {rcond:e})")]
    RankDeficient { rcond: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("analytic MMSE expressions require equal interferer powers")]
    UnequalInterference,

    #[error("{what}: numeric inconsistency, value {value}")]
    NumericInconsistency { what: &'static str, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { func, detail: detail.into() }
    }

    pub(crate) fn unsupported(func: &'static str, detail: impl Into<String>) -> Self {
        Error::UnsupportedRegion { func, detail: detail.into() }
    }

    pub(crate) fn non_convergent(what: &'static str, detail: impl Into<String>) -> Self {
        Error::NonConvergent { what, detail: detail.into() }
    }

    /// True for errors caused by the caller's configuration rather than by
    /// the numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Error::InvalidConfig(_) | Error::UnequalInterference)
    }
}
