use alloc::boxed::Box;

use thiserror::Error;

use crate::binary::ConditionCertificate;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distributions are not aligned: {0}")]
    Alignment(&'static str),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(&'static str),

    #[error("{what} = {value} is outside its domain")]
    Domain { what: &'static str, value: f64 },

    #[error(
        "sufficient condition fails: min t·g''(t) − g'(t) = {} at t = {}",
        .0.min_margin,
        .0.witness
    )]
    ConditionNotSatisfied(Box<ConditionCertificate>),

    #[error("non-finite second derivative at t = {t}")]
    Evaluation { t: f64 },

    #[error("precondition violated: {0}")]
    Precondition(&'static str),

    #[error("search failed: {0}")]
    Search(&'static str),

    #[error("construction failed: {0}")]
    Construction(&'static str),

    #[error("probability {value} at t = {t} went negative; use a smaller dt")]
    StepSize { t: f64, value: f64 },

    #[error("degenerate system: dynamical activity is zero")]
    DegenerateSystem,

    #[error("invalid Markov system: {0}")]
    InvalidSystem(&'static str),
}
