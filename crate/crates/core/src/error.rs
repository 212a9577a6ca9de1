use std::io;

use crate::rational::Rational;
use crate::task::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid task set: {}", join(.0))]
    InvalidTaskSet(Vec<Violation>),

    #[error("hyperperiod {hyperperiod} exceeds the configured cap {cap}")]
    HorizonOverflow {
        hyperperiod: Box<Rational>,
        cap: Box<Rational>,
    },

    #[error("more than {cap} deadline points below horizon {horizon}")]
    PointExplosion { cap: u64, horizon: Box<Rational> },

    #[error("simulation exceeded {cap} events")]
    EventExplosion { cap: u64 },

    #[error("task set does not have the common-deadline shape: {0}")]
    ShapeMismatch(String),

    #[error("speed must be positive, got {0}")]
    NonPositiveSpeed(Box<Rational>),

    #[error("horizon must be positive, got {0}")]
    NonPositiveHorizon(Box<Rational>),

    #[error("partition does not cover the task set: {0}")]
    Coverage(String),

    #[error("oracle refuses {n} tasks (cap {cap})")]
    CapExceeded { n: usize, cap: usize },

    #[error("bad parameter: {0}")]
    BadParam(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] io::Error),
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
