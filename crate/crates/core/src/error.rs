use thiserror::Error;

use crate::kernel::PairViolation;
use crate::model::PolarizationViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a comb-like curve needs at least 2 components, got {0}")]
    TooFewComponents(usize),
    #[error("bundle rank must be at least 1")]
    ZeroRank,
    #[error("{what} has {found} entries but the curve has {expected} components")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("component index {j} out of range (valid: 1..={max})")]
    IndexOutOfRange { j: usize, max: usize },
    #[error("invalid polarization: {}", join(.0))]
    InvalidPolarization(Vec<PolarizationViolation>),
    #[error("invalid generated pair: {}", join(.0))]
    InvalidPair(Vec<PairViolation>),
    #[error("{0}")]
    Domain(String),
    #[error("interval is empty")]
    EmptyInterval,
    #[error(
        "the bundle cannot be w-semistable: the necessary inequality fails at component {j}"
    )]
    HypothesisRefuted { j: usize },
    #[error(
        "inconsistent kernel dimensions: the spine restriction has a kernel but no tooth does"
    )]
    InconsistentKernelDims,
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
