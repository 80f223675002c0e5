//! Error type shared across the crate.

use std::fmt;

/// All failure modes surfaced by this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An angle argument was NaN or infinite.
    InvalidAngle(f64),
    /// A beam design violated a structural invariant.
    InvalidDesign(String),
    /// A probability model could not be constructed.
    InvalidPdf(String),
    /// Mixture weights were negative or did not sum to one.
    InvalidWeights { sum: f64 },
    /// Discretization resolution below the minimum.
    InvalidResolution(usize),
    /// Boundary list was not circularly ordered.
    InvalidBoundaries(String),
    /// A feedback set has no decoding candidate under the requested policy.
    NoCandidate { positivity: Vec<usize> },
    /// Pair-family enumeration exceeded the exhaustion cap.
    CombinatorialLimit { pairs: usize, cap: usize },
    /// Feedback generation produced an empty positivity set on a covering design.
    InternalConsistency(String),
    /// A probability came out negative beyond tolerance.
    NumericalInstability { value: f64 },
    /// The design does not cover the angular domain.
    NotCovering { gap: f64 },
    /// Optimizer hit its iteration cap; carries the best solution found.
    NonConvergence {
        lambda_bar: f64,
        iterations: u64,
        boundaries: Vec<f64>,
    },
    /// Exhaustive enumeration would exceed the configured budget.
    BudgetExceeded { estimate: u128, budget: u128 },
    /// Requested parameters admit no feasible design.
    Infeasible(String),
    /// An operation received an empty input list.
    EmptyInput(&'static str),
    /// Gain is undefined for a zero-width beam.
    ZeroWidth,
    /// Configuration value out of range or malformed.
    InvalidConfig { field: String, reason: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidAngle(v) => write!(f, "invalid angle: {v} is not finite"),
            Self::InvalidDesign(msg) => write!(f, "invalid beam design: {msg}"),
            Self::InvalidPdf(msg) => write!(f, "invalid pdf: {msg}"),
            Self::InvalidWeights { sum } => {
                write!(f, "mixture weights must be nonnegative and sum to 1 (sum = {sum})")
            }
            Self::InvalidResolution(n) => write!(f, "discretization needs at least 2 cells, got {n}"),
            Self::InvalidBoundaries(msg) => write!(f, "invalid boundary list: {msg}"),
            Self::NoCandidate { positivity } => {
                write!(f, "no decoding candidate for positivity set {positivity:?}")
            }
            Self::CombinatorialLimit { pairs, cap } => {
                write!(f, "pair family of size {pairs} exceeds exhaustion cap {cap}")
            }
            Self::InternalConsistency(msg) => write!(f, "internal consistency violation: {msg}"),
            Self::NumericalInstability { value } => {
                write!(f, "probability {value} below zero beyond tolerance")
            }
            Self::NotCovering { gap } => {
                write!(f, "design does not cover the circle (gap of measure {gap})")
            }
            Self::NonConvergence { lambda_bar, iterations, .. } => write!(
                f,
                "optimizer did not stabilize within {iterations} iterations (best lambda_bar = {lambda_bar})"
            ),
            Self::BudgetExceeded { estimate, budget } => write!(
                f,
                "enumeration of ~{estimate} candidates exceeds budget of {budget}"
            ),
            Self::Infeasible(msg) => write!(f, "infeasible request: {msg}"),
            Self::EmptyInput(what) => write!(f, "empty input: {what}"),
            Self::ZeroWidth => write!(f, "gain is undefined for zero beamwidth"),
            Self::InvalidConfig { field, reason } => write!(f, "config field `{field}`: {reason}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
