//! Error type shared across the crate.

use std::fmt;

/// Everything that can go wrong in the pipeline, from parsing through
/// assembly and numeric evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A denominator that must be nonzero was zero.
    ZeroDenominator,
    /// A total x-derivative would push a jet variable past the configured cap.
    JetCapExceeded { order: u32, cap: u32 },
    /// Syntax error at a byte position of the input.
    Parse { pos: usize, msg: String },
    /// The right-hand side cannot be brought to P(x,y)/Q(x,y) with P, Q
    /// polynomial in y (e.g. it contains ln/exp/int nodes).
    NotRationalInY,
    /// An identifier that is neither x, y nor a declared parameter.
    UndeclaredIdentifier { pos: usize, name: String },
    /// Point evaluation hit a zero denominator.
    PoleAtPoint,
    /// The order-guide tables do not cover this (kind, N_P, N_Q) case.
    GuideGap { np: i64, nq: i64 },
    /// The factor kind's defining equation divides by f, but P is identically zero.
    DividesByF,
    /// The operation supports CONST/POLYX ansatz modes only.
    UnsupportedMode,
    /// A solver limit was exceeded before the system was resolved.
    Gaveup { reason: String },
    /// The search exhausted its bounds without a verified factor.
    NotFound { tried: usize },
    /// No pole-free anchor could be chosen for the quadrature basepoints.
    BadAnchor,
    /// A quantity that must be independent of y failed its spot check.
    AssemblyInconsistent { detail: String },
    /// Logarithm of a nonpositive value or a similar domain violation.
    DomainError { what: String },
    /// A quadrature path crossed a pole or produced non-finite values.
    PoleOnPath,
    /// Nested evaluation exceeded the recursion/depth budget.
    DepthExceeded,
    /// The reference trajectory ran into a pole of f.
    PoleOnTrajectory { x: f64 },
    /// Rejection sampling could not find any valid sample points.
    NoValidSamples,
    /// The corpus sampler exhausted its attempt budget.
    CorpusExhausted,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroDenominator => write!(f, "zero denominator"),
            Error::JetCapExceeded { order, cap } => {
                write!(f, "jet derivative order {} exceeds cap {}", order, cap)
            }
            Error::Parse { pos, msg } => write!(f, "parse error at position {}: {}", pos, msg),
            Error::NotRationalInY => write!(f, "expression is not rational in y"),
            Error::UndeclaredIdentifier { pos, name } => {
                write!(f, "undeclared identifier `{}` at position {}", name, pos)
            }
            Error::PoleAtPoint => write!(f, "evaluation at a pole"),
            Error::GuideGap { np, nq } => {
                write!(f, "order guide has no table entry for N_P={}, N_Q={}", np, nq)
            }
            Error::DividesByF => write!(f, "defining equation divides by f but P = 0"),
            Error::UnsupportedMode => write!(f, "operation requires a const/polyx ansatz mode"),
            Error::Gaveup { reason } => write!(f, "solver gave up: {}", reason),
            Error::NotFound { tried } => {
                write!(f, "no verified factor within bounds ({} candidates tried)", tried)
            }
            Error::BadAnchor => write!(f, "no pole-free anchor available"),
            Error::AssemblyInconsistent { detail } => {
                write!(f, "assembly inconsistency: {}", detail)
            }
            Error::DomainError { what } => write!(f, "domain error: {}", what),
            Error::PoleOnPath => write!(f, "pole on integration path"),
            Error::DepthExceeded => write!(f, "evaluation depth exceeded"),
            Error::PoleOnTrajectory { x } => write!(f, "pole on trajectory near x = {}", x),
            Error::NoValidSamples => write!(f, "no valid sample points found"),
            Error::CorpusExhausted => write!(f, "corpus sampler exhausted its attempts"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
