use thiserror::Error;

/// Errors shared across the crate.
///
/// Singular steps hit while *iterating* an orbit are data, not errors (see
/// [`crate::orbit::Termination`]); the variants here are contract violations
/// detected up front.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// `a = 0` and `b = 0`: the denominator of the recurrence is identically zero.
    #[error("degenerate parameters: a = 0 and b = 0")]
    DegenerateParams,

    /// A non-finite float was supplied where a finite value is required.
    #[error("non-finite input value")]
    NonFinite,

    /// A Moebius step or closed-form denominator vanished.
    #[error("singular denominator")]
    SingularDenominator,

    /// The requested formula branch is not defined at these parameters.
    #[error("unsupported branch: {0}")]
    UnsupportedBranch(&'static str),

    /// The seed's orbit hits a zero denominator when computing `x[step]`.
    #[error("seed is not admissible: zero denominator at step {blow_up_step}")]
    NotAdmissible { blow_up_step: u32 },

    /// The seed is admissible but singular (`alpha = 0` or `alpha = 1 - a`),
    /// and the operation needs a regular one.
    #[error("seed is not a regular solution")]
    NotRegular,

    /// The operation requires `0 < |a| < 1`.
    #[error("parameter a out of range: need 0 < |a| < 1")]
    NotInRange,

    /// The truncation index is too small for the geometric tail estimate.
    #[error("tail is not yet geometric at this truncation index")]
    TailNotYetGeometric,

    /// Product bounds need `0 < |a| < 1` and `alpha > (1 - a)/2`.
    #[error("outside bound hypothesis: need 0 < |a| < 1 and alpha > (1 - a)/2")]
    OutOfHypothesis,

    /// `(p, q)` does not satisfy `a + b p q = 1` (within tolerance).
    #[error("(p, q) is not a periodic point")]
    NotPeriodicPoint,

    /// The value exists but has no representation in the current scalar mode
    /// (an irrational square root in exact mode).
    #[error("value is not representable in exact mode")]
    NotRepresentable,

    /// A numeric literal could not be parsed.
    #[error("invalid numeric literal: {0}")]
    InvalidLiteral(String),
}
