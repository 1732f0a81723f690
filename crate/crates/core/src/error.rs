//! Error type shared across the library.

use thiserror::Error;

/// Errors produced by exact-arithmetic and classification routines.
///
/// Each variant carries a stable machine-readable code (see [`Error::code`])
/// so front ends can map failures without string matching.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Both inputs to a gcd (or similar) were identically zero.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// An operation that requires a nonzero form received the zero form.
    #[error("zero form is not allowed here")]
    ZeroForm,

    /// A root divisor that no Newton map realizes (all mass at infinity).
    #[error("unsupported divisor: {0}")]
    UnsupportedDivisor(String),

    /// A point that was expected to be a root of the source divisor is not.
    #[error("not a root of the divisor: {0}")]
    NotARoot(String),

    /// Exact linear factorization over the Gaussian rationals is incomplete
    /// where a certified answer was required.
    #[error("inexact factorization: {0}")]
    InexactFactor(String),

    /// Requested the strictly semistable normal form in an even degree,
    /// where the strictly semistable locus is empty.
    #[error("no strictly semistable class in degree {0}")]
    NoStrictlySemistable(u32),

    /// An operation defined only on semistable maps received an unstable one.
    #[error("unstable input: {0}")]
    UnstableInput(String),

    /// The map lies on the indeterminacy locus.
    #[error("indeterminate map (constant reduced part at its own hole)")]
    IndeterminateInput,

    /// A symbolic iterate would exceed the coefficient budget.
    #[error("iterate budget exceeded: degree {required} > budget {budget}")]
    BudgetExceeded { required: u64, budget: u64 },

    /// The measure of a nondegenerate map is not atomic and out of scope.
    #[error("nondegenerate map: maximal measure is not atomic")]
    NonAtomicMeasure,

    /// The conformal barycenter does not exist for this measure.
    #[error("barycenter undefined: {0}")]
    BarycenterUndefined(String),

    /// A numerical routine failed to converge.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// The valuation of a truncated series cannot be certified.
    #[error("indeterminate valuation: no known term below the truncation order")]
    IndeterminateValuation,

    /// A reduction or comparison needs coefficients beyond the truncation order.
    #[error("uncertified reduction: {0}")]
    UncertifiedReduction(String),

    /// Two input roots agree on every retained term.
    #[error("roots {0} and {1} are indistinguishable at the given truncation")]
    IndistinguishableRoots(usize, usize),

    /// Marked moduli points require pairwise distinct finite roots.
    #[error("repeated or infinite roots are not a marked moduli point")]
    RepeatedRoots,

    /// A weighted configuration with no points.
    #[error("empty configuration")]
    EmptyConfiguration,

    /// A root divisor violating its own invariants.
    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),

    /// Input text could not be parsed; `pos` is a byte offset.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// An internal consistency assertion failed (a theorem the code relies on).
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code for this error.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DegenerateInput(_) => "degenerate-input",
            Error::ZeroForm => "zero-form",
            Error::UnsupportedDivisor(_) => "unsupported-divisor",
            Error::NotARoot(_) => "not-a-root",
            Error::InexactFactor(_) => "inexact-factor",
            Error::NoStrictlySemistable(_) => "no-strictly-semistable",
            Error::UnstableInput(_) => "unstable-input",
            Error::IndeterminateInput => "indeterminate-input",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::NonAtomicMeasure => "non-atomic-measure",
            Error::BarycenterUndefined(_) => "barycenter-undefined",
            Error::NumericalFailure(_) => "numerical-failure",
            Error::IndeterminateValuation => "indeterminate-valuation",
            Error::UncertifiedReduction(_) => "uncertified-reduction",
            Error::IndistinguishableRoots(_, _) => "indistinguishable-roots",
            Error::RepeatedRoots => "repeated-roots",
            Error::EmptyConfiguration => "empty-configuration",
            Error::InvalidDivisor(_) => "invalid-divisor",
            Error::Parse { .. } => "parse-error",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
