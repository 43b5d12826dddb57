use std::fmt;

/// Errors raised by the library operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    EmptyInput,
    /// Expected and found dimension.
    DimensionMismatch(usize, usize),
    /// A checked multiplication, addition or subtraction left the scalar range.
    ArithmeticOverflow,
    /// Expected and found number of points.
    WrongArity(usize, usize),
    DuplicatePoints,
    /// Requested subset size and the number of available points.
    ArityTooLarge(usize, usize),
    SumMismatch,
    OddKInPairMode(usize),
    /// The work estimate (or the work done so far) and the configured budget.
    BudgetExceeded { needed: u128, budget: u64 },
    ZeroEdges,
    TauOutOfRange,
    VacuousConstraint { k: usize, d: usize },
    InvalidConfig(String),
    HypothesisViolated(String),
    NotPrime(u64),
    ProbabilityOutOfRange,
    LengthMismatch(usize, usize),
    NotASolution,
    NonBijectiveSigma,
    /// Malformed input text, with a 1-based line number.
    Parse { line: usize, msg: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyInput => write!(f, "empty input"),
            Error::DimensionMismatch(want, got) => {
                write!(f, "dimension mismatch: expected {want}, found {got}")
            }
            Error::ArithmeticOverflow => write!(f, "arithmetic overflow in exact integer arithmetic"),
            Error::WrongArity(want, got) => write!(f, "wrong arity: expected {want} points, found {got}"),
            Error::DuplicatePoints => write!(f, "duplicate points"),
            Error::ArityTooLarge(r, n) => write!(f, "subset size {r} exceeds set size {n}"),
            Error::SumMismatch => write!(f, "subsets have different sums"),
            Error::OddKInPairMode(k) => write!(f, "pair-based census needs even k, got {k}"),
            Error::BudgetExceeded { needed, budget } => {
                write!(f, "budget exceeded: {needed} units of work against budget {budget}")
            }
            Error::ZeroEdges => write!(f, "hypergraph has no edges"),
            Error::TauOutOfRange => write!(f, "tau must lie strictly between 0 and 1/2"),
            Error::VacuousConstraint { k, d } => {
                write!(f, "constraint is vacuous: k = {k} is not below d = {d}")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::HypothesisViolated(msg) => write!(f, "hypothesis violated: {msg}"),
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::ProbabilityOutOfRange => write!(f, "probability must lie in (0, 1]"),
            Error::LengthMismatch(a, b) => write!(f, "length mismatch: {a} values for {b} coefficients"),
            Error::NotASolution => write!(f, "values do not satisfy the equation"),
            Error::NonBijectiveSigma => write!(f, "r-subset sums are not distinct"),
            Error::Parse { line, msg } => write!(f, "line {line}: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
