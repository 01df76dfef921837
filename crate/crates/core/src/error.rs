use thiserror::Error;

/// Errors raised by constructors and operations across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid group order: {0}")]
    InvalidOrder(usize),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("element set must be nonempty")]
    EmptySet,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("subspace is not closed under products or adjoints (residual {0:.3e})")]
    NotClosed(f64),
    #[error("numerical degeneracy: {0}")]
    Degenerate(String),
    #[error("matrix is not in fiber {fiber} (residual {residual:.3e})")]
    Membership { fiber: usize, residual: f64 },
    #[error("operands belong to different bundles")]
    BundleMismatch,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid grading: {0}")]
    InvalidGrading(String),
    #[error("algebra is not the direct sum of its graded pieces ({found} of {expected} dimensions)")]
    NotGraded { found: usize, expected: usize },
    #[error("invalid dynamical system: {0}")]
    InvalidSystem(String),
    #[error("functional is not positive (minimum Gram eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("positivity is indeterminate at tolerance (minimum Gram eigenvalue {0:.3e})")]
    IndeterminatePositivity(f64),
    #[error("functional is not a state on the unit fiber: {0}")]
    NotAState(String),
    #[error("wrong bundle family: {0}")]
    WrongFamily(String),
    #[error("support violation: {0}")]
    SupportViolation(String),
    #[error("incompatible comultiplication: {0}")]
    IncompatibleDelta(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
