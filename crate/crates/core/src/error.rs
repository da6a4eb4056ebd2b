use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("denominator vanishes on the imaginary axis at omega = {omega}")]
    PoleOnAxis { omega: f64 },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("transfer function is improper (numerator degree {num} > denominator degree {den})")]
    Improper { num: usize, den: usize },
    #[error("frequency grid is empty")]
    EmptyGrid,
    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),
    #[error("invalid slope band: {0}")]
    InvalidBand(String),
    #[error("multiplier L1 budget {budget} exceeds 1")]
    BudgetExceeded { budget: f64 },
    #[error("slope form needs a finite upper slope b; use the monotone form for b = inf")]
    InfiniteB,
    #[error("invalid kernel basis: {0}")]
    InvalidBasis(String),
    #[error("margin must be positive, got {0}")]
    NonpositiveMargin(f64),
    #[error("LP solver failure: {0}")]
    SolverFailure(String),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("signal traces differ in length or sampling ({0})")]
    LengthMismatch(String),
    #[error("nonlinearity is monotone nondecreasing; no decreasing pair to exploit")]
    NoDecreasingPair,
    #[error("invalid nonlinearity: {0}")]
    InvalidNonlinearity(String),
    #[error("plant is not in RH-infinity: {0}")]
    NotInRhInf(String),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
}
