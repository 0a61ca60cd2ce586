use thiserror::Error;

/// Errors raised by the arithmetic, local, Brauer and census layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero input is not allowed here")]
    ZeroInput,
    #[error("input {0} is out of the supported range")]
    OutOfRange(String),
    #[error("modulus {0} must be odd and positive")]
    InvalidModulus(i128),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is not congruent to 1 mod 8")]
    NotOneModEight(u64),
    #[error("family parameters violate an invariant: {0}")]
    InvalidFamily(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("point does not lie on the quadric")]
    PointNotOnQuadric,
    #[error("-abc*n is a rational square; the quotient Br(X)/Br(Q) is trivial")]
    NoNontrivialClass,
    #[error("both l1 and l2 vanish at the point")]
    ChartFailure,
    #[error("triple admits no decomposition; odd-valuation witness prime {0}")]
    NoDecomposition(u64),
    #[error("prime {0} has odd valuation in all three coefficients")]
    OddInAllThree(u64),
    #[error("residual imaginary part {0:e} exceeds tolerance")]
    NumericalInconsistency(f64),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
