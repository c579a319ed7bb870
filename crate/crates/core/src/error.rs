use thiserror::Error;

/// Failures of the exact polynomial layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial is not divisible by the candidate factor")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("resultant requires positive degree in the eliminated variable")]
    DegenerateDegree,
    #[error("total degree {degree} exceeds the factorization bound {bound}")]
    DegreeTooLarge { degree: u32, bound: u32 },
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("factorization failed: {0}")]
    FactorizationFailed(String),
}

/// Failures of the floating-point solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("resultant leading coefficient vanishes")]
    ResultantDegenerate,
    #[error("iteration did not converge")]
    NoConvergence,
    #[error("no sample point found on the variety")]
    NoSamplePointFound,
    #[error("sampling failed: {0}")]
    SamplingFailed(String),
    #[error("empty sample set")]
    EmptySampleSet,
    #[error("ill-conditioned least-squares system")]
    IllConditioned,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Failures of the hull pipeline and the hypothesis checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HullError {
    #[error("invalid problem: {0}")]
    InvalidSpec(String),
    #[error("the delta numerator vanishes identically")]
    DeltaIdenticallyZero,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}
