use thiserror::Error;

/// Everything that can go wrong across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u32),
    #[error("field of order {p}^{m} exceeds the supported size of 2^16 elements")]
    FieldTooLarge { p: u32, m: u32 },
    #[error("the requested root already exists in the base field")]
    NotNeeded,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("shift parameter must be nonzero")]
    ZeroShift,
    #[error("operation requires a nonconstant polynomial")]
    ConstantInput,
    #[error("division by zero")]
    DivisionByZero,

    #[error("f has a repeated root")]
    NotSquarefree,
    #[error("f must be monic")]
    NotMonic,
    #[error("h'^2 f + f'^2 and h have a common root")]
    CommonRoots,
    #[error("model is singular above infinity")]
    SingularAtInfinity,
    #[error("bad degree: {0}")]
    BadDegree(String),
    #[error("genus {0} is too small (need g >= 2)")]
    GenusTooSmall(i64),
    #[error("declared genus {declared} does not match derived genus {derived}")]
    GenusMismatch { declared: usize, derived: usize },
    #[error("model kind does not match the characteristic")]
    CharMismatch,
    #[error("index {i} out of range 1..={g}")]
    IndexOutOfRange { i: usize, g: usize },
    #[error("branch locus does not split over the coefficient field")]
    NonSplitBranchLocus,
    #[error("reciprocal transform needs an even-degree f")]
    OddDegreeReciprocal,
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("series precision overflow at {attempted} terms")]
    PrecisionOverflow { attempted: usize },
    #[error("element is not regular on U0 ∩ U∞")]
    NotLaurent,
    #[error("triple is not in the span of the basis")]
    NotInSpan,
    #[error("cocycle identity fails")]
    IdentityFails,
    #[error("characteristic 2 is not supported for this operation")]
    CharTwoUnsupported,

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
