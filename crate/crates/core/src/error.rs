use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime below 2^31")]
    InvalidModulus(u64),
    #[error("xgcd of zero pair")]
    XgcdZeroPair,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular lattice basis")]
    SingularMatrix,
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("defining polynomial reducible")]
    Reducible,
    #[error("degree too small")]
    DegreeTooSmall,
    #[error("irreducibility could not be decided: {0}")]
    IrreducibilityUndecided(String),
    #[error("polynomial {0} is not irreducible")]
    NotIrreducible(String),
    #[error("ideals live on different order sides")]
    SideMismatch,
    #[error("objects belong to different function fields")]
    FieldMismatch,
    #[error("zero ideal or element has no inverse")]
    ZeroIdeal,
    #[error("no degree-one place found")]
    NoDegreeOnePlace,
    #[error("divisor has nonzero degree {0}")]
    NonzeroDegree(i64),
    #[error("unknown place key {0}")]
    UnknownPlace(String),
    #[error("retry budget exhausted (seed {seed}): {what}")]
    RetryBudget { seed: u64, what: String },
    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("HR-Min has no solution in [0, g]; this is a library bug")]
    HrMinNoSolution,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
