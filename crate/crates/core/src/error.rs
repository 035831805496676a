use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field modulus {0}; expected one of 2, 3, 5")]
    UnsupportedModulus(u32),

    #[error("entry {value} is not an element of GF({q})")]
    EntryOutOfRange { value: u32, q: u8 },

    #[error("matrices over different fields (GF({left}) vs GF({right}))")]
    ModulusMismatch { left: u8, right: u8 },

    #[error("dimension mismatch: {0}")]
    Shape(String),

    #[error("matrix is singular")]
    Singular,

    #[error("linear system has no solution")]
    NoSolution,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("rank function violates {axiom}: {detail}")]
    AxiomViolation { axiom: &'static str, detail: String },

    #[error("ground set of size {size} exceeds the supported maximum {max}")]
    GroundSetTooLarge { size: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vector length {got} does not match ground set size {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("search budget of {budget} candidates exceeded")]
    SearchBudgetExceeded { budget: u64 },

    #[error("receiver {receiver} cannot decode its demands")]
    Undecodable { receiver: usize },

    #[error("condition C1 violated: {0}")]
    C1Violation(String),

    #[error("condition C2 violated at receiver {receiver}")]
    C2Violation { receiver: usize },

    #[error("code is not a perfect solution: {0}")]
    NotPerfect(String),

    #[error("y-block of the code matrix is not invertible")]
    NonInvertibleYBlock,

    #[error("lower block of the code matrix is not invertible")]
    NonInvertibleLowerBlock,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("extracted matrices do not reproduce the rank function")]
    RepresentationMismatch,

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
