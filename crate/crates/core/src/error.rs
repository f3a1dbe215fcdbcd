use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable contexts differ: [{left}] vs [{right}]")]
    ContextMismatch { left: String, right: String },
    #[error("variable index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid variable context: {0}")]
    InvalidContext(String),
    #[error("cannot evaluate a degree-0 multivector on a function")]
    DegreeZeroEvaluation,
    #[error("expected {expected}, got {got}")]
    GradeMismatch { expected: String, got: String },
    #[error("bivector is not Poisson: [[P,P]] has {defect_terms} nonzero coefficient(s)")]
    NotPoisson { defect_terms: usize },
    #[error("Poisson structures are not compatible: [[P,P']] != 0")]
    NotCompatible,
    #[error("vector-valued form is not integrable: [[N,N]] != 0")]
    NotIntegrable,
    #[error("connection is not flat")]
    NotFlat,
    #[error("operator has order {order}, which exceeds the requested symbol grade {grade}")]
    OrderTooHigh { order: usize, grade: usize },
    #[error("not a section: {0}")]
    NotASection(String),
    #[error("malformed linear system: {0}")]
    MalformedSystem(String),
    #[error("position {position} outside window {lo}..={hi}")]
    OutsideWindow { position: i64, lo: i64, hi: i64 },
    #[error("inconsistent grading: {0}")]
    InconsistentGrading(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}
