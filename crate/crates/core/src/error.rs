use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("frame mismatch: {0} vs {1}")]
    FrameMismatch(String, String),
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("expected {expected} vectors, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("odd-degree component {0} in exponential argument")]
    OddDegree(usize),
    #[error("coefficient depends on fiber coordinate {0}")]
    FiberDependence(String),
    #[error("unsupported degree {0}")]
    UnsupportedDegree(usize),
    #[error("degenerate spanning set")]
    Degenerate,
    #[error("wrong degree: expected {expected}, got {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("not in the requested component: residual {0}")]
    NotInComponent(String),
    #[error("unsupported signature {0:?}")]
    UnsupportedSignature(Vec<usize>),
    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },
    #[error("grid error: {0}")]
    Grid(String),
    #[error("mismatched cycles: {0}")]
    Mismatch(String),
    #[error("non-abelian input is not supported")]
    NonAbelian,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("non-semi-flat input: {0}")]
    NotSemiFlat(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = GeomError> = std::result::Result<T, E>;
