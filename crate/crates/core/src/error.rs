use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("gate {kind} applied to coincident qubits {qubit}")]
    CoincidentQubits { kind: String, qubit: usize },

    #[error("gate {kind} expects {expected} qubit(s), got {found}")]
    Arity {
        kind: String,
        expected: usize,
        found: usize,
    },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("qubit {0} used twice in one moment")]
    OverlappingMoment(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("dense oracle limited to {max} qubits, got {n}")]
    TooManyQubits { n: usize, max: usize },

    #[error("invalid qubit permutation: {0}")]
    InvalidPermutation(String),

    #[error("forced measurement outcome is impossible on qubit {0}")]
    ImpossibleOutcome(usize),

    #[error("layout embedding is not planar: edges {0:?} and {1:?} cross")]
    NonPlanar((usize, usize), (usize, usize)),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("recovery touches non-data qubit {0}")]
    SupportViolation(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
