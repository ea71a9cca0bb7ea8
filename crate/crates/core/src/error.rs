use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A requested size exceeds a configured cap (qubits, enumeration width).
    #[error("resource limit: {0}")]
    Resource(String),

    /// Caller-supplied input violates an operation precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Qubit index outside the state or circuit width.
    #[error("qubit index {index} out of range for width {width}")]
    IndexOutOfRange { index: usize, width: usize },

    #[error("qubit {0} used more than once in a gate")]
    DuplicateWire(usize),

    /// A post-condition that should hold by construction did not.
    #[error("internal invariant failed: {0}")]
    Invariant(String),
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resource(_) => 3,
            Error::Invariant(_) => 4,
            _ => 2,
        }
    }
}
