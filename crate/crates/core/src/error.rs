use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("index {index} out of range for width {width}")]
    IndexOutOfRange { index: usize, width: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("modal index {modal} out of range for mode {mode} (N = {dim})")]
    ModalOutOfRange { mode: usize, modal: usize, dim: usize },

    #[error("mode {mode} out of range ({modes} modes)")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("unknown encoding `{0}`")]
    UnknownEncoding(String),

    #[error("invalid encoding parameter: {0}")]
    InvalidEncoding(String),

    #[error("qubit width {width} exceeds cap {cap}")]
    WidthCap { width: usize, cap: usize },

    #[error("dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("operator is not hermitian")]
    NotHermitian,

    #[error("generator is not anti-hermitian")]
    NotAntiHermitian,

    #[error("force-field term couples {0} modes; only one- and two-mode terms are supported")]
    TooManyModes(usize),

    #[error("invalid noise parameters: {0}")]
    InvalidNoise(String),

    #[error("unknown backend `{0}`")]
    UnknownBackend(String),

    #[error("circuit has unbound parameters")]
    UnboundCircuit,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
