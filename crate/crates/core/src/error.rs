use thiserror::Error;

/// Errors raised by matrix construction, permanent evaluation and the
/// simulation routines built on top of them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("{len} entries supplied for a {rows}x{cols} matrix")]
    EntryCount { rows: usize, cols: usize, len: usize },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not unitary: max |U†U - I| = {residual:e} exceeds {tolerance:e}")]
    NotUnitary { residual: f64, tolerance: f64 },

    #[error("matrix has entries with non-zero imaginary part (max {max_imag:e})")]
    NotReal { max_imag: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("mode index {index} out of range for {modes} modes")]
    ModeOutOfRange { index: usize, modes: usize },

    #[error("beamsplitter must couple two distinct modes, got {0} twice")]
    SameMode(usize),

    #[error("transmissivity {0} outside [0, 1]")]
    Transmissivity(f64),

    #[error("photon number not conserved: input carries {input}, output carries {output}")]
    PhotonMismatch { input: usize, output: usize },

    #[error("size guard exceeded: {what} is {size}, limit {limit}")]
    Guard { what: &'static str, size: u128, limit: u128 },

    #[error("phase {phi} lies within {radius:e} of a removable singularity; use the product construction")]
    SingularPhase { phi: f64, radius: f64 },

    #[error("phase derivative vanishes: sensitivity is undefined")]
    UndefinedSensitivity,

    #[error("distributions differ in shape: {0}")]
    ShapeMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
