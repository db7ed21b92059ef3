use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} degrees of freedom, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("width mismatch between bra and ket on degree of freedom {dof}")]
    WidthMismatch { dof: usize },

    #[error("invalid width {value} on degree of freedom {dof}: widths must be strictly positive")]
    InvalidWidth { dof: usize, value: f64 },

    #[error("TBF {index} lives on electronic state {state} but the basis has {n_states} states")]
    StateOutOfRange { index: usize, state: usize, n_states: usize },

    #[error("unsupported moment order ({m}, {n}); bra and ket orders must be 0 or 1")]
    UnsupportedOrder { m: u32, n: u32 },

    #[error("amplitude vector has {got} entries but the basis has {expected} TBFs")]
    AmplitudeLength { expected: usize, got: usize },

    #[error("ill-conditioned basis: TBFs {i} and {j} are numerically linearly dependent")]
    IllConditionedBasis { i: usize, j: usize },

    #[error("wavefunction has zero norm")]
    ZeroNorm,

    #[error("initial wavepacket has no projection onto the basis")]
    EmptyProjection,

    #[error("invalid parameter `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("propagation failed at t = {time}: {reason}")]
    Propagation { time: f64, reason: String },

    #[error("i/o error on {path}: {reason}")]
    Io { path: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code: 1 for configuration problems, 2 for everything at run time.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } => 1,
            _ => 2,
        }
    }

    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }
}
