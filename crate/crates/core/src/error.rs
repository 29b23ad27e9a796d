use thiserror::Error;

use crate::exactla::BaseRing;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: BaseRing, right: BaseRing },

    #[error("`{op}` needs the integers, got {ring}")]
    RequiresIntegers { op: &'static str, ring: BaseRing },

    #[error("`{op}` needs a field, got {ring}")]
    RequiresField { op: &'static str, ring: BaseRing },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("unknown ring descriptor `{0}` (expected z, q or fp:<p>)")]
    BadRing(String),

    #[error("bad scalar `{text}` for ring {ring}")]
    BadScalar { text: String, ring: BaseRing },

    #[error("{context}: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    Dimension {
        context: String,
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("d_{} ∘ d_{} ≠ 0", .upper - 1, .upper)]
    DifferentialSquare { upper: i64 },

    #[error("not a chain map: square at degree {degree} does not commute")]
    NotChainMap { degree: i64 },

    #[error("{0}")]
    Diagram(String),

    #[error("invalid comodule: {0}")]
    InvalidComodule(String),

    #[error("invalid filtered object: {0}")]
    InvalidFiltered(String),

    #[error("invalid Rees module: {0}")]
    InvalidRees(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn dim(
        context: impl Into<String>,
        expected: (usize, usize),
        got: (usize, usize),
    ) -> Self {
        Error::Dimension {
            context: context.into(),
            expected_rows: expected.0,
            expected_cols: expected.1,
            rows: got.0,
            cols: got.1,
        }
    }

    /// Prefixes a field path onto the error, turning it into a schema error.
    pub fn at(self, path: &str) -> Self {
        match self {
            Error::Schema { path: inner, message } => Error::Schema {
                path: if inner.is_empty() { path.to_string() } else { format!("{path}.{inner}") },
                message,
            },
            other => Error::Schema { path: path.to_string(), message: other.to_string() },
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
