use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Structural errors are caller mistakes (wrong shapes, malformed input);
/// they never signal a mathematical finding. Falsified invariants are reported
/// through the `holds` fields of the various reports instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("{op} requires a symmetric matrix; entry ({row}, {col}) differs from its transpose")]
    NotSymmetric {
        op: &'static str,
        row: usize,
        col: usize,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("exhaustive search needs {bits} free bits, limit is {limit}")]
    Capacity { bits: usize, limit: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid structure: {0}")]
    Structure(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
