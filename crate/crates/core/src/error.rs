use thiserror::Error;

/// Errors raised by the workbench. Axiom and proposition failures are
/// reported as values, never through this type.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WmError {
    #[error("element index {index} out of range for order {order}")]
    Bounds { index: usize, order: usize },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("{what}: order {order} exceeds cap {cap} (raise the cap to proceed)")]
    Capacity {
        what: &'static str,
        order: usize,
        cap: usize,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl WmError {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        WmError::Usage(msg.into())
    }
}

impl From<std::io::Error> for WmError {
    fn from(e: std::io::Error) -> Self {
        WmError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, WmError>;
