use thiserror::Error;

/// Errors produced by the planners and their supporting machinery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input violates a precondition (point outside the polygon, bad polygon, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Some target cannot be seen from any admissible viewpoint.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A target's visible part of the curve is disconnected.
    #[error("chain visibility violated for target {target}: {pieces} disjoint pieces")]
    ChainViolation { target: usize, pieces: usize },

    /// An exact solver or oracle was asked to handle an instance above its size cap.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// The time budget ran out before optimality was proven.
    #[error(
        "timeout after exploring the search tree: best bound {bound}, incumbent {incumbent:?}"
    )]
    Timeout { bound: f64, incumbent: Option<f64> },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A document field is missing, inconsistent or out of range.
    #[error("schema error in `{field}`: {msg}")]
    Schema { field: String, msg: String },

    /// A scaled integer cost does not fit the export range.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A TSP tour could not be mapped back onto robot routes.
    #[error("decode error: {0}")]
    Decode(String),
}

impl Error {
    pub(crate) fn schema(field: &str, msg: impl Into<String>) -> Self {
        Error::Schema {
            field: field.to_string(),
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
