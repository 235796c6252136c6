use thiserror::Error;

/// Errors surfaced by loading, sampling, extraction and reporting.
///
/// Contract violations (out-of-range node ids, non-subset arguments) are
/// programming errors and panic instead; everything data- or config-driven
/// comes through here.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed edge-list line: wrong token count or a non-integer token.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The source yields a graph with no nodes and no links.
    #[error("empty graph: {0}")]
    EmptyGraph(String),

    /// The operation requires at least one link.
    #[error("graph has no links")]
    NoLinks,

    /// No degree-proportional draw exists.
    #[error("degree-weighted draw impossible: {0}")]
    ZeroDegree(String),

    /// A configuration value is outside its documented range.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A result file does not match the graph it is being analyzed against.
    #[error("provenance mismatch: {0}")]
    ProvenanceMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
