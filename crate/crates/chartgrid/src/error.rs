use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid configuration value. The message names the offending field.
    #[error("configuration error: {0}")]
    Config(String),

    /// Data violates a structural invariant (non-monotonic x, bad axis range, ...).
    #[error("invalid data: {0}")]
    InvalidData(String),

    /// A file could not be parsed. Keeps file path and position context when known.
    #[error("parse error in {path:?}: {message}")]
    ParseFile { path: PathBuf, message: String },

    /// A model response could not be parsed into the extraction schema.
    #[error("extraction parse error: {0}")]
    ExtractionParse(String),

    /// Chart rasterization failed.
    #[error("render error: {0}")]
    Render(String),

    /// Scoring failed (length mismatch, empty input, ...).
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// A statistic is undefined for the given input size.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Report assembly failed; the message lists the gaps.
    #[error("report error: {0}")]
    Report(String),

    /// Transient backend failure (transport, HTTP status) after retries.
    #[error("backend error: {0}")]
    Backend(String),

    /// Fatal backend misconfiguration (missing credentials, bad endpoint).
    /// Aborts a run before any network call is made.
    #[error("backend configuration error: {0}")]
    BackendFatal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
