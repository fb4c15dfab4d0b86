use std::fmt;

use serde::Serialize;

/// Errors raised by the library operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("structural input error: {0}")]
    Structural(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("undefined input: {0}")]
    UndefinedInput(String),
    #[error("point index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(String),
    #[error("empty point set")]
    EmptySet,
    #[error("enumeration exceeded the cap of {cap} intermediate sets")]
    CapExceeded { cap: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("rejected input: {0}")]
    Rejected(String),
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
    #[error("{0}")]
    Parse(#[from] Diagnostic),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Diagnostic codes emitted by the file parsers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticCode {
    Header,
    Syntax,
    Dimension,
    Symmetry,
    Range,
    Diagonal,
    Labels,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::Header => "header",
            DiagnosticCode::Syntax => "syntax",
            DiagnosticCode::Dimension => "dimension",
            DiagnosticCode::Symmetry => "symmetry",
            DiagnosticCode::Range => "range",
            DiagnosticCode::Diagonal => "diagonal",
            DiagnosticCode::Labels => "labels",
        }
    }
}

/// A parse failure located at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: DiagnosticCode, line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            code,
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: [{}] {}",
            self.line,
            self.column,
            self.code.as_str(),
            self.message
        )
    }
}
