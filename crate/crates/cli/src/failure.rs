use std::fmt;
use std::path::Path;

use rhrel::Error;
use serde_json::{json, Value};

/// Anything that stops a command, with the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    Library(Error),
    /// Bad flags, unknown command, malformed JSON.
    Usage { kind: &'static str, detail: String },
    Io(String),
}

impl Failure {
    pub fn usage(detail: impl Into<String>) -> Self {
        Failure::Usage {
            kind: "Usage",
            detail: detail.into(),
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Failure::Io(format!("{}: {e}", path.display()))
    }

    pub fn parse(path: &Path, e: serde_json::Error) -> Self {
        Failure::Usage {
            kind: "Parse",
            detail: format!("{}: {e}", path.display()),
        }
    }

    pub fn code(&self) -> i32 {
        match self {
            Failure::Library(e) if e.is_precondition() => 3,
            Failure::Library(_) | Failure::Usage { .. } => 2,
            Failure::Io(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Library(e) => e.kind(),
            Failure::Usage { kind, .. } => kind,
            Failure::Io(_) => "Io",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": {"kind": self.kind(), "detail": self.to_string()}})
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Library(e) => write!(f, "{e}"),
            Failure::Usage { detail, .. } => f.write_str(detail),
            Failure::Io(detail) => f.write_str(detail),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}
