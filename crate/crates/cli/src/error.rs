use std::fmt;

use serde::Serialize;

/// Failure categories and their process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// A verification check failed.
    Verify,
    /// I/O or other runtime failure.
    Io,
    /// Invalid parameter or domain violation.
    Param,
    /// The moment-matching solver did not converge.
    FitNonConvergence,
}

impl Kind {
    pub fn exit_code(self) -> i32 {
        match self {
            Kind::Verify | Kind::Io => 1,
            Kind::Param => 2,
            Kind::FitNonConvergence => 3,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
}

impl CliError {
    pub fn new(kind: Kind, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
        }
    }

    pub fn param(message: impl Into<String>) -> Self {
        Self::new(Kind::Param, message)
    }

    /// Error from the moment-matching step: non-convergence keeps its own code.
    pub fn from_fit(e: effrate::Error) -> Self {
        match e {
            effrate::Error::NonConvergence { .. } => Self::new(Kind::FitNonConvergence, e.to_string()),
            other => other.into(),
        }
    }

    /// One JSON object on one line, for the diagnostic stream.
    pub fn to_line(&self) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            error: Kind,
            exit_code: i32,
            message: &'a str,
        }
        let flat = self.message.replace(['\n', '\r'], " ");
        serde_json::to_string(&Line {
            error: self.kind,
            exit_code: self.kind.exit_code(),
            message: &flat,
        })
        .expect("serializing plain strings cannot fail")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<effrate::Error> for CliError {
    fn from(e: effrate::Error) -> Self {
        Self::param(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::new(Kind::Io, e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::new(Kind::Io, e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::new(Kind::Io, e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
