use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Mismatch,
    Unbound,
    Universe,
    Boundary,
    IncompatibleSystem,
    NotAnEquivalence,
    ModeViolation,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Syntax => "syntax",
            ErrorKind::Mismatch => "mismatch",
            ErrorKind::Unbound => "unbound",
            ErrorKind::Universe => "universe",
            ErrorKind::Boundary => "boundary",
            ErrorKind::IncompatibleSystem => "incompatible-system",
            ErrorKind::NotAnEquivalence => "not-an-equivalence",
            ErrorKind::ModeViolation => "mode-violation",
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, Error)]
#[error("[{kind}] {message}")]
pub struct CheckError {
    pub kind: ErrorKind,
    pub message: String,
    pub expected: Option<String>,
    pub actual: Option<String>,
}

impl CheckError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> CheckError {
        CheckError { kind, message: message.into(), expected: None, actual: None }
    }

    pub fn with_forms(mut self, expected: String, actual: String) -> CheckError {
        self.message = format!("{}\n  expected: {expected}\n  actual:   {actual}", self.message);
        self.expected = Some(expected);
        self.actual = Some(actual);
        self
    }
}

pub type TcResult<T> = Result<T, CheckError>;
