use std::fmt;

use thiserror::Error;

/// A single failed scenario invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: String,
    pub bound: String,
    pub value: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} violates {}", self.field, self.value, self.bound)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid scenario: {}", join(.0))]
    InvalidScenario(Vec<Violation>),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("unknown table id {0} (expected 2, 3, 4 or 5)")]
    UnknownTable(u32),

    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("fixture parse error: {0}")]
    Fixture(#[from] toml::de::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
