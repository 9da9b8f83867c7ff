//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported operation `{op}` on model {model}")]
    Unsupported { op: &'static str, model: String },
    #[error("not composable: endpoint distance {distance:.3e}")]
    Composition { distance: f64 },
    #[error("grid error: {0}")]
    Grid(String),
    #[error("basepoint mismatch: distance {distance:.3e}")]
    Fiber { distance: f64 },
    #[error("not a backtrack: mirror gap {gap:.3e} at offset {offset}")]
    NotABacktrack { offset: usize, gap: f64 },
    #[error("fixture error: {0}")]
    Fixture(String),
    #[error("subgroup is not central: elements {a} and {b} do not commute")]
    Centrality { a: usize, b: usize },
    #[error("action is not free: {0}")]
    Freeness(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
