use std::path::PathBuf;

/// Errors raised by the engine, its parsers and its decision procedures.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("atom name {name:?} at byte {offset} contains the reserved label separator '@'")]
    ReservedSeparator { name: String, offset: usize },

    #[error("invalid atom name {0:?}")]
    InvalidAtom(String),

    #[error("atom {0} is not assigned by the valuation")]
    UnassignedAtom(String),

    #[error("formula is already labeled (atom {0})")]
    AlreadyLabeled(String),

    #[error("nested box at byte {offset}: only shallow modal formulas are supported")]
    NestedBox { offset: usize },

    #[error("DIMACS line {line}: {message}")]
    Dimacs { line: usize, message: String },

    #[error("clause literal {literal} out of range 1..={num_vars}")]
    LiteralOutOfRange { literal: i64, num_vars: u32 },

    #[error("empty clause")]
    EmptyClause,

    #[error("unknown logic code {0:?} (expected out1..out4 or out1c..out4c)")]
    UnknownLogic(String),

    #[error("theory line {line}: {message}")]
    Theory { line: usize, message: String },

    #[error("{procedure} supports at most {cap} premise pairs, got {actual}")]
    CapExceeded {
        procedure: &'static str,
        cap: usize,
        actual: usize,
    },

    #[error("no world satisfies {0}; the refutation is not genuine")]
    InconsistentWorld(String),

    #[error("malformed derivation: {0}")]
    MalformedDerivation(String),

    #[error("external solver {path}: {message}")]
    ExternalSolver { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Outcome of a failed certificate check: either the certificate is wrong,
/// or the classical backend could not answer.
#[derive(Debug, thiserror::Error)]
pub enum CheckError<F> {
    #[error("{0}")]
    Rejected(F),

    #[error(transparent)]
    Engine(#[from] Error),
}

impl<F> CheckError<F> {
    pub fn rejected(&self) -> Option<&F> {
        match self {
            CheckError::Rejected(f) => Some(f),
            CheckError::Engine(_) => None,
        }
    }
}
