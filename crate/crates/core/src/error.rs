use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid series: {0}")]
    Semantic(String),
    #[error("terminating series: {0}")]
    Terminating(String),
    #[error("divergent series: {0}")]
    Divergent(String),
    #[error("unmatched parameter shape: {0}")]
    UnmatchedShape(String),
    #[error("pole off the admissible lattice: {0}")]
    PoleOffLattice(String),
    #[error("pole in summation range: {0}")]
    PoleInRange(String),
    #[error("base table miss: {0}")]
    TableMiss(String),
    #[error("precision unreachable: {0}")]
    Precision(String),
    #[error("no relation found: {0}")]
    NoRelation(String),
    #[error("unknown identity id: {0}")]
    UnknownId(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } | Error::Semantic(_) => "PARSE",
            Error::Terminating(_) => "TERMINATING",
            Error::Divergent(_) => "DIVERGENT",
            Error::UnmatchedShape(_) => "UNMATCHED_SHAPE",
            Error::PoleOffLattice(_) => "POLE_OFF_LATTICE",
            Error::PoleInRange(_) => "POLE_IN_RANGE",
            Error::TableMiss(_) => "TABLE_MISS",
            Error::Precision(_) => "PRECISION",
            Error::NoRelation(_) => "NO_RELATION",
            Error::UnknownId(_) => "UNKNOWN_ID",
            Error::Io(_) => "IO",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
