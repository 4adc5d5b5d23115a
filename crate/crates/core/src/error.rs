use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("arity clash for `{name}`: declared {declared}, used {used}")]
    ArityClash {
        name: String,
        declared: usize,
        used: usize,
    },
    #[error("duplicate table `{0}`")]
    DuplicateTable(String),
    #[error("duplicate predicate mapping for `{0}`")]
    DuplicatePredicate(String),
    #[error("unknown table `{0}`")]
    UnknownTable(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("unknown column {column} for table `{table}`")]
    UnknownColumn { table: String, column: usize },
    #[error("duplicate document id `{0}`")]
    DuplicateDocument(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
