use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("arcs {0}->{1} and {1}->{0} form a 2-cycle")]
    TwoCycle(usize, usize),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid blow-up specification: {0}")]
    InvalidSpec(String),
    #[error("start graph violates the {0} constraint")]
    InvalidStart(String),
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("slack of {given} grid steps on constraint {constraint} is below the sound minimum of {required}")]
    InsufficientSlack {
        constraint: usize,
        given: String,
        required: String,
    },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
