use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("erasing rule for letter '{0}'")]
    ErasingRule(char),

    #[error("letter '{0}' is not in the alphabet")]
    UnknownGlyph(char),

    #[error("letter id {0} is out of the alphabet")]
    LetterOutOfAlphabet(u8),

    #[error("start letter '{0}' is not prolongable (its image must begin with it and have length at least 2)")]
    NotProlongable(char),

    #[error("coding is not total: no code for letter '{0}'")]
    CodingNotTotal(char),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("unknown built-in system '{0}'")]
    UnknownSystem(String),

    #[error("resource limit exceeded: {what} would be {needed}, limit is {limit}")]
    ResourceLimit {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("{0} is out of range")]
    OutOfRange(String),

    #[error("word of odd length {0} cannot be paired")]
    OddLength(usize),

    #[error("expansion is not square ({width}x{height})")]
    NonSquare { width: usize, height: usize },

    #[error("integer overflow computing {0}")]
    Overflow(&'static str),
}
