use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("parse error at column {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),

    #[error("element is not homogeneous: degrees {0} and {1}")]
    Inhomogeneous(u64, u64),

    #[error("constant term of the series is not a unit mod p")]
    NonUnitConstant,

    #[error("series truncated at e^{available} but e^{needed} is required")]
    TruncationTooSmall { needed: u64, available: u64 },

    #[error("{requested} generators requested, at most {max} supported")]
    GeneratorOverflow { requested: usize, max: usize },

    #[error("letter {letter} is not in the alphabet at p = {prime}")]
    WrongAlphabet { letter: String, prime: u32 },

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
