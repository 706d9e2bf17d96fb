use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet size must be between 1 and 65535, got {0}")]
    InvalidAlphabet(usize),
    #[error("entropy base must be finite and greater than 1, got {0}")]
    InvalidBase(f64),
    #[error("symbol {symbol} is outside an alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: usize, alphabet: usize },
    #[error("cannot parse sequence: {0}")]
    Parse(String),
    #[error("empirical entropy of an empty sequence is undefined")]
    EmptySequence,
    #[error("composition has no symbols")]
    EmptyComposition,
    #[error("composition has {got} counts, alphabet has {expected} symbols")]
    CompositionShape { expected: usize, got: usize },
    #[error("rank {rank} is out of range (population {population})")]
    RankOutOfRange { rank: String, population: String },
    #[error("{classes} type classes exceed the configured cap of {cap}")]
    TooManyClasses { classes: String, cap: u64 },
    #[error("set shaping needs an alphabet of at least 3 symbols, got {0}")]
    AlphabetTooSmall(usize),
    #[error("expected a sequence of length {expected}, got {got}")]
    BadLength { expected: u64, got: u64 },
    #[error("sequence is not in the shaped subset")]
    NotInShapedSubset,
    #[error("invalid shaping parameter: {0}")]
    BadParams(String),
    #[error("symbol {0} has no codeword")]
    UncodableSymbol(usize),
    #[error("code lengths are invalid: {0}")]
    InvalidCode(String),
    #[error("Huffman code length {0} exceeds the 31-bit limit of the scheme format")]
    CodeTooLong(usize),
    #[error("malformed payload: {0}")]
    MalformedPayload(String),
    #[error("malformed container: {0}")]
    MalformedContainer(String),
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u8),
    #[error("invalid distribution: {0}")]
    BadDistribution(String),
    #[error(
        "population of {population} messages exceeds the exhaustive cap of {cap}; use sampling"
    )]
    TooLarge { population: String, cap: u64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Stable machine-readable identifier, used by the CLI error line.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidAlphabet(_) => "InvalidAlphabet",
            Error::InvalidBase(_) => "InvalidBase",
            Error::SymbolOutOfRange { .. } => "SymbolOutOfRange",
            Error::Parse(_) => "Parse",
            Error::EmptySequence => "EmptySequence",
            Error::EmptyComposition => "EmptyComposition",
            Error::CompositionShape { .. } => "CompositionShape",
            Error::RankOutOfRange { .. } => "RankOutOfRange",
            Error::TooManyClasses { .. } => "TooManyClasses",
            Error::AlphabetTooSmall(_) => "AlphabetTooSmall",
            Error::BadLength { .. } => "BadLength",
            Error::NotInShapedSubset => "NotInShapedSubset",
            Error::BadParams(_) => "BadParams",
            Error::UncodableSymbol(_) => "UncodableSymbol",
            Error::InvalidCode(_) => "InvalidCode",
            Error::CodeTooLong(_) => "CodeTooLong",
            Error::MalformedPayload(_) => "MalformedPayload",
            Error::MalformedContainer(_) => "MalformedContainer",
            Error::UnsupportedVersion(_) => "UnsupportedVersion",
            Error::BadDistribution(_) => "BadDistribution",
            Error::TooLarge { .. } => "TooLarge",
            Error::InvalidConfig(_) => "InvalidConfig",
        }
    }
}
