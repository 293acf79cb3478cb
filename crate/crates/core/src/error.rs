use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A path left the explored region of a lazily built graph.
    #[error("path escapes the explored region at vertex `{0}`; expand the ball")]
    FrontierEscape(String),
    #[error("the alphabet or graph is not symmetric")]
    NotSymmetric,
    #[error("the graph is not connected")]
    NotConnected,
    #[error("the graph is not deterministic at vertex `{0}`")]
    NotDeterministic(String),
    #[error("cone-type table is not certified: {0}")]
    NotCertified(String),
    #[error("cone truncation needs depth {needed}, only {available} explored")]
    InsufficientDepth { needed: usize, available: usize },
    #[error("letter `{0}` is mapped to the empty word")]
    EmptyImage(String),
    #[error("invalid coset table: {0}")]
    InvalidTable(String),
    #[error("invalid derivation: {0}")]
    InvalidDerivation(String),
    #[error("word is not in the language of the grammar")]
    NotInLanguage,
    #[error("the language is empty")]
    EmptyLanguage,
    #[error("automaton language differs from the word problem on `{0}`")]
    LanguageMismatch(String),
    #[error("coset map is not well defined at state `{0}`")]
    NotWellDefined(String),
    #[error("index is not known to be finite within radius {0}")]
    InfiniteIndex(usize),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("memory cap of {0} vertices exceeded")]
    ArenaExhausted(usize),
    #[error("{0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
