use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("alphabet symbols must be nonempty tokens")]
    EmptySymbol,
    #[error("duplicate alphabet symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("digit map is not a bijection onto 0..{0}")]
    InvalidDigits(usize),
    #[error("unknown symbol `{symbol}` in `{input}`")]
    UnknownSymbol { symbol: String, input: String },
    #[error("letter index {letter} out of range for alphabet of size {size}")]
    LetterOutOfRange { letter: u32, size: usize },
    #[error("periodic part of a sequence must be nonempty")]
    EmptyPeriod,
    #[error("invalid rational `{0}`")]
    InvalidRational(String),

    #[error("PCP instance needs at least one pair")]
    NoPairs,
    #[error("pair {0} has an empty word")]
    EmptyPairWord(usize),
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("index word must be nonempty")]
    EmptyIndexWord,
    #[error("reserved marker `{0}` already used by the instance alphabet")]
    SymbolClash(String),
    #[error("malformed witness: {0}")]
    MalformedWitness(String),

    #[error("automaton needs at least one tape")]
    NoTapes,
    #[error("automaton needs at least one state")]
    NoStates,
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("transition {transition}: word on tape {tape} is empty")]
    EmptyWordTransition { transition: usize, tape: usize },
    #[error("transition {transition}: unknown state `{state}`")]
    UnknownState { transition: usize, state: String },
    #[error("transition {transition}: {detail}")]
    UnknownSymbolInTransition { transition: usize, detail: String },
    #[error("transition {transition}: expected {expected} tape words, found {found}")]
    TapeCountMismatch {
        transition: usize,
        expected: usize,
        found: usize,
    },
    #[error("unknown state `{0}`")]
    NoSuchState(String),
    #[error("configuration has {found} tapes, automaton has {expected}")]
    ConfigTapeMismatch { expected: usize, found: usize },
    #[error("prefix tapes must have equal length")]
    RaggedPrefix,

    #[error("more than {0} belief states")]
    BeliefBudget(usize),

    #[error("instance word length {len} exceeds the limit {limit}")]
    InstanceTooLarge { len: usize, limit: usize },
    #[error("construction would need {count} transitions (limit {limit})")]
    TooManyTransitions { count: usize, limit: usize },
    #[error("{0}")]
    WrongVariant(&'static str),
    #[error("configuration is not accepted")]
    NotAccepted,
    #[error("more than {0} accepting runs")]
    TooManyRuns(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("edge {edge}: map is not certified contracting (bound {bound})")]
    NotContracting { edge: usize, bound: String },
    #[error("vertex `{0}` has no outgoing edge")]
    NoOutgoingEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("path is not connected at step {0}")]
    DisconnectedPath(usize),
    #[error("edge index {0} out of range")]
    NoSuchEdge(usize),
    #[error("cover would exceed {0} boxes")]
    TooManyBoxes(usize),
    #[error("resolution {0} exceeds the per-side limit")]
    ResolutionTooLarge(usize),
    #[error("empty viewport")]
    EmptyViewport,
    #[error("graph is not the GIFS compiled from the given automaton")]
    ProvenanceMismatch,
    #[error("singular linear system")]
    Singular,

    #[error("parse error: {0}")]
    Parse(String),
}
