use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("point {0} appears in more than one arc")]
    DuplicatePoint(usize),
    #[error("point {point} is outside 1..={points}")]
    OutOfRange { point: usize, points: usize },
    #[error("point {0} is paired with itself")]
    SelfPair(usize),
    #[error("point {0} is not covered by any arc")]
    Uncovered(usize),
    #[error("permutation has odd length {0}")]
    OddLength(usize),
    #[error("permutation is not an involution at point {0}")]
    NotInvolution(usize),
    #[error("cannot parse arc `{0}`, expected `i-j`")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("pattern is empty")]
    Empty,
    #[error("`{0}` is not a permutation of 1..=p")]
    NotPermutation(String),
    #[error("pattern size {size} exceeds the brute-force limit {limit}")]
    TooLarge { size: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("matching size {n} exceeds the brute-force guard {limit}; raise the limit explicitly")]
    SizeGuard { n: usize, limit: usize },
    #[error("pattern size {p} exceeds the guard {limit}")]
    PatternSizeGuard { p: usize, limit: usize },
    #[error("at least one sample is required")]
    NoSamples,
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("closed form needs n > k >= 0, got n={n}, k={k}")]
    Domain { n: usize, k: usize },
    #[error(
        "no exact table for pattern {0}; tables exist for 12, 21, 123, 321, 132, 213, 231, 312"
    )]
    NoTable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("unknown character `{ch}` at position {pos}")]
    UnknownChar { ch: char, pos: usize },
    #[error("closing `{ch}` at position {pos} has no matching opener")]
    UnmatchedCloser { ch: char, pos: usize },
    #[error("unclosed openers at positions {0:?}")]
    Unclosed(Vec<usize>),
    #[error("alphabet exhausted: pair ({0}, {1}) crosses every bracket type")]
    AlphabetExhausted(usize, usize),
    #[error("invalid alphabet: {0}")]
    Alphabet(String),
    #[error("pair ({0}, {1}) is not a valid pair within the structure length")]
    BadPair(usize, usize),
    #[error("position {0} is paired more than once")]
    NotMonogamous(usize),
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}
