use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate key {0}: keys must be mutually distinct")]
    DuplicateKey(i64),

    #[error("swap indices ({i}, {j}) invalid for length {len}: need i < j < len")]
    SwapIndex { i: usize, j: usize, len: usize },

    #[error("part count must be at least 1")]
    ZeroParts,

    #[error("partition covers {expected} keys but the sequence has {actual}")]
    PartitionMismatch { expected: usize, actual: usize },

    #[error("range {start}..{end} is not within a sequence of length {len}")]
    InvalidRange { start: usize, end: usize, len: usize },

    #[error("need at least two positions to draw a pair, got {0}")]
    PairFromShortRange(usize),

    #[error("budget divisor m must be at least 1")]
    ZeroDivisor,

    #[error("n must be at least 1")]
    EmptyLength,

    #[error("n = {n} exceeds the distribution cap of {cap}")]
    AboveCap { n: usize, cap: usize },

    #[error("threshold z = {z} outside [0, {max}]")]
    ThresholdOutOfRange { z: i64, max: usize },

    #[error("probability must lie in [0, 1]")]
    InvalidProbability,

    #[error("need c <= l, got c = {c}, l = {l}")]
    TailOutOfRange { c: u64, l: u64 },

    #[error("target disorder {target} infeasible for length {n}")]
    InfeasibleDisorder { target: usize, n: usize },

    #[error("invalid policy {0:?}: expected blind, guarded or fixed:<s>")]
    InvalidPolicy(String),

    #[error("line {line}: cannot parse {text:?} as an integer key")]
    Parse { line: usize, text: String },

    #[error("exhaustive enumeration is limited to n <= {max}, got {n}")]
    ExhaustiveTooLarge { n: usize, max: usize },

    #[error("invalid benchmark configuration: {0}")]
    InvalidBenchConfig(&'static str),

    #[error("sort outputs disagree: {0}")]
    SortMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
