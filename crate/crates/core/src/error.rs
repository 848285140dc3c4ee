use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("degree sequence must be non-empty and every degree must be at least 2")]
    InvalidDegrees,
    #[error("leaf vertex")]
    LeafVertex,
    #[error("level {level} exceeds tree depth {depth}")]
    LevelOutOfRange { level: usize, depth: usize },
    #[error("vertex {0:?} is not a vertex of the tree")]
    InvalidVertex(Vec<usize>),
    #[error("not a permutation: {0}")]
    InvalidPermutation(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("degree sequences differ")]
    TreeMismatch,
    #[error("vertex not fixed: {0:?}")]
    VertexNotFixed(Vec<usize>),
    #[error("permutation is not induced by a tree automorphism")]
    NotTreeAutomorphism,
    #[error("group too large: more than {budget} elements (use the Schreier-Sims order instead)")]
    BudgetExceeded { budget: usize },
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("cannot parse word: {0}")]
    WordParse(String),
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("factor at level {0} is intransitive")]
    IntransitiveFactor(usize),
    #[error("local action undefined at vertex {0} (boundary of the ball)")]
    LocalActionUndefined(usize),
    #[error("not an automorphism of the ball: {0}")]
    NotBallAutomorphism(String),
    #[error("commutator trick hypothesis violated at point {0}")]
    DisjointnessViolated(usize),
    #[error("family does not cover the ambient group ({missing} elements missing)")]
    NotACover { missing: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search exhausted without a full pair")]
    SearchExhausted,
}
