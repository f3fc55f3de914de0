use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid query ({s}, {t}): {reason}")]
    InvalidQuery {
        s: NodeId,
        t: NodeId,
        reason: &'static str,
    },

    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: NodeId, n: usize },

    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),

    #[error("edge ({u}, {v}) has zero capacity")]
    ZeroCapacity { u: NodeId, v: NodeId },

    #[error("graph is disconnected: nodes {a} and {b} lie in different components")]
    Disconnected { a: NodeId, b: NodeId },

    #[error("graph must have at least one node")]
    EmptyGraph,

    #[error("brute-force oracle limited to {limit} nodes, got {n}")]
    OracleScaleExceeded { n: usize, limit: usize },

    #[error("graph is already scaled (scale exponent {0})")]
    DoubleScale(u32),

    #[error("perturbation range does not fit the random source for n = {0}")]
    PerturbationRange(usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("fixed-source oracle for {expected} queried with source {got}")]
    WrongSource { expected: NodeId, got: NodeId },

    #[error("operation requires a cut-equivalent tree")]
    WrongTreeKind,

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("flow emulator does not connect all nodes")]
    EmulatorDisconnected,

    #[error("no balanced pivot found after {0} attempts")]
    PivotBudgetExhausted(usize),

    #[error("expansion ran out of candidate sinks while the center is still large")]
    EmptyCandidateSet,

    #[error("crossing cuts detected: {0}")]
    CrossingCuts(String),

    #[error("gave up after {0} perturbation restarts")]
    RestartBudgetExhausted(usize),

    #[error("distance oracle is not an ultrametric with n-1 distinct labels: {0}")]
    UltrametricViolation(String),

    #[error("representing tree node {0} is not binary")]
    NonBinaryTree(usize),

    #[error("representing tree labels must increase from root to leaves")]
    LabelOrientation,

    #[error("approximate structure invariant broken: {0}")]
    Internal(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("format version {found} is not supported (expected {expected})")]
    VersionMismatch { expected: u32, found: u32 },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
