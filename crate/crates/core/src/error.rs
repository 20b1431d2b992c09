use thiserror::Error;

use crate::graph::{EdgeId, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate edge {{{0},{1}}}")]
    DuplicateEdge(NodeId, NodeId),
    #[error("node {node} out of range (graph has {node_count} nodes)")]
    NodeOutOfRange { node: NodeId, node_count: usize },
    #[error("edge index {0} does not exist")]
    InvalidEdge(EdgeId),
    #[error("node {0} does not exist")]
    InvalidNode(NodeId),
    #[error("side assignment does not cover incident edge {0}")]
    IncompleteAssignment(EdgeId),
    #[error("side assignment names edge {0}, which is not incident to the split node")]
    ForeignAssignment(EdgeId),
    #[error("path length must be at least 1")]
    ZeroLength,
    #[error("terminal pair {{{0},{0}}} has identical endpoints")]
    DegeneratePair(NodeId),
    #[error("source and sink coincide (node {0})")]
    SameTerminals(NodeId),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("edges do not form a simple path between the given endpoints")]
    NotAPath,
    #[error("pair {{{0},{1}}} is not a terminal pair of the instance")]
    PairMissing(NodeId, NodeId),
    #[error("n must be odd, got {0}")]
    EvenN(usize),
    #[error("parameter too small: {0}")]
    TooSmall(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("breakpoints must satisfy 0 < l_1 < ... < l_n = N")]
    BadBreakpoints,
    #[error("inequality is not valid for the dominant")]
    NotValid,
    #[error("inequality is not facet-defining")]
    NotAFacet,
    #[error("empty input")]
    Empty,
    #[error("generators do not span a full-dimensional polyhedron")]
    NotFullDimensional,
    #[error("graph is not a tree")]
    NotATree,
    #[error("star size {0} outside the supported range")]
    KTooLarge(usize),
    #[error("tree size {0} outside the supported range")]
    LTooLarge(usize),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("source graph is not a subgraph of the target: {0}")]
    NotASubgraph(String),
    #[error("terminal pairs are incompatible: {0}")]
    TerminalMismatch(String),
    #[error("node {0} is not incident to a support edge")]
    NodeNotInSupport(NodeId),
    #[error("subgraph is attached to the rest of the graph outside its two ports")]
    BadAttachment,
    #[error("terminal {0} lies strictly inside the replaced subgraph")]
    TerminalInside(NodeId),
    #[error("edge {{{0},{1}}} already exists outside the replaced subgraph")]
    EdgeExists(NodeId, NodeId),
    #[error("merged parallel edges carry distinct nonzero coefficients")]
    CoefficientConflict,
    #[error("lifting produced negative coefficient b - omega = {0}")]
    NegativeLiftCoefficient(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
