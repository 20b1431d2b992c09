use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, NodeId};

/// A graph together with its set of terminal pairs.
///
/// Pairs are stored as `(s, t)` with `s < t`, sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MulticutInstance {
    graph: Graph,
    pairs: Vec<(NodeId, NodeId)>,
}

impl MulticutInstance {
    pub fn new(graph: Graph, pairs: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(s, t) in pairs {
            graph.check_node(s)?;
            graph.check_node(t)?;
            if s == t {
                return Err(Error::DegeneratePair(s));
            }
            set.insert((s.min(t), s.max(t)));
        }
        Ok(MulticutInstance { graph, pairs: set.into_iter().collect() })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn pairs(&self) -> &[(NodeId, NodeId)] {
        &self.pairs
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn has_pair(&self, u: NodeId, v: NodeId) -> bool {
        self.pairs.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn is_terminal(&self, v: NodeId) -> bool {
        self.pairs.iter().any(|&(s, t)| s == v || t == v)
    }

    /// Whether the endpoints of edge `e` form a terminal pair.
    pub fn edge_is_pair(&self, e: EdgeId) -> bool {
        let (u, v) = self.graph.edges()[e];
        self.has_pair(u, v)
    }

    /// Same pairs on a different graph over the same node set (or a superset).
    pub fn with_graph(&self, graph: Graph) -> Result<Self> {
        MulticutInstance::new(graph, &self.pairs)
    }

    /// Pairs with both endpoints inside `nodes`.
    pub fn pairs_within(&self, nodes: &[bool]) -> Vec<(NodeId, NodeId)> {
        self.pairs.iter().copied().filter(|&(s, t)| nodes[s] && nodes[t]).collect()
    }
}
