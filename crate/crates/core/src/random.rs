//! Seeded random instances for tests and experiments.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{rat, Rational};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::instance::MulticutInstance;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected simple graph on `nodes` nodes with exactly `edges` edges: a random
/// spanning tree plus uniformly chosen extra edges.
pub fn random_connected_graph<R: Rng>(rng: &mut R, nodes: usize, edges: usize) -> Result<Graph> {
    if nodes == 0 {
        return Err(Error::TooSmall("graph needs a node".into()));
    }
    let max = nodes * (nodes - 1) / 2;
    if edges + 1 < nodes || edges > max {
        return Err(Error::BadParams(format!("{edges} edges on {nodes} nodes")));
    }
    let mut order: Vec<NodeId> = (0..nodes).collect();
    order.shuffle(rng);
    let mut list = Vec::with_capacity(edges);
    for i in 1..nodes {
        let j = rng.gen_range(0..i);
        let (u, v) = (order[i], order[j]);
        list.push((u.min(v), u.max(v)));
    }
    let mut rest: Vec<(NodeId, NodeId)> = (0..nodes)
        .flat_map(|u| (u + 1..nodes).map(move |v| (u, v)))
        .filter(|e| !list.contains(e))
        .collect();
    rest.shuffle(rng);
    list.extend(rest.into_iter().take(edges - list.len()));
    list.shuffle(rng);
    Graph::new(nodes, &list)
}

/// Random connected instance with at most `max_edges` edges and exactly
/// `pairs` distinct terminal pairs. The node count is chosen so that both fit.
pub fn random_instance<R: Rng>(rng: &mut R, max_edges: usize, pairs: usize) -> Result<MulticutInstance> {
    let mut min_nodes = 2;
    while min_nodes * (min_nodes - 1) / 2 < pairs {
        min_nodes += 1;
    }
    if min_nodes > max_edges + 1 {
        return Err(Error::BadParams(format!("{pairs} pairs need more than {max_edges} edges")));
    }
    let nodes = rng.gen_range(min_nodes..=max_edges + 1);
    let max = (nodes * (nodes - 1) / 2).min(max_edges);
    let edges = rng.gen_range(nodes - 1..=max);
    let graph = random_connected_graph(rng, nodes, edges)?;
    let mut all: Vec<(NodeId, NodeId)> = (0..nodes).flat_map(|u| (u + 1..nodes).map(move |v| (u, v))).collect();
    all.shuffle(rng);
    all.truncate(pairs);
    MulticutInstance::new(graph, &all)
}

/// Integer weights drawn uniformly from `lo..=hi`.
pub fn random_weights<R: Rng>(rng: &mut R, m: usize, lo: i64, hi: i64) -> Vec<Rational> {
    (0..m).map(|_| rat(rng.gen_range(lo..=hi))).collect()
}
