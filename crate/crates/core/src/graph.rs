//! Simple undirected graphs with stable edge indices and the surgeries used to
//! transfer facets between instances.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};

pub type NodeId = usize;
pub type EdgeId = usize;

/// An immutable simple graph. Edge `i` is `edges[i] = (u, v)` with `u < v`;
/// edge indices follow the order in which the edges were supplied.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(NodeId, NodeId)>,
}

/// Where an edge of the pre-surgery graph ended up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeImage {
    Edge(EdgeId),
    /// Replaced by a path; edges listed in order from the smaller old endpoint.
    Path(Vec<EdgeId>),
    /// The edge was contracted away.
    Contracted,
    /// The edge was removed (e.g. absorbed into a replaced subgraph).
    Removed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryMap {
    pub edge_map: Vec<EdgeImage>,
    /// Old node -> new node(s). Empty when the node was deleted.
    pub node_map: Vec<Vec<NodeId>>,
}

impl SurgeryMap {
    fn identity(g: &Graph) -> Self {
        SurgeryMap {
            edge_map: (0..g.edge_count()).map(EdgeImage::Edge).collect(),
            node_map: (0..g.node_count()).map(|v| vec![v]).collect(),
        }
    }

    /// Composes `self` (old -> mid) with `next` (mid -> new).
    pub fn then(&self, next: &SurgeryMap) -> SurgeryMap {
        let map_edge = |e: EdgeId| -> Vec<EdgeId> {
            match &next.edge_map[e] {
                EdgeImage::Edge(f) => vec![*f],
                EdgeImage::Path(p) => p.clone(),
                EdgeImage::Contracted | EdgeImage::Removed => vec![],
            }
        };
        let edge_map = self
            .edge_map
            .iter()
            .map(|img| match img {
                EdgeImage::Edge(e) => next.edge_map[*e].clone(),
                EdgeImage::Path(p) => {
                    let mapped: Vec<EdgeId> = p.iter().flat_map(|&e| map_edge(e)).collect();
                    if mapped.is_empty() {
                        EdgeImage::Contracted
                    } else {
                        EdgeImage::Path(mapped)
                    }
                }
                other => other.clone(),
            })
            .collect();
        let node_map = self
            .node_map
            .iter()
            .map(|vs| {
                let mut out: Vec<NodeId> =
                    vs.iter().flat_map(|&v| next.node_map[v].iter().copied()).collect();
                out.dedup();
                out
            })
            .collect();
        SurgeryMap { edge_map, node_map }
    }
}

/// Side of a split node an incident edge is moved to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// Stays at the original node index.
    First,
    /// Moves to the freshly created node.
    Second,
}

/// Result of a shortest-path query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortestPath {
    pub distance: Rational,
    pub edges: Vec<EdgeId>,
}

impl Graph {
    /// Builds a graph, canonicalizing each pair to `(min, max)` and keeping the
    /// supplied order as the edge index.
    pub fn new(node_count: usize, edge_list: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut seen = HashMap::with_capacity(edge_list.len());
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(a, b) in edge_list {
            for v in [a, b] {
                if v >= node_count {
                    return Err(Error::NodeOutOfRange { node: v, node_count });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if seen.insert(e, edges.len()).is_some() {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
            edges.push(e);
        }
        Ok(Graph { node_count, edges })
    }

    pub fn path(len: usize) -> Self {
        let edges: Vec<_> = (0..len).map(|i| (i, i + 1)).collect();
        Graph::new(len + 1, &edges).expect("path is simple")
    }

    /// Cycle `v_0 … v_{n-1}` with edge `i = v_i v_{i+1 mod n}`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 nodes");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).expect("cycle is simple")
    }

    /// Star with center `0` and leaves `1..=n`; edge `i` joins the center and leaf `i + 1`.
    pub fn star(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (0, i + 1)).collect();
        Graph::new(n + 1, &edges).expect("star is simple")
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Result<(NodeId, NodeId)> {
        self.edges.get(e).copied().ok_or(Error::InvalidEdge(e))
    }

    pub fn find_edge(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        let key = (u.min(v), u.max(v));
        self.edges.iter().position(|&e| e == key)
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v < self.node_count {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { node: v, node_count: self.node_count })
        }
    }

    /// Adjacency lists of `(neighbor, edge)` sorted by edge index.
    pub fn adjacency(&self) -> Vec<Vec<(NodeId, EdgeId)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        adj
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn incident_edges(&self, v: NodeId) -> Vec<EdgeId> {
        (0..self.edges.len()).filter(|&i| self.edges[i].0 == v || self.edges[i].1 == v).collect()
    }

    pub fn is_tree(&self) -> bool {
        self.node_count > 0
            && self.edges.len() + 1 == self.node_count
            && self.components().len() == 1
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        self.components_without(&|_| false)
    }

    /// Components of the graph after deleting the edges for which `removed` is true.
    pub fn components_without(&self, removed: &dyn Fn(EdgeId) -> bool) -> Vec<Vec<NodeId>> {
        let labels = self.component_labels(removed);
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut comps = vec![Vec::new(); count];
        for (v, &l) in labels.iter().enumerate() {
            comps[l].push(v);
        }
        comps
    }

    /// Component label per node; labels are numbered by smallest member.
    pub fn component_labels(&self, removed: &dyn Fn(EdgeId) -> bool) -> Vec<usize> {
        let mut uf = UnionFind::new(self.node_count);
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if !removed(i) {
                uf.union(u, v);
            }
        }
        let mut label = vec![usize::MAX; self.node_count];
        let mut root_label = HashMap::new();
        for v in 0..self.node_count {
            let r = uf.find(v);
            let next = root_label.len();
            label[v] = *root_label.entry(r).or_insert(next);
        }
        label
    }

    /// Contracts edge `e`: the larger endpoint is merged into the smaller one,
    /// the self-loop is dropped, and parallel edges are merged into the first
    /// surviving copy. Nodes above the removed one shift down by one.
    pub fn contract_edge(&self, e: EdgeId) -> Result<(Graph, SurgeryMap)> {
        let (keep, gone) = self.edge(e)?;
        let relabel = |v: NodeId| -> NodeId {
            let v = if v == gone { keep } else { v };
            if v > gone {
                v - 1
            } else {
                v
            }
        };
        let mut edges = Vec::new();
        let mut index: HashMap<(NodeId, NodeId), EdgeId> = HashMap::new();
        let mut edge_map = Vec::with_capacity(self.edges.len());
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if i == e {
                edge_map.push(EdgeImage::Contracted);
                continue;
            }
            let (a, b) = (relabel(u), relabel(v));
            let key = (a.min(b), a.max(b));
            let id = *index.entry(key).or_insert_with(|| {
                edges.push(key);
                edges.len() - 1
            });
            edge_map.push(EdgeImage::Edge(id));
        }
        let node_map = (0..self.node_count).map(|v| vec![relabel(v)]).collect();
        Ok((Graph { node_count: self.node_count - 1, edges }, SurgeryMap { edge_map, node_map }))
    }

    /// Subdivides `e = uv` with a fresh node `w`: `uw` keeps index `e`, `wv` is appended.
    pub fn subdivide_edge(&self, e: EdgeId) -> Result<(Graph, SurgeryMap)> {
        self.replace_edge_by_path(e, 2)
    }

    /// Replaces edge `e = uv` by a path of `length` edges through fresh nodes.
    /// The first path edge keeps index `e`; the rest are appended in path order.
    pub fn replace_edge_by_path(&self, e: EdgeId, length: usize) -> Result<(Graph, SurgeryMap)> {
        let (u, v) = self.edge(e)?;
        if length == 0 {
            return Err(Error::ZeroLength);
        }
        let mut map = SurgeryMap::identity(self);
        if length == 1 {
            return Ok((self.clone(), map));
        }
        let mut edges = self.edges.clone();
        let first_new = self.node_count;
        let inner: Vec<NodeId> = (0..length - 1).map(|i| first_new + i).collect();
        let mut chain = vec![u];
        chain.extend(&inner);
        chain.push(v);
        let mut path = vec![e];
        edges[e] = (u, inner[0]);
        for w in chain[1..].windows(2) {
            path.push(edges.len());
            edges.push((w[0].min(w[1]), w[0].max(w[1])));
        }
        map.edge_map[e] = EdgeImage::Path(path);
        Ok((Graph { node_count: self.node_count + length - 1, edges }, map))
    }

    /// Splits `v` into `v` (side one) and a fresh node (side two) joined by a new
    /// edge appended at the end. Every edge incident to `v` must be assigned.
    pub fn split_node(
        &self,
        v: NodeId,
        side_assignment: &BTreeMap<EdgeId, Side>,
    ) -> Result<(Graph, SurgeryMap)> {
        if v >= self.node_count {
            return Err(Error::InvalidNode(v));
        }
        let incident = self.incident_edges(v);
        for &e in side_assignment.keys() {
            if !incident.contains(&e) {
                return Err(Error::ForeignAssignment(e));
            }
        }
        let fresh = self.node_count;
        let mut edges = self.edges.clone();
        for &e in &incident {
            match side_assignment.get(&e) {
                None => return Err(Error::IncompleteAssignment(e)),
                Some(Side::First) => {}
                Some(Side::Second) => {
                    let (a, b) = edges[e];
                    let w = if a == v { b } else { a };
                    edges[e] = (w.min(fresh), w.max(fresh));
                }
            }
        }
        edges.push((v, fresh));
        let mut map = SurgeryMap::identity(self);
        map.node_map[v] = vec![v, fresh];
        Ok((Graph { node_count: fresh + 1, edges }, map))
    }

    /// Deletes the listed edges, keeping node indices and the relative order of
    /// the remaining edges.
    pub fn delete_edges(&self, removed: &[EdgeId]) -> (Graph, SurgeryMap) {
        let mut edges = Vec::new();
        let mut edge_map = Vec::new();
        for (i, &e) in self.edges.iter().enumerate() {
            if removed.contains(&i) {
                edge_map.push(EdgeImage::Removed);
            } else {
                edge_map.push(EdgeImage::Edge(edges.len()));
                edges.push(e);
            }
        }
        let node_map = (0..self.node_count).map(|v| vec![v]).collect();
        (Graph { node_count: self.node_count, edges }, SurgeryMap { edge_map, node_map })
    }

    /// Adds isolated nodes.
    pub fn with_extra_nodes(&self, extra: usize) -> Graph {
        Graph { node_count: self.node_count + extra, edges: self.edges.clone() }
    }

    /// Minimum-weight `s`-`t` path under nonnegative rational weights. Among all
    /// shortest paths the lexicographically smallest edge-index sequence is
    /// returned. `Ok(None)` when `t` is unreachable.
    pub fn shortest_path(
        &self,
        weights: &[Rational],
        s: NodeId,
        t: NodeId,
    ) -> Result<Option<ShortestPath>> {
        self.check_node(s)?;
        self.check_node(t)?;
        if weights.len() != self.edges.len() {
            return Err(Error::DimensionMismatch { expected: self.edges.len(), got: weights.len() });
        }
        let adj = self.adjacency();
        let dist = dijkstra(&adj, weights, s);
        let Some(total) = dist[t].clone() else {
            return Ok(None);
        };
        // Tight arcs: d(u) + w = d(v). Every s-t walk along tight arcs is shortest,
        // so the greedy choice of the smallest extendable edge yields the lexicographic minimum.
        let tight = |u: NodeId, v: NodeId, e: EdgeId| -> bool {
            match (&dist[u], &dist[v]) {
                (Some(du), Some(dv)) => &(du + &weights[e]) == dv,
                _ => false,
            }
        };
        let mut visited = vec![false; self.node_count];
        visited[s] = true;
        let mut path = Vec::new();
        let mut cur = s;
        while cur != t {
            let mut next = None;
            for &(w, e) in &adj[cur] {
                if visited[w] || !tight(cur, w, e) {
                    continue;
                }
                if reaches(&adj, &tight, &visited, w, t) {
                    next = Some((w, e));
                    break;
                }
            }
            let (w, e) = next.expect("tight path to target exists");
            path.push(e);
            visited[w] = true;
            cur = w;
        }
        Ok(Some(ShortestPath { distance: total, edges: path }))
    }

    /// Node sequence of a path given by its edges, starting at `start`.
    pub fn path_nodes(&self, start: NodeId, path: &[EdgeId]) -> Option<Vec<NodeId>> {
        let mut nodes = vec![start];
        let mut cur = start;
        for &e in path {
            let (a, b) = *self.edges.get(e)?;
            cur = if a == cur {
                b
            } else if b == cur {
                a
            } else {
                return None;
            };
            nodes.push(cur);
        }
        Some(nodes)
    }

    /// All simple `s`-`t` paths as edge lists (depth-first, ascending edge order).
    pub fn simple_paths(&self, s: NodeId, t: NodeId) -> Vec<Vec<EdgeId>> {
        self.simple_paths_within(s, t, &|_| true)
    }

    /// All simple `s`-`t` paths using only edges accepted by `allowed`.
    pub fn simple_paths_within(
        &self,
        s: NodeId,
        t: NodeId,
        allowed: &dyn Fn(EdgeId) -> bool,
    ) -> Vec<Vec<EdgeId>> {
        fn go(
            adj: &[Vec<(NodeId, EdgeId)>],
            allowed: &dyn Fn(EdgeId) -> bool,
            cur: NodeId,
            t: NodeId,
            visited: &mut Vec<bool>,
            stack: &mut Vec<EdgeId>,
            out: &mut Vec<Vec<EdgeId>>,
        ) {
            if cur == t {
                out.push(stack.clone());
                return;
            }
            for &(w, e) in &adj[cur] {
                if visited[w] || !allowed(e) {
                    continue;
                }
                visited[w] = true;
                stack.push(e);
                go(adj, allowed, w, t, visited, stack, out);
                stack.pop();
                visited[w] = false;
            }
        }
        let adj = self.adjacency();
        let mut visited = vec![false; self.node_count];
        visited[s] = true;
        let mut out = Vec::new();
        go(&adj, allowed, s, t, &mut visited, &mut Vec::new(), &mut out);
        out
    }

    /// Finds a node bijection `p` (self -> other) mapping edges onto edges,
    /// additionally respecting `node_ok(u, v)` and `edge_ok(e_self, e_other)`.
    pub fn find_isomorphism(
        &self,
        other: &Graph,
        node_ok: &dyn Fn(NodeId, NodeId) -> bool,
        edge_ok: &dyn Fn(EdgeId, EdgeId) -> bool,
    ) -> Option<Vec<NodeId>> {
        self.find_isomorphism_with(other, node_ok, edge_ok, &|_| true)
    }

    /// As [`Graph::find_isomorphism`], keeping only complete maps accepted by `accept`.
    pub fn find_isomorphism_with(
        &self,
        other: &Graph,
        node_ok: &dyn Fn(NodeId, NodeId) -> bool,
        edge_ok: &dyn Fn(EdgeId, EdgeId) -> bool,
        accept: &dyn Fn(&[NodeId]) -> bool,
    ) -> Option<Vec<NodeId>> {
        if self.node_count != other.node_count || self.edges.len() != other.edges.len() {
            return None;
        }
        let n = self.node_count;
        let adj_a = self.adjacency();
        let adj_b = other.adjacency();
        let edge_b: HashMap<(NodeId, NodeId), EdgeId> =
            other.edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        // Order: BFS from high-degree nodes so each placed node has placed neighbors.
        let mut order = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        while order.len() < n {
            let start = (0..n)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| (adj_a[v].len(), std::cmp::Reverse(v)))
                .unwrap();
            placed[start] = true;
            let mut q = VecDeque::from([start]);
            while let Some(u) = q.pop_front() {
                order.push(u);
                for &(w, _) in &adj_a[u] {
                    if !placed[w] {
                        placed[w] = true;
                        q.push_back(w);
                    }
                }
            }
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        #[allow(clippy::too_many_arguments)]
        fn assign(
            depth: usize,
            order: &[NodeId],
            adj_a: &[Vec<(NodeId, EdgeId)>],
            adj_b: &[Vec<(NodeId, EdgeId)>],
            edge_b: &HashMap<(NodeId, NodeId), EdgeId>,
            node_ok: &dyn Fn(NodeId, NodeId) -> bool,
            edge_ok: &dyn Fn(EdgeId, EdgeId) -> bool,
            accept: &dyn Fn(&[NodeId]) -> bool,
            map: &mut Vec<NodeId>,
            used: &mut Vec<bool>,
        ) -> bool {
            if depth == order.len() {
                return accept(map);
            }
            let u = order[depth];
            for cand in 0..adj_b.len() {
                if used[cand] || adj_b[cand].len() != adj_a[u].len() || !node_ok(u, cand) {
                    continue;
                }
                let consistent = adj_a[u].iter().all(|&(w, e)| {
                    let mw = map[w];
                    if mw == usize::MAX {
                        return true;
                    }
                    match edge_b.get(&(cand.min(mw), cand.max(mw))) {
                        Some(&f) => edge_ok(e, f),
                        None => false,
                    }
                });
                if !consistent {
                    continue;
                }
                map[u] = cand;
                used[cand] = true;
                if assign(depth + 1, order, adj_a, adj_b, edge_b, node_ok, edge_ok, accept, map, used) {
                    return true;
                }
                map[u] = usize::MAX;
                used[cand] = false;
            }
            false
        }
        if assign(0, &order, &adj_a, &adj_b, &edge_b, node_ok, edge_ok, accept, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        self.find_isomorphism(other, &|_, _| true, &|_, _| true).is_some()
    }
}

fn dijkstra(
    adj: &[Vec<(NodeId, EdgeId)>],
    weights: &[Rational],
    s: NodeId,
) -> Vec<Option<Rational>> {
    let n = adj.len();
    let mut dist: Vec<Option<Rational>> = vec![None; n];
    let mut done = vec![false; n];
    dist[s] = Some(Rational::zero());
    // Dense O(n^2) selection keeps exact comparisons simple.
    loop {
        let mut best: Option<NodeId> = None;
        for v in 0..n {
            if done[v] {
                continue;
            }
            if let Some(d) = &dist[v] {
                if best.is_none_or(|b| d < dist[b].as_ref().unwrap()) {
                    best = Some(v);
                }
            }
        }
        let Some(u) = best else { break };
        done[u] = true;
        let du = dist[u].clone().unwrap();
        for &(w, e) in &adj[u] {
            let cand = &du + &weights[e];
            if dist[w].as_ref().is_none_or(|dw| &cand < dw) {
                dist[w] = Some(cand);
            }
        }
    }
    dist
}

fn reaches(
    adj: &[Vec<(NodeId, EdgeId)>],
    tight: &dyn Fn(NodeId, NodeId, EdgeId) -> bool,
    blocked: &[bool],
    from: NodeId,
    to: NodeId,
) -> bool {
    let mut seen = blocked.to_vec();
    seen[from] = true;
    let mut stack = vec![from];
    while let Some(u) = stack.pop() {
        if u == to {
            return true;
        }
        for &(w, e) in &adj[u] {
            if !seen[w] && tight(u, w, e) {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    false
}

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}
