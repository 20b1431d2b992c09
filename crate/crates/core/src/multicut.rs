//! Multicut semantics: feasibility, minimality, enumeration of the minimal
//! multicuts (the vertices of the dominant) and exact optimization oracles.

use std::collections::VecDeque;

use num::{Signed, Zero};

use crate::arith::Rational;
use crate::budget::Budget;
use crate::edgeset::EdgeSet;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, NodeId};
use crate::instance::MulticutInstance;

/// True iff every terminal pair lies in different components of `G - cut`.
pub fn is_multicut(inst: &MulticutInstance, cut: &EdgeSet) -> bool {
    let labels = inst.graph().component_labels(&|e| cut.contains(e));
    inst.pairs().iter().all(|&(s, t)| labels[s] != labels[t])
}

pub fn is_minimal_multicut(inst: &MulticutInstance, cut: &EdgeSet) -> bool {
    is_multicut(inst, cut) && cut.iter().all(|e| !is_multicut(inst, &cut.without(e)))
}

/// Drops removable edges in increasing weight order (ties by index) until the
/// multicut is inclusion-minimal. Never increases the weight.
pub fn minimalize(inst: &MulticutInstance, cut: &EdgeSet, w: &[Rational]) -> EdgeSet {
    let mut order: Vec<EdgeId> = cut.to_vec();
    order.sort_by(|&a, &b| w[a].cmp(&w[b]).then(a.cmp(&b)));
    let mut cur = cut.clone();
    for e in order {
        let smaller = cur.without(e);
        if is_multicut(inst, &smaller) {
            cur = smaller;
        }
    }
    cur
}

fn bell_upper(n: usize) -> u128 {
    // Bell triangle with saturation.
    let mut row = vec![1u128];
    for _ in 1..=n {
        let mut next = vec![*row.last().unwrap()];
        for x in &row {
            let v = next.last().unwrap().saturating_add(*x);
            next.push(v);
        }
        row = next;
    }
    row[0]
}

/// Upper bound on the number of connected partitions the enumerator may visit.
pub fn predicted_partitions(g: &Graph) -> u128 {
    let subsets = if g.edge_count() >= 127 { u128::MAX } else { 1u128 << g.edge_count() };
    subsets.min(bell_upper(g.node_count()))
}

/// All inclusion-minimal multicuts, sorted lexicographically.
///
/// Minimal multicuts correspond one-to-one to partitions of the nodes into
/// connected blocks that separate every pair and in which every edge between
/// two blocks joins blocks that contain the two ends of some pair.
pub fn enumerate_minimal_multicuts(
    inst: &MulticutInstance,
    budget: &Budget,
) -> Result<Vec<EdgeSet>> {
    let g = inst.graph();
    let predicted = predicted_partitions(g);
    if predicted > budget.max_partitions {
        return Err(Error::BudgetExceeded(format!(
            "predicted {predicted} partitions exceed limit {}",
            budget.max_partitions
        )));
    }
    let mut e = PartitionEnumerator::new(inst);
    e.next_block();
    let mut out = e.out;
    out.sort();
    Ok(out)
}

struct PartitionEnumerator<'a> {
    graph: &'a Graph,
    adj: Vec<Vec<(NodeId, EdgeId)>>,
    partners: Vec<Vec<NodeId>>,
    block: Vec<usize>,
    blocks: usize,
    out: Vec<EdgeSet>,
}

const UNASSIGNED: usize = usize::MAX;

impl<'a> PartitionEnumerator<'a> {
    fn new(inst: &'a MulticutInstance) -> Self {
        let g = inst.graph();
        let mut partners = vec![Vec::new(); g.node_count()];
        for &(s, t) in inst.pairs() {
            partners[s].push(t);
            partners[t].push(s);
        }
        PartitionEnumerator {
            graph: g,
            adj: g.adjacency(),
            partners,
            block: vec![UNASSIGNED; g.node_count()],
            blocks: 0,
            out: Vec::new(),
        }
    }

    fn next_block(&mut self) {
        let Some(root) = self.block.iter().position(|&b| b == UNASSIGNED) else {
            let cut = EdgeSet::from_indices(
                self.graph.edge_count(),
                self.graph
                    .edges()
                    .iter()
                    .enumerate()
                    .filter(|(_, &(u, v))| self.block[u] != self.block[v])
                    .map(|(i, _)| i),
            );
            self.out.push(cut);
            return;
        };
        let id = self.blocks;
        self.blocks += 1;
        self.block[root] = id;
        let mut members = vec![root];
        let mut excluded = vec![false; self.graph.node_count()];
        let frontier: Vec<NodeId> = self.adj[root].iter().map(|&(w, _)| w).collect();
        self.grow(id, &mut members, frontier, &mut excluded);
        self.block[root] = UNASSIGNED;
        self.blocks -= 1;
    }

    fn grow(
        &mut self,
        id: usize,
        members: &mut Vec<NodeId>,
        mut frontier: Vec<NodeId>,
        excluded: &mut Vec<bool>,
    ) {
        let cand = loop {
            match frontier.pop() {
                None => break None,
                Some(c) if self.block[c] == UNASSIGNED && !excluded[c] => break Some(c),
                Some(_) => continue,
            }
        };
        let Some(c) = cand else {
            if self.block_is_witnessed(id, members) {
                self.next_block();
            }
            return;
        };
        excluded[c] = true;
        self.grow(id, members, frontier.clone(), excluded);
        excluded[c] = false;

        if self.partners[c].iter().any(|&p| self.block[p] == id) {
            return;
        }
        self.block[c] = id;
        members.push(c);
        for &(w, _) in &self.adj[c] {
            if self.block[w] == UNASSIGNED && !excluded[w] {
                frontier.push(w);
            }
        }
        self.grow(id, members, frontier, excluded);
        members.pop();
        self.block[c] = UNASSIGNED;
    }

    /// Every edge from the finished block to an earlier block must join the two
    /// ends of some pair.
    fn block_is_witnessed(&self, id: usize, members: &[NodeId]) -> bool {
        let mut paired = vec![false; id];
        for &v in members {
            for &p in &self.partners[v] {
                let b = self.block[p];
                if b < id {
                    paired[b] = true;
                }
            }
        }
        members.iter().all(|&v| {
            self.adj[v].iter().all(|&(w, _)| {
                let b = self.block[w];
                b == id || b == UNASSIGNED || paired[b]
            })
        })
    }
}

/// Optimal minimal multicut by enumeration; ties go to the lexicographically smallest set.
pub fn min_multicut_bruteforce(
    inst: &MulticutInstance,
    w: &[Rational],
    budget: &Budget,
) -> Result<(EdgeSet, Rational)> {
    check_weights(inst.graph(), w)?;
    let cuts = enumerate_minimal_multicuts(inst, budget)?;
    let mut best: Option<(EdgeSet, Rational)> = None;
    for c in cuts {
        let val = c.weight(w);
        if best.as_ref().is_none_or(|(_, b)| &val < b) {
            best = Some((c, val));
        }
    }
    Ok(best.expect("the full edge set always contains a minimal multicut"))
}

pub(crate) fn check_weights(g: &Graph, w: &[Rational]) -> Result<()> {
    if w.len() != g.edge_count() {
        return Err(Error::DimensionMismatch { expected: g.edge_count(), got: w.len() });
    }
    if w.iter().any(|x| x.is_negative()) {
        return Err(Error::BadParams("weights must be nonnegative".into()));
    }
    Ok(())
}

/// Minimum `s`-`t` cut by shortest-augmenting-path max-flow. Returns the cut
/// induced by the nodes reachable from `s` in the final residual graph.
pub fn min_st_cut(
    g: &Graph,
    w: &[Rational],
    s: NodeId,
    t: NodeId,
) -> Result<(EdgeSet, Rational)> {
    g.check_node(s)?;
    g.check_node(t)?;
    if s == t {
        return Err(Error::SameTerminals(s));
    }
    check_weights(g, w)?;
    let adj = g.adjacency();
    let edges = g.edges();
    // flow[e] > 0 means flow from edges[e].0 to edges[e].1.
    let mut flow = vec![Rational::zero(); g.edge_count()];
    let residual = |flow: &[Rational], e: EdgeId, from: NodeId| -> Rational {
        if edges[e].0 == from {
            &w[e] - &flow[e]
        } else {
            &w[e] + &flow[e]
        }
    };
    loop {
        let mut pred: Vec<Option<(NodeId, EdgeId)>> = vec![None; g.node_count()];
        let mut seen = vec![false; g.node_count()];
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            if u == t {
                break;
            }
            for &(v, e) in &adj[u] {
                if !seen[v] && residual(&flow, e, u).is_positive() {
                    seen[v] = true;
                    pred[v] = Some((u, e));
                    q.push_back(v);
                }
            }
        }
        if !seen[t] {
            let cut = EdgeSet::from_indices(
                g.edge_count(),
                (0..g.edge_count()).filter(|&e| seen[edges[e].0] != seen[edges[e].1]),
            );
            let value = cut.weight(w);
            return Ok((cut, value));
        }
        let mut bottleneck: Option<Rational> = None;
        let mut v = t;
        while let Some((u, e)) = pred[v] {
            let r = residual(&flow, e, u);
            if bottleneck.as_ref().is_none_or(|b| &r < b) {
                bottleneck = Some(r);
            }
            v = u;
        }
        let b = bottleneck.expect("augmenting path has an edge");
        let mut v = t;
        while let Some((u, e)) = pred[v] {
            if edges[e].0 == u {
                flow[e] += &b;
            } else {
                flow[e] -= &b;
            }
            v = u;
        }
    }
}

/// Minimum-weight multicut: no pairs is trivial, one pair goes through max-flow,
/// everything else through enumeration.
pub fn min_multicut_weighted(
    inst: &MulticutInstance,
    w: &[Rational],
    budget: &Budget,
) -> Result<(EdgeSet, Rational)> {
    check_weights(inst.graph(), w)?;
    match inst.pairs() {
        [] => Ok((EdgeSet::empty(inst.edge_count()), Rational::zero())),
        [(s, t)] => {
            let (cut, value) = min_st_cut(inst.graph(), w, *s, *t)?;
            let cut = minimalize(inst, &cut, w);
            debug_assert_eq!(cut.weight(w), value);
            Ok((cut, value))
        }
        _ => min_multicut_bruteforce(inst, w, budget),
    }
}
