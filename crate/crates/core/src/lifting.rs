//! Constructive facet transfers between instances.
//!
//! Each operation returns the new instance and inequality. The output is
//! valid by construction; facetness holds under the hypotheses of the
//! corresponding transfer result and can be re-checked with `facet_lab`.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, Signed};
use serde::Serialize;

use crate::arith::{fmt_rational, to_i64, Rational};
use crate::budget::Budget;
use crate::edgeset::EdgeSet;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeImage, Graph, NodeId, Side, SurgeryMap};
use crate::hull::{dominant_hrep, HRepresentation};
use crate::inequality::{gen_edge_ineq, Family, LinearInequality};
use crate::instance::MulticutInstance;
use crate::multicut::{min_multicut_weighted, min_st_cut};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftResult {
    pub instance: MulticutInstance,
    pub inequality: LinearInequality,
    /// Minimum multicut or cut value used for the new coefficient, when applicable.
    pub omega: Option<Rational>,
    pub map: SurgeryMap,
    /// Hypotheses of the shared-facet variant, when the operation has one.
    pub shared_hypotheses: Option<SharedHypotheses>,
}

/// Conditions under which a zero-lift carries a shared facet to a shared facet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SharedHypotheses {
    /// The source graph is an induced subgraph of the target.
    pub induced: bool,
    /// No edge outside the subgraph joins a terminal pair.
    pub no_pair_on_new_edges: bool,
    /// No pair has one end inside the subgraph and the other adjacent to it.
    pub no_pair_touching_boundary: bool,
}

impl SharedHypotheses {
    pub fn hold(&self) -> bool {
        self.induced && self.no_pair_on_new_edges && self.no_pair_touching_boundary
    }
}

fn lifted(op: &str, from: &LinearInequality, coeffs: Vec<i64>, rhs: i64) -> LinearInequality {
    LinearInequality::new(coeffs, rhs, Family::Lifted { op: op.into(), from: Box::new(from.family.clone()) })
}

fn check_dim(inst: &MulticutInstance, ineq: &LinearInequality) -> Result<()> {
    if ineq.dim() != inst.edge_count() {
        return Err(Error::DimensionMismatch { expected: inst.edge_count(), got: ineq.dim() });
    }
    Ok(())
}

/// Extends by zeros into a target containing the graph (node `i` maps to node `i`).
pub fn lift_zero(inst: &MulticutInstance, ineq: &LinearInequality, target: &MulticutInstance) -> Result<LiftResult> {
    let ident: Vec<NodeId> = (0..inst.node_count()).collect();
    lift_zero_mapped(inst, ineq, target, &ident)
}

/// Zero-lift along an explicit injective node map into the target.
pub fn lift_zero_mapped(
    inst: &MulticutInstance,
    ineq: &LinearInequality,
    target: &MulticutInstance,
    node_map: &[NodeId],
) -> Result<LiftResult> {
    check_dim(inst, ineq)?;
    let tg = target.graph();
    if node_map.len() != inst.node_count() || node_map.iter().any(|&v| v >= tg.node_count()) {
        return Err(Error::NotASubgraph("node map does not fit the target".into()));
    }
    if node_map.iter().collect::<BTreeSet<_>>().len() != node_map.len() {
        return Err(Error::NotASubgraph("node map is not injective".into()));
    }
    let mut coeffs = vec![0; target.edge_count()];
    let mut edge_map = Vec::new();
    let mut image = BTreeSet::new();
    for (e, &(u, v)) in inst.graph().edges().iter().enumerate() {
        let f = tg.find_edge(node_map[u], node_map[v]).ok_or_else(|| {
            Error::NotASubgraph(format!("edge {e} = {{{u},{v}}} has no image"))
        })?;
        coeffs[f] = ineq.coeffs[e];
        edge_map.push(EdgeImage::Edge(f));
        image.insert(f);
    }
    let in_w: BTreeSet<NodeId> = node_map.iter().copied().collect();
    let mapped: BTreeSet<(NodeId, NodeId)> = inst
        .pairs()
        .iter()
        .map(|&(s, t)| (node_map[s].min(node_map[t]), node_map[s].max(node_map[t])))
        .collect();
    let induced_target: BTreeSet<(NodeId, NodeId)> =
        target.pairs().iter().copied().filter(|(s, t)| in_w.contains(s) && in_w.contains(t)).collect();
    if mapped != induced_target {
        return Err(Error::TerminalMismatch(format!(
            "source pairs {:?} differ from target pairs inside the image {:?}",
            mapped, induced_target
        )));
    }
    let induced = tg
        .edges()
        .iter()
        .enumerate()
        .all(|(f, (u, v))| image.contains(&f) || !(in_w.contains(u) && in_w.contains(v)));
    let no_pair_on_new_edges = (0..target.edge_count()).all(|f| image.contains(&f) || !target.edge_is_pair(f));
    let adjacent: BTreeSet<NodeId> = tg
        .edges()
        .iter()
        .flat_map(|&(u, v)| {
            let mut out = vec![];
            if in_w.contains(&u) && !in_w.contains(&v) {
                out.push(v);
            }
            if in_w.contains(&v) && !in_w.contains(&u) {
                out.push(u);
            }
            out
        })
        .collect();
    let no_pair_touching_boundary = target.pairs().iter().all(|&(s, t)| {
        !((in_w.contains(&s) && adjacent.contains(&t)) || (in_w.contains(&t) && adjacent.contains(&s)))
    });
    let node_map = (0..inst.node_count()).map(|v| vec![node_map[v]]).collect();
    Ok(LiftResult {
        instance: target.clone(),
        inequality: lifted("zero-lift", ineq, coeffs, ineq.rhs),
        omega: None,
        map: SurgeryMap { edge_map, node_map },
        shared_hypotheses: Some(SharedHypotheses { induced, no_pair_on_new_edges, no_pair_touching_boundary }),
    })
}

/// Restricts to the subgraph formed by the support edges, with the induced pairs.
/// Nodes are renumbered in increasing order; edges keep their relative order.
pub fn restrict_to_support(inst: &MulticutInstance, ineq: &LinearInequality) -> Result<LiftResult> {
    check_dim(inst, ineq)?;
    let support = ineq.support();
    if support.is_empty() {
        return Err(Error::NotAFacet);
    }
    let g = inst.graph();
    let nodes: BTreeSet<NodeId> = support.iter().flat_map(|e| [g.edges()[e].0, g.edges()[e].1]).collect();
    let index: BTreeMap<NodeId, NodeId> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edges: Vec<(NodeId, NodeId)> =
        support.iter().map(|e| (index[&g.edges()[e].0], index[&g.edges()[e].1])).collect();
    let pairs: Vec<(NodeId, NodeId)> = inst
        .pairs()
        .iter()
        .filter(|(s, t)| index.contains_key(s) && index.contains_key(t))
        .map(|(s, t)| (index[s], index[t]))
        .collect();
    let sub = MulticutInstance::new(Graph::new(nodes.len(), &edges)?, &pairs)?;
    let mut edge_map = vec![EdgeImage::Removed; inst.edge_count()];
    for (i, e) in support.iter().enumerate() {
        edge_map[e] = EdgeImage::Edge(i);
    }
    let node_map = (0..inst.node_count()).map(|v| index.get(&v).map(|&i| vec![i]).unwrap_or_default()).collect();
    let coeffs = support.iter().map(|e| ineq.coeffs[e]).collect();
    Ok(LiftResult {
        instance: sub,
        inequality: lifted("restrict", ineq, coeffs, ineq.rhs),
        omega: None,
        map: SurgeryMap { edge_map, node_map },
        shared_hypotheses: None,
    })
}

/// How a pair `{v, t}` is carried over when `v` splits into `v_1` (kept index) and `v_2` (new node).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairChoice {
    First,
    Second,
    #[default]
    Both,
    /// Drops the pair. The lift is then no longer guaranteed valid: a
    /// multicut of the remaining pairs may leave the support uncut.
    Neither,
}

/// Node splitting with new coefficient `b - omega` on the new edge `v_1 v_2`.
///
/// `side_assignment` sends each edge at `v` to `v_1` (`Side::First`, keeps
/// node index `v`) or `v_2` (`Side::Second`, the new highest node). The new
/// edge is appended last. `pair_choice` is keyed by the partner `t` of each
/// pair `{v, t}`; missing entries default to both replacements.
pub fn lift_node_split(
    inst: &MulticutInstance,
    ineq: &LinearInequality,
    v: NodeId,
    side_assignment: &BTreeMap<EdgeId, Side>,
    pair_choice: &BTreeMap<NodeId, PairChoice>,
    budget: &Budget,
) -> Result<LiftResult> {
    check_dim(inst, ineq)?;
    let g = inst.graph();
    g.check_node(v)?;
    if !g.incident_edges(v).iter().any(|&e| ineq.coeffs[e] != 0) {
        return Err(Error::NodeNotInSupport(v));
    }
    let (ng, map) = g.split_node(v, side_assignment)?;
    let v2 = g.node_count();
    let mut pairs = Vec::new();
    for &(s, t) in inst.pairs() {
        let other = if s == v {
            t
        } else if t == v {
            s
        } else {
            pairs.push((s, t));
            continue;
        };
        match pair_choice.get(&other).copied().unwrap_or_default() {
            PairChoice::First => pairs.push((v, other)),
            PairChoice::Second => pairs.push((v2, other)),
            PairChoice::Both => {
                pairs.push((v, other));
                pairs.push((v2, other));
            }
            PairChoice::Neither => {}
        }
    }
    let new_inst = MulticutInstance::new(ng.clone(), &pairs)?;
    // The new edge is last, so deleting it leaves old indices intact.
    let m = inst.edge_count();
    let (without, _) = ng.delete_edges(&[m]);
    let weights: Vec<Rational> = ineq.coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect();
    let (_, omega) = min_multicut_weighted(&new_inst.with_graph(without)?, &weights, budget)?;
    let new_coeff = Rational::from_integer(BigInt::from(ineq.rhs)) - &omega;
    if new_coeff.is_negative() {
        return Err(Error::NegativeLiftCoefficient(fmt_rational(&new_coeff)));
    }
    let c = to_i64(&new_coeff.to_integer()).ok_or(Error::Overflow("split coefficient"))?;
    let mut coeffs = ineq.coeffs.clone();
    coeffs.push(c);
    Ok(LiftResult {
        instance: new_inst,
        inequality: lifted("split", ineq, coeffs, ineq.rhs),
        omega: Some(omega),
        map,
        shared_hypotheses: None,
    })
}

/// Replaces edge `e` by a path of `length` edges carrying `a_e` each.
pub fn lift_subdivide(inst: &MulticutInstance, ineq: &LinearInequality, e: EdgeId, length: usize) -> Result<LiftResult> {
    check_dim(inst, ineq)?;
    let (ng, map) = inst.graph().replace_edge_by_path(e, length)?;
    let mut coeffs = ineq.coeffs.clone();
    coeffs.resize(ng.edge_count(), ineq.coeffs[e]);
    Ok(LiftResult {
        instance: inst.with_graph(ng)?,
        inequality: lifted("subdivide", ineq, coeffs, ineq.rhs),
        omega: None,
        map,
        shared_hypotheses: None,
    })
}

/// Replaces the connected subgraph `h_edges` (attached only at `s` and `t`) by
/// the edge `st` with coefficient equal to the minimum `s`-`t` cut of `H`
/// under `a`. The new edge takes the smallest index of `H`; internal nodes are
/// removed and the remaining nodes renumbered in order.
pub fn contract_subgraph_to_edge(
    inst: &MulticutInstance,
    ineq: &LinearInequality,
    h_edges: &[EdgeId],
    s: NodeId,
    t: NodeId,
) -> Result<LiftResult> {
    check_dim(inst, ineq)?;
    let g = inst.graph();
    g.check_node(s)?;
    g.check_node(t)?;
    if s == t {
        return Err(Error::SameTerminals(s));
    }
    let h = EdgeSet::from_indices(g.edge_count(), h_edges.iter().map(|&e| {
        g.edge(e).map(|_| e)
    }).collect::<Result<Vec<_>>>()?);
    if h.is_empty() {
        return Err(Error::Empty);
    }
    let h_nodes: BTreeSet<NodeId> = h.iter().flat_map(|e| [g.edges()[e].0, g.edges()[e].1]).collect();
    if !h_nodes.contains(&s) || !h_nodes.contains(&t) {
        return Err(Error::BadAttachment);
    }
    // H must be connected.
    let hg_edges: Vec<(NodeId, NodeId)> = h.iter().map(|e| g.edges()[e]).collect();
    let hg = Graph::new(g.node_count(), &hg_edges)?;
    let labels = hg.component_labels(&|_| false);
    if h_nodes.iter().any(|&v| labels[v] != labels[s]) {
        return Err(Error::BadAttachment);
    }
    let inner: BTreeSet<NodeId> = h_nodes.iter().copied().filter(|&v| v != s && v != t).collect();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if !h.contains(e) && (inner.contains(&u) || inner.contains(&v)) {
            return Err(Error::BadAttachment);
        }
    }
    if let Some(&x) = inner.iter().find(|&&x| inst.is_terminal(x)) {
        return Err(Error::TerminalInside(x));
    }
    if let Some(f) = g.find_edge(s, t) {
        if !h.contains(f) {
            return Err(Error::EdgeExists(s.min(t), s.max(t)));
        }
    }
    let hw: Vec<Rational> = h.iter().map(|e| Rational::from_integer(BigInt::from(ineq.coeffs[e]))).collect();
    let (_, omega) = min_st_cut(&hg, &hw, s, t)?;
    let omega_i = to_i64(&omega.to_integer()).ok_or(Error::Overflow("subgraph cut"))?;

    let relabel = |v: NodeId| v - inner.range(..v).count();
    let first = h.iter().next().expect("nonempty");
    let mut edges = Vec::new();
    let mut coeffs = Vec::new();
    let mut edge_map = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if e == first {
            edge_map.push(EdgeImage::Edge(edges.len()));
            edges.push((relabel(s), relabel(t)));
            coeffs.push(omega_i);
        } else if h.contains(e) {
            edge_map.push(EdgeImage::Removed);
        } else {
            edge_map.push(EdgeImage::Edge(edges.len()));
            edges.push((relabel(u), relabel(v)));
            coeffs.push(ineq.coeffs[e]);
        }
    }
    let ng = Graph::new(g.node_count() - inner.len(), &edges)?;
    let pairs: Vec<(NodeId, NodeId)> = inst.pairs().iter().map(|&(a, b)| (relabel(a), relabel(b))).collect();
    let node_map = (0..g.node_count())
        .map(|v| if inner.contains(&v) { vec![] } else { vec![relabel(v)] })
        .collect();
    Ok(LiftResult {
        instance: MulticutInstance::new(ng, &pairs)?,
        inequality: lifted("contract-subgraph", ineq, coeffs, ineq.rhs),
        omega: Some(omega),
        map: SurgeryMap { edge_map, node_map },
        shared_hypotheses: None,
    })
}

/// Contracts edge `e` (outside the support, endpoints not a pair) and carries the
/// remaining coefficients. Parallel edges produced by the contraction must agree.
pub fn contract_edge_lift(inst: &MulticutInstance, ineq: &LinearInequality, e: EdgeId) -> Result<LiftResult> {
    check_dim(inst, ineq)?;
    if inst.edge_is_pair(e) {
        return Err(Error::BadParams(format!("edge {e} joins a terminal pair")));
    }
    let (ng, map) = inst.graph().contract_edge(e)?;
    let mut coeffs: Vec<Option<i64>> = vec![None; ng.edge_count()];
    for (old, img) in map.edge_map.iter().enumerate() {
        if let EdgeImage::Edge(f) = img {
            let c = ineq.coeffs[old];
            match coeffs[*f] {
                None => coeffs[*f] = Some(c),
                Some(prev) if prev == c || c == 0 => {}
                Some(0) => coeffs[*f] = Some(c),
                Some(_) => return Err(Error::CoefficientConflict),
            }
        }
    }
    let pairs: Vec<(NodeId, NodeId)> = inst
        .pairs()
        .iter()
        .map(|&(s, t)| (map.node_map[s][0], map.node_map[t][0]))
        .collect();
    Ok(LiftResult {
        instance: MulticutInstance::new(ng, &pairs)?,
        inequality: lifted("contract", ineq, coeffs.into_iter().map(|c| c.unwrap_or(0)).collect(), ineq.rhs),
        omega: None,
        map,
        shared_hypotheses: None,
    })
}

/// Evidence for the edge-replacement conjecture on one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplacementEvidence {
    pub replaced_edge: EdgeId,
    pub length: usize,
    pub facets_checked: usize,
    /// Facets of the replaced instance that are neither edge inequalities nor
    /// path-replacement lifts of facets of the original instance.
    pub unexplained: Vec<LinearInequality>,
}

/// Replaces `f` by a path of `length` edges and compares the facets of the new
/// dominant with edge inequalities plus the path-replacement lifts of the old facets.
pub fn replacement_conjecture_check(
    inst: &MulticutInstance,
    f: EdgeId,
    length: usize,
    budget: &Budget,
) -> Result<ReplacementEvidence> {
    let old: HRepresentation = dominant_hrep(inst, budget)?;
    let (ng, _) = inst.graph().replace_edge_by_path(f, length)?;
    let new_inst = inst.with_graph(ng)?;
    let new = dominant_hrep(&new_inst, budget)?;
    let mut explained: BTreeSet<(Vec<i64>, i64)> = BTreeSet::new();
    for e in 0..new_inst.edge_count() {
        let i = gen_edge_ineq(&new_inst, e)?;
        explained.insert((i.coeffs, i.rhs));
    }
    for facet in &old.facets {
        let l = lift_subdivide(inst, facet, f, length)?.inequality.normalized();
        explained.insert((l.coeffs, l.rhs));
    }
    let unexplained = new
        .facets
        .iter()
        .filter(|x| !explained.contains(&(x.coeffs.clone(), x.rhs)))
        .cloned()
        .collect();
    Ok(ReplacementEvidence { replaced_edge: f, length, facets_checked: new.facets.len(), unexplained })
}
