//! Separation: given a point `x >= 0`, find valid inequalities violated at `x`.

use std::collections::{BTreeSet, HashSet};

use num::{BigInt, Signed, Zero};
use serde::Serialize;

use crate::arith::Rational;
use crate::edgeset::EdgeSet;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, NodeId};
use crate::inequality::{gen_path_ineq, tree_rhs, Family, LinearInequality};
use crate::instance::MulticutInstance;

/// Default cap on the star size `k` and tree size `l`.
pub const DEFAULT_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cut {
    pub ineq: LinearInequality,
    /// `b - a·x > 0`.
    #[serde(serialize_with = "ser_rational")]
    pub violation: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::arith::fmt_rational(r))
}

/// Violated inequalities, most violated first, ties by support.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct SeparationResult {
    pub violated: Vec<Cut>,
}

impl SeparationResult {
    fn from_cuts(mut cuts: Vec<Cut>) -> Self {
        let mut seen = HashSet::new();
        cuts.retain(|c| seen.insert((c.ineq.coeffs.clone(), c.ineq.rhs)));
        cuts.sort_by(|a, b| {
            b.violation
                .cmp(&a.violation)
                .then_with(|| a.ineq.support().cmp(&b.ineq.support()))
                .then_with(|| a.ineq.canonical_cmp(&b.ineq))
        });
        SeparationResult { violated: cuts }
    }

    pub fn merge(results: impl IntoIterator<Item = SeparationResult>) -> Self {
        Self::from_cuts(results.into_iter().flat_map(|r| r.violated).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.violated.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violated.len()
    }
}

fn check_point(m: usize, x: &[Rational]) -> Result<()> {
    if x.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: x.len() });
    }
    if x.iter().any(|v| v.is_negative()) {
        return Err(Error::BadParams("point must be nonnegative".into()));
    }
    Ok(())
}

fn violation_cut(ineq: LinearInequality, x: &[Rational]) -> Option<Cut> {
    let v = ineq.violation(x).ok()?;
    v.is_positive().then_some(Cut { ineq, violation: v })
}

/// Shortest-path separation of path inequalities, exact.
pub fn separate_paths(inst: &MulticutInstance, x: &[Rational]) -> Result<SeparationResult> {
    check_point(inst.edge_count(), x)?;
    let one = Rational::from_integer(BigInt::from(1));
    let mut cuts = Vec::new();
    for &(s, t) in inst.pairs() {
        if let Some(sp) = inst.graph().shortest_path(x, s, t)? {
            if sp.distance < one {
                let ineq = gen_path_ineq(inst, &sp.edges, (s, t))?;
                cuts.push(Cut { ineq, violation: &one - &sp.distance });
            }
        }
    }
    Ok(SeparationResult::from_cuts(cuts))
}

/// Explicit-pool separation.
pub fn separate_pool(x: &[Rational], pool: &[LinearInequality]) -> Result<SeparationResult> {
    let mut cuts = Vec::new();
    for ineq in pool {
        if ineq.violation(x)?.is_positive() {
            cuts.extend(violation_cut(ineq.clone(), x));
        }
    }
    Ok(SeparationResult::from_cuts(cuts))
}

/// Rooted view of a tree: parent pointers and parent edges.
struct Rooted {
    parent: Vec<Option<(NodeId, EdgeId)>>,
    depth: Vec<usize>,
}

impl Rooted {
    fn new(g: &Graph, root: NodeId) -> Self {
        let adj = g.adjacency();
        let n = g.node_count();
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &(w, e) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((u, e));
                    depth[w] = depth[u] + 1;
                    stack.push(w);
                }
            }
        }
        Rooted { parent, depth }
    }

    /// Edges of the unique path between `a` and `b`.
    fn path(&self, mut a: NodeId, mut b: NodeId) -> Vec<EdgeId> {
        let mut left = Vec::new();
        let mut right = Vec::new();
        while a != b {
            if self.depth[a] >= self.depth[b] {
                let (p, e) = self.parent[a].expect("connected tree");
                left.push(e);
                a = p;
            } else {
                let (p, e) = self.parent[b].expect("connected tree");
                right.push(e);
                b = p;
            }
        }
        right.reverse();
        left.extend(right);
        left
    }
}

fn require_tree(inst: &MulticutInstance) -> Result<()> {
    if inst.graph().is_tree() {
        Ok(())
    } else {
        Err(Error::NotATree)
    }
}

fn nodes_of(g: &Graph, edges: &EdgeSet) -> BTreeSet<NodeId> {
    edges.iter().flat_map(|e| [g.edges()[e].0, g.edges()[e].1]).collect()
}

fn induced_pairs(inst: &MulticutInstance, nodes: &BTreeSet<NodeId>) -> BTreeSet<(NodeId, NodeId)> {
    inst.pairs().iter().copied().filter(|(s, t)| nodes.contains(s) && nodes.contains(t)).collect()
}

fn combinations(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(n, k, i + 1, cur, f);
            cur.pop();
        }
    }
    go(n, k, 0, &mut Vec::new(), f);
}

/// Pair structure among star leaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarKind {
    Complete,
    Circular,
}

/// Classifies the pairs induced on `leaves` as complete or a Hamiltonian cycle.
pub fn star_kind(leaves: &[NodeId], pairs: &BTreeSet<(NodeId, NodeId)>) -> Option<StarKind> {
    let k = leaves.len();
    let has = |a: NodeId, b: NodeId| pairs.contains(&(a.min(b), a.max(b)));
    if pairs.len() == k * (k - 1) / 2 && leaves.iter().all(|&a| leaves.iter().all(|&b| a == b || has(a, b))) {
        return Some(StarKind::Complete);
    }
    if k.is_multiple_of(2) || pairs.len() != k {
        return None;
    }
    // A connected 2-regular pair graph on the leaves is a Hamiltonian cycle.
    if leaves.iter().any(|&a| leaves.iter().filter(|&&b| a != b && has(a, b)).count() != 2) {
        return None;
    }
    let mut seen = vec![leaves[0]];
    let mut stack = vec![leaves[0]];
    while let Some(a) = stack.pop() {
        for &b in leaves {
            if has(a, b) && !seen.contains(&b) {
                seen.push(b);
                stack.push(b);
            }
        }
    }
    (seen.len() == k).then_some(StarKind::Circular)
}

/// Subdivided circular and complete `k`-star inequalities on a tree instance.
///
/// A candidate is a root `r` and `k` terminals in distinct branches at `r`.
/// It is kept only when the pairs induced on the nodes of the `r`-`v_i` paths
/// are exactly the complete graph or (odd `k`) a Hamiltonian cycle on the `v_i`.
pub fn separate_stars_on_tree(
    inst: &MulticutInstance,
    x: &[Rational],
    k: usize,
    cap: usize,
) -> Result<SeparationResult> {
    check_point(inst.edge_count(), x)?;
    require_tree(inst)?;
    if k > cap {
        return Err(Error::KTooLarge(k));
    }
    if k < 2 {
        return Err(Error::TooSmall(format!("star size must be at least 2, got {k}")));
    }
    Ok(SeparationResult::from_cuts(star_candidates(inst, k)?.into_iter().filter_map(|i| violation_cut(i, x)).collect()))
}

/// Every certified subdivided `k`-star inequality of a tree instance.
pub fn star_candidates(inst: &MulticutInstance, k: usize) -> Result<Vec<LinearInequality>> {
    require_tree(inst)?;
    let g = inst.graph();
    let m = g.edge_count();
    let terminals: Vec<NodeId> = (0..g.node_count()).filter(|&v| inst.is_terminal(v)).collect();
    let mut out = Vec::new();
    for r in 0..g.node_count() {
        let rooted = Rooted::new(g, r);
        let branch = |v: NodeId| -> Option<EdgeId> {
            let mut cur = v;
            let mut last = None;
            while let Some((p, e)) = rooted.parent[cur] {
                last = Some(e);
                cur = p;
            }
            last
        };
        let cands: Vec<(NodeId, EdgeId)> =
            terminals.iter().filter(|&&v| v != r).filter_map(|&v| branch(v).map(|b| (v, b))).collect();
        combinations(cands.len(), k, &mut |idx| {
            let chosen: Vec<(NodeId, EdgeId)> = idx.iter().map(|&i| cands[i]).collect();
            let branches: HashSet<EdgeId> = chosen.iter().map(|c| c.1).collect();
            if branches.len() != k {
                return;
            }
            let leaves: Vec<NodeId> = chosen.iter().map(|c| c.0).collect();
            let edges =
                EdgeSet::from_indices(m, leaves.iter().flat_map(|&v| rooted.path(r, v)));
            let nodes = nodes_of(g, &edges);
            let pairs = induced_pairs(inst, &nodes);
            let Some(kind) = star_kind(&leaves, &pairs) else { return };
            let (rhs, family) = match kind {
                StarKind::Complete => (k as i64 - 1, Family::SubdividedCompleteStar { k }),
                StarKind::Circular => (k.div_ceil(2) as i64, Family::SubdividedCircularStar { k }),
            };
            out.push(LinearInequality::new(edges.incidence_i64(), rhs, family));
        });
    }
    let mut seen = HashSet::new();
    out.retain(|i| seen.insert((i.coeffs.clone(), i.rhs)));
    Ok(out)
}

/// Subdivided `(l,k)`-tree inequalities on a tree instance, `2 <= k < l`.
pub fn separate_trees_on_tree(
    inst: &MulticutInstance,
    x: &[Rational],
    l: usize,
    cap: usize,
) -> Result<SeparationResult> {
    check_point(inst.edge_count(), x)?;
    require_tree(inst)?;
    if l > cap {
        return Err(Error::LTooLarge(l));
    }
    if l < 3 {
        return Err(Error::TooSmall(format!("tree size must be at least 3, got {l}")));
    }
    Ok(SeparationResult::from_cuts(tree_candidates(inst, l)?.into_iter().filter_map(|i| violation_cut(i, x)).collect()))
}

/// An embedded subdivision of `T_l`: root-to-child path edges and leaf path edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeEmbedding {
    pub root: NodeId,
    pub level_one: EdgeSet,
    pub level_two: EdgeSet,
}

impl TreeEmbedding {
    pub fn inequality(&self, l: usize, k: usize) -> LinearInequality {
        let m = self.level_one.universe();
        let mut coeffs = vec![0; m];
        for e in self.level_one.iter() {
            coeffs[e] = (l - k) as i64;
        }
        for e in self.level_two.iter() {
            coeffs[e] = 1;
        }
        LinearInequality::new(coeffs, tree_rhs(l, k), Family::SubdividedTree { l, k })
    }
}

/// Recognizes whether the union of the tree paths between the chosen pairs is a
/// subdivided `T_l` whose leaves are exactly the pair endpoints, one pair per
/// pair of children, with no further pair induced on its nodes.
pub fn embed_tree(inst: &MulticutInstance, chosen: &[(NodeId, NodeId)], l: usize) -> Option<TreeEmbedding> {
    let g = inst.graph();
    let m = g.edge_count();
    let rooted = Rooted::new(g, 0);
    let ends: BTreeSet<NodeId> = chosen.iter().flat_map(|&(s, t)| [s, t]).collect();
    if ends.len() != 2 * chosen.len() {
        return None;
    }
    let edges = EdgeSet::from_indices(m, chosen.iter().flat_map(|&(s, t)| rooted.path(s, t)));
    let nodes = nodes_of(g, &edges);
    let wanted: BTreeSet<(NodeId, NodeId)> = chosen.iter().copied().collect();
    if induced_pairs(inst, &nodes) != wanted {
        return None;
    }
    let mut deg = vec![0usize; g.node_count()];
    for e in edges.iter() {
        deg[g.edges()[e].0] += 1;
        deg[g.edges()[e].1] += 1;
    }
    let leaves: BTreeSet<NodeId> = nodes.iter().copied().filter(|&v| deg[v] == 1).collect();
    if leaves != ends {
        return None;
    }
    let branch: Vec<NodeId> = nodes.iter().copied().filter(|&v| deg[v] >= 3).collect();
    if branch.len() != l + 1 || branch.iter().any(|&v| deg[v] != l) {
        return None;
    }
    let adj = g.adjacency();
    for &r in &branch {
        // Walk each arm from r to the next branch node.
        let mut children = Vec::new();
        let mut level_one = EdgeSet::empty(m);
        for &(w, e) in &adj[r] {
            if !edges.contains(e) {
                continue;
            }
            let (mut prev, mut cur) = (r, w);
            level_one.insert(e);
            while deg[cur] == 2 {
                let (nxt, ne) = adj[cur]
                    .iter()
                    .copied()
                    .find(|&(y, f)| y != prev && edges.contains(f))
                    .expect("degree-two node continues");
                level_one.insert(ne);
                prev = cur;
                cur = nxt;
            }
            children.push(cur);
        }
        if children.iter().any(|&c| deg[c] != l) {
            continue;
        }
        // Each pair must join leaves hanging below two different children.
        let mut side = vec![usize::MAX; g.node_count()];
        let level_two = EdgeSet::from_indices(m, edges.iter().filter(|&e| !level_one.contains(e)));
        for (ci, &c) in children.iter().enumerate() {
            let mut stack = vec![c];
            side[c] = ci;
            while let Some(u) = stack.pop() {
                for &(w, e) in &adj[u] {
                    if level_two.contains(e) && side[w] == usize::MAX {
                        side[w] = ci;
                        stack.push(w);
                    }
                }
            }
        }
        let mut hit = BTreeSet::new();
        let ok = chosen.iter().all(|&(s, t)| {
            let (a, b) = (side[s], side[t]);
            a != usize::MAX && b != usize::MAX && a != b && hit.insert((a.min(b), a.max(b)))
        });
        if ok && hit.len() == l * (l - 1) / 2 {
            return Some(TreeEmbedding { root: r, level_one, level_two });
        }
    }
    None
}

/// Every certified subdivided `(l,k)`-tree inequality of a tree instance.
pub fn tree_candidates(inst: &MulticutInstance, l: usize) -> Result<Vec<LinearInequality>> {
    require_tree(inst)?;
    let need = l * (l - 1) / 2;
    let pairs = inst.pairs();
    let mut out = Vec::new();
    combinations(pairs.len(), need, &mut |idx| {
        let chosen: Vec<(NodeId, NodeId)> = idx.iter().map(|&i| pairs[i]).collect();
        if let Some(emb) = embed_tree(inst, &chosen, l) {
            for k in 2..l {
                out.push(emb.inequality(l, k));
            }
        }
    });
    let mut seen = HashSet::new();
    out.retain(|i| seen.insert((i.coeffs.clone(), i.rhs)));
    Ok(out)
}

/// Sum of `x` over a support, used by callers reporting slack.
pub fn support_mass(x: &[Rational], set: &EdgeSet) -> Rational {
    set.iter().fold(Rational::zero(), |acc, e| acc + &x[e])
}
