//! Inequalities `a·x >= b` with integer coefficients, and generators for the
//! named facet families together with the instances they live on.

use std::fmt;
use std::hash::{Hash, Hasher};

use num::{BigInt, Integer, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{dot_i64, gcd_i64, primitive_integer, to_i64, Rational};
use crate::edgeset::EdgeSet;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, NodeId};
use crate::instance::MulticutInstance;

/// Which construction produced an inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Family {
    #[default]
    Custom,
    Edge { edge: EdgeId },
    Path { s: NodeId, t: NodeId },
    CircularStar { n: usize },
    CompleteStar { n: usize },
    Tree { n: usize, k: usize },
    OddCycle { n: usize },
    Wagner { n: usize, beta: u8 },
    GeneralizedWagner { n: usize, big_n: usize, breakpoints: Vec<usize>, beta: u8 },
    SubdividedCircularStar { k: usize },
    SubdividedCompleteStar { k: usize },
    SubdividedTree { l: usize, k: usize },
    Hull,
    Lifted { op: String, from: Box<Family> },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Custom => write!(f, "custom"),
            Family::Edge { edge } => write!(f, "edge e={edge}"),
            Family::Path { s, t } => write!(f, "path s={s} t={t}"),
            Family::CircularStar { n } => write!(f, "circular-star n={n}"),
            Family::CompleteStar { n } => write!(f, "complete-star n={n}"),
            Family::Tree { n, k } => write!(f, "tree n={n} k={k}"),
            Family::OddCycle { n } => write!(f, "odd-cycle n={n}"),
            Family::Wagner { n, beta } => write!(f, "wagner n={n} beta={beta}"),
            Family::GeneralizedWagner { n, big_n, breakpoints, beta } => {
                let bp: Vec<String> = breakpoints.iter().map(|b| b.to_string()).collect();
                write!(f, "generalized-wagner n={n} N={big_n} l={} beta={beta}", bp.join(","))
            }
            Family::SubdividedCircularStar { k } => write!(f, "subdivided-circular-star k={k}"),
            Family::SubdividedCompleteStar { k } => write!(f, "subdivided-complete-star k={k}"),
            Family::SubdividedTree { l, k } => write!(f, "subdivided-tree l={l} k={k}"),
            Family::Hull => write!(f, "hull"),
            Family::Lifted { op, from } => write!(f, "{op}({from})"),
        }
    }
}

/// `coeffs · x >= rhs`. Equality and hashing ignore the provenance tag.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearInequality {
    pub coeffs: Vec<i64>,
    pub rhs: i64,
    pub family: Family,
}

impl PartialEq for LinearInequality {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.rhs == other.rhs
    }
}

impl Eq for LinearInequality {}

impl Hash for LinearInequality {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
        self.rhs.hash(state);
    }
}

impl LinearInequality {
    pub fn new(coeffs: Vec<i64>, rhs: i64, family: Family) -> Self {
        LinearInequality { coeffs, rhs, family }
    }

    /// Builds from rational data, scaling to coprime integers.
    pub fn from_rational(coeffs: &[Rational], rhs: &Rational, family: Family) -> Result<Self> {
        let mut all: Vec<Rational> = coeffs.to_vec();
        all.push(rhs.clone());
        let ints = primitive_integer(&all);
        Self::from_bigints(&ints[..coeffs.len()], &ints[coeffs.len()], family)
    }

    pub fn from_bigints(coeffs: &[BigInt], rhs: &BigInt, family: Family) -> Result<Self> {
        let coeffs = coeffs
            .iter()
            .map(|c| to_i64(c).ok_or(Error::Overflow("inequality coefficient")))
            .collect::<Result<Vec<_>>>()?;
        let rhs = to_i64(rhs).ok_or(Error::Overflow("inequality rhs"))?;
        Ok(LinearInequality::new(coeffs, rhs, family).normalized())
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Divides coefficients and right-hand side by their common gcd.
    pub fn normalized(mut self) -> Self {
        let g = self.coeffs.iter().fold(self.rhs.abs(), |g, &c| gcd_i64(g, c));
        if g > 1 {
            for c in &mut self.coeffs {
                *c /= g;
            }
            self.rhs /= g;
        }
        self
    }

    pub fn evaluate(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.coeffs.len() {
            return Err(Error::DimensionMismatch { expected: self.coeffs.len(), got: x.len() });
        }
        Ok(dot_i64(&self.coeffs, x))
    }

    pub fn evaluate_set(&self, set: &EdgeSet) -> i64 {
        set.iter().map(|e| self.coeffs[e]).sum()
    }

    /// `rhs - a·x`; positive means violated.
    pub fn violation(&self, x: &[Rational]) -> Result<Rational> {
        Ok(Rational::from_integer(BigInt::from(self.rhs)) - self.evaluate(x)?)
    }

    pub fn support(&self) -> EdgeSet {
        EdgeSet::from_indices(
            self.coeffs.len(),
            self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i),
        )
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    /// Whether this is `x_e >= 0` for some edge.
    pub fn is_edge_bound(&self) -> Option<EdgeId> {
        if self.rhs != 0 {
            return None;
        }
        let nz: Vec<usize> = (0..self.coeffs.len()).filter(|&i| self.coeffs[i] != 0).collect();
        match nz.as_slice() {
            [e] if self.coeffs[*e] > 0 => Some(*e),
            _ => None,
        }
    }

    /// Canonical order: support size, then coefficients, then rhs.
    pub fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        let sa = self.coeffs.iter().filter(|&&c| c != 0).count();
        let sb = other.coeffs.iter().filter(|&&c| c != 0).count();
        sa.cmp(&sb)
            .then_with(|| other.coeffs.cmp(&self.coeffs))
            .then_with(|| self.rhs.cmp(&other.rhs))
    }

    pub fn with_family(mut self, family: Family) -> Self {
        self.family = family;
        self
    }
}

impl fmt::Display for LinearInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "ineq {} <= {}", self.rhs, terms.join(" "))
    }
}

/// `x_e >= 1` when the endpoints of `e` form a pair, `x_e >= 0` otherwise.
pub fn gen_edge_ineq(inst: &MulticutInstance, e: EdgeId) -> Result<LinearInequality> {
    inst.graph().edge(e)?;
    let mut coeffs = vec![0; inst.edge_count()];
    coeffs[e] = 1;
    let rhs = i64::from(inst.edge_is_pair(e));
    Ok(LinearInequality::new(coeffs, rhs, Family::Edge { edge: e }))
}

/// Checks that `edges` (any order) form a simple path with endpoints `s` and `t`.
pub fn is_st_path(g: &Graph, edges: &[EdgeId], s: NodeId, t: NodeId) -> bool {
    if s == t || edges.is_empty() {
        return false;
    }
    let mut deg = std::collections::HashMap::new();
    let mut uniq = std::collections::HashSet::new();
    for &e in edges {
        let Ok((u, v)) = g.edge(e) else { return false };
        if !uniq.insert(e) {
            return false;
        }
        *deg.entry(u).or_insert(0) += 1;
        *deg.entry(v).or_insert(0) += 1;
    }
    if deg.len() != edges.len() + 1 || deg.get(&s) != Some(&1) || deg.get(&t) != Some(&1) {
        return false;
    }
    if deg.iter().any(|(&v, &d)| v != s && v != t && d != 2) {
        return false;
    }
    // Degree pattern plus connectivity from s.
    let mut remaining: Vec<EdgeId> = edges.to_vec();
    let mut cur = s;
    while !remaining.is_empty() {
        let Some(pos) = remaining.iter().position(|&e| {
            let (u, v) = g.edges()[e];
            u == cur || v == cur
        }) else {
            return false;
        };
        let (u, v) = g.edges()[remaining.swap_remove(pos)];
        cur = if u == cur { v } else { u };
    }
    cur == t
}

/// `sum_{e in P} x_e >= 1` for an `s`-`t` path `P` with `{s,t}` a terminal pair.
pub fn gen_path_ineq(
    inst: &MulticutInstance,
    path: &[EdgeId],
    pair: (NodeId, NodeId),
) -> Result<LinearInequality> {
    let (s, t) = pair;
    if !inst.has_pair(s, t) {
        return Err(Error::PairMissing(s, t));
    }
    if !is_st_path(inst.graph(), path, s, t) {
        return Err(Error::NotAPath);
    }
    let mut coeffs = vec![0; inst.edge_count()];
    for &e in path {
        coeffs[e] = 1;
    }
    Ok(LinearInequality::new(coeffs, 1, Family::Path { s: s.min(t), t: s.max(t) }))
}

fn star_leaf(i: usize) -> NodeId {
    i + 1
}

/// `K_{1,n}` with consecutive leaf pairs; `sum x >= ceil(n/2)`.
pub fn gen_circular_star(n: usize) -> Result<(MulticutInstance, LinearInequality)> {
    if n < 3 {
        return Err(Error::TooSmall(format!("circular star needs n >= 3, got {n}")));
    }
    if n.is_multiple_of(2) {
        return Err(Error::EvenN(n));
    }
    let inst = circular_star_instance(n)?;
    let rhs = n.div_ceil(2) as i64;
    Ok((inst, LinearInequality::new(vec![1; n], rhs, Family::CircularStar { n })))
}

/// `K_{1,n}` whose pairs join consecutive leaves (cyclically). Any `n >= 3`.
pub fn circular_star_instance(n: usize) -> Result<MulticutInstance> {
    let pairs: Vec<_> = (0..n).map(|i| (star_leaf(i), star_leaf((i + 1) % n))).collect();
    MulticutInstance::new(Graph::star(n), &pairs)
}

/// `K_{1,n}` with all leaf pairs; `sum x >= n - 1`.
pub fn gen_complete_star(n: usize) -> Result<(MulticutInstance, LinearInequality)> {
    if n < 2 {
        return Err(Error::TooSmall(format!("complete star needs n >= 2, got {n}")));
    }
    let pairs: Vec<_> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (star_leaf(i), star_leaf(j))))
        .collect();
    let inst = MulticutInstance::new(Graph::star(n), &pairs)?;
    Ok((inst, LinearInequality::new(vec![1; n], n as i64 - 1, Family::CompleteStar { n })))
}

/// Layout of the depth-two tree `T_n`.
///
/// Nodes: root `0`, children `v_i = i` for `i in 1..=n`, then for each
/// `i < j` (lexicographic) the leaves `s_ij`, `t_ij`. Edges: `e_i = r v_i`
/// first, then `e_ij = v_i s_ij` followed by `f_ij = v_j t_ij`.
#[derive(Debug, Clone)]
pub struct TreeLayout {
    pub n: usize,
    pub instance: MulticutInstance,
    /// Edge indices of the level-one edges `e_1..e_n`.
    pub level_one: Vec<EdgeId>,
    /// `(i, j, e_ij, f_ij)` for `1 <= i < j <= n`.
    pub level_two: Vec<(usize, usize, EdgeId, EdgeId)>,
}

pub fn tree_layout(n: usize) -> Result<TreeLayout> {
    if n < 2 {
        return Err(Error::BadParams(format!("T_n needs n >= 2, got {n}")));
    }
    let mut edges: Vec<(NodeId, NodeId)> = (1..=n).map(|i| (0, i)).collect();
    let mut pairs = Vec::new();
    let mut level_two = Vec::new();
    let mut next = n + 1;
    for i in 1..=n {
        for j in (i + 1)..=n {
            let (s, t) = (next, next + 1);
            next += 2;
            edges.push((i, s));
            edges.push((j, t));
            level_two.push((i, j, edges.len() - 2, edges.len() - 1));
            pairs.push((s, t));
        }
    }
    let graph = Graph::new(next, &edges)?;
    Ok(TreeLayout {
        n,
        instance: MulticutInstance::new(graph, &pairs)?,
        level_one: (0..n).collect(),
        level_two,
    })
}

pub fn binom2(x: i64) -> i64 {
    x * (x - 1) / 2
}

/// Right-hand side `k(n-k) + C(n-k, 2)` of the `(n,k)`-tree inequality.
pub fn tree_rhs(n: usize, k: usize) -> i64 {
    let (n, k) = (n as i64, k as i64);
    k * (n - k) + binom2(n - k)
}

/// `(n-k)·sum_{L1} x + sum_{L2} x >= k(n-k) + C(n-k,2)` on `T_n`.
pub fn gen_tree_ineq(n: usize, k: usize) -> Result<(MulticutInstance, LinearInequality)> {
    if !(n > k && k >= 2) {
        return Err(Error::BadParams(format!("need n > k >= 2, got n={n}, k={k}")));
    }
    let layout = tree_layout(n)?;
    let mut coeffs = vec![1; layout.instance.edge_count()];
    for &e in &layout.level_one {
        coeffs[e] = (n - k) as i64;
    }
    let ineq = LinearInequality::new(coeffs, tree_rhs(n, k), Family::Tree { n, k });
    Ok((layout.instance, ineq))
}

/// `C_n` (odd `n >= 5`) with every non-adjacent node pair as a terminal pair.
pub fn gen_odd_cycle(n: usize) -> Result<(MulticutInstance, LinearInequality)> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::BadParams(format!("odd cycle needs odd n >= 5, got {n}")));
    }
    let inst = cycle_nonadjacent_instance(n)?;
    Ok((inst, LinearInequality::new(vec![1; n], n.div_ceil(2) as i64, Family::OddCycle { n })))
}

/// `C_n` with all non-adjacent node pairs as terminal pairs. Any `n >= 4`.
pub fn cycle_nonadjacent_instance(n: usize) -> Result<MulticutInstance> {
    let g = Graph::cycle(n);
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if g.find_edge(u, v).is_none() {
                pairs.push((u, v));
            }
        }
    }
    MulticutInstance::new(g, &pairs)
}

/// `C_{2n}` with antipodal pairs `{v_i, v_{i+n}}`.
pub fn antipodal_cycle_instance(n: usize) -> Result<MulticutInstance> {
    if n < 2 {
        return Err(Error::BadParams(format!("antipodal cycle needs n >= 2, got {n}")));
    }
    let pairs: Vec<_> = (0..n).map(|i| (i, i + n)).collect();
    MulticutInstance::new(Graph::cycle(2 * n), &pairs)
}

fn check_beta(beta: u8) -> Result<()> {
    if beta == 1 || beta == 2 {
        Ok(())
    } else {
        Err(Error::BadParams(format!("beta must be 1 or 2, got {beta}")))
    }
}

/// Wagner inequality on `C_{2n}` with antipodal pairs: even-indexed edges carry
/// `beta`, odd-indexed edges `3 - beta`, right-hand side 3.
pub fn gen_wagner(n: usize, beta: u8) -> Result<(MulticutInstance, LinearInequality)> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::BadParams(format!("Wagner needs odd n >= 5, got {n}")));
    }
    check_beta(beta)?;
    let inst = antipodal_cycle_instance(n)?;
    let (b, b2) = (i64::from(beta), 3 - i64::from(beta));
    let coeffs = (0..2 * n).map(|e| if e % 2 == 0 { b } else { b2 }).collect();
    Ok((inst, LinearInequality::new(coeffs, 3, Family::Wagner { n, beta })))
}

/// Generalized Wagner inequality on `C_{2N}`. Block `j` (1-based) covers
/// `i in [l_{j-1}, l_j)`; odd blocks put `beta` on edge `i` and `3 - beta` on
/// edge `i + N`, even blocks the reverse.
pub fn gen_generalized_wagner(
    n: usize,
    big_n: usize,
    breakpoints: &[usize],
    beta: u8,
) -> Result<(MulticutInstance, LinearInequality)> {
    if n < 5 || n.is_multiple_of(2) || big_n < n {
        return Err(Error::BadParams(format!(
            "generalized Wagner needs odd n >= 5 and N >= n, got n={n}, N={big_n}"
        )));
    }
    check_beta(beta)?;
    if breakpoints.len() != n
        || breakpoints[0] == 0
        || breakpoints.windows(2).any(|w| w[0] >= w[1])
        || breakpoints[n - 1] != big_n
    {
        return Err(Error::BadBreakpoints);
    }
    let inst = antipodal_cycle_instance(big_n)?;
    let (b, b2) = (i64::from(beta), 3 - i64::from(beta));
    let mut coeffs = vec![0; 2 * big_n];
    let mut start = 0;
    for (j, &end) in breakpoints.iter().enumerate() {
        let (first, second) = if j % 2 == 0 { (b, b2) } else { (b2, b) };
        for i in start..end {
            coeffs[i] = first;
            coeffs[i + big_n] = second;
        }
        start = end;
    }
    let family =
        Family::GeneralizedWagner { n, big_n, breakpoints: breakpoints.to_vec(), beta };
    Ok((inst, LinearInequality::new(coeffs, 3, family)))
}

/// All edge inequalities plus one path inequality per simple path of every pair.
pub fn edge_path_system(inst: &MulticutInstance) -> Vec<LinearInequality> {
    let mut out: Vec<LinearInequality> =
        (0..inst.edge_count()).map(|e| gen_edge_ineq(inst, e).expect("valid edge")).collect();
    for &(s, t) in inst.pairs() {
        for p in inst.graph().simple_paths(s, t) {
            out.push(gen_path_ineq(inst, &p, (s, t)).expect("enumerated path"));
        }
    }
    dedup_inequalities(out)
}

/// Removes duplicates (by coefficients and rhs), keeping the first occurrence.
pub fn dedup_inequalities(list: Vec<LinearInequality>) -> Vec<LinearInequality> {
    let mut seen = std::collections::HashSet::new();
    list.into_iter().filter(|i| seen.insert((i.coeffs.clone(), i.rhs))).collect()
}

/// Integer value of `a·x` at a 0/1 vector given as an `EdgeSet`, as a `Rational`.
pub fn value_at(ineq: &LinearInequality, set: &EdgeSet) -> Rational {
    Rational::from_integer(BigInt::from(ineq.evaluate_set(set)))
}

/// Least common multiple helper used when scaling rational rows.
pub fn lcm_denominators(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::from(1), |l, x| l.lcm(x.denom()))
}

pub fn is_zero_vector(v: &[i64]) -> bool {
    v.iter().all(|c| c.is_zero())
}
