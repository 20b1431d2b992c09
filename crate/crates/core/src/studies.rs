//! Reproducible constructions built from the other modules: facet families
//! derived by node splitting, candidate systems for complete descriptions, and
//! classification of the facets of antipodal cycles.

use std::collections::{BTreeMap, BTreeSet};

use crate::arith::Rational;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeId, Side};
use crate::hull::dominant_hrep;
use crate::inequality::*;
use crate::instance::MulticutInstance;
use crate::lifting::{lift_node_split, lift_zero_mapped, LiftResult, PairChoice};

/// Node map `a -> b` carrying graph, pairs and coefficients of one inequality onto another.
pub fn inequality_isomorphism(
    a: (&MulticutInstance, &LinearInequality),
    b: (&MulticutInstance, &LinearInequality),
) -> Option<Vec<NodeId>> {
    let ((ia, qa), (ib, qb)) = (a, b);
    if qa.rhs != qb.rhs || ia.pairs().len() != ib.pairs().len() {
        return None;
    }
    let pb: BTreeSet<(NodeId, NodeId)> = ib.pairs().iter().copied().collect();
    ia.graph().find_isomorphism_with(
        ib.graph(),
        &|u, v| ia.is_terminal(u) == ib.is_terminal(v),
        &|e, f| qa.coeffs[e] == qb.coeffs[f],
        &|map| {
            ia.pairs().iter().all(|&(s, t)| pb.contains(&(map[s].min(map[t]), map[s].max(map[t]))))
        },
    )
}

fn split_at(
    inst: &MulticutInstance,
    ineq: &LinearInequality,
    v: NodeId,
    to_second: &dyn Fn(NodeId) -> bool,
    pair_choice: &BTreeMap<NodeId, PairChoice>,
    budget: &Budget,
) -> Result<LiftResult> {
    let g = inst.graph();
    let mut sides = BTreeMap::new();
    for e in g.incident_edges(v) {
        let (x, y) = g.edges()[e];
        let w = if x == v { y } else { x };
        sides.insert(e, if to_second(w) { Side::Second } else { Side::First });
    }
    lift_node_split(inst, ineq, v, &sides, pair_choice, budget)
}

/// The six node splits turning the complete 3-star into the 9-edge depth-two tree.
#[derive(Debug, Clone)]
pub struct SplitChain {
    pub steps: Vec<LiftResult>,
    /// Whether the final inequality matches the `(3,2)`-tree inequality up to relabeling.
    pub matches_tree: bool,
}

/// Starting from `K_{1,3}` (center 0, leaves s=1, t=2, u=3): split `s` twice,
/// then `t` twice, then `u` twice. Each split adds a pendant leaf that takes over one pair.
pub fn three_claw_split_chain(budget: &Budget) -> Result<SplitChain> {
    let (mut inst, mut ineq) = gen_complete_star(3)?;
    let (s, t, u) = (1, 2, 3);
    // (node to split, partner whose pair moves to the new node)
    let plan = [(s, t), (s, u), (t, 4), (t, u), (u, 5), (u, 7)];
    let mut steps = Vec::new();
    for &(v, moved) in &plan {
        let partners: Vec<NodeId> = inst
            .pairs()
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect();
        if !partners.contains(&moved) {
            return Err(Error::PairMissing(v, moved));
        }
        let choice: BTreeMap<NodeId, PairChoice> = partners
            .iter()
            .map(|&p| (p, if p == moved { PairChoice::Second } else { PairChoice::First }))
            .collect();
        let step = split_at(&inst, &ineq, v, &|_| false, &choice, budget)?;
        inst = step.instance.clone();
        ineq = step.inequality.clone();
        steps.push(step);
    }
    let (tree, target) = gen_tree_ineq(3, 2)?;
    let matches_tree = inequality_isomorphism((&inst, &ineq), (&tree, &target)).is_some();
    Ok(SplitChain { steps, matches_tree })
}

/// Two node splits turning a generalized Wagner inequality on `C_{2(N-1)}` into one on `C_{2N}`.
#[derive(Debug, Clone)]
pub struct WagnerDerivation {
    pub omegas: Vec<Rational>,
    pub derived: (MulticutInstance, LinearInequality),
    pub generated: (MulticutInstance, LinearInequality),
    /// Coefficients agree edge by edge under the cycle relabeling.
    pub matches: bool,
}

/// Derives the `beta = 1` inequality with breakpoints `(l_1, ..., l_{n-1}, N)` from
/// the one with breakpoints `prev = (l_1, ..., l_{n-1}, N - 1)`.
pub fn generalized_wagner_by_splitting(prev: &[usize], budget: &Budget) -> Result<WagnerDerivation> {
    let n = prev.len();
    let np = *prev.last().ok_or(Error::BadBreakpoints)?;
    let (inst, ineq) = gen_generalized_wagner(n, np, prev, 1)?;
    // First split: v_{N'} keeps its edge to v_{N'+1}; the pair with v_0 goes to both halves.
    let first = split_at(&inst, &ineq, np, &|w| w != np + 1, &BTreeMap::new(), budget)?;
    let v_np_prime = 2 * np;
    // Second split: v_0 keeps its edge to v_1; {v_0, v'_{N'}} moves to v'_0.
    let choice: BTreeMap<NodeId, PairChoice> =
        [(np, PairChoice::First), (v_np_prime, PairChoice::Second)].into();
    let second = split_at(&first.instance, &first.inequality, 0, &|w| w != 1, &choice, budget)?;
    let v0_prime = 2 * np + 1;

    let big_n = np + 1;
    let mut prev_bp = prev.to_vec();
    *prev_bp.last_mut().expect("nonempty") = big_n;
    let generated = gen_generalized_wagner(n, big_n, &prev_bp, 1)?;
    // Cycle order after both splits: v_0..v_{N'-1}, v'_{N'}, v_{N'}..v_{2N'-1}, v'_0.
    let mut perm = vec![0; 2 * big_n];
    for v in 0..np {
        perm[v] = v;
    }
    perm[v_np_prime] = np;
    for v in np..2 * np {
        perm[v] = v + 1;
    }
    perm[v0_prime] = 2 * big_n - 1;
    let matches = match lift_zero_mapped(&second.instance, &second.inequality, &generated.0, &perm) {
        Ok(r) => r.inequality == generated.1,
        Err(Error::NotASubgraph(_)) | Err(Error::TerminalMismatch(_)) => false,
        Err(e) => return Err(e),
    };
    Ok(WagnerDerivation {
        omegas: vec![first.omega.clone().expect("split has omega"), second.omega.clone().expect("split has omega")],
        derived: (second.instance, second.inequality),
        generated,
        matches,
    })
}

/// Edge bounds, the 2-path inequality of every pair, and the full-star row on the circular star.
pub fn circular_claw_candidates(n: usize) -> Result<(MulticutInstance, Vec<LinearInequality>, LinearInequality)> {
    let inst = circular_star_instance(n)?;
    let mut c: Vec<LinearInequality> = (0..n).map(|e| gen_edge_ineq(&inst, e)).collect::<Result<_>>()?;
    for &(s, t) in inst.pairs() {
        c.push(gen_path_ineq(&inst, &[s - 1, t - 1], (s, t))?);
    }
    let full = LinearInequality::new(vec![1; n], n.div_ceil(2) as i64, Family::Custom);
    Ok((inst, c, full))
}

/// Edge bounds, all 2-path inequalities, and the full-cycle row on `C_n` with non-adjacent pairs.
pub fn cycle_candidates(n: usize) -> Result<(MulticutInstance, Vec<LinearInequality>, LinearInequality)> {
    let inst = cycle_nonadjacent_instance(n)?;
    let mut c: Vec<LinearInequality> = (0..n).map(|e| gen_edge_ineq(&inst, e)).collect::<Result<_>>()?;
    for i in 0..n {
        let (a, b) = (i, (i + 2) % n);
        c.push(gen_path_ineq(&inst, &[i, (i + 1) % n], (a, b))?);
    }
    let full = LinearInequality::new(vec![1; n], n.div_ceil(2) as i64, Family::Custom);
    Ok((inst, c, full))
}

/// Family of a facet of the antipodal cycle `C_{2N}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AntipodalClass {
    Edge,
    Path,
    Wagner { beta: u8 },
    /// Matches the generator after rotating the cycle by `rotation` edges.
    GeneralizedWagner { n: usize, breakpoints: Vec<usize>, beta: u8, rotation: usize },
}

/// Classifies a facet of `C_{2N}` with antipodal pairs, up to rotation of the cycle.
pub fn classify_antipodal_facet(big_n: usize, ineq: &LinearInequality) -> Result<Option<AntipodalClass>> {
    let inst = antipodal_cycle_instance(big_n)?;
    let m = 2 * big_n;
    if ineq.is_edge_bound().is_some() {
        return Ok(Some(AntipodalClass::Edge));
    }
    if ineq.rhs == 1 && ineq.coeffs.iter().all(|&c| c <= 1) {
        let support: Vec<EdgeId> = ineq.support().to_vec();
        if inst.pairs().iter().any(|&p| gen_path_ineq(&inst, &support, p).is_ok()) {
            return Ok(Some(AntipodalClass::Path));
        }
    }
    if ineq.rhs != 3 || ineq.coeffs.iter().any(|&c| c != 1 && c != 2) {
        return Ok(None);
    }
    for r in 0..m {
        let rotated: Vec<i64> = (0..m).map(|i| ineq.coeffs[(i + r) % m]).collect();
        if r > 0 && rotated[0] == rotated[m - 1] {
            continue;
        }
        // Block boundaries in the first half, read from the rotated vector.
        let mut breakpoints = Vec::new();
        for i in 1..big_n {
            if rotated[i] != rotated[i - 1] {
                breakpoints.push(i);
            }
        }
        breakpoints.push(big_n);
        let n = breakpoints.len();
        if n < 5 || n % 2 == 0 {
            continue;
        }
        let beta = rotated[0] as u8;
        let Ok((_, g)) = gen_generalized_wagner(n, big_n, &breakpoints, beta) else { continue };
        if g.coeffs == rotated {
            return Ok(Some(if n == big_n {
                AntipodalClass::Wagner { beta: ineq.coeffs[0] as u8 }
            } else {
                AntipodalClass::GeneralizedWagner { n, breakpoints, beta, rotation: r }
            }));
        }
    }
    Ok(None)
}

/// All facets of the antipodal `C_{2n}` with their classes (`None` = unclassified).
pub fn classify_antipodal_cycle(
    n: usize,
    budget: &Budget,
) -> Result<Vec<(LinearInequality, Option<AntipodalClass>)>> {
    let inst = antipodal_cycle_instance(n)?;
    let h = dominant_hrep(&inst, budget)?;
    h.facets.into_iter().map(|f| Ok((f.clone(), classify_antipodal_facet(n, &f)?))).collect()
}
