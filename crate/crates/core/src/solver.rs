//! Exact minimum multicut by branch-and-cut.
//!
//! Each node solves the LP over the global cut pool plus its branching bounds,
//! separates path inequalities (and, on trees, subdivided star and tree
//! inequalities) until none is violated, then either accepts an integral
//! point or branches on the most fractional edge.

use std::collections::BTreeMap;

use num::{BigInt, One, Zero};
use serde::Serialize;

use crate::arith::{distance_to_half, fmt_rational, is_integral, Rational};
use crate::budget::Budget;
use crate::edgeset::EdgeSet;
use crate::error::Result;
use crate::graph::EdgeId;
use crate::inequality::{gen_edge_ineq, Family, LinearInequality};
use crate::instance::MulticutInstance;
use crate::lp::{lp_solve, LpProblem, LpSolution};
use crate::multicut::{check_weights, is_multicut, minimalize};
use crate::separation::{
    separate_paths, separate_pool, star_candidates, tree_candidates, SeparationResult, DEFAULT_CAP,
};

/// Inequality families available to the cutting-plane loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Families {
    /// `x_e >= 1` for edges joining a pair.
    pub edges: bool,
    pub paths: bool,
    /// Subdivided star inequalities (tree instances only).
    pub stars: bool,
    /// Subdivided tree inequalities (tree instances only).
    pub trees: bool,
    /// Explicit extra inequalities, separated by enumeration.
    pub pool: Vec<LinearInequality>,
}

impl Default for Families {
    fn default() -> Self {
        Families { edges: true, paths: true, stars: true, trees: true, pool: Vec::new() }
    }
}

impl Families {
    pub fn none() -> Self {
        Families { edges: false, paths: false, stars: false, trees: false, pool: Vec::new() }
    }

    /// Parses a comma list of `edges`, `paths`, `stars`, `trees`.
    pub fn parse(list: &str) -> std::result::Result<Self, String> {
        let mut f = Families::none();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "edges" | "edge" => f.edges = true,
                "paths" | "path" => f.paths = true,
                "stars" | "star" => f.stars = true,
                "trees" | "tree" => f.trees = true,
                other => return Err(format!("unknown family `{other}`")),
            }
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolverConfig {
    pub families: Families,
    /// Largest star size and tree size used on tree instances.
    pub cap: usize,
    pub budget: Budget,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { families: Families::default(), cap: DEFAULT_CAP, budget: Budget::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct SolveStats {
    pub lp_solves: usize,
    pub lp_pivots: usize,
    pub cuts_by_family: BTreeMap<String, usize>,
    pub branch_nodes: usize,
    #[serde(serialize_with = "ser_opt")]
    pub root_bound: Option<Rational>,
    #[serde(serialize_with = "ser_opt")]
    pub final_bound: Option<Rational>,
    /// LP value after each cutting-plane round at the root.
    #[serde(skip)]
    pub root_trace: Vec<Rational>,
    /// Every inequality added to the pool, in order of addition.
    #[serde(skip)]
    pub added_cuts: Vec<LinearInequality>,
}

fn ser_opt<S: serde::Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&fmt_rational(r)),
        None => s.serialize_none(),
    }
}

fn family_key(f: &Family) -> &'static str {
    match f {
        Family::Edge { .. } => "edge",
        Family::Path { .. } => "path",
        Family::SubdividedCircularStar { .. } | Family::CircularStar { .. } => "circular-star",
        Family::SubdividedCompleteStar { .. } | Family::CompleteStar { .. } => "complete-star",
        Family::SubdividedTree { .. } | Family::Tree { .. } => "tree",
        _ => "pool",
    }
}

struct CutLoop<'a> {
    inst: &'a MulticutInstance,
    families: &'a Families,
    /// Static candidates (tree families and the explicit pool), separated by enumeration.
    enumerated: Vec<LinearInequality>,
    pool: LpProblem,
    stats: SolveStats,
}

impl<'a> CutLoop<'a> {
    fn new(inst: &'a MulticutInstance, w: &[Rational], families: &'a Families, cap: usize) -> Result<Self> {
        let mut pool = LpProblem::new(w.to_vec());
        let mut stats = SolveStats::default();
        if families.edges {
            for e in 0..inst.edge_count() {
                if inst.edge_is_pair(e) {
                    let row = gen_edge_ineq(inst, e)?;
                    if pool.add_row(row.clone())? {
                        *stats.cuts_by_family.entry("edge".into()).or_default() += 1;
                        stats.added_cuts.push(row);
                    }
                }
            }
        }
        let mut enumerated = families.pool.clone();
        if inst.graph().is_tree() && inst.edge_count() > 0 {
            if families.stars {
                for k in 3..=cap {
                    enumerated.extend(star_candidates(inst, k)?);
                }
            }
            if families.trees {
                for l in 3..=cap {
                    if l * (l - 1) / 2 > inst.pairs().len() {
                        break;
                    }
                    enumerated.extend(tree_candidates(inst, l)?);
                }
            }
        }
        Ok(CutLoop { inst, families, enumerated, pool, stats })
    }

    fn separate(&self, x: &[Rational]) -> Result<SeparationResult> {
        let mut parts = Vec::new();
        if self.families.paths {
            parts.push(separate_paths(self.inst, x)?);
        }
        if parts.iter().all(|p| p.is_empty()) && !self.enumerated.is_empty() {
            parts.push(separate_pool(x, &self.enumerated)?);
        }
        Ok(SeparationResult::merge(parts))
    }

    /// Cutting-plane loop at one node. `Ok(None)` when the node LP is infeasible.
    fn node_lp(&mut self, lower: &[EdgeId], zero: &[EdgeId]) -> Result<Option<LpSolution>> {
        loop {
            let mut lp = self.pool.clone();
            let m = self.inst.edge_count();
            for &e in lower {
                let mut c = vec![0; m];
                c[e] = 1;
                lp.add_row(LinearInequality::new(c, 1, Family::Custom))?;
            }
            for &e in zero {
                lp.fix_zero(e);
            }
            self.stats.lp_solves += 1;
            let sol = match lp_solve(&lp) {
                Ok(s) => s,
                Err(crate::error::Error::Infeasible) => return Ok(None),
                Err(e) => return Err(e),
            };
            self.stats.lp_pivots += sol.pivots;
            if self.stats.root_bound.is_none() {
                self.stats.root_trace.push(sol.value.clone());
            }
            let cuts = self.separate(&sol.x)?;
            let mut added = false;
            for c in cuts.violated {
                if self.pool.add_row(c.ineq.clone())? {
                    added = true;
                    *self.stats.cuts_by_family.entry(family_key(&c.ineq.family).into()).or_default() += 1;
                    self.stats.added_cuts.push(c.ineq);
                }
            }
            if !added {
                return Ok(Some(sol));
            }
        }
    }
}

/// Provably optimal minimum-weight multicut with solver statistics.
pub fn solve_min_multicut(
    inst: &MulticutInstance,
    w: &[Rational],
    config: &SolverConfig,
) -> Result<(EdgeSet, Rational, SolveStats)> {
    check_weights(inst.graph(), w)?;
    let m = inst.edge_count();
    let mut families = config.families.clone();
    // Paths are required for correctness of the integrality test.
    families.paths = true;
    families.edges = true;
    let mut cl = CutLoop::new(inst, w, &families, config.cap)?;

    let full = EdgeSet::full(m);
    let start = minimalize(inst, &full, w);
    let mut best_value = start.weight(w);
    let mut best = start;

    let mut stack: Vec<(Vec<EdgeId>, Vec<EdgeId>)> = vec![(Vec::new(), Vec::new())];
    while let Some((lower, zero)) = stack.pop() {
        cl.stats.branch_nodes += 1;
        let Some(sol) = cl.node_lp(&lower, &zero)? else { continue };
        if cl.stats.root_bound.is_none() {
            cl.stats.root_bound = Some(sol.value.clone());
        }
        if sol.value >= best_value {
            continue;
        }
        let frac: Vec<EdgeId> = (0..m).filter(|&e| !is_integral(&sol.x[e])).collect();
        if frac.is_empty() {
            let support = EdgeSet::from_indices(m, (0..m).filter(|&e| !sol.x[e].is_zero()));
            debug_assert!(is_multicut(inst, &support));
            let cut = minimalize(inst, &support, w);
            let value = cut.weight(w);
            if value < best_value {
                best_value = value;
                best = cut;
            }
            continue;
        }
        let e = *frac
            .iter()
            .min_by(|&&a, &&b| distance_to_half(&sol.x[a]).cmp(&distance_to_half(&sol.x[b])).then(a.cmp(&b)))
            .expect("nonempty");
        let mut up = lower.clone();
        up.push(e);
        stack.push((up, zero.clone()));
        if !inst.edge_is_pair(e) {
            let mut down = zero.clone();
            down.push(e);
            stack.push((lower.clone(), down));
        }
    }
    debug_assert!(is_multicut(inst, &best));
    cl.stats.final_bound = Some(best_value.clone());
    Ok((best, best_value, cl.stats))
}

/// LP bound from the requested families alone, by cutting planes without branching.
pub fn lower_bound_report(inst: &MulticutInstance, w: &[Rational], families: &Families) -> Result<Rational> {
    check_weights(inst.graph(), w)?;
    let mut cl = CutLoop::new(inst, w, families, DEFAULT_CAP)?;
    Ok(cl.node_lp(&[], &[])?.map_or_else(Rational::zero, |s| s.value))
}

/// Unit weights.
pub fn unit_weights(m: usize) -> Vec<Rational> {
    vec![Rational::one(); m]
}

/// Integer weights from `i64` values.
pub fn int_weights(w: &[i64]) -> Vec<Rational> {
    w.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};
    use crate::graph::Graph;
    use crate::inequality::*;
    use crate::multicut::{min_multicut_bruteforce, min_st_cut};

    #[test]
    fn complete_claw() {
        let (inst, _) = gen_complete_star(3).unwrap();
        let (cut, v, stats) = solve_min_multicut(&inst, &unit_weights(3), &SolverConfig::default()).unwrap();
        assert_eq!(v, rat(2));
        assert_eq!(cut.len(), 2);
        assert_eq!(stats.final_bound, Some(rat(2)));
    }

    #[test]
    fn claw_without_star_cuts_branches() {
        let (inst, _) = gen_complete_star(3).unwrap();
        let cfg = SolverConfig { families: Families::parse("paths").unwrap(), ..Default::default() };
        let (_, v, stats) = solve_min_multicut(&inst, &unit_weights(3), &cfg).unwrap();
        assert_eq!(v, rat(2));
        assert_eq!(stats.root_bound, Some(ratio(3, 2)));
        assert!(stats.branch_nodes > 1);
    }

    #[test]
    fn single_pair_matches_max_flow() {
        let g = Graph::new(5, &[(0, 1), (1, 4), (0, 2), (2, 3), (3, 4), (1, 2)]).unwrap();
        let inst = MulticutInstance::new(g.clone(), &[(0, 4)]).unwrap();
        let w = int_weights(&[3, 1, 2, 5, 2, 4]);
        let (_, v, _) = solve_min_multicut(&inst, &w, &SolverConfig::default()).unwrap();
        assert_eq!(v, min_st_cut(&g, &w, 0, 4).unwrap().1);
    }

    #[test]
    fn antipodal_cycle() {
        let inst = antipodal_cycle_instance(5).unwrap();
        let w = unit_weights(10);
        let (cut, v, _) = solve_min_multicut(&inst, &w, &SolverConfig::default()).unwrap();
        assert_eq!(v, rat(2));
        assert_eq!(v, min_multicut_bruteforce(&inst, &w, &Budget::default()).unwrap().1);
        assert_eq!(cut.len(), 2);
    }

    #[test]
    fn lower_bounds() {
        let (inst, star) = gen_complete_star(3).unwrap();
        let w = unit_weights(3);
        assert_eq!(lower_bound_report(&inst, &w, &Families::none()).unwrap(), rat(0));
        let paths = Families::parse("paths").unwrap();
        assert_eq!(lower_bound_report(&inst, &w, &paths).unwrap(), ratio(3, 2));
        let with_star = Families { pool: vec![star], ..paths };
        assert_eq!(lower_bound_report(&inst, &w, &with_star).unwrap(), rat(2));
    }

    #[test]
    fn stats_are_deterministic() {
        let inst = antipodal_cycle_instance(5).unwrap();
        let w = int_weights(&[1, 2, 1, 2, 1, 2, 1, 2, 1, 2]);
        let a = solve_min_multicut(&inst, &w, &SolverConfig::default()).unwrap();
        let b = solve_min_multicut(&inst, &w, &SolverConfig::default()).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.2, b.2);
        assert_eq!(a.1, rat(3));
    }
}
