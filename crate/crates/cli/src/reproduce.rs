//! The `reproduce` suite: a manifest of named checks, each with an expected
//! one-line summary. A check passes iff its computed summary equals the
//! expected one; otherwise the differing tokens are reported.

use std::collections::BTreeMap;
use std::time::Instant;

use multicut_core::arith::fmt_rational;
use multicut_core::facet_lab::FacetLab;
use multicut_core::hull::{check_complete_description, check_integer_points, dominant_hrep};
use multicut_core::inequality::*;
use multicut_core::lifting::replacement_conjecture_check;
use multicut_core::multicut::{enumerate_minimal_multicuts, min_multicut_bruteforce, min_st_cut};
use multicut_core::random::{random_instance, random_weights, rng};
use multicut_core::solver::{int_weights, lower_bound_report, solve_min_multicut, Families, SolverConfig};
use multicut_core::studies::*;
use multicut_core::{Budget, Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::generator::Generator;

pub const DEFAULT_MANIFEST: &str = include_str!("../manifests/default.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// The result this check reproduces.
    pub anchor: String,
    #[serde(flatten)]
    pub kind: CheckKind,
    pub expected: String,
    /// Multiplies the default budget for this check.
    #[serde(default)]
    pub budget_scale: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum System {
    CircularClaw,
    Cycle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CheckKind {
    /// Validity, facet, sharedness and structural checks of one generated inequality.
    Facet { generator: Generator, shared: bool },
    /// Facets of random one-pair instances are exactly edge and path inequalities.
    StCutDominant { count: usize, max_edges: usize, seed: u64 },
    /// Candidate system with and without the all-ones row.
    CompleteDescription { system: System, n: usize },
    /// Tight minimal multicuts of the `(n,k)`-tree inequality are those with `k-1` or `k` level-one edges.
    TreeTightness { n: usize, k: usize },
    SplitChain,
    WagnerDerivation { prev: Vec<usize> },
    DiagonalCycles { n: usize },
    /// Facet classes of random two-pair instances; only errors make it fail.
    TwoPairs { count: usize, max_edges: usize, seed: u64 },
    SolverVsBrute { count: usize, max_edges: usize, max_pairs: usize, seed: u64 },
    SolverVsStCut { count: usize, max_edges: usize, seed: u64 },
    IntegerPointsStar { n: usize },
    IntegerPointsRandom { count: usize, max_edges: usize, seed: u64 },
    /// LP bound of the antipodal `C_{2n}` with weights 1,2,1,2,...: paths only, then paths plus Wagner rows.
    LowerBound { n: usize },
    /// Edge-replacement conjecture evidence; unexplained facets are noted, not failed.
    Replacement { count: usize, max_edges: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Budget,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    /// Extra information that is not compared.
    pub note: String,
    pub millis: u128,
}

impl CheckResult {
    /// `expected`/`actual` tokens that differ, as `- x` / `+ y` lines.
    pub fn diff(&self) -> Vec<String> {
        let a: Vec<&str> = self.expected.split_whitespace().collect();
        let b: Vec<&str> = self.actual.split_whitespace().collect();
        let mut out = Vec::new();
        for i in 0..a.len().max(b.len()) {
            match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) if x == y => {}
                (x, y) => {
                    if let Some(x) = x {
                        out.push(format!("- {x}"));
                    }
                    if let Some(y) = y {
                        out.push(format!("+ {y}"));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub results: Vec<CheckResult>,
}

impl Report {
    /// 0 if all pass, 1 if any check failed or errored, else 3 if a budget was exceeded.
    pub fn exit_code(&self) -> i32 {
        if self.results.iter().any(|r| matches!(r.status, Status::Fail | Status::Error)) {
            1
        } else if self.results.iter().any(|r| r.status == Status::Budget) {
            3
        } else {
            0
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let tag = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Budget => "BUDGET",
                Status::Error => "ERROR",
            };
            out += &format!("{tag:<6} {:<32} {:>7} ms  {}\n", r.id, r.millis, r.anchor);
            match r.status {
                Status::Fail => {
                    for line in r.diff() {
                        out += &format!("         {line}\n");
                    }
                }
                Status::Budget | Status::Error => out += &format!("         {}\n", r.actual),
                Status::Pass => {}
            }
            if !r.note.is_empty() {
                out += &format!("         note: {}\n", r.note);
            }
        }
        let pass = self.results.iter().filter(|r| r.status == Status::Pass).count();
        out += &format!("{pass}/{} checks passed\n", self.results.len());
        out
    }
}

pub fn parse_manifest(text: &str) -> std::result::Result<Manifest, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn default_manifest() -> Manifest {
    parse_manifest(DEFAULT_MANIFEST).expect("the built-in manifest is well-formed")
}

/// Runs the checks whose id contains `filter` (case-insensitive), in parallel,
/// reporting in manifest order.
pub fn run_reproduce(manifest: &Manifest, filter: Option<&str>) -> Report {
    let needle = filter.map(str::to_lowercase);
    let selected: Vec<&Check> = manifest
        .checks
        .iter()
        .filter(|c| needle.as_ref().is_none_or(|f| c.id.to_lowercase().contains(f.as_str())))
        .collect();
    let results = selected.par_iter().map(|c| run_check(c)).collect();
    Report { results }
}

pub fn run_check(check: &Check) -> CheckResult {
    let budget = check.budget_scale.map_or_else(Budget::default, Budget::scaled);
    let start = Instant::now();
    let outcome = evaluate(&check.kind, &budget);
    let millis = start.elapsed().as_millis();
    let (status, actual, note) = match outcome {
        Ok((actual, note)) => {
            let status = if actual == check.expected { Status::Pass } else { Status::Fail };
            (status, actual, note)
        }
        Err(Error::BudgetExceeded(m)) => (Status::Budget, format!("budget exceeded: {m}"), String::new()),
        Err(e) => (Status::Error, format!("error: {e}"), String::new()),
    };
    CheckResult {
        id: check.id.clone(),
        anchor: check.anchor.clone(),
        status,
        expected: check.expected.clone(),
        actual,
        note,
        millis,
    }
}

fn pf(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Computes the one-line summary (and a free-form note) of a check.
pub fn evaluate(kind: &CheckKind, budget: &Budget) -> Result<(String, String)> {
    let none = String::new();
    match kind {
        CheckKind::Facet { generator, shared } => {
            let (inst, ineq) = generator.generate()?;
            let lab = FacetLab::new(&inst, budget)?;
            let r = lab.report(&ineq, *shared)?;
            let shared = r.is_shared.map_or("-".to_string(), |s| s.to_string());
            let structural = if r.is_facet { lab.structural_checks(&ineq)?.passes().to_string() } else { "-".into() };
            Ok((
                format!(
                    "valid={} facet={} shared={shared} structural={structural} rhs={} dim={}",
                    r.valid, r.is_facet, ineq.rhs, r.face_dim
                ),
                none,
            ))
        }
        CheckKind::StCutDominant { count, max_edges, seed } => {
            let mut r = rng(*seed);
            let mut matched = 0;
            for _ in 0..*count {
                let inst = random_instance(&mut r, *max_edges, 1)?;
                let cands = dedup_inequalities(edge_path_system(&inst));
                let h = dominant_hrep(&inst, budget)?;
                let exact = h.facets.len() == cands.len() && cands.iter().all(|c| h.facets.contains(c));
                matched += usize::from(exact);
            }
            Ok((format!("matched={matched}/{count}"), none))
        }
        CheckKind::CompleteDescription { system, n } => {
            let (inst, mut cands, full) = match system {
                System::CircularClaw => circular_claw_candidates(*n)?,
                System::Cycle => cycle_candidates(*n)?,
            };
            let without = check_complete_description(&inst, &cands, budget)?.pass;
            cands.push(full);
            let with = check_complete_description(&inst, &cands, budget)?.pass;
            Ok((format!("with-full-row={} without-full-row={}", pf(with), pf(without)), none))
        }
        CheckKind::TreeTightness { n, k } => {
            let layout = tree_layout(*n)?;
            let (_, ineq) = gen_tree_ineq(*n, *k)?;
            let cuts = enumerate_minimal_multicuts(&layout.instance, budget)?;
            let mut agree = true;
            let mut tight = 0;
            for c in &cuts {
                let ones = layout.level_one.iter().filter(|&&e| c.contains(e)).count();
                let is_tight = ineq.evaluate_set(c) == ineq.rhs;
                tight += usize::from(is_tight);
                agree &= is_tight == (ones + 1 == *k || ones == *k);
            }
            Ok((format!("characterization={agree}"), format!("{tight} of {} minimal multicuts tight", cuts.len())))
        }
        CheckKind::SplitChain => {
            let chain = three_claw_split_chain(budget)?;
            let mut facets = 0;
            for s in &chain.steps {
                facets += usize::from(FacetLab::new(&s.instance, budget)?.is_facet(&s.inequality)?);
            }
            let omegas: Vec<String> = chain.steps.iter().filter_map(|s| s.omega.as_ref().map(fmt_rational)).collect();
            Ok((
                format!("steps={} facets={facets} matches-tree={}", chain.steps.len(), chain.matches_tree),
                format!("omega per split: {}", omegas.join(" ")),
            ))
        }
        CheckKind::WagnerDerivation { prev } => {
            let d = generalized_wagner_by_splitting(prev, budget)?;
            let omegas: Vec<String> = d.omegas.iter().map(fmt_rational).collect();
            let facet = FacetLab::new(&d.derived.0, budget)?.is_facet(&d.derived.1)?;
            Ok((format!("omega={} matches={} facet={facet}", omegas.join(","), d.matches), none))
        }
        CheckKind::DiagonalCycles { n } => {
            let classes = classify_antipodal_cycle(*n, budget)?;
            let mut counts: BTreeMap<&str, usize> =
                ["edge", "path", "wagner", "generalized-wagner", "unclassified"].iter().map(|k| (*k, 0)).collect();
            for (_, c) in &classes {
                let key = match c {
                    Some(AntipodalClass::Edge) => "edge",
                    Some(AntipodalClass::Path) => "path",
                    Some(AntipodalClass::Wagner { .. }) => "wagner",
                    Some(AntipodalClass::GeneralizedWagner { .. }) => "generalized-wagner",
                    None => "unclassified",
                };
                *counts.get_mut(key).expect("known key") += 1;
            }
            Ok((
                format!(
                    "facets={} edge={} path={} wagner={} generalized-wagner={} unclassified={}",
                    classes.len(),
                    counts["edge"],
                    counts["path"],
                    counts["wagner"],
                    counts["generalized-wagner"],
                    counts["unclassified"]
                ),
                none,
            ))
        }
        CheckKind::TwoPairs { count, max_edges, seed } => {
            let mut r = rng(*seed);
            let (mut consistent, mut facets, mut other) = (0, 0, 0);
            for _ in 0..*count {
                let inst = random_instance(&mut r, *max_edges, 2)?;
                let cands = edge_path_system(&inst);
                let h = dominant_hrep(&inst, budget)?;
                let extra = h.facets.iter().filter(|f| !cands.contains(f)).count();
                facets += h.facets.len();
                other += extra;
                consistent += usize::from(extra == 0);
            }
            Ok((
                format!("completed={count}/{count}"),
                format!("{consistent}/{count} instances have only edge and path facets ({other} of {facets} facets are other)"),
            ))
        }
        CheckKind::SolverVsBrute { count, max_edges, max_pairs, seed } => {
            let mut r = rng(*seed);
            let mut agree = 0;
            let config = SolverConfig { budget: *budget, ..Default::default() };
            for i in 0..*count {
                let inst = random_instance(&mut r, *max_edges, 1 + i % *max_pairs)?;
                let w = random_weights(&mut r, inst.edge_count(), 1, 10);
                let (_, v, _) = solve_min_multicut(&inst, &w, &config)?;
                let (_, b) = min_multicut_bruteforce(&inst, &w, budget)?;
                agree += usize::from(v == b);
            }
            Ok((format!("agree={agree}/{count}"), none))
        }
        CheckKind::SolverVsStCut { count, max_edges, seed } => {
            let mut r = rng(*seed);
            let mut agree = 0;
            let config = SolverConfig { budget: *budget, ..Default::default() };
            for _ in 0..*count {
                let inst = random_instance(&mut r, *max_edges, 1)?;
                let w = random_weights(&mut r, inst.edge_count(), 1, 10);
                let (_, v, _) = solve_min_multicut(&inst, &w, &config)?;
                let (s, t) = inst.pairs()[0];
                let (_, c) = min_st_cut(inst.graph(), &w, s, t)?;
                agree += usize::from(v == c);
            }
            Ok((format!("agree={agree}/{count}"), none))
        }
        CheckKind::IntegerPointsStar { n } => {
            let (inst, _) = gen_complete_star(*n)?;
            let r = check_integer_points(&inst, &edge_path_system(&inst), budget)?;
            Ok((format!("pass={} points={}", r.pass, r.points_checked), none))
        }
        CheckKind::IntegerPointsRandom { count, max_edges, seed } => {
            let mut r = rng(*seed);
            let mut pass = 0;
            for i in 0..*count {
                let inst = random_instance(&mut r, *max_edges, 1 + i % 3)?;
                pass += usize::from(check_integer_points(&inst, &edge_path_system(&inst), budget)?.pass);
            }
            Ok((format!("pass={pass}/{count}"), none))
        }
        CheckKind::LowerBound { n } => {
            let (inst, w1) = gen_wagner(*n, 1)?;
            let (_, w2) = gen_wagner(*n, 2)?;
            let weights = int_weights(&w2.coeffs);
            let paths = Families::parse("edges,paths").expect("known families");
            let base = lower_bound_report(&inst, &weights, &paths)?;
            let with = Families { pool: vec![w1, w2], ..paths };
            let strengthened = lower_bound_report(&inst, &weights, &with)?;
            let (_, opt) = min_multicut_bruteforce(&inst, &weights, budget)?;
            Ok((
                format!(
                    "paths={} paths+wagner={} optimum={}",
                    fmt_rational(&base),
                    fmt_rational(&strengthened),
                    fmt_rational(&opt)
                ),
                none,
            ))
        }
        CheckKind::Replacement { count, max_edges, seed } => {
            let mut r = rng(*seed);
            let (mut unexplained, mut checked) = (0, 0);
            for i in 0..*count {
                let inst = random_instance(&mut r, *max_edges, 1 + i % 3)?;
                let f = i % inst.edge_count();
                let ev = replacement_conjecture_check(&inst, f, 2, budget)?;
                checked += ev.facets_checked;
                unexplained += ev.unexplained.len();
            }
            Ok((
                format!("completed={count}/{count}"),
                format!("{unexplained} of {checked} facets after replacement not explained by edge bounds or lifts"),
            ))
        }
    }
}
