use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use multicut_cli::format::*;
use multicut_cli::generator::Generator;
use multicut_cli::reproduce::{default_manifest, parse_manifest, run_reproduce};
use multicut_core::arith::fmt_rational;
use multicut_core::facet_lab::FacetLab;
use multicut_core::graph::Side;
use multicut_core::hull::{check_complete_description, dominant_hrep};
use multicut_core::lifting::{contract_subgraph_to_edge, lift_node_split, lift_subdivide, LiftResult, PairChoice};
use multicut_core::multicut::{enumerate_minimal_multicuts, min_multicut_bruteforce};
use multicut_core::separation::{separate_paths, separate_stars_on_tree, separate_trees_on_tree, SeparationResult, DEFAULT_CAP};
use multicut_core::solver::{solve_min_multicut, Families, SolverConfig};
use multicut_core::{Budget, Error};

/// Exact minimum multicut and the polyhedral structure of its dominant.
#[derive(Parser)]
#[command(name = "multicut", version)]
struct Cli {
    /// Scale factor for all work limits (1 = default).
    #[arg(long, global = true, default_value_t = 1.0)]
    budget: f64,
    /// Worker threads for parallel steps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Oracle {
    Brute,
    None,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Split,
    Subdivide,
    ReplacePath,
    ContractSubgraph,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum-weight multicut by branch-and-cut.
    Solve {
        instance: PathBuf,
        /// Comma list of edges, paths, stars, trees.
        #[arg(long, default_value = "edges,paths,stars,trees")]
        families: String,
        /// Cross-check against exhaustive enumeration.
        #[arg(long, value_enum, default_value = "none")]
        oracle: Oracle,
        #[arg(long)]
        stats: bool,
    },
    /// All minimal multicuts, one per line.
    EnumMulticuts { instance: PathBuf },
    /// Facets of the dominant, in inequality format.
    Facets { instance: PathBuf },
    /// Validity, face dimension and facet status of one inequality (exit 0 iff facet).
    CheckIneq {
        instance: PathBuf,
        inequality: PathBuf,
        #[arg(long)]
        shared: bool,
    },
    /// Whether the inequalities in a file describe the dominant completely (exit 0 iff PASS).
    CheckDescription { instance: PathBuf, inequalities: PathBuf },
    /// Instance and inequality of a named family.
    GenIneq {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long = "big-n")]
        big_n: Option<usize>,
        #[arg(long)]
        beta: Option<u8>,
        #[arg(long, value_delimiter = ',')]
        breakpoints: Option<Vec<usize>>,
        /// Write `<out>.mc` and `<out>.ineq` instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Violated inequalities at a point.
    Separate {
        instance: PathBuf,
        point: PathBuf,
        /// Comma list of path, star, tree.
        #[arg(long, default_value = "path")]
        families: String,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        l: usize,
    },
    /// Lift a facet through a graph operation.
    Lift {
        instance: PathBuf,
        inequality: PathBuf,
        #[arg(long, value_enum)]
        op: Op,
        /// split: node to split.
        #[arg(long)]
        node: Option<usize>,
        /// split: edges moved to the new node.
        #[arg(long, value_delimiter = ',')]
        second: Vec<usize>,
        /// split: partner=first|second|both|neither for pairs at the split node.
        #[arg(long = "pair", value_delimiter = ',')]
        pair_choices: Vec<String>,
        /// subdivide / replace-path: the edge.
        #[arg(long)]
        edge: Option<usize>,
        /// replace-path: path length.
        #[arg(long)]
        length: Option<usize>,
        /// contract-subgraph: edges of the subgraph.
        #[arg(long, value_delimiter = ',')]
        edges: Vec<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        /// Write `<out>.mc` and `<out>.ineq` instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run the built-in (or a given) manifest of checks.
    Reproduce {
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Only checks whose id contains this string.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, instance_text: &str, ineq_text: &str) -> Result<(), Failure> {
    match out {
        Some(prefix) => {
            for (ext, text) in [("mc", instance_text), ("ineq", ineq_text)] {
                let path = prefix.with_extension(ext);
                fs::write(&path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                println!("wrote {}", path.display());
            }
        }
        None => print!("{instance_text}{ineq_text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let budget = Budget::scaled(cli.budget);
    match cli.command {
        Command::Solve { instance, families, oracle, stats } => {
            let wi = parse_instance(&read(&instance)?)?;
            let families = Families::parse(&families).map_err(Failure::Usage)?;
            let config = SolverConfig { families, budget, ..Default::default() };
            let (cut, value, st) = solve_min_multicut(&wi.instance, &wi.weights, &config)?;
            println!("value {}", fmt_rational(&value));
            println!("cut {cut}");
            if stats {
                println!("stats {}", serde_json::to_string(&st).expect("stats serialize"));
            }
            if let Oracle::Brute = oracle {
                let (_, b) = min_multicut_bruteforce(&wi.instance, &wi.weights, &budget)?;
                println!("oracle {}", fmt_rational(&b));
                if b != value {
                    return Ok(1);
                }
            }
            Ok(0)
        }
        Command::EnumMulticuts { instance } => {
            let wi = parse_instance(&read(&instance)?)?;
            for c in enumerate_minimal_multicuts(&wi.instance, &budget)? {
                println!("{c}");
            }
            Ok(0)
        }
        Command::Facets { instance } => {
            let wi = parse_instance(&read(&instance)?)?;
            print!("{}", print_inequalities(&dominant_hrep(&wi.instance, &budget)?.facets));
            Ok(0)
        }
        Command::CheckIneq { instance, inequality, shared } => {
            let wi = parse_instance(&read(&instance)?)?;
            let q = parse_inequality(&read(&inequality)?, wi.instance.edge_count())?;
            let lab = FacetLab::new(&wi.instance, &budget)?;
            let r = lab.report(&q, shared)?;
            println!("valid: {}", r.valid);
            if let Some(c) = &r.counterexample {
                println!("counterexample: {c:?}");
            }
            println!("tight_vertices: {}", r.tight_vertices.len());
            for t in &r.tight_vertices {
                println!("  {t:?}");
            }
            println!("face_dim: {}", r.face_dim);
            println!("is_facet: {}", r.is_facet);
            if let Some(s) = r.is_shared {
                println!("is_shared: {s}");
            }
            println!("bounded: {}", r.bounded);
            Ok(u8::from(!r.is_facet))
        }
        Command::CheckDescription { instance, inequalities } => {
            let wi = parse_instance(&read(&instance)?)?;
            let cands = parse_inequalities(&read(&inequalities)?)?;
            let r = check_complete_description(&wi.instance, &cands, &budget)?;
            println!("{}", if r.pass { "PASS" } else { "FAIL" });
            for (label, list) in [("missing", &r.missing), ("invalid", &r.invalid), ("redundant", &r.redundant)] {
                for q in list.iter() {
                    println!("{label} {q}");
                }
            }
            Ok(u8::from(!r.pass))
        }
        Command::GenIneq { family, n, k, big_n, beta, breakpoints, out } => {
            let g = Generator::from_args(&family, n, k, big_n, beta, breakpoints).map_err(Failure::Usage)?;
            let (inst, q) = g.generate()?;
            emit(&out, &print_instance(&inst, None), &print_inequalities(&[q]))?;
            Ok(0)
        }
        Command::Separate { instance, point, families, k, l } => {
            let wi = parse_instance(&read(&instance)?)?;
            let x = parse_point(&read(&point)?, wi.instance.edge_count())?;
            let mut results = Vec::new();
            for f in families.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                results.push(match f {
                    "path" | "paths" => separate_paths(&wi.instance, &x)?,
                    "star" | "stars" => separate_stars_on_tree(&wi.instance, &x, k, DEFAULT_CAP)?,
                    "tree" | "trees" => separate_trees_on_tree(&wi.instance, &x, l, DEFAULT_CAP)?,
                    other => return Err(Failure::Usage(format!("unknown family `{other}`"))),
                });
            }
            for c in SeparationResult::merge(results).violated {
                println!("{} # violation {}", c.ineq, fmt_rational(&c.violation));
            }
            Ok(0)
        }
        Command::Lift { instance, inequality, op, node, second, pair_choices, edge, length, edges, s, t, out } => {
            let wi = parse_instance(&read(&instance)?)?;
            let q = parse_inequality(&read(&inequality)?, wi.instance.edge_count())?;
            let need = |v: Option<usize>, name: &str| v.ok_or_else(|| Failure::Usage(format!("--{name} is required")));
            let r: LiftResult = match op {
                Op::Split => {
                    let v = need(node, "node")?;
                    let sides: BTreeMap<_, _> = wi
                        .instance
                        .graph()
                        .incident_edges(v)
                        .into_iter()
                        .map(|e| (e, if second.contains(&e) { Side::Second } else { Side::First }))
                        .collect();
                    let mut choices = BTreeMap::new();
                    for item in &pair_choices {
                        let (p, c) = item
                            .split_once('=')
                            .ok_or_else(|| Failure::Usage(format!("bad --pair `{item}`")))?;
                        let p: usize = p.parse().map_err(|_| Failure::Usage(format!("bad partner `{p}`")))?;
                        let c = match c {
                            "first" => PairChoice::First,
                            "second" => PairChoice::Second,
                            "both" => PairChoice::Both,
                            "neither" => PairChoice::Neither,
                            other => return Err(Failure::Usage(format!("bad pair choice `{other}`"))),
                        };
                        choices.insert(p, c);
                    }
                    lift_node_split(&wi.instance, &q, v, &sides, &choices, &budget)?
                }
                Op::Subdivide => lift_subdivide(&wi.instance, &q, need(edge, "edge")?, 2)?,
                Op::ReplacePath => lift_subdivide(&wi.instance, &q, need(edge, "edge")?, need(length, "length")?)?,
                Op::ContractSubgraph => contract_subgraph_to_edge(&wi.instance, &q, &edges, need(s, "s")?, need(t, "t")?)?,
            };
            if let Some(w) = &r.omega {
                println!("omega {}", fmt_rational(w));
            }
            emit(&out, &print_instance(&r.instance, None), &print_inequalities(&[r.inequality]))?;
            Ok(0)
        }
        Command::Reproduce { manifest, filter, json } => {
            let m = match manifest {
                Some(p) => parse_manifest(&read(&p)?).map_err(|e| Failure::Usage(format!("manifest: {e}")))?,
                None => default_manifest(),
            };
            let report = run_reproduce(&m, filter.as_deref());
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{}", report.render());
            }
            Ok(report.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // Only fails if a global pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::BudgetExceeded(_)) { 3 } else { 2 })
        }
    }
}
