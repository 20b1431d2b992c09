//! Plain-text formats for instances, inequalities and points.
//!
//! Instance: `nodes N`, `edge u v [weight p/q]`, `pair s t`, one item per line.
//! Inequality: `ineq b <= a_0 ... a_{m-1}`, one per line.
//! Point: one rational per edge index, separated by whitespace.
//! Everything after `#` on a line is ignored. Line numbers in errors are 1-based.

use std::fmt::Write as _;

use multicut_core::arith::{fmt_rational, parse_rational, rat};
use multicut_core::{Error, Graph, LinearInequality, MulticutInstance, Rational, Result};

/// An instance with its edge weights (default 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedInstance {
    pub instance: MulticutInstance,
    pub weights: Vec<Rational>,
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let body = l.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn parse_usize(line: usize, tok: &str) -> Result<usize> {
    tok.parse().map_err(|_| err(line, format!("expected a node index, found `{tok}`")))
}

pub fn parse_instance(text: &str) -> Result<WeightedInstance> {
    let mut nodes: Option<usize> = None;
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    let mut pairs = Vec::new();
    for (line, t) in content_lines(text) {
        match t[0] {
            "nodes" => {
                if t.len() != 2 {
                    return Err(err(line, "usage: nodes N"));
                }
                if nodes.is_some() {
                    return Err(err(line, "`nodes` given twice"));
                }
                nodes = Some(parse_usize(line, t[1])?);
            }
            "edge" => {
                let n = nodes.ok_or_else(|| err(line, "`nodes` must come first"))?;
                let w = match t.len() {
                    3 => rat(1),
                    5 if t[3] == "weight" => {
                        parse_rational(t[4]).ok_or_else(|| err(line, format!("bad weight `{}`", t[4])))?
                    }
                    _ => return Err(err(line, "usage: edge u v [weight p/q]")),
                };
                if w < rat(0) {
                    return Err(err(line, "negative weight"));
                }
                let (u, v) = (parse_usize(line, t[1])?, parse_usize(line, t[2])?);
                for x in [u, v] {
                    if x >= n {
                        return Err(err(line, format!("node {x} out of range (nodes {n})")));
                    }
                }
                if u == v {
                    return Err(err(line, format!("self-loop at node {u}")));
                }
                if edges.contains(&(u.min(v), u.max(v))) {
                    return Err(err(line, format!("duplicate edge {u} {v}")));
                }
                edges.push((u.min(v), u.max(v)));
                weights.push(w);
            }
            "pair" => {
                let n = nodes.ok_or_else(|| err(line, "`nodes` must come first"))?;
                if t.len() != 3 {
                    return Err(err(line, "usage: pair s t"));
                }
                let (s, u) = (parse_usize(line, t[1])?, parse_usize(line, t[2])?);
                for x in [s, u] {
                    if x >= n {
                        return Err(err(line, format!("node {x} out of range (nodes {n})")));
                    }
                }
                if s == u {
                    return Err(err(line, format!("pair with s = t = {s}")));
                }
                pairs.push((s, u));
            }
            other => return Err(err(line, format!("unknown item `{other}`"))),
        }
    }
    let n = nodes.ok_or_else(|| err(0, "missing `nodes` line"))?;
    let graph = Graph::new(n, &edges)?;
    Ok(WeightedInstance { instance: MulticutInstance::new(graph, &pairs)?, weights })
}

/// Canonical text: weights equal to 1 are omitted, pairs are printed sorted.
pub fn print_instance(inst: &MulticutInstance, weights: Option<&[Rational]>) -> String {
    let mut out = format!("nodes {}\n", inst.node_count());
    for (e, &(u, v)) in inst.graph().edges().iter().enumerate() {
        match weights.map(|w| &w[e]) {
            Some(w) if *w != rat(1) => writeln!(out, "edge {u} {v} weight {}", fmt_rational(w)),
            _ => writeln!(out, "edge {u} {v}"),
        }
        .expect("write to string");
    }
    for &(s, t) in inst.pairs() {
        writeln!(out, "pair {s} {t}").expect("write to string");
    }
    out
}

pub fn parse_inequalities(text: &str) -> Result<Vec<LinearInequality>> {
    content_lines(text)
        .map(|(line, t)| {
            if t.len() < 3 || t[0] != "ineq" || t[2] != "<=" {
                return Err(err(line, "usage: ineq b <= a_0 ... a_{m-1}"));
            }
            let int = |s: &str| s.parse::<i64>().map_err(|_| err(line, format!("expected an integer, found `{s}`")));
            let rhs = int(t[1])?;
            let coeffs = t[3..].iter().map(|s| int(s)).collect::<Result<Vec<_>>>()?;
            Ok(LinearInequality::new(coeffs, rhs, Default::default()))
        })
        .collect()
}

/// Exactly one inequality, checked against the instance's edge count.
pub fn parse_inequality(text: &str, m: usize) -> Result<LinearInequality> {
    let mut all = parse_inequalities(text)?;
    if all.len() != 1 {
        return Err(err(0, format!("expected one inequality, found {}", all.len())));
    }
    let q = all.pop().expect("one element");
    if q.dim() != m {
        return Err(Error::DimensionMismatch { expected: m, got: q.dim() });
    }
    Ok(q)
}

pub fn print_inequalities(list: &[LinearInequality]) -> String {
    list.iter().map(|q| format!("{q}\n")).collect()
}

pub fn parse_point(text: &str, m: usize) -> Result<Vec<Rational>> {
    let mut x = Vec::new();
    for (line, t) in content_lines(text) {
        for tok in t {
            x.push(parse_rational(tok).ok_or_else(|| err(line, format!("bad rational `{tok}`")))?);
        }
    }
    if x.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: x.len() });
    }
    Ok(x)
}

pub fn print_point(x: &[Rational]) -> String {
    let parts: Vec<String> = x.iter().map(fmt_rational).collect();
    parts.join(" ") + "\n"
}
