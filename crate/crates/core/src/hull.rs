//! Double description: from generators (points and rays) to the irredundant
//! facet list of `conv(points) + cone(rays)`.
//!
//! Generators are homogenized to `(1, p)` and `(0, r)`. The facets are the
//! extreme rays `y = (-b, a)` of the polar cone `{y : g·y >= 0 for all g}`,
//! except the trivial ray with `a = 0`. Rays of the polar cone are kept as
//! primitive integer vectors and checked for overflow.

use rayon::prelude::*;
use serde::Serialize;

use num::{BigInt, Integer, Signed, Zero};

use crate::arith::{primitive_integer, Rational};
use crate::budget::Budget;
use crate::edgeset::EdgeSet;
use crate::error::{Error, Result};
use crate::inequality::{Family, LinearInequality};
use crate::instance::MulticutInstance;
use crate::lp::{lp_solve, LpProblem};
use crate::multicut::enumerate_minimal_multicuts;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HRepresentation {
    /// Normalized facets in canonical order.
    pub facets: Vec<LinearInequality>,
    pub dimension: usize,
}

impl HRepresentation {
    pub fn contains(&self, ineq: &LinearInequality) -> bool {
        let n = ineq.clone().normalized();
        self.facets.contains(&n)
    }
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
}

#[derive(Clone)]
struct Ray {
    y: Vec<i128>,
    zeros: Bits,
}

fn dot(a: &[i128], b: &[i128]) -> Result<i128> {
    let mut acc: i128 = 0;
    for (x, y) in a.iter().zip(b) {
        if *x != 0 && *y != 0 {
            let p = x.checked_mul(*y).ok_or(Error::Overflow("double description"))?;
            acc = acc.checked_add(p).ok_or(Error::Overflow("double description"))?;
        }
    }
    Ok(acc)
}

fn primitive(mut v: Vec<i128>) -> Vec<i128> {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        for x in &mut v {
            *x /= g;
        }
    }
    v
}

fn to_i128_row(v: &[Rational]) -> Result<Vec<i128>> {
    primitive_integer(v)
        .iter()
        .map(|x| i128::try_from(x).map_err(|_| Error::Overflow("generator entry")))
        .collect()
}

/// Solves `B r = e_j` for every `j` over the rationals; returns primitive integer columns.
fn inverse_columns(basis: &[Vec<i128>]) -> Result<Vec<Vec<i128>>> {
    let d = basis.len();
    let mut m: Vec<Vec<Rational>> = basis
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational> =
                row.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
            r.extend((0..d).map(|j| Rational::from_integer(BigInt::from(i64::from(i == j)))));
            r
        })
        .collect();
    for c in 0..d {
        let p = (c..d).find(|&i| !m[i][c].is_zero()).expect("basis rows are independent");
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..d {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..2 * d {
                    let delta = &f * &m[c][j];
                    m[i][j] -= delta;
                }
            }
        }
    }
    // Column j of the inverse.
    (0..d)
        .map(|j| {
            let col: Vec<Rational> = (0..d).map(|i| m[i][d + j].clone()).collect();
            to_i128_row(&col)
        })
        .collect()
}

fn support_key(v: &[Rational]) -> (usize, Vec<bool>) {
    let nz: Vec<bool> = v.iter().map(|x| !x.is_zero()).collect();
    (nz.iter().filter(|&&b| b).count(), nz.iter().map(|b| !b).collect())
}

/// Minimal H-representation of `conv(points) + cone(rays)`.
pub fn dd_convert(
    points: &[Vec<Rational>],
    rays: &[Vec<Rational>],
    budget: &Budget,
) -> Result<HRepresentation> {
    let first = points.first().ok_or(Error::Empty)?;
    let d = first.len();
    if let Some(v) = points.iter().chain(rays).find(|v| v.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: v.len() });
    }
    if points.len() + rays.len() > budget.max_generators {
        return Err(Error::BudgetExceeded(format!(
            "{} generators exceed the hull limit of {}",
            points.len() + rays.len(),
            budget.max_generators
        )));
    }
    // Insertion order: support size, then lexicographic on the support pattern.
    let mut gens: Vec<(bool, &Vec<Rational>)> =
        rays.iter().map(|r| (false, r)).chain(points.iter().map(|p| (true, p))).collect();
    gens.sort_by(|a, b| support_key(a.1).cmp(&support_key(b.1)).then(b.0.cmp(&a.0)));
    let rows: Vec<Vec<i128>> = gens
        .iter()
        .map(|(is_point, v)| {
            let mut h = vec![Rational::from_integer(BigInt::from(i64::from(*is_point)))];
            h.extend(v.iter().cloned());
            to_i128_row(&h)
        })
        .collect::<Result<_>>()?;
    let dim = d + 1;
    let total = rows.len();

    // Greedy independent initial rows.
    let mut chosen: Vec<usize> = Vec::new();
    let mut echelon: Vec<Vec<Rational>> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut v: Vec<Rational> =
            row.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
        for e in &echelon {
            let pc = e.iter().position(|x| !x.is_zero()).expect("nonzero echelon row");
            if !v[pc].is_zero() {
                let f = &v[pc] / &e[pc];
                for j in 0..dim {
                    let delta = &f * &e[j];
                    v[j] -= delta;
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            echelon.push(v);
            chosen.push(i);
            if chosen.len() == dim {
                break;
            }
        }
    }
    if chosen.len() < dim {
        return Err(Error::NotFullDimensional);
    }
    let basis: Vec<Vec<i128>> = chosen.iter().map(|&i| rows[i].clone()).collect();
    let cols = inverse_columns(&basis)?;
    let mut current: Vec<Ray> = Vec::with_capacity(dim);
    for (j, y) in cols.into_iter().enumerate() {
        let mut zeros = Bits::new(total);
        for (k, &i) in chosen.iter().enumerate() {
            if k != j {
                zeros.set(i);
            }
        }
        current.push(Ray { y, zeros });
    }

    let min_common = dim.saturating_sub(2);
    for (i, row) in rows.iter().enumerate() {
        if chosen.contains(&i) {
            continue;
        }
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut next = Vec::new();
        for mut r in current.drain(..) {
            let v = dot(row, &r.y)?;
            match v.signum() {
                0 => {
                    r.zeros.set(i);
                    next.push(r);
                }
                1 => pos.push((r, v)),
                _ => neg.push((r, v)),
            }
        }
        if !neg.is_empty() {
            let all_zero_sets: Vec<&Bits> = next
                .iter()
                .map(|r| &r.zeros)
                .chain(pos.iter().map(|(r, _)| &r.zeros))
                .chain(neg.iter().map(|(r, _)| &r.zeros))
                .collect();
            let created: Vec<Result<Vec<Ray>>> = pos
                .par_iter()
                .map(|(p, pv)| {
                    let mut out = Vec::new();
                    for (n, nv) in &neg {
                        let common = p.zeros.and(&n.zeros);
                        if common.count() < min_common {
                            continue;
                        }
                        let blocked = all_zero_sets.iter().any(|z| {
                            !std::ptr::eq(*z, &p.zeros)
                                && !std::ptr::eq(*z, &n.zeros)
                                && common.subset_of(z)
                        });
                        if blocked {
                            continue;
                        }
                        let y: Vec<i128> = p
                            .y
                            .iter()
                            .zip(&n.y)
                            .map(|(&a, &b)| {
                                let l = pv.checked_mul(b).ok_or(Error::Overflow("dd"))?;
                                let r = nv.checked_mul(a).ok_or(Error::Overflow("dd"))?;
                                l.checked_sub(r).ok_or(Error::Overflow("dd"))
                            })
                            .collect::<Result<_>>()?;
                        let mut zeros = common;
                        zeros.set(i);
                        out.push(Ray { y: primitive(y), zeros });
                    }
                    Ok(out)
                })
                .collect();
            for c in created {
                next.extend(c?);
            }
        }
        next.extend(pos.into_iter().map(|(r, _)| r));
        if next.len() > budget.max_generators {
            return Err(Error::BudgetExceeded(format!(
                "{} intermediate rays exceed the hull limit of {}",
                next.len(),
                budget.max_generators
            )));
        }
        current = next;
    }

    let mut facets = Vec::new();
    for r in current {
        if r.y[1..].iter().all(|&x| x == 0) {
            continue;
        }
        let coeffs: Vec<BigInt> = r.y[1..].iter().map(|&x| BigInt::from(x)).collect();
        let rhs = -BigInt::from(r.y[0]);
        facets.push(LinearInequality::from_bigints(&coeffs, &rhs, Family::Hull)?);
    }
    facets.sort_by(|a, b| a.canonical_cmp(b));
    facets.dedup();
    Ok(HRepresentation { facets, dimension: d })
}

/// Unit vectors of `R^m` as rational rows.
pub fn unit_rays(m: usize) -> Vec<Vec<Rational>> {
    (0..m)
        .map(|i| {
            (0..m).map(|j| Rational::from_integer(BigInt::from(i64::from(i == j)))).collect()
        })
        .collect()
}

/// Facets of the dominant from its vertices (minimal multicuts) and unit rays.
pub fn dominant_hrep(inst: &MulticutInstance, budget: &Budget) -> Result<HRepresentation> {
    let m = inst.edge_count();
    if m > budget.max_hull_edges {
        return Err(Error::BudgetExceeded(format!(
            "{m} edges exceed the hull limit of {}",
            budget.max_hull_edges
        )));
    }
    let vertices = enumerate_minimal_multicuts(inst, budget)?;
    dominant_hrep_from(&vertices, m, budget)
}

/// Same as [`dominant_hrep`] with precomputed minimal multicuts.
pub fn dominant_hrep_from(vertices: &[EdgeSet], m: usize, budget: &Budget) -> Result<HRepresentation> {
    if m == 0 {
        return Ok(HRepresentation { facets: vec![], dimension: 0 });
    }
    let points: Vec<Vec<Rational>> = vertices.iter().map(|v| v.incidence()).collect();
    dd_convert(&points, &unit_rays(m), budget)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescriptionReport {
    pub pass: bool,
    /// Facets of the dominant with no candidate defining them.
    pub missing: Vec<LinearInequality>,
    /// Valid candidates that are not facets.
    pub redundant: Vec<LinearInequality>,
    pub invalid: Vec<LinearInequality>,
}

/// PASS iff every facet is among the (normalized) candidates and every candidate is valid.
pub fn check_complete_description(
    inst: &MulticutInstance,
    candidates: &[LinearInequality],
    budget: &Budget,
) -> Result<DescriptionReport> {
    let m = inst.edge_count();
    if let Some(c) = candidates.iter().find(|c| c.dim() != m) {
        return Err(Error::DimensionMismatch { expected: m, got: c.dim() });
    }
    let vertices = enumerate_minimal_multicuts(inst, budget)?;
    let hrep = if m > budget.max_hull_edges {
        return Err(Error::BudgetExceeded(format!("{m} edges exceed the hull limit")));
    } else {
        dominant_hrep_from(&vertices, m, budget)?
    };
    let normalized: Vec<LinearInequality> =
        candidates.iter().map(|c| c.clone().normalized()).collect();
    let invalid: Vec<LinearInequality> = normalized
        .iter()
        .filter(|c| !c.is_nonnegative() || vertices.iter().any(|v| c.evaluate_set(v) < c.rhs))
        .cloned()
        .collect();
    let missing: Vec<LinearInequality> =
        hrep.facets.iter().filter(|f| !normalized.contains(f)).cloned().collect();
    let mut redundant: Vec<LinearInequality> = normalized
        .iter()
        .filter(|c| !hrep.facets.contains(c) && !invalid.contains(c))
        .cloned()
        .collect();
    redundant.dedup();
    Ok(DescriptionReport { pass: missing.is_empty() && invalid.is_empty(), missing, redundant, invalid })
}

/// Membership of `x` in the dominant: some convex combination of vertices lies below `x`.
/// Decided by exact LP feasibility, with a quick test for a single dominated vertex.
pub fn in_dominant(vertices: &[EdgeSet], x: &[Rational]) -> Result<bool> {
    if x.iter().any(|v| v.is_negative()) {
        return Ok(false);
    }
    let one = Rational::from_integer(BigInt::from(1));
    if vertices.iter().any(|v| v.iter().all(|e| x[e] >= one)) {
        return Ok(true);
    }
    in_dominant_lp(vertices, x)
}

/// LP-only membership test.
pub fn in_dominant_lp(vertices: &[EdgeSet], x: &[Rational]) -> Result<bool> {
    let k = vertices.len();
    if k == 0 {
        return Ok(false);
    }
    // Scale rows so that all data are integers: sum λ = 1 and sum λ_i δ_i <= x.
    let l = x.iter().fold(BigInt::from(1), |l, v| l.lcm(v.denom()));
    let mut p = LpProblem::new(vec![Rational::zero(); k]);
    p.add_row(LinearInequality::new(vec![1; k], 1, Family::Custom))?;
    let lf = crate::arith::to_i64(&l).ok_or(Error::Overflow("membership scale"))?;
    p.add_row(LinearInequality::new(vec![-lf; k], -lf, Family::Custom))?;
    for (e, xe) in x.iter().enumerate() {
        let rhs = crate::arith::to_i64(&(xe * &l).to_integer()).ok_or(Error::Overflow("membership"))?;
        let coeffs: Vec<i64> =
            vertices.iter().map(|v| if v.contains(e) { -lf } else { 0 }).collect();
        p.add_row(LinearInequality::new(coeffs, -rhs, Family::Custom))?;
    }
    match lp_solve(&p) {
        Ok(_) => Ok(true),
        Err(Error::Infeasible) => Ok(false),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegerPointDiscrepancy {
    pub point: Vec<i64>,
    pub satisfies_candidate: bool,
    pub in_dominant: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegerPointReport {
    pub pass: bool,
    pub points_checked: usize,
    pub discrepancies: Vec<IntegerPointDiscrepancy>,
}

/// Compares the candidate system with the dominant on every point of `{0,1,2}^E`.
pub fn check_integer_points(
    inst: &MulticutInstance,
    candidates: &[LinearInequality],
    budget: &Budget,
) -> Result<IntegerPointReport> {
    let m = inst.edge_count();
    let count = 3u128.checked_pow(m as u32).unwrap_or(u128::MAX);
    if count > budget.max_partitions.min(10_000_000) {
        return Err(Error::BudgetExceeded(format!("3^{m} integer points")));
    }
    let vertices = enumerate_minimal_multicuts(inst, budget)?;
    let points: Vec<Vec<i64>> = (0..count as usize)
        .map(|mut idx| {
            (0..m)
                .map(|_| {
                    let d = (idx % 3) as i64;
                    idx /= 3;
                    d
                })
                .collect()
        })
        .collect();
    let results: Vec<Result<Option<IntegerPointDiscrepancy>>> = points
        .into_par_iter()
        .map(|pt| {
            let x: Vec<Rational> = pt.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect();
            let sat = candidates.iter().all(|c| crate::arith::dot_i64(&c.coeffs, &x) >= Rational::from_integer(BigInt::from(c.rhs)));
            let member = in_dominant(&vertices, &x)?;
            Ok((sat != member).then_some(IntegerPointDiscrepancy {
                point: pt,
                satisfies_candidate: sat,
                in_dominant: member,
            }))
        })
        .collect();
    let mut discrepancies = Vec::new();
    for r in results {
        if let Some(d) = r? {
            discrepancies.push(d);
        }
    }
    Ok(IntegerPointReport { pass: discrepancies.is_empty(), points_checked: count as usize, discrepancies })
}
