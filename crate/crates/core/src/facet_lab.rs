//! Exact verification of inequalities against the multicut dominant.
//!
//! Every check reduces to the minimal multicuts (the vertices) and the unit
//! edge directions (the rays). A face of the dominant is the convex hull of its
//! tight vertices plus the cone of the unit rays `e` with `a_e = 0`.

use num::{BigInt, Zero};
use serde::Serialize;

use crate::arith::{rank, Rational};
use crate::budget::Budget;
use crate::edgeset::EdgeSet;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeId};
use crate::inequality::LinearInequality;
use crate::instance::MulticutInstance;
use crate::multicut::enumerate_minimal_multicuts;

/// Dimension of the affine hull of a point set (`n` points in general position give `n - 1`).
pub fn affine_rank(vectors: &[Vec<Rational>]) -> Result<usize> {
    let first = vectors.first().ok_or(Error::Empty)?;
    let dim = first.len();
    if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
    }
    let diffs: Vec<Vec<Rational>> = vectors[1..]
        .iter()
        .map(|v| v.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    Ok(rank(&diffs))
}

/// Affine dimension of `points ∪ {points[0] + e : e in ray_edges}`.
fn face_rank(points: &[EdgeSet], ray_edges: &[EdgeId]) -> i64 {
    let Some(t0) = points.first() else { return -1 };
    let base = t0.incidence();
    let mut rows: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.incidence().iter().zip(&base).map(|(a, b)| a - b).collect())
        .collect();
    for &e in ray_edges {
        let mut r = vec![Rational::zero(); base.len()];
        r[e] = Rational::from_integer(BigInt::from(1));
        rows.push(r);
    }
    rank(&rows) as i64
}

/// Re-checkable witness for a face dimension: tight vertices and the ray
/// directions added at the first of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceCertificate {
    pub tight_vertices: Vec<Vec<EdgeId>>,
    pub ray_edges: Vec<EdgeId>,
}

impl FaceCertificate {
    /// Recomputes the dimension from scratch, checking that every listed
    /// vertex is tight and every ray has a zero coefficient.
    pub fn verify(&self, inst: &MulticutInstance, ineq: &LinearInequality) -> Result<i64> {
        let m = inst.edge_count();
        let sets: Vec<EdgeSet> = self
            .tight_vertices
            .iter()
            .map(|v| EdgeSet::from_indices(m, v.iter().copied()))
            .collect();
        if sets.iter().any(|s| ineq.evaluate_set(s) != ineq.rhs)
            || self.ray_edges.iter().any(|&e| ineq.coeffs[e] != 0)
        {
            return Err(Error::NotValid);
        }
        Ok(face_rank(&sets, &self.ray_edges))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FacetReport {
    pub valid: bool,
    pub counterexample: Option<Vec<EdgeId>>,
    pub tight_vertices: Vec<Vec<EdgeId>>,
    pub face_dim: i64,
    pub is_facet: bool,
    pub is_shared: Option<bool>,
    pub bounded: bool,
    pub certificate: Option<FaceCertificate>,
}

/// Cached minimal multicuts of one instance; all checks run against the cache.
#[derive(Debug, Clone)]
pub struct FacetLab<'a> {
    inst: &'a MulticutInstance,
    vertices: Vec<EdgeSet>,
}

impl<'a> FacetLab<'a> {
    pub fn new(inst: &'a MulticutInstance, budget: &Budget) -> Result<Self> {
        Ok(FacetLab { inst, vertices: enumerate_minimal_multicuts(inst, budget)? })
    }

    /// Uses a precomputed vertex list (must be exactly the minimal multicuts).
    pub fn with_vertices(inst: &'a MulticutInstance, vertices: Vec<EdgeSet>) -> Self {
        FacetLab { inst, vertices }
    }

    pub fn instance(&self) -> &MulticutInstance {
        self.inst
    }

    pub fn vertices(&self) -> &[EdgeSet] {
        &self.vertices
    }

    fn check_dim(&self, ineq: &LinearInequality) -> Result<()> {
        let m = self.inst.edge_count();
        if ineq.dim() != m {
            return Err(Error::DimensionMismatch { expected: m, got: ineq.dim() });
        }
        Ok(())
    }

    /// `Ok(None)` when valid; otherwise a violating minimal multicut, or `None`
    /// inside `Some` when the violation is a negative coefficient (a ray).
    pub fn validity(&self, ineq: &LinearInequality) -> Result<Option<Option<EdgeSet>>> {
        self.check_dim(ineq)?;
        if !ineq.is_nonnegative() {
            return Ok(Some(None));
        }
        Ok(self.vertices.iter().find(|v| ineq.evaluate_set(v) < ineq.rhs).map(|v| Some(v.clone())))
    }

    pub fn is_valid(&self, ineq: &LinearInequality) -> Result<bool> {
        Ok(self.validity(ineq)?.is_none())
    }

    pub fn tight_vertices(&self, ineq: &LinearInequality) -> Vec<EdgeSet> {
        self.vertices.iter().filter(|v| ineq.evaluate_set(v) == ineq.rhs).cloned().collect()
    }

    fn zero_edges(ineq: &LinearInequality) -> Vec<EdgeId> {
        (0..ineq.dim()).filter(|&e| ineq.coeffs[e] == 0).collect()
    }

    pub fn certificate(&self, ineq: &LinearInequality) -> FaceCertificate {
        FaceCertificate {
            tight_vertices: self.tight_vertices(ineq).iter().map(|v| v.to_vec()).collect(),
            ray_edges: Self::zero_edges(ineq),
        }
    }

    /// Dimension of the face `{a·x = b}`; `-1` when no vertex is tight.
    pub fn face_dimension(&self, ineq: &LinearInequality) -> Result<i64> {
        if !self.is_valid(ineq)? {
            return Err(Error::NotValid);
        }
        Ok(face_rank(&self.tight_vertices(ineq), &Self::zero_edges(ineq)))
    }

    pub fn is_facet(&self, ineq: &LinearInequality) -> Result<bool> {
        if !self.is_valid(ineq)? {
            return Ok(false);
        }
        Ok(self.face_dimension(ineq)? == self.inst.edge_count() as i64 - 1)
    }

    /// Facet of the dominant that is also a facet of the multicut polytope:
    /// `|E|` affinely independent tight multicut vectors exist.
    pub fn is_shared_facet(&self, ineq: &LinearInequality) -> Result<bool> {
        if !self.is_facet(ineq)? {
            return Ok(false);
        }
        let m = self.inst.edge_count();
        let zero = Self::zero_edges(ineq);
        if zero.is_empty() {
            return Ok(true);
        }
        let mut points = self.tight_vertices(ineq);
        let extra: Vec<EdgeSet> = points
            .iter()
            .flat_map(|d| zero.iter().filter(|&&e| !d.contains(e)).map(move |&e| d.with(e)))
            .collect();
        points.extend(extra);
        points.sort();
        points.dedup();
        Ok(face_rank(&points, &[]) == m as i64 - 1)
    }

    pub fn report(&self, ineq: &LinearInequality, shared: bool) -> Result<FacetReport> {
        let validity = self.validity(ineq)?;
        let valid = validity.is_none();
        let counterexample = validity.flatten().map(|v| v.to_vec());
        let tight: Vec<Vec<EdgeId>> =
            self.tight_vertices(ineq).iter().map(|v| v.to_vec()).collect();
        let (face_dim, certificate) = if valid {
            (self.face_dimension(ineq)?, Some(self.certificate(ineq)))
        } else {
            (-1, None)
        };
        let is_facet = valid && face_dim == self.inst.edge_count() as i64 - 1;
        let is_shared = if shared { Some(self.is_shared_facet(ineq)?) } else { None };
        Ok(FacetReport {
            valid,
            counterexample,
            tight_vertices: tight,
            face_dim,
            is_facet,
            is_shared,
            bounded: ineq.coeffs.iter().all(|&c| c != 0),
            certificate,
        })
    }

    /// Structural necessary conditions for facets other than `x_e >= 0`.
    pub fn structural_checks(&self, ineq: &LinearInequality) -> Result<StructuralReport> {
        if !self.is_facet(ineq)? {
            return Err(Error::NotAFacet);
        }
        if ineq.is_edge_bound().is_some() {
            return Ok(StructuralReport::edge_bound());
        }
        let inst = self.inst;
        let g = inst.graph();
        let support = ineq.support();

        let mut uncovered = Vec::new();
        for e in support.iter() {
            let covered = inst.pairs().iter().any(|&(s, t)| {
                g.simple_paths_within(s, t, &|f| support.contains(f)).iter().any(|p| p.contains(&e))
            });
            if !covered {
                uncovered.push(e);
            }
        }

        let mut support_degree = vec![0usize; g.node_count()];
        for e in support.iter() {
            let (u, v) = g.edges()[e];
            support_degree[u] += 1;
            support_degree[v] += 1;
        }
        let nonterminal_leaves: Vec<NodeId> = (0..g.node_count())
            .filter(|&v| support_degree[v] == 1 && !inst.is_terminal(v))
            .collect();

        let mut unequal_induced = Vec::new();
        for v in 0..g.node_count() {
            if g.degree(v) == 2 && !inst.is_terminal(v) {
                let inc = g.incident_edges(v);
                if ineq.coeffs[inc[0]] != ineq.coeffs[inc[1]] {
                    unequal_induced.push(v);
                }
            }
        }

        // Recession directions of the face are the zero-coefficient unit rays.
        let face_rays = FacetLab::zero_edges(ineq);
        let bounded = face_rays.is_empty();
        let full_support = support.len() == inst.edge_count();

        Ok(StructuralReport {
            edge_bound: false,
            uncovered_support_edges: uncovered,
            nonterminal_leaves,
            unequal_induced_nodes: unequal_induced,
            bounded,
            full_support,
        })
    }

    /// For a facet other than `x_f >= 0`, every support edge lies in some tight multicut.
    pub fn support_edges_without_tight_multicut(&self, ineq: &LinearInequality) -> Vec<EdgeId> {
        let tight = self.tight_vertices(ineq);
        ineq.support().iter().filter(|&f| !tight.iter().any(|d| d.contains(f))).collect()
    }
}

/// Outcome of the structural facet predicates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructuralReport {
    /// `x_e >= 0` facets are exempt from the checks below.
    pub edge_bound: bool,
    /// Support edges on no `s`-`t` path inside the support.
    pub uncovered_support_edges: Vec<EdgeId>,
    /// Leaves of the support graph that are not terminals.
    pub nonterminal_leaves: Vec<NodeId>,
    /// Non-terminal degree-2 nodes whose two edges carry different coefficients.
    pub unequal_induced_nodes: Vec<NodeId>,
    pub bounded: bool,
    pub full_support: bool,
}

impl StructuralReport {
    fn edge_bound() -> Self {
        StructuralReport {
            edge_bound: true,
            uncovered_support_edges: vec![],
            nonterminal_leaves: vec![],
            unequal_induced_nodes: vec![],
            bounded: false,
            full_support: false,
        }
    }

    pub fn passes(&self) -> bool {
        self.uncovered_support_edges.is_empty()
            && self.nonterminal_leaves.is_empty()
            && self.unequal_induced_nodes.is_empty()
            && self.bounded == self.full_support
    }
}

pub fn is_valid(inst: &MulticutInstance, ineq: &LinearInequality) -> Result<bool> {
    FacetLab::new(inst, &Budget::default())?.is_valid(ineq)
}

pub fn face_dimension(inst: &MulticutInstance, ineq: &LinearInequality) -> Result<i64> {
    FacetLab::new(inst, &Budget::default())?.face_dimension(ineq)
}

pub fn is_facet(inst: &MulticutInstance, ineq: &LinearInequality) -> Result<bool> {
    FacetLab::new(inst, &Budget::default())?.is_facet(ineq)
}

pub fn is_shared_facet(inst: &MulticutInstance, ineq: &LinearInequality) -> Result<bool> {
    FacetLab::new(inst, &Budget::default())?.is_shared_facet(ineq)
}

pub fn structural_checks(inst: &MulticutInstance, ineq: &LinearInequality) -> Result<StructuralReport> {
    FacetLab::new(inst, &Budget::default())?.structural_checks(ineq)
}
