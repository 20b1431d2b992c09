//! Naive oracles written independently of the library internals.
//! They only read instances through `graph().edges()`, `pairs()` and `node_count()`.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use multicut_core::{EdgeSet, LinearInequality, MulticutInstance};
use num::{BigInt, BigRational, Integer, One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn find(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    let mut y = x;
    while p[y] != r {
        let n = p[y];
        p[y] = r;
        y = n;
    }
    r
}

/// Whether removing the edges in `mask` separates every pair.
pub fn separates(inst: &MulticutInstance, mask: u64) -> bool {
    let mut p: Vec<usize> = (0..inst.node_count()).collect();
    for (e, &(u, v)) in inst.graph().edges().iter().enumerate() {
        if mask >> e & 1 == 0 {
            let (a, b) = (find(&mut p, u), find(&mut p, v));
            p[a] = b;
        }
    }
    inst.pairs().iter().all(|&(s, t)| find(&mut p, s) != find(&mut p, t))
}

/// Every inclusion-minimal multicut, as sorted edge lists, by filtering all subsets.
pub fn naive_minimal_multicuts(inst: &MulticutInstance) -> BTreeSet<Vec<usize>> {
    let m = inst.edge_count();
    assert!(m <= 20, "subset oracle limited to 20 edges");
    let cuts: Vec<bool> = (0..1u64 << m).map(|mask| separates(inst, mask)).collect();
    (0..1u64 << m)
        .filter(|&mask| cuts[mask as usize] && (0..m).all(|e| mask >> e & 1 == 0 || !cuts[(mask & !(1 << e)) as usize]))
        .map(|mask| (0..m).filter(|&e| mask >> e & 1 == 1).collect())
        .collect()
}

/// All multicuts (not necessarily minimal) as masks.
pub fn naive_multicuts(inst: &MulticutInstance) -> Vec<u64> {
    (0..1u64 << inst.edge_count()).filter(|&m| separates(inst, m)).collect()
}

pub fn as_lists(sets: &[EdgeSet]) -> BTreeSet<Vec<usize>> {
    sets.iter().map(|s| s.to_vec()).collect()
}

pub fn value(a: &[i64], set: &[usize]) -> i64 {
    set.iter().map(|&e| a[e]).sum()
}

/// Minimum `w`-weight over multicuts, by enumeration.
pub fn naive_min_multicut(inst: &MulticutInstance, w: &[Q]) -> Q {
    naive_minimal_multicuts(inst)
        .iter()
        .map(|c| c.iter().fold(Q::zero(), |acc, &e| acc + &w[e]))
        .min()
        .expect("the full edge set separates")
}

/// Incremental echelon basis of integer vectors, by fraction-free elimination
/// with gcd reduction (exact; entries stay small at these dimensions).
#[derive(Default)]
pub struct Basis {
    rows: Vec<(usize, Vec<i128>)>,
}

fn reduce(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
}

impl Basis {
    /// Adds `v` if independent of the rows so far; returns whether it was.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        let mut v: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for (p, r) in &self.rows {
            if v[*p] != 0 {
                let (a, b) = (r[*p], v[*p]);
                for (x, y) in v.iter_mut().zip(r) {
                    *x = (*x * a).checked_sub(y * b).expect("oracle overflow");
                }
                reduce(&mut v);
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => false,
            Some(p) => {
                self.rows.push((p, v));
                true
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Affine rank (dimension + 1) of integer points; 0 for none.
pub fn affine_rank(points: &[Vec<i64>]) -> usize {
    let Some(first) = points.first() else { return 0 };
    let mut b = Basis::default();
    for p in &points[1..] {
        b.insert(&p.iter().zip(first).map(|(x, y)| x - y).collect::<Vec<_>>());
        if b.rank() == first.len() {
            break;
        }
    }
    b.rank() + 1
}

pub fn incidence(m: usize, set: &[usize]) -> Vec<i64> {
    let mut v = vec![0; m];
    for &e in set {
        v[e] = 1;
    }
    v
}

/// Every point of `{0,1,2}^E` whose support is a multicut, i.e. every integer
/// point of the dominant in that box.
pub fn dominant_box_points(inst: &MulticutInstance) -> Vec<Vec<i64>> {
    let m = inst.edge_count();
    let cuts: Vec<bool> = (0..1u64 << m).map(|mask| separates(inst, mask)).collect();
    let mut out = Vec::new();
    for idx in 0..3usize.pow(m as u32) {
        let mut x = vec![0i64; m];
        let mut r = idx;
        let mut support = 0u64;
        for (e, xe) in x.iter_mut().enumerate() {
            *xe = (r % 3) as i64;
            r /= 3;
            if *xe > 0 {
                support |= 1 << e;
            }
        }
        if cuts[support as usize] {
            out.push(x);
        }
    }
    out
}

/// Dimension of the face `a·x = b` spanned by the given dominant points.
/// `None` if some point violates the inequality.
pub fn face_dim_over(points: &[Vec<i64>], ineq: &LinearInequality) -> Option<i64> {
    let mut tight = Vec::new();
    for x in points {
        let lhs: i64 = ineq.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        if lhs < ineq.rhs {
            return None;
        }
        if lhs == ineq.rhs {
            tight.push(x.clone());
        }
    }
    Some(affine_rank(&tight) as i64 - 1)
}

pub fn naive_face_dim(inst: &MulticutInstance, ineq: &LinearInequality) -> Option<i64> {
    face_dim_over(&dominant_box_points(inst), ineq)
}

/// Face dimension from the tight minimal multicuts plus the unit directions of
/// zero coefficients at one tight vertex.
pub fn face_dim_from_vertices(m: usize, vertices: &BTreeSet<Vec<usize>>, ineq: &LinearInequality) -> i64 {
    let tight: Vec<Vec<i64>> = vertices
        .iter()
        .filter(|c| value(&ineq.coeffs, c) == ineq.rhs)
        .map(|c| incidence(m, c))
        .collect();
    let Some(t0) = tight.first().cloned() else { return -1 };
    let mut pts = tight;
    for e in 0..m {
        if ineq.coeffs[e] == 0 {
            let mut p = t0.clone();
            p[e] += 1;
            pts.push(p);
        }
    }
    affine_rank(&pts) as i64 - 1
}

/// Facet of the multicut polytope itself (convex hull of all multicuts).
pub fn naive_is_shared(inst: &MulticutInstance, ineq: &LinearInequality) -> bool {
    let m = inst.edge_count();
    let all: Vec<Vec<i64>> = naive_multicuts(inst)
        .into_iter()
        .map(|mask| (0..m).map(|e| (mask >> e & 1) as i64).collect())
        .collect();
    let dim = affine_rank(&all) as i64 - 1;
    let tight: Vec<Vec<i64>> = all
        .into_iter()
        .filter(|x| x.iter().zip(&ineq.coeffs).map(|(v, a)| v * a).sum::<i64>() == ineq.rhs)
        .collect();
    affine_rank(&tight) as i64 - 1 == dim - 1
}

/// Validity against the oracle's minimal multicuts.
pub fn naive_valid(vertices: &BTreeSet<Vec<usize>>, ineq: &LinearInequality) -> bool {
    ineq.coeffs.iter().all(|&a| a >= 0) && vertices.iter().all(|c| value(&ineq.coeffs, c) >= ineq.rhs)
}

fn primitive(v: &[Q]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Null vector of an `m x (m+1)` rational matrix of rank `m`.
fn null_vector(rows: &[Vec<Q>]) -> Option<Vec<Q>> {
    let cols = rows[0].len();
    let mut a: Vec<Vec<Q>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let lead = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x /= &lead;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() != cols - 1 {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c)).expect("one free column");
    let mut v = vec![Q::zero(); cols];
    v[free] = Q::one();
    for (i, &p) in pivots.iter().enumerate() {
        v[p] = -a[i][free].clone();
    }
    Some(v)
}

fn subsets(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(n: usize, k: usize, s: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            return f(cur);
        }
        for i in s..n {
            cur.push(i);
            go(n, k, i + 1, cur, f);
            cur.pop();
        }
    }
    go(n, k, 0, &mut Vec::new(), f)
}

/// Facets `(coeffs, rhs)` of `conv(points) + cone(unit rays)` by trying every
/// `m`-subset of homogenized generators as a supporting hyperplane.
pub fn naive_facets(points: &[Vec<i64>], m: usize) -> BTreeSet<(Vec<i64>, i64)> {
    let mut gens: Vec<Vec<Q>> = points.iter().map(|p| std::iter::once(q(1)).chain(p.iter().map(|&x| q(x))).collect()).collect();
    for e in 0..m {
        let mut r = vec![q(0); m + 1];
        r[e + 1] = q(1);
        gens.push(r);
    }
    let mut out = BTreeSet::new();
    subsets(gens.len(), m, &mut |idx| {
        let rows: Vec<Vec<Q>> = idx.iter().map(|&i| gens[i].clone()).collect();
        let Some(mut h) = null_vector(&rows) else { return };
        let signs: Vec<Q> = gens.iter().map(|g| g.iter().zip(&h).fold(q(0), |acc, (x, y)| acc + x * y)).collect();
        let pos = signs.iter().any(|s| s.is_positive());
        let neg = signs.iter().any(|s| s.is_negative());
        if pos && neg {
            return;
        }
        if neg {
            h = h.into_iter().map(|x| -x).collect();
        }
        if h[1..].iter().all(|x| x.is_zero()) {
            return;
        }
        // h0 + a·x >= 0, i.e. a·x >= -h0.
        let p = primitive(&h);
        let coeffs: Vec<i64> = p[1..].iter().map(|x| i64::try_from(x).expect("small")).collect();
        let rhs = -i64::try_from(&p[0]).expect("small");
        out.insert((coeffs, rhs));
    });
    out
}

/// Simple `s`-`t` paths as sorted edge lists, by depth-first search.
pub fn naive_paths(inst: &MulticutInstance, s: usize, t: usize) -> Vec<Vec<usize>> {
    let edges = inst.graph().edges();
    let mut out = Vec::new();
    fn dfs(
        edges: &[(usize, usize)],
        u: usize,
        t: usize,
        seen: &mut Vec<bool>,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if u == t {
            let mut p = path.clone();
            p.sort();
            out.push(p);
            return;
        }
        for (e, &(a, b)) in edges.iter().enumerate() {
            let w = if a == u { b } else if b == u { a } else { continue };
            if !seen[w] {
                seen[w] = true;
                path.push(e);
                dfs(edges, w, t, seen, path, out);
                path.pop();
                seen[w] = false;
            }
        }
    }
    let mut seen = vec![false; inst.node_count()];
    seen[s] = true;
    dfs(edges, s, t, &mut seen, &mut Vec::new(), &mut out);
    out
}

/// Edge bounds (`x_e >= 1` on pair edges) and every path inequality, as `(coeffs, rhs)`.
pub fn naive_edge_path_system(inst: &MulticutInstance) -> BTreeSet<(Vec<i64>, i64)> {
    let m = inst.edge_count();
    let mut out = BTreeSet::new();
    for (e, &(u, v)) in inst.graph().edges().iter().enumerate() {
        let paired = inst.pairs().contains(&(u.min(v), u.max(v)));
        out.insert((incidence(m, &[e]), i64::from(paired)));
    }
    for &(s, t) in inst.pairs() {
        for p in naive_paths(inst, s, t) {
            out.insert((incidence(m, &p), 1));
        }
    }
    out
}

pub fn key(i: &LinearInequality) -> (Vec<i64>, i64) {
    (i.coeffs.clone(), i.rhs)
}

/// Structural properties every non-edge-bound facet must have.
#[derive(Debug, PartialEq, Eq)]
pub struct Structure {
    pub nonterminal_leaves: Vec<usize>,
    pub uncovered: Vec<usize>,
    pub unequal_degree_two: Vec<usize>,
    pub full_support: bool,
    /// No unit direction stays in the face.
    pub bounded: bool,
}

pub fn structure(inst: &MulticutInstance, ineq: &LinearInequality) -> Structure {
    let m = inst.edge_count();
    let edges = inst.graph().edges();
    let support: Vec<usize> = (0..m).filter(|&e| ineq.coeffs[e] != 0).collect();
    let mut deg: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &e in &support {
        deg.entry(edges[e].0).or_default().push(e);
        deg.entry(edges[e].1).or_default().push(e);
    }
    let terminal = |v: usize| inst.pairs().iter().any(|&(s, t)| s == v || t == v);
    let nonterminal_leaves = deg.iter().filter(|(v, es)| es.len() == 1 && !terminal(**v)).map(|(v, _)| *v).collect();
    let unequal_degree_two = deg
        .iter()
        .filter(|(v, es)| es.len() == 2 && !terminal(**v) && ineq.coeffs[es[0]] != ineq.coeffs[es[1]])
        .map(|(v, _)| *v)
        .collect();
    // Paths inside the support between pairs.
    let sub = MulticutInstance::new(
        multicut_core::Graph::new(inst.node_count(), &support.iter().map(|&e| edges[e]).collect::<Vec<_>>()).unwrap(),
        inst.pairs(),
    )
    .unwrap();
    let mut covered = BTreeSet::new();
    for &(s, t) in inst.pairs() {
        for p in naive_paths(&sub, s, t) {
            covered.extend(p.into_iter().map(|i| support[i]));
        }
    }
    let uncovered = support.iter().copied().filter(|e| !covered.contains(e)).collect();
    Structure {
        nonterminal_leaves,
        uncovered,
        unequal_degree_two,
        full_support: support.len() == m,
        bounded: ineq.coeffs.iter().all(|&a| a > 0),
    }
}

/// Subdivided star inequalities (`k >= 3`) of a tree instance, by filtering every edge subset.
pub fn naive_star_family(inst: &MulticutInstance, k: usize) -> BTreeSet<(Vec<i64>, i64)> {
    let m = inst.edge_count();
    let edges = inst.graph().edges();
    let mut out = BTreeSet::new();
    for mask in 1u64..1 << m {
        let set: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
        let Some(deg) = subtree_degrees(inst.node_count(), edges, &set) else { continue };
        let leaves: Vec<usize> = deg.iter().filter(|(_, d)| **d == 1).map(|(v, _)| *v).collect();
        let hubs = deg.values().filter(|&&d| d >= 3).count();
        if leaves.len() != k || hubs != 1 || deg.values().any(|&d| d >= 3 && d != k) {
            continue;
        }
        let nodes: BTreeSet<usize> = deg.keys().copied().collect();
        let induced: BTreeSet<(usize, usize)> =
            inst.pairs().iter().copied().filter(|(s, t)| nodes.contains(s) && nodes.contains(t)).collect();
        let on_leaves = induced.iter().all(|(s, t)| leaves.contains(s) && leaves.contains(t));
        if !on_leaves {
            continue;
        }
        let rhs = if induced.len() == k * (k - 1) / 2 {
            k as i64 - 1
        } else if k % 2 == 1 && induced.len() == k && is_cycle_on(&leaves, &induced) {
            k.div_ceil(2) as i64
        } else {
            continue;
        };
        out.insert((incidence(m, &set), rhs));
    }
    out
}

fn is_cycle_on(leaves: &[usize], pairs: &BTreeSet<(usize, usize)>) -> bool {
    let nb = |a: usize| -> Vec<usize> {
        pairs.iter().filter_map(|&(s, t)| if s == a { Some(t) } else if t == a { Some(s) } else { None }).collect()
    };
    if leaves.iter().any(|&a| nb(a).len() != 2) {
        return false;
    }
    let (mut prev, mut cur, mut steps) = (leaves[0], nb(leaves[0])[0], 1);
    while cur != leaves[0] {
        let n = nb(cur);
        let next = if n[0] == prev { n[1] } else { n[0] };
        prev = cur;
        cur = next;
        steps += 1;
    }
    steps == leaves.len()
}

/// Degrees of the nodes of `set` if it forms a tree, else `None`.
fn subtree_degrees(n: usize, edges: &[(usize, usize)], set: &[usize]) -> Option<BTreeMap<usize, usize>> {
    let mut deg: BTreeMap<usize, usize> = BTreeMap::new();
    let mut p: Vec<usize> = (0..n).collect();
    for &e in set {
        let (u, v) = edges[e];
        *deg.entry(u).or_default() += 1;
        *deg.entry(v).or_default() += 1;
        let (a, b) = (find(&mut p, u), find(&mut p, v));
        if a == b {
            return None;
        }
        p[a] = b;
    }
    (deg.len() == set.len() + 1).then_some(deg)
}

/// Subdivided `(3,2)`-tree inequalities of a tree instance, by filtering every edge subset.
pub fn naive_tree3_family(inst: &MulticutInstance) -> BTreeSet<(Vec<i64>, i64)> {
    let (l, k) = (3usize, 2usize);
    let m = inst.edge_count();
    let edges = inst.graph().edges();
    let mut out = BTreeSet::new();
    for mask in 1u64..1 << m {
        let set: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
        let Some(deg) = subtree_degrees(inst.node_count(), edges, &set) else { continue };
        let branch: Vec<usize> = deg.iter().filter(|(_, d)| **d >= 3).map(|(v, _)| *v).collect();
        let leaves: Vec<usize> = deg.iter().filter(|(_, d)| **d == 1).map(|(v, _)| *v).collect();
        if branch.len() != l + 1 || leaves.len() != l * (l - 1) || branch.iter().any(|v| deg[v] != l) {
            continue;
        }
        // Arms of a branch node: (edges walked, end node).
        let arms = |r: usize| -> Vec<(Vec<usize>, usize)> {
            let mut res = Vec::new();
            for &e in &set {
                let (a, b) = edges[e];
                if a != r && b != r {
                    continue;
                }
                let (mut prev, mut cur, mut walked) = (r, if a == r { b } else { a }, vec![e]);
                while deg[&cur] == 2 {
                    let &f = set
                        .iter()
                        .find(|&&f| !walked.contains(&f) && (edges[f].0 == cur || edges[f].1 == cur))
                        .unwrap();
                    let nxt = if edges[f].0 == cur { edges[f].1 } else { edges[f].0 };
                    walked.push(f);
                    prev = cur;
                    cur = nxt;
                }
                let _ = prev;
                res.push((walked, cur));
            }
            res
        };
        let Some(&root) = branch.iter().find(|&&r| arms(r).iter().all(|(_, end)| branch.contains(end))) else {
            continue;
        };
        let root_arms = arms(root);
        let level_one: BTreeSet<usize> = root_arms.iter().flat_map(|(w, _)| w.iter().copied()).collect();
        let mut child_of = BTreeMap::new();
        for (ci, (_, c)) in root_arms.iter().enumerate() {
            for (_, leaf) in arms(*c) {
                if deg[&leaf] != 1 {
                    continue;
                }
                child_of.insert(leaf, ci);
            }
        }
        let nodes: BTreeSet<usize> = deg.keys().copied().collect();
        let induced: Vec<(usize, usize)> =
            inst.pairs().iter().copied().filter(|(s, t)| nodes.contains(s) && nodes.contains(t)).collect();
        let mut hit = BTreeSet::new();
        let ok = induced.len() == l * (l - 1) / 2
            && induced.iter().all(|(s, t)| match (child_of.get(s), child_of.get(t)) {
                (Some(a), Some(b)) => a != b && hit.insert((*a.min(b), *a.max(b))),
                _ => false,
            });
        if !ok {
            continue;
        }
        let mut c = vec![0i64; m];
        for &e in &set {
            c[e] = if level_one.contains(&e) { (l - k) as i64 } else { 1 };
        }
        let rhs = (k * (l - k) + (l - k) * (l - k - 1) / 2) as i64;
        out.insert((c, rhs));
    }
    out
}
