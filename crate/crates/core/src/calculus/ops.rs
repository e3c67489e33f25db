use std::collections::HashMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::insert::{accumulate, bracket_graphs, insert_raw, prelie_graphs, Part};
use crate::error::{Error, Result};
use crate::graphcore::{canonicalize_raw, CanonicalGraph, GradedBasis, LabeledGraph, Parity};
use crate::linalg::{matrix_of_int, q, GraphVector, Rational, SparseMatrix};

/// Named linear operators on the graph spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorTag {
    Delta,
    Nabla,
    DeltaPlusNabla,
    DualContract,
    DualDeleteEdge,
    BracketWithTheta,
}

impl OperatorTag {
    /// Change in `(v, e)`.
    pub fn shift(self) -> (i64, i64) {
        match self {
            OperatorTag::Delta => (1, 1),
            OperatorTag::Nabla => (0, 1),
            OperatorTag::DeltaPlusNabla => (1, 1),
            OperatorTag::DualContract => (-1, -1),
            OperatorTag::DualDeleteEdge => (0, -1),
            OperatorTag::BracketWithTheta => (1, 3),
        }
    }
}

fn single(parity: Parity, n: usize, edges: &[(u8, u8)]) -> CanonicalGraph {
    canonicalize_raw(parity, n, edges, &[]).expect("nonzero generator").0
}

/// The single vertex.
pub fn point(parity: Parity) -> CanonicalGraph {
    single(parity, 1, &[])
}

/// The single edge `m`, the Maurer-Cartan element defining `δ`.
pub fn edge_graph(parity: Parity) -> CanonicalGraph {
    single(parity, 2, &[(0, 1)])
}

/// One vertex with one tadpole (even parity only).
pub fn tadpole_graph() -> CanonicalGraph {
    single(Parity::Even, 1, &[(0, 0)])
}

/// Two vertices joined by `k` parallel edges; `None` if that class vanishes.
pub fn multi_edge(parity: Parity, k: usize) -> Option<CanonicalGraph> {
    canonicalize_raw(parity, 2, &vec![(0, 1); k], &[]).map(|x| x.0)
}

/// The Θ graph: two vertices, three parallel edges (odd parity).
pub fn theta() -> CanonicalGraph {
    multi_edge(Parity::Odd, 3).unwrap()
}

/// The loop graph `L_k`, `None` when it vanishes.
pub fn loop_graph(parity: Parity, k: usize) -> Option<CanonicalGraph> {
    let edges: Vec<(u8, u8)> = (0..k).map(|i| (i as u8, ((i + 1) % k) as u8)).collect();
    canonicalize_raw(parity, k, &edges, &[]).map(|x| x.0)
}

fn to_vector(parity: Parity, acc: HashMap<CanonicalGraph, i64>, scale: &Rational) -> GraphVector {
    let mut v = GraphVector::zero(parity);
    for (g, c) in acc {
        if c != 0 {
            v.add_term(g, scale * q(c)).unwrap();
        }
    }
    v
}

fn check_parity(a: &GraphVector, b: &GraphVector) -> Result<()> {
    if a.parity() != b.parity() && !a.is_zero() && !b.is_zero() {
        return Err(Error::ParityMismatch { expected: a.parity(), found: b.parity() });
    }
    Ok(())
}

/// Insert `guest` at vertex `vertex` (0-based) of `host`, reconnecting in all ways.
pub fn insert(host: &CanonicalGraph, guest: &CanonicalGraph, vertex: usize) -> Result<GraphVector> {
    if host.parity() != guest.parity() {
        return Err(Error::ParityMismatch { expected: host.parity(), found: guest.parity() });
    }
    if vertex >= host.num_vertices() {
        return Err(Error::VertexOutOfRange { index: vertex, num_vertices: host.num_vertices() });
    }
    let mut terms = Vec::new();
    insert_raw(host.parity(), Part::of(host), Part::of(guest), vertex, &mut terms);
    let mut acc = HashMap::new();
    accumulate(host.parity(), &terms, 1, &mut acc);
    Ok(to_vector(host.parity(), acc, &q(1)))
}

fn bilinear(
    a: &GraphVector,
    b: &GraphVector,
    f: impl Fn(&CanonicalGraph, &CanonicalGraph) -> HashMap<CanonicalGraph, i64> + Sync,
) -> Result<GraphVector> {
    check_parity(a, b)?;
    let parity = a.parity();
    let pairs: Vec<(&CanonicalGraph, &Rational, &CanonicalGraph, &Rational)> =
        a.iter().flat_map(|(g, c)| b.iter().map(move |(h, d)| (g, c, h, d))).collect();
    let parts: Vec<Vec<(CanonicalGraph, Rational)>> = pairs
        .par_iter()
        .map(|(g, c, h, d)| {
            let s = *c * *d;
            f(g, h).into_iter().filter(|x| x.1 != 0).map(|(k, x)| (k, &s * q(x))).collect()
        })
        .collect();
    let mut out = GraphVector::zero(parity);
    for part in parts {
        for (g, c) in part {
            out.add_term(g, c)?;
        }
    }
    Ok(out)
}

/// The pre-Lie product `a • b = Σ_x a ∘_x b`.
pub fn prelie(a: &GraphVector, b: &GraphVector) -> Result<GraphVector> {
    bilinear(a, b, |g, h| {
        let mut acc = HashMap::new();
        prelie_graphs(g, h, &mut acc, 1);
        acc
    })
}

/// The Lie bracket `[a, b] = a • b - (-1)^{|a||b|} b • a`, termwise in degree.
pub fn bracket(a: &GraphVector, b: &GraphVector) -> Result<GraphVector> {
    bilinear(a, b, bracket_graphs)
}

/// `δ Γ = [m, Γ]` on one basis graph, integer coefficients.
pub fn delta_graph(g: &CanonicalGraph) -> Vec<(CanonicalGraph, i64)> {
    bracket_graphs(&edge_graph(g.parity()), g).into_iter().collect()
}

/// `∇ Γ = [tadpole, Γ]` on one basis graph (even parity).
pub fn nabla_graph(g: &CanonicalGraph) -> Vec<(CanonicalGraph, i64)> {
    let had_tadpole = g.has_tadpole();
    bracket_graphs(&tadpole_graph(), g).into_iter().filter(|(h, _)| had_tadpole || !h.has_tadpole()).collect()
}

/// `[Θ, Γ]` on one basis graph (odd parity).
pub fn bracket_theta_graph(g: &CanonicalGraph) -> Vec<(CanonicalGraph, i64)> {
    bracket_graphs(&theta(), g).into_iter().collect()
}

/// Sum over non-tadpole edges of the contraction of that edge.
pub fn dual_contract_graph(g: &CanonicalGraph) -> Vec<(CanonicalGraph, i64)> {
    let parity = g.parity();
    let n = g.num_vertices();
    let edges = g.edges();
    let mut acc: HashMap<CanonicalGraph, i64> = HashMap::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        if a == b {
            continue;
        }
        let (new_edges, sign) = match parity {
            Parity::Even => {
                let (lo, hi) = (a.min(b), a.max(b));
                let map = |x: u8| {
                    if x == hi {
                        lo
                    } else if x > hi {
                        x - 1
                    } else {
                        x
                    }
                };
                let rest: Vec<(u8, u8)> =
                    edges.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &(s, t))| (map(s), map(t))).collect();
                (rest, if i % 2 == 0 { 1 } else { -1 })
            }
            Parity::Odd => {
                // relabel tail -> 0, head -> 1, the rest in order; then merge 1 into 0
                let mut perm = vec![0u8; n];
                perm[a as usize] = 0;
                perm[b as usize] = 1;
                let mut next = 2u8;
                for v in 0..n {
                    if v != a as usize && v != b as usize {
                        perm[v] = next;
                        next += 1;
                    }
                }
                let sign = crate::graphcore::canon::perm_sign(&perm) as i64;
                let map = |x: u8| {
                    let y = perm[x as usize];
                    if y == 0 || y == 1 {
                        0
                    } else {
                        y - 1
                    }
                };
                let rest: Vec<(u8, u8)> =
                    edges.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &(s, t))| (map(s), map(t))).collect();
                (rest, sign)
            }
        };
        if let Some((h, s)) = canonicalize_raw(parity, n - 1, &new_edges, &[]) {
            *acc.entry(h).or_insert(0) += sign * s as i64;
        }
    }
    acc.into_iter().filter(|x| x.1 != 0).collect()
}

/// Sum over edges of the deletion of that edge (even parity).
pub fn dual_delete_graph(g: &CanonicalGraph) -> Vec<(CanonicalGraph, i64)> {
    let n = g.num_vertices();
    let edges = g.edges();
    let mut acc: HashMap<CanonicalGraph, i64> = HashMap::new();
    for i in 0..edges.len() {
        let rest: Vec<(u8, u8)> = edges.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &e)| e).collect();
        if let Some((h, s)) = canonicalize_raw(Parity::Even, n, &rest, &[]) {
            *acc.entry(h).or_insert(0) += if i % 2 == 0 { 1 } else { -1 } * s as i64;
        }
    }
    acc.into_iter().filter(|x| x.1 != 0).collect()
}

/// Apply a tagged operator to one basis graph.
pub fn apply_graph(tag: OperatorTag, g: &CanonicalGraph) -> Result<Vec<(CanonicalGraph, i64)>> {
    let parity = g.parity();
    match tag {
        OperatorTag::Delta => Ok(delta_graph(g)),
        OperatorTag::Nabla | OperatorTag::DualDeleteEdge if parity == Parity::Odd => {
            Err(Error::WrongParity { op: if tag == OperatorTag::Nabla { "nabla" } else { "edge deletion" }, parity })
        }
        OperatorTag::BracketWithTheta if parity == Parity::Even => Err(Error::WrongParity { op: "[Θ, ·]", parity }),
        OperatorTag::Nabla => Ok(nabla_graph(g)),
        OperatorTag::DeltaPlusNabla => {
            let mut acc: HashMap<CanonicalGraph, i64> = HashMap::new();
            for (h, c) in delta_graph(g).into_iter().chain(nabla_graph(g)) {
                *acc.entry(h).or_insert(0) += c;
            }
            Ok(acc.into_iter().filter(|x| x.1 != 0).collect())
        }
        OperatorTag::DualContract => Ok(dual_contract_graph(g)),
        OperatorTag::DualDeleteEdge => Ok(dual_delete_graph(g)),
        OperatorTag::BracketWithTheta => Ok(bracket_theta_graph(g)),
    }
}

/// Apply a tagged operator to a vector.
pub fn apply(tag: OperatorTag, a: &GraphVector) -> Result<GraphVector> {
    let terms: Vec<(&CanonicalGraph, &Rational)> = a.iter().collect();
    let parts: Vec<Result<Vec<(CanonicalGraph, Rational)>>> = terms
        .par_iter()
        .map(|(g, c)| Ok(apply_graph(tag, g)?.into_iter().map(|(h, x)| (h, *c * q(x))).collect()))
        .collect();
    let mut out = GraphVector::zero(a.parity());
    for p in parts {
        for (g, c) in p? {
            out.add_term(g, c)?;
        }
    }
    Ok(out)
}

pub fn delta(a: &GraphVector) -> Result<GraphVector> {
    apply(OperatorTag::Delta, a)
}

/// `∇`; an error on odd parity input.
pub fn nabla(a: &GraphVector) -> Result<GraphVector> {
    if a.parity() == Parity::Odd {
        return Err(Error::WrongParity { op: "nabla", parity: Parity::Odd });
    }
    apply(OperatorTag::Nabla, a)
}

pub fn dual_contract(a: &GraphVector) -> Result<GraphVector> {
    apply(OperatorTag::DualContract, a)
}

pub fn dual_delete_edge(a: &GraphVector) -> Result<GraphVector> {
    if a.parity() == Parity::Odd {
        return Err(Error::WrongParity { op: "edge deletion", parity: Parity::Odd });
    }
    apply(OperatorTag::DualDeleteEdge, a)
}

/// Matrix of a tagged operator between two cells.
pub fn operator_matrix(tag: OperatorTag, domain: &GradedBasis, codomain: &GradedBasis) -> Result<SparseMatrix> {
    if let Some(g) = domain.graphs().first() {
        apply_graph(tag, g)?;
    }
    matrix_of_int(|g| apply_graph(tag, g).unwrap(), domain, codomain)
}

/// Evaluate a labeled graph as a vector (canonicalized with its sign).
pub fn labeled_to_vector(g: &LabeledGraph) -> Result<GraphVector> {
    GraphVector::from_labeled(g, q(1))
}

/// True when every coefficient is zero; convenience for identity checks.
pub fn is_zero(v: &GraphVector) -> bool {
    v.iter().all(|(_, c)| c.is_zero())
}
