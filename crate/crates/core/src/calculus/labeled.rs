//! The labeled space `V_n`: even graphs without tadpoles on the fixed vertex set
//! `0..n`, stored as edge bitmasks. A mask stands for the wedge of its edges in
//! increasing pair order, pairs being ordered lexicographically.
//!
//! Here `∇` adds one edge in front, without the factor 2 that the bracket with
//! the tadpole produces.

use crate::error::{Error, Result};
use crate::graphcore::{LabeledGraph, Parity};
use crate::linalg::{q, GraphVector};

pub type Mask = u64;

pub fn num_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(num_pairs(n));
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

fn sign_below(mask: Mask, e: usize) -> i64 {
    if (mask & ((1u64 << e) - 1)).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `Σ_{e ∉ Γ} e ∧ Γ`.
pub fn nabla_mask(n: usize, mask: Mask) -> Vec<(Mask, i64)> {
    (0..num_pairs(n)).filter(|&e| mask & (1 << e) == 0).map(|e| (mask | (1 << e), sign_below(mask, e))).collect()
}

/// Removes the edge between the first two vertices, if present.
pub fn h_mask(mask: Mask) -> Option<(Mask, i64)> {
    (mask & 1 == 1).then_some((mask & !1, 1))
}

/// `Σ_{e ∈ Γ}` (move `e` to the front, then remove it).
pub fn htilde_mask(n: usize, mask: Mask) -> Vec<(Mask, i64)> {
    (0..num_pairs(n)).filter(|&e| mask & (1 << e) != 0).map(|e| (mask & !(1 << e), sign_below(mask, e))).collect()
}

/// Mask and sign of a labeled even graph; `None` if it has a repeated edge.
pub fn mask_of(g: &LabeledGraph) -> Result<Option<(Mask, i64)>> {
    g.validate()?;
    if g.parity != Parity::Even {
        return Err(Error::WrongParity { op: "labeled V_n", parity: g.parity });
    }
    let n = g.num_vertices;
    if num_pairs(n) > 64 {
        return Err(Error::Capacity { v: n, e: g.edges.len(), what: "V_n needs n <= 11".into() });
    }
    let mut idx = Vec::with_capacity(g.edges.len());
    for &(a, b) in &g.edges {
        if a == b {
            return Err(Error::Precondition("V_n has no tadpoles".into()));
        }
        idx.push(pair_index(n, a, b));
    }
    let mut inv = 0;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] == idx[j] {
                return Ok(None);
            }
            if idx[i] > idx[j] {
                inv += 1;
            }
        }
    }
    let mask = idx.iter().fold(0u64, |m, &e| m | (1 << e));
    Ok(Some((mask, if inv % 2 == 0 { 1 } else { -1 })))
}

pub fn mask_to_labeled(n: usize, mask: Mask) -> LabeledGraph {
    let edges = pairs(n).into_iter().enumerate().filter(|(e, _)| mask & (1 << e) != 0).map(|(_, p)| p).collect();
    LabeledGraph::new(Parity::Even, n, edges)
}

fn lift(g: &LabeledGraph, f: impl Fn(usize, Mask) -> Vec<(Mask, i64)>) -> Result<Vec<(LabeledGraph, i64)>> {
    let Some((mask, s)) = mask_of(g)? else { return Ok(Vec::new()) };
    Ok(f(g.num_vertices, mask).into_iter().map(|(m, c)| (mask_to_labeled(g.num_vertices, m), c * s)).collect())
}

/// The homotopy `h` on `V_n`.
pub fn homotopy_h(g: &LabeledGraph) -> Result<Vec<(LabeledGraph, i64)>> {
    if g.num_vertices < 2 {
        return Err(Error::Precondition("h needs at least two vertices".into()));
    }
    lift(g, |_, m| h_mask(m).into_iter().collect())
}

/// The homotopy `h̃` on `V_n`.
pub fn homotopy_htilde(g: &LabeledGraph) -> Result<Vec<(LabeledGraph, i64)>> {
    lift(g, htilde_mask)
}

/// `∇` on `V_n` (adding one edge in front, in all ways).
pub fn nabla_labeled(g: &LabeledGraph) -> Result<Vec<(LabeledGraph, i64)>> {
    lift(g, nabla_mask)
}

/// `h̃` followed by passing to isomorphism classes.
pub fn homotopy_htilde_classes(g: &LabeledGraph) -> Result<GraphVector> {
    let mut v = GraphVector::zero(Parity::Even);
    for (h, c) in homotopy_htilde(g)? {
        v.add_assign(&GraphVector::from_labeled(&h, q(c))?)?;
    }
    Ok(v)
}
