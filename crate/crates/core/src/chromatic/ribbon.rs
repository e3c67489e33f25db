use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::{CanonicalGraph, LabeledGraph, Parity};
use crate::linalg::{q, GraphVector, Rational};

/// A trivalent graph with a cyclic order of the three half-edges at every
/// vertex. Edge `k` runs between `edges[k].0` and `edges[k].1`; its half-edges
/// are `2k` at the first end and `2k + 1` at the second.
///
/// The element agrees with the odd graph on the same labels (vertex order,
/// edges directed first to second end) up to the sign of the permutation that
/// lists half-edges vertex by vertex in rotation order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RibbonGraph {
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub rotation: Vec<[usize; 3]>,
}

fn perm_sign(p: &[usize]) -> i64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

impl RibbonGraph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>, rotation: Vec<[usize; 3]>) -> Result<Self> {
        let g = RibbonGraph { num_vertices, edges, rotation };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if self.rotation.len() != self.num_vertices {
            return Err(Error::Precondition("one rotation per vertex".into()));
        }
        let mut at = vec![usize::MAX; 2 * self.edges.len()];
        for (v, rot) in self.rotation.iter().enumerate() {
            for &h in rot {
                if h >= at.len() || at[h] != usize::MAX {
                    return Err(Error::Precondition(format!("half-edge {h} is missing or repeated")));
                }
                at[h] = v;
            }
        }
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            if a == b {
                return Err(Error::Precondition("tadpoles have no ribbon presentation here".into()));
            }
            if at[2 * k] != a || at[2 * k + 1] != b {
                return Err(Error::Precondition(format!("rotation does not match edge {k}")));
            }
        }
        Ok(())
    }

    /// Rotations listing half-edges in increasing order, for a trivalent labeled graph.
    pub fn from_labeled(g: &LabeledGraph) -> Result<Self> {
        let mut rot: Vec<Vec<usize>> = vec![Vec::new(); g.num_vertices];
        for (k, &(a, b)) in g.edges.iter().enumerate() {
            rot[a].push(2 * k);
            rot[b].push(2 * k + 1);
        }
        if let Some(v) = rot.iter().position(|r| r.len() != 3) {
            return Err(Error::Precondition(format!("vertex {v} has valence {}, not 3", rot[v].len())));
        }
        Self::new(g.num_vertices, g.edges.clone(), rot.into_iter().map(|r| [r[0], r[1], r[2]]).collect())
    }

    /// Builds rotations from cyclic orders of neighbouring vertices (simple graphs only).
    pub fn from_neighbour_orders(edges: Vec<(usize, usize)>, orders: &[[usize; 3]]) -> Result<Self> {
        let half = |v: usize, w: usize| -> Result<usize> {
            let hits: Vec<usize> = edges
                .iter()
                .enumerate()
                .filter_map(|(k, &(a, b))| match (a == v && b == w, b == v && a == w) {
                    (true, _) => Some(2 * k),
                    (_, true) => Some(2 * k + 1),
                    _ => None,
                })
                .collect();
            match hits.as_slice() {
                [h] => Ok(*h),
                _ => Err(Error::Precondition(format!("need exactly one edge between {v} and {w}"))),
            }
        };
        let mut rotation = Vec::new();
        for (v, o) in orders.iter().enumerate() {
            rotation.push([half(v, o[0])?, half(v, o[1])?, half(v, o[2])?]);
        }
        Self::new(orders.len(), edges, rotation)
    }

    pub fn labeled(&self) -> LabeledGraph {
        LabeledGraph::new(Parity::Odd, self.num_vertices, self.edges.clone())
    }

    /// `ε` with `self = ε · (odd graph on the same labels)`.
    pub fn odd_sign(&self) -> i64 {
        let seq: Vec<usize> = self.rotation.iter().flatten().copied().collect();
        perm_sign(&seq)
    }

    pub fn to_odd(&self) -> Result<GraphVector> {
        GraphVector::from_labeled(&self.labeled(), q(self.odd_sign()))
    }

    /// Reverses the cyclic order at `v`.
    pub fn flip(&self, v: usize) -> RibbonGraph {
        let mut g = self.clone();
        g.rotation[v].swap(1, 2);
        g
    }

    /// Every proper 3-edge-colouring, colours `0, 1, 2`.
    pub fn colorings(&self) -> Vec<Vec<u8>> {
        let e = self.edges.len();
        let mut used = vec![[false; 3]; self.num_vertices];
        let mut cur = vec![0u8; e];
        let mut out = Vec::new();
        fn rec(g: &RibbonGraph, k: usize, used: &mut [[bool; 3]], cur: &mut [u8], out: &mut Vec<Vec<u8>>) {
            if k == g.edges.len() {
                out.push(cur.to_vec());
                return;
            }
            let (a, b) = g.edges[k];
            for c in 0..3u8 {
                if used[a][c as usize] || used[b][c as usize] {
                    continue;
                }
                used[a][c as usize] = true;
                used[b][c as usize] = true;
                cur[k] = c;
                rec(g, k + 1, used, cur, out);
                used[a][c as usize] = false;
                used[b][c as usize] = false;
            }
        }
        rec(self, 0, &mut used, &mut cur, &mut out);
        out
    }

    /// `f(C) = Π_v f(v)`, with `f(v) = 1` when the colours read in rotation
    /// order are a cyclic shift of `0, 1, 2`.
    pub fn coloring_sign(&self, c: &[u8]) -> i64 {
        self.rotation
            .iter()
            .map(|r| {
                let x = [c[r[0] / 2], c[r[1] / 2], c[r[2] / 2]];
                if matches!(x, [0, 1, 2] | [1, 2, 0] | [2, 0, 1]) {
                    1
                } else {
                    -1
                }
            })
            .product()
    }

    pub fn f_invariant(&self) -> ColoringValue {
        let cs = self.colorings();
        let total: i64 = cs.iter().map(|c| self.coloring_sign(c)).sum();
        ColoringValue::new(q(total), cs.len())
    }
}

/// Value of `f`: the sum over all colourings, and the same sum with colourings
/// taken up to permutation of the colours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringValue {
    pub total: Rational,
    pub colorings: usize,
    pub per_class: Rational,
}

impl ColoringValue {
    fn new(total: Rational, colorings: usize) -> Self {
        let per_class = &total / q(6);
        ColoringValue { total, colorings, per_class }
    }

    pub fn is_zero(&self) -> bool {
        self.total.is_zero()
    }
}

/// `f` extended linearly.
pub fn f_ribbon_vector(terms: &[(RibbonGraph, Rational)]) -> ColoringValue {
    let mut total = Rational::zero();
    let mut n = 0;
    for (g, c) in terms {
        let v = g.f_invariant();
        total += c * &v.total;
        n += v.colorings;
    }
    ColoringValue::new(total, n)
}

fn check_odd(v: &GraphVector) -> Result<()> {
    if v.parity() != Parity::Odd {
        return Err(Error::ParityMismatch { expected: Parity::Odd, found: v.parity() });
    }
    Ok(())
}

/// The ribbon description of a trivalent odd graph vector.
pub fn to_ribbon(v: &GraphVector) -> Result<Vec<(RibbonGraph, Rational)>> {
    check_odd(v)?;
    v.sorted_terms()
        .into_iter()
        .map(|(g, c)| {
            let r = RibbonGraph::from_labeled(&g.to_labeled())?;
            let s = q(r.odd_sign());
            Ok((r, c * s))
        })
        .collect()
}

pub fn is_trivalent(g: &CanonicalGraph) -> bool {
    g.valences().iter().all(|&k| k == 3)
}

/// `f` of an odd graph vector; every term must be trivalent.
pub fn f_odd(v: &GraphVector) -> Result<ColoringValue> {
    Ok(f_ribbon_vector(&to_ribbon(v)?))
}

/// `f(δΓ)` for an odd graph with one 4-valent vertex and all others trivalent.
/// Graphs of `δΓ` with a bivalent vertex carry no colouring and count zero.
pub fn f_coboundary_check(g: &CanonicalGraph) -> Result<ColoringValue> {
    if g.parity() != Parity::Odd {
        return Err(Error::ParityMismatch { expected: Parity::Odd, found: g.parity() });
    }
    let val = g.valences();
    let fours = val.iter().filter(|&&k| k == 4).count();
    if fours != 1 || val.iter().any(|&k| k != 3 && k != 4) {
        return Err(Error::Precondition(format!("valences {val:?}: need one 4-valent vertex, the rest trivalent")));
    }
    let d = crate::calculus::delta(&GraphVector::from_graph(g.clone()))?;
    f_odd(&d.filter(is_trivalent))
}
