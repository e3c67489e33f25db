//! The odd Maurer-Cartan element `m` and the twisted differential `δ + [m, ·]`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::calculus::{bracket, delta, multi_edge};
use crate::error::{Error, Result};
use crate::graphcore::{CanonicalGraph, Parity};
use crate::linalg::{factorial, q, GraphVector, Rational};

/// Where an infinite series in the edge count is cut off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncationLevel {
    /// Largest total number of edges (solid plus dotted) of any emitted graph.
    pub max_edges: usize,
    /// Largest multi-edge taken from a series such as `m`.
    pub max_multiplicity: usize,
}

impl TruncationLevel {
    pub fn new(max_edges: usize, max_multiplicity: usize) -> Result<Self> {
        if max_edges == 0 || max_multiplicity == 0 {
            return Err(Error::Precondition("truncation levels must be positive".into()));
        }
        Ok(TruncationLevel { max_edges, max_multiplicity })
    }

    pub(crate) fn keep(&self, g: &CanonicalGraph) -> bool {
        total_edges(g) <= self.max_edges
    }

    pub(crate) fn cut(&self, v: &GraphVector) -> GraphVector {
        v.filter(|g| self.keep(g))
    }
}

/// A truncated result together with the edge count up to which it is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated<T> {
    pub value: T,
    /// Every cell with at most this many edges is complete.
    pub exact_through: usize,
}

/// Outcome of checking an identity below a truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    /// Terms of the residual in the verified cells (empty when the identity holds).
    pub residual: GraphVector,
    /// Largest edge count in which the identity was verified.
    pub verified_through: usize,
    /// Number of graphs that entered the computation.
    pub terms: usize,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn total_edges(g: &CanonicalGraph) -> usize {
    g.num_edges() + g.num_dotted()
}

pub(crate) fn min_edges(v: &GraphVector) -> Option<usize> {
    v.iter().map(|(g, _)| total_edges(g)).min()
}

pub(crate) fn inv_factorial(k: usize) -> Rational {
    Rational::new(BigInt::from(1), factorial(k as u64))
}

/// `Σ_{3 ≤ k odd} coeff(k) X_k` with `k` up to the truncation.
fn odd_multi_edge_series(t: &TruncationLevel, from: usize, coeff: impl Fn(usize) -> Rational) -> GraphVector {
    let mut v = GraphVector::zero(Parity::Odd);
    let top = t.max_multiplicity.min(t.max_edges);
    for k in (from..=top).step_by(2) {
        if let Some(g) = multi_edge(Parity::Odd, k) {
            v.add_term(g, coeff(k)).unwrap();
        }
    }
    v
}

/// `m = Σ_{j ≥ 1} X_{2j+1} / (2j+1)!`, where `X_k` is the `k`-fold edge.
pub fn mc_m(t: &TruncationLevel) -> GraphVector {
    odd_multi_edge_series(t, 3, inv_factorial)
}

/// `m' = m + X_1`, so that `δ + [m, ·] = [m', ·]`.
pub fn mc_m_prime(t: &TruncationLevel) -> GraphVector {
    odd_multi_edge_series(t, 1, inv_factorial)
}

/// The cocycle `c = Σ_{j ≥ 1} j / (2j+1)! X_{2j+1}`.
pub fn cocycle_c(t: &TruncationLevel) -> GraphVector {
    odd_multi_edge_series(t, 3, |k| q(((k - 1) / 2) as i64) * inv_factorial(k))
}

/// `δ a + [m, a]`, dropping graphs beyond the edge budget.
pub fn twisted_delta(a: &GraphVector, t: &TruncationLevel) -> Result<Truncated<GraphVector>> {
    if a.parity() != Parity::Odd {
        return Err(Error::WrongParity { op: "twisted δ", parity: a.parity() });
    }
    let mut out = delta(a)?;
    out.add_assign(&bracket_m_truncated(a, t)?)?;
    let exact = min_edges(a).map_or(t.max_edges, |e| t.max_edges.min(e + t.max_multiplicity));
    Ok(Truncated { value: t.cut(&out), exact_through: exact })
}

/// `[m, a]` without the products that exceed the edge budget.
pub(crate) fn bracket_m_truncated(a: &GraphVector, t: &TruncationLevel) -> Result<GraphVector> {
    let m = mc_m(t);
    let mut by_edges: std::collections::BTreeMap<usize, GraphVector> = Default::default();
    for (g, c) in a.iter() {
        by_edges
            .entry(total_edges(g))
            .or_insert_with(|| GraphVector::zero(a.parity()))
            .add_term(g.clone(), c.clone())?;
    }
    let mut out = GraphVector::zero(a.parity());
    for (e, part) in by_edges {
        let room = t.max_edges.saturating_sub(e);
        let mk = m.filter(|x| total_edges(x) <= room);
        if !mk.is_zero() {
            out.add_assign(&bracket(&mk, &part)?)?;
        }
    }
    Ok(out)
}

/// Checks `δ m + ½ [m, m] = 0` on every cell the truncation determines completely.
pub fn check_mc(t: &TruncationLevel) -> Result<IdentityReport> {
    let bound = t.max_edges.min(t.max_multiplicity + 1);
    if bound < 4 {
        return Err(Error::Precondition(format!(
            "truncation {t:?} determines no cell of the Maurer-Cartan equation (need 4 edges)"
        )));
    }
    let m = mc_m(t);
    let mut r = delta(&m)?;
    r.add_scaled(&bracket(&m, &m)?, &Rational::new(1.into(), 2.into()))?;
    Ok(IdentityReport { residual: r.filter(|g| total_edges(g) <= bound), verified_through: bound, terms: m.len() })
}
