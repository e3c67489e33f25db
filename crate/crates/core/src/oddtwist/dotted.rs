//! The dotted complex: odd graphs with additional degree 1 "dotted" edges, the
//! differential `δ₁`, and the formal dotted tadpole `p`.
//!
//! The orientation of a dotted graph is its vertex order followed by its dotted
//! edge order. `δ₁` and `[p, ·]` put the new dotted edge first.

use std::collections::HashMap;

use num_traits::Zero;

use super::series::{
    bracket_m_truncated, inv_factorial, mc_m, min_edges, total_edges, IdentityReport, Truncated, TruncationLevel,
};
use crate::calculus::{bracket, delta};
use crate::error::{Error, Result};
use crate::graphcore::{canonicalize_raw, CanonicalGraph, Parity};
use crate::linalg::{q, GraphVector, Rational, SparseMatrix};

/// A dotted-complex element `graphs + p_coeff · p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DottedElement {
    pub graphs: GraphVector,
    pub p_coeff: Rational,
}

impl DottedElement {
    pub fn zero() -> Self {
        DottedElement { graphs: GraphVector::zero(Parity::Odd), p_coeff: Rational::zero() }
    }

    pub fn from_graphs(graphs: GraphVector) -> Self {
        DottedElement { graphs, p_coeff: Rational::zero() }
    }

    /// The dotted tadpole `p`.
    pub fn p() -> Self {
        DottedElement { graphs: GraphVector::zero(Parity::Odd), p_coeff: q(1) }
    }

    pub fn is_zero(&self) -> bool {
        self.graphs.is_zero() && self.p_coeff.is_zero()
    }

    pub fn add(&self, other: &DottedElement) -> Result<DottedElement> {
        Ok(DottedElement { graphs: self.graphs.add(&other.graphs)?, p_coeff: &self.p_coeff + &other.p_coeff })
    }

    pub fn scale(&self, s: &Rational) -> DottedElement {
        DottedElement { graphs: self.graphs.scale(s), p_coeff: &self.p_coeff * s }
    }

    fn cut(&self, t: &TruncationLevel) -> DottedElement {
        DottedElement { graphs: t.cut(&self.graphs), p_coeff: self.p_coeff.clone() }
    }
}

/// The graph `ζ`: a solid and a dotted edge between two vertices.
pub fn zeta() -> CanonicalGraph {
    canonicalize_raw(Parity::Odd, 2, &[(0, 1)], &[(0, 1)]).unwrap().0
}

/// `δ₁` on a labeled graph: for every pair joined by `n ≥ 2` solid edges, replace
/// two of them by one dotted edge, coefficient `-n(n-1)`, solid edges oriented alike.
pub(crate) fn delta1_raw(solid: &[(u8, u8)], dotted: &[(u8, u8)]) -> Vec<(Vec<(u8, u8)>, Vec<(u8, u8)>, i64)> {
    let mut by_pair: HashMap<(u8, u8), Vec<usize>> = HashMap::new();
    for (i, &(a, b)) in solid.iter().enumerate() {
        by_pair.entry((a.min(b), a.max(b))).or_default().push(i);
    }
    let mut pairs: Vec<_> = by_pair.into_iter().filter(|(_, v)| v.len() >= 2).collect();
    pairs.sort();
    let mut out = Vec::new();
    for ((lo, hi), idx) in pairs {
        let n = idx.len() as i64;
        let mut sign = -n * (n - 1);
        let mut s = solid.to_vec();
        for &i in &idx {
            if s[i].0 != lo {
                s[i] = (lo, hi);
                sign = -sign;
            }
        }
        let (i, j) = (idx[idx.len() - 1], idx[idx.len() - 2]);
        s.remove(i);
        s.remove(j);
        let mut d = Vec::with_capacity(dotted.len() + 1);
        d.push((lo, hi));
        d.extend_from_slice(dotted);
        out.push((s, d, sign));
    }
    out
}

/// `[p, ·]` on a labeled graph: add one dotted edge, in front, on every pair.
pub(crate) fn add_dotted_raw(
    n: usize,
    solid: &[(u8, u8)],
    dotted: &[(u8, u8)],
) -> Vec<(Vec<(u8, u8)>, Vec<(u8, u8)>, i64)> {
    let mut out = Vec::new();
    for a in 0..n as u8 {
        for b in a + 1..n as u8 {
            let mut d = Vec::with_capacity(dotted.len() + 1);
            d.push((a, b));
            d.extend_from_slice(dotted);
            out.push((solid.to_vec(), d, 1));
        }
    }
    out
}

fn raw_operator(
    a: &GraphVector,
    f: impl Fn(&CanonicalGraph) -> Vec<(Vec<(u8, u8)>, Vec<(u8, u8)>, i64)>,
) -> Result<GraphVector> {
    if a.parity() != Parity::Odd {
        return Err(Error::WrongParity { op: "dotted complex", parity: a.parity() });
    }
    let mut out = GraphVector::zero(Parity::Odd);
    for (g, c) in a.iter() {
        for (s, d, x) in f(g) {
            if let Some((h, sg)) = canonicalize_raw(Parity::Odd, g.num_vertices(), &s, &d) {
                out.add_term(h, c * q(x * sg as i64))?;
            }
        }
    }
    Ok(out)
}

/// `δ₁`.
pub fn delta1(a: &GraphVector) -> Result<GraphVector> {
    raw_operator(a, |g| delta1_raw(g.edges(), g.dotted()))
}

/// `[p, a]`: add one dotted edge in all possible ways.
pub fn bracket_p(a: &GraphVector) -> Result<GraphVector> {
    raw_operator(a, |g| add_dotted_raw(g.num_vertices(), g.edges(), g.dotted()))
}

fn sign_of(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        q(1)
    } else {
        q(-1)
    }
}

/// `[a, p] = -(-1)^{|a|} [p, a]`, termwise.
fn bracket_with_p_right(a: &GraphVector) -> Result<GraphVector> {
    let mut out = GraphVector::zero(Parity::Odd);
    for (g, c) in a.iter() {
        let s = -sign_of(g.degree());
        out.add_scaled(&bracket_p(&GraphVector::from_graph(g.clone()))?, &(c * s))?;
    }
    Ok(out)
}

/// The Lie bracket extended by `p`, with `[p, p] = 0`.
pub fn dotted_bracket(x: &DottedElement, y: &DottedElement) -> Result<DottedElement> {
    let mut g = bracket(&x.graphs, &y.graphs)?;
    if !y.p_coeff.is_zero() {
        g.add_scaled(&bracket_with_p_right(&x.graphs)?, &y.p_coeff)?;
    }
    if !x.p_coeff.is_zero() {
        g.add_scaled(&bracket_p(&y.graphs)?, &x.p_coeff)?;
    }
    Ok(DottedElement::from_graphs(g))
}

/// `δ̃ = δ + δ₁`, with `δ p = ζ` and `δ₁ p = 0`.
pub fn tilde_delta(x: &DottedElement) -> Result<DottedElement> {
    let mut g = delta(&x.graphs)?;
    g.add_assign(&delta1(&x.graphs)?)?;
    if !x.p_coeff.is_zero() {
        g.add_term(zeta(), x.p_coeff.clone())?;
    }
    Ok(DottedElement::from_graphs(g))
}

/// `m̃ = m + p`.
pub fn mc_tilde(t: &TruncationLevel) -> DottedElement {
    DottedElement { graphs: mc_m(t), p_coeff: q(1) }
}

/// `δ̃ x + [m̃, x]`, dropping graphs beyond the edge budget.
pub fn twisted_dotted_delta(x: &DottedElement, t: &TruncationLevel) -> Result<Truncated<DottedElement>> {
    let mut g = bracket_m_truncated(&x.graphs, t)?;
    g.add_assign(&bracket_p(&x.graphs)?)?;
    if !x.p_coeff.is_zero() {
        g.add_scaled(&bracket_p(&mc_m(t))?, &x.p_coeff)?;
    }
    let out = tilde_delta(x)?.add(&DottedElement::from_graphs(g))?;
    let e0 = if x.p_coeff.is_zero() { min_edges(&x.graphs) } else { Some(1) };
    let exact = e0.map_or(t.max_edges, |e| t.max_edges.min(e + t.max_multiplicity));
    Ok(Truncated { value: out.cut(t), exact_through: exact })
}

/// Checks `δ̃ m̃ + ½ [m̃, m̃] = 0` on every cell the truncation determines.
pub fn check_mc_tilde(t: &TruncationLevel) -> Result<IdentityReport> {
    // δ₁ lowers the edge count, so cell E also needs X_{E+1}
    let bound = t.max_edges.min(t.max_multiplicity).saturating_sub(1);
    if bound < 2 {
        return Err(Error::Precondition(format!("truncation {t:?} determines no cell")));
    }
    let m = mc_tilde(t);
    let mut r = tilde_delta(&m)?;
    r = r.add(&dotted_bracket(&m, &m)?.scale(&Rational::new(1.into(), 2.into())))?;
    Ok(IdentityReport {
        residual: r.graphs.filter(|g| total_edges(g) <= bound),
        verified_through: bound,
        terms: m.graphs.len() + 1,
    })
}

/// Loop order plus number of dotted edges; `p` counts 2.
pub fn loop_dotted_grading(g: &CanonicalGraph) -> i64 {
    total_edges(g) as i64 - g.num_vertices() as i64 + 1 + g.num_dotted() as i64
}

/// The grading generator: multiply each homogeneous piece by its grading.
pub fn grading_generator(x: &DottedElement) -> DottedElement {
    let mut g = GraphVector::zero(Parity::Odd);
    for (h, c) in x.graphs.iter() {
        let w = loop_dotted_grading(h);
        if w != 0 {
            g.add_term(h.clone(), c * q(w)).unwrap();
        }
    }
    DottedElement { graphs: g, p_coeff: &x.p_coeff * q(2) }
}

/// `c̃`, the grading generator applied to `m̃`.
pub fn cocycle_c_tilde(t: &TruncationLevel) -> DottedElement {
    grading_generator(&mc_tilde(t))
}

/// The projection killing `p` and every graph with a dotted edge.
pub fn project_undotted(x: &DottedElement) -> GraphVector {
    x.graphs.filter(|g| g.num_dotted() == 0)
}

/// Edges plus twice the dotted edges minus vertices.
pub fn lie_degree(g: &CanonicalGraph) -> i64 {
    g.num_edges() as i64 + 2 * g.num_dotted() as i64 - g.num_vertices() as i64
}

/// The complex of one labeled vertex pair under `δ₁ + [p, ·]`, truncated to
/// `solid + 2 · dotted ≤ weight`.
///
/// Domain basis: `k` parallel solid edges, `k = 0..=weight`. Codomain basis:
/// `k` solid edges plus one dotted edge, `k = 0..=weight-2`.
#[derive(Debug, Clone)]
pub struct PairCell {
    pub weight: usize,
    pub matrix: SparseMatrix,
}

impl PairCell {
    pub fn new(weight: usize) -> Result<Self> {
        if weight < 2 {
            return Err(Error::Precondition("pair cell needs weight >= 2".into()));
        }
        let rows = weight - 1;
        let mut trip = Vec::new();
        for k in 0..=weight {
            let solid = vec![(0u8, 1u8); k];
            let terms = delta1_raw(&solid, &[]).into_iter().chain(add_dotted_raw(2, &solid, &[]));
            for (s, d, c) in terms {
                debug_assert_eq!(d.len(), 1);
                if s.len() < rows {
                    trip.push((s.len(), k, c));
                }
            }
        }
        Ok(PairCell { weight, matrix: SparseMatrix::from_triplets(rows, weight + 1, trip)? })
    }

    /// `(dim H^0, dim H^1)`: cocycles without and with a dotted edge.
    pub fn homology(&self) -> (usize, usize) {
        let r = crate::linalg::rank_rational(&self.matrix);
        (self.matrix.cols() - r, self.matrix.rows() - r)
    }

    /// The two expected cocycles `Σ_{j even} X_j / j!` and `Σ_{j odd} X_j / j!`.
    pub fn expected_cocycles(&self) -> [Vec<Rational>; 2] {
        let v = |parity: usize| {
            (0..=self.weight).map(|k| if k % 2 == parity { inv_factorial(k) } else { Rational::zero() }).collect()
        };
        [v(0), v(1)]
    }
}
