use num_traits::Zero;
use serde_json::{json, Value};

use super::ribbon::{f_odd, f_ribbon_vector, is_trivalent, ColoringValue, RibbonGraph};
use crate::calculus::{bracket, delta, delta_graph, loop_graph, multi_edge, theta};
use crate::error::{Error, Result};
use crate::graphcore::{enumerate_graphs, CanonicalGraph, GradedBasis, GraphConstraints, LabeledGraph, Parity};
use crate::linalg::io::rational_to_string;
use crate::linalg::{coordinates, from_coordinates, matrix_of_int, q, qq, solve, GraphVector, Rational};

/// A loop `0 → 1 → … → n-1 → 0` with extra vertices `n, n+1, …`, the `i`-th
/// one receiving edges from the loop vertices in `spokes[i]`.
fn loop_with_spokes(n: usize, spokes: &[&[usize]]) -> LabeledGraph {
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    for (k, s) in spokes.iter().enumerate() {
        edges.extend(s.iter().map(|&a| (a, n + k)));
    }
    LabeledGraph::new(Parity::Odd, n + spokes.len(), edges)
}

fn combination(terms: &[(Rational, LabeledGraph)]) -> Result<GraphVector> {
    let mut v = GraphVector::zero(Parity::Odd);
    for (c, g) in terms {
        v.add_assign(&GraphVector::from_labeled(g, c.clone())?)?;
    }
    Ok(v)
}

/// The three-term representative of `W_7^1`, in explicit form.
pub fn explicit_w1() -> Result<GraphVector> {
    combination(&[
        (q(1), loop_with_spokes(7, &[&[0, 1, 2]])),
        (q(1), loop_with_spokes(7, &[&[0, 1, 4]])),
        (q(1), loop_with_spokes(7, &[&[0, 2, 4]])),
    ])
}

/// The explicit `R_7^1`, with the marked loop vertex labelled 0.
pub fn explicit_r1() -> Result<GraphVector> {
    combination(&[
        (q(-1), loop_with_spokes(6, &[&[0, 1, 2]])),
        (q(1), loop_with_spokes(6, &[&[0, 1, 3]])),
        (qq(-1, 3), loop_with_spokes(6, &[&[0, 2, 4]])),
    ])
}

const W2_SPOKES: [([usize; 3], [usize; 3]); 3] =
    [([0, 1, 2], [3, 4, 5]), ([0, 1, 3], [2, 4, 5]), ([0, 2, 4], [1, 3, 5])];

/// The explicit `W_7^2` in odd orientation.
pub fn explicit_w2() -> Result<GraphVector> {
    let c = [q(-1), q(1), qq(-1, 3)];
    let terms: Vec<_> =
        W2_SPOKES.iter().zip(c).map(|((a, b), c)| (c, loop_with_spokes(6, &[a.as_slice(), b.as_slice()]))).collect();
    combination(&terms)
}

/// The explicit ribbon form of `W_7^2`: the cyclic order at each vertex is clockwise:
/// loop vertex `k` sees `k+1`, its spoke, `k-1`, and a spoke vertex sees its
/// loop neighbours in increasing order.
pub fn explicit_w2_ribbon() -> Result<Vec<(RibbonGraph, Rational)>> {
    let c = [q(-1), q(-1), qq(1, 3)];
    let mut out = Vec::new();
    for ((a, b), c) in W2_SPOKES.iter().zip(c) {
        let g = loop_with_spokes(6, &[a.as_slice(), b.as_slice()]);
        let hub = |k: usize| if a.contains(&k) { 6 } else { 7 };
        let mut orders: Vec<[usize; 3]> = (0..6).map(|k| [(k + 1) % 6, hub(k), (k + 5) % 6]).collect();
        orders.push(*a);
        orders.push(*b);
        out.push((RibbonGraph::from_neighbour_orders(g.edges, &orders)?, c));
    }
    Ok(out)
}

/// Lengths of the chains: maximal paths through bivalent vertices between
/// trivalent ones. Each chain is reported once from each end.
pub fn chain_lengths(g: &CanonicalGraph) -> Vec<usize> {
    let val = g.valences();
    let edges = g.edges();
    let mut out = Vec::new();
    for (start, &vs) in val.iter().enumerate() {
        if vs != 3 {
            continue;
        }
        for (k, &(a, b)) in edges.iter().enumerate() {
            let (a, b) = (a as usize, b as usize);
            if a != start && b != start {
                continue;
            }
            let (mut prev_edge, mut at) = (k, if a == start { b } else { a });
            let mut len = 1;
            while val[at] == 2 {
                let Some((nk, &(x, y))) = edges
                    .iter()
                    .enumerate()
                    .find(|&(j, &(x, y))| j != prev_edge && (x as usize == at || y as usize == at))
                else {
                    break;
                };
                at = if x as usize == at { y as usize } else { x as usize };
                prev_edge = nk;
                len += 1;
            }
            if val[at] == 3 {
                out.push(len);
            }
        }
    }
    out
}

/// The subspace `S`: no vertex above valence 3 and some chain of odd length other than 1.
pub fn in_chain_space(g: &CanonicalGraph) -> bool {
    g.valences().iter().all(|&k| k <= 3) && chain_lengths(g).iter().any(|&l| l % 2 == 1 && l != 1)
}

/// `λ` with `a = λ b`, if any.
pub fn ratio(a: &GraphVector, b: &GraphVector) -> Option<Rational> {
    let (g, c) = b.sorted_terms().into_iter().next()?;
    let l = a.coeff(&g) / c;
    (a.sub(&b.scale(&l)).ok()?.is_zero()).then_some(l)
}

fn at_most_trivalent(v: usize, e: usize) -> Result<GradedBasis> {
    let c = GraphConstraints::connected();
    let all = enumerate_graphs(v, e, Parity::Odd, &c)?;
    let keep = all.iter().filter(|g| g.valences().iter().all(|&k| k <= 3)).cloned().collect();
    Ok(GradedBasis::from_graphs(Parity::Odd, v, e, c, keep))
}

/// Every intermediate of the loop-7 computation.
#[derive(Debug, Clone)]
pub struct L7Report {
    /// `[Θ, L_7]`.
    pub w1_full: GraphVector,
    /// Its projection to `S`.
    pub w1: GraphVector,
    /// `λ` with `W_7^1 = λ · (explicit W_7^1)`.
    pub w1_scale: Option<Rational>,
    /// `μ` with `δ(explicit R_7^1) = μ · (explicit W_7^1)`.
    pub explicit_r_ratio: Option<Rational>,
    pub solve_domain: usize,
    pub solve_codomain: usize,
    /// A solution of `δR = -W_7^1` among graphs of valence at most 3.
    pub r_solved: GraphVector,
    /// `-(λ/μ) · (explicit R_7^1)`, another solution.
    pub r_scaled: GraphVector,
    /// The trivalent part of `[X_5, L_7]`.
    pub x5_part: GraphVector,
    /// Trivalent part of `[X_5, L_7] + [Θ, R]` for `R = r_scaled`.
    pub w2: GraphVector,
    /// `ν` with `w2 = ν · (explicit odd W_7^2)`.
    pub w2_scale: Option<Rational>,
    pub w2_closed: bool,
    /// `σ` with `(explicit ribbon W_7^2) = σ · (explicit odd W_7^2)`.
    pub ribbon_sign: Option<Rational>,
    pub f_explicit_ribbon: ColoringValue,
    pub f_w2: ColoringValue,
    pub f_w2_solved: ColoringValue,
    pub f_w2_shifted: ColoringValue,
}

impl L7Report {
    /// `f(W_7^2) ≠ 0` for every solution tried, and all of them agree.
    pub fn nonexact(&self) -> bool {
        !self.f_w2.is_zero() && self.f_w2.total == self.f_w2_solved.total && self.f_w2.total == self.f_w2_shifted.total
    }

    pub fn to_json(&self) -> Value {
        let r = |x: &Option<Rational>| x.as_ref().map(rational_to_string);
        let f = |c: &ColoringValue| json!({"total": rational_to_string(&c.total), "per_class": rational_to_string(&c.per_class), "colorings": c.colorings});
        json!({
            "w1_full": self.w1_full.to_text(),
            "w1": self.w1.to_text(),
            "w1_scale": r(&self.w1_scale),
            "explicit_r_ratio": r(&self.explicit_r_ratio),
            "solve_domain": self.solve_domain,
            "solve_codomain": self.solve_codomain,
            "r_solved": self.r_solved.to_text(),
            "r_scaled": self.r_scaled.to_text(),
            "x5_part": self.x5_part.to_text(),
            "w2": self.w2.to_text(),
            "w2_scale": r(&self.w2_scale),
            "w2_closed": self.w2_closed,
            "ribbon_sign": r(&self.ribbon_sign),
            "f_explicit_ribbon": f(&self.f_explicit_ribbon),
            "f_w2": f(&self.f_w2),
            "f_w2_solved": f(&self.f_w2_solved),
            "f_w2_shifted": f(&self.f_w2_shifted),
            "nonexact": self.nonexact(),
        })
    }
}

/// Follows `L_7` down the odd spectral sequence to its partner `W_7^2` and
/// evaluates the colouring invariant on it.
pub fn l7_pipeline() -> Result<L7Report> {
    let th = GraphVector::from_graph(theta());
    let l7 = GraphVector::from_graph(loop_graph(Parity::Odd, 7).expect("L7 is nonzero"));
    let w1_full = bracket(&th, &l7)?;
    let w1 = w1_full.filter(in_chain_space);
    let w1_explicit = explicit_w1()?;
    let w1_scale = ratio(&w1, &w1_explicit);
    let explicit_r_ratio = ratio(&delta(&explicit_r1()?)?, &w1_explicit);

    let dom = at_most_trivalent(7, 9)?;
    let cod = at_most_trivalent(8, 10)?;
    let m = matrix_of_int(delta_graph, &dom, &cod)?;
    let target: Vec<Rational> = coordinates(&w1, &cod)?.into_iter().map(|x| -x).collect();
    let x =
        solve(&m, &target)?.ok_or_else(|| Error::Precondition("δR = -W_7^1 has no solution in cell (7, 9)".into()))?;
    let r_solved = from_coordinates(&x, &dom);

    let below = at_most_trivalent(6, 8)?;
    let shift = below
        .iter()
        .map(|g| delta(&GraphVector::from_graph(g.clone())))
        .find(|d| d.as_ref().map_or(true, |d| !d.is_zero()))
        .transpose()?
        .unwrap_or_else(|| GraphVector::zero(Parity::Odd));
    let r_shifted = r_solved.add(&shift)?;
    let r_scale = match (&w1_scale, &explicit_r_ratio) {
        (Some(l), Some(m)) if !m.is_zero() => -(l / m),
        _ => return Err(Error::Precondition("the explicit W_7^1 or R_7^1 does not match in cell (8, 10)".into())),
    };
    let r_scaled = explicit_r1()?.scale(&r_scale);

    let x5 = GraphVector::from_graph(multi_edge(Parity::Odd, 5).expect("X5 is nonzero"));
    let x5_part = bracket(&x5, &l7)?.filter(is_trivalent);
    let w2_of = |r: &GraphVector| -> Result<GraphVector> { bracket(&th, r)?.filter(is_trivalent).add(&x5_part) };
    let w2 = w2_of(&r_scaled)?;
    let w2_scale = ratio(&w2, &explicit_w2()?);
    let w2_closed = delta(&w2)?.is_zero();

    let ribbon = explicit_w2_ribbon()?;
    let mut ribbon_odd = GraphVector::zero(Parity::Odd);
    for (g, c) in &ribbon {
        ribbon_odd.add_scaled(&g.to_odd()?, c)?;
    }
    let ribbon_sign = ratio(&ribbon_odd, &explicit_w2()?);

    Ok(L7Report {
        f_explicit_ribbon: f_ribbon_vector(&ribbon),
        f_w2: f_odd(&w2)?,
        f_w2_solved: f_odd(&w2_of(&r_solved)?)?,
        f_w2_shifted: f_odd(&w2_of(&r_shifted)?)?,
        w1_full,
        w1,
        w1_scale,
        explicit_r_ratio,
        solve_domain: dom.len(),
        solve_codomain: cod.len(),
        r_solved,
        r_scaled,
        x5_part,
        w2,
        w2_scale,
        w2_closed,
        ribbon_sign,
    })
}
