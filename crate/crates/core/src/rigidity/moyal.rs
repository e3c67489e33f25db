use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::words::{all_words, Word};
use crate::linalg::{factorial, Rational};

/// A graph of `Gra_1` on the numbered vertices `1..=n`: edges have degree 0
/// and reversing one edge changes the sign. Edge `(i, j)` always has `i < j`
/// and is directed from `i` to `j`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GraGraph {
    pub n: usize,
    pub edges: BTreeMap<(u8, u8), u32>,
}

impl GraGraph {
    pub fn num_edges(&self) -> usize {
        self.edges.values().map(|&k| k as usize).sum()
    }

    /// The normal form of a list of directed edges, with its sign.
    fn from_directed(n: usize, directed: &[(u8, u8)]) -> (GraGraph, bool) {
        let mut edges = BTreeMap::new();
        let mut flips = 0;
        for &(a, b) in directed {
            let key = if a < b { (a, b) } else { (b, a) };
            flips += (a > b) as usize;
            *edges.entry(key).or_insert(0) += 1;
        }
        (GraGraph { n, edges }, flips % 2 == 1)
    }

    fn directed(&self) -> Vec<(u8, u8)> {
        self.edges.iter().flat_map(|(&e, &k)| std::iter::repeat_n(e, k as usize)).collect()
    }
}

impl fmt::Display for GraGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.n)?;
        for (&(a, b), &k) in &self.edges {
            for _ in 0..k {
                write!(f, " {a}>{b}")?;
            }
        }
        Ok(())
    }
}

/// Rational combinations of `Gra_1` graphs of one arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraVector {
    pub n: usize,
    pub terms: BTreeMap<GraGraph, Rational>,
}

impl GraVector {
    pub fn zero(n: usize) -> Self {
        GraVector { n, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, g: GraGraph, c: Rational) {
        let e = self.terms.entry(g).or_insert_with(Rational::zero);
        *e += c;
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn sub(&self, other: &GraVector) -> GraVector {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), -c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, g: &GraGraph) -> Rational {
        self.terms.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    /// The graphs with the fewest edges.
    pub fn leading(&self) -> Vec<(&GraGraph, &Rational)> {
        let low = self.terms.keys().map(|g| g.num_edges()).min();
        self.terms.iter().filter(|(g, _)| Some(g.num_edges()) == low).collect()
    }

    /// Renames vertex `k` to `perm[k - 1]`.
    pub fn relabel(&self, perm: &[u8]) -> GraVector {
        let mut out = GraVector::zero(self.n);
        for (g, c) in &self.terms {
            let d: Vec<_> =
                g.directed().into_iter().map(|(a, b)| (perm[a as usize - 1], perm[b as usize - 1])).collect();
            let (h, neg) = GraGraph::from_directed(self.n, &d);
            out.add_term(h, if neg { -c.clone() } else { c.clone() });
        }
        out
    }
}

/// `F(m_2) = Σ_j (1/j!) (j edges from 1 to 2)`, up to `budget` edges.
pub fn moyal_m2(budget: usize) -> GraVector {
    let mut out = GraVector::zero(2);
    for j in 0..=budget {
        let (g, _) = GraGraph::from_directed(2, &vec![(1, 2); j]);
        out.add_term(g, Rational::new(1.into(), factorial(j as u64)));
    }
    out
}

/// Operadic insertion `outer ∘_i inner`: edges at vertex `i` are reconnected
/// to the vertices of `inner` in all ways. Terms above `budget` edges are dropped.
pub fn compose(outer: &GraVector, i: usize, inner: &GraVector, budget: usize) -> GraVector {
    let m = inner.n;
    let n = outer.n + m - 1;
    let mut out = GraVector::zero(n);
    let shift = |x: u8| if (x as usize) > i { x + m as u8 - 1 } else { x };
    for (go, co) in &outer.terms {
        for (gi, ci) in &inner.terms {
            if go.num_edges() + gi.num_edges() > budget {
                continue;
            }
            let base: Vec<(u8, u8)> =
                gi.directed().into_iter().map(|(a, b)| (a + i as u8 - 1, b + i as u8 - 1)).collect();
            let outer_edges = go.directed();
            let ends: Vec<(usize, bool)> = outer_edges
                .iter()
                .enumerate()
                .flat_map(|(k, &(a, b))| {
                    let mut v = Vec::new();
                    if a as usize == i {
                        v.push((k, false));
                    }
                    if b as usize == i {
                        v.push((k, true));
                    }
                    v
                })
                .collect();
            let total = m.pow(ends.len() as u32);
            for choice in 0..total {
                let mut edges: Vec<(u8, u8)> = outer_edges.iter().map(|&(a, b)| (shift(a), shift(b))).collect();
                let mut rest = choice;
                for &(k, head) in &ends {
                    let target = (i + rest % m) as u8;
                    rest /= m;
                    if head {
                        edges[k].1 = target;
                    } else {
                        edges[k].0 = target;
                    }
                }
                edges.extend(&base);
                let (g, neg) = GraGraph::from_directed(n, &edges);
                let c = co * ci;
                out.add_term(g, if neg { -c } else { c });
            }
        }
    }
    out
}

/// A bracketing of the positions `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bracketing {
    Leaf,
    Node(Box<Bracketing>, Box<Bracketing>),
}

impl Bracketing {
    pub fn arity(&self) -> usize {
        match self {
            Bracketing::Leaf => 1,
            Bracketing::Node(l, r) => l.arity() + r.arity(),
        }
    }

    /// `((a_1 a_2) a_3) …`
    pub fn left_comb(n: usize) -> Self {
        let mut t = Bracketing::Leaf;
        for _ in 1..n {
            t = Bracketing::Node(Box::new(t), Box::new(Bracketing::Leaf));
        }
        t
    }

    /// All bracketings with `n ≥ 1` leaves.
    pub fn all(n: usize) -> Vec<Self> {
        if n == 1 {
            return vec![Bracketing::Leaf];
        }
        let mut out = Vec::new();
        for k in 1..n {
            for l in Self::all(k) {
                for r in Self::all(n - k) {
                    out.push(Bracketing::Node(Box::new(l.clone()), Box::new(r)));
                }
            }
        }
        out
    }
}

fn unit() -> GraVector {
    let mut out = GraVector::zero(1);
    out.add_term(GraGraph { n: 1, edges: BTreeMap::new() }, Rational::one());
    out
}

/// `F` of a bracketed product of the positions in order.
pub fn moyal_bracketed(t: &Bracketing, budget: usize) -> GraVector {
    match t {
        Bracketing::Leaf => unit(),
        Bracketing::Node(l, r) => {
            let right = compose(&moyal_m2(budget), 2, &moyal_bracketed(r, budget), budget);
            compose(&right, 1, &moyal_bracketed(l, budget), budget)
        }
    }
}

/// `F(W)` with the letters multiplied left to right, up to `budget` edges.
/// The empty word maps to zero.
pub fn moyal_f(w: &Word, budget: usize) -> GraVector {
    if w.arity() == 0 {
        return GraVector::zero(0);
    }
    moyal_bracketed(&Bracketing::left_comb(w.arity()), budget).relabel(w.letters())
}

/// Every bracketing of every word of arity `n`, compared with the left-to-right
/// product. Returns the nonzero residuals.
pub fn associativity_residuals(n: usize, budget: usize) -> Vec<(Word, GraVector)> {
    let left = moyal_bracketed(&Bracketing::left_comb(n), budget);
    let mut out = Vec::new();
    for t in Bracketing::all(n) {
        let diff = moyal_bracketed(&t, budget).sub(&left);
        for w in all_words(n) {
            let r = diff.relabel(w.letters());
            if !r.is_zero() {
                out.push((w, r));
            }
        }
    }
    out
}

/// `F(a_1 a_2) - F(a_2 a_1)`.
pub fn moyal_commutator(budget: usize) -> GraVector {
    let ab = moyal_f(&Word::new(vec![1, 2]).unwrap(), budget);
    let ba = moyal_f(&Word::new(vec![2, 1]).unwrap(), budget);
    ab.sub(&ba)
}
