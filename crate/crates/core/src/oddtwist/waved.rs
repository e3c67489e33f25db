//! The waved complex: complete graphs with one directed edge per vertex pair
//! (tournaments), vertices of degree 1, and the map `g` into the dotted complex.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::series::{inv_factorial, Truncated, TruncationLevel};
use crate::calculus::labeled::{num_pairs, pair_index};
use crate::error::{Error, Result};
use crate::graphcore::{LabeledGraph, Parity};
use crate::linalg::{q, GraphVector, Rational};

/// Largest vertex count the brute-force canonical form accepts.
pub const MAX_WAVED_VERTICES: usize = 8;

/// A tournament on `0..n`. Bit `k` of `bits` refers to the `k`-th pair `(i, j)`,
/// `i < j`, in lexicographic order, and is set when the edge runs `i → j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WavedGraph {
    n: usize,
    bits: u64,
}

/// Linear combination of waved graphs in canonical form.
pub type WavedVector = BTreeMap<WavedGraph, i64>;

impl WavedGraph {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        if n == 0 || n > MAX_WAVED_VERTICES {
            return Err(Error::Capacity {
                v: n,
                e: num_pairs(n),
                what: format!("waved graphs need 1..={MAX_WAVED_VERTICES} vertices"),
            });
        }
        if num_pairs(n) < 64 && bits >> num_pairs(n) != 0 {
            return Err(Error::Precondition(format!("bit pattern {bits:b} too long for {n} vertices")));
        }
        Ok(WavedGraph { n, bits })
    }

    /// The tournament with `i → j` exactly when `dir(i, j)`, for `i < j`.
    pub fn from_fn(n: usize, dir: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut bits = 0u64;
        for i in 0..n {
            for j in i + 1..n {
                if dir(i, j) {
                    bits |= 1 << pair_index(n, i, j);
                }
            }
        }
        Self::new(n, bits)
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// True when the edge between `a` and `b` runs `a → b`.
    pub fn points(&self, a: usize, b: usize) -> bool {
        let forward = self.bits >> pair_index(self.n, a, b) & 1 == 1;
        if a < b {
            forward
        } else {
            !forward
        }
    }

    /// Every tournament on `n` labeled vertices.
    pub fn all(n: usize) -> Result<Vec<WavedGraph>> {
        Self::new(n, 0)?;
        Ok((0..1u64 << num_pairs(n)).map(|bits| WavedGraph { n, bits }).collect())
    }

    /// The vertex every other vertex points to, if any.
    pub fn maximum(&self) -> Option<usize> {
        (0..self.n).find(|&v| (0..self.n).all(|u| u == v || self.points(u, v)))
    }

    /// Canonical representative and sign, minimizing the bit pattern over the
    /// relabelings that sort vertices by (out-degree, sum of out-neighbour
    /// out-degrees); `None` if the graph has an odd automorphism.
    pub fn canonical(&self) -> Option<(WavedGraph, i64)> {
        let n = self.n;
        let outs = |v: usize| (0..n).filter(move |&u| u != v && self.points(v, u));
        let score: Vec<usize> = (0..n).map(|v| outs(v).count()).collect();
        let key: Vec<(usize, usize)> = (0..n).map(|v| (score[v], outs(v).map(|u| score[u]).sum())).collect();
        // order[i] is the old vertex placed at position i
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| key[v]);
        let mut class_end = vec![n; n];
        for i in (0..n.saturating_sub(1)).rev() {
            class_end[i] = if key[order[i]] == key[order[i + 1]] { class_end[i + 1] } else { i + 1 };
        }
        let mut best: Option<(u64, i64)> = None;
        let mut zero = false;
        class_permutations(&mut order, &class_end, 0, &mut |o| {
            let mut bits = 0u64;
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if self.points(o[i], o[j]) {
                        bits |= 1 << k;
                    }
                    k += 1;
                }
            }
            let s = perm_sign(o);
            match best {
                Some((b, bs)) if bits == b => zero |= bs != s,
                Some((b, _)) if bits > b => {}
                _ => best = Some((bits, s)),
            }
        });
        let (bits, s) = best.unwrap();
        (!zero).then_some((WavedGraph { n, bits }, s))
    }

    /// Insert a new vertex in front; `dir(y)` says whether old vertex `y` points to it.
    fn with_new_front(&self, points_to_new: impl Fn(usize) -> bool) -> WavedGraph {
        WavedGraph::from_fn(self.n + 1, |i, j| if i == 0 { !points_to_new(j - 1) } else { self.points(i - 1, j - 1) })
            .unwrap()
    }

    /// Delete vertex `k`.
    fn without(&self, k: usize) -> WavedGraph {
        let old = |i: usize| if i < k { i } else { i + 1 };
        WavedGraph::from_fn(self.n - 1, |i, j| self.points(old(i), old(j))).unwrap()
    }
}

/// Every reordering of `p` that permutes positions only within `i..class_end[i]` blocks.
fn class_permutations(p: &mut Vec<usize>, class_end: &[usize], k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..class_end[k] {
        p.swap(k, i);
        class_permutations(p, class_end, k + 1, f);
        p.swap(k, i);
    }
}

fn perm_sign(p: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

impl fmt::Display for WavedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W v{} | ", self.n)?;
        for k in 0..num_pairs(self.n) {
            f.write_str(if self.bits >> k & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for WavedGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.into() };
        let rest = s.strip_prefix("W v").ok_or_else(|| err(0, "expected `W v<N> | <bits>`"))?;
        let (n, bits) = rest.split_once('|').ok_or_else(|| err(s.len(), "missing `|`"))?;
        let n: usize = n.trim().parse().map_err(|_| err(3, "bad vertex count"))?;
        let bits = bits.trim();
        if bits.len() != num_pairs(n) {
            return Err(err(s.len(), &format!("expected {} bits", num_pairs(n))));
        }
        let mut b = 0u64;
        for (k, c) in bits.chars().enumerate() {
            match c {
                '1' => b |= 1 << k,
                '0' => {}
                _ => return Err(err(s.len() - bits.len() + k, "bits must be 0 or 1")),
            }
        }
        WavedGraph::new(n, b)
    }
}

fn add_canonical(out: &mut WavedVector, g: WavedGraph, c: i64) {
    if let Some((h, s)) = g.canonical() {
        let e = out.entry(h).or_insert(0);
        *e += c * s;
        if *e == 0 {
            out.remove(&h);
        }
    }
}

/// `d = d₁ - d_in + d_out`; the new vertex is placed first.
///
/// `d_x` joins the new vertex to `x` by `x → new` and copies the orientation of
/// every other edge at `x`; `d_in` and `d_out` join it to all vertices by edges
/// pointing into, respectively out of, the new vertex.
pub fn waved_d(g: &WavedGraph) -> WavedVector {
    let mut out = WavedVector::new();
    for x in 0..g.n {
        let h = g.with_new_front(|y| if y == x { true } else { g.points(y, x) });
        add_canonical(&mut out, h, 1);
    }
    add_canonical(&mut out, g.with_new_front(|_| true), -1);
    add_canonical(&mut out, g.with_new_front(|_| false), 1);
    out
}

/// Deletes the maximum vertex after moving it to the front, or returns 0.
pub fn waved_h(g: &WavedGraph) -> WavedVector {
    let mut out = WavedVector::new();
    if g.n > 1 {
        if let Some(k) = g.maximum() {
            add_canonical(&mut out, g.without(k), if k % 2 == 0 { 1 } else { -1 });
        }
    }
    out
}

/// Extend a map on basis graphs linearly.
pub fn waved_apply(v: &WavedVector, f: impl Fn(&WavedGraph) -> WavedVector) -> WavedVector {
    let mut out = WavedVector::new();
    for (g, c) in v {
        for (h, d) in f(g) {
            let e = out.entry(h).or_insert(0);
            *e += c * d;
            if *e == 0 {
                out.remove(&h);
            }
        }
    }
    out
}

/// The labeled terms of `g`: each waved edge `x → y` becomes
/// `Σ_{j ≥ 0} (x → y)^j / j!`, truncated.
pub fn g_map_labeled(w: &WavedGraph, t: &TruncationLevel) -> Vec<(LabeledGraph, Rational)> {
    let n = w.n;
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push(if w.points(i, j) { (i, j) } else { (j, i) });
        }
    }
    let cap = t.max_multiplicity.min(t.max_edges);
    let mut out = Vec::new();
    let mut mult = vec![0usize; pairs.len()];
    loop {
        let edges: Vec<(usize, usize)> =
            pairs.iter().zip(&mult).flat_map(|(&e, &k)| std::iter::repeat_n(e, k)).collect();
        let c: Rational = mult.iter().map(|&k| inv_factorial(k)).product();
        out.push((LabeledGraph::new(Parity::Odd, n, edges), c));
        let mut i = 0;
        while i < mult.len() {
            mult[i] += 1;
            if mult[i] <= cap && mult.iter().sum::<usize>() <= t.max_edges {
                break;
            }
            mult[i] = 0;
            i += 1;
        }
        if i == mult.len() {
            break;
        }
    }
    out
}

/// `g` on isomorphism classes, exact in every edge count up to
/// `min(max_edges, max_multiplicity)`.
pub fn g_map(w: &WavedGraph, t: &TruncationLevel) -> Truncated<GraphVector> {
    let mut out = GraphVector::zero(Parity::Odd);
    for (lg, c) in g_map_labeled(w, t) {
        out.add_assign(&GraphVector::from_labeled(&lg, c).unwrap()).unwrap();
    }
    Truncated { value: out, exact_through: t.max_multiplicity.min(t.max_edges) }
}

/// `g` extended linearly.
pub fn g_map_vec(v: &WavedVector, t: &TruncationLevel) -> Truncated<GraphVector> {
    let mut out = GraphVector::zero(Parity::Odd);
    for (w, c) in v {
        out.add_scaled(&g_map(w, t).value, &q(*c)).unwrap();
    }
    Truncated { value: out, exact_through: t.max_multiplicity.min(t.max_edges) }
}
