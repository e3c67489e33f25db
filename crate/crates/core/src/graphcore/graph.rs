use std::fmt;

use serde::{Deserialize, Serialize};

use super::canon;
use crate::error::{Error, Result};

/// Parity convention of the graph space.
///
/// `Even` is the convention where vertices have degree 0 and edges degree -1;
/// the orientation is an ordering of the edges. `Odd` puts vertices in degree 1
/// and edges in degree 0; the orientation is an ordering of vertices together
/// with a direction on every edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn letter(self) -> char {
        match self {
            Parity::Even => 'E',
            Parity::Odd => 'O',
        }
    }

    /// Cohomological degree of a graph with `v` vertices and `e` edges.
    ///
    /// Normalized so that the single edge has degree 1 in both conventions.
    pub fn degree(self, v: usize, e: usize) -> i64 {
        match self {
            Parity::Even => e as i64,
            Parity::Odd => v as i64 - 1,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "even" | "e" | "0" => Ok(Parity::Even),
            "odd" | "o" | "1" => Ok(Parity::Odd),
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown parity `{s}`") }),
        }
    }
}

/// A graph with labeled vertices `0..num_vertices` and an ordered edge list.
///
/// Edges are `(tail, head)` pairs. For `Even` parity the list order is the
/// orientation; for `Odd` parity the vertex order and the directions are.
/// `dotted` holds the auxiliary degree-one edges (Odd only), in orientation order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabeledGraph {
    pub parity: Parity,
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dotted: Vec<(usize, usize)>,
}

impl LabeledGraph {
    pub fn new(parity: Parity, num_vertices: usize, edges: Vec<(usize, usize)>) -> Self {
        LabeledGraph { parity, num_vertices, edges, dotted: Vec::new() }
    }

    pub fn with_dotted(
        parity: Parity,
        num_vertices: usize,
        edges: Vec<(usize, usize)>,
        dotted: Vec<(usize, usize)>,
    ) -> Self {
        LabeledGraph { parity, num_vertices, edges, dotted }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_vertices == 0 {
            return Err(Error::EmptyGraph);
        }
        if self.num_vertices > MAX_VERTICES {
            return Err(Error::Capacity {
                v: self.num_vertices,
                e: self.edges.len(),
                what: format!("at most {MAX_VERTICES} vertices supported"),
            });
        }
        for &(a, b) in self.edges.iter().chain(self.dotted.iter()) {
            for x in [a, b] {
                if x >= self.num_vertices {
                    return Err(Error::VertexOutOfRange { index: x, num_vertices: self.num_vertices });
                }
            }
        }
        if self.parity == Parity::Even && !self.dotted.is_empty() {
            return Err(Error::WrongParity { op: "dotted edges", parity: Parity::Even });
        }
        Ok(())
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Canonical representative and orientation sign, `None` when the class vanishes.
    pub fn canonicalize(&self) -> Result<Option<(CanonicalGraph, i32)>> {
        canonicalize(self)
    }
}

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

/// Isomorphism-class representative of a nonzero oriented graph.
///
/// The stored labeling is the canonical one. Its orientation is the standard
/// one: edges sorted, each edge stored as `(min, max)`, vertices in label order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalGraph {
    parity: Parity,
    n: u8,
    edges: Box<[(u8, u8)]>,
    dotted: Box<[(u8, u8)]>,
}

impl PartialOrd for CanonicalGraph {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalGraph {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl CanonicalGraph {
    pub(crate) fn from_parts_unchecked(parity: Parity, n: usize, edges: Vec<(u8, u8)>, dotted: Vec<(u8, u8)>) -> Self {
        CanonicalGraph { parity, n: n as u8, edges: edges.into(), dotted: dotted.into() }
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }
    pub fn num_vertices(&self) -> usize {
        self.n as usize
    }
    /// Number of solid edges.
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn num_dotted(&self) -> usize {
        self.dotted.len()
    }
    pub fn edges(&self) -> &[(u8, u8)] {
        &self.edges
    }
    pub fn dotted(&self) -> &[(u8, u8)] {
        &self.dotted
    }
    /// First Betti number minus one, `e - v`.
    pub fn betti(&self) -> i64 {
        self.edges.len() as i64 - self.n as i64
    }
    /// Cohomological degree; dotted edges have degree 1.
    pub fn degree(&self) -> i64 {
        self.parity.degree(self.num_vertices(), self.num_edges()) + self.num_dotted() as i64
    }
    pub fn key(&self) -> String {
        super::codec::encode(self)
    }

    pub fn to_labeled(&self) -> LabeledGraph {
        LabeledGraph {
            parity: self.parity,
            num_vertices: self.n as usize,
            edges: self.edges.iter().map(|&(a, b)| (a as usize, b as usize)).collect(),
            dotted: self.dotted.iter().map(|&(a, b)| (a as usize, b as usize)).collect(),
        }
    }

    /// Valence of every vertex; a tadpole counts twice, dotted edges are ignored.
    pub fn valences(&self) -> Vec<usize> {
        valences(self.n as usize, &self.edges)
    }

    pub fn is_connected(&self) -> bool {
        is_connected(self.n as usize, self.edges.iter().chain(self.dotted.iter()))
    }

    pub fn has_tadpole(&self) -> bool {
        self.edges.iter().any(|&(a, b)| a == b)
    }

    pub fn max_multiplicity(&self) -> usize {
        max_multiplicity(&self.edges)
    }
}

impl fmt::Display for CanonicalGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

impl Serialize for CanonicalGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.key())
    }
}

impl<'de> Deserialize<'de> for CanonicalGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        super::codec::decode(&s).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn valences(n: usize, edges: &[(u8, u8)]) -> Vec<usize> {
    let mut val = vec![0usize; n];
    for &(a, b) in edges {
        val[a as usize] += 1;
        val[b as usize] += 1;
    }
    val
}

pub(crate) fn is_connected<'a>(n: usize, edges: impl Iterator<Item = &'a (u8, u8)>) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut comps = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
        if ra != rb {
            parent[ra] = rb;
            comps -= 1;
        }
    }
    comps <= 1
}

pub(crate) fn max_multiplicity(edges: &[(u8, u8)]) -> usize {
    let mut sorted: Vec<(u8, u8)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    sorted.sort_unstable();
    let mut best = 0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        best = best.max(j - i);
        i = j;
    }
    best
}

/// Canonicalize a labeled graph.
///
/// Returns the representative together with the sign `s` such that
/// `g = s * representative`, or `None` when `g` is isomorphic to `-g`.
pub fn canonicalize(g: &LabeledGraph) -> Result<Option<(CanonicalGraph, i32)>> {
    g.validate()?;
    let solid: Vec<(u8, u8)> = g.edges.iter().map(|&(a, b)| (a as u8, b as u8)).collect();
    let dotted: Vec<(u8, u8)> = g.dotted.iter().map(|&(a, b)| (a as u8, b as u8)).collect();
    Ok(canonicalize_raw(g.parity, g.num_vertices, &solid, &dotted))
}

/// Unchecked fast path used by the operators: inputs must be in range.
pub(crate) fn canonicalize_raw(
    parity: Parity,
    n: usize,
    solid: &[(u8, u8)],
    dotted: &[(u8, u8)],
) -> Option<(CanonicalGraph, i32)> {
    let c = canon::canonical_form(parity, n, solid, dotted);
    if c.sign == 0 {
        None
    } else {
        Some((CanonicalGraph::from_parts_unchecked(parity, n, c.solid, c.dotted), c.sign as i32))
    }
}

/// Constraints on the underlying unoriented multigraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphConstraints {
    pub connected: bool,
    pub allow_tadpoles: bool,
    pub min_valence: usize,
    /// `None` means unbounded.
    pub max_edge_multiplicity: Option<usize>,
}

impl Default for GraphConstraints {
    fn default() -> Self {
        GraphConstraints { connected: true, allow_tadpoles: false, min_valence: 0, max_edge_multiplicity: None }
    }
}

impl GraphConstraints {
    pub fn connected() -> Self {
        Self::default()
    }

    pub fn any() -> Self {
        GraphConstraints { connected: false, ..Self::default() }
    }

    pub fn with_tadpoles(mut self, yes: bool) -> Self {
        self.allow_tadpoles = yes;
        self
    }

    pub fn with_min_valence(mut self, k: usize) -> Self {
        self.min_valence = k;
        self
    }

    pub fn with_max_multiplicity(mut self, k: Option<usize>) -> Self {
        self.max_edge_multiplicity = k;
        self
    }

    pub fn admits(&self, g: &CanonicalGraph) -> bool {
        if self.connected && !g.is_connected() {
            return false;
        }
        if !self.allow_tadpoles && g.has_tadpole() {
            return false;
        }
        if let Some(m) = self.max_edge_multiplicity {
            if g.max_multiplicity() > m {
                return false;
            }
        }
        self.min_valence == 0 || g.valences().iter().all(|&x| x >= self.min_valence)
    }

    /// Short stable tag, used in cache paths.
    pub fn tag(&self) -> String {
        format!(
            "c{}t{}v{}m{}",
            self.connected as u8,
            self.allow_tadpoles as u8,
            self.min_valence,
            self.max_edge_multiplicity.map_or("inf".to_string(), |m| m.to_string())
        )
    }
}
