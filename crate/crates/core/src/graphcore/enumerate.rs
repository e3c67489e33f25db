//! Enumeration of isomorphism classes by edge augmentation.
//!
//! Unoriented structures are generated per `(v, e)` and memoized: connected
//! graphs come from adding an edge to a connected graph with one edge fewer, or
//! from attaching a new leaf. Constraints that survive edge deletion (no tadpoles,
//! multiplicity caps) prune during generation; the rest filter at the end.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use super::canon;
use super::graph::{CanonicalGraph, GraphConstraints, Parity};
use crate::error::{Error, Result};

type Structure = Box<[(u8, u8)]>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct MemoKey {
    v: usize,
    e: usize,
    connected: bool,
    tadpoles: bool,
    max_mult: usize,
}

fn memo() -> &'static Mutex<HashMap<MemoKey, Arc<Vec<Structure>>>> {
    static MEMO: OnceLock<Mutex<HashMap<MemoKey, Arc<Vec<Structure>>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Default cap on the number of unoriented structures in one cell.
pub const DEFAULT_STRUCTURE_LIMIT: usize = 5_000_000;

/// The ordered basis of one `(v, e)` cell.
#[derive(Debug, Clone)]
pub struct GradedBasis {
    pub parity: Parity,
    pub v: usize,
    pub e: usize,
    pub constraints: GraphConstraints,
    graphs: Vec<CanonicalGraph>,
    index: HashMap<CanonicalGraph, usize>,
}

impl GradedBasis {
    pub fn from_graphs(
        parity: Parity,
        v: usize,
        e: usize,
        constraints: GraphConstraints,
        mut graphs: Vec<CanonicalGraph>,
    ) -> Self {
        let mut keyed: Vec<(String, CanonicalGraph)> = graphs.drain(..).map(|g| (g.key(), g)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        let graphs: Vec<CanonicalGraph> = keyed.into_iter().map(|x| x.1).collect();
        let index = graphs.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        GradedBasis { parity, v, e, constraints, graphs, index }
    }

    pub fn empty(parity: Parity, v: usize, e: usize, constraints: GraphConstraints) -> Self {
        Self::from_graphs(parity, v, e, constraints, Vec::new())
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }
    pub fn graphs(&self) -> &[CanonicalGraph] {
        &self.graphs
    }
    pub fn get(&self, i: usize) -> &CanonicalGraph {
        &self.graphs[i]
    }
    pub fn index_of(&self, g: &CanonicalGraph) -> Option<usize> {
        self.index.get(g).copied()
    }
    pub fn iter(&self) -> std::slice::Iter<'_, CanonicalGraph> {
        self.graphs.iter()
    }
}

/// All nonzero classes with `v` vertices and `e` solid edges satisfying `constraints`.
pub fn enumerate_graphs(v: usize, e: usize, parity: Parity, constraints: &GraphConstraints) -> Result<GradedBasis> {
    enumerate_graphs_with_limit(v, e, parity, constraints, DEFAULT_STRUCTURE_LIMIT)
}

pub fn enumerate_graphs_with_limit(
    v: usize,
    e: usize,
    parity: Parity,
    constraints: &GraphConstraints,
    limit: usize,
) -> Result<GradedBasis> {
    if v == 0 {
        return Err(Error::EmptyGraph);
    }
    if v > super::graph::MAX_VERTICES {
        return Err(Error::Capacity { v, e, what: "too many vertices".into() });
    }
    let key = structure_key(v, e, parity, constraints);
    let structures = structures(key, limit)?;
    let c = *constraints;
    let graphs: Vec<CanonicalGraph> = structures
        .par_iter()
        .filter_map(|s| {
            let out = canon::canonical_form(parity, v, s, &[]);
            if out.sign == 0 {
                return None;
            }
            let g = CanonicalGraph::from_parts_unchecked(parity, v, out.solid, Vec::new());
            c.admits(&g).then_some(g)
        })
        .collect();
    Ok(GradedBasis::from_graphs(parity, v, e, c, graphs))
}

fn structure_key(v: usize, e: usize, parity: Parity, c: &GraphConstraints) -> MemoKey {
    let tadpoles = c.allow_tadpoles && parity == Parity::Even;
    let mut max_mult = c.max_edge_multiplicity.unwrap_or(usize::MAX);
    if parity == Parity::Even {
        max_mult = 1;
    }
    MemoKey { v, e, connected: c.connected, tadpoles, max_mult: max_mult.min(e.max(1)) }
}

fn structures(key: MemoKey, limit: usize) -> Result<Arc<Vec<Structure>>> {
    if let Some(s) = memo().lock().unwrap().get(&key) {
        return Ok(s.clone());
    }
    let MemoKey { v, e, connected, .. } = key;
    let result: Vec<Structure> = if connected {
        if e + 1 < v {
            Vec::new()
        } else if v == 1 && e == 0 {
            vec![Box::new([])]
        } else {
            let mut out = Vec::new();
            if e >= v {
                let prev = structures(MemoKey { e: e - 1, max_mult: key.max_mult.min((e - 1).max(1)), ..key }, limit)?;
                out.extend(add_edge(&prev, v, key));
            }
            if v >= 2 && e >= 1 {
                let prev = structures(
                    MemoKey { v: v - 1, e: e - 1, max_mult: key.max_mult.min((e - 1).max(1)), ..key },
                    limit,
                )?;
                out.extend(add_leaf(&prev, v - 1));
            }
            dedup(out)
        }
    } else if e == 0 {
        vec![Box::new([])]
    } else {
        let prev = structures(MemoKey { e: e - 1, max_mult: key.max_mult.min((e - 1).max(1)), ..key }, limit)?;
        dedup(add_edge(&prev, v, key))
    };
    if result.len() > limit {
        return Err(Error::Capacity { v, e, what: format!("{} structures exceed the limit {limit}", result.len()) });
    }
    let arc = Arc::new(result);
    memo().lock().unwrap().insert(key, arc.clone());
    Ok(arc)
}

fn dedup(mut v: Vec<Structure>) -> Vec<Structure> {
    v.par_sort_unstable();
    v.dedup();
    v
}

fn encoding(n: usize, edges: &[(u8, u8)]) -> Structure {
    canon::canonical_form(Parity::Odd, n, edges, &[]).solid.into_boxed_slice()
}

fn add_edge(prev: &[Structure], n: usize, key: MemoKey) -> Vec<Structure> {
    prev.par_iter()
        .flat_map_iter(|s| {
            let mut out = Vec::new();
            let mut buf: Vec<(u8, u8)> = Vec::with_capacity(s.len() + 1);
            for i in 0..n as u8 {
                for j in i..n as u8 {
                    if i == j && !key.tadpoles {
                        continue;
                    }
                    let mult = s.iter().filter(|&&x| x == (i, j)).count();
                    if mult + 1 > key.max_mult {
                        continue;
                    }
                    buf.clear();
                    buf.extend_from_slice(s);
                    buf.push((i, j));
                    out.push(encoding(n, &buf));
                }
            }
            out
        })
        .collect()
}

fn add_leaf(prev: &[Structure], old_n: usize) -> Vec<Structure> {
    prev.par_iter()
        .flat_map_iter(|s| {
            let mut out = Vec::new();
            let mut buf: Vec<(u8, u8)> = Vec::with_capacity(s.len() + 1);
            for i in 0..old_n as u8 {
                buf.clear();
                buf.extend_from_slice(s);
                buf.push((i, old_n as u8));
                out.push(encoding(old_n + 1, &buf));
            }
            out
        })
        .collect()
}
