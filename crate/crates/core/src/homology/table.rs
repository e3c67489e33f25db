use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cache::{constraints_key, Cache};
use super::{ComplexSpec, Grading};
use crate::calculus::labeled::{nabla_mask, num_pairs};
use crate::calculus::{operator_matrix, OperatorTag};
use crate::error::{Error, Result};
use crate::graphcore::{enumerate_graphs_with_limit, GradedBasis, GraphConstraints, Parity, DEFAULT_STRUCTURE_LIMIT};
use crate::linalg::{rank, rank_mod_p, rank_rational_bounded, Field, SparseMatrix, PRIME_A};

type Cell = (usize, usize);

/// Per-cell capacity bounds; cells beyond them are reported as unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Cap on unoriented structures enumerated for one cell.
    pub max_structures: usize,
    /// Cap on the size of any basis taking part in a cell.
    pub max_basis: usize,
    /// Cap on coefficient bits during rational elimination.
    pub max_rational_bits: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_structures: DEFAULT_STRUCTURE_LIMIT, max_basis: 400_000, max_rational_bits: 4096 }
    }
}

/// One entry of a table. `dim` is `None` when the cell could not be computed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDim {
    pub axis1: i64,
    pub b: i64,
    pub v: usize,
    pub e: usize,
    pub dim: Option<usize>,
    pub basis: Option<usize>,
    pub rank_in: Option<usize>,
    pub rank_out: Option<usize>,
    /// Whether the composite of the incoming and outgoing matrices was checked to vanish.
    pub composite_checked: bool,
    pub note: Option<String>,
}

/// Cohomology dimensions over a range of cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimTable {
    pub spec: ComplexSpec,
    pub field: Field,
    pub cells: Vec<CellDim>,
}

impl DimTable {
    pub fn get(&self, axis1: i64, b: i64) -> Option<&CellDim> {
        self.cells.iter().find(|c| c.axis1 == axis1 && c.b == b)
    }

    /// Dimension at `(axis1, b)`; `None` if unknown or outside the table.
    pub fn dim(&self, axis1: i64, b: i64) -> Option<usize> {
        self.get(axis1, b).and_then(|c| c.dim)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cells with a nonzero dimension.
    pub fn nonzero(&self) -> Vec<(i64, i64, usize)> {
        self.cells.iter().filter_map(|c| c.dim.filter(|&d| d > 0).map(|d| (c.axis1, c.b, d))).collect()
    }

    pub fn unknown(&self) -> Vec<&CellDim> {
        self.cells.iter().filter(|c| c.dim.is_none()).collect()
    }

    pub fn to_csv(&self) -> String {
        let opt = |x: Option<usize>| x.map_or("?".to_string(), |d| d.to_string());
        let mut s = format!("{},b,v,e,dim,field,basis,rank_in,rank_out\n", self.spec.grading.axis_name());
        for c in &self.cells {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                c.axis1,
                c.b,
                c.v,
                c.e,
                opt(c.dim),
                self.field,
                opt(c.basis),
                opt(c.rank_in),
                opt(c.rank_out)
            )
            .unwrap();
        }
        s
    }

    /// The table with its metadata as a JSON document.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "spec": self.spec,
            "field": self.field.to_string(),
            "constraints_tag": self.spec.constraints.tag(),
            "cache_key": constraints_key(&self.spec.constraints),
            "cells": self.cells,
        })
    }

    /// The table laid out as in print: one row per `b`, one column per `axis1`.
    pub fn render(&self) -> String {
        let cols: BTreeSet<i64> = self.cells.iter().map(|c| c.axis1).collect();
        let rows: BTreeSet<i64> = self.cells.iter().map(|c| c.b).collect();
        let mut s = format!("{:>4}", format!("b\\{}", self.spec.grading.axis_name()));
        for a in &cols {
            write!(s, "{a:>4}").unwrap();
        }
        s.push('\n');
        for b in &rows {
            write!(s, "{b:>4}").unwrap();
            for a in &cols {
                let text = match self.get(*a, *b) {
                    Some(c) => c.dim.map_or("?".to_string(), |d| d.to_string()),
                    None => String::new(),
                };
                write!(s, "{text:>4}").unwrap();
            }
            s.push('\n');
        }
        s
    }
}

/// Computes cells of one complex, optionally through a disk cache.
pub struct Engine {
    pub spec: ComplexSpec,
    pub field: Field,
    pub limits: Limits,
    cache: Option<Arc<Cache>>,
}

impl Engine {
    pub fn new(spec: ComplexSpec, field: Field) -> Self {
        Engine { spec, field, limits: Limits::default(), cache: None }
    }

    pub fn with_cache(mut self, cache: Arc<Cache>) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn cache(&self) -> Option<&Cache> {
        self.cache.as_deref()
    }

    fn enumerate(&self, (v, e): Cell) -> Result<GradedBasis> {
        let s = &self.spec;
        let make = || enumerate_graphs_with_limit(v, e, s.parity, &s.constraints, self.limits.max_structures);
        let b = match &self.cache {
            Some(c) => c.basis_or(s.parity, &s.constraints, v, e, make)?,
            None => make()?,
        };
        if b.len() > self.limits.max_basis {
            return Err(Error::Capacity { v, e, what: format!("basis of size {} over the limit", b.len()) });
        }
        Ok(b)
    }

    fn build_matrix(&self, src: Cell, dom: &GradedBasis, cod: &GradedBasis) -> Result<SparseMatrix> {
        let s = &self.spec;
        let make = || operator_matrix(s.differential, dom, cod);
        let Some(cache) = &self.cache else { return make() };
        let m = cache.matrix_or(s.parity, &s.constraints, s.differential, src.0, src.1, make)?;
        if m.rows() == cod.len() && m.cols() == dom.len() {
            return Ok(m);
        }
        let m = make()?;
        cache.store_matrix(s.parity, &s.constraints, super::op_name(s.differential), src.0, src.1, &m)?;
        Ok(m)
    }

    fn rank_of(&self, m: &SparseMatrix) -> Result<usize> {
        match self.field {
            Field::Rational => rank_rational_bounded(m, self.limits.max_rational_bits),
            f => Ok(rank(m, f)),
        }
    }

    /// Dimensions at the given `(axis1, b)` positions.
    pub fn cells(&self, positions: &[(i64, i64)]) -> Vec<CellDim> {
        let spec = self.spec;
        let middles: Vec<Option<Cell>> = positions.iter().map(|&(a, b)| spec.grading.cell(a, b)).collect();
        let mut needed: BTreeSet<Cell> = BTreeSet::new();
        let mut sources: BTreeSet<Cell> = BTreeSet::new();
        for m in middles.iter().flatten() {
            needed.insert(*m);
            sources.insert(*m);
            if let Some(p) = spec.step(*m, -1) {
                needed.insert(p);
                sources.insert(p);
            }
            if let Some(n) = spec.step(*m, 1) {
                needed.insert(n);
            }
        }
        let mut bases: BTreeMap<Cell, Result<Arc<GradedBasis>>> = BTreeMap::new();
        for &c in &needed {
            bases.insert(c, self.enumerate(c).map(Arc::new));
        }
        let basis = |c: Option<Cell>| -> Result<Option<Arc<GradedBasis>>> {
            match c {
                None => Ok(None),
                Some(c) => bases[&c].clone().map(Some),
            }
        };
        let mut matrices: BTreeMap<Cell, Result<Arc<SparseMatrix>>> = BTreeMap::new();
        for &src in &sources {
            let m = (|| {
                let dom = basis(Some(src))?.unwrap();
                let cod = basis(spec.step(src, 1))?;
                let m = match cod {
                    Some(cod) if !dom.is_empty() && !cod.is_empty() => self.build_matrix(src, &dom, &cod)?,
                    other => SparseMatrix::zeros(other.map_or(0, |c| c.len()), dom.len()),
                };
                Ok(Arc::new(m))
            })();
            matrices.insert(src, m);
        }
        let ranks: BTreeMap<Cell, Result<usize>> = matrices
            .par_iter()
            .map(|(c, m)| (*c, m.as_ref().map_err(Clone::clone).and_then(|m| self.rank_of(m))))
            .collect();
        positions
            .par_iter()
            .zip(middles.par_iter())
            .map(|(&(axis1, b), mid)| {
                let Some(mid) = *mid else {
                    return CellDim {
                        axis1,
                        b,
                        v: 0,
                        e: 0,
                        dim: Some(0),
                        basis: Some(0),
                        rank_in: Some(0),
                        rank_out: Some(0),
                        composite_checked: true,
                        note: Some("no graphs in this cell".into()),
                    };
                };
                let mut cell = CellDim {
                    axis1,
                    b,
                    v: mid.0,
                    e: mid.1,
                    dim: None,
                    basis: None,
                    rank_in: None,
                    rank_out: None,
                    composite_checked: false,
                    note: None,
                };
                let prev = spec.step(mid, -1);
                let outcome = (|| -> Result<()> {
                    let size = bases[&mid].as_ref().map_err(Clone::clone)?.len();
                    cell.basis = Some(size);
                    let out = matrices[&mid].as_ref().map_err(Clone::clone)?;
                    let r_out = ranks[&mid].clone()?;
                    cell.rank_out = Some(r_out);
                    let r_in = match prev {
                        None => 0,
                        Some(p) => {
                            let inm = matrices[&p].as_ref().map_err(Clone::clone)?;
                            if !out.is_zero() && !inm.is_zero() && !out.mul(inm)?.is_zero() {
                                return Err(Error::Precondition("the differential does not square to zero".into()));
                            }
                            ranks[&p].clone()?
                        }
                    };
                    cell.composite_checked = true;
                    cell.rank_in = Some(r_in);
                    cell.dim = Some(size - r_out - r_in);
                    Ok(())
                })();
                if let Err(e) = outcome {
                    cell.note = Some(e.to_string());
                }
                cell
            })
            .collect()
    }

    /// Every cell of the rectangle `axis1 × b`.
    pub fn table(&self, axis1: impl IntoIterator<Item = i64>, b: impl IntoIterator<Item = i64> + Clone) -> DimTable {
        let positions: Vec<(i64, i64)> =
            axis1.into_iter().flat_map(|a| b.clone().into_iter().map(move |b| (a, b))).collect();
        self.table_at(&positions)
    }

    pub fn table_at(&self, positions: &[(i64, i64)]) -> DimTable {
        let mut cells = self.cells(positions);
        cells.sort_by_key(|c| (c.b, c.axis1));
        DimTable { spec: self.spec, field: self.field, cells }
    }
}

/// Dimension of one cell; unknown cells are an error.
pub fn cohomology_dim(spec: &ComplexSpec, cell: (i64, i64), field: Field) -> Result<usize> {
    let c = Engine::new(*spec, field).cells(&[cell]).pop().unwrap();
    c.dim.ok_or_else(|| match c.note {
        Some(n) => Error::Capacity { v: c.v, e: c.e, what: n },
        None => Error::Capacity { v: c.v, e: c.e, what: "unknown".into() },
    })
}

/// A table over a rectangle of `(axis1, b)` positions; per-cell failures show as `?`.
pub fn dim_table(
    spec: &ComplexSpec,
    axis1: impl IntoIterator<Item = i64>,
    b: impl IntoIterator<Item = i64> + Clone,
    field: Field,
) -> DimTable {
    Engine::new(*spec, field).table(axis1, b)
}

/// `∇`-cohomology of even graphs without tadpoles, per vertex count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NablaReport {
    /// `(v, total dimension)` over all graphs.
    pub all_graphs: Vec<(usize, Option<usize>)>,
    /// `(v, total dimension)` over connected graphs.
    pub connected: Vec<(usize, Option<usize>)>,
    pub tables: Vec<DimTable>,
}

impl NablaReport {
    /// One class (the point) for all graphs; two (point and edge) for connected ones.
    pub fn holds(&self) -> bool {
        let all = self.all_graphs.iter().all(|&(v, d)| d == Some(usize::from(v == 1)));
        let conn = self.connected.iter().all(|&(v, d)| d == Some(usize::from(v <= 2)));
        all && conn
    }
}

pub fn nabla_cohomology_check(max_v: usize, field: Field) -> Result<NablaReport> {
    let mut report = NablaReport { all_graphs: Vec::new(), connected: Vec::new(), tables: Vec::new() };
    for connected in [false, true] {
        let c = GraphConstraints { connected, ..GraphConstraints::any() }.with_tadpoles(false);
        let spec = ComplexSpec::new(Parity::Even, OperatorTag::Nabla, c, Grading::ByVerticesAndB)?;
        let engine = Engine::new(spec, field);
        let mut positions = Vec::new();
        for v in 1..=max_v as i64 {
            for e in 0..=num_pairs(v as usize) as i64 {
                positions.push((v, e - v));
            }
        }
        let table = engine.table_at(&positions);
        let totals = (1..=max_v)
            .map(|v| {
                let cells = table.cells.iter().filter(|c| c.axis1 == v as i64);
                (v, cells.map(|c| c.dim).sum::<Option<usize>>())
            })
            .collect();
        if connected {
            report.connected = totals;
        } else {
            report.all_graphs = totals;
        }
        report.tables.push(table);
    }
    Ok(report)
}

/// `∇`-cohomology of the labeled space `V_n`, one entry per edge count.
pub fn labeled_nabla_dims(n: usize) -> Result<Vec<usize>> {
    if n == 0 || n > 7 {
        return Err(Error::Capacity { v: n, e: num_pairs(n), what: "labeled spaces need 1..=7 vertices".into() });
    }
    let k = num_pairs(n);
    let mut by_edges: Vec<Vec<u64>> = vec![Vec::new(); k + 1];
    for mask in 0..1u64 << k {
        by_edges[mask.count_ones() as usize].push(mask);
    }
    let index = |e: usize, m: u64| by_edges[e].binary_search(&m).unwrap();
    let ranks: Vec<usize> = (0..k)
        .into_par_iter()
        .map(|e| {
            let mut t = Vec::new();
            for (j, &m) in by_edges[e].iter().enumerate() {
                for (h, s) in nabla_mask(n, m) {
                    t.push((index(e + 1, h), j, s));
                }
            }
            let m = SparseMatrix::from_triplets(by_edges[e + 1].len(), by_edges[e].len(), t).unwrap();
            rank_mod_p(&m, PRIME_A)
        })
        .collect();
    Ok((0..=k)
        .map(|e| {
            let out = if e < k { ranks[e] } else { 0 };
            let inc = if e > 0 { ranks[e - 1] } else { 0 };
            by_edges[e].len() - out - inc
        })
        .collect())
}
