//! Spectral sequences of filtered graph complexes inside finite windows.
//!
//! Every complex here is bigraded by cells `(v, e)`, and each pair
//! (filtration degree `p`, total degree `n`) is a single cell. For
//! `D = Σ_k D_k` with `D_k` raising `p` by `k`, the page dimensions are
//!
//! ```text
//! dim E_r^{p,n} = |G_p| - rk D[p..p+r, p..p+r] + rk D[p..p+r, p+1..p+r]
//!               - rk D'[p-r+1..=p, p-r+1..=p] + rk D'[p-r+1..p, p-r+1..=p]
//! ```
//!
//! with `D[rows, cols]` the block of `D` out of degree `n` and `D'` the one out
//! of degree `n - 1`. Only cells in these bands are read, so a page entry is
//! exact as soon as all of them lie in the window; otherwise it is flagged.

mod wheel;

pub use wheel::{wheel_graph, wheel_survival_check, WheelStatus, WheelVerdict};

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::calculus::{apply_graph, bracket, multi_edge, OperatorTag};
use crate::error::{Error, Result};
use crate::graphcore::{enumerate_graphs, CanonicalGraph, GradedBasis, GraphConstraints, Parity};
use crate::linalg::{factorial, matrix_of, matrix_of_int, rank, Field, GraphVector, Rational, SparseMatrix, PRIME_A};

pub type Cell = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Filtration {
    /// `F^p`: graphs with at least `p` vertices.
    ByVertexCount,
    /// `F^p`: graphs with `b = e - v ≥ p - 1`.
    ByBettiNumber,
}

/// The total differential of a filtered complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MixedDifferential {
    /// `δ + ∇` on even graphs.
    DeltaPlusNabla,
    /// Edge contraction plus edge deletion on even graphs, dual to `δ + ∇`.
    ContractPlusDelete,
    /// `δ + [m, ·]` on odd graphs, `m = Σ_{j ≥ 1} X_{2j+1} / (2j+1)!`.
    TwistedOdd,
}

/// Cells `(v, e)` with `v ≤ max_vertices` and `e ≤ max_edges`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub max_vertices: usize,
    pub max_edges: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FilteredComplex {
    pub parity: Parity,
    pub constraints: GraphConstraints,
    pub differential: MixedDifferential,
    pub filtration: Filtration,
    pub window: Window,
}

impl FilteredComplex {
    pub fn new(
        parity: Parity,
        constraints: GraphConstraints,
        differential: MixedDifferential,
        filtration: Filtration,
        window: Window,
    ) -> Result<Self> {
        match (parity, differential) {
            (Parity::Even, MixedDifferential::TwistedOdd) => {
                return Err(Error::WrongParity { op: "δ + [m, ·]", parity })
            }
            (Parity::Odd, MixedDifferential::DeltaPlusNabla | MixedDifferential::ContractPlusDelete) => {
                return Err(Error::WrongParity { op: "nabla", parity })
            }
            _ => {}
        }
        if parity == Parity::Odd && filtration == Filtration::ByVertexCount {
            return Err(Error::Precondition(
                "odd graphs with a fixed vertex count span infinitely many cells; filter by Betti number".into(),
            ));
        }
        Ok(FilteredComplex { parity, constraints, differential, filtration, window })
    }

    /// Connected even graphs without tadpoles under `δ + ∇`.
    pub fn even(filtration: Filtration, window: Window) -> Self {
        Self::new(Parity::Even, GraphConstraints::connected(), MixedDifferential::DeltaPlusNabla, filtration, window)
            .unwrap()
    }

    /// The predual of [`FilteredComplex::even`].
    pub fn even_dual(filtration: Filtration, window: Window) -> Self {
        Self::new(
            Parity::Even,
            GraphConstraints::connected(),
            MixedDifferential::ContractPlusDelete,
            filtration,
            window,
        )
        .unwrap()
    }

    /// Connected odd graphs under `δ + [m, ·]`, filtered by Betti number.
    pub fn odd(window: Window) -> Self {
        Self::new(
            Parity::Odd,
            GraphConstraints::connected(),
            MixedDifferential::TwistedOdd,
            Filtration::ByBettiNumber,
            window,
        )
        .unwrap()
    }

    fn dual(&self) -> bool {
        self.differential == MixedDifferential::ContractPlusDelete
    }

    /// `(p, n)` of a cell.
    pub fn coords(&self, (v, e): Cell) -> (i64, i64) {
        let (v, e) = (v as i64, e as i64);
        let s = if self.dual() { -1 } else { 1 };
        let n = match self.parity {
            Parity::Even => s * e,
            Parity::Odd => v - 1,
        };
        let p = match self.filtration {
            Filtration::ByVertexCount => s * v,
            Filtration::ByBettiNumber => s * (e - v + 1),
        };
        (p, n)
    }

    /// The cell at `(p, n)`, if such graphs can exist at all.
    pub fn cell(&self, p: i64, n: i64) -> Option<Cell> {
        let (v, e) = match (self.parity, self.dual(), self.filtration) {
            (Parity::Even, false, Filtration::ByVertexCount) => (p, n),
            (Parity::Even, false, Filtration::ByBettiNumber) => (n - p + 1, n),
            (Parity::Even, true, Filtration::ByVertexCount) => (-p, -n),
            (Parity::Even, true, Filtration::ByBettiNumber) => (-n + p + 1, -n),
            (Parity::Odd, _, _) => (n + 1, n + p),
        };
        (v >= 1 && e >= 0 && self.possible(v as usize, e as usize)).then_some((v as usize, e as usize))
    }

    /// False when no nonzero graph has `v` vertices and `e` edges.
    fn possible(&self, v: usize, e: usize) -> bool {
        let c = &self.constraints;
        if c.connected && e + 1 < v {
            return false;
        }
        let tadpoles = c.allow_tadpoles && self.parity == Parity::Even;
        if v == 1 && !tadpoles {
            return e == 0;
        }
        match self.parity {
            Parity::Even => e <= v * (v - 1) / 2 + if tadpoles { v } else { 0 },
            Parity::Odd => true,
        }
    }

    pub fn in_window(&self, (v, e): Cell) -> bool {
        v <= self.window.max_vertices && e <= self.window.max_edges
    }

    /// Every possible cell in the window.
    pub fn window_cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for v in 1..=self.window.max_vertices {
            for e in 0..=self.window.max_edges {
                if self.possible(v, e) {
                    out.push((v, e));
                }
            }
        }
        out
    }
}

/// One entry of a page.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageCell {
    pub v: usize,
    pub e: usize,
    pub p: i64,
    pub n: i64,
    pub dim: i64,
    /// The value depends on cells outside the window.
    pub flagged: bool,
}

/// A nonzero differential `d_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageDifferential {
    pub source: Cell,
    pub target: Cell,
    pub rank: i64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageReport {
    pub page: usize,
    pub cells: Vec<PageCell>,
    pub differentials: Vec<PageDifferential>,
}

impl PageReport {
    pub fn get(&self, cell: Cell) -> Option<&PageCell> {
        self.cells.iter().find(|c| (c.v, c.e) == cell)
    }

    pub fn total_dim(&self) -> i64 {
        self.cells.iter().map(|c| c.dim).sum()
    }
}

/// A cancellation observed in the window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub source: Cell,
    pub target: Cell,
    pub page: usize,
    pub rank: i64,
    /// False when the rank depends on cells outside the window.
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CancellationReport {
    pub arrows: Vec<Arrow>,
    /// Classes still alive on the last computed page, or whose fate the window cannot decide.
    pub unresolved: Vec<PageCell>,
    pub last_page: usize,
}

type RankKey = (i64, i64, i64, i64, i64);

/// Memoized page computations for one filtered complex.
pub struct SpectralSequence {
    pub fc: FilteredComplex,
    pub field: Field,
    bases: RefCell<HashMap<Cell, Arc<GradedBasis>>>,
    blocks: RefCell<HashMap<(Cell, Cell), Arc<SparseMatrix>>>,
    ranks: RefCell<HashMap<RankKey, usize>>,
}

impl SpectralSequence {
    pub fn new(fc: FilteredComplex) -> Self {
        Self::with_field(fc, Field::Prime(PRIME_A))
    }

    pub fn with_field(fc: FilteredComplex, field: Field) -> Self {
        SpectralSequence { fc, field, bases: RefCell::default(), blocks: RefCell::default(), ranks: RefCell::default() }
    }

    /// Basis of a cell; cells outside the window count as empty.
    fn basis(&self, cell: Cell) -> Result<Arc<GradedBasis>> {
        if let Some(b) = self.bases.borrow().get(&cell) {
            return Ok(b.clone());
        }
        let fc = &self.fc;
        let b = if fc.in_window(cell) && fc.possible(cell.0, cell.1) {
            enumerate_graphs(cell.0, cell.1, fc.parity, &fc.constraints)?
        } else {
            GradedBasis::empty(fc.parity, cell.0, cell.1, fc.constraints)
        };
        let b = Arc::new(b);
        self.bases.borrow_mut().insert(cell, b.clone());
        Ok(b)
    }

    fn dim_at(&self, p: i64, n: i64) -> Result<usize> {
        match self.fc.cell(p, n) {
            Some(c) => Ok(self.basis(c)?.len()),
            None => Ok(0),
        }
    }

    /// The component of the differential from `src` to `dst`.
    fn block(&self, src: Cell, dst: Cell) -> Result<Arc<SparseMatrix>> {
        if let Some(m) = self.blocks.borrow().get(&(src, dst)) {
            return Ok(m.clone());
        }
        let dom = self.basis(src)?;
        let cod = self.basis(dst)?;
        let (dv, de) = (dst.0 as i64 - src.0 as i64, dst.1 as i64 - src.1 as i64);
        let m = if dom.is_empty() || cod.is_empty() {
            SparseMatrix::zeros(cod.len(), dom.len())
        } else {
            self.component(dv, de, &dom, &cod)?
        };
        let m = Arc::new(m);
        self.blocks.borrow_mut().insert((src, dst), m.clone());
        Ok(m)
    }

    fn component(&self, dv: i64, de: i64, dom: &GradedBasis, cod: &GradedBasis) -> Result<SparseMatrix> {
        let int_op = |tag: OperatorTag, dom: &GradedBasis, cod: &GradedBasis| {
            matrix_of_int(|g| apply_graph(tag, g).unwrap(), dom, cod)
        };
        match (self.fc.differential, dv, de) {
            (MixedDifferential::DeltaPlusNabla, 1, 1) | (MixedDifferential::TwistedOdd, 1, 1) => {
                int_op(OperatorTag::Delta, dom, cod)
            }
            (MixedDifferential::DeltaPlusNabla, 0, 1) => int_op(OperatorTag::Nabla, dom, cod),
            // transposes of the primal blocks: the pairing with the primal
            // complex is diagonal, so ranks and page dimensions agree
            (MixedDifferential::ContractPlusDelete, -1, -1) => Ok(int_op(OperatorTag::Delta, cod, dom)?.transpose()),
            (MixedDifferential::ContractPlusDelete, 0, -1) => Ok(int_op(OperatorTag::Nabla, cod, dom)?.transpose()),
            (MixedDifferential::TwistedOdd, 1, k) if k >= 3 && k % 2 == 1 => {
                let x =
                    GraphVector::from_graph(multi_edge(Parity::Odd, k as usize).expect("odd multi-edges are nonzero"));
                let c = Rational::new(1.into(), factorial(k as u64));
                matrix_of(
                    |g: &CanonicalGraph| Ok(bracket(&x, &GraphVector::from_graph(g.clone()))?.scale(&c)),
                    dom,
                    cod,
                )
            }
            _ => Ok(SparseMatrix::zeros(cod.len(), dom.len())),
        }
    }

    /// Rank of the part of `D` out of degree `n` with source filtrations
    /// `cols` and target filtrations `rows` (half-open ranges).
    fn rank_block(&self, n: i64, cols: (i64, i64), rows: (i64, i64)) -> Result<usize> {
        if cols.0 >= cols.1 || rows.0 >= rows.1 {
            return Ok(0);
        }
        let key = (n, cols.0, cols.1, rows.0, rows.1);
        if let Some(&r) = self.ranks.borrow().get(&key) {
            return Ok(r);
        }
        let mut col_cells = Vec::new();
        let mut col_off = 0;
        for p in cols.0..cols.1 {
            if let Some(c) = self.fc.cell(p, n) {
                let len = self.basis(c)?.len();
                col_cells.push((c, col_off));
                col_off += len;
            }
        }
        let mut triplets = Vec::new();
        let mut row_off = 0;
        for q in rows.0..rows.1 {
            let Some(t) = self.fc.cell(q, n + 1) else { continue };
            for &(s, off) in &col_cells {
                let m = self.block(s, t)?;
                triplets.extend(m.entries().map(|(i, j, x)| (i + row_off, j + off, x)));
            }
            row_off += self.basis(t)?.len();
        }
        let m = SparseMatrix::from_rational_triplets(row_off, col_off, triplets)?;
        let r = rank(&m, self.field);
        self.ranks.borrow_mut().insert(key, r);
        Ok(r)
    }

    /// Cells read by `rank_block(n, cols, rows)`.
    fn touched(&self, n: i64, cols: (i64, i64), rows: (i64, i64)) -> bool {
        let outside = |p: i64, n: i64| self.fc.cell(p, n).is_some_and(|c| !self.fc.in_window(c));
        (cols.0..cols.1).any(|p| outside(p, n)) || (rows.0..rows.1).any(|q| outside(q, n + 1))
    }

    fn z_term(&self, p: i64, n: i64, r: i64) -> Result<(i64, bool)> {
        let rows = (p, p + r);
        let a = self.rank_block(n, (p, p + r), rows)?;
        let b = self.rank_block(n, (p + 1, p + r), rows)?;
        let flagged = self.touched(n, (p, p + r), rows);
        Ok((self.dim_at(p, n)? as i64 - a as i64 + b as i64, flagged))
    }

    fn b_term(&self, p: i64, n: i64, r: i64) -> Result<(i64, bool)> {
        let cols = (p - r + 1, p + 1);
        let a = self.rank_block(n - 1, cols, (p - r + 1, p + 1))?;
        let b = self.rank_block(n - 1, cols, (p - r + 1, p))?;
        Ok((a as i64 - b as i64, self.touched(n - 1, cols, (p - r + 1, p + 1))))
    }

    /// `dim E_r^{p,n}` and whether it is window-limited.
    pub fn entry(&self, p: i64, n: i64, r: usize) -> Result<(i64, bool)> {
        let r = r as i64;
        let (z, fz) = self.z_term(p, n, r)?;
        let (b, fb) = self.b_term(p, n, r)?;
        Ok((z - b, fz || fb))
    }

    /// Rank of `d_r` into `(q, n)`.
    pub fn rank_into(&self, q: i64, n: i64, r: usize) -> Result<(i64, bool)> {
        let r = r as i64;
        let (hi, f1) = self.b_term(q, n, r + 1)?;
        let (lo, f2) = self.b_term(q, n, r)?;
        Ok((hi - lo, f1 || f2))
    }

    /// Rank of `d_r` out of `(p, n)`.
    pub fn rank_out(&self, p: i64, n: i64, r: usize) -> Result<(i64, bool)> {
        self.rank_into(p + r as i64, n + 1, r)
    }

    pub fn page(&self, r: usize) -> Result<PageReport> {
        if r == 0 {
            return Err(Error::Precondition("pages start at 1".into()));
        }
        let mut cells = Vec::new();
        let mut differentials = Vec::new();
        for c in self.fc.window_cells() {
            let (p, n) = self.fc.coords(c);
            let (dim, flagged) = self.entry(p, n, r)?;
            cells.push(PageCell { v: c.0, e: c.1, p, n, dim, flagged });
            if let Some(t) = self.fc.cell(p + r as i64, n + 1) {
                let (rank, flagged) = self.rank_out(p, n, r)?;
                if rank != 0 {
                    differentials.push(PageDifferential { source: c, target: t, rank, flagged });
                }
            }
        }
        Ok(PageReport { page: r, cells, differentials })
    }

    /// Number of pages after which nothing in the window can change.
    pub fn span(&self) -> usize {
        let ps: BTreeSet<i64> = self.fc.window_cells().into_iter().map(|c| self.fc.coords(c).0).collect();
        match (ps.first(), ps.last()) {
            (Some(a), Some(b)) => (b - a + 1) as usize,
            _ => 0,
        }
    }

    pub fn cancellations(&self, max_page: usize) -> Result<CancellationReport> {
        let mut arrows = Vec::new();
        let mut last = None;
        for r in 1..=max_page {
            let page = self.page(r)?;
            for d in &page.differentials {
                arrows.push(Arrow { source: d.source, target: d.target, page: r, rank: d.rank, verified: !d.flagged });
            }
            last = Some(page);
        }
        let Some(last) = last else {
            return Ok(CancellationReport { arrows, unresolved: Vec::new(), last_page: 0 });
        };
        let unresolved = last
            .cells
            .iter()
            .filter(|c| c.dim != 0 || c.flagged)
            .filter(|c| {
                let out = last.differentials.iter().filter(|d| d.source == (c.v, c.e)).map(|d| d.rank).sum::<i64>();
                let inc = last.differentials.iter().filter(|d| d.target == (c.v, c.e)).map(|d| d.rank).sum::<i64>();
                c.flagged || c.dim - out - inc != 0
            })
            .cloned()
            .collect();
        Ok(CancellationReport { arrows, unresolved, last_page: max_page })
    }
}

pub fn page_dims(fc: &FilteredComplex, r: usize) -> Result<PageReport> {
    SpectralSequence::new(*fc).page(r)
}

/// Cancellations on pages `1..=span`, where `span` is the filtration width of the window.
pub fn cancellation_report(fc: &FilteredComplex) -> Result<CancellationReport> {
    let ss = SpectralSequence::new(*fc);
    let pages = ss.span();
    ss.cancellations(pages)
}
