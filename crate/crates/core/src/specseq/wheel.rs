//! The wheel class and its loop partner in the dual even spectral sequence.

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{Cell, FilteredComplex, Filtration, SpectralSequence, Window};
use crate::calculus::{apply_graph, loop_graph, OperatorTag};
use crate::error::{Error, Result};
use crate::graphcore::{enumerate_graphs, CanonicalGraph, GradedBasis, GraphConstraints, LabeledGraph, Parity};
use crate::linalg::{matrix_of_int, rank, Field, Rational, SparseMatrix, PRIME_A};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum WheelStatus {
    Verified,
    Failed(String),
    /// The window cannot decide the question.
    Unknown(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WheelVerdict {
    pub j: usize,
    pub wheel_cell: Cell,
    pub loop_cell: Cell,
    pub status: WheelStatus,
    /// `d WG = 0` for edge contraction.
    pub wheel_closed: bool,
    /// Every graph of `∇ WG` (edge deletion) has a bivalent vertex.
    pub image_bivalent: bool,
    /// Cohomology of the bivalent subcomplex with `4j+1` edges, per cell.
    pub bivalent_cohomology: Vec<(Cell, usize)>,
    /// Dimensions of the wheel entry on pages `1..=2j`.
    pub wheel_pages: Vec<i64>,
    /// Rank of the page-`2j` differential from the wheel cell to the loop cell.
    pub partner_rank: Option<i64>,
}

/// The wheel with `2j+1` spokes as an even graph.
pub fn wheel_graph(j: usize) -> Result<CanonicalGraph> {
    if j == 0 {
        return Err(Error::Precondition("wheels need j ≥ 1".into()));
    }
    let k = 2 * j + 1;
    let mut edges: Vec<(usize, usize)> = (1..=k).map(|i| (0, i)).collect();
    edges.extend((1..=k).map(|i| (i, i % k + 1)));
    LabeledGraph::new(Parity::Even, k + 1, edges)
        .canonicalize()?
        .map(|x| x.0)
        .ok_or_else(|| Error::Precondition(format!("the wheel with {k} spokes vanishes")))
}

fn has_bivalent(g: &CanonicalGraph) -> bool {
    g.valences().contains(&2)
}

fn connected_basis(v: usize, e: usize) -> Result<GradedBasis> {
    let c = GraphConstraints::connected();
    if v == 0 {
        return Ok(GradedBasis::empty(Parity::Even, 0, e, c));
    }
    enumerate_graphs(v, e, Parity::Even, &c)
}

/// The dual of `tag` from `dom` to `cod`, as the transpose of the primal block.
fn dual_block(tag: OperatorTag, dom: &GradedBasis, cod: &GradedBasis) -> Result<SparseMatrix> {
    Ok(matrix_of_int(|g| apply_graph(tag, g).unwrap(), cod, dom)?.transpose())
}

/// Rows hit by column `j`.
fn column(m: &SparseMatrix, j: usize) -> Vec<usize> {
    m.entries().filter(|e| e.1 == j).map(|e| e.0).collect()
}

fn bivalent_indices(b: &GradedBasis) -> Vec<Option<usize>> {
    let mut k = 0;
    b.iter()
        .map(|g| {
            has_bivalent(g).then(|| {
                k += 1;
                k - 1
            })
        })
        .collect()
}

/// Restricts `m` to bivalent graphs, or returns the first domain graph whose
/// image leaves them.
fn restrict(
    m: &SparseMatrix,
    dom: &GradedBasis,
    cod: &GradedBasis,
) -> Result<std::result::Result<SparseMatrix, String>> {
    let (ci, ri) = (bivalent_indices(dom), bivalent_indices(cod));
    let cols = ci.iter().flatten().count();
    let rows = ri.iter().flatten().count();
    let mut t = Vec::new();
    for (i, j, x) in m.entries() {
        let Some(jj) = ci[j] else { continue };
        match ri[i] {
            Some(ii) => t.push((ii, jj, x)),
            None => return Ok(Err(dom.get(j).to_string())),
        }
    }
    Ok(Ok(SparseMatrix::from_rational_triplets(rows, cols, t)?))
}

/// Checks that `WG_{2j+1}` survives to page `2j` of the dual even spectral
/// sequence (Betti filtration) and is paired there with `L_{4j+1}`.
pub fn wheel_survival_check(j: usize, window: Window) -> Result<WheelVerdict> {
    let wheel = wheel_graph(j)?;
    let lp = loop_graph(Parity::Even, 4 * j + 1)
        .ok_or_else(|| Error::Precondition(format!("the loop with {} edges vanishes", 4 * j + 1)))?;
    let wheel_cell = (2 * j + 2, 4 * j + 2);
    let loop_cell = (4 * j + 1, 4 * j + 1);
    let fc = FilteredComplex::even_dual(Filtration::ByBettiNumber, window);
    let mut verdict = WheelVerdict {
        j,
        wheel_cell,
        loop_cell,
        status: WheelStatus::Unknown(String::new()),
        wheel_closed: false,
        image_bivalent: false,
        bivalent_cohomology: Vec::new(),
        wheel_pages: Vec::new(),
        partner_rank: None,
    };
    for (name, c) in [("wheel", wheel_cell), ("loop", loop_cell)] {
        if !fc.in_window(c) {
            verdict.status = WheelStatus::Unknown(format!("the window excludes the {name} cell {c:?}"));
            return Ok(verdict);
        }
    }

    let (wv, we) = wheel_cell;
    let home = connected_basis(wv, we)?;
    let w = home.index_of(&wheel).expect("the wheel is connected");
    verdict.wheel_closed =
        column(&dual_block(OperatorTag::Delta, &home, &connected_basis(wv - 1, we - 1)?)?, w).is_empty();
    let deleted = connected_basis(wv, we - 1)?;
    let image = column(&dual_block(OperatorTag::Nabla, &home, &deleted)?, w);
    verdict.image_bivalent = !image.is_empty() && image.iter().all(|&i| has_bivalent(deleted.get(i)));

    // cohomology of the bivalent subcomplex under contraction, 4j+1 edges
    let e = 4 * j + 1;
    let f = Field::Prime(PRIME_A);
    for v in 2..=window.max_vertices.min(e + 1) {
        let mid = connected_basis(v, e)?;
        if !mid.iter().any(has_bivalent) {
            continue;
        }
        let below = connected_basis(v - 1, e - 1)?;
        let above = connected_basis(v + 1, e + 1)?;
        let mut parts = Vec::new();
        for (dom, cod) in [(&mid, &below), (&above, &mid)] {
            match restrict(&dual_block(OperatorTag::Delta, dom, cod)?, dom, cod)? {
                Ok(m) => parts.push(m),
                Err(g) => {
                    verdict.status = WheelStatus::Failed(format!("contraction leaves the bivalent subcomplex at {g}"));
                    return Ok(verdict);
                }
            }
        }
        let (out, inc) = (&parts[0], &parts[1]);
        let n = bivalent_indices(&mid).iter().flatten().count();
        let dim = n - rank(out, f) - rank(inc, f);
        verdict.bivalent_cohomology.push(((v, e), dim));
        if (v, e) == loop_cell {
            let i = bivalent_indices(&mid)[mid.index_of(&lp).expect("the loop is connected")]
                .expect("the loop is bivalent");
            let lm = SparseMatrix::from_rational_triplets(n, 1, vec![(i, 0, Rational::one())])?;
            let closed = out.mul(&lm)?.is_zero();
            let nonexact = rank(&SparseMatrix::hcat(&[inc, &lm])?, f) > rank(inc, f);
            if !(closed && nonexact) {
                verdict.status =
                    WheelStatus::Failed("the loop does not represent a class of the bivalent subcomplex".into());
                return Ok(verdict);
            }
        }
    }
    let total: usize = verdict.bivalent_cohomology.iter().map(|x| x.1).sum();
    let at_loop = verdict.bivalent_cohomology.iter().find(|x| x.0 == loop_cell).map_or(0, |x| x.1);

    let ss = SpectralSequence::new(fc);
    let (pw, nw) = fc.coords(wheel_cell);
    let mut limited = false;
    for r in 1..=2 * j {
        let (d, flagged) = ss.entry(pw, nw, r)?;
        limited |= flagged;
        verdict.wheel_pages.push(d);
        if r < 2 * j {
            let (out, f) = ss.rank_out(pw, nw, r)?;
            limited |= f;
            if out != 0 {
                verdict.status = WheelStatus::Failed(format!("the wheel entry supports a differential on page {r}"));
                return Ok(verdict);
            }
        }
    }
    let (rk, flagged) = ss.rank_out(pw, nw, 2 * j)?;
    limited |= flagged;
    verdict.partner_rank = Some(rk);
    debug_assert_eq!(fc.cell(pw + 2 * j as i64, nw + 1), Some(loop_cell));

    verdict.status = if limited {
        WheelStatus::Unknown("page entries depend on cells outside the window".into())
    } else if !verdict.wheel_closed || !verdict.image_bivalent {
        WheelStatus::Failed("the wheel is not closed or its image leaves the bivalent subcomplex".into())
    } else if total != 1 || at_loop != 1 {
        WheelStatus::Failed(format!("bivalent cohomology with {e} edges is {total}-dimensional"))
    } else if verdict.wheel_pages.iter().any(|&d| d < 1) || rk != 1 {
        WheelStatus::Failed(format!("no rank-one differential from the wheel to the loop on page {}", 2 * j))
    } else {
        WheelStatus::Verified
    };
    Ok(verdict)
}
