//! Cohomology dimension tables of the graph complexes, cell by cell.
//!
//! A cell is a pair `(v, e)`; tables are indexed by `(e, b)` in the even case
//! and by `(v, b)` in the odd case, with `b = e - v`.

mod cache;
mod table;

pub use cache::{constraints_key, op_name, sha256_hex, Cache, CacheStats};
pub use table::{
    cohomology_dim, dim_table, labeled_nabla_dims, nabla_cohomology_check, CellDim, DimTable, Engine, Limits,
    NablaReport,
};

use serde::{Deserialize, Serialize};

use crate::calculus::OperatorTag;
use crate::error::{Error, Result};
use crate::graphcore::{GraphConstraints, Parity};

/// Which axes a table uses besides `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Grading {
    /// Columns are edge counts.
    ByEdgesAndB,
    /// Columns are vertex counts.
    ByVerticesAndB,
}

impl Grading {
    /// The `(v, e)` cell at `(axis1, b)`, or `None` if no graph can live there.
    pub fn cell(self, axis1: i64, b: i64) -> Option<(usize, usize)> {
        let (v, e) = match self {
            Grading::ByEdgesAndB => (axis1 - b, axis1),
            Grading::ByVerticesAndB => (axis1, axis1 + b),
        };
        (v >= 1 && e >= 0).then_some((v as usize, e as usize))
    }

    pub fn axes(self, v: usize, e: usize) -> (i64, i64) {
        let b = e as i64 - v as i64;
        match self {
            Grading::ByEdgesAndB => (e as i64, b),
            Grading::ByVerticesAndB => (v as i64, b),
        }
    }

    pub fn axis_name(self) -> &'static str {
        match self {
            Grading::ByEdgesAndB => "e",
            Grading::ByVerticesAndB => "v",
        }
    }
}

/// A complex: graph space, homogeneous differential and table axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub parity: Parity,
    pub differential: OperatorTag,
    pub constraints: GraphConstraints,
    pub grading: Grading,
}

impl ComplexSpec {
    pub fn new(
        parity: Parity,
        differential: OperatorTag,
        constraints: GraphConstraints,
        grading: Grading,
    ) -> Result<Self> {
        match (parity, differential) {
            (_, OperatorTag::DeltaPlusNabla) => {
                return Err(Error::Precondition(
                    "δ+∇ is not homogeneous in (v, e); use the spectral sequence module".into(),
                ))
            }
            (Parity::Odd, OperatorTag::Nabla | OperatorTag::DualDeleteEdge) => {
                return Err(Error::WrongParity { op: "nabla", parity })
            }
            (Parity::Even, OperatorTag::BracketWithTheta) => return Err(Error::WrongParity { op: "[Θ, ·]", parity }),
            _ => {}
        }
        Ok(ComplexSpec { parity, differential, constraints, grading })
    }

    /// Connected even graphs without tadpoles under `δ`, indexed by `(e, b)`.
    pub fn even_delta() -> Self {
        Self::new(Parity::Even, OperatorTag::Delta, GraphConstraints::connected(), Grading::ByEdgesAndB).unwrap()
    }

    /// Connected odd graphs under `δ`, indexed by `(v, b)`.
    pub fn odd_delta() -> Self {
        Self::new(Parity::Odd, OperatorTag::Delta, GraphConstraints::connected(), Grading::ByVerticesAndB).unwrap()
    }

    pub(crate) fn shift(&self) -> (i64, i64) {
        self.differential.shift()
    }

    /// Neighbouring cell `k` steps along the differential.
    pub(crate) fn step(&self, (v, e): (usize, usize), k: i64) -> Option<(usize, usize)> {
        let (dv, de) = self.shift();
        let (v, e) = (v as i64 + k * dv, e as i64 + k * de);
        (v >= 1 && e >= 0).then_some((v as usize, e as usize))
    }
}
