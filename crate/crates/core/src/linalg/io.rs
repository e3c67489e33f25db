//! Text formats: matrices as `rows cols nnz field` followed by `row col value`
//! triplets, bases as one encoded graph per line.

use std::fmt::Write;

use super::matrix::SparseMatrix;
use super::scalar::{parse_rational, reduce_i64, Field, Rational};
use crate::error::{Error, Result};
use crate::graphcore::{decode, CanonicalGraph, GradedBasis, GraphConstraints, Parity};

/// Write the matrix. Over a prime field the values are reduced residues of the
/// unscaled integer matrix, which has the same rank.
pub fn write_matrix(m: &SparseMatrix, field: Field) -> String {
    let mut s = String::new();
    writeln!(s, "{} {} {} {}", m.rows(), m.cols(), m.nnz(), field).unwrap();
    match field {
        Field::Rational => {
            for (r, c, v) in m.entries() {
                writeln!(s, "{r} {c} {v}").unwrap();
            }
        }
        Field::Prime(p) => {
            for (r, c, v) in m.int_entries() {
                writeln!(s, "{r} {c} {}", reduce_i64(v, p)).unwrap();
            }
        }
    }
    s
}

pub fn read_matrix(text: &str) -> Result<(SparseMatrix, Field)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::Parse { pos: 0, msg: "empty matrix file".into() })?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 {
        return Err(Error::Parse { pos: 0, msg: "expected `rows cols nnz field`".into() });
    }
    let num = |s: &str, i: usize| -> Result<usize> {
        s.parse().map_err(|_| Error::Parse { pos: i, msg: format!("bad count `{s}`") })
    };
    let (rows, cols, nnz) = (num(h[0], 0)?, num(h[1], 0)?, num(h[2], 0)?);
    let field: Field = h[3].parse()?;
    let mut triplets = Vec::with_capacity(nnz);
    for (lineno, line) in lines {
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 3 {
            return Err(Error::Parse { pos: lineno, msg: "expected `row col value`".into() });
        }
        triplets.push((num(t[0], lineno)?, num(t[1], lineno)?, parse_rational(t[2])?));
    }
    if triplets.len() != nnz {
        return Err(Error::Parse { pos: 0, msg: format!("header announces {nnz} entries, found {}", triplets.len()) });
    }
    let m = SparseMatrix::from_rational_triplets(rows, cols, triplets)?;
    Ok((m, field))
}

pub fn write_basis(b: &GradedBasis) -> String {
    let mut s = String::new();
    for g in b.iter() {
        s.push_str(&g.key());
        s.push('\n');
    }
    s
}

/// Read a basis file; the stored order is kept only if it is the sorted order.
pub fn read_basis(text: &str, parity: Parity, v: usize, e: usize, c: GraphConstraints) -> Result<GradedBasis> {
    let graphs: Vec<CanonicalGraph> =
        text.lines().filter(|l| !l.trim().is_empty()).map(decode).collect::<Result<_>>()?;
    for g in &graphs {
        if g.parity() != parity || g.num_vertices() != v || g.num_edges() != e {
            return Err(Error::Precondition(format!("basis entry {g} does not belong to cell ({v}, {e})")));
        }
    }
    let n = graphs.len();
    let b = GradedBasis::from_graphs(parity, v, e, c, graphs);
    if b.len() != n {
        return Err(Error::Precondition("duplicate basis entries".into()));
    }
    Ok(b)
}

pub fn rational_to_string(q: &Rational) -> String {
    q.to_string()
}
