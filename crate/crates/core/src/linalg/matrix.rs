use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::scalar::Rational;
use super::vector::GraphVector;
use crate::error::{Error, Result};
use crate::graphcore::{CanonicalGraph, GradedBasis};

/// Sparse matrix `scale * A` with `A` integral.
///
/// Entries are kept sorted by `(col, row)`, nonzero and unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(u32, u32, i64)>,
    scale: Rational,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: Vec::new(), scale: Rational::one() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, 1)).collect()).unwrap()
    }

    /// Duplicate positions are summed.
    pub fn from_triplets(rows: usize, cols: usize, triplets: Vec<(usize, usize, i64)>) -> Result<Self> {
        let mut entries = Vec::with_capacity(triplets.len());
        for (r, c, x) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::Dimension(format!("entry ({r}, {c}) outside {rows}x{cols}")));
            }
            entries.push((c as u32, r as u32, x));
        }
        entries.sort_unstable_by_key(|&(c, r, _)| (c, r));
        let mut merged: Vec<(u32, u32, i64)> = Vec::with_capacity(entries.len());
        for (c, r, x) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == c && last.1 == r => {
                    last.2 = last.2.checked_add(x).ok_or_else(|| Error::Dimension("entry overflow".into()))?;
                }
                _ => merged.push((c, r, x)),
            }
        }
        merged.retain(|e| e.2 != 0);
        Ok(SparseMatrix { rows, cols, entries: merged, scale: Rational::one() })
    }

    pub fn from_rational_triplets(rows: usize, cols: usize, triplets: Vec<(usize, usize, Rational)>) -> Result<Self> {
        let mut lcm = BigInt::one();
        for (_, _, x) in &triplets {
            lcm = lcm.lcm(x.denom());
        }
        let mut ints = Vec::with_capacity(triplets.len());
        for (r, c, x) in triplets {
            let v = x.numer() * (&lcm / x.denom());
            let v = v.to_i64().ok_or_else(|| Error::Dimension("rational entry does not fit a word".into()))?;
            ints.push((r, c, v));
        }
        let mut m = Self::from_triplets(rows, cols, ints)?;
        m.scale = Rational::new(BigInt::one(), lcm);
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }
    pub fn scale(&self) -> &Rational {
        &self.scale
    }
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Integer entries `(row, col, value)` of the unscaled matrix.
    pub fn int_entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.entries.iter().map(|&(c, r, x)| (r as usize, c as usize, x))
    }

    /// Exact entries `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Rational)> + '_ {
        self.entries
            .iter()
            .map(|&(c, r, x)| (r as usize, c as usize, &self.scale * Rational::from_integer(BigInt::from(x))))
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        match self.entries.binary_search_by_key(&(col as u32, row as u32), |&(c, r, _)| (c, r)) {
            Ok(i) => &self.scale * Rational::from_integer(BigInt::from(self.entries[i].2)),
            Err(_) => Rational::zero(),
        }
    }

    /// Columns of the unscaled matrix as sparse `(row, value)` lists.
    pub fn int_columns(&self) -> Vec<Vec<(u32, i64)>> {
        let mut cols = vec![Vec::new(); self.cols];
        for &(c, r, x) in &self.entries {
            cols[c as usize].push((r, x));
        }
        cols
    }

    /// Rows of the unscaled matrix as sparse `(col, value)` lists.
    pub fn int_rows(&self) -> Vec<Vec<(u32, i64)>> {
        let mut rows = vec![Vec::new(); self.rows];
        for &(c, r, x) in &self.entries {
            rows[r as usize].push((c, x));
        }
        rows
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut entries: Vec<(u32, u32, i64)> = self.entries.iter().map(|&(c, r, x)| (r, c, x)).collect();
        entries.sort_unstable_by_key(|&(c, r, _)| (c, r));
        SparseMatrix { rows: self.cols, cols: self.rows, entries, scale: self.scale.clone() }
    }

    /// Product `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let left_cols = self.int_columns();
        let mut triplets: Vec<(usize, usize, Rational)> = Vec::new();
        for (j, col) in other.int_columns().into_iter().enumerate() {
            let mut acc: std::collections::BTreeMap<u32, BigInt> = Default::default();
            for (k, y) in col {
                for &(i, x) in &left_cols[k as usize] {
                    *acc.entry(i).or_insert_with(BigInt::zero) += BigInt::from(x) * BigInt::from(y);
                }
            }
            for (i, v) in acc {
                if !v.is_zero() {
                    triplets.push((i as usize, j, Rational::from_integer(v)));
                }
            }
        }
        let scale = &self.scale * &other.scale;
        let triplets = triplets.into_iter().map(|(r, c, v)| (r, c, v * &scale)).collect();
        Self::from_rational_triplets(self.rows, other.cols, triplets)
    }

    pub fn apply(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        let mut y = vec![Rational::zero(); self.rows];
        for &(c, r, v) in &self.entries {
            y[r as usize] += &x[c as usize] * Rational::from_integer(BigInt::from(v));
        }
        for v in y.iter_mut() {
            *v *= &self.scale;
        }
        Ok(y)
    }

    /// Stack matrices side by side (same row count).
    pub fn hcat(parts: &[&SparseMatrix]) -> Result<SparseMatrix> {
        let rows = parts.first().map_or(0, |m| m.rows);
        let mut triplets = Vec::new();
        let mut off = 0;
        for m in parts {
            if m.rows != rows {
                return Err(Error::Dimension("row counts differ".into()));
            }
            triplets.extend(m.entries().map(|(r, c, v)| (r, c + off, v)));
            off += m.cols;
        }
        Self::from_rational_triplets(rows, off, triplets)
    }

    /// Keep only the listed rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut rmap = vec![usize::MAX; self.rows];
        for (i, &r) in rows.iter().enumerate() {
            rmap[r] = i;
        }
        let mut cmap = vec![usize::MAX; self.cols];
        for (j, &c) in cols.iter().enumerate() {
            cmap[c] = j;
        }
        let triplets = self
            .int_entries()
            .filter(|&(r, c, _)| rmap[r] != usize::MAX && cmap[c] != usize::MAX)
            .map(|(r, c, x)| (rmap[r], cmap[c], x))
            .collect();
        let mut m = Self::from_triplets(rows.len(), cols.len(), triplets).unwrap();
        m.scale = self.scale.clone();
        m
    }
}

/// Matrix of an integer-valued operator between two cells.
///
/// Column `j` holds `op(domain[j])` in codomain coordinates; any term outside
/// the codomain basis is an error naming the graph.
pub fn matrix_of_int<F>(op: F, domain: &GradedBasis, codomain: &GradedBasis) -> Result<SparseMatrix>
where
    F: Fn(&CanonicalGraph) -> Vec<(CanonicalGraph, i64)> + Sync,
{
    let cols: Vec<Result<Vec<(usize, usize, i64)>>> = domain
        .graphs()
        .par_iter()
        .enumerate()
        .map(|(j, g)| {
            let mut out = Vec::new();
            for (h, c) in op(g) {
                if c == 0 {
                    continue;
                }
                let i = codomain.index_of(&h).ok_or_else(|| Error::NotInBasis { graph: h.key() })?;
                out.push((i, j, c));
            }
            Ok(out)
        })
        .collect();
    let mut triplets = Vec::new();
    for c in cols {
        triplets.extend(c?);
    }
    SparseMatrix::from_triplets(codomain.len(), domain.len(), triplets)
}

/// Matrix of a rational operator between two cells.
pub fn matrix_of<F>(op: F, domain: &GradedBasis, codomain: &GradedBasis) -> Result<SparseMatrix>
where
    F: Fn(&CanonicalGraph) -> Result<GraphVector> + Sync,
{
    let cols: Vec<Result<Vec<(usize, usize, Rational)>>> = domain
        .graphs()
        .par_iter()
        .enumerate()
        .map(|(j, g)| {
            let mut out = Vec::new();
            for (h, c) in op(g)?.iter() {
                let i = codomain.index_of(h).ok_or_else(|| Error::NotInBasis { graph: h.key() })?;
                out.push((i, j, c.clone()));
            }
            Ok(out)
        })
        .collect();
    let mut triplets = Vec::new();
    for c in cols {
        triplets.extend(c?);
    }
    SparseMatrix::from_rational_triplets(codomain.len(), domain.len(), triplets)
}

/// Coordinates of `v` in `basis`; terms outside the basis are an error.
pub fn coordinates(v: &GraphVector, basis: &GradedBasis) -> Result<Vec<Rational>> {
    let mut x = vec![Rational::zero(); basis.len()];
    for (g, c) in v.iter() {
        let i = basis.index_of(g).ok_or_else(|| Error::NotInBasis { graph: g.key() })?;
        x[i] = c.clone();
    }
    Ok(x)
}

/// The vector with coordinates `x` in `basis`.
pub fn from_coordinates(x: &[Rational], basis: &GradedBasis) -> GraphVector {
    let mut v = GraphVector::zero(basis.parity);
    for (i, c) in x.iter().enumerate() {
        if !c.is_zero() {
            v.add_term(basis.get(i).clone(), c.clone()).unwrap();
        }
    }
    v
}
