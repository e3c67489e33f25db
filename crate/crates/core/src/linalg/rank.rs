//! Exact rank by sparse incremental elimination.
//!
//! Vectors are reduced one at a time against a semi-echelon set of pivots keyed by
//! their leading coordinate. Coordinates are ordered by how rarely they occur, and
//! short vectors go first, which keeps fill-in low on graph-complex matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::SparseMatrix;
use super::scalar::{inv_mod, mul_mod, reduce_i64, Field};
use crate::error::{Error, Result};

pub fn rank(m: &SparseMatrix, field: Field) -> usize {
    match field {
        Field::Rational => rank_rational(m),
        Field::Prime(p) => rank_mod_p(m, p),
    }
}

/// The shorter side of the matrix as sparse vectors, plus their length.
fn vectors(m: &SparseMatrix) -> (Vec<Vec<(u32, i64)>>, usize) {
    if m.cols() <= m.rows() {
        (m.int_columns(), m.rows())
    } else {
        (m.int_rows(), m.cols())
    }
}

fn coordinate_order(vecs: &[Vec<(u32, i64)>], dim: usize) -> Vec<u32> {
    let mut freq = vec![0u32; dim];
    for v in vecs {
        for &(i, _) in v {
            freq[i as usize] += 1;
        }
    }
    let mut order: Vec<u32> = (0..dim as u32).collect();
    order.sort_by_key(|&i| (freq[i as usize], i));
    let mut pos = vec![0u32; dim];
    for (k, &i) in order.iter().enumerate() {
        pos[i as usize] = k as u32;
    }
    pos
}

pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> usize {
    let (vecs, dim) = vectors(m);
    let pos = coordinate_order(&vecs, dim);
    let mut vs: Vec<Vec<(u32, u64)>> = vecs
        .into_iter()
        .map(|v| {
            let mut w: Vec<(u32, u64)> = v
                .iter()
                .filter_map(|&(i, x)| {
                    let r = reduce_i64(x, p);
                    (r != 0).then_some((pos[i as usize], r))
                })
                .collect();
            w.sort_unstable_by_key(|x| x.0);
            w
        })
        .filter(|v| !v.is_empty())
        .collect();
    vs.sort_by_key(|v| v.len());
    let mut ech = EchelonModP::new(dim, p);
    for v in vs {
        ech.insert(v);
    }
    ech.rank
}

/// Semi-echelon basis over F_p.
pub(crate) struct EchelonModP {
    p: u64,
    pivots: Vec<Option<Vec<(u32, u64)>>>,
    pub rank: usize,
    scratch: Vec<(u32, u64)>,
}

impl EchelonModP {
    pub fn new(dim: usize, p: u64) -> Self {
        EchelonModP { p, pivots: vec![None; dim], rank: 0, scratch: Vec::new() }
    }

    /// Reduce `v` (sorted by coordinate) and insert it; returns whether it was independent.
    pub fn insert(&mut self, mut v: Vec<(u32, u64)>) -> bool {
        let p = self.p;
        loop {
            let Some(&(lead, a)) = v.first() else { return false };
            match &self.pivots[lead as usize] {
                Some(pv) => {
                    // v <- v - a * pv, where pv has leading coefficient 1
                    let c = p - a;
                    let out = &mut self.scratch;
                    out.clear();
                    let (mut i, mut j) = (1, 1);
                    while i < v.len() || j < pv.len() {
                        if j >= pv.len() || (i < v.len() && v[i].0 < pv[j].0) {
                            out.push(v[i]);
                            i += 1;
                        } else if i >= v.len() || pv[j].0 < v[i].0 {
                            out.push((pv[j].0, mul_mod(c, pv[j].1, p)));
                            j += 1;
                        } else {
                            let x = (v[i].1 + mul_mod(c, pv[j].1, p)) % p;
                            if x != 0 {
                                out.push((v[i].0, x));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    std::mem::swap(&mut v, out);
                }
                None => {
                    let inv = inv_mod(a, p);
                    for x in v.iter_mut() {
                        x.1 = mul_mod(x.1, inv, p);
                    }
                    self.pivots[lead as usize] = Some(v);
                    self.rank += 1;
                    return true;
                }
            }
        }
    }
}

pub fn rank_rational(m: &SparseMatrix) -> usize {
    rank_rational_bounded(m, u64::MAX).expect("unbounded elimination cannot fail")
}

/// Rational rank with a cap on intermediate coefficient size in bits.
///
/// Exceeding the cap is a capacity error suggesting a prime field instead.
pub fn rank_rational_bounded(m: &SparseMatrix, max_bits: u64) -> Result<usize> {
    let (vecs, dim) = vectors(m);
    let pos = coordinate_order(&vecs, dim);
    let mut vs: Vec<Vec<(u32, BigInt)>> = vecs
        .into_iter()
        .map(|v| {
            let mut w: Vec<(u32, BigInt)> = v.iter().map(|&(i, x)| (pos[i as usize], BigInt::from(x))).collect();
            w.sort_unstable_by_key(|x| x.0);
            w
        })
        .filter(|v| !v.is_empty())
        .collect();
    vs.sort_by_key(|v| v.len());
    let mut pivots: Vec<Option<Vec<(u32, BigInt)>>> = vec![None; dim];
    let mut r = 0;
    for mut v in vs {
        loop {
            let Some((lead, a)) = v.first().cloned() else { break };
            match &pivots[lead as usize] {
                Some(pv) => {
                    // fraction-free: v <- b*v - a*pv with b the pivot's leading entry
                    let b = &pv[0].1;
                    let mut out: Vec<(u32, BigInt)> = Vec::with_capacity(v.len() + pv.len());
                    let (mut i, mut j) = (1, 1);
                    while i < v.len() || j < pv.len() {
                        if j >= pv.len() || (i < v.len() && v[i].0 < pv[j].0) {
                            out.push((v[i].0, b * &v[i].1));
                            i += 1;
                        } else if i >= v.len() || pv[j].0 < v[i].0 {
                            out.push((pv[j].0, -(&a * &pv[j].1)));
                            j += 1;
                        } else {
                            let x = b * &v[i].1 - &a * &pv[j].1;
                            if !x.is_zero() {
                                out.push((v[i].0, x));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    remove_content(&mut out);
                    if out.iter().any(|(_, x)| x.bits() > max_bits) {
                        return Err(Error::Capacity {
                            v: m.rows(),
                            e: m.cols(),
                            what: format!("rational coefficients exceed {max_bits} bits; use a prime field"),
                        });
                    }
                    v = out;
                }
                None => {
                    remove_content(&mut v);
                    pivots[lead as usize] = Some(v);
                    r += 1;
                    break;
                }
            }
        }
    }
    Ok(r)
}

fn remove_content(v: &mut [(u32, BigInt)]) {
    let mut g = BigInt::zero();
    for (_, x) in v.iter() {
        g = g.gcd(x);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() {
        return;
    }
    let g = g.abs();
    for (_, x) in v.iter_mut() {
        *x = &*x / &g;
    }
}
