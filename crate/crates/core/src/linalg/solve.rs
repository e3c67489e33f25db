use num_traits::{One, Zero};

use super::matrix::SparseMatrix;
use super::scalar::Rational;
use crate::error::{Error, Result};

type Row = Vec<(u32, Rational)>;

/// Some exact solution of `m x = target`, or `None` when the system is inconsistent.
///
/// Free variables are set to zero.
pub fn solve(m: &SparseMatrix, target: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if target.len() != m.rows() {
        return Err(Error::Dimension(format!("target of length {} for {} rows", target.len(), m.rows())));
    }
    let scale = m.scale().clone();
    let mut eqs: Vec<(Row, Rational)> = m
        .int_rows()
        .into_iter()
        .zip(target.iter())
        .map(|(r, t)| {
            let row: Row = r.into_iter().map(|(c, x)| (c, &scale * Rational::from_integer(x.into()))).collect();
            (row, t.clone())
        })
        .collect();
    eqs.sort_by_key(|e| e.0.len());

    let mut pivots: Vec<Option<(Row, Rational)>> = vec![None; m.cols()];
    for (mut row, mut rhs) in eqs {
        loop {
            let Some((lead, a)) = row.first().cloned() else {
                if !rhs.is_zero() {
                    return Ok(None);
                }
                break;
            };
            match &pivots[lead as usize] {
                Some((pv, prhs)) => {
                    row = axpy(&row, pv, &a);
                    rhs -= &a * prhs;
                }
                None => {
                    let inv = Rational::one() / &a;
                    for x in row.iter_mut() {
                        x.1 *= &inv;
                    }
                    rhs *= &inv;
                    pivots[lead as usize] = Some((row, rhs));
                    break;
                }
            }
        }
    }

    let mut x = vec![Rational::zero(); m.cols()];
    for c in (0..m.cols()).rev() {
        if let Some((row, rhs)) = &pivots[c] {
            let mut v = rhs.clone();
            for (j, a) in &row[1..] {
                v -= a * &x[*j as usize];
            }
            x[c] = v;
        }
    }
    Ok(Some(x))
}

/// `row - a * pv` where both are sorted and `pv` has leading coefficient 1.
fn axpy(row: &Row, pv: &Row, a: &Rational) -> Row {
    let mut out = Vec::with_capacity(row.len() + pv.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pv.len() {
        if j >= pv.len() || (i < row.len() && row[i].0 < pv[j].0) {
            out.push(row[i].clone());
            i += 1;
        } else if i >= row.len() || pv[j].0 < row[i].0 {
            out.push((pv[j].0, -(a * &pv[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - a * &pv[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}
