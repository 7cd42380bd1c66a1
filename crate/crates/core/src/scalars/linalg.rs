//! Exact Gaussian elimination over a [`Field`].

use thiserror::Error;

use super::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("singular matrix")]
    Singular,
    #[error("inconsistent linear system")]
    Inconsistent,
}

/// Reduced row echelon form: `pivots[i]` is the pivot column of row `i`.
#[derive(Debug, Clone)]
pub struct Rref<F> {
    pub rows: Vec<Vec<F>>,
    pub pivots: Vec<usize>,
}

/// Reduce `m` (all rows of equal length) to reduced row echelon form,
/// pivoting only within the first `ncols` columns.
pub fn rref<F: Field>(mut m: Vec<Vec<F>>, ncols: usize) -> Rref<F> {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][col].inv().unwrap();
        let width = m[r].len();
        for j in col..width {
            if !m[r][j].is_zero() {
                m[r][j] = m[r][j].clone() * &inv;
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for j in col..width {
                if !pivot_row[j].is_zero() {
                    row[j] = row[j].clone() - f.clone() * &pivot_row[j];
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(nrows);
    Rref { rows: m, pivots }
}

/// Solve the square system `a x = b`.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[F]) -> Result<Vec<F>, LinalgError> {
    let n = a.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let red = rref(aug, n);
    if red.pivots.len() < n {
        return Err(LinalgError::Singular);
    }
    Ok(red.rows.iter().take(n).map(|r| r[n].clone()).collect())
}

pub fn determinant<F: Field>(a: &[Vec<F>]) -> F {
    let n = a.len();
    let mut m: Vec<Vec<F>> = a.to_vec();
    let mut det = F::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else { return F::zero() };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det = det * &m[col][col];
        let inv = m[col][col].inv().unwrap();
        for i in col + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone() * &inv;
            for j in col..n {
                let t = f.clone() * &m[col][j];
                m[i][j] = m[i][j].clone() - t;
            }
        }
    }
    det
}
