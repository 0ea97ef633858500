//! Elimination routines.
//!
//! Rank and large determinants use fraction-free Bareiss elimination with full
//! pivoting; the kernel comes from an independent Gauss-Jordan reduction, so
//! `rank + dim ker = cols` is a genuine cross-check between the two.

use super::{LinalgError, Matrix};
use crate::field::FieldElement;

/// Pivot preference: fewest nonzero basis coefficients, then smallest bit size.
fn cost(e: &FieldElement) -> (usize, u64) {
    (e.weight(), e.height())
}

struct Bareiss {
    rank: usize,
    /// Determinant for square input (zero when singular).
    det: Option<FieldElement>,
}

fn bareiss(m: &Matrix) -> Result<Bareiss, LinalgError> {
    let (rows, cols) = (m.rows(), m.cols());
    let tower = m.tower().clone();
    let mut a = m.to_rows();
    let mut prev_inv = FieldElement::one(&tower);
    let mut last = FieldElement::one(&tower);
    let mut negate = false;
    let mut k = 0;
    while k < rows.min(cols) {
        let mut best: Option<((usize, u64), usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, e) in row.iter().enumerate().skip(k) {
                if e.is_zero() {
                    continue;
                }
                let c = cost(e);
                if best.as_ref().is_none_or(|b| c < b.0) {
                    best = Some((c, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        if pi != k {
            a.swap(pi, k);
            negate = !negate;
        }
        if pj != k {
            for row in a.iter_mut() {
                row.swap(pj, k);
            }
            negate = !negate;
        }
        let pivot = a[k][k].clone();
        let (top, bottom) = a.split_at_mut(k + 1);
        let prow = &top[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..cols {
                let mut v = &pivot * &row[j];
                if !lead.is_zero() && !prow[j].is_zero() {
                    v = &v - &(&lead * &prow[j]);
                }
                row[j] = &v * &prev_inv;
            }
            row[k] = FieldElement::zero(&tower);
        }
        prev_inv = pivot.inv()?;
        last = pivot;
        k += 1;
    }
    let det = (rows == cols).then(|| {
        if k < rows {
            FieldElement::zero(&tower)
        } else if negate {
            -&last
        } else {
            last.clone()
        }
    });
    Ok(Bareiss { rank: k, det })
}

/// Rank by Bareiss elimination with full pivoting.
pub fn rank(m: &Matrix) -> Result<usize, LinalgError> {
    Ok(bareiss(m)?.rank)
}

pub(crate) fn bareiss_det(m: &Matrix) -> Result<FieldElement, LinalgError> {
    Ok(bareiss(m)?.det.expect("square input"))
}

/// Reduced row echelon form and its pivot columns.
pub fn rref(m: &Matrix) -> Result<(Matrix, Vec<usize>), LinalgError> {
    let (rows, cols) = (m.rows(), m.cols());
    let tower = m.tower().clone();
    let mut a = m.to_rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows).filter(|&i| !a[i][c].is_zero()).min_by_key(|&i| cost(&a[i][c]));
        let Some(pi) = best else { continue };
        a.swap(pi, r);
        let inv = a[r][c].inv()?;
        if !inv.is_one() {
            for e in a[r].iter_mut().skip(c) {
                if !e.is_zero() {
                    *e = &*e * &inv;
                }
            }
        }
        let prow = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..cols {
                if !prow[j].is_zero() {
                    row[j] = &row[j] - &(&f * &prow[j]);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let out = Matrix::from_entries(&tower, rows, cols, a.into_iter().flatten().collect())?;
    Ok((out, pivots))
}

/// Basis of the right nullspace, normalized to reduced row echelon form so
/// that every vector starts with a 1.
pub fn kernel_basis(m: &Matrix) -> Result<Vec<Vec<FieldElement>>, LinalgError> {
    let cols = m.cols();
    let tower = m.tower().clone();
    let (r, pivots) = rref(m)?;
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return Ok(Vec::new());
    }
    let mut raw = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![FieldElement::zero(&tower); cols];
        v[f] = FieldElement::one(&tower);
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -r.get(row, f);
        }
        raw.push(v);
    }
    let k = Matrix::from_entries(&tower, raw.len(), cols, raw.into_iter().flatten().collect())?;
    let (canon, _) = rref(&k)?;
    Ok(canon.to_rows())
}

pub(crate) fn gauss_jordan_inverse(m: &Matrix) -> Result<Matrix, LinalgError> {
    let n = m.rows();
    let tower = m.tower().clone();
    let id = Matrix::identity(&tower, n);
    let aug: Vec<FieldElement> =
        (0..n).flat_map(|r| m.row(r).iter().chain(id.row(r)).cloned().collect::<Vec<_>>()).collect();
    let aug = Matrix::from_entries(&tower, n, 2 * n, aug)?;
    let (red, pivots) = rref(&aug)?;
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(LinalgError::Singular);
    }
    let inv: Vec<FieldElement> = (0..n).flat_map(|r| red.row(r)[n..].to_vec()).collect();
    Matrix::from_entries(&tower, n, n, inv)
}
