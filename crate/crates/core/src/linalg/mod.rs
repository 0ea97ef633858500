//! Dense exact matrices over a field tower.

mod elim;
mod matrix;

use thiserror::Error;

use crate::field::FieldError;

pub use elim::{kernel_basis, rank, rref};
pub use matrix::{Matrix, MatrixJson};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("operation needs a square matrix, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("determinant is {0}, expected 1")]
    DetNotOne(String),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `(tr M, tr M^-1)` for a 3x3 matrix of determinant 1, so that the
/// characteristic polynomial is `X^3 - (tr M) X^2 + (tr M^-1) X - 1`.
pub fn char_poly_3(m: &Matrix) -> Result<(crate::FieldElement, crate::FieldElement), LinalgError> {
    require_det_one_3(m)?;
    // For det 1, tr M^-1 is the trace of the adjugate: the sum of principal 2x2 minors.
    let minor = |a: usize, b: usize| &(m.get(a, a) * m.get(b, b)) - &(m.get(a, b) * m.get(b, a));
    let adj_trace = &(&minor(0, 1) + &minor(0, 2)) + &minor(1, 2);
    Ok((m.trace()?, adj_trace))
}

fn require_det_one_3(m: &Matrix) -> Result<(), LinalgError> {
    if m.rows() != 3 || m.cols() != 3 {
        return Err(LinalgError::Dimension(format!("expected 3x3, got {}x{}", m.rows(), m.cols())));
    }
    let d = m.det()?;
    if !d.is_one() {
        return Err(LinalgError::DetNotOne(d.to_string()));
    }
    Ok(())
}

/// True iff `tr M = tr M^-1 = 0`; in that case `M^3 = I` and `M != I` are
/// confirmed directly.
pub fn is_regular_order_three(m: &Matrix) -> Result<bool, LinalgError> {
    let (t, ti) = char_poly_3(m)?;
    if !(t.is_zero() && ti.is_zero()) {
        return Ok(false);
    }
    let id = Matrix::identity(m.tower(), 3);
    if m.pow(3)? != id || *m == id {
        return Err(LinalgError::SelfCheck("vanishing traces without M^3 = I".into()));
    }
    Ok(true)
}

/// True iff `(M - I)^3 = 0` and `(M - I)^2 != 0`.
pub fn is_regular_unipotent(m: &Matrix) -> Result<bool, LinalgError> {
    if m.rows() != 3 || m.cols() != 3 {
        return Err(LinalgError::Dimension(format!("expected 3x3, got {}x{}", m.rows(), m.cols())));
    }
    let n = m.sub(&Matrix::identity(m.tower(), 3))?;
    let n2 = n.mul(&n)?;
    Ok(!n2.is_zero() && n2.mul(&n)?.is_zero())
}
