use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LinalgError;
use crate::field::{FieldElement, FieldError, Tower};

/// A dense row-major matrix whose entries share one tower.
#[derive(Clone)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    tower: Arc<Tower>,
    entries: Vec<FieldElement>,
}

impl Matrix {
    /// Builds a matrix from rows, lifting every entry into the largest tower present.
    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Dimension("ragged or empty row list".into()));
        }
        let entries: Vec<FieldElement> = rows.into_iter().flatten().collect();
        let tower = entries.iter().map(|e| e.tower()).max_by_key(|t| t.depth()).unwrap().clone();
        Self::from_entries(&tower, r, c, entries)
    }

    pub fn from_entries(
        tower: &Arc<Tower>,
        rows: usize,
        cols: usize,
        entries: Vec<FieldElement>,
    ) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Dimension(format!("{} entries for {rows}x{cols}", entries.len())));
        }
        let entries = entries.iter().map(|e| e.embed_into(tower)).collect::<Result<Vec<_>, FieldError>>()?;
        Ok(Matrix { rows, cols, tower: tower.clone(), entries })
    }

    pub fn from_ints(tower: &Arc<Tower>, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        let entries = rows.iter().flat_map(|row| row.iter().map(|&n| FieldElement::from_int(tower, n))).collect();
        Matrix { rows: r, cols: c, tower: tower.clone(), entries }
    }

    /// Parses every entry with [`FieldElement::parse`].
    pub fn parse(tower: &Arc<Tower>, rows: &[&[&str]]) -> Result<Self, LinalgError> {
        let parsed = rows
            .iter()
            .map(|row| row.iter().map(|s| FieldElement::parse(tower, s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let r = parsed.len();
        let c = parsed.first().map_or(0, Vec::len);
        Self::from_entries(tower, r, c, parsed.into_iter().flatten().collect())
    }

    pub fn zero(tower: &Arc<Tower>, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, tower: tower.clone(), entries: vec![FieldElement::zero(tower); rows * cols] }
    }

    pub fn identity(tower: &Arc<Tower>, n: usize) -> Self {
        let mut m = Self::zero(tower, n, n);
        for k in 0..n {
            m.entries[k * n + k] = FieldElement::one(tower);
        }
        m
    }

    pub fn diagonal(entries: &[FieldElement]) -> Result<Self, LinalgError> {
        let n = entries.len();
        let tower = entries[0].tower().clone();
        let mut m = Self::zero(&tower, n, n);
        for (k, e) in entries.iter().enumerate() {
            m.entries[k * n + k] = e.embed_into(&tower)?;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElement {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) -> Result<(), LinalgError> {
        self.entries[r * self.cols + c] = v.embed_into(&self.tower)?;
        Ok(())
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldElement::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Moves the matrix into a tower that has its current tower as a prefix.
    pub fn embed_into(&self, tower: &Arc<Tower>) -> Result<Matrix, LinalgError> {
        Self::from_entries(tower, self.rows, self.cols, self.entries.clone())
    }

    fn unify(&self, other: &Matrix) -> Result<(Matrix, Matrix), LinalgError> {
        if Arc::ptr_eq(&self.tower, &other.tower) {
            return Ok((self.clone(), other.clone()));
        }
        if self.tower.depth() >= other.tower.depth() {
            Ok((self.clone(), other.embed_into(&self.tower)?))
        } else {
            Ok((self.embed_into(&other.tower)?, other.clone()))
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(
        &self,
        other: &Matrix,
        f: impl Fn(&FieldElement, &FieldElement) -> FieldElement,
    ) -> Result<Matrix, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (x, y) = self.unify(other)?;
        let entries = x.entries.iter().zip(&y.entries).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { entries, ..x })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (x, y) = self.unify(other)?;
        let mut entries = Vec::with_capacity(x.rows * y.cols);
        for r in 0..x.rows {
            for c in 0..y.cols {
                let mut acc = FieldElement::zero(&x.tower);
                for k in 0..x.cols {
                    let a = x.get(r, k);
                    let b = y.get(k, c);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(Matrix { rows: x.rows, cols: y.cols, tower: x.tower, entries })
    }

    /// `M v` for a column vector.
    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Dimension(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(FieldElement::zero(&self.tower), |acc, (a, b)| &acc + &(a * b)))
            .collect())
    }

    /// `f M` for a row vector (covector).
    pub fn vec_mul(&self, f: &[FieldElement]) -> Result<Vec<FieldElement>, LinalgError> {
        self.transpose().mul_vec(f)
    }

    pub fn scale(&self, s: &FieldElement) -> Matrix {
        let entries: Vec<FieldElement> = self.entries.iter().map(|e| e * s).collect();
        let tower = entries_tower(&entries, &self.tower);
        Matrix { rows: self.rows, cols: self.cols, tower, entries }
    }

    pub fn neg(&self) -> Matrix {
        Matrix { entries: self.entries.iter().map(|e| -e).collect(), ..self.clone() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, tower: self.tower.clone(), entries }
    }

    pub fn trace(&self) -> Result<FieldElement, LinalgError> {
        self.require_square()?;
        Ok((0..self.rows).fold(FieldElement::zero(&self.tower), |acc, k| &acc + self.get(k, k)))
    }

    fn require_square(&self) -> Result<(), LinalgError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(LinalgError::NotSquare(self.rows, self.cols))
        }
    }

    pub fn det(&self) -> Result<FieldElement, LinalgError> {
        self.require_square()?;
        let g = |r, c| self.get(r, c);
        Ok(match self.rows {
            1 => g(0, 0).clone(),
            2 => &(g(0, 0) * g(1, 1)) - &(g(0, 1) * g(1, 0)),
            3 => {
                let m0 = &(g(1, 1) * g(2, 2)) - &(g(1, 2) * g(2, 1));
                let m1 = &(g(1, 0) * g(2, 2)) - &(g(1, 2) * g(2, 0));
                let m2 = &(g(1, 0) * g(2, 1)) - &(g(1, 1) * g(2, 0));
                &(&(g(0, 0) * &m0) - &(g(0, 1) * &m1)) + &(g(0, 2) * &m2)
            }
            _ => super::elim::bareiss_det(self)?,
        })
    }

    /// Exact inverse: adjugate for sizes up to 3, Gauss-Jordan otherwise.
    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        self.require_square()?;
        if self.rows > 3 {
            return super::elim::gauss_jordan_inverse(self);
        }
        let d = self.det()?;
        if d.is_zero() {
            return Err(LinalgError::Singular);
        }
        let di = d.inv()?;
        let n = self.rows;
        let adj = match n {
            1 => vec![FieldElement::one(&self.tower)],
            2 => vec![self.get(1, 1).clone(), -self.get(0, 1), -self.get(1, 0), self.get(0, 0).clone()],
            _ => {
                let mut out = Vec::with_capacity(9);
                for r in 0..3 {
                    for c in 0..3 {
                        // adj[r][c] = cofactor of (c, r)
                        let (r0, r1) = others(c);
                        let (c0, c1) = others(r);
                        let minor = &(self.get(r0, c0) * self.get(r1, c1)) - &(self.get(r0, c1) * self.get(r1, c0));
                        out.push(if (r + c) % 2 == 0 { minor } else { -minor });
                    }
                }
                out
            }
        };
        let entries = adj.iter().map(|e| e * &di).collect();
        Ok(Matrix { rows: n, cols: n, tower: self.tower.clone(), entries })
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, e: i64) -> Result<Matrix, LinalgError> {
        self.require_square()?;
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Matrix::identity(&self.tower, self.rows);
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Permutes columns: column `c` of the result is column `perm[c]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for r in 0..self.rows {
            for &c in perm {
                entries.push(self.get(r, c).clone());
            }
        }
        Matrix { entries, ..self.clone() }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::Dimension("vstack with different column counts".into()));
        }
        let (x, y) = self.unify(other)?;
        let mut entries = x.entries.clone();
        entries.extend(y.entries.iter().cloned());
        Ok(Matrix { rows: x.rows + y.rows, cols: x.cols, tower: x.tower, entries })
    }
}

/// Entrywise equality; towers only need to embed into each other.
impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}

impl Eq for Matrix {}

fn others(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

fn entries_tower(entries: &[FieldElement], fallback: &Arc<Tower>) -> Arc<Tower> {
    entries.first().map_or_else(|| fallback.clone(), |e| e.tower().clone())
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `{"rows": r, "cols": c, "entries": [[FieldElement...]...]}`
#[derive(Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<FieldElement>>,
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson { rows: self.rows, cols: self.cols, entries: self.to_rows() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        if j.entries.len() != j.rows || j.entries.iter().any(|r| r.len() != j.cols) {
            return Err(serde::de::Error::custom("matrix shape does not match rows/cols"));
        }
        Matrix::from_rows(j.entries).map_err(serde::de::Error::custom)
    }
}
