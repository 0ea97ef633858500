//! Deformation-variety instances: variables, internal relations, gluing
//! systems, residuals and the log-basis Jacobian.

mod import;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldElement, FieldError};
use crate::flags::{even_completion, half_edge_rank, HALF_EDGES};
use crate::linalg::{kernel_basis, rank, LinalgError, Matrix};

pub use import::{import_raw, SourceHeader};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DefVarError {
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("coordinate {0} is 0 or 1")]
    DegenerateCoordinate(String),
    #[error("point is not on the variety: residual {label} = {value}")]
    OffVariety { label: String, value: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Coordinate `z_ij` of one tetrahedron; vertices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariableIndex {
    pub tet: usize,
    pub i: usize,
    pub j: usize,
}

impl VariableIndex {
    pub fn new(tet: usize, i: usize, j: usize) -> Self {
        assert!(i != j && (1..=4).contains(&i) && (1..=4).contains(&j));
        VariableIndex { tet, i, j }
    }

    /// `12 * tet + rank of (i, j)` in `12, 13, 14, 21, ..., 43`.
    pub fn column(&self) -> usize {
        12 * self.tet + half_edge_rank(self.i, self.j)
    }

    pub fn from_column(c: usize) -> Self {
        let (i, j) = HALF_EDGES[c % 12];
        VariableIndex { tet: c / 12, i, j }
    }
}

/// Tag form `tet:ij`, e.g. `2:34`.
impl fmt::Display for VariableIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}{}", self.tet, self.i, self.j)
    }
}

impl FromStr for VariableIndex {
    type Err = DefVarError;

    fn from_str(s: &str) -> Result<Self, DefVarError> {
        let bad = || DefVarError::Instance(format!("bad column tag {s:?}"));
        let (t, e) = s.split_once(':').ok_or_else(bad)?;
        let tet = t.trim().parse().map_err(|_| bad())?;
        let d: Vec<usize> =
            e.trim().chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>().ok_or_else(bad)?;
        match d[..] {
            [i, j] if i != j && (1..=4).contains(&i) && (1..=4).contains(&j) => Ok(VariableIndex { tet, i, j }),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    Face,
    Edge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingRow {
    #[serde(rename = "type")]
    pub kind: RowKind,
    pub exponents: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl GluingRow {
    pub fn label_or(&self, k: usize) -> String {
        self.label.clone().unwrap_or_else(|| format!("gluing_{k}"))
    }
}

/// Exponent rows over the `12 nu` canonical columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingSystem {
    pub nu: usize,
    pub rows: Vec<GluingRow>,
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    nu: usize,
    column_order: Vec<String>,
    rows: Vec<GluingRow>,
}

impl GluingSystem {
    pub fn new(nu: usize, rows: Vec<GluingRow>) -> Result<Self, DefVarError> {
        if nu == 0 {
            return Err(DefVarError::Instance("no tetrahedra".into()));
        }
        for (k, r) in rows.iter().enumerate() {
            if r.exponents.len() != 12 * nu {
                return Err(DefVarError::Instance(format!(
                    "row {k} has {} exponents, expected {}",
                    r.exponents.len(),
                    12 * nu
                )));
            }
        }
        Ok(GluingSystem { nu, rows })
    }

    pub fn columns(&self) -> usize {
        12 * self.nu
    }

    /// Reads the instance JSON, permuting columns if `column_order` is not canonical.
    pub fn from_json(s: &str) -> Result<Self, DefVarError> {
        let j: InstanceJson = serde_json::from_str(s).map_err(|e| DefVarError::Instance(e.to_string()))?;
        let n = 12 * j.nu;
        if j.column_order.len() != n {
            return Err(DefVarError::Instance(format!("column_order has {} tags, expected {n}", j.column_order.len())));
        }
        let mut target = Vec::with_capacity(n);
        for tag in &j.column_order {
            let v: VariableIndex = tag.parse()?;
            if v.tet >= j.nu {
                return Err(DefVarError::Instance(format!("tag {tag} names a missing tetrahedron")));
            }
            target.push(v.column());
        }
        let mut seen = target.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != n {
            return Err(DefVarError::Instance("column_order is not a permutation".into()));
        }
        let mut rows = Vec::with_capacity(j.rows.len());
        for r in j.rows {
            if r.exponents.len() != n {
                return Err(DefVarError::Instance(format!("row with {} exponents, expected {n}", r.exponents.len())));
            }
            let mut e = vec![0; n];
            for (src, &dst) in target.iter().enumerate() {
                e[dst] = r.exponents[src];
            }
            rows.push(GluingRow { exponents: e, ..r });
        }
        GluingSystem::new(j.nu, rows)
    }

    pub fn to_json(&self) -> String {
        let j = InstanceJson {
            nu: self.nu,
            column_order: (0..self.columns()).map(|c| VariableIndex::from_column(c).to_string()).collect(),
            rows: self.rows.clone(),
        };
        serde_json::to_string_pretty(&j).expect("serializable")
    }

    /// Shape checks for the Whitehead instance: 8 face rows, 8 edge rows,
    /// all nonzero exponents equal to 1, and 4, 6 or 8 of them per row.
    pub fn check_whitehead_shape(&self) -> Result<(), DefVarError> {
        let faces = self.rows.iter().filter(|r| r.kind == RowKind::Face).count();
        let edges = self.rows.iter().filter(|r| r.kind == RowKind::Edge).count();
        if self.nu != 4 || faces != 8 || edges != 8 {
            return Err(DefVarError::Instance(format!("nu={}, {faces} face and {edges} edge rows", self.nu)));
        }
        for (k, r) in self.rows.iter().enumerate() {
            let nz: Vec<i64> = r.exponents.iter().copied().filter(|&e| e != 0).collect();
            if nz.iter().any(|&e| e != 1) || ![4, 6, 8].contains(&nz.len()) {
                return Err(DefVarError::Instance(format!("row {} has support {:?}", r.label_or(k), nz)));
            }
        }
        Ok(())
    }
}

/// A point of `C^{12 nu}` in canonical column order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DefPoint {
    pub z: Vec<FieldElement>,
}

impl DefPoint {
    pub fn get(&self, v: VariableIndex) -> &FieldElement {
        &self.z[v.column()]
    }

    fn check(&self, nu: usize) -> Result<(), DefVarError> {
        if self.z.len() != 12 * nu {
            return Err(DefVarError::PointLength { expected: 12 * nu, got: self.z.len() });
        }
        for (c, z) in self.z.iter().enumerate() {
            if z.is_zero() || z.is_one() {
                return Err(DefVarError::DegenerateCoordinate(VariableIndex::from_column(c).to_string()));
            }
        }
        Ok(())
    }
}

/// One internal relation at vertex `i` of tetrahedron `tet`, with `(i, j, k, l)` even.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `-z_ij z_ik z_il = 1`
    Monomial { tet: usize, i: usize, j: usize, k: usize, l: usize },
    /// `z_ik (1 - z_ij) = 1`
    Affine { tet: usize, i: usize, j: usize, k: usize, l: usize },
}

impl Relation {
    pub fn label(&self) -> String {
        match *self {
            Relation::Monomial { tet, i, j, k, l } => format!("-z{i}{j}z{i}{k}z{i}{l}(T{tet})"),
            Relation::Affine { tet, i, j, k, .. } => format!("z{i}{k}(1-z{i}{j})(T{tet})"),
        }
    }
}

/// Vertex chain used for the relations: `j` is the smallest index with an
/// even completion, giving (1,2,3,4), (2,1,4,3), (3,1,2,4), (4,1,3,2).
pub fn vertex_chain(i: usize) -> (usize, usize, usize) {
    let j = if i == 1 { 2 } else { 1 };
    let (k, l) = even_completion(i, j);
    (j, k, l)
}

/// `4 nu` monomial relations followed by `4 nu` affine ones.
pub fn internal_relation_rows(nu: usize) -> Vec<Relation> {
    let mut out = Vec::with_capacity(8 * nu);
    for tet in 0..nu {
        for i in 1..=4 {
            let (j, k, l) = vertex_chain(i);
            out.push(Relation::Monomial { tet, i, j, k, l });
        }
    }
    for tet in 0..nu {
        for i in 1..=4 {
            let (j, k, l) = vertex_chain(i);
            out.push(Relation::Affine { tet, i, j, k, l });
        }
    }
    out
}

/// Residual values with labels; the point is on the variety iff all are 1.
#[derive(Debug, Clone)]
pub struct Residuals {
    pub labels: Vec<String>,
    pub values: Vec<FieldElement>,
}

impl Residuals {
    pub fn first_failure(&self) -> Option<(&str, &FieldElement)> {
        self.labels.iter().zip(&self.values).find(|(_, v)| !v.is_one()).map(|(l, v)| (l.as_str(), v))
    }

    pub fn all_one(&self) -> bool {
        self.first_failure().is_none()
    }

    pub fn count_one(&self) -> usize {
        self.values.iter().filter(|v| v.is_one()).count()
    }
}

/// Evaluates the `8 nu` internal relations and every gluing monomial.
pub fn evaluate_residuals(sys: &GluingSystem, p: &DefPoint) -> Result<Residuals, DefVarError> {
    p.check(sys.nu)?;
    let one = FieldElement::one(p.z[0].tower());
    let z = |tet, i, j| p.get(VariableIndex::new(tet, i, j));
    let mut labels = Vec::new();
    let mut values = Vec::new();
    for r in internal_relation_rows(sys.nu) {
        let v = match r {
            Relation::Monomial { tet, i, j, k, l } => -&(&(z(tet, i, j) * z(tet, i, k)) * z(tet, i, l)),
            Relation::Affine { tet, i, j, k, .. } => z(tet, i, k) * &(&one - z(tet, i, j)),
        };
        labels.push(r.label());
        values.push(v);
    }
    for (n, row) in sys.rows.iter().enumerate() {
        let mut v = one.clone();
        for (c, &e) in row.exponents.iter().enumerate() {
            if e != 0 {
                v = &v * &p.z[c].pow(e)?;
            }
        }
        labels.push(row.label_or(n));
        values.push(v);
    }
    Ok(Residuals { labels, values })
}

/// Entry of an affine row at the `z_ij` column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AffineEntry {
    /// `z_il`, as the structure of the Jacobian is usually stated.
    Zil,
    /// `-z_ij / (1 - z_ij) = 1 / z_il`, the logarithmic derivative itself.
    LogDerivative,
}

/// The log-basis Jacobian: monomial rows, affine rows, then gluing rows verbatim.
pub fn build_jacobian(sys: &GluingSystem, p: &DefPoint) -> Result<Matrix, DefVarError> {
    build_jacobian_with(sys, p, AffineEntry::Zil)
}

pub fn build_jacobian_with(sys: &GluingSystem, p: &DefPoint, entry: AffineEntry) -> Result<Matrix, DefVarError> {
    let res = evaluate_residuals(sys, p)?;
    if let Some((label, value)) = res.first_failure() {
        return Err(DefVarError::OffVariety { label: label.to_string(), value: value.to_string() });
    }
    let tower = p.z[0].tower().clone();
    let n = sys.columns();
    let rels = internal_relation_rows(sys.nu);
    let mut j = Matrix::zero(&tower, rels.len() + sys.rows.len(), n);
    let one = FieldElement::one(&tower);
    let col = |tet, a, b| VariableIndex::new(tet, a, b).column();
    for (r, rel) in rels.iter().enumerate() {
        match *rel {
            Relation::Monomial { tet, i, j: b, k, l } => {
                for c in [b, k, l] {
                    j.set(r, col(tet, i, c), one.clone())?;
                }
            }
            Relation::Affine { tet, i, j: b, k, l } => {
                j.set(r, col(tet, i, k), one.clone())?;
                let zil = p.z[col(tet, i, l)].clone();
                let v = match entry {
                    AffineEntry::Zil => zil,
                    AffineEntry::LogDerivative => zil.inv()?,
                };
                j.set(r, col(tet, i, b), v)?;
            }
        }
    }
    let base = rels.len();
    for (r, row) in sys.rows.iter().enumerate() {
        for (c, &e) in row.exponents.iter().enumerate() {
            if e != 0 {
                j.set(base + r, c, FieldElement::from_int(&tower, e))?;
            }
        }
    }
    Ok(j)
}

/// Dimension of the kernel of [`build_jacobian`].
pub fn tangent_dimension(sys: &GluingSystem, p: &DefPoint) -> Result<usize, DefVarError> {
    Ok(kernel_basis(&build_jacobian(sys, p)?)?.len())
}

/// Kernel basis and Bareiss rank of the Jacobian, for cross-checking.
pub fn tangent_space(sys: &GluingSystem, p: &DefPoint) -> Result<TangentSpace, DefVarError> {
    let j = build_jacobian(sys, p)?;
    let basis = kernel_basis(&j)?;
    Ok(TangentSpace { rank: rank(&j)?, columns: j.cols(), basis })
}

#[derive(Debug, Clone)]
pub struct TangentSpace {
    pub rank: usize,
    pub columns: usize,
    pub basis: Vec<Vec<FieldElement>>,
}

impl TangentSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Rank from Bareiss plus kernel size from Gauss-Jordan equals the column count.
    pub fn rank_nullity_holds(&self) -> bool {
        self.rank + self.basis.len() == self.columns
    }
}
