//! Flags in the projective plane and the coordinates of flag tetrahedra.
//!
//! A flag is a point `[x]` and a line `[f]` (a covector) with `f(x) = 0`.
//! Four flags in general position carry twelve edge cross-ratios `z_ij` and
//! four face triple ratios `z_ijk`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldElement, FieldError};
use crate::linalg::{is_regular_unipotent, kernel_basis, LinalgError, Matrix};


#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FlagError {
    #[error("point and form are not incident: f(x) = {0}")]
    NotIncident(String),
    #[error("zero vector in a flag")]
    ZeroVector,
    #[error("matrix is not regular: {0}")]
    NotRegular(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("internal relation fails: {0}")]
    InternalRelation(String),
    #[error("coordinate {name} equals {value}")]
    BadCoordinate { name: String, value: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub type Vec3 = [FieldElement; 3];

fn dot(f: &Vec3, x: &Vec3) -> FieldElement {
    &(&(&f[0] * &x[0]) + &(&f[1] * &x[1])) + &(&f[2] * &x[2])
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [&(&a[1] * &b[2]) - &(&a[2] * &b[1]), &(&a[2] * &b[0]) - &(&a[0] * &b[2]), &(&a[0] * &b[1]) - &(&a[1] * &b[0])]
}

fn det3(a: &Vec3, b: &Vec3, c: &Vec3) -> FieldElement {
    dot(a, &cross(b, c))
}

fn is_zero_vec(v: &Vec3) -> bool {
    v.iter().all(FieldElement::is_zero)
}

/// Proportionality of two vectors, by vanishing 2x2 minors.
pub fn parallel(a: &Vec3, b: &Vec3) -> bool {
    is_zero_vec(&cross(a, b))
}

fn to_vec3(v: Vec<FieldElement>) -> Vec3 {
    let [a, b, c]: [FieldElement; 3] = v.try_into().expect("three coordinates");
    [a, b, c]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FlagJson {
    point: Vec<FieldElement>,
    form: Vec<FieldElement>,
}

/// A point and a covector with `f(x) = 0`, both up to scale.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "FlagJson", into = "FlagJson")]
pub struct Flag {
    point: Vec3,
    form: Vec3,
}

impl TryFrom<FlagJson> for Flag {
    type Error = FlagError;

    fn try_from(j: FlagJson) -> Result<Self, FlagError> {
        if j.point.len() != 3 || j.form.len() != 3 {
            return Err(FlagError::Degenerate("a flag needs three point and three form coordinates".into()));
        }
        Flag::new(to_vec3(j.point), to_vec3(j.form))
    }
}

impl From<Flag> for FlagJson {
    fn from(f: Flag) -> Self {
        FlagJson { point: f.point.to_vec(), form: f.form.to_vec() }
    }
}

impl Flag {
    pub fn new(point: Vec3, form: Vec3) -> Result<Self, FlagError> {
        if is_zero_vec(&point) || is_zero_vec(&form) {
            return Err(FlagError::ZeroVector);
        }
        let v = dot(&form, &point);
        if !v.is_zero() {
            return Err(FlagError::NotIncident(v.to_string()));
        }
        Ok(Flag { point, form })
    }

    pub fn point(&self) -> &Vec3 {
        &self.point
    }

    pub fn form(&self) -> &Vec3 {
        &self.form
    }

    /// Evaluates this flag's form on another flag's point.
    pub fn pair(&self, other: &Flag) -> FieldElement {
        dot(&self.form, &other.point)
    }

    /// Projective equality of both components.
    pub fn same_as(&self, other: &Flag) -> bool {
        parallel(&self.point, &other.point) && parallel(&self.form, &other.form)
    }

    /// Another lift of the same flag.
    pub fn rescaled(&self, s: &FieldElement, t: &FieldElement) -> Flag {
        Flag { point: self.point.clone().map(|e| &e * s), form: self.form.clone().map(|e| &e * t) }
    }

    /// The image under `g`: `x -> g x`, `f -> f g^-1`.
    pub fn transform(&self, g: &Matrix) -> Result<Flag, FlagError> {
        let point = to_vec3(g.mul_vec(&self.point)?);
        let form = to_vec3(g.inverse()?.vec_mul(&self.form)?);
        Flag::new(point, form)
    }

    /// True when `M x` is parallel to `x` and `f M^-1` to `f`.
    pub fn is_invariant_under(&self, m: &Matrix) -> Result<bool, FlagError> {
        let image = self.transform(m)?;
        Ok(self.same_as(&image))
    }
}

/// How [`invariant_flag`] reads a regular matrix.
#[derive(Debug, Clone)]
pub enum FlagMode {
    /// `N = M - I` nilpotent of rank 2: point spans `Im N^2`, form kills `Im N`.
    Unipotent,
    /// Point is the `point` eigenline; the form is the left eigenvector for
    /// `plane`, i.e. it kills the other two eigenlines.
    Semisimple { point: FieldElement, plane: FieldElement },
}

fn one_dim_kernel(m: &Matrix, what: &str) -> Result<Vec3, FlagError> {
    let ker = kernel_basis(m)?;
    if ker.len() != 1 {
        return Err(FlagError::NotRegular(format!("{what} has a {}-dimensional eigenspace", ker.len())));
    }
    Ok(to_vec3(ker.into_iter().next().unwrap()))
}

/// The unique flag fixed by a regular element.
pub fn invariant_flag(m: &Matrix, mode: &FlagMode) -> Result<Flag, FlagError> {
    if m.rows() != 3 || m.cols() != 3 {
        return Err(FlagError::NotRegular("not 3x3".into()));
    }
    let id = Matrix::identity(m.tower(), 3);
    match mode {
        FlagMode::Unipotent => {
            if !is_regular_unipotent(m)? {
                return Err(FlagError::NotRegular("not regular unipotent".into()));
            }
            let n = m.sub(&id)?;
            let n2 = n.mul(&n)?;
            let col = (0..3).find(|&c| n2.column(c).iter().any(|e| !e.is_zero())).unwrap();
            let row = (0..3).find(|&r| n2.row(r).iter().any(|e| !e.is_zero())).unwrap();
            Flag::new(to_vec3(n2.column(col)), to_vec3(n2.row(row).to_vec()))
        }
        FlagMode::Semisimple { point, plane } => {
            if point == plane {
                return Err(FlagError::NotRegular("point and plane eigenvalues coincide".into()));
            }
            let (t, ti) = crate::linalg::char_poly_3(m)?;
            // The third eigenvalue from the trace; all three must be roots.
            let third = &(&t - point) - plane;
            let one = FieldElement::one(m.tower());
            for l in [point, plane, &third] {
                let p = &(&(&(&(l * l) * l) - &(&t * &(l * l))) + &(&ti * l)) - &one;
                if !p.is_zero() {
                    return Err(FlagError::NotRegular(format!("{l} is not an eigenvalue")));
                }
            }
            if third == *point || third == *plane {
                return Err(FlagError::NotRegular("repeated eigenvalue".into()));
            }
            let x = one_dim_kernel(&m.sub(&id.scale(point))?, "point eigenvalue")?;
            let f = one_dim_kernel(&m.sub(&id.scale(plane))?.transpose(), "form eigenvalue")?;
            Flag::new(x, f)
        }
    }
}

/// `z_ijk = f_i(x_j) f_j(x_k) f_k(x_i) / (f_i(x_k) f_j(x_i) f_k(x_j))`.
pub fn triple_ratio(fi: &Flag, fj: &Flag, fk: &Flag) -> Result<FieldElement, FlagError> {
    let num = &(&fi.pair(fj) * &fj.pair(fk)) * &fk.pair(fi);
    let den = &(&fi.pair(fk) * &fj.pair(fi)) * &fk.pair(fj);
    if den.is_zero() {
        return Err(FlagError::Degenerate("vanishing factor in triple ratio".into()));
    }
    Ok(num.try_div(&den)?)
}

/// Why four flags fail to be in general position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Points `i` and `j` coincide (1-based).
    EqualPoints(usize, usize),
    /// Points `i, j, k` lie on one line.
    Collinear(usize, usize, usize),
    /// The form of flag `form` vanishes on the point of flag `point`.
    Incident { form: usize, point: usize },
}

/// `Ok(())` for flags in general position, otherwise the first failure found.
pub fn is_general_position(flags: &[Flag; 4]) -> Result<(), Witness> {
    for i in 0..4 {
        for j in i + 1..4 {
            if parallel(&flags[i].point, &flags[j].point) {
                return Err(Witness::EqualPoints(i + 1, j + 1));
            }
        }
    }
    for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        if det3(&flags[i].point, &flags[j].point, &flags[k].point).is_zero() {
            return Err(Witness::Collinear(i + 1, j + 1, k + 1));
        }
    }
    for i in 0..4 {
        for j in 0..4 {
            if i != j && flags[j].pair(&flags[i]).is_zero() {
                return Err(Witness::Incident { form: j + 1, point: i + 1 });
            }
        }
    }
    Ok(())
}

/// Half-edges `(i, j)` in canonical column order.
pub const HALF_EDGES: [(usize, usize); 12] =
    [(1, 2), (1, 3), (1, 4), (2, 1), (2, 3), (2, 4), (3, 1), (3, 2), (3, 4), (4, 1), (4, 2), (4, 3)];

/// Oriented faces `(i, j, k)`, one per face, with `(i, j, k, l)` even.
pub const FACES: [(usize, usize, usize); 4] = [(2, 4, 3), (1, 3, 4), (1, 4, 2), (1, 2, 3)];

/// Index of `(i, j)` in [`HALF_EDGES`].
pub fn half_edge_rank(i: usize, j: usize) -> usize {
    HALF_EDGES.iter().position(|&e| e == (i, j)).expect("valid half-edge")
}

/// The completion `(k, l)` making `(i, j, k, l)` an even permutation of `1..=4`.
pub fn even_completion(i: usize, j: usize) -> (usize, usize) {
    let mut rest = (1..=4).filter(|&v| v != i && v != j);
    let (k, l) = (rest.next().unwrap(), rest.next().unwrap());
    if is_even(&[i, j, k, l]) {
        (k, l)
    } else {
        (l, k)
    }
}

fn is_even(p: &[usize; 4]) -> bool {
    let inversions = (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).filter(|&(a, b)| p[a] > p[b]).count();
    inversions % 2 == 0
}

/// Four flags, ordered.
#[derive(Debug, Clone)]
pub struct FlagTetrahedron {
    pub flags: [Flag; 4],
}

impl FlagTetrahedron {
    pub fn new(flags: [Flag; 4]) -> Self {
        FlagTetrahedron { flags }
    }

    fn flag(&self, i: usize) -> &Flag {
        &self.flags[i - 1]
    }

    pub fn transform(&self, g: &Matrix) -> Result<FlagTetrahedron, FlagError> {
        let f = |k: usize| self.flags[k].transform(g);
        Ok(FlagTetrahedron { flags: [f(0)?, f(1)?, f(2)?, f(3)?] })
    }
}

/// A point of `ker f` not on the line through `x`, from the standard basis.
fn second_point_on_line(x: &Vec3, f: &Vec3) -> Vec3 {
    let tower = x[0].tower().clone();
    (0..3)
        .map(|k| {
            let mut e = [FieldElement::zero(&tower), FieldElement::zero(&tower), FieldElement::zero(&tower)];
            e[k] = FieldElement::one(&tower);
            cross(f, &e)
        })
        .find(|u| !is_zero_vec(u) && !parallel(u, x))
        .expect("a line contains two independent points")
}

/// Cross-ratio of four lines through `x` spanned by `v1..v4`:
/// `det(x,v1,v3) det(x,v2,v4) / (det(x,v1,v4) det(x,v2,v3))`.
pub fn pencil_cross_ratio(x: &Vec3, v: [&Vec3; 4]) -> Result<FieldElement, FlagError> {
    let num = &det3(x, v[0], v[2]) * &det3(x, v[1], v[3]);
    let den = &det3(x, v[0], v[3]) * &det3(x, v[1], v[2]);
    if den.is_zero() {
        return Err(FlagError::Degenerate("two lines of the pencil coincide".into()));
    }
    Ok(num.try_div(&den)?)
}

/// The edge coordinate `z_ij` (vertices 1-based): the cross-ratio at `x_i` of
/// the lines `ker f_i`, `x_i x_j`, `x_i x_k`, `x_i x_l` with `(i, j, k, l)` even.
pub fn cross_ratio_edge(t: &FlagTetrahedron, i: usize, j: usize) -> Result<FieldElement, FlagError> {
    let (k, l) = even_completion(i, j);
    let fi = t.flag(i);
    let u = second_point_on_line(&fi.point, &fi.form);
    pencil_cross_ratio(&fi.point, [&u, &t.flag(j).point, &t.flag(k).point, &t.flag(l).point])
}

/// The twelve edge and four face coordinates of one tetrahedron.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZCoordinates {
    /// In [`HALF_EDGES`] order.
    pub edges: Vec<FieldElement>,
    /// In [`FACES`] order.
    pub faces: Vec<FieldElement>,
}

impl ZCoordinates {
    pub fn z(&self, i: usize, j: usize) -> &FieldElement {
        &self.edges[half_edge_rank(i, j)]
    }

    /// `z_ijk`, taking the reciprocal for the opposite orientation.
    pub fn triple(&self, i: usize, j: usize, k: usize) -> Result<FieldElement, FlagError> {
        for (n, &(a, b, c)) in FACES.iter().enumerate() {
            let cyc = [(a, b, c), (b, c, a), (c, a, b)];
            if cyc.contains(&(i, j, k)) {
                return Ok(self.faces[n].clone());
            }
            if cyc.contains(&(i, k, j)) {
                return Ok(self.faces[n].inv()?);
            }
        }
        Err(FlagError::Degenerate(format!("({i},{j},{k}) is not a face")))
    }

    /// Checks every internal relation, that no edge coordinate is 0 or 1 and
    /// that no triple ratio vanishes.
    pub fn check_internal_relations(&self) -> Result<(), FlagError> {
        // A triple ratio of 1 only means the face is inscribed in a conic, so
        // faces are merely required to be nonzero.
        for (n, z) in self.edges.iter().chain(&self.faces).enumerate() {
            if z.is_zero() || (n < 12 && z.is_one()) {
                let name = if n < 12 {
                    let (i, j) = HALF_EDGES[n];
                    format!("z{i}{j}")
                } else {
                    let (i, j, k) = FACES[n - 12];
                    format!("z{i}{j}{k}")
                };
                return Err(FlagError::BadCoordinate { name, value: z.to_string() });
            }
        }
        let tower = self.edges[0].tower().clone();
        let one = FieldElement::one(&tower);
        for i in 1..=4 {
            for j in (1..=4).filter(|&j| j != i) {
                let (k, l) = even_completion(i, j);
                if !(self.z(i, k) * &(&one - self.z(i, j))).is_one() {
                    return Err(FlagError::InternalRelation(format!("z{i}{k}(1 - z{i}{j}) != 1")));
                }
                if !(-&(&(self.z(i, j) * self.z(i, k)) * self.z(i, l))).is_one() {
                    return Err(FlagError::InternalRelation(format!("z{i}{j} z{i}{k} z{i}{l} != -1")));
                }
            }
        }
        for l in 1..=4 {
            let (i, j, k) = FACES[l - 1];
            let rhs = -&(&(self.z(i, l) * self.z(j, l)) * self.z(k, l));
            if self.triple(i, j, k)? != rhs {
                return Err(FlagError::InternalRelation(format!("z{i}{j}{k} != -z{i}{l} z{j}{l} z{k}{l}")));
            }
        }
        Ok(())
    }
}

/// All coordinates of a tetrahedron in general position, with the internal
/// relations confirmed before returning.
pub fn tetra_coordinates(t: &FlagTetrahedron) -> Result<ZCoordinates, FlagError> {
    if let Err(w) = is_general_position(&t.flags) {
        return Err(FlagError::Degenerate(format!("{w:?}")));
    }
    let edges = HALF_EDGES.iter().map(|&(i, j)| cross_ratio_edge(t, i, j)).collect::<Result<Vec<_>, _>>()?;
    let faces =
        FACES.iter().map(|&(i, j, k)| triple_ratio(t.flag(i), t.flag(j), t.flag(k))).collect::<Result<Vec<_>, _>>()?;
    let z = ZCoordinates { edges, faces };
    z.check_internal_relations()?;
    Ok(z)
}
