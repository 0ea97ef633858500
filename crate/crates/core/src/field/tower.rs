use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{FieldElement, FieldError};

/// One sparse entry of the basis-product table: `(basis index, coefficient)`.
pub(crate) type Term = (usize, BigRational);

/// A tower of quadratic extensions `Q(r_0)(r_1)...(r_{k-1})` with `r_l^2 = d_l`.
///
/// Basis elements are indexed by bitmasks: bit `l` set means the product
/// contains `r_l`. Every `d_l` lives in the prefix tower of depth `l`, so the
/// same coefficient layout is shared by all prefixes.
pub struct Tower {
    levels: Vec<Level>,
    table: Vec<Vec<Term>>,
}

struct Level {
    square: FieldElement,
    name: String,
}

/// Outcome of [`Tower::adjoin_sqrt`].
#[derive(Debug, Clone)]
pub enum Adjoined {
    /// A new tower with a formal square root on top.
    Extended(Arc<Tower>),
    /// The value was a rational square; its non-negative root is returned.
    Root(FieldElement),
}

impl Tower {
    /// The base field `Q`.
    pub fn rationals() -> Arc<Tower> {
        static Q: OnceLock<Arc<Tower>> = OnceLock::new();
        Q.get_or_init(|| Arc::new(Tower { levels: Vec::new(), table: vec![vec![(0, BigRational::one())]] })).clone()
    }

    /// `Q(i)(sqrt 3)(sqrt 5)`, the field holding every constant of the Whitehead instance.
    pub fn standard() -> Arc<Tower> {
        static STD: OnceLock<Arc<Tower>> = OnceLock::new();
        STD.get_or_init(|| Tower::from_rational_squares(&[-1, 3, 5]).expect("standard tower")).clone()
    }

    /// `Q(i)(sqrt 3)`, the smallest tower of this crate containing a primitive cube root of unity.
    pub fn eisenstein() -> Arc<Tower> {
        static EIS: OnceLock<Arc<Tower>> = OnceLock::new();
        EIS.get_or_init(|| Tower::from_rational_squares(&[-1, 3]).expect("eisenstein tower")).clone()
    }

    /// Builds a tower by adjoining square roots of the given integers in order.
    pub fn from_rational_squares(squares: &[i64]) -> Result<Arc<Tower>, FieldError> {
        let mut tower = Tower::rationals();
        for &d in squares {
            let d = FieldElement::from_int(&tower, d);
            tower = match tower.adjoin_sqrt(&d)? {
                Adjoined::Extended(t) => t,
                Adjoined::Root(_) => return Err(FieldError::PerfectSquare(d.to_string())),
            };
        }
        Ok(tower)
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Degree over `Q`, i.e. `2^depth`.
    pub fn degree(&self) -> usize {
        1 << self.levels.len()
    }

    /// The square adjoined at `level`; it belongs to the prefix tower of depth `level`.
    pub fn square(&self, level: usize) -> &FieldElement {
        &self.levels[level].square
    }

    pub fn level_name(&self, level: usize) -> &str {
        &self.levels[level].name
    }

    /// The tower with the top level removed, or `None` for `Q`.
    pub fn parent(&self) -> Option<&Arc<Tower>> {
        self.levels.last().map(|l| l.square.tower())
    }

    /// The prefix tower of the given depth.
    pub fn prefix(self: &Arc<Self>, depth: usize) -> Arc<Tower> {
        assert!(depth <= self.depth());
        if depth == self.depth() {
            self.clone()
        } else {
            self.levels[depth].square.tower().clone()
        }
    }

    /// Adjoins a formal square root of `d` with a default name.
    pub fn adjoin_sqrt(self: &Arc<Self>, d: &FieldElement) -> Result<Adjoined, FieldError> {
        let name = default_name(d, self.depth());
        self.adjoin_sqrt_named(d, &name)
    }

    /// Adjoins a formal square root of `d`.
    ///
    /// A rational `d` that is a perfect square is refused and its root returned
    /// instead. Squareness of non-rational values is not tested here; a hidden
    /// square shows up later as a zero divisor during inversion.
    pub fn adjoin_sqrt_named(self: &Arc<Self>, d: &FieldElement, name: &str) -> Result<Adjoined, FieldError> {
        let d = d.embed_into(self)?;
        if d.is_zero() {
            return Err(FieldError::ZeroSquare);
        }
        if let Some(q) = d.as_rational() {
            if let Some(root) = rational_sqrt(&q) {
                return Ok(Adjoined::Root(FieldElement::from_rational(self, root)));
            }
        }
        let mut levels: Vec<Level> =
            self.levels.iter().map(|l| Level { square: l.square.clone(), name: l.name.clone() }).collect();
        levels.push(Level { square: d.clone(), name: name.to_string() });
        let table = extend_table(self, &d);
        Ok(Adjoined::Extended(Arc::new(Tower { levels, table })))
    }

    pub(crate) fn product_terms(&self, m: usize, n: usize) -> &[Term] {
        &self.table[m * self.degree() + n]
    }

    /// True when `self` is a prefix of `other` (as towers, structurally).
    pub fn is_prefix_of(&self, other: &Tower) -> bool {
        if self.depth() > other.depth() {
            return false;
        }
        self.levels.iter().zip(other.levels.iter()).all(|(a, b)| a.square == b.square)
    }

    /// Human-readable name of a basis element, e.g. `i*sqrt15` for `i * sqrt3 * sqrt5`.
    pub fn basis_name(&self, mask: usize) -> String {
        let mut has_i = false;
        let mut radicand = BigInt::one();
        let mut others = Vec::new();
        for (l, level) in self.levels.iter().enumerate() {
            if mask & (1 << l) == 0 {
                continue;
            }
            match level.square.as_rational() {
                Some(q) if q == -BigRational::one() => has_i = true,
                Some(q) if q.is_integer() && q.is_positive() && level.name.starts_with("sqrt") => {
                    radicand *= q.to_integer()
                }
                _ => others.push(level.name.clone()),
            }
        }
        let mut parts = Vec::new();
        if has_i {
            parts.push("i".to_string());
        }
        if !radicand.is_one() {
            parts.push(format!("sqrt{radicand}"));
        }
        parts.extend(others);
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || (self.depth() == other.depth() && self.is_prefix_of(other))
    }
}

impl Eq for Tower {}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.levels.iter().map(|l| format!("{}^2={}", l.name, l.square)).collect();
        write!(f, "Tower[{}]", names.join(", "))
    }
}

fn default_name(d: &FieldElement, level: usize) -> String {
    match d.as_rational() {
        Some(q) if q == -BigRational::one() => "i".to_string(),
        Some(q) if q.is_integer() && q.is_positive() => format!("sqrt{}", q.to_integer()),
        _ => format!("r{level}"),
    }
}

/// Exact square root of a non-negative rational, if it has one.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Basis-product table of `parent(sqrt d)` built from the parent's table.
fn extend_table(parent: &Arc<Tower>, d: &FieldElement) -> Vec<Vec<Term>> {
    let half = parent.degree();
    let dim = 2 * half;
    let mut table = vec![Vec::new(); dim * dim];
    for m in 0..dim {
        for n in 0..dim {
            let (m0, hm) = (m % half, m / half);
            let (n0, hn) = (n % half, n / half);
            let base = parent.product_terms(m0, n0);
            table[m * dim + n] = match hm + hn {
                0 => base.to_vec(),
                1 => base.iter().map(|(k, c)| (k + half, c.clone())).collect(),
                _ => {
                    let mut coeffs = vec![BigRational::zero(); half];
                    for (k, c) in base {
                        coeffs[*k] = c.clone();
                    }
                    let lifted = FieldElement::from_coeffs(parent, coeffs);
                    (&lifted * d)
                        .coeffs()
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| (k, c.clone()))
                        .collect()
                }
            };
        }
    }
    table
}
