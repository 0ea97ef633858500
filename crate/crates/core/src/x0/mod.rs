//! Trace coordinates on pairs of regular order-three matrices, the
//! discriminant `Delta` and the closed-form parametrisation of `X0`.

pub mod float;
pub mod formulas;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Adjoined, FieldElement, FieldError, Tower};
use crate::linalg::{is_regular_order_three, kernel_basis, LinalgError, Matrix};
use formulas::{Params, DENOMINATOR_NAMES};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum X0Error {
    #[error("denominator of {param} vanishes: {expr} = 0")]
    Denominator { param: &'static str, expr: &'static str },
    #[error("self-check failed: {0}")]
    SelfCheck(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `(z1, z2, z3, z4) = (tr AB, tr A^-1 B, tr A^-1 B^-1, tr AB^-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TraceCoordinates {
    pub z: [FieldElement; 4],
}

impl TraceCoordinates {
    pub fn new(z: [FieldElement; 4]) -> Self {
        TraceCoordinates { z }
    }

    pub fn from_ints(z: [i64; 4]) -> Self {
        let q = Tower::rationals();
        TraceCoordinates { z: z.map(|x| FieldElement::from_int(&q, x)) }
    }

    fn embed_into(&self, tower: &Arc<Tower>) -> Result<[FieldElement; 4], FieldError> {
        let [a, b, c, d] = &self.z;
        Ok([a.embed_into(tower)?, b.embed_into(tower)?, c.embed_into(tower)?, d.embed_into(tower)?])
    }

    fn tower(&self) -> Arc<Tower> {
        self.z.iter().max_by_key(|x| x.tower().depth()).unwrap().tower().clone()
    }

    /// The 8 Lawton coordinates of any pair in `X0` with these traces.
    pub fn lawton(&self) -> [FieldElement; 8] {
        let zero = FieldElement::zero(self.z[0].tower());
        let [z1, z2, z3, z4] = self.z.clone();
        [zero.clone(), zero.clone(), z1, z2, zero.clone(), zero, z3, z4]
    }
}

impl fmt::Display for TraceCoordinates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.z;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// `z1^2 z3^2 - 2 z1 z2 z3 z4 + z2^2 z4^2 - 4(z1^3 + ... + z4^3) + 18 z1 z3 + 18 z2 z4 - 27`.
pub fn discriminant(z: &TraceCoordinates) -> FieldElement {
    let t = z.tower();
    let zz = z.embed_into(&t).expect("prefix towers");
    formulas::discriminant(&zz)
}

/// Which square root of `Delta` is used: `Plus` is the principal one under
/// the default complex embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn apply(self, x: &FieldElement) -> FieldElement {
        match self {
            Sign::Plus => x.clone(),
            Sign::Minus => -x,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterQuadruple {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
    /// The square root of `Delta` actually used (already signed).
    pub delta: FieldElement,
    pub sign: Sign,
}

impl ParameterQuadruple {
    pub fn tower(&self) -> &Arc<Tower> {
        self.a.tower()
    }

    fn params(&self) -> Params<FieldElement> {
        Params { a: self.a.clone(), b: self.b.clone(), c: self.c.clone(), d: self.d.clone() }
    }

    fn omega(&self) -> FieldElement {
        FieldElement::omega(self.tower()).expect("parameter towers contain omega")
    }
}

/// The smallest tower containing both `omega` and the coordinates.
fn omega_tower(z: &TraceCoordinates) -> Result<Arc<Tower>, FieldError> {
    let t = z.tower();
    let eis = Tower::eisenstein();
    if eis.is_prefix_of(&t) {
        Ok(t)
    } else if t.is_prefix_of(&eis) {
        Ok(eis)
    } else {
        Err(FieldError::NoCubeRoot)
    }
}

/// The principal square root of `Delta`, inside the coordinates' tower
/// extended by `omega`, or adjoined formally as `delta`.
pub fn principal_delta(z: &TraceCoordinates) -> Result<FieldElement, X0Error> {
    let t = omega_tower(z)?;
    let disc = discriminant(z).embed_into(&t)?;
    if let Some(r) = disc.principal_sqrt() {
        return Ok(r);
    }
    Ok(match t.adjoin_sqrt_named(&disc, "delta")? {
        Adjoined::Extended(big) => FieldElement::generator(&big, big.depth() - 1),
        Adjoined::Root(r) => r,
    })
}

/// `(a, b, c, d)` by the closed forms, with the postconditions checked exactly.
pub fn solve_parameters(z: &TraceCoordinates, sign: Sign) -> Result<ParameterQuadruple, X0Error> {
    solve_with_delta(z, &principal_delta(z)?, sign)
}

/// As [`solve_parameters`] with an explicit principal root, signed by `sign`.
pub fn solve_with_delta(z: &TraceCoordinates, root: &FieldElement, sign: Sign) -> Result<ParameterQuadruple, X0Error> {
    let t = root.tower().clone();
    let zz = z.embed_into(&t)?;
    let j = FieldElement::omega(&t)?;
    let delta = sign.apply(root);
    let p = formulas::params(&zz, &j, &delta).map_err(|k| {
        let (param, expr) = DENOMINATOR_NAMES[k];
        X0Error::Denominator { param, expr }
    })?;
    let q = ParameterQuadruple { a: p.a, b: p.b, c: p.c, d: p.d, delta, sign };
    let report = verify_sigma(&q, z)?;
    if !report.all_zero() {
        return Err(X0Error::SelfCheck(format!("system residuals at {z}: {report:?}")));
    }
    Ok(q)
}

/// The normal-form pair: `A` lower triangular with diagonal `(j, 1, j^2)`,
/// `B` upper triangular.
pub fn build_pair(p: &ParameterQuadruple) -> Result<(Matrix, Matrix), X0Error> {
    let (a, b) = formulas::pair(&p.params(), &p.omega());
    let m = |x: formulas::Mat3<FieldElement>| Matrix::from_rows(x.into_iter().map(Vec::from).collect());
    let (a, b) = (m(a)?, m(b)?);
    for (name, x) in [("A", &a), ("B", &b)] {
        if !is_regular_order_three(x)? {
            return Err(X0Error::SelfCheck(format!("{name} is not regular of order three")));
        }
    }
    Ok((a, b))
}

/// `(tr A, tr B, tr AB, tr A^-1 B, tr A^-1, tr B^-1, tr A^-1 B^-1, tr AB^-1, tr [A, B])`.
pub fn trace_map(a: &Matrix, b: &Matrix) -> Result<[FieldElement; 9], LinalgError> {
    for m in [a, b] {
        if m.rows() != 3 || m.cols() != 3 {
            return Err(LinalgError::Dimension("trace map needs 3x3 matrices".into()));
        }
        let d = m.det()?;
        if !d.is_one() {
            return Err(LinalgError::DetNotOne(d.to_string()));
        }
    }
    let (ai, bi) = (a.inverse()?, b.inverse()?);
    let ab = a.mul(b)?;
    let comm = ab.mul(&ai)?.mul(&bi)?;
    Ok([
        a.trace()?,
        b.trace()?,
        ab.trace()?,
        ai.mul(b)?.trace()?,
        ai.trace()?,
        bi.trace()?,
        ai.mul(&bi)?.trace()?,
        a.mul(&bi)?.trace()?,
        comm.trace()?,
    ])
}

/// Exact residuals of the system and its linear combinations.
#[derive(Debug, Clone)]
pub struct SigmaReport {
    /// Left side minus right side of each equation.
    pub sigma: [FieldElement; 4],
    pub sigma_prime: [FieldElement; 4],
    /// The quadratic in `a`, evaluated at `a`.
    pub quadratic: FieldElement,
    /// The exchange `a <-> d, b <-> c, j <-> j^2` fixes the first and third
    /// left sides and swaps the second and fourth.
    pub exchange: bool,
}

impl SigmaReport {
    pub fn residuals_zero(&self) -> bool {
        self.sigma.iter().chain(&self.sigma_prime).all(FieldElement::is_zero)
    }

    pub fn all_zero(&self) -> bool {
        self.residuals_zero() && self.quadratic.is_zero() && self.exchange
    }
}

pub fn verify_sigma(p: &ParameterQuadruple, z: &TraceCoordinates) -> Result<SigmaReport, X0Error> {
    let t = p.tower().clone();
    let zz = z.embed_into(&t)?;
    let j = p.omega();
    let j2 = &j * &j;
    let params = p.params();
    let lhs = formulas::sigma_lhs(&params, &j);
    let sigma = std::array::from_fn(|k| &lhs[k] - &zz[k]);
    let sigma_prime = formulas::sigma_prime(&params, &zz, &j);
    let quadratic = formulas::quadratic_a(&p.a, &zz, &j);
    let swapped = Params { a: p.d.clone(), b: p.c.clone(), c: p.b.clone(), d: p.a.clone() };
    let ex = formulas::sigma_lhs(&swapped, &j2);
    let exchange = ex[0] == lhs[0] && ex[2] == lhs[2] && ex[1] == lhs[3] && ex[3] == lhs[1];
    Ok(SigmaReport { sigma, sigma_prime, quadratic, exchange })
}

/// `d` recomputed from the formula for `a` under `j <-> j^2`, `z2 <-> z4`, `delta -> -delta`.
pub fn d_from_a_symmetry(p: &ParameterQuadruple, z: &TraceCoordinates) -> Result<bool, X0Error> {
    let t = p.tower().clone();
    let [z1, z2, z3, z4] = z.embed_into(&t)?;
    let j = p.omega();
    let j2 = &j * &j;
    let d = formulas::a_value(&[z1, z4, z3, z2], &j2, &-&p.delta);
    Ok(d.as_ref() == Some(&p.d))
}

/// Commutator traces of the two parametrised pairs against `Delta`.
#[derive(Debug, Clone)]
pub struct CommutatorCheck {
    pub discriminant: FieldElement,
    pub t_plus: FieldElement,
    pub t_minus: FieldElement,
    /// `(t+ - t-)^2 = Delta`.
    pub square_matches: bool,
    pub distinct: bool,
}

impl CommutatorCheck {
    /// The square identity, and `t+ != t-` exactly when `Delta != 0`.
    pub fn holds(&self) -> bool {
        self.square_matches && self.distinct != self.discriminant.is_zero()
    }
}

pub fn commutator_discriminant_check(z: &TraceCoordinates) -> Result<CommutatorCheck, X0Error> {
    let root = principal_delta(z)?;
    let tr = |s: Sign| -> Result<FieldElement, X0Error> {
        let p = solve_with_delta(z, &root, s)?;
        let (a, b) = build_pair(&p)?;
        Ok(trace_map(&a, &b)?[8].clone())
    };
    let (t_plus, t_minus) = (tr(Sign::Plus)?, tr(Sign::Minus)?);
    let disc = discriminant(z);
    let diff = &t_plus - &t_minus;
    Ok(CommutatorCheck {
        square_matches: &diff * &diff == disc,
        distinct: t_plus != t_minus,
        discriminant: disc,
        t_plus,
        t_minus,
    })
}

fn eigenspace(m: &Matrix, lambda: &FieldElement) -> Result<Vec<Vec<FieldElement>>, LinalgError> {
    let shifted = m.sub(&Matrix::identity(m.tower(), 3).scale(lambda))?;
    kernel_basis(&shifted)
}

/// A common eigenvector of two order-three matrices, if any.
///
/// Eigenvalues are taken from `1, omega, omega^2`; every pair of eigenspaces
/// is intersected.
pub fn common_eigenvector(a: &Matrix, b: &Matrix) -> Result<Option<Vec<FieldElement>>, X0Error> {
    let t = if a.tower().depth() >= b.tower().depth() { a.tower().clone() } else { b.tower().clone() };
    let (a, b) = (a.embed_into(&t)?, b.embed_into(&t)?);
    let w = FieldElement::omega(&t)?;
    let lambdas = [FieldElement::one(&t), w.clone(), &w * &w];
    for la in &lambdas {
        let ea = eigenspace(&a, la)?;
        if ea.is_empty() {
            continue;
        }
        for lb in &lambdas {
            let eb = eigenspace(&b, lb)?;
            if eb.is_empty() {
                continue;
            }
            // Solve sum alpha_i ea_i = sum beta_k eb_k.
            let rows: Vec<Vec<FieldElement>> =
                (0..3).map(|r| ea.iter().map(|v| v[r].clone()).chain(eb.iter().map(|v| -&v[r])).collect()).collect();
            for sol in kernel_basis(&Matrix::from_rows(rows)?)? {
                let v: Vec<FieldElement> = (0..3)
                    .map(|r| ea.iter().zip(&sol).fold(FieldElement::zero(&t), |acc, (e, s)| &acc + &(&e[r] * s)))
                    .collect();
                if v.iter().any(|x| !x.is_zero()) {
                    return Ok(Some(v));
                }
            }
        }
    }
    Ok(None)
}
