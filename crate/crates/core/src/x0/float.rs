//! Approximate evaluation of the parametrisation at 30 digits, for fast sweeps.

use num_rational::BigRational;

use super::formulas::{self, Params, Scalar};
use super::{Sign, TraceCoordinates, X0Error, DENOMINATOR_NAMES};
use crate::field::{ComplexApprox, FieldElement, Tower};

pub const DIGITS: u32 = 30;
/// Relative tolerance of every approximate check.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct FloatSample {
    pub discriminant: ComplexApprox,
    pub delta: ComplexApprox,
    pub params: Params<ComplexApprox>,
    pub traces: [ComplexApprox; 9],
    /// Traces reproduce `(0, 0, z1, z2, 0, 0, z3, z4)` and the system residuals vanish.
    pub sigma_ok: bool,
    /// `(t+ - t-)^2` matches `Delta`.
    pub commutator_ok: bool,
}

fn omega() -> ComplexApprox {
    FieldElement::omega(&Tower::eisenstein()).expect("omega").complex_embed(DIGITS)
}

fn close(x: &ComplexApprox, y: &ComplexApprox) -> bool {
    x.close_to(y, TOLERANCE)
}

fn commutator_trace(
    z: &[ComplexApprox; 4],
    j: &ComplexApprox,
    delta: &ComplexApprox,
) -> Result<ComplexApprox, X0Error> {
    let p = formulas::params(z, j, delta).map_err(denominator)?;
    let (a, b) = formulas::pair(&p, j);
    Ok(formulas::traces(&a, &b)[8].clone())
}

fn denominator(k: usize) -> X0Error {
    let (param, expr) = DENOMINATOR_NAMES[k];
    X0Error::Denominator { param, expr }
}

/// Evaluates one sample; coordinates must be rational.
pub fn sample(z: &TraceCoordinates, sign: Sign) -> Result<FloatSample, X0Error> {
    let q: Vec<BigRational> =
        z.z.iter()
            .map(|x| x.as_rational().ok_or_else(|| X0Error::SelfCheck(format!("float mode needs rational z, got {x}"))))
            .collect::<Result<_, _>>()?;
    let zz: [ComplexApprox; 4] = std::array::from_fn(|k| ComplexApprox::from_rational(&q[k], DIGITS));
    let j = omega();
    let disc = formulas::discriminant(&zz);
    let root = disc.sqrt();
    let delta = match sign {
        Sign::Plus => root.clone(),
        Sign::Minus => Scalar::neg(&root),
    };
    let p = formulas::params(&zz, &j, &delta).map_err(denominator)?;
    let (a, b) = formulas::pair(&p, &j);
    let traces = formulas::traces(&a, &b);
    let zero = zz[0].int(0);
    let want = [&zero, &zero, &zz[0], &zz[1], &zero, &zero, &zz[2], &zz[3]];
    let lhs = formulas::sigma_lhs(&p, &j);
    let sigma_ok = traces.iter().zip(want).all(|(t, w)| close(t, w))
        && lhs.iter().zip(&zz).all(|(l, w)| close(l, w))
        && formulas::sigma_prime(&p, &zz, &j).iter().all(|r| close(r, &zero))
        && close(&formulas::quadratic_a(&p.a, &zz, &j), &zero);
    let tp = commutator_trace(&zz, &j, &root)?;
    let tm = commutator_trace(&zz, &j, &Scalar::neg(&root))?;
    let diff = Scalar::sub(&tp, &tm);
    let commutator_ok = close(&Scalar::mul(&diff, &diff), &disc);
    Ok(FloatSample { discriminant: disc, delta, params: p, traces, sigma_ok, commutator_ok })
}
