use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::approx::Approx;
use super::tower::rational_sqrt;
use super::{FieldError, Tower};

/// An exact element of a [`Tower`], stored as rational coefficients over the
/// full multiplicative basis of the tower.
#[derive(Clone)]
pub struct FieldElement {
    tower: Arc<Tower>,
    coeffs: Vec<BigRational>,
}

/// The arithmetic operations exposed through [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked binary arithmetic; fails when neither tower embeds in the other.
pub fn arith(op: ArithOp, x: &FieldElement, y: &FieldElement) -> Result<FieldElement, FieldError> {
    let (x, y) = FieldElement::unify(x, y)?;
    Ok(match op {
        ArithOp::Add => x.add_same(&y),
        ArithOp::Sub => x.sub_same(&y),
        ArithOp::Mul => x.mul_same(&y),
    })
}

impl FieldElement {
    pub fn from_coeffs(tower: &Arc<Tower>, coeffs: Vec<BigRational>) -> Self {
        assert_eq!(coeffs.len(), tower.degree(), "coefficient vector length must match tower degree");
        FieldElement { tower: tower.clone(), coeffs }
    }

    pub fn zero(tower: &Arc<Tower>) -> Self {
        FieldElement { tower: tower.clone(), coeffs: vec![BigRational::zero(); tower.degree()] }
    }

    pub fn one(tower: &Arc<Tower>) -> Self {
        Self::from_rational(tower, BigRational::one())
    }

    pub fn from_rational(tower: &Arc<Tower>, q: BigRational) -> Self {
        let mut e = Self::zero(tower);
        e.coeffs[0] = q;
        e
    }

    pub fn from_int(tower: &Arc<Tower>, n: i64) -> Self {
        Self::from_rational(tower, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(tower: &Arc<Tower>, p: i64, q: i64) -> Self {
        Self::from_rational(tower, BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// The basis element indexed by `mask` (a product of adjoined roots).
    pub fn basis(tower: &Arc<Tower>, mask: usize) -> Self {
        let mut e = Self::zero(tower);
        e.coeffs[mask] = BigRational::one();
        e
    }

    /// The adjoined root at `level`.
    pub fn generator(tower: &Arc<Tower>, level: usize) -> Self {
        Self::basis(tower, 1 << level)
    }

    /// `omega = (-1 + i sqrt3)/2` in a tower whose first two levels are `i` and `sqrt3`.
    pub fn omega(tower: &Arc<Tower>) -> Result<Self, FieldError> {
        let eis = Tower::eisenstein();
        if !eis.is_prefix_of(tower) {
            return Err(FieldError::NoCubeRoot);
        }
        let mut e = Self::zero(tower);
        e.coeffs[0] = BigRational::new((-1).into(), 2.into());
        e.coeffs[0b11] = BigRational::new(1.into(), 2.into());
        Ok(e)
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Number of nonzero basis coefficients; used as a pivot cost.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Total bit size of the coefficients; breaks ties between equal weights.
    pub fn height(&self) -> u64 {
        self.coeffs.iter().filter(|c| !c.is_zero()).map(|c| c.numer().bits() + c.denom().bits()).sum()
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Reinterprets the element in a tower that has `self.tower` as a prefix.
    pub fn embed_into(&self, target: &Arc<Tower>) -> Result<FieldElement, FieldError> {
        if Arc::ptr_eq(&self.tower, target) {
            return Ok(self.clone());
        }
        if !self.tower.is_prefix_of(target) {
            return Err(FieldError::TowerMismatch(format!("{:?}", self.tower), format!("{:?}", target)));
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(target.degree(), BigRational::zero());
        Ok(FieldElement { tower: target.clone(), coeffs })
    }

    /// Brings two elements into a common tower.
    pub fn unify(x: &FieldElement, y: &FieldElement) -> Result<(FieldElement, FieldElement), FieldError> {
        if Arc::ptr_eq(&x.tower, &y.tower) || *x.tower == *y.tower {
            return Ok((x.clone(), FieldElement { tower: x.tower.clone(), coeffs: y.coeffs.clone() }));
        }
        if x.tower.depth() <= y.tower.depth() {
            Ok((x.embed_into(&y.tower)?, y.clone()))
        } else {
            Ok((x.clone(), y.embed_into(&x.tower)?))
        }
    }

    fn add_same(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        FieldElement { tower: self.tower.clone(), coeffs }
    }

    fn sub_same(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        FieldElement { tower: self.tower.clone(), coeffs }
    }

    fn mul_same(&self, other: &Self) -> Self {
        let dim = self.tower.degree();
        let mut out = vec![BigRational::zero(); dim];
        for (m, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (n, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in self.tower.product_terms(m, n) {
                    if c.is_one() {
                        out[*k] += &ab;
                    } else {
                        out[*k] += &ab * c;
                    }
                }
            }
        }
        FieldElement { tower: self.tower.clone(), coeffs: out }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        FieldElement { tower: self.tower.clone(), coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Splits `x = a + b r` along the top level; `a`, `b` live in the parent tower.
    fn split_top(&self) -> Option<(FieldElement, FieldElement)> {
        let parent = self.tower.parent()?.clone();
        let half = parent.degree();
        let a = FieldElement { tower: parent.clone(), coeffs: self.coeffs[..half].to_vec() };
        let b = FieldElement { tower: parent, coeffs: self.coeffs[half..].to_vec() };
        Some((a, b))
    }

    fn join_top(tower: &Arc<Tower>, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut coeffs = a.coeffs.clone();
        coeffs.extend(b.coeffs.iter().cloned());
        FieldElement { tower: tower.clone(), coeffs }
    }

    /// Multiplicative inverse, computed level by level via the conjugate
    /// `(a + b r)^-1 = (a - b r) / (a^2 - b^2 d)`.
    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        self.inv_nonzero()
    }

    fn inv_nonzero(&self) -> Result<FieldElement, FieldError> {
        let Some((a, b)) = self.split_top() else {
            return Ok(FieldElement { tower: self.tower.clone(), coeffs: vec![self.coeffs[0].recip()] });
        };
        let level = self.tower.depth() - 1;
        let d = self.tower.square(level);
        if b.is_zero() {
            let ai = a.inv_nonzero()?;
            return Ok(Self::join_top(&self.tower, &ai, &b));
        }
        let norm = &(&a * &a) - &(&(&b * &b) * d);
        if norm.is_zero() {
            return Err(FieldError::ZeroDivisor { level, name: self.tower.level_name(level).to_string() });
        }
        let ni = norm.inv_nonzero()?;
        Ok(Self::join_top(&self.tower, &(&a * &ni), &(-&(&b * &ni))))
    }

    pub fn try_div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        let (x, y) = Self::unify(self, other)?;
        Ok(x.mul_same(&y.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<FieldElement, FieldError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = FieldElement::one(&self.tower);
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            k >>= 1;
        }
        Ok(acc)
    }

    /// A square root inside the element's own tower, if one exists.
    ///
    /// Works recursively: `(p + q r)^2 = a + b r` forces `p^2 = (a +- n)/2`
    /// with `n^2 = a^2 - b^2 d`. The sign of the returned root is not normalized.
    pub fn sqrt(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let Some((a, b)) = self.split_top() else {
            return rational_sqrt(&self.coeffs[0]).map(|r| FieldElement { tower: self.tower.clone(), coeffs: vec![r] });
        };
        let d = self.tower.square(self.tower.depth() - 1).clone();
        let zero = FieldElement::zero(a.tower());
        let half = BigRational::new(1.into(), 2.into());
        if b.is_zero() {
            if let Some(p) = a.sqrt() {
                return Some(Self::join_top(&self.tower, &p, &zero));
            }
            let t2 = a.try_div(&d).ok()?;
            let t = t2.sqrt()?;
            return Some(Self::join_top(&self.tower, &zero, &t));
        }
        let disc = &(&a * &a) - &(&(&b * &b) * &d);
        let n = disc.sqrt()?;
        for cand in [(&a + &n).scale(&half), (&a - &n).scale(&half)] {
            if let Some(p) = cand.sqrt() {
                if p.is_zero() {
                    continue;
                }
                let q = b.try_div(&p.scale(&BigRational::from_integer(2.into()))).ok()?;
                let root = Self::join_top(&self.tower, &p, &q);
                if &root * &root == *self {
                    return Some(root);
                }
            }
        }
        None
    }

    /// The square root whose complex embedding is the principal one
    /// (positive real part, or non-negative imaginary part on the imaginary axis).
    pub fn principal_sqrt(&self) -> Option<FieldElement> {
        let r = self.sqrt()?;
        if r.is_zero() {
            return Some(r);
        }
        let z = r.complex_embed(40);
        let eps = Approx::epsilon(30);
        let positive = if z.re.abs_le(&eps) { z.im.is_positive() } else { z.re.is_positive() };
        Some(if positive { r } else { -&r })
    }

    /// Complex approximation under the default embedding: `i -> +i`, positive
    /// rational radicands to positive reals, other roots to the principal branch.
    pub fn complex_embed(&self, digits: u32) -> super::approx::ComplexApprox {
        super::approx::embed(self, digits)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        match FieldElement::unify(self, other) {
            Ok((x, y)) => x.coeffs == y.coeffs,
            Err(_) => false,
        }
    }
}

impl Eq for FieldElement {}

macro_rules! binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                if Arc::ptr_eq(&self.tower, &rhs.tower) {
                    return self.$inner(rhs);
                }
                let (x, y) = FieldElement::unify(self, rhs).expect("tower mismatch in field arithmetic");
                x.$inner(&y)
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, add_same);
binop!(Sub, sub, sub_same);
binop!(Mul, mul, mul_same);

impl Div<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self.try_div(rhs).expect("division failed")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { tower: self.tower.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Canonical text form: `(p/q)·b` summands joined by ` + `, in basis order.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (mask, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({})·{}", c, self.tower.basis_name(mask))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
