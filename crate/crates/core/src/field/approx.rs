//! Fixed-point decimal approximations of complex embeddings.
//!
//! Values are big integers scaled by `10^scale`, so any requested number of
//! digits is available. Only used for diagnostics, sign choices and the float
//! sweep mode; never for an exact decision.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::FieldElement;

/// Guard digits carried beyond the requested precision.
const GUARD: u32 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Approx {
    mantissa: BigInt,
    scale: u32,
}

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), e as usize)
}

impl Approx {
    pub fn zero(scale: u32) -> Self {
        Approx { mantissa: BigInt::zero(), scale }
    }

    /// `10^-digits`.
    pub fn epsilon(digits: u32) -> Self {
        Approx { mantissa: BigInt::from(1), scale: digits }
    }

    pub fn from_rational(q: &BigRational, scale: u32) -> Self {
        let m = (q.numer() * pow10(scale)) / q.denom();
        Approx { mantissa: m, scale }
    }

    pub fn from_f64(x: f64, scale: u32) -> Self {
        let q = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
        Self::from_rational(&q, scale)
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    fn rescale(&self, scale: u32) -> Self {
        let mantissa = match scale.cmp(&self.scale) {
            Ordering::Equal => self.mantissa.clone(),
            Ordering::Greater => &self.mantissa * pow10(scale - self.scale),
            Ordering::Less => &self.mantissa / pow10(self.scale - scale),
        };
        Approx { mantissa, scale }
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.sign() == Sign::Plus
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.sign() == Sign::Minus
    }

    pub fn abs(&self) -> Self {
        Approx { mantissa: self.mantissa.abs(), scale: self.scale }
    }

    /// `|self| <= bound`, comparing across scales.
    pub fn abs_le(&self, bound: &Approx) -> bool {
        let s = self.scale.max(bound.scale);
        self.rescale(s).mantissa.abs() <= bound.rescale(s).mantissa
    }

    pub fn add(&self, o: &Self) -> Self {
        let s = self.scale.max(o.scale);
        Approx { mantissa: self.rescale(s).mantissa + o.rescale(s).mantissa, scale: s }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let s = self.scale.max(o.scale);
        Approx { mantissa: self.rescale(s).mantissa - o.rescale(s).mantissa, scale: s }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let s = self.scale.max(o.scale);
        let m = self.rescale(s).mantissa * o.rescale(s).mantissa / pow10(s);
        Approx { mantissa: m, scale: s }
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        let s = self.scale.max(o.scale);
        let den = o.rescale(s).mantissa;
        if den.is_zero() {
            return None;
        }
        Some(Approx { mantissa: self.rescale(s).mantissa * pow10(s) / den, scale: s })
    }

    pub fn neg(&self) -> Self {
        Approx { mantissa: -&self.mantissa, scale: self.scale }
    }

    /// Square root of a non-negative value (negative inputs are clamped to 0).
    pub fn sqrt(&self) -> Self {
        if !self.is_positive() {
            return Approx::zero(self.scale);
        }
        Approx { mantissa: (&self.mantissa * pow10(self.scale)).sqrt(), scale: self.scale }
    }

    pub fn to_f64(&self) -> f64 {
        let q = BigRational::new(self.mantissa.clone(), pow10(self.scale));
        q.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with `digits` fractional digits (truncated).
    pub fn to_decimal(&self, digits: u32) -> String {
        let v = self.rescale(digits);
        let neg = v.mantissa.is_negative();
        let s = v.mantissa.abs().to_string();
        let d = digits as usize;
        let padded = if s.len() <= d { format!("{}{}", "0".repeat(d + 1 - s.len()), s) } else { s };
        let (int, frac) = padded.split_at(padded.len() - d);
        let sign = if neg { "-" } else { "" };
        if d == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }
}

/// A complex number as a pair of [`Approx`] values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexApprox {
    pub re: Approx,
    pub im: Approx,
    digits: u32,
}

impl ComplexApprox {
    pub fn new(re: Approx, im: Approx, digits: u32) -> Self {
        ComplexApprox { re, im, digits }
    }

    pub fn zero(digits: u32) -> Self {
        let s = digits + GUARD;
        ComplexApprox { re: Approx::zero(s), im: Approx::zero(s), digits }
    }

    pub fn from_rational(q: &BigRational, digits: u32) -> Self {
        let s = digits + GUARD;
        ComplexApprox { re: Approx::from_rational(q, s), im: Approx::zero(s), digits }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexApprox { re: self.re.add(&o.re), im: self.im.add(&o.im), digits: self.digits }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ComplexApprox { re: self.re.sub(&o.re), im: self.im.sub(&o.im), digits: self.digits }
    }

    pub fn neg(&self) -> Self {
        ComplexApprox { re: self.re.neg(), im: self.im.neg(), digits: self.digits }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        ComplexApprox { re, im, digits: self.digits }
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        let s = self.re.scale();
        let f = |a: &Approx| Approx { mantissa: &a.rescale(s).mantissa * q.numer() / q.denom(), scale: s };
        ComplexApprox { re: f(&self.re), im: f(&self.im), digits: self.digits }
    }

    pub fn norm_sqr(&self) -> Approx {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> Approx {
        self.norm_sqr().sqrt()
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        let n = o.norm_sqr();
        let re = self.re.mul(&o.re).add(&self.im.mul(&o.im)).div(&n)?;
        let im = self.im.mul(&o.re).sub(&self.re.mul(&o.im)).div(&n)?;
        Some(ComplexApprox { re, im, digits: self.digits })
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let r = self.abs();
        let re = r
            .add(&self.re)
            .div(&Approx::from_rational(&BigRational::from_integer(2.into()), r.scale()))
            .unwrap()
            .sqrt();
        let im_abs = r
            .sub(&self.re)
            .div(&Approx::from_rational(&BigRational::from_integer(2.into()), r.scale()))
            .unwrap()
            .sqrt();
        let im = if self.im.is_negative() { im_abs.neg() } else { im_abs };
        ComplexApprox { re, im, digits: self.digits }
    }

    /// Relative closeness `|a - b| <= tol * max(1, |a|, |b|)`.
    pub fn close_to(&self, o: &Self, tol: f64) -> bool {
        let diff = self.sub(o).abs().to_f64();
        let mag = 1f64.max(self.abs().to_f64()).max(o.abs().to_f64());
        diff <= tol * mag
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im = self.im.to_decimal(self.digits);
        let (sign, mag) = match im.strip_prefix('-') {
            Some(m) => ("-", m.to_string()),
            None => ("+", im),
        };
        write!(f, "{} {} {}i", self.re.to_decimal(self.digits), sign, mag)
    }
}

/// Embeds `x` into `C` at `digits` decimal digits of precision.
pub(crate) fn embed(x: &FieldElement, digits: u32) -> ComplexApprox {
    let tower = x.tower();
    let depth = tower.depth();
    // Images of the adjoined roots, level by level.
    let mut roots: Vec<ComplexApprox> = Vec::with_capacity(depth);
    for level in 0..depth {
        let d = embed(tower.square(level), digits + 4);
        roots.push(d.sqrt());
    }
    let mut acc = ComplexApprox::zero(digits + 4);
    for (mask, c) in x.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut term = ComplexApprox::from_rational(c, digits + 4);
        for (level, r) in roots.iter().enumerate() {
            if mask & (1 << level) != 0 {
                term = term.mul(r);
            }
        }
        acc = acc.add(&term);
    }
    acc.digits = digits;
    acc
}
