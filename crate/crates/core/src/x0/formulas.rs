//! Closed forms for the `X0` parametrisation, generic over exact and
//! approximate scalars so both sweep modes share one transcription.

use crate::field::{ComplexApprox, FieldElement};

pub trait Scalar: Clone {
    /// The integer `n` in the same field (or at the same precision) as `self`.
    fn int(&self, n: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// `None` when `o` is zero (or negligible, for approximations).
    fn div(&self, o: &Self) -> Option<Self>;

    fn neg(&self) -> Self {
        self.int(0).sub(self)
    }

    fn times(&self, n: i64) -> Self {
        self.mul(&self.int(n))
    }
}

impl Scalar for FieldElement {
    fn int(&self, n: i64) -> Self {
        FieldElement::from_int(self.tower(), n)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Option<Self> {
        self.try_div(o).ok()
    }
}

/// Denominators below this magnitude count as vanishing in float mode.
const FLOAT_ZERO: f64 = 1e-20;

impl Scalar for ComplexApprox {
    fn int(&self, n: i64) -> Self {
        ComplexApprox::from_rational(&num_rational::BigRational::from_integer(n.into()), self.digits())
    }
    fn add(&self, o: &Self) -> Self {
        ComplexApprox::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        ComplexApprox::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        ComplexApprox::mul(self, o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        if o.abs().to_f64() < FLOAT_ZERO {
            return None;
        }
        ComplexApprox::div(self, o)
    }
}

fn sum<T: Scalar>(terms: &[T]) -> T {
    terms[1..].iter().fold(terms[0].clone(), |acc, t| acc.add(t))
}

pub fn discriminant<T: Scalar>(z: &[T; 4]) -> T {
    let [z1, z2, z3, z4] = z;
    let cube = |x: &T| x.mul(x).mul(x);
    sum(&[
        z1.mul(z1).mul(z3).mul(z3),
        z1.mul(z2).mul(z3).mul(z4).times(-2),
        z2.mul(z2).mul(z4).mul(z4),
        cube(z1).times(-4),
        cube(z2).times(-4),
        cube(z3).times(-4),
        cube(z4).times(-4),
        z1.mul(z3).times(18),
        z2.mul(z4).times(18),
        z1.int(-27),
    ])
}

/// The four denominators, for `a`, `d`, `b`, `c` in that order.
pub fn denominators<T: Scalar>(z: &[T; 4], j: &T) -> [T; 4] {
    let [z1, z2, z3, z4] = z;
    let j2 = j.mul(j);
    [
        sum(&[j.mul(z1), z2.clone(), j2.mul(z3), z4.clone(), z1.int(3)]),
        sum(&[j2.mul(z1), z2.clone(), j.mul(z3), z4.clone(), z1.int(3)]),
        sum(&[z1.clone(), z2.clone(), j2.mul(z3), j2.mul(z4), j.times(3)]),
        sum(&[z1.clone(), j.mul(z2), j.mul(z3), z4.clone(), j2.times(3)]),
    ]
}

pub const DENOMINATOR_NAMES: [(&str, &str); 4] = [
    ("a", "j*z1 + z2 + j^2*z3 + z4 + 3"),
    ("d", "j^2*z1 + z2 + j*z3 + z4 + 3"),
    ("b", "z1 + z2 + j^2*z3 + j^2*z4 + 3j"),
    ("c", "z1 + j*z2 + j*z3 + z4 + 3j^2"),
];

/// `4a = (z1 z3 - z2 z4 + 6j z1 + 6j^2 z3 + 9 + delta) / (j z1 + z2 + j^2 z3 + z4 + 3)`.
pub fn a_value<T: Scalar>(z: &[T; 4], j: &T, delta: &T) -> Option<T> {
    let [z1, z2, z3, z4] = z;
    let j2 = j.mul(j);
    let num = sum(&[z1.mul(z3), z2.mul(z4).neg(), j.mul(z1).times(6), j2.mul(z3).times(6), z1.int(9), delta.clone()]);
    num.div(&denominators(z, j)[0].times(4))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

/// `(a, b, c, d)` from the closed forms, or the index (into
/// [`DENOMINATOR_NAMES`]) of the first vanishing denominator.
pub fn params<T: Scalar>(z: &[T; 4], j: &T, delta: &T) -> Result<Params<T>, usize> {
    let [z1, z2, z3, z4] = z;
    let j2 = j.mul(j);
    let den = denominators(z, j);
    let one = z1.int(1);
    if let Some(k) = den.iter().position(|d| one.div(d).is_none()) {
        return Err(k);
    }
    let a = a_value(z, j, delta).ok_or(0usize)?;
    let dnum = sum(&[z1.mul(z3), z2.mul(z4).neg(), j2.mul(z1).times(6), j.mul(z3).times(6), z1.int(9), delta.neg()]);
    let d = dnum.div(&den[1].times(4)).ok_or(1usize)?;
    let pb = sum(&[z1.clone(), z2.neg(), j2.mul(z3).neg(), j2.mul(z4), j2.sub(&z1.int(1)).times(3)]);
    let qb = sum(&[z1.clone(), j.mul(z2), j.mul(z3), z4.clone(), j2.times(3)]);
    let b = pb.mul(&a).add(&j.sub(&z1.int(1)).mul(&qb)).div(&den[2]).ok_or(2usize)?;
    let pc = sum(&[z1.clone(), j.mul(z2), j.mul(z3).neg(), z4.neg(), j.sub(&z1.int(1)).times(3)]);
    let qc = sum(&[z1.clone(), z2.clone(), j2.mul(z3), j2.mul(z4), j.times(3)]);
    let c = pc.mul(&d).add(&j2.sub(&z1.int(1)).mul(&qc)).div(&den[3]).ok_or(3usize)?;
    Ok(Params { a, b, c, d })
}

/// Left-hand sides of the four equations of the system, in the order
/// `tr AB`, `tr A^-1 B`, `tr A^-1 B^-1`, `tr A B^-1`.
pub fn sigma_lhs<T: Scalar>(p: &Params<T>, j: &T) -> [T; 4] {
    let Params { a, b, c, d } = p;
    let j2 = j.mul(j);
    let three = a.int(3);
    [
        sum(&[a.add(b).mul(&d.add(c)), a.mul(&j2).times(2), j.mul(d).times(2)]),
        sum(&[a.sub(b).mul(&d.add(c)), a.times(-2), d.times(-2), three.clone()]),
        sum(&[a.sub(b).mul(&d.sub(c)), j.mul(a).times(2), j2.mul(d).times(2)]),
        sum(&[a.add(b).mul(&d.sub(c)), a.times(-2), d.times(-2), three]),
    ]
}

/// The four linear combinations of the system, each of which should vanish.
pub fn sigma_prime<T: Scalar>(p: &Params<T>, z: &[T; 4], j: &T) -> [T; 4] {
    let Params { a, b, c, d } = p;
    let [z1, z2, z3, z4] = z;
    [
        sum(&[a.mul(d).times(4), a.times(-6), d.times(-6), z1.neg(), z2.neg(), z3.neg(), z4.neg(), a.int(6)]),
        sum(&[b.mul(c).times(4), a.times(2), d.times(2), z1.neg(), z2.clone(), z3.neg(), z4.clone(), a.int(-6)]),
        sum(&[
            a.mul(c).times(2),
            b.mul(d).times(2),
            a.mul(j).times(-4),
            d.mul(j).times(4),
            a.times(-2),
            d.times(2),
            z1.neg(),
            z3.clone(),
        ]),
        sum(&[a.mul(c).times(2), b.mul(d).times(-2), z2.neg(), z4.clone()]),
    ]
}

/// The quadratic in `a` whose discriminant is `Delta`, evaluated at `a`.
pub fn quadratic_a<T: Scalar>(a: &T, z: &[T; 4], j: &T) -> T {
    let [z1, z2, z3, z4] = z;
    let j2 = j.mul(j);
    let lead = denominators(z, j)[0].times(4);
    let lin = sum(&[j.mul(z1).times(6), j2.mul(z3).times(6), z1.mul(z3), z2.mul(z4).neg(), z1.int(9)]).times(-2);
    let cst = sum(&[
        z1.int(9),
        j.mul(z1).times(6),
        z2.times(-3),
        j2.mul(z3).times(6),
        z4.times(-3),
        j2.mul(z1).mul(z1),
        z2.mul(z2),
        j.mul(z3).mul(z3),
        z4.mul(z4),
        j.mul(z1).mul(z2).neg(),
        z1.mul(z3).times(2),
        j.mul(z1).mul(z4).neg(),
        j2.mul(z2).mul(z3).neg(),
        z2.mul(z4).neg(),
        j2.mul(z3).mul(z4).neg(),
    ]);
    sum(&[lead.mul(a).mul(a), lin.mul(a), cst])
}

pub type Mat3<T> = [[T; 3]; 3];

/// The lower-triangular `A` and upper-triangular `B` of the normal form.
pub fn pair<T: Scalar>(p: &Params<T>, j: &T) -> (Mat3<T>, Mat3<T>) {
    let Params { a, b, c, d } = p;
    let j2 = j.mul(j);
    let (zero, one) = (a.int(0), a.int(1));
    let am = [
        [j.clone(), zero.clone(), zero.clone()],
        [j2.clone(), one.clone(), zero.clone()],
        [b.add(a), j.mul(a).times(2), j2.clone()],
    ];
    let bm = [[j.clone(), j2.mul(d).times(2), c.add(d)], [zero.clone(), one, j.clone()], [zero.clone(), zero, j2]];
    (am, bm)
}

pub fn mul3<T: Scalar>(x: &Mat3<T>, y: &Mat3<T>) -> Mat3<T> {
    std::array::from_fn(|r| {
        std::array::from_fn(|c| sum(&[x[r][0].mul(&y[0][c]), x[r][1].mul(&y[1][c]), x[r][2].mul(&y[2][c])]))
    })
}

/// Adjugate, which is the inverse for determinant one.
pub fn adj3<T: Scalar>(m: &Mat3<T>) -> Mat3<T> {
    let cof = |r: usize, c: usize| {
        let (r1, r2) = ((r + 1) % 3, (r + 2) % 3);
        let (c1, c2) = ((c + 1) % 3, (c + 2) % 3);
        m[r1][c1].mul(&m[r2][c2]).sub(&m[r1][c2].mul(&m[r2][c1]))
    };
    std::array::from_fn(|r| std::array::from_fn(|c| cof(c, r)))
}

pub fn trace3<T: Scalar>(m: &Mat3<T>) -> T {
    sum(&[m[0][0].clone(), m[1][1].clone(), m[2][2].clone()])
}

/// The nine trace coordinates of a determinant-one pair.
pub fn traces<T: Scalar>(a: &Mat3<T>, b: &Mat3<T>) -> [T; 9] {
    let (ai, bi) = (adj3(a), adj3(b));
    let comm = mul3(&mul3(a, b), &mul3(&ai, &bi));
    [
        trace3(a),
        trace3(b),
        trace3(&mul3(a, b)),
        trace3(&mul3(&ai, b)),
        trace3(&ai),
        trace3(&bi),
        trace3(&mul3(&ai, &bi)),
        trace3(&mul3(a, &bi)),
        trace3(&comm),
    ]
}
