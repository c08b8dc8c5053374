use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::int::Int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OmegaKind {
    /// `ω = √−D`, used when `D ≡ 1, 2 (mod 4)`.
    SqrtMinusD,
    /// `ω = (1 + √−D)/2`, used when `D ≡ 3 (mod 4)`.
    HalfInteger,
}

/// The ring of integers `O_D = Z + Zω` of `Q(√−D)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadRing {
    d: i64,
    kind: OmegaKind,
}

pub fn is_squarefree(n: i64) -> bool {
    if n <= 0 {
        return false;
    }
    let mut k = 2i64;
    while k * k <= n {
        if n % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl QuadRing {
    pub fn new(d: i64) -> Result<Self> {
        if !is_squarefree(d) {
            return Err(Error::BadDiscriminant(d));
        }
        let kind = if d % 4 == 3 {
            OmegaKind::HalfInteger
        } else {
            OmegaKind::SqrtMinusD
        };
        Ok(QuadRing { d, kind })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn omega_kind(&self) -> OmegaKind {
        self.kind
    }

    /// `(p, q)` with `ω² = p + qω`.
    pub fn omega_sq(&self) -> (i64, i64) {
        match self.kind {
            OmegaKind::SqrtMinusD => (-self.d, 0),
            OmegaKind::HalfInteger => (-(1 + self.d) / 4, 1),
        }
    }

    /// Field discriminant `d_F`.
    pub fn discriminant(&self) -> i64 {
        match self.kind {
            OmegaKind::SqrtMinusD => -4 * self.d,
            OmegaKind::HalfInteger => -self.d,
        }
    }

    /// `ω` as a point of the complex plane.
    pub fn omega_complex(&self) -> (f64, f64) {
        let s = (self.d as f64).sqrt();
        match self.kind {
            OmegaKind::SqrtMinusD => (0.0, s),
            OmegaKind::HalfInteger => (0.5, s / 2.0),
        }
    }

    /// Imaginary part of `ω`, equal to the covolume of `O_D` in `C`, as `r·√D`.
    pub fn im_omega_rational(&self) -> BigRational {
        match self.kind {
            OmegaKind::SqrtMinusD => BigRational::one(),
            OmegaKind::HalfInteger => BigRational::new(1.into(), 2.into()),
        }
    }

    /// Real part of `ω`.
    pub fn re_omega(&self) -> BigRational {
        match self.kind {
            OmegaKind::SqrtMinusD => BigRational::zero(),
            OmegaKind::HalfInteger => BigRational::new(1.into(), 2.into()),
        }
    }

    pub fn omega(&self) -> QuadInt {
        QuadInt::new(0, 1)
    }

    /// `√−D` written in the basis `{1, ω}`.
    pub fn sqrt_minus_d(&self) -> QuadInt {
        match self.kind {
            OmegaKind::SqrtMinusD => QuadInt::new(0, 1),
            OmegaKind::HalfInteger => QuadInt::new(-1, 2),
        }
    }

    pub fn mul(&self, x: &QuadInt, y: &QuadInt) -> QuadInt {
        let (p, q) = self.omega_sq();
        let bb = &x.b * &y.b;
        let a = &x.a * &y.a + &bb * p;
        let b = &x.a * &y.b + &x.b * &y.a + &bb * q;
        QuadInt { a, b }
    }

    pub fn conj(&self, x: &QuadInt) -> QuadInt {
        match self.kind {
            OmegaKind::SqrtMinusD => QuadInt {
                a: x.a.clone(),
                b: -&x.b,
            },
            OmegaKind::HalfInteger => QuadInt {
                a: &x.a + &x.b,
                b: -&x.b,
            },
        }
    }

    pub fn norm(&self, x: &QuadInt) -> Int {
        match self.kind {
            OmegaKind::SqrtMinusD => &x.a * &x.a + &(&x.b * &x.b) * self.d,
            OmegaKind::HalfInteger => {
                &x.a * &x.a + &x.a * &x.b + &(&x.b * &x.b) * ((1 + self.d) / 4)
            }
        }
    }

    pub fn trace(&self, x: &QuadInt) -> Int {
        match self.kind {
            OmegaKind::SqrtMinusD => &x.a + &x.a,
            OmegaKind::HalfInteger => &x.a + &x.a + &x.b,
        }
    }

    pub fn is_unit(&self, x: &QuadInt) -> bool {
        self.norm(x).is_one()
    }

    /// Units of `O_D`: `{±1}` except for `D = 1` (fourth roots) and `D = 3` (sixth roots).
    pub fn units(&self) -> Vec<QuadInt> {
        let mut out = Vec::new();
        for a in -1i64..=1 {
            for b in -1i64..=1 {
                let x = QuadInt::new(a, b);
                if self.is_unit(&x) {
                    out.push(x);
                }
            }
        }
        out.sort();
        out
    }

    /// Inverse of a unit.
    pub fn unit_inverse(&self, x: &QuadInt) -> QuadInt {
        debug_assert!(self.is_unit(x));
        self.conj(x)
    }

    /// `x / y` when `y` divides `x` in `O_D`.
    pub fn div_exact(&self, x: &QuadInt, y: &QuadInt) -> Option<QuadInt> {
        let n = self.norm(y);
        if n.is_zero() {
            return None;
        }
        let t = self.mul(x, &self.conj(y));
        let (qa, ra) = t.a.div_mod_floor(&n);
        let (qb, rb) = t.b.div_mod_floor(&n);
        (ra.is_zero() && rb.is_zero()).then_some(QuadInt { a: qa, b: qb })
    }

    pub fn pow(&self, x: &QuadInt, e: u32) -> QuadInt {
        let mut acc = QuadInt::one();
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    pub fn to_complex(&self, x: &QuadInt) -> (f64, f64) {
        let (wr, wi) = self.omega_complex();
        let (a, b) = (x.a.to_f64(), x.b.to_f64());
        (a + b * wr, b * wi)
    }

    pub fn field_mul(&self, x: &QuadRat, y: &QuadRat) -> QuadRat {
        let (p, q) = self.omega_sq();
        let (p, q) = (
            BigRational::from(BigInt::from(p)),
            BigRational::from(BigInt::from(q)),
        );
        let bb = &x.b * &y.b;
        QuadRat {
            a: &x.a * &y.a + &bb * &p,
            b: &x.a * &y.b + &x.b * &y.a + &bb * &q,
        }
    }

    pub fn field_conj(&self, x: &QuadRat) -> QuadRat {
        match self.kind {
            OmegaKind::SqrtMinusD => QuadRat {
                a: x.a.clone(),
                b: -&x.b,
            },
            OmegaKind::HalfInteger => QuadRat {
                a: &x.a + &x.b,
                b: -&x.b,
            },
        }
    }

    pub fn field_norm(&self, x: &QuadRat) -> BigRational {
        self.field_mul(x, &self.field_conj(x)).a
    }

    pub fn field_inv(&self, x: &QuadRat) -> Option<QuadRat> {
        let n = self.field_norm(x);
        if n.is_zero() {
            return None;
        }
        let c = self.field_conj(x);
        Some(QuadRat {
            a: &c.a / &n,
            b: &c.b / &n,
        })
    }

    /// `Re(x·conj(y))`, a rational number.
    pub fn field_re_inner(&self, x: &QuadRat, y: &QuadRat) -> BigRational {
        let p = self.field_mul(x, &self.field_conj(y));
        // Re(a + bω) = a + b·Re ω
        &p.a + &p.b * self.re_omega()
    }

    pub fn field_to_complex(&self, x: &QuadRat) -> (f64, f64) {
        let (wr, wi) = self.omega_complex();
        let a = x.a.to_f64().unwrap_or(f64::NAN);
        let b = x.b.to_f64().unwrap_or(f64::NAN);
        (a + b * wr, b * wi)
    }
}

/// An element `a + bω` of `O_D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadInt {
    pub a: Int,
    pub b: Int,
}

impl QuadInt {
    pub fn new(a: i64, b: i64) -> Self {
        QuadInt {
            a: Int::from(a),
            b: Int::from(b),
        }
    }

    pub fn from_int(a: Int) -> Self {
        QuadInt { a, b: Int::ZERO }
    }

    pub fn zero() -> Self {
        QuadInt::new(0, 0)
    }

    pub fn one() -> Self {
        QuadInt::new(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn scale(&self, k: &Int) -> QuadInt {
        QuadInt {
            a: &self.a * k,
            b: &self.b * k,
        }
    }

    /// Small coordinates, when both fit in `i64`.
    pub fn as_i64_pair(&self) -> Option<(i64, i64)> {
        Some((self.a.as_i64()?, self.b.as_i64()?))
    }

    pub fn to_rat(&self) -> QuadRat {
        QuadRat {
            a: BigRational::from(self.a.to_bigint()),
            b: BigRational::from(self.b.to_bigint()),
        }
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_pair(
            f,
            &self.a.to_string(),
            &self.b.to_string(),
            self.b.is_negative(),
        )
    }
}

fn fmt_pair(f: &mut fmt::Formatter<'_>, a: &str, b: &str, b_neg: bool) -> fmt::Result {
    let a_zero = a == "0";
    let b_zero = b == "0";
    match (a_zero, b_zero) {
        (_, true) => write!(f, "{a}"),
        (true, false) => match b {
            "1" => write!(f, "w"),
            "-1" => write!(f, "-w"),
            _ => write!(f, "{b}*w"),
        },
        (false, false) => {
            let sign = if b_neg { "-" } else { "+" };
            let mag = b.trim_start_matches('-');
            if mag == "1" {
                write!(f, "{a}{sign}w")
            } else {
                write!(f, "{a}{sign}{mag}*w")
            }
        }
    }
}

impl Add for &QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: &QuadInt) -> QuadInt {
        QuadInt {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Sub for &QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: &QuadInt) -> QuadInt {
        QuadInt {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

/// An element `a + bω` of the field `F = Q(√−D)` with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadRat {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadRat {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadRat { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        QuadRat {
            a: BigRational::from(BigInt::from(a)),
            b: BigRational::from(BigInt::from(b)),
        }
    }

    pub fn from_rational(a: BigRational) -> Self {
        QuadRat {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        QuadRat::from_ints(0, 0)
    }

    pub fn one() -> Self {
        QuadRat::from_ints(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scale(&self, k: &BigRational) -> QuadRat {
        QuadRat {
            a: &self.a * k,
            b: &self.b * k,
        }
    }

    /// Least common denominator of the two coordinates.
    pub fn denominator(&self) -> BigInt {
        let (x, y) = (self.a.denom(), self.b.denom());
        num_integer::Integer::lcm(x, y)
    }

    /// The element as a `QuadInt` when both coordinates are integers.
    pub fn to_quad_int(&self) -> Option<QuadInt> {
        (self.a.is_integer() && self.b.is_integer()).then(|| QuadInt {
            a: Int::from(self.a.to_integer()),
            b: Int::from(self.b.to_integer()),
        })
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_pair(
            f,
            &self.a.to_string(),
            &self.b.to_string(),
            self.b.is_negative(),
        )
    }
}

impl Add for &QuadRat {
    type Output = QuadRat;
    fn add(self, rhs: &QuadRat) -> QuadRat {
        QuadRat {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Sub for &QuadRat {
    type Output = QuadRat;
    fn sub(self, rhs: &QuadRat) -> QuadRat {
        QuadRat {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl Neg for &QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat {
            a: -&self.a,
            b: -&self.b,
        }
    }
}
