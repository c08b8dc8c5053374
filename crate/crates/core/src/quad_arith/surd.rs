use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::int::Int;

/// An exact real number `r·(√D)^e` with `r` rational.
///
/// The exponent is kept in `{0, 1}`; even powers of `√D` are folded into `r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurdValue {
    coeff: BigRational,
    sqrt_exp: u8,
    d: i64,
}

pub fn ln_bigint(x: &BigInt) -> f64 {
    Int::from(x).ln_abs()
}

pub fn ln_rational(x: &BigRational) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    let v = ln_rational(x).exp();
    if x.is_negative() {
        -v
    } else if x.is_zero() {
        0.0
    } else {
        v
    }
}

impl SurdValue {
    pub fn new(coeff: BigRational, sqrt_exp: i32, d: i64) -> Self {
        assert!(d > 0);
        let e = sqrt_exp.rem_euclid(2);
        let k = (sqrt_exp - e) / 2;
        let dk = BigRational::from(BigInt::from(d));
        let coeff = if k >= 0 {
            coeff * num_traits::pow(dk, k as usize)
        } else {
            coeff / num_traits::pow(dk, (-k) as usize)
        };
        let sqrt_exp = if coeff.is_zero() || d == 1 {
            0
        } else {
            e as u8
        };
        SurdValue { coeff, sqrt_exp, d }
    }

    pub fn rational(r: BigRational, d: i64) -> Self {
        SurdValue::new(r, 0, d)
    }

    pub fn from_int(n: i64, d: i64) -> Self {
        SurdValue::rational(BigRational::from(BigInt::from(n)), d)
    }

    pub fn one(d: i64) -> Self {
        SurdValue::from_int(1, d)
    }

    pub fn sqrt_d(d: i64) -> Self {
        SurdValue::new(BigRational::one(), 1, d)
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn sqrt_exp(&self) -> u8 {
        self.sqrt_exp
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn is_positive(&self) -> bool {
        self.coeff.is_positive()
    }

    pub fn mul(&self, o: &SurdValue) -> SurdValue {
        assert_eq!(self.d, o.d);
        SurdValue::new(
            &self.coeff * &o.coeff,
            (self.sqrt_exp + o.sqrt_exp) as i32,
            self.d,
        )
    }

    pub fn scale(&self, r: &BigRational) -> SurdValue {
        SurdValue::new(&self.coeff * r, self.sqrt_exp as i32, self.d)
    }

    pub fn inv(&self) -> SurdValue {
        assert!(!self.coeff.is_zero(), "inverse of zero");
        SurdValue::new(self.coeff.recip(), -(self.sqrt_exp as i32), self.d)
    }

    pub fn div(&self, o: &SurdValue) -> SurdValue {
        self.mul(&o.inv())
    }

    pub fn powi(&self, e: i32) -> SurdValue {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = SurdValue::one(self.d);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Square of the value, always rational.
    pub fn square(&self) -> BigRational {
        let s = &self.coeff * &self.coeff;
        if self.sqrt_exp == 1 {
            s * BigRational::from(BigInt::from(self.d))
        } else {
            s
        }
    }

    pub fn ln(&self) -> f64 {
        ln_rational(&self.coeff.abs()) + 0.5 * self.sqrt_exp as f64 * (self.d as f64).ln()
    }

    pub fn to_f64(&self) -> f64 {
        if self.coeff.is_zero() {
            return 0.0;
        }
        let v = self.ln().exp();
        if self.coeff.is_negative() {
            -v
        } else {
            v
        }
    }
}

impl PartialOrd for SurdValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SurdValue {
    fn cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.d, other.d);
        let (s1, s2) = (self.coeff.signum(), other.coeff.signum());
        if s1 != s2 {
            return s1.cmp(&s2);
        }
        let by_square = self.square().cmp(&other.square());
        if s1.is_negative() {
            by_square.reverse()
        } else {
            by_square
        }
    }
}

impl fmt::Display for SurdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sqrt_exp == 1 {
            write!(f, "{}*sqrt({})", self.coeff, self.d)
        } else {
            write!(f, "{}", self.coeff)
        }
    }
}

impl Serialize for SurdValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SurdValue", 5)?;
        st.serialize_field("numerator", &self.coeff.numer().to_string())?;
        st.serialize_field("denominator", &self.coeff.denom().to_string())?;
        st.serialize_field("sqrt_d_exponent", &self.sqrt_exp)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("value", &self.to_f64())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn folding_and_comparison() {
        let a = SurdValue::new(q(1, 2), 3, 3); // (1/2)·3√3
        assert_eq!(a, SurdValue::new(q(3, 2), 1, 3));
        assert!((a.to_f64() - 1.5 * 3f64.sqrt()).abs() < 1e-12);
        let b = SurdValue::from_int(2, 3);
        assert!(a > b); // 2.598 > 2
        assert_eq!(a.mul(&a.inv()), SurdValue::one(3));
        assert_eq!(SurdValue::sqrt_d(3).powi(2), SurdValue::from_int(3, 3));
        assert_eq!(SurdValue::sqrt_d(1), SurdValue::one(1));
    }
}
