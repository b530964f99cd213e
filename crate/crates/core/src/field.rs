//! Scalar fields used as polynomial coefficients and as linear-algebra entries.
//!
//! Everything above this module is written against [`Field`], which is a thin
//! layer over the `num-traits` arithmetic traits. The rationals ([`Rat`]) are
//! the coefficient field used throughout; rational functions implement the same
//! trait so that linear systems over `C(x,y)` reuse the generic elimination.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::MPoly;

/// Arbitrary-precision rational number.
pub type Rat = BigRational;

/// A commutative field with exact equality.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    fn div_ref(&self, other: &Self) -> Self {
        self.clone() / other.clone()
    }

    fn from_i64(n: i64) -> Self {
        // double-and-add from the bits of |n|
        let mut acc = Self::zero();
        let mut bit = Self::one();
        let mut m = n.unsigned_abs();
        while m > 0 {
            if m & 1 == 1 {
                acc = acc + bit.clone();
            }
            bit = bit.clone() + bit;
            m >>= 1;
        }
        if n < 0 {
            -acc
        } else {
            acc
        }
    }

    /// The scalar a coefficient list (leading coefficient first) is divided by
    /// to obtain its canonical representative.
    ///
    /// Defaults to the leading coefficient, i.e. monic normalization.
    fn normalizer<'a, I>(mut coeffs: I) -> Self
    where
        I: Iterator<Item = &'a Self>,
        Self: 'a,
    {
        coeffs.next().cloned().unwrap_or_else(Self::one)
    }

    /// Image in `Z/pZ`, if the element has one.
    fn residue(&self, _p: u64) -> Option<u64> {
        None
    }

    /// A gcd algorithm specific to the coefficient field; `None` falls back
    /// to the generic pseudo-remainder sequence.
    fn fast_gcd(_a: &MPoly<Self>, _b: &MPoly<Self>) -> Option<MPoly<Self>> {
        None
    }

    /// A polynomial product specific to the coefficient field.
    fn fast_mul(_a: &MPoly<Self>, _b: &MPoly<Self>) -> Option<MPoly<Self>> {
        None
    }
}

impl Field for Rat {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn div_ref(&self, other: &Self) -> Self {
        self / other
    }

    fn from_i64(n: i64) -> Self {
        rat(n)
    }

    /// Signed content: dividing by it leaves integer coefficients with gcd 1
    /// and a positive leading coefficient.
    fn normalizer<'a, I>(coeffs: I) -> Self
    where
        I: Iterator<Item = &'a Self>,
    {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        let mut lead_negative = None;
        for c in coeffs {
            if lead_negative.is_none() {
                lead_negative = Some(c.is_negative());
            }
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return Rat::one();
        }
        let content = Rat::new(num_gcd, den_lcm);
        if lead_negative == Some(true) {
            -content
        } else {
            content
        }
    }

    fn residue(&self, p: u64) -> Option<u64> {
        crate::modp::rat_residue(self, p)
    }

    fn fast_gcd(a: &MPoly<Self>, b: &MPoly<Self>) -> Option<MPoly<Self>> {
        crate::poly::heuristic_gcd(a, b)
    }

    fn fast_mul(a: &MPoly<Self>, b: &MPoly<Self>) -> Option<MPoly<Self>> {
        Some(crate::poly::integer_mul(a, b))
    }
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Renders `n` or `n/d`.
pub fn format_rat(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses the canonical `n` / `n/d` encoding. Zero, negative and non-reduced
/// denominators are rejected.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    match s.split_once('/') {
        None => Ok(Rat::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in '{s}'")));
            }
            if d.is_negative() || !n.gcd(&d).is_one() {
                return Err(Error::Parse(format!("unreduced rational '{s}'")));
            }
            Ok(Rat::new_raw(n, d))
        }
    }
}
