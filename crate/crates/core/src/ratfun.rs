//! Reduced fractions of polynomials.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, Rat};
use crate::poly::{Degree, MPoly, Var};

/// `num/den` with `gcd(num, den) = 1` and `den` canonical (for rationals:
/// primitive integer coefficients, positive leading coefficient), so equal
/// fractions have identical representations.
#[derive(Clone, PartialEq)]
pub struct RatFun<C> {
    num: MPoly<C>,
    den: MPoly<C>,
}

impl<C: Field> RatFun<C> {
    pub fn new(num: MPoly<C>, den: MPoly<C>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(&den);
        if g.is_one() {
            return Ok(Self::canonical(num, den));
        }
        let n = num.div_exact(&g).expect("gcd divides");
        let d = den.div_exact(&g).expect("gcd divides");
        Ok(Self::canonical(n, d))
    }

    /// Normalizes the scalar of a coprime pair.
    fn canonical(num: MPoly<C>, den: MPoly<C>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (s, den) = den.split_content();
        let num = num.scale(&(C::one() / s));
        RatFun { num, den }
    }

    pub fn from_poly(p: MPoly<C>) -> Self {
        RatFun { num: p, den: MPoly::one() }
    }

    pub fn constant(c: C) -> Self {
        Self::from_poly(MPoly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(MPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(MPoly::one())
    }

    pub fn num(&self) -> &MPoly<C> {
        &self.num
    }

    pub fn den(&self) -> &MPoly<C> {
        &self.den
    }

    pub fn into_parts(self) -> (MPoly<C>, MPoly<C>) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// `deg_v(num) - deg_v(den)`, or `None` for zero.
    pub fn deg(&self, v: Var) -> Option<i64> {
        match (self.num.deg(v), self.den.deg(v)) {
            (Degree::Fin(a), Degree::Fin(b)) => Some(i64::from(a) - i64::from(b)),
            _ => None,
        }
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let rhs_num = if negate { other.num.neg() } else { other.num.clone() };
        if self.is_zero() {
            return RatFun { num: rhs_num, den: other.den.clone() };
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = self.num.add(&rhs_num);
            return Self::new(num, self.den.clone()).expect("nonzero denominator");
        }
        let g = self.den.gcd(&other.den);
        let b = self.den.div_exact(&g).expect("gcd divides");
        let d = other.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d).add(&rhs_num.mul(&b));
        let den = b.mul(&other.den);
        if g.is_one() {
            return Self::canonical(num, den);
        }
        // any common factor of num and den divides g
        let h = num.gcd(&g);
        if h.is_one() {
            return Self::canonical(num, den);
        }
        Self::canonical(num.div_exact(&h).expect("gcd divides"), den.div_exact(&h).expect("gcd divides"))
    }

    fn product(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let a = self.num.div_exact(&g1).expect("gcd divides");
        let d = other.den.div_exact(&g1).expect("gcd divides");
        let c = other.num.div_exact(&g2).expect("gcd divides");
        let b = self.den.div_exact(&g2).expect("gcd divides");
        Self::canonical(a.mul(&c), b.mul(&d))
    }

    pub fn mul_poly(&self, p: &MPoly<C>) -> Self {
        self.product(&Self::from_poly(p.clone()))
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        RatFun { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self.product(&other.inv()?))
    }

    pub fn shift(&self, v: Var) -> Self {
        self.shift_by(v, 1)
    }

    /// Substitutes `v + t` for `v`; shifts are automorphisms, so the result stays reduced.
    pub fn shift_by(&self, v: Var, t: i64) -> Self {
        Self::canonical(self.num.shift_by(v, t), self.den.shift_by(v, t))
    }

    pub fn derivative(&self, v: Var) -> Self {
        // (n/d)' = (n' d - n d') / d^2
        let num = self.num.derivative(v).mul(&self.den).sub(&self.num.mul(&self.den.derivative(v)));
        Self::new(num, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    pub fn derivative_x(&self) -> Self {
        self.derivative(Var::X)
    }
}

impl RatFun<Rat> {
    pub fn eval(&self, point: [&Rat; 3]) -> Option<Rat> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }
}

impl<C: Field> fmt::Debug for RatFun<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

impl fmt::Display for RatFun<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl<C: Field> From<MPoly<C>> for RatFun<C> {
    fn from(p: MPoly<C>) -> Self {
        RatFun::from_poly(p)
    }
}

impl<C: Field> Add for RatFun<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.combine(&rhs, false)
    }
}

impl<C: Field> Sub for RatFun<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.combine(&rhs, true)
    }
}

impl<C: Field> Mul for RatFun<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.product(&rhs)
    }
}

impl<C: Field> Div for RatFun<C> {
    type Output = Self;
    /// Panics on division by zero, like the primitive numeric types.
    fn div(self, rhs: Self) -> Self {
        self.checked_div(&rhs).expect("division by zero rational function")
    }
}

impl<C: Field> Neg for RatFun<C> {
    type Output = Self;
    fn neg(self) -> Self {
        RatFun { num: self.num.neg(), den: self.den }
    }
}

impl<C: Field> Zero for RatFun<C> {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<C: Field> One for RatFun<C> {
    fn one() -> Self {
        RatFun::one()
    }
}

impl<C: Field> Field for RatFun<C> {
    fn add_ref(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.product(other)
    }

    fn div_ref(&self, other: &Self) -> Self {
        self.checked_div(other).expect("division by zero rational function")
    }

    fn from_i64(n: i64) -> Self {
        RatFun::constant(C::from_i64(n))
    }
}
