//! JSON encodings of polynomials, rational functions and operators.
//!
//! A polynomial is `{"terms":[{"c":"n/d","e":[ex,ey,ek]}]}`; wherever a
//! polynomial is expected, a string such as `"x^2 - 3/2*y"` is accepted too.
//! Rational functions are `{"num":…,"den":…}` and operators
//! `{"kind":"ShiftX"|"DiffX","coeffs":[…]}` indexed by the power of `∂`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::field::{format_rat, parse_rat, Rat};
use crate::ore::{AlgebraKind, OreCoeff, OrePoly};
use crate::poly::{parse_poly, MPoly, Monomial};
use crate::ratfun::RatFun;

#[derive(Serialize, Deserialize)]
struct TermJson {
    c: String,
    e: [u32; 3],
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    terms: Vec<TermJson>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PolyInput {
    Terms(PolyJson),
    Expr(String),
}

impl Serialize for MPoly<Rat> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyJson {
            terms: self.terms().iter().map(|(m, c)| TermJson { c: format_rat(c), e: m.exps() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MPoly<Rat> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match PolyInput::deserialize(d)? {
            PolyInput::Expr(src) => parse_poly(&src).map_err(D::Error::custom),
            PolyInput::Terms(p) => {
                let mut seen = std::collections::HashSet::new();
                let mut terms = Vec::with_capacity(p.terms.len());
                for t in p.terms {
                    let [a, b, k] = t.e;
                    if a > u16::MAX.into() || b > u16::MAX.into() || k > u16::MAX.into() {
                        return Err(D::Error::custom("exponent out of range"));
                    }
                    let m = Monomial::new(a, b, k);
                    if !seen.insert(m) {
                        return Err(D::Error::custom(format!("duplicate exponent {:?}", t.e)));
                    }
                    terms.push((m, parse_rat(&t.c).map_err(D::Error::custom)?));
                }
                Ok(MPoly::from_terms(terms))
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RatFunJson {
    num: MPoly<Rat>,
    den: MPoly<Rat>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RatFunInput {
    Fraction(RatFunJson),
    Poly(MPoly<Rat>),
}

impl Serialize for RatFun<Rat> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RatFunJson { num: self.num().clone(), den: self.den().clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatFun<Rat> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match RatFunInput::deserialize(d)? {
            RatFunInput::Fraction(f) => RatFun::new(f.num, f.den).map_err(D::Error::custom),
            RatFunInput::Poly(p) => Ok(RatFun::from_poly(p)),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "R: Serialize", deserialize = "R: Deserialize<'de>"))]
struct OpJson<R> {
    kind: AlgebraKind,
    coeffs: Vec<R>,
}

impl<R: OreCoeff + Serialize> Serialize for OrePoly<R> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OpJson { kind: self.kind(), coeffs: self.coeffs().to_vec() }.serialize(s)
    }
}

impl<'de, R: OreCoeff + Deserialize<'de>> Deserialize<'de> for OrePoly<R> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let op = OpJson::<R>::deserialize(d)?;
        Ok(OrePoly::new(op.kind, op.coeffs))
    }
}
