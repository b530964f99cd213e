//! Multivariate gcd by recursive primitive pseudo-remainder sequences.
//!
//! A modular image of the gcd degree is computed first; when it is zero the
//! inputs are certified coprime and the PRS is skipped.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{MPoly, Monomial, Var};
use crate::field::{Field, Rat};
use crate::modp::PrimeField;

const CHECK_PRIME: u64 = 2_147_483_629;

/// Evaluation points larger than this many bits abandon the heuristic.
const HEURISTIC_BITS: u64 = 1 << 20;

impl<C: Field> MPoly<C> {
    /// Canonical greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalize();
        }
        if other.is_zero() {
            return self.normalize();
        }
        if self.is_constant() || other.is_constant() {
            return Self::one();
        }
        if let Some(g) = C::fast_gcd(self, other) {
            return g.normalize();
        }
        let v = match Var::ALL.into_iter().find(|&v| !self.is_free_of(v) || !other.is_free_of(v)) {
            Some(v) => v,
            None => return Self::one(),
        };
        if self.is_free_of(v) {
            return self.gcd(&other.content_in(v));
        }
        if other.is_free_of(v) {
            return self.content_in(v).gcd(other);
        }
        let ca = self.content_in(v);
        let cb = other.content_in(v);
        let c = ca.gcd(&cb);
        let pa = self.div_exact(&ca).expect("content divides");
        let pb = other.div_exact(&cb).expect("content divides");
        c.mul(&primitive_gcd(&pa, &pb, v)).normalize()
    }

    /// Gcd of the coefficients with respect to `v`.
    pub fn content_in(&self, v: Var) -> Self {
        let mut acc = Self::zero();
        for c in self.as_univariate(v).into_iter().rev().filter(|c| !c.is_zero()) {
            acc = acc.gcd(&c);
            if acc.is_constant() {
                return Self::one();
            }
        }
        acc
    }

    pub fn primitive_part_in(&self, v: Var) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.div_exact(&self.content_in(v)).expect("content divides").normalize()
    }

    /// `lc_v(g)^e · f mod g` as univariate polynomials in `v`.
    pub fn pseudo_rem(&self, g: &Self, v: Var) -> Self {
        let gu = g.as_univariate(v);
        let mut fu = self.as_univariate(v);
        let dg = gu.len() - 1;
        let lg = gu[dg].clone();
        while fu.len() > dg {
            let lf = fu.pop().expect("nonempty");
            let shift = fu.len() - dg;
            for c in fu.iter_mut() {
                *c = c.mul(&lg);
            }
            for (i, gc) in gu[..dg].iter().enumerate() {
                fu[i + shift] = fu[i + shift].sub(&gc.mul(&lf));
            }
            while fu.last().is_some_and(|c| c.is_zero()) {
                fu.pop();
            }
        }
        Self::from_univariate(v, &fu)
    }
}

fn primitive_gcd<C: Field>(a: &MPoly<C>, b: &MPoly<C>, v: Var) -> MPoly<C> {
    if let Some(d) = modular_gcd_degree(a, b, v) {
        if d == 0 {
            return MPoly::one();
        }
        for (small, big) in [(a, b), (b, a)] {
            if small.deg(v).or_zero() == d && small.divides(big) {
                return small.normalize();
            }
        }
    }
    let (mut f, mut g) = if a.deg(v) >= b.deg(v) { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    loop {
        let r = f.pseudo_rem(&g, v);
        if r.is_zero() {
            return g.primitive_part_in(v);
        }
        if r.is_free_of(v) {
            return MPoly::one();
        }
        f = g;
        g = r.primitive_part_in(v);
    }
}

/// Degree in `v` of the gcd of the images of `a`, `b` after reducing mod a
/// prime and specializing the other variables. This bounds the true degree
/// from above whenever the leading coefficients survive.
fn modular_gcd_degree<C: Field>(a: &MPoly<C>, b: &MPoly<C>, v: Var) -> Option<u32> {
    let pf = PrimeField::new(CHECK_PRIME);
    let point = [1_234_577u64, 7_654_337, 3_141_593];
    let ia = univariate_image(a, v, &pf, point)?;
    let ib = univariate_image(b, v, &pf, point)?;
    if ia.len() as u32 != a.deg(v).or_zero() + 1 || ib.len() as u32 != b.deg(v).or_zero() + 1 {
        return None;
    }
    Some(univariate_gcd_degree(ia, ib, &pf))
}

fn univariate_image<C: Field>(f: &MPoly<C>, v: Var, pf: &PrimeField, point: [u64; 3]) -> Option<Vec<u64>> {
    let mut out = vec![0u64; f.deg(v).or_zero() as usize + 1];
    for (m, c) in f.terms() {
        let mut t = c.residue(pf.modulus())?;
        for w in Var::ALL.into_iter().filter(|&w| w != v) {
            t = pf.mul(t, pf.pow(point[w.index()], u64::from(m.exp(w))));
        }
        let slot = &mut out[m.exp(v) as usize];
        *slot = pf.add(*slot, t);
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    Some(out)
}

fn univariate_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>, pf: &PrimeField) -> u32 {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let inv = pf.inv(*b.last().expect("nonempty"));
        while a.len() >= b.len() {
            let q = pf.mul(*a.last().expect("nonempty"), inv);
            let shift = a.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                a[i + shift] = pf.sub(a[i + shift], pf.mul(q, bc));
            }
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1) as u32
}

/// Heuristic gcd over `Q`: evaluates one variable at a large integer,
/// recurses, and lifts the integer gcd back by `ξ`-adic expansion. A result
/// is returned only after it divides both inputs, which makes it the gcd.
pub fn heuristic_gcd(a: &MPoly<Rat>, b: &MPoly<Rat>) -> Option<MPoly<Rat>> {
    heuristic_int_gcd(&a.normalize(), &b.normalize())
}

fn int_content(f: &MPoly<Rat>) -> BigInt {
    f.terms().iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c.numer()))
}

fn max_norm(f: &MPoly<Rat>) -> BigInt {
    f.terms().iter().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

/// Gcd in `Z[x, y, k]` of polynomials with integer coefficients.
fn heuristic_int_gcd(a: &MPoly<Rat>, b: &MPoly<Rat>) -> Option<MPoly<Rat>> {
    if a.is_zero() {
        return Some(b.clone());
    }
    if b.is_zero() {
        return Some(a.clone());
    }
    let content = int_content(a).gcd(&int_content(b));
    let Some(v) = Var::ALL.into_iter().find(|&v| !a.is_free_of(v) || !b.is_free_of(v)) else {
        return Some(MPoly::constant(Rat::from_integer(content)));
    };
    let scale = |f: &MPoly<Rat>, s: &BigInt| f.scale(&Rat::from_integer(s.clone()));
    let inv = |s: BigInt| Rat::new(BigInt::one(), s);
    let a = a.scale(&inv(int_content(a)));
    let b = b.scale(&inv(int_content(b)));
    let deg = u64::from(a.deg(v).or_zero().max(b.deg(v).or_zero())) + 1;
    let mut xi = max_norm(&a).min(max_norm(&b)) * 2u32 + 29u32;
    for _ in 0..6 {
        if xi.bits() * deg > HEURISTIC_BITS {
            return None;
        }
        let at = Rat::from_integer(xi.clone());
        let gamma = heuristic_int_gcd(&a.substitute(v, &at), &b.substitute(v, &at))?;
        let cand = xi_adic_lift(gamma, &xi, v);
        if !cand.is_zero() {
            let cand = cand.scale(&inv(int_content(&cand)));
            if cand.divides(&a) && cand.divides(&b) {
                return Some(scale(&cand, &content));
            }
        }
        xi = xi * 73_794u32 / 27_011u32;
    }
    None
}

/// Reads the integer coefficients of `gamma` as base-`ξ` digits (symmetric
/// range) of the coefficients of a polynomial in `v`.
fn xi_adic_lift(mut gamma: MPoly<Rat>, xi: &BigInt, v: Var) -> MPoly<Rat> {
    let half = xi >> 1u32;
    let mut out = MPoly::zero();
    let mut e = 0;
    while !gamma.is_zero() {
        let digit = MPoly::from_terms(gamma.terms().iter().map(|(m, c)| {
            let mut r = c.numer().mod_floor(xi);
            if r > half {
                r -= xi;
            }
            (*m, Rat::from_integer(r))
        }));
        out = out.add(&digit.mul_term(Monomial::var(v, e), &Rat::one()));
        gamma = gamma.sub(&digit).scale(&Rat::new(BigInt::one(), xi.clone()));
        e += 1;
    }
    out
}
