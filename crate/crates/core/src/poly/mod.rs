//! Sparse polynomials in the ordered variables `x > y > k`.
//!
//! Terms are kept in descending graded-lexicographic order, so the first term
//! is the leading term. The zero polynomial has no terms and degree
//! [`Degree::NegInf`] in every variable.

mod gcd;
mod parse;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, Rat};
use crate::modp::PrimeField;

pub use parse::parse_poly;
pub(crate) use gcd::heuristic_gcd;
pub(crate) use parse::{parse_expr, Expr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    K,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::K];

    pub fn index(self) -> usize {
        self as usize
    }

    fn offset(self) -> u32 {
        match self {
            Var::X => 32,
            Var::Y => 16,
            Var::K => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::K => "k",
        }
    }
}

const FIELD_MASK: u64 = 0xffff;
const TOTAL_OFFSET: u32 = 48;

/// Exponent vector `(e_x, e_y, e_k)` packed so that integer order equals
/// graded-lex order: total degree in the top 16 bits, then `x`, `y`, `k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn new(ex: u32, ey: u32, ek: u32) -> Self {
        let total = ex + ey + ek;
        assert!(total <= FIELD_MASK as u32, "monomial degree overflow");
        Monomial(
            (u64::from(total) << TOTAL_OFFSET)
                | (u64::from(ex) << Var::X.offset())
                | (u64::from(ey) << Var::Y.offset())
                | u64::from(ek),
        )
    }

    pub fn var(v: Var, e: u32) -> Self {
        let mut exps = [0; 3];
        exps[v.index()] = e;
        Monomial::new(exps[0], exps[1], exps[2])
    }

    #[inline]
    pub fn exp(self, v: Var) -> u32 {
        ((self.0 >> v.offset()) & FIELD_MASK) as u32
    }

    pub fn exps(self) -> [u32; 3] {
        [self.exp(Var::X), self.exp(Var::Y), self.exp(Var::K)]
    }

    pub fn total(self) -> u32 {
        (self.0 >> TOTAL_OFFSET) as u32
    }

    #[inline]
    pub fn mul(self, other: Monomial) -> Monomial {
        debug_assert!(self.total() + other.total() <= FIELD_MASK as u32);
        Monomial(self.0 + other.0)
    }

    pub fn divides(self, other: Monomial) -> bool {
        Var::ALL.iter().all(|&v| self.exp(v) <= other.exp(v))
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn quotient_of(self, other: Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial(other.0 - self.0)
    }

    pub fn with_exp(self, v: Var, e: u32) -> Monomial {
        let mut exps = self.exps();
        exps[v.index()] = e;
        Monomial::new(exps[0], exps[1], exps[2])
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.exps();
        write!(f, "x^{a}*y^{b}*k^{c}")
    }
}

/// Degree with a distinguished `-∞` for the zero polynomial, so that
/// `deg(fg) = deg f + deg g` holds without exceptions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Degree {
    NegInf,
    Fin(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInf => None,
            Degree::Fin(d) => Some(d),
        }
    }

    /// Finite value, with `-∞` mapped to 0.
    pub fn or_zero(self) -> u32 {
        self.finite().unwrap_or(0)
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Fin(a), Degree::Fin(b)) => Degree::Fin(a + b),
            _ => Degree::NegInf,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Fin(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct MPoly<C> {
    terms: Vec<(Monomial, C)>,
}

impl<C: Field> MPoly<C> {
    pub fn zero() -> Self {
        MPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn from_i64(n: i64) -> Self {
        Self::constant(C::from_i64(n))
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Monomial::var(v, 1), C::one())
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MPoly { terms: vec![(m, c)] }
        }
    }

    /// Collects terms in any order, merging duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(terms: I) -> Self {
        let mut acc: HashMap<Monomial, C> = HashMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(e) => *e = e.add_ref(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, C>) -> Self {
        let mut terms: Vec<(Monomial, C)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MPoly { terms }
    }

    /// Terms must already be strictly descending and nonzero.
    fn from_sorted(terms: Vec<(Monomial, C)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        MPoly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, C)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == Monomial::ONE && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| *m == Monomial::ONE)
    }

    pub fn constant_value(&self) -> Option<C> {
        match self.terms.as_slice() {
            [] => Some(C::zero()),
            [(m, c)] if *m == Monomial::ONE => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<&(Monomial, C)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> C {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(C::zero)
    }

    pub fn coeff(&self, m: Monomial) -> C {
        self.terms
            .binary_search_by(|t| m.cmp(&t.0))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| C::zero())
    }

    pub fn deg(&self, v: Var) -> Degree {
        self.terms
            .iter()
            .map(|(m, _)| m.exp(v))
            .max()
            .map_or(Degree::NegInf, Degree::Fin)
    }

    pub fn deg_x(&self) -> Degree {
        self.deg(Var::X)
    }

    pub fn deg_y(&self) -> Degree {
        self.deg(Var::Y)
    }

    pub fn deg_k(&self) -> Degree {
        self.deg(Var::K)
    }

    pub fn total_degree(&self) -> Degree {
        self.terms.first().map_or(Degree::NegInf, |t| Degree::Fin(t.0.total()))
    }

    pub fn is_free_of(&self, v: Var) -> bool {
        self.terms.iter().all(|(m, _)| m.exp(v) == 0)
    }

    pub fn neg(&self) -> Self {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.mul_ref(s))).collect(),
        }
    }

    pub fn mul_term(&self, m: Monomial, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.mul_ref(s))).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { a[i].1.sub_ref(&b[j].1) } else { a[i].1.add_ref(&b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -t.1.clone() } else { t.1.clone() };
            out.push((t.0, c));
        }
        MPoly::from_sorted(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 {
            return other.mul_term(self.terms[0].0, &self.terms[0].1);
        }
        if other.terms.len() == 1 {
            return self.mul_term(other.terms[0].0, &other.terms[0].1);
        }
        if let Some(p) = C::fast_mul(self, other) {
            return p;
        }
        let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(*mb);
                let p = ca.mul_ref(cb);
                match acc.get_mut(&m) {
                    Some(e) => *e = e.add_ref(&p),
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        Self::from_map(acc)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes `v + 1` for `v`.
    pub fn shift(&self, v: Var) -> Self {
        self.shift_by(v, 1)
    }

    /// Substitutes `v + t` for `v`.
    pub fn shift_by(&self, v: Var, t: i64) -> Self {
        if t == 0 || self.is_free_of(v) {
            return self.clone();
        }
        let t = C::from_i64(t);
        let max_e = self.deg(v).or_zero() as usize;
        // powers of t and binomial rows, reused across terms
        let mut tpow = vec![C::one()];
        for i in 1..=max_e {
            tpow.push(tpow[i - 1].mul_ref(&t));
        }
        let mut binom: Vec<Vec<C>> = vec![vec![C::one()]];
        for n in 1..=max_e {
            let prev = &binom[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(C::one());
            for i in 1..n {
                row.push(prev[i - 1].add_ref(&prev[i]));
            }
            row.push(C::one());
            binom.push(row);
        }
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            for i in 0..=e {
                // C(e, i) v^i t^(e-i)
                let coeff = c.mul_ref(&binom[e][i]).mul_ref(&tpow[e - i]);
                out.push((m.with_exp(v, i as u32), coeff));
            }
        }
        Self::from_terms(out)
    }

    /// Formal partial derivative.
    pub fn derivative(&self, v: Var) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(v) > 0)
            .map(|(m, c)| {
                let e = m.exp(v);
                (m.with_exp(v, e - 1), c.mul_ref(&C::from_i64(i64::from(e))))
            })
            .collect::<Vec<_>>();
        // order is preserved per fixed v-exponent drop only up to grlex ties; resort
        Self::from_terms(terms)
    }

    pub fn derivative_x(&self) -> Self {
        self.derivative(Var::X)
    }

    /// `p (p+1) ... (p+m-1)`, with the empty product for `m = 0`.
    pub fn rising_factorial(&self, m: u32) -> Self {
        let mut acc = Self::one();
        for i in 0..m {
            acc = acc.mul(&self.add(&Self::from_i64(i64::from(i))));
        }
        acc
    }

    /// Coefficients with respect to `v`, indexed by the power of `v`; the
    /// coefficients no longer involve `v`.
    pub fn as_univariate(&self, v: Var) -> Vec<Self> {
        let n = match self.deg(v) {
            Degree::NegInf => return Vec::new(),
            Degree::Fin(n) => n as usize,
        };
        let mut parts: Vec<Vec<(Monomial, C)>> = vec![Vec::new(); n + 1];
        for (m, c) in &self.terms {
            parts[m.exp(v) as usize].push((m.with_exp(v, 0), c.clone()));
        }
        parts
            .into_iter()
            .map(|mut ts| {
                ts.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                MPoly::from_sorted(ts)
            })
            .collect()
    }

    /// Replaces `v` by the constant `value`.
    pub fn substitute(&self, v: Var, value: &C) -> Self {
        let n = self.deg(v).or_zero() as usize;
        let mut pows = vec![C::one()];
        for i in 1..=n {
            pows.push(pows[i - 1].mul_ref(value));
        }
        Self::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (m.with_exp(v, 0), c.mul_ref(&pows[m.exp(v) as usize]))),
        )
    }

    pub fn from_univariate(v: Var, coeffs: &[Self]) -> Self {
        let mut terms = Vec::new();
        for (i, c) in coeffs.iter().enumerate() {
            debug_assert!(c.is_free_of(v));
            for (m, a) in &c.terms {
                terms.push((m.with_exp(v, i as u32), a.clone()));
            }
        }
        Self::from_terms(terms)
    }

    /// Exact quotient, failing with [`Error::NotDivisible`] if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if let Some(c) = d.constant_value() {
            return Ok(self.scale(&(C::one() / c)));
        }
        let (dm, dc) = d.terms[0].clone();
        let dinv = C::one() / dc;
        let mut rem: std::collections::BTreeMap<std::cmp::Reverse<Monomial>, C> =
            self.terms.iter().map(|(m, c)| (std::cmp::Reverse(*m), c.clone())).collect();
        let mut quot = Vec::new();
        while let Some((&std::cmp::Reverse(lm), lc)) = rem.iter().next() {
            if !dm.divides(lm) {
                return Err(Error::NotDivisible);
            }
            let qm = dm.quotient_of(lm);
            let qc = lc.mul_ref(&dinv);
            for (m, c) in &d.terms {
                let key = std::cmp::Reverse(m.mul(qm));
                let sub = c.mul_ref(&qc);
                let drop = match rem.get_mut(&key) {
                    Some(e) => {
                        *e = e.sub_ref(&sub);
                        e.is_zero()
                    }
                    None => {
                        rem.insert(key, -sub);
                        false
                    }
                };
                if drop {
                    rem.remove(&key);
                }
            }
            quot.push((qm, qc));
        }
        Ok(MPoly::from_sorted(quot))
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_ok()
    }

    /// `(s, q)` with `self = s·q` and `q` canonical (for rationals: primitive
    /// integer coefficients, positive leading coefficient).
    pub fn split_content(&self) -> (C, Self) {
        if self.is_zero() {
            return (C::one(), Self::zero());
        }
        let s = C::normalizer(self.terms.iter().map(|t| &t.1));
        let q = self.scale(&(C::one() / s.clone()));
        (s, q)
    }

    pub fn normalize(&self) -> Self {
        self.split_content().1
    }

    pub fn map_coeffs<D: Field>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Value at a point of `(Z/pZ)^3`, or `None` if a coefficient has no image.
    pub fn eval_mod(&self, pf: &PrimeField, point: [u64; 3]) -> Option<u64> {
        let p = pf.modulus();
        let mut acc = 0u64;
        // cache powers per variable
        let mut pows: [Vec<u64>; 3] = [vec![1], vec![1], vec![1]];
        for v in Var::ALL {
            let e = self.deg(v).or_zero() as usize;
            let base = point[v.index()];
            for i in 1..=e {
                let prev = pows[v.index()][i - 1];
                pows[v.index()].push(pf.mul(prev, base));
            }
        }
        for (m, c) in &self.terms {
            let r = c.residue(p)?;
            let [a, b, k] = m.exps();
            let mv = pf.mul(pf.mul(pows[0][a as usize], pows[1][b as usize]), pows[2][k as usize]);
            acc = pf.mul_add(acc, r, mv);
        }
        Some(acc)
    }
}

impl MPoly<Rat> {
    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: [&Rat; 3]) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in Var::ALL {
                for _ in 0..m.exp(v) {
                    t *= point[v.index()];
                }
            }
            acc += t;
        }
        acc
    }
}

impl<C: Field> fmt::Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}*{m:?}")?;
        }
        Ok(())
    }
}

impl fmt::Display for MPoly<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use num_traits::Signed;
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            for v in Var::ALL {
                match m.exp(v) {
                    0 => {}
                    1 => factors.push(v.name().to_string()),
                    e => factors.push(format!("{}^{e}", v.name())),
                }
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<'a, C: Field> Add<&'a MPoly<C>> for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn add(self, rhs: &'a MPoly<C>) -> MPoly<C> {
        MPoly::add(self, rhs)
    }
}

impl<'a, C: Field> Sub<&'a MPoly<C>> for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn sub(self, rhs: &'a MPoly<C>) -> MPoly<C> {
        MPoly::sub(self, rhs)
    }
}

impl<'a, C: Field> Mul<&'a MPoly<C>> for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn mul(self, rhs: &'a MPoly<C>) -> MPoly<C> {
        MPoly::mul(self, rhs)
    }
}

/// Product over `Q` computed on integer numerators over a common
/// denominator, which avoids a gcd per coefficient operation.
pub(crate) fn integer_mul(a: &MPoly<Rat>, b: &MPoly<Rat>) -> MPoly<Rat> {
    let den = |p: &MPoly<Rat>| p.terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let (da, db) = (den(a), den(b));
    let ints = |p: &MPoly<Rat>, d: &BigInt| -> Vec<(Monomial, BigInt)> {
        p.terms.iter().map(|(m, c)| (*m, c.numer() * (d / c.denom()))).collect()
    };
    let (ia, ib) = (ints(a, &da), ints(b, &db));
    let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(ia.len() * ib.len() / 2 + 1);
    for (ma, ca) in &ia {
        for (mb, cb) in &ib {
            *acc.entry(ma.mul(*mb)).or_default() += ca * cb;
        }
    }
    let d = da * db;
    let mut terms: Vec<(Monomial, Rat)> =
        acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m, Rat::new(c, d.clone()))).collect();
    terms.sort_unstable_by(|x, y| y.0.cmp(&x.0));
    MPoly::from_sorted(terms)
}
