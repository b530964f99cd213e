//! Linear operators `Σ c_i ∂^i` in the shift algebra (`∂ = S_x`, `σ(x) = x+1`)
//! and the differential algebra (`∂ = D_x`, `δ = d/dx`), subject to
//! `∂·a = σ(a)·∂ + δ(a)`.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Field, Rat};
use crate::linalg::Matrix;
use crate::poly::{parse_expr, Expr, MPoly, Monomial, Var};
use crate::ratfun::RatFun;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum AlgebraKind {
    ShiftX,
    DiffX,
}

impl AlgebraKind {
    /// Name of the generator in printed operators.
    pub fn symbol(self) -> char {
        match self {
            AlgebraKind::ShiftX => 'S',
            AlgebraKind::DiffX => 'D',
        }
    }
}

/// Coefficient domain of an operator: a commutative ring on which `σ` and
/// `δ` act. Elements of `C[y]` are constants for both algebras.
pub trait OreCoeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `σ^n(self)`.
    fn sigma_pow(&self, kind: AlgebraKind, n: i64) -> Self;
    fn delta(&self, kind: AlgebraKind) -> Self;
}

/// Coefficient domains that are fields, where right division is defined.
pub trait OreField: OreCoeff {
    fn inv(&self) -> Self;
}

impl<C: Field> OreCoeff for MPoly<C> {
    fn zero() -> Self {
        MPoly::zero()
    }
    fn one() -> Self {
        MPoly::one()
    }
    fn is_zero(&self) -> bool {
        MPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        MPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        MPoly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        MPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        MPoly::neg(self)
    }
    fn sigma_pow(&self, kind: AlgebraKind, n: i64) -> Self {
        match kind {
            AlgebraKind::ShiftX => self.shift_by(Var::X, n),
            AlgebraKind::DiffX => self.clone(),
        }
    }
    fn delta(&self, kind: AlgebraKind) -> Self {
        match kind {
            AlgebraKind::ShiftX => MPoly::zero(),
            AlgebraKind::DiffX => self.derivative_x(),
        }
    }
}

impl<C: Field> OreCoeff for RatFun<C> {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn one() -> Self {
        RatFun::one()
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self.add_ref(other)
    }
    fn sub(&self, other: &Self) -> Self {
        self.sub_ref(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn sigma_pow(&self, kind: AlgebraKind, n: i64) -> Self {
        match kind {
            AlgebraKind::ShiftX => self.shift_by(Var::X, n),
            AlgebraKind::DiffX => self.clone(),
        }
    }
    fn delta(&self, kind: AlgebraKind) -> Self {
        match kind {
            AlgebraKind::ShiftX => RatFun::zero(),
            AlgebraKind::DiffX => self.derivative_x(),
        }
    }
}

impl<C: Field> OreField for RatFun<C> {
    fn inv(&self) -> Self {
        RatFun::inv(self).expect("inverse of zero")
    }
}

/// Order, degree and height bounds `(r, d, h)` of an operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct Shape {
    pub r: u32,
    pub d: u32,
    pub h: u32,
}

impl Shape {
    pub fn new(r: u32, d: u32, h: u32) -> Self {
        Shape { r, d, h }
    }

    /// Componentwise `≤`.
    pub fn fits_in(&self, other: &Shape) -> bool {
        self.r <= other.r && self.d <= other.d && self.h <= other.h
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.d, self.h)
    }
}

/// Operator with dense coefficient vector indexed by the power of `∂`; the
/// last coefficient is nonzero unless the operator is zero (empty vector).
#[derive(Clone, PartialEq)]
pub struct OrePoly<R> {
    kind: AlgebraKind,
    coeffs: Vec<R>,
}

impl<R: OreCoeff> OrePoly<R> {
    pub fn new(kind: AlgebraKind, mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        OrePoly { kind, coeffs }
    }

    pub fn zero(kind: AlgebraKind) -> Self {
        OrePoly { kind, coeffs: Vec::new() }
    }

    pub fn one(kind: AlgebraKind) -> Self {
        Self::constant(kind, R::one())
    }

    /// The generator `∂`.
    pub fn gen(kind: AlgebraKind) -> Self {
        Self::monomial(kind, R::one(), 1)
    }

    pub fn constant(kind: AlgebraKind, c: R) -> Self {
        Self::new(kind, vec![c])
    }

    /// `c·∂^i`.
    pub fn monomial(kind: AlgebraKind, c: R, i: usize) -> Self {
        let mut coeffs = vec![R::zero(); i + 1];
        coeffs[i] = c;
        Self::new(kind, coeffs)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `deg_∂`, or `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Leading coefficient with respect to `∂`.
    pub fn lc(&self) -> Option<&R> {
        self.coeffs.last()
    }

    fn same_kind(&self, other: &Self) -> Result<()> {
        if self.kind == other.kind {
            Ok(())
        } else {
            Err(Error::MixedKinds)
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        assert_eq!(self.kind, other.kind, "operators of different kinds");
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = R::zero();
        let coeffs = (0..n)
            .map(|i| f(self.coeffs.get(i).unwrap_or(&zero), other.coeffs.get(i).unwrap_or(&zero)))
            .collect();
        Self::new(self.kind, coeffs)
    }

    /// # Panics
    /// If the operators belong to different algebras.
    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, R::add)
    }

    /// # Panics
    /// If the operators belong to different algebras.
    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, R::sub)
    }

    pub fn neg(&self) -> Self {
        OrePoly {
            kind: self.kind,
            coeffs: self.coeffs.iter().map(R::neg).collect(),
        }
    }

    /// `c·self`; coefficients commute with each other, so this is coefficientwise.
    pub fn scale_left(&self, c: &R) -> Self {
        Self::new(self.kind, self.coeffs.iter().map(|a| c.mul(a)).collect())
    }

    /// `∂^n·self`.
    pub fn gen_pow_times(&self, n: usize) -> Self {
        if n == 0 || self.is_zero() {
            return self.clone();
        }
        match self.kind {
            AlgebraKind::ShiftX => {
                let mut coeffs = vec![R::zero(); n];
                coeffs.extend(self.coeffs.iter().map(|c| c.sigma_pow(self.kind, n as i64)));
                Self::new(self.kind, coeffs)
            }
            AlgebraKind::DiffX => {
                let mut acc = self.clone();
                for _ in 0..n {
                    acc = acc.gen_times();
                }
                acc
            }
        }
    }

    /// `∂·self = Σ σ(c_i)∂^{i+1} + δ(c_i)∂^i`.
    pub fn gen_times(&self) -> Self {
        let k = self.kind;
        let mut coeffs = vec![R::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i + 1] = coeffs[i + 1].add(&c.sigma_pow(k, 1));
            let d = c.delta(k);
            if !d.is_zero() {
                coeffs[i] = coeffs[i].add(&d);
            }
        }
        Self::new(k, coeffs)
    }

    /// Product in the Ore algebra.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_kind(other)?;
        let mut acc = Self::zero(self.kind);
        let mut power = other.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = power.gen_times();
            }
            if !a.is_zero() {
                acc = acc.add(&power.scale_left(a));
            }
        }
        Ok(acc)
    }

    pub fn map<S: OreCoeff>(&self, f: impl Fn(&R) -> S) -> OrePoly<S> {
        OrePoly::new(self.kind, self.coeffs.iter().map(f).collect())
    }
}

impl<R: OreField> OrePoly<R> {
    /// `(Q, R)` with `self = Q·b + R` and `ord R < ord b`.
    pub fn right_divrem(&self, b: &Self) -> Result<(Self, Self)> {
        self.same_kind(b)?;
        let m = b.order().ok_or(Error::DivisionByZero)?;
        let k = self.kind;
        let mut rem = self.clone();
        let Some(n) = rem.order().filter(|&n| n >= m) else {
            return Ok((Self::zero(k), rem));
        };
        // ∂^t·b for t = 0..=n-m
        let mut shifted = vec![b.clone()];
        for t in 1..=n - m {
            let next = shifted[t - 1].gen_times();
            shifted.push(next);
        }
        let mut q = vec![R::zero(); n - m + 1];
        while let Some(deg) = rem.order().filter(|&d| d >= m) {
            let t = deg - m;
            let lead = shifted[t].lc().expect("nonzero");
            let c = rem.lc().expect("nonzero").mul(&lead.inv());
            rem = rem.sub(&shifted[t].scale_left(&c));
            debug_assert!(rem.order().map_or(true, |o| o < deg));
            q[t] = c;
        }
        Ok((Self::new(k, q), rem))
    }

    /// Scales the leading coefficient to 1.
    pub fn monic(&self) -> Self {
        match self.lc() {
            None => self.clone(),
            Some(l) => self.scale_left(&l.inv()),
        }
    }

    /// Remainders of `∂^0, …, ∂^n` modulo `g` on the right, as coefficient
    /// vectors of length `ord g`.
    pub fn gen_power_remainders(g: &Self, n: usize) -> Result<Vec<Vec<R>>> {
        let m = g.order().ok_or(Error::DivisionByZero)?;
        let k = g.kind;
        let lc_inv = g.lc().expect("nonzero").inv();
        let tail: Vec<R> = g.coeffs[..m].iter().map(|c| c.mul(&lc_inv)).collect();
        let mut out = Vec::with_capacity(n + 1);
        let mut cur = vec![R::zero(); m];
        if m > 0 {
            cur[0] = R::one();
        }
        out.push(cur.clone());
        for _ in 0..n {
            // ∂·Σ r_j ∂^j, then eliminate ∂^m with the monic generator
            let mut next = vec![R::zero(); m + 1];
            for (j, r) in cur.iter().enumerate() {
                if r.is_zero() {
                    continue;
                }
                next[j + 1] = next[j + 1].add(&r.sigma_pow(k, 1));
                let d = r.delta(k);
                if !d.is_zero() {
                    next[j] = next[j].add(&d);
                }
            }
            let top = next.pop().expect("length m+1");
            if !top.is_zero() {
                for (j, t) in tail.iter().enumerate() {
                    next[j] = next[j].sub(&top.mul(t));
                }
            }
            cur = next;
            out.push(cur.clone());
        }
        Ok(out)
    }
}

impl<C: Field> OrePoly<RatFun<C>> {
    /// Monic least common left multiple: the nonzero operator of minimal order
    /// that every input divides on the right.
    ///
    /// Found by an ansatz `Σ q_i ∂^i` whose remainders modulo every input
    /// vanish, for increasing candidate order.
    pub fn lclm(ops: &[Self]) -> Result<Self> {
        let first = ops.first().ok_or(Error::Empty("lclm of an empty list"))?;
        let kind = first.kind;
        if ops.iter().any(|o| o.kind != kind) {
            return Err(Error::MixedKinds);
        }
        if ops.iter().any(OrePoly::is_zero) {
            return Err(Error::ZeroOperator);
        }
        let lo = ops.iter().map(|o| o.order().expect("nonzero")).max().expect("nonempty");
        let hi: usize = ops.iter().map(|o| o.order().expect("nonzero")).sum();
        let rems: Vec<Vec<Vec<RatFun<C>>>> = ops
            .iter()
            .map(|g| Self::gen_power_remainders(g, hi))
            .collect::<Result<_>>()?;
        for n in lo..=hi {
            let rows: Vec<Vec<RatFun<C>>> = rems
                .iter()
                .flat_map(|rem| {
                    let m = rem[0].len();
                    (0..m).map(move |j| (0..=n).map(|i| rem[i][j].clone()).collect::<Vec<_>>())
                })
                .collect();
            let kernel = Matrix::from_rows(n + 1, rows).nullspace();
            if let Some(v) = kernel.into_iter().next() {
                return Ok(Self::new(kind, v).monic());
            }
        }
        unreachable!("the product-order bound always admits a common multiple")
    }
}

impl<C: Field> OrePoly<MPoly<C>> {
    pub fn to_ratfun(&self) -> OrePoly<RatFun<C>> {
        self.map(|c| RatFun::from_poly(c.clone()))
    }

    /// `(r, d, h)` of a nonzero operator.
    pub fn shape(&self) -> Result<Shape> {
        let r = self.order().ok_or(Error::ZeroOperator)?;
        let d = self.coeffs.iter().map(|c| c.deg_x().or_zero()).max().unwrap_or(0);
        let h = self.coeffs.iter().map(|c| c.deg_y().or_zero()).max().unwrap_or(0);
        Ok(Shape::new(r as u32, d, h))
    }

    pub fn deg(&self, v: Var) -> crate::poly::Degree {
        self.coeffs.iter().map(|c| c.deg(v)).max().unwrap_or(crate::poly::Degree::NegInf)
    }

    /// Divides out the gcd of all coefficients and normalizes the scalar so
    /// that the leading coefficient is canonical.
    pub fn primitive(&self) -> Self {
        let g = self.coeffs.iter().fold(MPoly::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return self.clone();
        }
        let reduced: Vec<MPoly<C>> = self.coeffs.iter().map(|c| c.div_exact(&g).expect("gcd divides")).collect();
        let (s, _) = reduced.last().expect("nonzero").split_content();
        let inv = C::one() / s;
        Self::new(self.kind, reduced.iter().map(|c| c.scale(&inv)).collect())
    }

    /// Whether `self` lies in the left ideal generated by `g` over the
    /// rational functions, decided by a fraction-free right pseudo-remainder.
    pub fn is_right_divisible_by(&self, g: &Self) -> Result<bool> {
        Ok(self.right_pseudo_rem(g)?.is_zero())
    }

    /// `R` with `a·self = Q·g + R`, `ord R < ord g`, for some nonzero polynomial `a`.
    pub fn right_pseudo_rem(&self, g: &Self) -> Result<Self> {
        self.same_kind(g)?;
        let m = g.order().ok_or(Error::DivisionByZero)?;
        let mut rem = self.clone();
        while let Some(n) = rem.order().filter(|&n| n >= m) {
            let sg = g.gen_pow_times(n - m);
            let lg = sg.lc().expect("nonzero").clone();
            let lr = rem.lc().expect("nonzero").clone();
            let common = lg.gcd(&lr);
            let a = lg.div_exact(&common).expect("gcd divides");
            let b = lr.div_exact(&common).expect("gcd divides");
            rem = rem.scale_left(&a).sub(&sg.scale_left(&b)).primitive();
        }
        Ok(rem)
    }
}

impl<C: Field> OrePoly<RatFun<C>> {
    /// Multiplies on the left by the lcm of the coefficient denominators and
    /// returns the primitive polynomial operator.
    pub fn clear_denominators(&self) -> OrePoly<MPoly<C>> {
        let mut l = MPoly::one();
        for c in &self.coeffs {
            let g = l.gcd(c.den());
            l = l.mul(&c.den().div_exact(&g).expect("gcd divides"));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.num().mul(&l.div_exact(c.den()).expect("lcm is a multiple")))
            .collect();
        OrePoly::new(self.kind, coeffs).primitive()
    }
}

impl OrePoly<MPoly<Rat>> {
    /// Random operator of exactly the given order whose coefficients have
    /// degree `≤ d` in `x` and `≤ h` in `y`, with dense integer coefficients
    /// in `[-bound, bound]`.
    pub fn random<G: Rng>(kind: AlgebraKind, shape: Shape, bound: i64, rng: &mut G) -> Self {
        loop {
            let coeffs: Vec<MPoly<Rat>> = (0..=shape.r)
                .map(|_| {
                    MPoly::from_terms((0..=shape.d).flat_map(|a| (0..=shape.h).map(move |b| (a, b))).map(|(a, b)| {
                        (Monomial::new(a, b, 0), Rat::from_integer(rng.gen_range(-bound..=bound).into()))
                    }))
                })
                .collect();
            let op = Self::new(kind, coeffs);
            if op.order() == Some(shape.r as usize) && op.shape().is_ok_and(|s| s == shape) {
                return op;
            }
        }
    }
}

/// Parses an operator such as `(x+1)*S^2 - y*S + 1`; the generator is `S`
/// for the shift algebra and `D` for the differential algebra.
///
/// Products are taken in the Ore algebra, so `S*x` is `(x+1)*S`.
pub fn parse_operator(kind: AlgebraKind, src: &str) -> Result<OrePoly<MPoly<Rat>>> {
    fn eval(kind: AlgebraKind, e: &Expr) -> Result<OrePoly<MPoly<Rat>>> {
        Ok(match e {
            Expr::Num(q) => OrePoly::constant(kind, MPoly::constant(q.clone())),
            Expr::Var(v) => OrePoly::constant(kind, MPoly::var(*v)),
            Expr::Op => OrePoly::gen(kind),
            Expr::Neg(a) => eval(kind, a)?.neg(),
            Expr::Add(a, b) => eval(kind, a)?.add(&eval(kind, b)?),
            Expr::Sub(a, b) => eval(kind, a)?.sub(&eval(kind, b)?),
            Expr::Mul(a, b) => eval(kind, a)?.mul(&eval(kind, b)?)?,
            Expr::Pow(a, n) => {
                let base = eval(kind, a)?;
                let mut acc = OrePoly::one(kind);
                for _ in 0..*n {
                    acc = acc.mul(&base)?;
                }
                acc
            }
        })
    }
    eval(kind, &parse_expr(src, Some(kind.symbol()))?)
}

impl<R: OreCoeff> fmt::Debug for OrePoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.kind, self.coeffs)
    }
}

impl fmt::Display for OrePoly<MPoly<Rat>> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let sym = self.kind.symbol();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*{sym}")?,
                _ => write!(f, "({c})*{sym}^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::{PolyOp, RatOp};
    use proptest::strategy::Strategy;

    fn op(kind: AlgebraKind, s: &str) -> PolyOp {
        parse_operator(kind, s).unwrap()
    }

    use AlgebraKind::{DiffX, ShiftX};

    #[test]
    fn commutation_rules() {
        assert_eq!(op(ShiftX, "S*x"), op(ShiftX, "(x+1)*S"));
        assert_eq!(op(DiffX, "D*x"), op(DiffX, "x*D + 1"));
        let b = op(DiffX, "x^2*D^2 + y*D - k");
        assert_eq!(PolyOp::one(DiffX).mul(&b).unwrap(), b);
        assert_eq!(op(ShiftX, "S*y"), op(ShiftX, "y*S"));
        assert!(matches!(op(ShiftX, "S").mul(&op(DiffX, "D")), Err(Error::MixedKinds)));
    }

    #[test]
    fn division_examples() {
        let b = op(ShiftX, "S - 1").to_ratfun();
        let (q, r) = b.right_divrem(&b).unwrap();
        assert_eq!((q, r), (RatOp::one(ShiftX), RatOp::zero(ShiftX)));
        let (q, r) = op(DiffX, "D^2").to_ratfun().right_divrem(&op(DiffX, "D").to_ratfun()).unwrap();
        assert_eq!((q, r), (op(DiffX, "D").to_ratfun(), RatOp::zero(DiffX)));
        let a = op(ShiftX, "S^2").to_ratfun();
        let (q, r) = a.right_divrem(&b).unwrap();
        assert_eq!(q, op(ShiftX, "S + 1").to_ratfun());
        assert_eq!(r, RatOp::one(ShiftX));
        assert_eq!(q.mul(&b).unwrap().add(&r), a);
        assert!(matches!(a.right_divrem(&RatOp::zero(ShiftX)), Err(Error::DivisionByZero)));
    }

    #[test]
    fn shapes() {
        assert_eq!(op(DiffX, "D").shape().unwrap(), Shape::new(1, 0, 0));
        assert_eq!(op(DiffX, "y^3*x^2").shape().unwrap(), Shape::new(0, 2, 3));
        assert!(matches!(PolyOp::zero(DiffX).shape(), Err(Error::ZeroOperator)));
    }

    #[test]
    fn lclm_examples() {
        let d = op(DiffX, "D").to_ratfun();
        assert_eq!(RatOp::lclm(&[d.clone(), d.clone()]).unwrap(), d);
        let b = op(ShiftX, "(x+y)*S - x").to_ratfun();
        assert_eq!(RatOp::lclm(std::slice::from_ref(&b)).unwrap(), b.monic());
        assert!(matches!(RatOp::lclm(&[]), Err(Error::Empty(_))));
        // D - 1 and D - 2 annihilate e^x and e^{2x}
        let l = RatOp::lclm(&[op(DiffX, "D - 1").to_ratfun(), op(DiffX, "D - 2").to_ratfun()]).unwrap();
        assert_eq!(l, op(DiffX, "D^2 - 3*D + 2").to_ratfun());
    }

    #[test]
    fn pseudo_remainder_decides_membership() {
        let g = op(ShiftX, "(x+y)*S - x");
        let m = op(ShiftX, "x*S^2 + y - 1").mul(&g).unwrap();
        assert!(m.is_right_divisible_by(&g).unwrap());
        assert!(!m.add(&PolyOp::one(ShiftX)).is_right_divisible_by(&g).unwrap());
    }

    #[test]
    fn display_round_trip() {
        let a = op(ShiftX, "(2*x + y^2)*S^2 - 3*S + x*y");
        assert_eq!(a.to_string(), "(y^2 + 2*x)*S^2 + (-3)*S + (x*y)");
        assert_eq!(op(ShiftX, &a.to_string()), a);
        let c = parse_poly("x").unwrap();
        assert_eq!(PolyOp::constant(ShiftX, c).order(), Some(0));
    }

    fn arb_op(kind: AlgebraKind) -> impl proptest::strategy::Strategy<Value = PolyOp> {
        use proptest::prelude::*;
        prop::collection::vec(crate::poly::tests::arb_poly_xy(2, 3), 1..=4)
            .prop_map(move |cs| PolyOp::new(kind, cs))
    }

    fn kinds() -> impl proptest::strategy::Strategy<Value = AlgebraKind> {
        proptest::prop_oneof![proptest::strategy::Just(ShiftX), proptest::strategy::Just(DiffX)]
    }

    proptest::proptest! {
        #[test]
        fn multiplication_is_associative((a, b, c) in kinds().prop_flat_map(|k| (arb_op(k), arb_op(k), arb_op(k)))) {
            use proptest::prelude::*;
            let lhs = a.mul(&b).unwrap().mul(&c).unwrap();
            let rhs = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn degree_bookkeeping((a, b) in kinds().prop_flat_map(|k| (arb_op(k), arb_op(k)))) {
            use proptest::prelude::*;
            prop_assume!(!a.is_zero() && !b.is_zero());
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.order().unwrap(), a.order().unwrap() + b.order().unwrap());
            let (sa, sb, sab) = (a.shape().unwrap(), b.shape().unwrap(), ab.shape().unwrap());
            prop_assert!(sab.d <= sa.d + sb.d);
            prop_assert_eq!(sab.h, sa.h + sb.h);
        }

        #[test]
        fn y_polynomials_commute_with_the_generator(k in kinds(), a in arb_op(ShiftX), c in crate::poly::tests::arb_poly_y(3, 3)) {
            use proptest::prelude::*;
            let a = a.map(|p| p.clone());
            let a = PolyOp::new(k, a.into_coeffs());
            let cy = PolyOp::constant(k, c);
            prop_assert_eq!(a.mul(&cy).unwrap(), cy.mul(&a).unwrap());
        }

        #[test]
        fn division_reassembles((a, b) in kinds().prop_flat_map(|k| (arb_op(k), arb_op(k)))) {
            use proptest::prelude::*;
            prop_assume!(!b.is_zero());
            let (a, b) = (a.to_ratfun(), b.to_ratfun());
            let (q, r) = a.right_divrem(&b).unwrap();
            prop_assert!(r.order().map_or(true, |o| o < b.order().unwrap()));
            prop_assert_eq!(q.mul(&b).unwrap().add(&r), a);
        }
    }
}
