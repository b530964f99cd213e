//! Proper hypergeometric terms, the Gosper-style telescoper ansatz, and the
//! rational case via a given Le decomposition.
//!
//! A proper term is
//! `H = p·α^x·β^k·Π Γ(A_m)Γ(B_m) / (Γ(U_m)Γ(V_m))` with
//! `A = ax + a'k + a''`, `B = bx − b'k + b''`, `U = ux + u'k + u''`,
//! `V = vx − v'k + v''`. The term must not be of the form `f·H₀` with `f`
//! rational and `S_k(H₀) = H₀`; this is asserted by the caller and only
//! the obvious violation (a `k`-free shift quotient) is rejected.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::contraction::ContractionIdeal;
use crate::error::{Error, Result};
use crate::field::{rat, Rat};
use crate::linalg::{kernel_vector_in, SystemBuilder};
use crate::ore::{AlgebraKind, OrePoly};
use crate::poly::{MPoly, Monomial, Var};
use crate::surfaces::{HyperParams, RatParams, RatSummandParams};
use crate::{Poly, PolyOp, RatOp, RatPoly};

/// Coefficients `(c_x, c_k, c_0)` of one integer-linear Γ argument; the sign
/// of the `k` part is fixed by the slot it occupies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "(u32, u32, Poly)", into = "(u32, u32, Poly)")]
pub struct Slot {
    pub x: u32,
    pub k: u32,
    pub c: Poly,
}

impl Slot {
    pub fn new(x: u32, k: u32, c: Poly) -> Self {
        Slot { x, k, c }
    }

    /// `Γ(1)`, the neutral factor.
    pub fn trivial() -> Self {
        Slot::new(0, 0, MPoly::one())
    }

    fn arg(&self, k_sign: i64) -> Poly {
        MPoly::var(Var::X)
            .scale(&rat(self.x.into()))
            .add(&MPoly::var(Var::K).scale(&rat(k_sign * i64::from(self.k))))
            .add(&self.c)
    }
}

impl From<(u32, u32, Poly)> for Slot {
    fn from((x, k, c): (u32, u32, Poly)) -> Self {
        Slot { x, k, c }
    }
}

impl From<Slot> for (u32, u32, Poly) {
    fn from(s: Slot) -> Self {
        (s.x, s.k, s.c)
    }
}

/// `Γ(A)Γ(B) / (Γ(U)Γ(V))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaFactor {
    #[serde(default = "Slot::trivial")]
    pub a: Slot,
    #[serde(default = "Slot::trivial")]
    pub b: Slot,
    #[serde(default = "Slot::trivial")]
    pub u: Slot,
    #[serde(default = "Slot::trivial")]
    pub v: Slot,
}

/// The four arguments `A, B, U, V` of a Γ factor as polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearArg {
    pub a: Poly,
    pub b: Poly,
    pub u: Poly,
    pub v: Poly,
}

impl GammaFactor {
    pub fn args(&self) -> LinearArg {
        LinearArg { a: self.a.arg(1), b: self.b.arg(-1), u: self.u.arg(1), v: self.v.arg(-1) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProperTerm {
    pub p: Poly,
    pub alpha: Poly,
    pub beta: Poly,
    #[serde(default)]
    pub factors: Vec<GammaFactor>,
}

fn only_y(p: &Poly) -> bool {
    p.is_free_of(Var::X) && p.is_free_of(Var::K)
}

fn deg_y(p: &Poly) -> u64 {
    p.deg_y().or_zero().into()
}

impl ProperTerm {
    pub fn new(p: Poly, alpha: Poly, beta: Poly, factors: Vec<GammaFactor>) -> Result<Self> {
        let t = ProperTerm { p, alpha, beta, factors };
        t.validate()?;
        Ok(t)
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let t: ProperTerm = serde_json::from_str(src)?;
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p.is_zero() {
            return Err(Error::hypothesis("p", "must be nonzero"));
        }
        for (name, q) in [("alpha", &self.alpha), ("beta", &self.beta)] {
            if q.is_zero() || !only_y(q) {
                return Err(Error::hypothesis(name, "must be a nonzero polynomial in y"));
            }
        }
        for (m, f) in self.factors.iter().enumerate() {
            for (name, s) in [("a", &f.a), ("b", &f.b), ("u", &f.u), ("v", &f.v)] {
                if !only_y(&s.c) {
                    return Err(Error::hypothesis(format!("factors[{m}].{name}"), "constant part must be a polynomial in y"));
                }
            }
        }
        let q = self.gamma_shift_quotient(Var::K).mul_poly(&self.beta);
        if q.is_polynomial() && q.num().is_one() {
            return Err(Error::hypothesis("factors", "term is rational in k; use the Le decomposition route"));
        }
        Ok(())
    }

    /// Convention parameters `(ϑx, ϑy, ϑk, μ, ν, ξ, η)`.
    pub fn params(&self) -> HyperParams {
        let d = |v: Var| u64::from(self.p.deg(v).or_zero());
        let (mut ab, mut uv, mut av, mut ub) = (0u64, 0u64, 0u64, 0u64);
        let (mut xi1, mut xi2) = (deg_y(&self.alpha), 0u64);
        let (mut eta1, mut eta2) = (deg_y(&self.beta), 0u64);
        for f in &self.factors {
            let g = f.args();
            let (a, b, u, v) = (f.a.x as u64, f.b.x as u64, f.u.x as u64, f.v.x as u64);
            let (a1, b1, u1, v1) = (f.a.k as u64, f.b.k as u64, f.u.k as u64, f.v.k as u64);
            ab += a + b;
            uv += u + v;
            av += a1 + v1;
            ub += u1 + b1;
            xi1 += a * deg_y(&g.a) + b * deg_y(&g.b);
            xi2 += u * deg_y(&g.u) + v * deg_y(&g.v);
            eta1 += a1 * deg_y(&g.a) + v1 * deg_y(&g.v);
            eta2 += u1 * deg_y(&g.u) + b1 * deg_y(&g.b);
        }
        HyperParams {
            theta_x: d(Var::X),
            theta_y: d(Var::Y),
            theta_k: d(Var::K),
            mu: ab.max(uv),
            nu: av.max(ub),
            xi: xi1.max(xi2),
            eta: eta1.max(eta2),
        }
    }

    /// `P_basis[i]` for `i = 0..=r`, together with `Q` and `R`, such that an
    /// operator `Σ c_i S_x^i` turns the Gosper equation into
    /// `Σ c_i P_basis[i] = Q·S_k(Y) − R·Y`.
    pub fn build_pqr(&self, r: u32) -> (Vec<Poly>, Poly, Poly) {
        let args: Vec<LinearArg> = self.factors.iter().map(GammaFactor::args).collect();
        let shifted = |p: &Poly, t: u32| p.add(&MPoly::from_i64(t.into()));
        let basis = (0..=r)
            .map(|i| {
                let mut acc = self.alpha.pow(i).mul(&self.p.shift_by(Var::X, i.into()));
                for (f, g) in self.factors.iter().zip(&args) {
                    acc = acc
                        .mul(&g.a.rising_factorial(i * f.a.x))
                        .mul(&g.b.rising_factorial(i * f.b.x))
                        .mul(&shifted(&g.u, i * f.u.x).rising_factorial((r - i) * f.u.x))
                        .mul(&shifted(&g.v, i * f.v.x).rising_factorial((r - i) * f.v.x));
                }
                acc
            })
            .collect();
        let mut q = self.beta.clone();
        let mut rr = MPoly::one();
        for (f, g) in self.factors.iter().zip(&args) {
            let vs = g.v.add(&MPoly::from_i64(i64::from(r * f.v.x) - i64::from(f.v.k)));
            q = q.mul(&g.a.rising_factorial(f.a.k)).mul(&vs.rising_factorial(f.v.k));
            let us = g.u.add(&MPoly::from_i64(i64::from(r * f.u.x) - i64::from(f.u.k)));
            rr = rr.mul(&us.rising_factorial(f.u.k)).mul(&g.b.rising_factorial(f.b.k));
        }
        (basis, q, rr)
    }

    /// Shift quotient of the Γ part alone.
    fn gamma_shift_quotient(&self, var: Var) -> RatPoly {
        let mut num = MPoly::one();
        let mut den = MPoly::one();
        for f in &self.factors {
            let g = f.args();
            if var == Var::X {
                num = num.mul(&g.a.rising_factorial(f.a.x)).mul(&g.b.rising_factorial(f.b.x));
                den = den.mul(&g.u.rising_factorial(f.u.x)).mul(&g.v.rising_factorial(f.v.x));
            } else {
                // Γ(B − b')/Γ(B) and Γ(V)/Γ(V − v') for the downward slots
                let bd = g.b.add(&MPoly::from_i64(-i64::from(f.b.k)));
                let vd = g.v.add(&MPoly::from_i64(-i64::from(f.v.k)));
                num = num.mul(&g.a.rising_factorial(f.a.k)).mul(&vd.rising_factorial(f.v.k));
                den = den.mul(&bd.rising_factorial(f.b.k)).mul(&g.u.rising_factorial(f.u.k));
            }
        }
        RatPoly::new(num, den).expect("rising factorials of nonzero arguments")
    }

    /// `S_var(H)/H` for `var ∈ {x, k}`.
    pub fn shift_quotient(&self, var: Var) -> Result<RatPoly> {
        let exp = match var {
            Var::X => &self.alpha,
            Var::K => &self.beta,
            Var::Y => return Err(Error::Precondition("y is not a shift variable".into())),
        };
        let pq = RatPoly::new(self.p.shift(var), self.p.clone())?;
        Ok(crate::Field::mul_ref(&pq, &self.gamma_shift_quotient(var).mul_poly(exp)))
    }
}

/// A telescoper `L` with the polynomial solution `Y` of `P = Q·S_k(Y) − R·Y`.
#[derive(Clone, Debug, PartialEq)]
pub struct TelescoperCertificate {
    pub l: PolyOp,
    pub y: Poly,
    pub p: Poly,
    pub q: Poly,
    pub r: Poly,
}

impl TelescoperCertificate {
    pub fn verify(&self) -> bool {
        !self.l.is_zero() && self.p == self.q.mul(&self.y.shift(Var::K)).sub(&self.r.mul(&self.y))
    }
}

fn p_of(basis: &[Poly], l: &PolyOp) -> Poly {
    l.coeffs().iter().zip(basis).fold(MPoly::zero(), |acc, (c, b)| acc.add(&c.mul(b)))
}

fn clamp(b: i64, slack: u32) -> u32 {
    (b + i64::from(slack)).max(0) as u32
}

/// Searches for a telescoper of order `≤ r`, degree `≤ d`, height `≤ h`
/// through the Gosper-style equation, with the certificate degree bounds
/// widened by `slack`.
pub fn telescoper_search(
    t: &ProperTerm,
    r: u32,
    d: u32,
    h: u32,
    slack: u32,
    budget: &Budget,
) -> Result<Option<TelescoperCertificate>> {
    let params = t.params();
    let [bx, by, bk] = params.y_bounds(r, d, h).map(|b| clamp(b, slack));
    let (basis, q, rr) = t.build_pqr(r);
    let (ny1, nk1) = ((by + 1) as usize, (bk + 1) as usize);
    let ny = (bx as usize + 1) * ny1 * nk1;
    let (nd1, nh1) = ((d + 1) as usize, (h + 1) as usize);
    let nc = (r as usize + 1) * nd1 * nh1;

    let mut sys = SystemBuilder::new(ny + nc);
    // R·k^l − Q·(k+1)^l for each power of k in Y
    let y_parts: Vec<Poly> = (0..=bk)
        .map(|l| {
            let kl = MPoly::monomial(Monomial::var(Var::K, l), rat(1));
            rr.mul(&kl).sub(&q.mul(&kl.shift(Var::K)))
        })
        .collect();
    for i in 0..=bx {
        for j in 0..=by {
            for (l, part) in y_parts.iter().enumerate() {
                let col = ((i as usize * ny1) + j as usize) * nk1 + l;
                for (m, c) in part.mul_term(Monomial::new(i, j, 0), &rat(1)).into_terms() {
                    sys.add(m, col, c);
                }
            }
        }
    }
    for (i, b) in basis.iter().enumerate() {
        for j in 0..=d {
            for l in 0..=h {
                let col = ny + (i * nd1 + j as usize) * nh1 + l as usize;
                let shift = Monomial::new(j, l, 0);
                for (m, c) in b.terms() {
                    sys.add(m.mul(shift), col, c.clone());
                }
            }
        }
    }
    budget.check()?;
    let Some(v) = kernel_vector_in(&sys.build(), ny..ny + nc, budget)? else {
        return Ok(None);
    };
    let mut y_terms = Vec::new();
    for i in 0..=bx {
        for j in 0..=by {
            for l in 0..=bk {
                let col = ((i as usize * ny1) + j as usize) * nk1 + l as usize;
                y_terms.push((Monomial::new(i, j, l), v[col].clone()));
            }
        }
    }
    let coeffs: Vec<Poly> = (0..=r as usize)
        .map(|i| {
            MPoly::from_terms((0..=d).flat_map(|j| (0..=h).map(move |l| (j, l))).map(|(j, l)| {
                (Monomial::new(j, l, 0), v[ny + (i * nd1 + j as usize) * nh1 + l as usize].clone())
            }))
        })
        .collect();
    let l = OrePoly::new(AlgebraKind::ShiftX, coeffs);
    let cert = TelescoperCertificate { p: p_of(&basis, &l), l, y: MPoly::from_terms(y_terms), q, r: rr };
    assert!(cert.verify(), "kernel vector failed the exact certificate check");
    Ok(Some(cert))
}

/// Evaluation points used to decide existence over `C(x, y)`.
const GENERIC_POINTS: [(i64, i64); 2] = [(7919, 104_729), (1_299_709, 15_485_863)];

/// Whether a telescoper of order `≤ r` with arbitrary degree and height
/// exists, decided at two random specializations of `(x, y)`. A negative
/// answer is correct unless both points are unlucky.
pub fn admits_telescoper_of_order(t: &ProperTerm, r: u32, slack: u32, budget: &Budget) -> Result<bool> {
    let bk = clamp(t.params().y_bounds(r, 0, 0)[2], slack) as usize;
    let (basis, q, rr) = t.build_pqr(r);
    for (x0, y0) in GENERIC_POINTS {
        let spec = |p: &Poly| p.substitute(Var::X, &rat(x0)).substitute(Var::Y, &rat(y0));
        let (q0, r0) = (spec(&q), spec(&rr));
        let mut sys = SystemBuilder::new(bk + 1 + r as usize + 1);
        for l in 0..=bk {
            let kl = MPoly::monomial(Monomial::var(Var::K, l as u32), rat(1));
            for (m, c) in r0.mul(&kl).sub(&q0.mul(&kl.shift(Var::K))).into_terms() {
                sys.add(m, l, c);
            }
        }
        for (i, b) in basis.iter().enumerate() {
            for (m, c) in spec(b).into_terms() {
                sys.add(m, bk + 1 + i, c);
            }
        }
        if kernel_vector_in(&sys.build(), bk + 1..bk + 2 + r as usize, budget)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest degree and height probed while locating the minimal telescoper.
const SHAPE_CAP: u32 = 512;

/// The minimal-order telescoper, then of minimal degree, then of minimal
/// height, normalized to a primitive operator with positive leading rational.
pub fn minimal_telescoper(t: &ProperTerm, slack: u32, r_max: u32, budget: &Budget) -> Result<TelescoperCertificate> {
    for r in 0..=r_max {
        budget.check()?;
        if !admits_telescoper_of_order(t, r, slack, budget)? {
            continue;
        }
        let probe = |d: u32, h: u32| telescoper_search(t, r, d, h, slack, budget);
        let mut side = 1;
        while probe(side, side)?.is_none() {
            side *= 2;
            if side > SHAPE_CAP {
                return Err(Error::ResourceLimit(format!("no order-{r} telescoper with degree and height ≤ {SHAPE_CAP}")));
            }
        }
        let mut d0 = 0;
        while probe(d0, side)?.is_none() {
            d0 += 1;
        }
        let mut h0 = 0;
        let cert = loop {
            if let Some(c) = probe(d0, h0)? {
                break c;
            }
            h0 += 1;
        };
        return Ok(normalize(t, r, cert));
    }
    Err(Error::ResourceLimit(format!("no telescoper of order ≤ {r_max}")))
}

/// Divides out the content of `L` and rescales `Y` accordingly.
fn normalize(t: &ProperTerm, r: u32, cert: TelescoperCertificate) -> TelescoperCertificate {
    let g = cert.l.coeffs().iter().fold(MPoly::zero(), |acc, c| acc.gcd(c));
    let l = cert.l.primitive();
    let (s, _) = cert.l.lc().expect("nonzero").div_exact(&g).expect("gcd divides").split_content();
    let y = cert.y.div_exact(&g).expect("content divides the certificate").scale(&(Rat::from_integer(1.into()) / s));
    let (basis, _, _) = t.build_pqr(r);
    let out = TelescoperCertificate { p: p_of(&basis, &l), l, y, q: cert.q, r: cert.r };
    assert!(out.verify());
    out
}

/// One summand `V_i(1/(a_i x + a'_i k + a''_i)^{e_i})` of a Le decomposition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeSummand {
    pub v: PolyOp,
    pub a: i64,
    pub a_prime: u32,
    pub a_dprime: Poly,
    pub e: u32,
}

/// `H = S_k(g) − g + (1/u)·Σ V_i(1/(a_i x + a'_i k + a''_i)^{e_i})`; only `u`
/// and the summands matter for telescopers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeDecomposition {
    pub u: Poly,
    pub summands: Vec<LeSummand>,
}

impl LeDecomposition {
    pub fn from_json(src: &str) -> Result<Self> {
        let dec: LeDecomposition = serde_json::from_str(src)?;
        dec.validate()?;
        Ok(dec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.u.is_zero() || !self.u.is_free_of(Var::K) {
            return Err(Error::hypothesis("u", "must be a nonzero polynomial in x, y"));
        }
        if self.summands.is_empty() {
            return Err(Error::Empty("Le decomposition summands"));
        }
        for (i, s) in self.summands.iter().enumerate() {
            let at = |f: &str| format!("summands[{i}].{f}");
            if s.v.kind() != AlgebraKind::ShiftX || s.v.is_zero() {
                return Err(Error::hypothesis(at("v"), "must be a nonzero shift operator"));
            }
            if s.v.coeffs().iter().any(|c| !c.is_free_of(Var::K)) {
                return Err(Error::hypothesis(at("v"), "coefficients must be free of k"));
            }
            if s.a_prime == 0 || s.e == 0 {
                return Err(Error::hypothesis(at("a_prime"), "a' and e must be positive"));
            }
            if s.a.unsigned_abs().gcd(&u64::from(s.a_prime)) != 1 {
                return Err(Error::hypothesis(at("a"), "gcd(a, a') must be 1"));
            }
            if !only_y(&s.a_dprime) {
                return Err(Error::hypothesis(at("a_dprime"), "must be a polynomial in y"));
            }
        }
        for (i, si) in self.summands.iter().enumerate() {
            for (j, sj) in self.summands.iter().enumerate().skip(i + 1) {
                let same_slope = si.a * i64::from(sj.a_prime) == sj.a * i64::from(si.a_prime);
                if si.e != sj.e || !same_slope {
                    continue;
                }
                let diff = si.a_dprime.scale(&Rat::new(1.into(), si.a_prime.into())).sub(&sj.a_dprime.scale(&Rat::new(1.into(), sj.a_prime.into())));
                if diff.constant_value().is_some_and(|c| c.is_integer()) || diff.is_zero() {
                    return Err(Error::hypothesis(format!("summands[{j}]"), format!("integer shift of summands[{i}]")));
                }
            }
        }
        Ok(())
    }

    pub fn params(&self) -> RatParams {
        RatParams {
            degx_u: self.u.deg_x().or_zero().into(),
            degy_u: self.u.deg_y().or_zero().into(),
            summands: self
                .summands
                .iter()
                .map(|s| {
                    let sh = s.v.shape().expect("validated nonzero");
                    RatSummandParams { a_prime: s.a_prime.into(), theta: sh.d.into(), tau: sh.h.into(), rho: sh.r.into() }
                })
                .collect(),
        }
    }

    fn sx_power_minus_one(a_prime: u32) -> PolyOp {
        let mut coeffs = vec![MPoly::zero(); a_prime as usize + 1];
        coeffs[0] = MPoly::from_i64(-1);
        coeffs[a_prime as usize] = MPoly::one();
        OrePoly::new(AlgebraKind::ShiftX, coeffs)
    }

    /// Generator over `C(x, y)` of the ideal of operators `L` for which
    /// `L·(1/u)·V_i` is right-divisible by `S_x^{a'_i} − 1` for all `i`.
    pub fn telescoper_generator(&self) -> Result<RatOp> {
        let inv_u = RatPoly::new(MPoly::one(), self.u.clone())?;
        let gens = self
            .summands
            .iter()
            .map(|s| {
                let w = s.v.to_ratfun().scale_left(&inv_u);
                let t = Self::sx_power_minus_one(s.a_prime).to_ratfun();
                let m = OrePoly::lclm(&[w.clone(), t])?;
                let (g, rem) = m.right_divrem(&w)?;
                debug_assert!(rem.is_zero());
                Ok(g)
            })
            .collect::<Result<Vec<RatOp>>>()?;
        Ok(if gens.len() == 1 { gens.into_iter().next().expect("one") } else { OrePoly::lclm(&gens)? })
    }
}

/// `L = L̃·u` with `L̃·V_i = R_i·(S_x^{a'_i} − 1)` for every summand.
#[derive(Clone, Debug, PartialEq)]
pub struct RatCertificate {
    pub l: PolyOp,
    pub l_tilde: PolyOp,
    pub r_ops: Vec<PolyOp>,
}

impl RatCertificate {
    pub fn verify(&self, dec: &LeDecomposition) -> Result<bool> {
        let u = OrePoly::constant(AlgebraKind::ShiftX, dec.u.clone());
        if self.l.is_zero() || self.l != self.l_tilde.mul(&u)? {
            return Ok(false);
        }
        for (s, r) in dec.summands.iter().zip(&self.r_ops) {
            if self.l_tilde.mul(&s.v)? != r.mul(&LeDecomposition::sx_power_minus_one(s.a_prime))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn dense_op(v: &[Rat], offset: usize, r: usize, d: u32, h: u32) -> PolyOp {
    let (nd1, nh1) = ((d + 1) as usize, (h + 1) as usize);
    let coeffs = (0..=r)
        .map(|i| {
            MPoly::from_terms((0..=d).flat_map(|j| (0..=h).map(move |l| (j, l))).map(|(j, l)| {
                (Monomial::new(j, l, 0), v[offset + (i * nd1 + j as usize) * nh1 + l as usize].clone())
            }))
        })
        .collect();
    OrePoly::new(AlgebraKind::ShiftX, coeffs)
}

/// Solves the ansatz `L = L̃·u`, `L̃·V_i = R_i·(S_x^{a'_i} − 1)` by coefficient
/// comparison in `x`, `y` and `S_x`.
pub fn rat_telescoper_search(dec: &LeDecomposition, r: u32, d: u32, h: u32, budget: &Budget) -> Result<Option<RatCertificate>> {
    let (dxu, dyu) = (dec.u.deg_x().or_zero(), dec.u.deg_y().or_zero());
    if d < dxu || h < dyu {
        return Err(Error::Precondition(format!("(d, h) = ({d}, {h}) below the degree and height of u")));
    }
    let (dd, hh) = (d - dxu, h - dyu);
    // R_i blocks first, L̃ last
    let mut blocks = Vec::new();
    let mut ncols = 0usize;
    for s in &dec.summands {
        let sh = s.v.shape()?;
        let ord = i64::from(r) + i64::from(sh.r) - i64::from(s.a_prime);
        let (bd, bh) = (dd + sh.d, hh + sh.h);
        let size = if ord < 0 { 0 } else { (ord as usize + 1) * (bd as usize + 1) * (bh as usize + 1) };
        blocks.push((ncols, ord, bd, bh));
        ncols += size;
    }
    let lt_off = ncols;
    let (nd1, nh1) = ((dd + 1) as usize, (hh + 1) as usize);
    ncols += (r as usize + 1) * nd1 * nh1;

    let mut sys = SystemBuilder::new(ncols);
    for (si, (s, &(off, ord, bd, bh))) in dec.summands.iter().zip(&blocks).enumerate() {
        for i in 0..=r as usize {
            let w = s.v.gen_pow_times(i);
            for j in 0..=dd {
                for l in 0..=hh {
                    let col = lt_off + (i * nd1 + j as usize) * nh1 + l as usize;
                    let shift = Monomial::new(j, l, 0);
                    for (t, c) in w.coeffs().iter().enumerate() {
                        for (m, a) in c.terms() {
                            sys.add((si, t, m.mul(shift)), col, a.clone());
                        }
                    }
                }
            }
        }
        if ord < 0 {
            continue;
        }
        let (bd1, bh1) = ((bd + 1) as usize, (bh + 1) as usize);
        for i in 0..=ord as usize {
            for j in 0..=bd {
                for l in 0..=bh {
                    let col = off + (i * bd1 + j as usize) * bh1 + l as usize;
                    let m = Monomial::new(j, l, 0);
                    sys.add((si, i + s.a_prime as usize, m), col, rat(-1));
                    sys.add((si, i, m), col, rat(1));
                }
            }
        }
    }
    budget.check()?;
    let Some(v) = kernel_vector_in(&sys.build(), lt_off..ncols, budget)? else {
        return Ok(None);
    };
    let l_tilde = dense_op(&v, lt_off, r as usize, dd, hh);
    let r_ops = blocks
        .iter()
        .map(|&(off, ord, bd, bh)| if ord < 0 { OrePoly::zero(AlgebraKind::ShiftX) } else { dense_op(&v, off, ord as usize, bd, bh) })
        .collect();
    let l = l_tilde.mul(&OrePoly::constant(AlgebraKind::ShiftX, dec.u.clone()))?;
    let cert = RatCertificate { l, l_tilde, r_ops };
    assert!(cert.verify(dec)?, "kernel vector failed the exact identity check");
    Ok(Some(cert))
}

/// Smallest `h ≤ h_cap` for which the direct ansatz succeeds.
pub fn rat_direct_min_height(dec: &LeDecomposition, r: u32, d: u32, h_cap: u32, budget: &Budget) -> Result<Option<u32>> {
    let (dxu, dyu) = (dec.u.deg_x().or_zero(), dec.u.deg_y().or_zero());
    if d < dxu {
        return Ok(None);
    }
    for h in dyu..=h_cap {
        if rat_telescoper_search(dec, r, d, h, budget)?.is_some() {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// Minimal height of a telescoper of order `≤ r` and degree `≤ d`, taking the
/// smaller of two routes: the contraction of the generator ideal (`ideal`,
/// built from [`LeDecomposition::telescoper_generator`]) and the direct
/// ansatz, probed only below the ideal's answer.
pub fn rat_actual_min_height(
    dec: &LeDecomposition,
    ideal: &ContractionIdeal,
    r: u32,
    d: u32,
    h_cap: u32,
    budget: &Budget,
) -> Result<Option<u32>> {
    let via_ideal = ideal.actual_min_height(r, d, h_cap, budget)?;
    let Some(h) = via_ideal else {
        // every direct solution lies in the ideal
        return Ok(None);
    };
    let direct = match h.checked_sub(1) {
        Some(below) => rat_direct_min_height(dec, r, d, below, budget)?,
        None => None,
    };
    Ok(Some(direct.map_or(h, |v| v.min(h))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::{parse_operator, Field};

    pub(crate) fn ex46() -> ProperTerm {
        let f = GammaFactor {
            a: Slot::new(1, 1, parse_poly("y^2").unwrap()),
            b: Slot::trivial(),
            u: Slot::trivial(),
            v: Slot::new(1, 1, parse_poly("y").unwrap()),
        };
        ProperTerm::new(parse_poly("k").unwrap(), MPoly::one(), MPoly::one(), vec![f]).unwrap()
    }

    pub(crate) fn ex410() -> LeDecomposition {
        LeDecomposition {
            u: parse_poly("x + y").unwrap(),
            summands: vec![LeSummand {
                v: parse_operator(AlgebraKind::ShiftX, "((y+1)^3 + 1)*S - (x + y + y^3)").unwrap(),
                a: 1,
                a_prime: 3,
                a_dprime: parse_poly("y").unwrap(),
                e: 1,
            }],
        }
    }

    #[test]
    fn ex46_params() {
        let p = ex46().params();
        assert_eq!(
            (p.theta_x, p.theta_y, p.theta_k, p.mu, p.nu, p.xi, p.eta),
            (0, 0, 1, 1, 2, 2, 3)
        );
    }

    #[test]
    fn trivial_term_params() {
        let t = ProperTerm { p: MPoly::one(), alpha: MPoly::one(), beta: MPoly::one(), factors: vec![] };
        assert_eq!(t.params(), HyperParams::default());
        let (b, q, r) = t.build_pqr(3);
        assert!(b.iter().all(MPoly::is_one) && q.is_one() && r.is_one());
    }

    #[test]
    fn scaling_p_by_y_bumps_theta_y() {
        let mut t = ex46();
        let before = t.params();
        t.p = t.p.mul(&MPoly::var(Var::Y));
        let after = t.params();
        assert_eq!(after.theta_y, before.theta_y + 1);
        assert_eq!(HyperParams { theta_y: before.theta_y, ..after }, before);
    }

    #[test]
    fn rejects_formally_rational_term() {
        let s = Slot::new(1, 1, MPoly::zero());
        let f = GammaFactor { a: s.clone(), b: Slot::trivial(), u: s, v: Slot::trivial() };
        assert!(ProperTerm::new(MPoly::one(), MPoly::one(), MPoly::one(), vec![f]).is_err());
    }

    #[test]
    fn ex46_pqr_at_order_zero() {
        let (b, q, r) = ex46().build_pqr(0);
        assert_eq!(b, vec![parse_poly("k").unwrap()]);
        // independent recomputation from rising factorials
        let a = parse_poly("x + k + y^2").unwrap();
        let v = parse_poly("x - k + y").unwrap();
        assert_eq!(q, a.rising_factorial(1).mul(&v.add(&MPoly::from_i64(-1)).rising_factorial(1)));
        assert!(r.is_one());
    }

    #[test]
    fn ex46_shift_quotients() {
        let t = ex46();
        let expect = RatPoly::new(parse_poly("(k+1)*(x+k+y^2)*(x-k+y-1)").unwrap(), parse_poly("k").unwrap()).unwrap();
        assert_eq!(t.shift_quotient(Var::K).unwrap(), expect);
        let exp = ProperTerm {
            p: MPoly::one(),
            alpha: MPoly::var(Var::Y),
            beta: MPoly::one(),
            factors: vec![],
        };
        assert_eq!(exp.shift_quotient(Var::X).unwrap(), RatPoly::from_poly(MPoly::var(Var::Y)));
    }

    #[test]
    fn decomposition_identity() {
        // S_k(L(H))/L(H) = S_k(P)/P · Q/S_k(R) for concrete c
        let t = ex46();
        let r = 2;
        let c = [parse_poly("x + 2*y").unwrap(), parse_poly("-3").unwrap(), parse_poly("x*y - 1").unwrap()];
        let qx = t.shift_quotient(Var::X).unwrap();
        let qk = t.shift_quotient(Var::K).unwrap();
        let mut lh = RatPoly::zero();
        let mut prod = RatPoly::one();
        for (i, ci) in c.iter().enumerate() {
            if i > 0 {
                prod = prod.mul_ref(&qx.shift_by(Var::X, i as i64 - 1));
            }
            lh = lh.add_ref(&prod.mul_poly(ci));
        }
        let lhs = lh.shift(Var::K).checked_div(&lh).unwrap().mul_ref(&qk);
        let (basis, q, rr) = t.build_pqr(r);
        let p = c.iter().zip(&basis).fold(MPoly::zero(), |a, (ci, b)| a.add(&ci.mul(b)));
        let rhs = RatPoly::new(p.shift(Var::K).mul(&q), p.mul(&rr.shift(Var::K))).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn ex46_p_degree_bounds() {
        let t = ex46();
        let hp = t.params();
        for r in 0..=4u32 {
            let (basis, _, _) = t.build_pqr(r);
            for b in &basis {
                assert!(u64::from(b.deg_x().or_zero()) <= hp.theta_x + u64::from(r) * hp.mu);
                assert!(u64::from(b.deg_y().or_zero()) <= hp.theta_y + u64::from(r) * hp.xi);
                assert!(u64::from(b.deg_k().or_zero()) <= hp.theta_k + u64::from(r) * hp.mu);
            }
        }
    }

    #[test]
    fn no_order_zero_telescoper() {
        let b = Budget::unlimited();
        assert!(telescoper_search(&ex46(), 0, 0, 0, 0, &b).unwrap().is_none());
        assert!(!admits_telescoper_of_order(&ex46(), 1, 2, &b).unwrap());
        assert!(admits_telescoper_of_order(&ex46(), 2, 0, &b).unwrap());
    }

    #[test]
    fn ex410_params_and_precondition() {
        let dec = ex410();
        dec.validate().unwrap();
        let p = dec.params();
        assert_eq!((p.degx_u, p.degy_u), (1, 1));
        assert_eq!(p.summands, vec![RatSummandParams { a_prime: 3, theta: 1, tau: 3, rho: 1 }]);
        assert!(rat_telescoper_search(&dec, 3, 0, 5, &Budget::unlimited()).is_err());
    }

    #[test]
    fn ex410_small_shapes() {
        let dec = ex410();
        let b = Budget::unlimited();
        let cert = rat_telescoper_search(&dec, 6, 1, 1, &b).unwrap().expect("order 6, degree 1, height 1");
        assert!(cert.verify(&dec).unwrap());
        // r < a' − ρ leaves no room for R
        assert!(rat_telescoper_search(&dec, 1, 3, 3, &b).unwrap().is_none());
    }
}
