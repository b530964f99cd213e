//! Elements of bounded shape in the contraction `⟨G⟩ ∩ C[x,y][∂]` of a left
//! ideal, cofactors `p·L₁ = P·L`, and the syzygy dimensions feeding the
//! contraction bound.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::{rat, Field, Rat};
use crate::linalg::{kernel_vector_in, Matrix, SystemBuilder};
use crate::ore::{AlgebraKind, OreCoeff, OrePoly};
use crate::poly::{MPoly, Monomial, Var};
use crate::surfaces::{ContractionParams, WitnessParams};
use crate::{Poly, PolyOp, RatOp, RatPoly};

/// Remainders of `∂^i` modulo a fixed generator over a common denominator,
/// for every order up to a maximum.
#[derive(Clone, Debug)]
pub struct ContractionIdeal {
    g: RatOp,
    ord: usize,
    /// `cleared[r][i][j]` for `i ≤ r ≤ r_max`.
    cleared: Vec<Vec<Vec<Poly>>>,
}

/// Points at which `y` is specialized to decide existence at unbounded height.
const Y_POINTS: [i64; 2] = [104_729, 15_485_863];

fn lcm(a: &Poly, b: &Poly) -> Poly {
    a.div_exact(&a.gcd(b)).expect("gcd divides").mul(b).normalize()
}

/// A denominator `κ·Π f_k^{m_k}` with normalized, pairwise distinct factors.
#[derive(Clone, Debug)]
struct Factored {
    scalar: Rat,
    factors: Vec<(Poly, u32)>,
}

impl Default for Factored {
    fn default() -> Self {
        Factored { scalar: rat(1), factors: Vec::new() }
    }
}

impl Factored {
    /// Multiplies by `f^m`, folding the content of `f` into the scalar.
    fn push(&mut self, f: &Poly, m: u32) {
        if m == 0 {
            return;
        }
        let (s, f) = f.split_content();
        for _ in 0..m {
            self.scalar *= &s;
        }
        if f.is_one() {
            return;
        }
        match self.factors.iter_mut().find(|(g, _)| *g == f) {
            Some((_, e)) => *e += m,
            None => self.factors.push((f, m)),
        }
    }

    fn multiplicity(&self, f: &Poly) -> u32 {
        self.factors.iter().find(|(g, _)| g == f).map_or(0, |(_, m)| *m)
    }

    /// Raises every multiplicity to at least that in `other`; the scalar stays 1.
    fn absorb(&mut self, other: &Factored) {
        for (f, m) in &other.factors {
            let have = self.multiplicity(f);
            if *m > have {
                self.push(f, m - have);
            }
        }
    }

    /// `self / other` for `other` dividing `self` factorwise.
    fn cofactor(&self, other: &Factored) -> Poly {
        let q = self.factors.iter().fold(MPoly::one(), |acc, (f, m)| acc.mul(&f.pow(m - other.multiplicity(f))));
        q.scale(&(&self.scalar / &other.scalar))
    }

    /// Divides out the content of `nums` and every factor, or part of a
    /// factor, that the denominator shares with all of `nums`.
    fn cancel(&mut self, nums: &mut [Poly]) {
        if nums.iter().all(MPoly::is_zero) {
            *self = Factored::default();
            return;
        }
        let content = Rat::normalizer(nums.iter().flat_map(|c| c.terms().iter().map(|t| &t.1)));
        for c in nums.iter_mut() {
            *c = c.scale(&(rat(1) / &content));
        }
        self.scalar /= &content;
        let mut k = 0;
        while k < self.factors.len() {
            while self.factors[k].1 > 0 {
                let f = self.factors[k].0.clone();
                let g = nums.iter().filter(|c| !c.is_zero()).fold(f.clone(), |acc, c| if acc.is_constant() { acc } else { acc.gcd(c) });
                if g.is_constant() {
                    break;
                }
                if g == f {
                    for c in nums.iter_mut() {
                        *c = c.div_exact(&f).expect("common factor");
                    }
                    self.factors[k].1 -= 1;
                } else {
                    let m = std::mem::replace(&mut self.factors[k].1, 0);
                    let rest = f.div_exact(&g).expect("gcd divides");
                    self.push(&g, m);
                    self.push(&rest, m);
                }
            }
            k += 1;
        }
        self.factors.retain(|(_, m)| *m > 0);
    }
}

/// One step `∂·(D⁻¹ Σ c_j ∂^j)` reduced modulo the polynomial generator `p`,
/// whose leading coefficient is normalized.
fn remainder_step(p: &PolyOp, c: &[Poly], den: &Factored) -> (Vec<Poly>, Factored) {
    let kind = p.kind();
    let ord = c.len();
    let pc = p.coeffs();
    let lead = &pc[ord];
    match kind {
        AlgebraKind::ShiftX => {
            // σ(c_j)/σ(D), then ∂^ord = −lead⁻¹ Σ p_j ∂^j
            let sc: Vec<Poly> = c.iter().map(|x| x.sigma_pow(kind, 1)).collect();
            let mut out = Factored { scalar: den.scalar.clone(), factors: Vec::new() };
            for (f, m) in &den.factors {
                out.push(&f.sigma_pow(kind, 1), *m);
            }
            out.push(lead, 1);
            let nums = (0..ord)
                .map(|j| {
                    let t = sc[ord - 1].mul(&pc[j]).neg();
                    if j > 0 {
                        t.add(&lead.mul(&sc[j - 1]))
                    } else {
                        t
                    }
                })
                .collect();
            (nums, out)
        }
        AlgebraKind::DiffX => {
            // over D·L with L the product of the radical of D and lead:
            // δ(c/D) = (c'·L − c·Σ m_k f_k'·L/f_k) / (D·L)
            let mut rad: Vec<Poly> = den.factors.iter().map(|(f, _)| f.clone()).collect();
            if !rad.contains(lead) {
                rad.push(lead.clone());
            }
            let l = rad.iter().fold(MPoly::one(), |acc, f| acc.mul(f));
            let others = |f: &Poly| l.div_exact(f).expect("factor of L");
            let log_der = den.factors.iter().fold(MPoly::zero(), |acc, (f, m)| {
                acc.add(&f.delta(kind).mul(&others(f)).scale(&rat(i64::from(*m))))
            });
            let top = c[ord - 1].mul(&others(lead));
            let nums = (0..ord)
                .map(|j| {
                    let mut t = c[j].delta(kind).mul(&l).sub(&c[j].mul(&log_der)).sub(&top.mul(&pc[j]));
                    if j > 0 {
                        t = t.add(&c[j - 1].mul(&l));
                    }
                    t
                })
                .collect();
            let mut out = den.clone();
            for f in &rad {
                out.push(f, 1);
            }
            (nums, out)
        }
    }
}

impl ContractionIdeal {
    pub fn new(g: &RatOp, r_max: u32) -> Result<Self> {
        let p = g.clear_denominators();
        let ord = p.order().ok_or(Error::ZeroOperator)?;
        let p = p.scale_left(&MPoly::constant(rat(1) / p.coeffs()[ord].split_content().0));
        let n = r_max as usize + 1;
        // ∂^i ≡ D_i⁻¹·Σ c_ij ∂^j with D_i kept factored and reduced against the c_ij
        let mut rows: Vec<(Vec<Poly>, Factored)> = (0..ord.min(n))
            .map(|i| ((0..ord).map(|j| if i == j { MPoly::one() } else { MPoly::zero() }).collect(), Factored::default()))
            .collect();
        for i in ord..n {
            let (c, den) = &rows[i - 1];
            let (mut next, mut den) = remainder_step(&p, c, den);
            den.cancel(&mut next);
            rows.push((next, den));
        }
        // block r over the running common denominator, extended one factor at a time
        let mut common = Factored::default();
        let mut cleared: Vec<Vec<Vec<Poly>>> = Vec::with_capacity(rows.len());
        for (c, den) in &rows {
            let before = common.clone();
            common.absorb(den);
            let step = common.cofactor(&before);
            let mut block: Vec<Vec<Poly>> = match cleared.last() {
                Some(prev) => prev.iter().map(|row| row.iter().map(|x| x.mul(&step)).collect()).collect(),
                None => Vec::new(),
            };
            let f = common.cofactor(den);
            block.push(c.iter().map(|x| x.mul(&f)).collect());
            cleared.push(block);
        }
        Ok(ContractionIdeal { g: g.clone(), ord, cleared })
    }

    pub fn from_poly_op(g: &PolyOp, r_max: u32) -> Result<Self> {
        Self::new(&g.to_ratfun(), r_max)
    }

    pub fn generator(&self) -> &RatOp {
        &self.g
    }

    pub fn order(&self) -> usize {
        self.ord
    }

    pub fn r_max(&self) -> u32 {
        (self.cleared.len() - 1) as u32
    }

    fn block(&self, r: u32) -> Result<&Vec<Vec<Poly>>> {
        self.cleared
            .get(r as usize)
            .ok_or_else(|| Error::Precondition(format!("order {r} exceeds the precomputed maximum {}", self.r_max())))
    }

    /// Rows `(j, monomial)` of `Σ λ x^b y^a N_{i,j}`, with `extra` free
    /// columns appended after the `λ` block.
    fn assemble(block: &[Vec<Poly>], d: u32, h: u32, extra: usize) -> (SystemBuilder<(usize, Monomial)>, usize) {
        let (nd1, nh1) = ((d + 1) as usize, (h + 1) as usize);
        let ncols = block.len() * nd1 * nh1;
        let mut sys = SystemBuilder::new(ncols + extra);
        for (i, row) in block.iter().enumerate() {
            for b in 0..=d {
                for a in 0..=h {
                    let col = (i * nd1 + b as usize) * nh1 + a as usize;
                    let shift = Monomial::new(b, a, 0);
                    for (j, n) in row.iter().enumerate() {
                        for (m, c) in n.terms() {
                            sys.add((j, m.mul(shift)), col, c.clone());
                        }
                    }
                }
            }
        }
        (sys, ncols)
    }

    /// A nonzero element of the contraction of order `≤ r`, degree `≤ d`,
    /// height `≤ h`, verified against the remainder basis.
    pub fn shape_search(&self, r: u32, d: u32, h: u32, budget: &Budget) -> Result<Option<PolyOp>> {
        if (r as usize) < self.ord {
            return Ok(None);
        }
        let block = self.block(r)?;
        let (sys, ncols) = Self::assemble(block, d, h, 0);
        budget.check()?;
        let Some(v) = kernel_vector_in(&sys.build(), 0..ncols, budget)? else {
            return Ok(None);
        };
        let l = self.decode(&v, r, d, h);
        assert!(!l.is_zero() && self.contains(&l)?, "shape search result is not in the ideal");
        Ok(Some(l))
    }

    /// Like [`shape_search`](Self::shape_search), but the coefficient of `∂^r`
    /// must be a nonzero scalar multiple of `lc`.
    pub fn shape_search_with_leading(&self, r: u32, d: u32, h: u32, lc: &Poly, budget: &Budget) -> Result<Option<PolyOp>> {
        if (r as usize) < self.ord || lc.is_zero() {
            return Ok(None);
        }
        let block = self.block(r)?;
        let (mut sys, ncols) = Self::assemble(block, d, h, 1);
        let (nd1, nh1) = ((d + 1) as usize, (h + 1) as usize);
        // the scale s occupies the last column; rows keyed past every remainder column
        let key = |m: Monomial| (self.ord, m);
        for b in 0..=d {
            for a in 0..=h {
                sys.add(key(Monomial::new(b, a, 0)), (r as usize * nd1 + b as usize) * nh1 + a as usize, rat(1));
            }
        }
        for (m, c) in lc.terms() {
            if m.exp(Var::X) > d || m.exp(Var::Y) > h || m.exp(Var::K) > 0 {
                return Ok(None);
            }
            sys.add(key(*m), ncols, -c.clone());
        }
        budget.check()?;
        let Some(v) = kernel_vector_in(&sys.build(), ncols..ncols + 1, budget)? else {
            return Ok(None);
        };
        let l = self.decode(&v, r, d, h);
        assert!(self.contains(&l)?, "shape search result is not in the ideal");
        Ok(Some(l))
    }

    /// Membership of a polynomial operator of order `≤ r_max` in the ideal.
    pub fn contains(&self, l: &PolyOp) -> Result<bool> {
        let Some(r) = l.order() else { return Ok(true) };
        let block = self.block(r as u32)?;
        Ok((0..self.ord).all(|j| {
            l.coeffs().iter().zip(block).fold(MPoly::zero(), |acc, (a, row)| acc.add(&a.mul(&row[j]))).is_zero()
        }))
    }

    fn decode(&self, v: &[Rat], r: u32, d: u32, h: u32) -> PolyOp {
        let (nd1, nh1) = ((d + 1) as usize, (h + 1) as usize);
        let coeffs = (0..=r as usize)
            .map(|i| {
                MPoly::from_terms((0..=d).flat_map(|b| (0..=h).map(move |a| (b, a))).map(|(b, a)| {
                    (Monomial::new(b, a, 0), v[(i * nd1 + b as usize) * nh1 + a as usize].clone())
                }))
            })
            .collect();
        OrePoly::new(self.g.kind(), coeffs)
    }

    /// Whether an element of order `≤ r` and degree `≤ d` exists at any
    /// height. A negative answer is certain; a positive one may rarely be a
    /// false alarm from unlucky specializations of `y`.
    pub fn exists_any_height(&self, r: u32, d: u32, budget: &Budget) -> Result<bool> {
        if (r as usize) < self.ord {
            return Ok(false);
        }
        let block = self.block(r)?;
        for y0 in Y_POINTS {
            let spec: Vec<Vec<Poly>> =
                block.iter().map(|row| row.iter().map(|n| n.substitute(Var::Y, &rat(y0))).collect()).collect();
            let (sys, ncols) = Self::assemble(&spec, d, 0, 0);
            if kernel_vector_in(&sys.build(), 0..ncols, budget)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Smallest `h ≤ h_cap` at which [`shape_search`](Self::shape_search) succeeds.
    pub fn actual_min_height(&self, r: u32, d: u32, h_cap: u32, budget: &Budget) -> Result<Option<u32>> {
        if !self.exists_any_height(r, d, budget)? {
            return Ok(None);
        }
        for h in 0..=h_cap {
            if self.shape_search(r, d, h, budget)?.is_some() {
                return Ok(Some(h));
            }
        }
        Ok(None)
    }
}

/// `(p, P)` with `p·L₁ = P·L`, `p` the normalized common denominator of the
/// right quotient of `L₁` by `L`.
pub fn cofactor(l1: &PolyOp, l: &PolyOp) -> Result<(Poly, PolyOp)> {
    let (q, rem) = l1.to_ratfun().right_divrem(&l.to_ratfun())?;
    if !rem.is_zero() {
        return Err(Error::NotInIdeal);
    }
    let p = q.coeffs().iter().fold(MPoly::one(), |acc, c| lcm(&acc, c.den()));
    let big_p = OrePoly::new(
        l.kind(),
        q.coeffs().iter().map(|c| c.num().mul(&p.div_exact(c.den()).expect("lcm is a multiple"))).collect(),
    );
    let lhs = OrePoly::constant(l.kind(), p.clone()).mul(l1)?;
    assert_eq!(lhs, big_p.mul(l)?, "cofactor identity");
    Ok((p, big_p))
}

/// One `(L_ℓ, p_ℓ, P_ℓ)` triple with `p_ℓ·L_ℓ = P_ℓ·L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(rename = "L")]
    pub l: PolyOp,
    pub p: Poly,
    #[serde(rename = "P")]
    pub big_p: PolyOp,
}

impl Witness {
    fn lc_p(&self) -> &Poly {
        self.big_p.lc().expect("validated nonzero")
    }

    fn lambda(&self) -> (i64, i64) {
        let lc = self.lc_p();
        let dx = i64::from(self.p.deg_x().or_zero()) - i64::from(lc.deg_x().or_zero());
        let dy = i64::from(self.p.deg_y().or_zero()) - i64::from(lc.deg_y().or_zero());
        (dx, dy)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionData {
    #[serde(rename = "L")]
    pub l: PolyOp,
    #[serde(default)]
    pub witnesses: Vec<Witness>,
}

impl ContractionData {
    /// Builds the data from elements `L_ℓ` of the contraction by computing
    /// their cofactors; witnesses are sorted by `deg_∂ P_ℓ`.
    pub fn from_elements(l: PolyOp, elements: &[PolyOp]) -> Result<Self> {
        let mut witnesses = elements
            .iter()
            .map(|e| cofactor(e, &l).map(|(p, big_p)| Witness { l: e.clone(), p, big_p }))
            .collect::<Result<Vec<_>>>()?;
        witnesses.sort_by_key(|w| w.big_p.order());
        let data = ContractionData { l, witnesses };
        data.validate()?;
        Ok(data)
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let data: ContractionData = serde_json::from_str(src)?;
        data.validate()?;
        Ok(data)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l.is_zero() {
            return Err(Error::hypothesis("L", "must be nonzero"));
        }
        let kind = self.l.kind();
        for (i, w) in self.witnesses.iter().enumerate() {
            let at = format!("witnesses[{i}]");
            if w.l.kind() != kind || w.big_p.kind() != kind {
                return Err(Error::MixedKinds);
            }
            if w.p.is_zero() || w.big_p.is_zero() {
                return Err(Error::hypothesis(at, "p and P must be nonzero"));
            }
            if OrePoly::constant(kind, w.p.clone()).mul(&w.l)? != w.big_p.mul(&self.l)? {
                return Err(Error::hypothesis(at, "p·L_i ≠ P·L"));
            }
            let (lx, ly) = w.lambda();
            if lx <= 0 || ly <= 0 {
                return Err(Error::hypothesis(at, format!("degree drop must be positive, got ({lx}, {ly})")));
            }
            for (j, o) in self.witnesses.iter().enumerate().take(i) {
                if !w.p.gcd(&o.p).is_constant() {
                    return Err(Error::hypothesis(at, format!("p shares a factor with witnesses[{j}]")));
                }
            }
        }
        for pair in self.witnesses.windows(2) {
            if pair[0].big_p.order() > pair[1].big_p.order() {
                return Err(Error::hypothesis("witnesses", "must be sorted by the order of P"));
            }
        }
        Ok(())
    }
}

/// `c_0, …, c_n` for `n` up to `max(n_max, max deg_∂ P_ℓ)`.
pub fn syzygy_dims(data: &ContractionData, n_max: usize) -> Vec<u64> {
    let kind = data.l.kind();
    let top = data.witnesses.iter().filter_map(|w| w.big_p.order()).max().unwrap_or(0).max(n_max);
    (0..=top)
        .map(|n| {
            let active: Vec<&Witness> = data.witnesses.iter().filter(|w| w.big_p.order().is_some_and(|o| o <= n)).collect();
            if active.len() <= 1 {
                return 0;
            }
            let us: Vec<RatPoly> = active
                .iter()
                .map(|w| {
                    let o = w.big_p.order().expect("nonzero");
                    let q = RatPoly::new(w.lc_p().clone(), w.p.clone()).expect("p nonzero");
                    q.sigma_pow(kind, (n - o) as i64)
                })
                .collect();
            let den = us.iter().fold(MPoly::one(), |acc, u| lcm(&acc, u.den()));
            let ws: Vec<Poly> = us.iter().map(|u| u.num().mul(&den.div_exact(u.den()).expect("lcm"))).collect();
            let ncols: usize = active.iter().map(|w| {
                let (lx, ly) = w.lambda();
                (lx as usize + 1) * (ly as usize + 1)
            }).sum();
            let mut sys = SystemBuilder::new(ncols);
            let mut col = 0usize;
            for (w, wp) in active.iter().zip(&ws) {
                let (lx, ly) = w.lambda();
                for b in 0..=lx as u32 {
                    for a in 0..=ly as u32 {
                        for (m, c) in wp.terms() {
                            sys.add(m.mul(Monomial::new(b, a, 0)), col, c.clone());
                        }
                        col += 1;
                    }
                }
            }
            let sparse = sys.build();
            let rows: Vec<Vec<Rat>> = sparse
                .rows()
                .iter()
                .map(|row| {
                    let mut dense = vec![rat(0); col];
                    for (c, v) in row {
                        dense[*c as usize] = v.clone();
                    }
                    dense
                })
                .collect();
            let rank = if rows.is_empty() { 0 } else { Matrix::from_rows(col, rows).rank() };
            (col - rank) as u64
        })
        .collect()
}

/// Parameters of the contraction bound read off from the data.
pub fn contraction_params(data: &ContractionData) -> Result<ContractionParams> {
    data.validate()?;
    let deg = |p: &Poly, v: Var| i64::from(p.deg(v).or_zero());
    let op_deg = |o: &PolyOp, v: Var| i64::from(o.deg(v).or_zero());
    let mut params = ContractionParams {
        ord_l: data.l.order().expect("nonzero") as u64,
        degx_l: data.l.deg(Var::X).or_zero().into(),
        degy_l: data.l.deg(Var::Y).or_zero().into(),
        ..ContractionParams::default()
    };
    for w in &data.witnesses {
        let (lambda_x, lambda_y) = w.lambda();
        let ord_p = w.big_p.order().expect("nonzero") as u64;
        params.witnesses.push(WitnessParams { ord_p, lambda_x, lambda_y });
        let lc = w.lc_p();
        params.eta_x = params.eta_x.max(op_deg(&w.big_p, Var::X) - deg(lc, Var::X));
        params.eta_y = params.eta_y.max(op_deg(&w.big_p, Var::Y) - deg(lc, Var::Y));
        params.mu_x += deg(&w.p, Var::X);
        params.mu_y += deg(&w.p, Var::Y);
        let ord_l1 = w.l.order().expect("nonzero") as i64;
        params.xi_x += (ord_l1 - 1) * deg(&w.p, Var::X);
        params.xi_y += (ord_l1 - 1) * deg(&w.p, Var::Y);
    }
    params.c = syzygy_dims(data, 0);
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{parse_operator, parse_poly};

    fn diff(src: &str) -> PolyOp {
        parse_operator(AlgebraKind::DiffX, src).unwrap()
    }

    #[test]
    fn derivation_generator() {
        let g = ContractionIdeal::from_poly_op(&diff("D"), 3).unwrap();
        let b = Budget::unlimited();
        assert_eq!(g.shape_search(1, 0, 0, &b).unwrap(), Some(diff("D")));
        assert_eq!(g.actual_min_height(0, 5, 10, &b).unwrap(), None);
        assert_eq!(g.actual_min_height(1, 0, 10, &b).unwrap(), Some(0));
    }

    #[test]
    fn removable_singularity() {
        // x·D − 2 has the polynomial solution x², so D^3 lies in its ideal
        let g = ContractionIdeal::from_poly_op(&diff("x*D - 2"), 4).unwrap();
        let b = Budget::unlimited();
        assert!(g.shape_search(1, 0, 5, &b).unwrap().is_none());
        assert!(g.exists_any_height(3, 0, &b).unwrap());
        let l = g.shape_search(3, 0, 0, &b).unwrap().unwrap();
        assert_eq!(l.shape().unwrap().r, 3);
    }

    #[test]
    fn membership_matches_right_division() {
        for kind in [AlgebraKind::ShiftX, AlgebraKind::DiffX] {
            let op = |src: &str| parse_operator(kind, &src.replace('Z', &kind.symbol().to_string())).unwrap();
            let g = op("(x + y)*Z^2 - x*Z + y");
            let ideal = ContractionIdeal::from_poly_op(&g, 5).unwrap();
            let inside = op("x*Z^3 + y*Z - 1").mul(&g).unwrap();
            let outside = inside.add(&op("x"));
            for l in [inside, outside] {
                let (_, rem) = l.to_ratfun().right_divrem(&g.to_ratfun()).unwrap();
                assert_eq!(ideal.contains(&l).unwrap(), rem.is_zero());
            }
        }
    }

    #[test]
    fn trivial_cofactors() {
        let l = parse_operator(AlgebraKind::ShiftX, "(x + y)*S^2 - x*S + 1").unwrap();
        assert_eq!(cofactor(&l, &l).unwrap(), (MPoly::one(), OrePoly::one(AlgebraKind::ShiftX)));
        let xl = OrePoly::constant(AlgebraKind::ShiftX, MPoly::var(Var::X)).mul(&l).unwrap();
        assert_eq!(cofactor(&xl, &l).unwrap(), (MPoly::one(), OrePoly::constant(AlgebraKind::ShiftX, MPoly::var(Var::X))));
        let s = parse_operator(AlgebraKind::ShiftX, "S").unwrap();
        assert!(matches!(cofactor(&s, &l), Err(Error::NotInIdeal)));
    }

    #[test]
    fn single_witness_readout() {
        // p = x·y², P = S, L = (x−1)·y²·(S + 1), L₁ = S² + S
        let shift = |src: &str| parse_operator(AlgebraKind::ShiftX, src).unwrap();
        let data = ContractionData {
            l: shift("(x - 1)*y^2*S + (x - 1)*y^2"),
            witnesses: vec![Witness { l: shift("S^2 + S"), p: parse_poly("x*y^2").unwrap(), big_p: shift("S") }],
        };
        let cp = contraction_params(&data).unwrap();
        assert_eq!(cp.witnesses, vec![WitnessParams { ord_p: 1, lambda_x: 1, lambda_y: 2 }]);
        assert_eq!((cp.mu_x, cp.mu_y, cp.xi_x, cp.xi_y, cp.eta_x, cp.eta_y), (1, 2, 1, 2, 0, 0));
        assert!(cp.c.iter().all(|&c| c == 0));
        let derived = ContractionData::from_elements(data.l.clone(), &[shift("S^2 + S")]).unwrap();
        assert_eq!(derived, data);
    }

    #[test]
    fn empty_witness_list() {
        let data = ContractionData { l: diff("D"), witnesses: vec![] };
        let cp = contraction_params(&data).unwrap();
        assert_eq!((cp.mu_x, cp.xi_y, cp.eta_x), (0, 0, 0));
        assert_eq!(cp.c, vec![0]);
    }

    #[test]
    fn rejects_broken_identity() {
        let shift = |src: &str| parse_operator(AlgebraKind::ShiftX, src).unwrap();
        let data = ContractionData {
            l: shift("(x - 1)*y^2*S + (x - 1)*y^2"),
            witnesses: vec![Witness { l: shift("S^2 + 2*S"), p: parse_poly("x*y^2").unwrap(), big_p: shift("S") }],
        };
        assert!(matches!(data.validate(), Err(Error::Hypothesis { at, .. }) if at == "witnesses[0]"));
    }

    #[test]
    fn two_witness_syzygies() {
        // u₁ = 1/(x+y), u₂ = 1/(x+2y): the syzygy (x+y, −(x+2y)) fits the caps
        let shift = |src: &str| parse_operator(AlgebraKind::ShiftX, src).unwrap();
        let l = shift("(x + y - 1)*(x + 2*y - 1)*S + (x + y - 1)*(x + 2*y - 1)");
        let data =
            ContractionData::from_elements(l, &[shift("(x + 2*y)*(S^2 + S)"), shift("(x + y)*(S^2 + S)")]).unwrap();
        assert_eq!(data.witnesses[0].p, parse_poly("x + y").unwrap());
        assert_eq!(syzygy_dims(&data, 3), vec![0, 1, 1, 1]);
        let cp = contraction_params(&data).unwrap();
        assert_eq!((cp.mu_x, cp.mu_y, cp.xi_x, cp.xi_y), (2, 2, 2, 2));
    }
}
