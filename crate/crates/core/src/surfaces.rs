//! Closed-form order-degree-height regions and the minimal-height queries
//! built on them.
//!
//! Each region is a predicate on `(r, d, h)` that guarantees the existence of
//! an operator of order `≤ r`, degree `≤ d` and height `≤ h` with some
//! property (common left multiple, telescoper, contraction-ideal element).
//! All arithmetic is over arbitrary-precision integers.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Cell, Components, SurfaceGrid};
use crate::ore::Shape;

/// Default upper end of the height scan.
pub const DEFAULT_H_CAP: u32 = 1000;

pub trait Region: Sync {
    fn contains(&self, r: u32, d: u32, h: u32) -> Result<bool>;
}

fn z(v: impl Into<BigInt>) -> BigInt {
    v.into()
}

/// Shapes `(r_ℓ, d_ℓ, h_ℓ)` of the operators whose common left multiples are sought.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LclmShapes(pub Vec<Shape>);

impl LclmShapes {
    pub fn new(shapes: Vec<Shape>) -> Result<Self> {
        if shapes.is_empty() {
            return Err(Error::Empty("list of operator shapes"));
        }
        Ok(LclmShapes(shapes))
    }

    /// The eight-term polynomial whose positivity is the region condition.
    pub fn surplus(&self, r: u32, d: u32, h: u32) -> BigInt {
        let (r1, d1, h1) = (z(r) + 1, z(d) + 1, z(h) + 1);
        let sum = |f: &dyn Fn(&Shape) -> u64| -> BigInt { self.0.iter().map(|s| z(f(s))).sum() };
        let (sr, sd, sh) = (sum(&|s| s.r.into()), sum(&|s| s.d.into()), sum(&|s| s.h.into()));
        let srd = sum(&|s| u64::from(s.r) * u64::from(s.d));
        let srh = sum(&|s| u64::from(s.r) * u64::from(s.h));
        let sdh = sum(&|s| u64::from(s.d) * u64::from(s.h));
        let srdh = sum(&|s| u64::from(s.r) * u64::from(s.d) * u64::from(s.h));
        &r1 * &d1 * &h1 - &r1 * &d1 * sh + &h1 * srd - &r1 * &h1 * sd + &d1 * srh - &d1 * &h1 * sr + &r1 * sdh - srdh
    }
}

impl Region for LclmShapes {
    fn contains(&self, r: u32, d: u32, h: u32) -> Result<bool> {
        Ok(self.surplus(r, d, h) > BigInt::zero())
    }
}

/// The seven structural parameters of a proper hypergeometric term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HyperParams {
    pub theta_x: u64,
    pub theta_y: u64,
    pub theta_k: u64,
    pub mu: u64,
    pub nu: u64,
    pub xi: u64,
    pub eta: u64,
}

impl HyperParams {
    /// The three bounds on the degrees of the certificate ansatz, or `None`
    /// when one of them is negative.
    pub fn y_bounds(&self, r: u32, d: u32, h: u32) -> [i64; 3] {
        let (r, d, h) = (i64::from(r), i64::from(d), i64::from(h));
        let p = |v: u64| v as i64;
        [
            d + p(self.theta_x) + r * p(self.mu) - p(self.nu),
            h + p(self.theta_y) + r * p(self.xi) - p(self.eta),
            p(self.theta_k) + r * p(self.mu) - p(self.nu),
        ]
    }

    pub fn surplus(&self, r: u32, d: u32, h: u32) -> BigInt {
        let (r, d, h) = (z(r), z(d), z(h));
        let (tx, ty, tk) = (z(self.theta_x), z(self.theta_y), z(self.theta_k));
        let (mu, nu, xi, eta) = (z(self.mu), z(self.nu), z(self.xi), z(self.eta));
        let rmu = &r * &mu;
        let first = (&r + 1) * (&d + 1) * (&h + 1);
        let second = (&d + 1 + &tx + &rmu) * (&tk + &rmu + 1) * &eta;
        let third = (&d + 2 + &tx + &tk + z(2) * &rmu - &nu) * (&h + 1 + &ty + &r * &xi - &eta) * &nu;
        first - second - third
    }
}

impl Region for HyperParams {
    fn contains(&self, r: u32, d: u32, h: u32) -> Result<bool> {
        Ok(self.y_bounds(r, d, h).iter().all(|&b| b >= 0) && self.surplus(r, d, h) > BigInt::zero())
    }
}

/// Per-summand data of a rational term: `a'_i`, degree `ϑ_i` and height `τ_i`
/// of `V_i`, and its order `ρ_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatSummandParams {
    pub a_prime: u64,
    pub theta: u64,
    pub tau: u64,
    pub rho: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatParams {
    pub degx_u: u64,
    pub degy_u: u64,
    pub summands: Vec<RatSummandParams>,
}

impl RatParams {
    pub fn surplus(&self, r: u32, d: u32, h: u32) -> BigInt {
        let dd = z(d) + 1 - z(self.degx_u);
        let hh = z(h) + 1 - z(self.degy_u);
        let s = &self.summands;
        let sum = |f: &dyn Fn(&RatSummandParams) -> u64| -> BigInt { s.iter().map(|p| z(f(p))).sum() };
        let s_att = sum(&|p| p.a_prime * p.theta * p.tau);
        let s_at = sum(&|p| p.a_prime * p.tau);
        let s_ath = sum(&|p| p.a_prime * p.theta);
        let s_a = sum(&|p| p.a_prime);
        (z(r) + 1) * &dd * &hh - s_att - &dd * s_at - &hh * s_ath - &dd * &hh * s_a
    }
}

impl Region for RatParams {
    fn contains(&self, r: u32, d: u32, h: u32) -> Result<bool> {
        Ok(u64::from(d) >= self.degx_u && u64::from(h) >= self.degy_u && self.surplus(r, d, h) > BigInt::zero())
    }
}

/// Per-witness data: `deg_∂ P_ℓ`, `λ_{x,ℓ}`, `λ_{y,ℓ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessParams {
    pub ord_p: u64,
    pub lambda_x: i64,
    pub lambda_y: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ContractionParams {
    pub ord_l: u64,
    pub degx_l: u64,
    pub degy_l: u64,
    pub witnesses: Vec<WitnessParams>,
    pub eta_x: i64,
    pub eta_y: i64,
    pub mu_x: i64,
    pub mu_y: i64,
    pub xi_x: i64,
    pub xi_y: i64,
    /// Syzygy dimensions `c_0, c_1, …`; the sequence is constant after its
    /// last entry and zero when empty.
    pub c: Vec<u64>,
}

impl ContractionParams {
    pub fn validate(&self) -> Result<()> {
        for (i, w) in self.witnesses.iter().enumerate() {
            if w.lambda_x <= 0 || w.lambda_y <= 0 {
                return Err(Error::hypothesis(
                    format!("witnesses[{i}]"),
                    format!("degree drop must be positive, got lambda = ({}, {})", w.lambda_x, w.lambda_y),
                ));
            }
        }
        Ok(())
    }

    pub fn c_at(&self, n: usize) -> u64 {
        self.c.get(n).or(self.c.last()).copied().unwrap_or(0)
    }

    /// Left side minus right side of the region inequality, or `None` when the
    /// order side conditions fail.
    pub fn surplus(&self, r: u32, d: u32, h: u32) -> Result<Option<BigInt>> {
        self.validate()?;
        let r64 = u64::from(r);
        if r64 < self.ord_l || self.witnesses.iter().any(|w| r64 < w.ord_p + self.ord_l) {
            return Ok(None);
        }
        let (r, d, h) = (z(r), z(d), z(h));
        let eta_x = std::cmp::max(z(self.eta_x), &d - z(self.degx_l) + 1);
        let eta_y = std::cmp::max(z(self.eta_y), &h - z(self.degy_l) + 1);
        let gx = &r * z(self.mu_x) - z(self.xi_x);
        let gy = &r * z(self.mu_y) - z(self.xi_y);
        let lam: BigInt = self.witnesses.iter().map(|w| z(w.lambda_x) * z(w.lambda_y)).sum();
        let inner = &eta_x * &eta_y + lam - (&eta_x + &gx) * (&eta_y + &gy)
            + (&d - z(self.degx_l) + 1 + &gx) * (&h - z(self.degy_l) + 1 + &gy);
        let lhs = (&r - z(self.ord_l) + 1) * inner;
        let weighted: BigInt = self
            .witnesses
            .iter()
            .map(|w| z(w.ord_p) * z(w.lambda_x) * z(w.lambda_y))
            .sum();
        let top = r64 - self.ord_l;
        let cmax = (0..=top as usize).map(|n| self.c_at(n)).max().unwrap_or(0);
        Ok(Some(lhs - weighted - z(cmax)))
    }
}

impl Region for ContractionParams {
    fn contains(&self, r: u32, d: u32, h: u32) -> Result<bool> {
        Ok(self.surplus(r, d, h)?.is_some_and(|s| s > BigInt::zero()))
    }
}

/// Smallest `h ≤ h_cap` in the region, by an upward scan (regions need not be
/// upward closed in `h`).
pub fn min_height<R: Region + ?Sized>(region: &R, r: u32, d: u32, h_cap: u32) -> Result<Option<u32>> {
    for h in 0..=h_cap {
        if region.contains(r, d, h)? {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// Predicted minimal heights over `r_range × d_range`, evaluated in parallel.
pub fn sweep<R: Region + ?Sized>(
    region: &R,
    r_range: RangeInclusive<u32>,
    d_range: RangeInclusive<u32>,
    h_cap: u32,
) -> Result<SurfaceGrid> {
    sweep_cells(r_range, d_range, Components::PRED, |r, d| min_height(region, r, d, h_cap))
}

/// Evaluates `f` on every cell in parallel and stores the value in the
/// component selected by `components` (predicted unless only the actual one
/// is requested). A resource-limit error leaves the cell absent with a note;
/// any other error aborts the sweep.
pub fn sweep_cells<F>(r_range: RangeInclusive<u32>, d_range: RangeInclusive<u32>, components: Components, f: F) -> Result<SurfaceGrid>
where
    F: Fn(u32, u32) -> Result<Option<u32>> + Sync,
{
    if r_range.is_empty() || d_range.is_empty() {
        return Err(Error::Empty("sweep range"));
    }
    let keys: Vec<(u32, u32)> = r_range.clone().flat_map(|r| d_range.clone().map(move |d| (r, d))).collect();
    let values: Vec<(Option<u32>, Option<String>)> = keys
        .par_iter()
        .map(|&(r, d)| match f(r, d) {
            Ok(v) => Ok((v, None)),
            Err(Error::ResourceLimit(why)) => Ok((None, Some(why))),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let mut grid = SurfaceGrid::new(r_range, d_range, components);
    let actual_only = components == Components::ACTUAL;
    for ((r, d), (v, note)) in keys.into_iter().zip(values) {
        let cell = if actual_only { Cell { actual: v, note, ..Cell::default() } } else { Cell { pred: v, note, ..Cell::default() } };
        grid.set(r, d, cell);
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex32() -> LclmShapes {
        LclmShapes::new(vec![Shape::new(2, 1, 1), Shape::new(1, 2, 1)]).unwrap()
    }

    fn ex46() -> HyperParams {
        HyperParams { theta_x: 0, theta_y: 0, theta_k: 1, mu: 1, nu: 2, xi: 2, eta: 3 }
    }

    fn ex410() -> RatParams {
        RatParams {
            degx_u: 1,
            degy_u: 1,
            summands: vec![RatSummandParams { a_prime: 3, theta: 1, tau: 3, rho: 1 }],
        }
    }

    fn threshold<R: Region>(reg: &R, r: u32, d: u32, u: u32) {
        assert!(reg.contains(r, d, u).unwrap(), "({r},{d},{u}) should be inside");
        assert!(!reg.contains(r, d, u - 1).unwrap(), "({r},{d},{}) should be outside", u - 1);
    }

    #[test]
    fn lclm_thresholds() {
        threshold(&ex32(), 3, 10, 15);
        threshold(&ex32(), 10, 4, 6);
        let trivial = LclmShapes::new(vec![Shape::new(0, 0, 0)]).unwrap();
        assert!(trivial.contains(0, 0, 0).unwrap());
        assert_eq!(min_height(&ex32(), 4, 5, DEFAULT_H_CAP).unwrap(), Some(31));
        assert!(LclmShapes::new(vec![]).is_err());
    }

    #[test]
    fn hyper_thresholds() {
        threshold(&ex46(), 2, 8, 158);
        threshold(&ex46(), 3, 9, 36);
        threshold(&ex46(), 9, 12, 24);
        assert_eq!(min_height(&ex46(), 6, 4, DEFAULT_H_CAP).unwrap(), Some(570));
        assert_eq!(min_height(&ex46(), 0, 12, DEFAULT_H_CAP).unwrap(), None);
    }

    #[test]
    fn rat_thresholds() {
        threshold(&ex410(), 6, 1, 19);
        threshold(&ex410(), 3, 5, 28);
        threshold(&ex410(), 12, 7, 2);
    }

    #[test]
    fn empty_contraction_data() {
        let p = ContractionParams::default();
        assert!(p.contains(0, 0, 0).unwrap());
    }

    #[test]
    fn contraction_rejects_nonpositive_drop() {
        let p = ContractionParams {
            witnesses: vec![WitnessParams { ord_p: 1, lambda_x: 0, lambda_y: 2 }],
            ..ContractionParams::default()
        };
        assert!(matches!(p.contains(3, 3, 3), Err(Error::Hypothesis { .. })));
    }

    #[test]
    fn zero_cap_gives_absent() {
        assert_eq!(min_height(&ex32(), 3, 10, 0).unwrap(), None);
    }

    #[test]
    fn lclm_region_symmetric_in_r_and_d() {
        let s = ex32();
        for r in 0..=20 {
            for d in 0..=20 {
                for h in 0..=20 {
                    assert_eq!(s.contains(r, d, h).unwrap(), s.contains(d, r, h).unwrap());
                }
            }
        }
    }

    #[test]
    fn min_height_stable_under_larger_cap() {
        for (r, d) in [(3, 10), (4, 5), (7, 7)] {
            let a = min_height(&ex32(), r, d, 100).unwrap();
            assert_eq!(a, min_height(&ex32(), r, d, 5000).unwrap());
        }
    }
}
