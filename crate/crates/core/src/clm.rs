//! Common left multiples of bounded shape.

use crate::budget::Budget;
use crate::contraction::ContractionIdeal;
use crate::error::{Error, Result};
use crate::linalg::{kernel_vector_in, SystemBuilder};
use crate::ore::{OrePoly, Shape};
use crate::poly::{MPoly, Monomial};
use crate::{PolyOp, RatOp};

#[derive(Clone, Debug, PartialEq)]
pub struct ClmProblem {
    pub ops: Vec<PolyOp>,
    pub target: Shape,
}

impl ClmProblem {
    pub fn new(ops: Vec<PolyOp>, target: Shape) -> Result<Self> {
        check_ops(&ops)?;
        Ok(ClmProblem { ops, target })
    }
}

fn check_ops(ops: &[PolyOp]) -> Result<()> {
    let first = ops.first().ok_or(Error::Empty("operator list"))?;
    if ops.iter().any(|o| o.kind() != first.kind()) {
        return Err(Error::MixedKinds);
    }
    if ops.iter().any(OrePoly::is_zero) {
        return Err(Error::ZeroOperator);
    }
    Ok(())
}

/// A common left multiple `L = M_1·L_1 = … = M_n·L_n` with polynomial
/// multipliers, found by a linear ansatz for the `M_ℓ` within the target shape.
pub fn clm_by_ansatz(p: &ClmProblem, budget: &Budget) -> Result<Option<(PolyOp, Vec<PolyOp>)>> {
    check_ops(&p.ops)?;
    let kind = p.ops[0].kind();
    let Shape { r, d, h } = p.target;
    let mut shapes = Vec::with_capacity(p.ops.len());
    for op in &p.ops {
        let s = op.shape()?;
        if s.r > r || s.d > d || s.h > h {
            return Ok(None);
        }
        shapes.push(Shape::new(r - s.r, d - s.d, h - s.h));
    }
    let size = |m: &Shape| (m.r as usize + 1) * (m.d as usize + 1) * (m.h as usize + 1);
    // M_1 occupies the last columns so that elimination leaves it free
    let mut blocks = vec![(0usize, shapes[0]); shapes.len()];
    let mut ncols = 0usize;
    for (l, m) in shapes.iter().enumerate().skip(1) {
        blocks[l] = (ncols, *m);
        ncols += size(m);
    }
    blocks[0].0 = ncols;
    ncols += size(&shapes[0]);
    let col = |off: usize, m: Shape, i: u32, j: u32, k: u32| {
        off + ((i as usize * (m.d as usize + 1) + j as usize) * (m.h as usize + 1)) + k as usize
    };

    // rows (ℓ, ∂-power, monomial) for M_ℓ·L_ℓ − M_1·L_1, ℓ ≥ 2
    let mut sys = SystemBuilder::new(ncols);
    for (l, (op, &(off, m))) in p.ops.iter().zip(&blocks).enumerate() {
        for i in 0..=m.r {
            let base = op.gen_pow_times(i as usize);
            for j in 0..=m.d {
                for k in 0..=m.h {
                    let c = col(off, m, i, j, k);
                    let shift = Monomial::new(j, k, 0);
                    for (t, coeff) in base.coeffs().iter().enumerate() {
                        for (mono, a) in coeff.terms() {
                            if l == 0 {
                                for other in 1..p.ops.len() {
                                    sys.add((other, t, mono.mul(shift)), c, -a.clone());
                                }
                            } else {
                                sys.add((l, t, mono.mul(shift)), c, a.clone());
                            }
                        }
                    }
                }
            }
        }
    }
    budget.check()?;
    let Some(v) = kernel_vector_in(&sys.build(), blocks[0].0..ncols, budget)? else {
        return Ok(None);
    };
    let multipliers: Vec<PolyOp> = blocks
        .iter()
        .map(|&(off, m)| {
            let coeffs = (0..=m.r)
                .map(|i| {
                    MPoly::from_terms(
                        (0..=m.d)
                            .flat_map(|j| (0..=m.h).map(move |k| (j, k)))
                            .map(|(j, k)| (Monomial::new(j, k, 0), v[col(off, m, i, j, k)].clone())),
                    )
                })
                .collect();
            OrePoly::new(kind, coeffs)
        })
        .collect();
    // M_1 ≠ 0 by the target restriction, and C(x,y)[∂] has no zero divisors,
    // so L = M_1·L_1 ≠ 0 and every M_ℓ is nonzero as well.
    let l = multipliers[0].mul(&p.ops[0])?;
    assert!(!l.is_zero());
    for (m, op) in multipliers.iter().zip(&p.ops) {
        assert_eq!(m.mul(op)?, l, "multipliers disagree");
        let (_, rem) = l.to_ratfun().right_divrem(&op.to_ratfun())?;
        assert!(rem.is_zero());
    }
    Ok(Some((l, multipliers)))
}

/// The monic least common left multiple over `C(x, y)`.
pub fn lclm(ops: &[PolyOp]) -> Result<RatOp> {
    check_ops(ops)?;
    let rat: Vec<RatOp> = ops.iter().map(OrePoly::to_ratfun).collect();
    OrePoly::lclm(&rat)
}

/// The ideal of common left multiples, prepared for orders up to `r_max`.
pub fn common_multiple_ideal(ops: &[PolyOp], r_max: u32) -> Result<ContractionIdeal> {
    ContractionIdeal::new(&lclm(ops)?, r_max)
}

/// Smallest `h ≤ h_cap` such that a nonzero common left multiple of shape
/// `≤ (r, d, h)` exists in `C[x,y][∂]`.
pub fn actual_min_height(ops: &[PolyOp], r: u32, d: u32, h_cap: u32, budget: &Budget) -> Result<Option<u32>> {
    common_multiple_ideal(ops, r)?.actual_min_height(r, d, h_cap, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ore::AlgebraKind;
    use crate::parse_operator;

    fn diff(src: &str) -> PolyOp {
        parse_operator(AlgebraKind::DiffX, src).unwrap()
    }

    #[test]
    fn single_operator() {
        let l1 = diff("x*D^2 + y*D - 1");
        let p = ClmProblem::new(vec![l1.clone()], Shape::new(3, 2, 1)).unwrap();
        let (l, ms) = clm_by_ansatz(&p, &Budget::unlimited()).unwrap().unwrap();
        assert_eq!(ms[0].mul(&l1).unwrap(), l);
    }

    #[test]
    fn target_below_orders() {
        let p = ClmProblem::new(vec![diff("D^2 + x"), diff("D - y")], Shape::new(1, 5, 5)).unwrap();
        assert!(clm_by_ansatz(&p, &Budget::unlimited()).unwrap().is_none());
    }

    #[test]
    fn mixed_kinds() {
        let s = parse_operator(AlgebraKind::ShiftX, "S").unwrap();
        assert!(matches!(ClmProblem::new(vec![diff("D"), s], Shape::new(1, 0, 0)), Err(Error::MixedKinds)));
    }

    #[test]
    fn derivation_alone() {
        let b = Budget::unlimited();
        assert_eq!(actual_min_height(&[diff("D")], 1, 0, 5, &b).unwrap(), Some(0));
        assert_eq!(actual_min_height(&[diff("D")], 0, 3, 5, &b).unwrap(), None);
    }

    #[test]
    fn two_first_order_operators() {
        // D − 1 and D − y: the lclm has order 2
        let ops = [diff("D - 1"), diff("D - y")];
        let b = Budget::unlimited();
        assert_eq!(actual_min_height(&ops, 1, 4, 4, &b).unwrap(), None);
        let h = actual_min_height(&ops, 2, 0, 4, &b).unwrap().unwrap();
        let p = ClmProblem::new(ops.to_vec(), Shape::new(2, 3, h + 3)).unwrap();
        let (l, _) = clm_by_ansatz(&p, &b).unwrap().unwrap();
        assert_eq!(l.shape().unwrap().r, 2);
    }
}
