use std::ops::Range;

use super::sparse::{EchelonModP, SparseSystem};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::Rat;
use crate::modp::{primes, CrtVector, PrimeField};

/// Upper limit on the number of primes spent on one kernel vector.
const MAX_PRIMES: usize = 400;

/// Outcome of the first modular elimination of a system.
#[derive(Clone, Debug)]
pub struct ModularRank {
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Rank and pivot columns over a single large prime. The result is exact
/// unless the prime divides one of finitely many minors.
pub fn rank_mod_p(sys: &SparseSystem) -> ModularRank {
    for p in primes() {
        let pf = PrimeField::new(p);
        if let Some(rows) = sys.residues(&pf) {
            let e = EchelonModP::new(pf, sys.ncols(), &rows);
            return ModularRank {
                rank: e.rank(),
                pivots: e.pivots(),
            };
        }
    }
    unreachable!("prime supply exhausted")
}

/// Finds the kernel vector of `sys` attached to the first free column inside
/// `target`, i.e. the solution whose support in `target` ends as early as
/// possible, with a 1 there and zeros at every other free column.
///
/// `target` must be a trailing block of columns. Pivots are then taken as
/// far left as possible, so `Ok(None)`, returned when every column of
/// `target` is a pivot, means that no nonzero solution has a nonzero
/// `target` block. That negative answer rests on two independent primes;
/// positive answers are verified exactly.
pub fn kernel_vector_in(sys: &SparseSystem, target: Range<usize>, budget: &Budget) -> Result<Option<Vec<Rat>>> {
    let n = sys.ncols();
    assert_eq!(target.end, n, "target must be the trailing block of columns");
    if target.is_empty() {
        return Ok(None);
    }
    let mut ps = primes();
    let mut next_field = |sys: &SparseSystem| -> Result<(PrimeField, Vec<Vec<(u32, u64)>>)> {
        loop {
            let p = ps.next().ok_or_else(|| Error::ResourceLimit("prime supply exhausted".into()))?;
            let pf = PrimeField::new(p);
            if let Some(rows) = sys.residues(&pf) {
                return Ok((pf, rows));
            }
        }
    };

    // Two unrestricted eliminations guard against an unlucky first prime.
    let (pf1, rows) = next_field(sys)?;
    let e1 = EchelonModP::new(pf1, n, &rows);
    budget.check()?;
    let (pf2, rows) = next_field(sys)?;
    let e2 = EchelonModP::new(pf2, n, &rows);
    budget.check()?;
    let (p1, p2) = (e1.pivots(), e2.pivots());
    let (reference, first) = if better(&p2, &p1) { (e2, pf2) } else { (e1, pf1) };
    let pivots = reference.pivots();
    let Some(f) = reference.first_free_in(target) else {
        return Ok(None);
    };
    let keep: Vec<usize> = {
        let mut k = reference.origins().to_vec();
        k.sort_unstable();
        k
    };
    let restricted = SparseSystem::clone_rows(sys, &keep);

    let mut crt = CrtVector::new(&reference.kernel_vector(f), first.modulus());
    let mut last: Option<Vec<Rat>> = None;
    for _ in 0..MAX_PRIMES {
        if let Some(v) = crt.reconstruct() {
            if last.as_ref() == Some(&v) && sys.is_solution(&v) {
                return Ok(Some(v));
            }
            last = Some(v);
        }
        budget.check()?;
        let (pf, rows) = next_field(&restricted)?;
        let e = EchelonModP::new(pf, n, &rows);
        if e.pivots() != pivots {
            // unlucky prime: the reference pivot set is the generic one
            continue;
        }
        crt.absorb(&e.kernel_vector(f), pf.modulus());
    }
    Err(Error::ResourceLimit(format!("kernel vector not stabilized after {MAX_PRIMES} primes")))
}

/// Generic pivot sets have maximal rank and are lexicographically smallest.
fn better(a: &[usize], b: &[usize]) -> bool {
    a.len() > b.len() || (a.len() == b.len() && a < b)
}

impl SparseSystem {
    fn clone_rows(sys: &SparseSystem, keep: &[usize]) -> SparseSystem {
        let mut out = SparseSystem::new(sys.ncols());
        for &i in keep {
            out.push_row(sys.rows()[i].clone());
        }
        out
    }
}
