use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use num_traits::Zero;

use crate::field::{Field, Rat};
use crate::modp::PrimeField;

/// Homogeneous linear system with sparse exact rows.
#[derive(Clone, Debug, Default)]
pub struct SparseSystem {
    ncols: usize,
    rows: Vec<Vec<(u32, Rat)>>,
}

impl SparseSystem {
    pub fn new(ncols: usize) -> Self {
        SparseSystem { ncols, rows: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<(u32, Rat)>] {
        &self.rows
    }

    /// Adds the equation `Σ v·x_c = 0`; duplicate columns are summed and
    /// all-zero rows dropped.
    pub fn push_row(&mut self, mut entries: Vec<(u32, Rat)>) {
        entries.sort_by_key(|e| e.0);
        let mut row: Vec<(u32, Rat)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            assert!((c as usize) < self.ncols, "column out of range");
            match row.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => row.push((c, v)),
            }
        }
        row.retain(|e| !e.1.is_zero());
        if !row.is_empty() {
            self.rows.push(row);
        }
    }

    /// Images of the rows mod `p`; `None` if some entry has no image.
    pub fn residues(&self, pf: &PrimeField) -> Option<Vec<Vec<(u32, u64)>>> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(c, v)| v.residue(pf.modulus()).map(|r| (*c, r)))
                    .filter(|e| e.as_ref().map_or(true, |e| e.1 != 0))
                    .collect()
            })
            .collect()
    }

    /// Exact check that `v` solves every equation.
    pub fn is_solution(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ncols);
        self.rows.iter().all(|row| {
            row.iter()
                .filter(|(c, _)| !v[*c as usize].is_zero())
                .fold(Rat::zero(), |acc, (c, a)| acc + a * &v[*c as usize])
                .is_zero()
        })
    }
}

/// Assembles a [`SparseSystem`] column by column: every unknown contributes
/// values to equations identified by keys, and each key becomes one row.
/// Rows appear in key order, so assembly is deterministic.
#[derive(Clone, Debug)]
pub struct SystemBuilder<K> {
    ncols: usize,
    rows: BTreeMap<K, Vec<(u32, Rat)>>,
}

impl<K: Ord> SystemBuilder<K> {
    pub fn new(ncols: usize) -> Self {
        SystemBuilder { ncols, rows: BTreeMap::new() }
    }

    pub fn add(&mut self, key: K, col: usize, value: Rat) {
        if !value.is_zero() {
            self.rows.entry(key).or_default().push((col as u32, value));
        }
    }

    pub fn build(self) -> SparseSystem {
        let mut sys = SparseSystem::new(self.ncols);
        for (_, row) in self.rows {
            sys.push_row(row);
        }
        sys
    }
}

/// Row echelon form mod `p`. Every stored row starts with a 1 at its pivot
/// column; the pivot set equals that of the reduced echelon form.
#[derive(Clone, Debug)]
pub struct EchelonModP {
    pf: PrimeField,
    ncols: usize,
    pivot_of_col: Vec<u32>,
    rows: Vec<Vec<(u32, u64)>>,
    origins: Vec<usize>,
}

const NO_PIVOT: u32 = u32::MAX;

impl EchelonModP {
    /// Eliminates the given rows, shortest first.
    pub fn new(pf: PrimeField, ncols: usize, input: &[Vec<(u32, u64)>]) -> Self {
        let mut order: Vec<usize> = (0..input.len()).collect();
        order.sort_by_key(|&i| input[i].len());
        let mut e = EchelonModP {
            pf,
            ncols,
            pivot_of_col: vec![NO_PIVOT; ncols],
            rows: Vec::new(),
            origins: Vec::new(),
        };
        let mut acc = vec![0u64; ncols];
        let mut queued = vec![false; ncols];
        let mut heap = BinaryHeap::new();
        for i in order {
            if e.rows.len() == ncols {
                break;
            }
            e.insert(&input[i], i, &mut acc, &mut queued, &mut heap);
        }
        e
    }

    fn insert(
        &mut self,
        row: &[(u32, u64)],
        origin: usize,
        acc: &mut [u64],
        queued: &mut [bool],
        heap: &mut BinaryHeap<Reverse<u32>>,
    ) {
        let pf = self.pf;
        for &(c, v) in row {
            acc[c as usize] = v;
            queued[c as usize] = true;
            heap.push(Reverse(c));
        }
        while let Some(Reverse(c)) = heap.pop() {
            queued[c as usize] = false;
            let a = acc[c as usize];
            if a == 0 {
                continue;
            }
            let pi = self.pivot_of_col[c as usize];
            if pi == NO_PIVOT {
                // new pivot: collect the remaining entries in column order
                let inv = pf.inv(a);
                let mut out = vec![(c, 1)];
                acc[c as usize] = 0;
                while let Some(Reverse(cc)) = heap.pop() {
                    queued[cc as usize] = false;
                    let v = std::mem::take(&mut acc[cc as usize]);
                    if v != 0 {
                        out.push((cc, pf.mul(v, inv)));
                    }
                }
                self.pivot_of_col[c as usize] = self.rows.len() as u32;
                self.rows.push(out);
                self.origins.push(origin);
                return;
            }
            acc[c as usize] = 0;
            let neg = pf.neg(a);
            for &(cc, pv) in &self.rows[pi as usize][1..] {
                let slot = &mut acc[cc as usize];
                *slot = pf.mul_add(*slot, neg, pv);
                if !queued[cc as usize] {
                    queued[cc as usize] = true;
                    heap.push(Reverse(cc));
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivot_of_col[c] != NO_PIVOT
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.is_pivot(c)).collect()
    }

    /// Indices of the input rows that produced the pivot rows.
    pub fn origins(&self) -> &[usize] {
        &self.origins
    }

    pub fn first_free_in(&self, range: std::ops::Range<usize>) -> Option<usize> {
        range.into_iter().find(|&c| !self.is_pivot(c))
    }

    /// Kernel vector with a 1 at free column `f` and zeros at all other free columns.
    pub fn kernel_vector(&self, f: usize) -> Vec<u64> {
        assert!(!self.is_pivot(f));
        let pf = self.pf;
        let mut x = vec![0u64; self.ncols];
        x[f] = 1;
        for c in (0..f).rev() {
            let pi = self.pivot_of_col[c];
            if pi == NO_PIVOT {
                continue;
            }
            let mut s = 0u64;
            for &(cc, v) in &self.rows[pi as usize][1..] {
                let xv = x[cc as usize];
                if xv != 0 {
                    s = pf.mul_add(s, v, xv);
                }
            }
            x[c] = pf.neg(s);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use crate::linalg::dense::{nullspace, RatMatrix};
    use crate::modp::rat_residue;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matches_exact_kernel_mod_p(vals in prop::collection::vec(-2i64..=2, 36), cols in 4usize..=9) {
            let rows: Vec<Vec<_>> = vals.chunks(cols).filter(|c| c.len() == cols)
                .map(|c| c.iter().map(|&v| rat(v)).collect()).collect();
            let dense = RatMatrix::from_rows(cols, rows.clone());
            let mut sys = SparseSystem::new(cols);
            for r in &rows {
                sys.push_row(r.iter().enumerate().map(|(c, v)| (c as u32, v.clone())).collect());
            }
            let p = 2_147_483_647;
            let pf = PrimeField::new(p);
            let e = EchelonModP::new(pf, cols, &sys.residues(&pf).unwrap());
            let exact = nullspace(&dense);
            prop_assert_eq!(e.rank(), cols - exact.len());
            for v in exact {
                let f = v.iter().rposition(|q| !q.is_zero()).unwrap();
                let mine = e.kernel_vector(f);
                let img: Vec<u64> = v.iter().map(|q| rat_residue(q, p).unwrap()).collect();
                prop_assert_eq!(mine, img);
                prop_assert!(sys.is_solution(&v));
            }
        }
    }
}
