use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::field::{Field, Rat};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RatMatrix = Matrix<Rat>;

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    /// Builds a matrix from equally long rows; `cols` is needed for the empty case.
    pub fn from_rows(cols: usize, rows: Vec<Vec<T>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc.add_ref(&a.mul_ref(b)))
            })
            .collect()
    }

    /// Reduced row echelon form by Gauss-Jordan elimination; returns the
    /// reduced matrix and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = T::one().div_ref(m.get(r, c));
            for j in c..m.cols {
                let v = m.get(r, j).mul_ref(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j).sub_ref(&f.mul_ref(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Kernel basis: one vector per free column `f`, with a 1 at `f`, zeros at
    /// the other free columns, and pivot entries determined by the system.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        kernel_from_rref(self.cols, &pivots, |i, j| r.get(i, j).clone())
    }
}

fn kernel_from_rref<T: Field>(cols: usize, pivots: &[usize], entry: impl Fn(usize, usize) -> T) -> Vec<Vec<T>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![T::zero(); cols];
            v[f] = T::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -entry(i, f);
            }
            v
        })
        .collect()
}

/// Integer matrix after clearing each row's denominators.
fn integer_rows(m: &RatMatrix) -> Vec<Vec<BigInt>> {
    (0..m.nrows())
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect()
}

/// Fraction-free (Bareiss) forward elimination; returns the echelon rows and
/// their pivot columns.
fn bareiss(m: &RatMatrix) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut a = integer_rows(m);
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Exact rank via fraction-free elimination.
pub fn rank(m: &RatMatrix) -> usize {
    bareiss(m).1.len()
}

/// Right-kernel basis in the reduced-echelon identity pattern (see
/// [`Matrix::nullspace`]), computed by fraction-free elimination followed by
/// exact back substitution.
pub fn nullspace(m: &RatMatrix) -> Vec<Vec<Rat>> {
    let (e, pivots) = bareiss(m);
    let cols = m.ncols();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (i, &p) in pivots.iter().enumerate().rev() {
                let mut s = Rat::zero();
                for j in p + 1..cols {
                    if !v[j].is_zero() && !e[i][j].is_zero() {
                        s += &v[j] * Rat::from_integer(e[i][j].clone());
                    }
                }
                v[p] = -s / Rat::from_integer(e[i][p].clone());
            }
            v
        })
        .collect()
}

/// Scales a nonzero rational vector to coprime integers with a positive first
/// nonzero entry.
pub fn primitive_integer_vector(v: &[Rat]) -> Vec<Rat> {
    let s = Rat::normalizer(v.iter().filter(|q| !q.is_zero()));
    v.iter().map(|q| q / &s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, ratio};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect())
    }

    #[test]
    fn small_kernels() {
        assert_eq!(nullspace(&m(&[&[1, 1]])), vec![vec![rat(-1), rat(1)]]);
        assert!(nullspace(&RatMatrix::identity(2)).is_empty());
        assert_eq!(nullspace(&RatMatrix::zeros(3, 4)).len(), 4);
        assert_eq!(rank(&RatMatrix::identity(5)), 5);
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&RatMatrix::zeros(0, 3)), 0);
    }

    #[test]
    fn bareiss_handles_fractions() {
        let a = Matrix::from_rows(3, vec![vec![ratio(1, 2), ratio(1, 3), rat(0)], vec![rat(3), rat(2), rat(0)]]);
        let k = nullspace(&a);
        assert_eq!(k, vec![vec![ratio(-2, 3), rat(1), rat(0)], vec![rat(0), rat(0), rat(1)]]);
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = RatMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            prop::collection::vec((-3i64..=3, 1i64..=4), r * c).prop_map(move |vals| {
                let rows = vals
                    .chunks(c)
                    .map(|ch| ch.iter().map(|&(n, d)| if n.abs() > 1 { ratio(n, d) } else { rat(0) }).collect())
                    .collect();
                Matrix::from_rows(c, rows)
            })
        })
    }

    proptest! {
        #[test]
        fn kernel_vectors_annihilate(a in arb_matrix(7)) {
            for v in nullspace(&a) {
                prop_assert!(a.mul_vec(&v).iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn bareiss_agrees_with_gauss_jordan(a in arb_matrix(7)) {
            prop_assert_eq!(nullspace(&a), a.nullspace());
            prop_assert_eq!(rank(&a), a.rank());
        }
    }
}
