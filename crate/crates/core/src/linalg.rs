//! Exact rational linear algebra: rank by Gaussian elimination and Schur
//! complements of symmetric positive semidefinite matrices.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::matrix::IntMatrix;

pub type Rational = BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Sub-matrix on the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out[(i, j)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// Converts to integers when every entry is integral.
    pub fn to_int(&self) -> Option<IntMatrix> {
        let mut out = IntMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let x = &self[(r, c)];
                if !x.is_integer() {
                    return None;
                }
                out[(r, c)] = i64::try_from(x.to_integer()).ok()?;
            }
        }
        Some(out)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            let Some(pivot) = (rank..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(pivot, rank);
            let inv = Rational::one() / a[(rank, col)].clone();
            for r in rank + 1..a.rows {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let factor = &a[(r, col)] * &inv;
                for c in col..a.cols {
                    if a[(rank, c)].is_zero() {
                        continue;
                    }
                    let delta = &factor * &a[(rank, c)];
                    a[(r, c)] -= delta;
                }
            }
            rank += 1;
            if rank == a.rows {
                break;
            }
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Generalized Schur complement of a symmetric positive semidefinite
    /// matrix onto the indices in `keep`, eliminating every other index with
    /// diagonal pivots. A zero pivot of a PSD matrix has a zero row and is
    /// skipped, so the result does not depend on the choice of g-inverse.
    pub fn psd_schur_complement(&self, keep: &[usize]) -> Self {
        debug_assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut kept = vec![false; n];
        for &k in keep {
            kept[k] = true;
        }
        let mut a = self.clone();
        let mut alive: Vec<bool> = vec![true; n];
        for e in (0..n).filter(|&e| !kept[e]) {
            alive[e] = false;
            let pivot = a[(e, e)].clone();
            let support: Vec<usize> = (0..n).filter(|&i| alive[i] && !a[(i, e)].is_zero()).collect();
            if pivot.is_zero() {
                debug_assert!(support.is_empty(), "matrix is not positive semidefinite");
                continue;
            }
            let inv = Rational::one() / pivot;
            let col: Vec<Rational> = support.iter().map(|&i| &a[(i, e)] * &inv).collect();
            for (ci, &i) in col.iter().zip(&support) {
                for &j in &support {
                    let delta = ci * &a[(e, j)];
                    a[(i, j)] -= delta;
                }
            }
        }
        a.select(keep, keep)
    }
}

impl From<&IntMatrix> for RatMatrix {
    fn from(m: &IntMatrix) -> Self {
        let mut out = Self::zeros(m.rows(), m.cols());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                out[(r, c)] = rational(m[(r, c)]);
            }
        }
        out
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;

    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

/// Exact rank of an integer matrix.
pub fn int_rank(m: &IntMatrix) -> usize {
    RatMatrix::from(m).rank()
}
