//! Small dense linear algebra over the rationals.
//!
//! Used for subfield restriction, Gram-matrix inverses and similar bookkeeping
//! where the matrices are tiny and exactness is all that matters.

use num_traits::{One, Zero};

use crate::cyclo::Rational;

/// Row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = a.get(col, col).clone();
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                a.sub_row_multiple(r, col, &f);
                inv.sub_row_multiple(r, col, &f);
            }
        }
        Some(inv)
    }

    /// Solves `self * x = rhs`. Returns `None` if the system is inconsistent;
    /// free variables are set to zero.
    pub fn solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, rhs[r].clone());
        }
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            let Some(p) = (row..aug.rows).find(|&r| !aug.get(r, col).is_zero()) else {
                continue;
            };
            aug.swap_rows(p, row);
            let pv = aug.get(row, col).clone();
            aug.scale_row(row, &pv);
            for r in 0..aug.rows {
                if r != row && !aug.get(r, col).is_zero() {
                    let f = aug.get(r, col).clone();
                    aug.sub_row_multiple(r, row, &f);
                }
            }
            pivots.push(col);
            row += 1;
            if row == aug.rows {
                break;
            }
        }
        for r in row..aug.rows {
            if !aug.get(r, self.cols).is_zero() {
                return None;
            }
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, divisor: &Rational) {
        for c in 0..self.cols {
            let v = &self.data[r * self.cols + c] / divisor;
            self.data[r * self.cols + c] = v;
        }
    }

    fn sub_row_multiple(&mut self, target: usize, source: usize, factor: &Rational) {
        for c in 0..self.cols {
            let s = &self.data[source * self.cols + c];
            if s.is_zero() {
                continue;
            }
            let v = &self.data[target * self.cols + c] - s * factor;
            self.data[target * self.cols + c] = v;
        }
    }
}
