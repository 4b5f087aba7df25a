//! Exact dense linear algebra over [`Scalar`] fields.
//!
//! Rank comes from fraction-free (Bareiss) elimination on a copy whose rows
//! have been scaled to clear denominators, so intermediate entries stay
//! integral. Kernels and particular solutions use the reduced row echelon
//! form. Pivoting always takes the first nonzero entry, which makes every
//! output reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde_json::Value;

use crate::error::{invalid, Result};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<S: Scalar = Rational> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return invalid("ragged rows");
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix with an explicit shape, so `0 × c` matrices are
    /// expressible.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return invalid(format!("{} entries for a {rows}x{cols} matrix", data.len()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.cols {
            return invalid(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            ));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (a, b)| acc + &(a.clone() * b))
            })
            .collect())
    }

    pub fn scale_column(&self, j: usize, c: &S) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = m.get(i, j).clone() * c;
            m.set(i, j, v);
        }
        m
    }

    /// Appends `b` as an extra column.
    pub fn augment(&self, b: &[S]) -> Result<Self> {
        if b.len() != self.rows {
            return invalid(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            ));
        }
        let mut data = Vec::with_capacity(self.rows * (self.cols + 1));
        for (i, bi) in b.iter().enumerate() {
            data.extend_from_slice(self.row(i));
            data.push(bi.clone());
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols + 1,
            data,
        })
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array(self.row(i).iter().map(Scalar::to_json).collect()))
                .collect(),
        )
    }

    /// Exact rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        a.clear_row_denominators();
        a.bareiss_in_place().len()
    }

    fn clear_row_denominators(&mut self) {
        for i in 0..self.rows {
            let l = self
                .row(i)
                .iter()
                .filter(|x| !x.is_zero())
                .fold(BigInt::one(), |l, x| l.lcm(&x.denominator_lcm()));
            if !l.is_one() {
                for j in 0..self.cols {
                    let v = self.get(i, j).mul_int(&l);
                    self.set(i, j, v);
                }
            }
        }
    }

    /// Bareiss forward elimination; returns the pivot columns. Row `r` of the
    /// result holds the `r`-th pivot row.
    fn bareiss_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut prev = S::one();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, col).is_zero()) else {
                continue;
            };
            self.swap_rows(p, r);
            let piv = self.get(r, col).clone();
            for i in r + 1..self.rows {
                let lead = self.get(i, col).clone();
                for j in col + 1..self.cols {
                    let v = (piv.clone() * self.get(i, j) - lead.clone() * self.get(r, j)) / &prev;
                    self.set(i, j, v);
                }
                self.set(i, col, S::zero());
            }
            prev = piv;
            pivots.push(col);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        a.clear_row_denominators();
        let pivots = a.bareiss_in_place();
        for (r, &c) in pivots.iter().enumerate() {
            let inv = S::one() / a.get(r, c);
            for j in c..a.cols {
                let v = a.get(r, j).clone() * &inv;
                a.set(r, j, v);
            }
        }
        for (r, &c) in pivots.iter().enumerate().rev() {
            for i in 0..r {
                let f = a.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..a.cols {
                    let v = a.get(i, j).clone() - f.clone() * a.get(r, j);
                    a.set(i, j, v);
                }
            }
        }
        (a, pivots)
    }

    /// Basis of the right null space: one vector per free column, with that
    /// free variable set to 1, the others to 0, and the pivots solved.
    pub fn kernel_basis(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, f).clone();
                }
                v
            })
            .collect()
    }

    /// One solution of `self · x = b` with every free variable zero, or
    /// `None` when the system is inconsistent.
    pub fn solve_particular(&self, b: &[S]) -> Result<Option<Vec<S>>> {
        let aug = self.augment(b)?;
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![S::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }
}
