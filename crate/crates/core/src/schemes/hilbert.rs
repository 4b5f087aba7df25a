use std::fmt;

use num_traits::Zero;
use serde_json::Value;

use super::algebra::FiniteLocalAlgebra;
use crate::linalg::Matrix;
use crate::scalar::{Rational, Scalar};

/// `H(i) = dim m^i / m^{i+1}`, with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HilbertFn(Vec<usize>);

impl HilbertFn {
    pub fn new(mut values: Vec<usize>) -> Self {
        while values.last() == Some(&0) {
            values.pop();
        }
        Self(values)
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn length(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_palindrome(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    pub fn to_json(&self) -> Value {
        Value::from(self.0.clone())
    }
}

impl fmt::Display for HilbertFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", v.join(","))
    }
}

/// Computes dimensions of `m^i` by repeatedly multiplying a spanning set of
/// `m^i` by the basis of `m`.
pub fn hilbert_function(alg: &FiniteLocalAlgebra) -> HilbertFn {
    let d = alg.dim();
    let m: Vec<usize> = (1..d).collect();
    let mut dims = vec![d];
    // Spanning set of the current power, as coefficient vectors.
    let mut current: Vec<Vec<Rational>> = m.iter().map(|&i| unit(d, i)).collect();
    loop {
        let basis = row_basis(&current, d);
        dims.push(basis.len());
        if basis.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for v in &basis {
            for &g in &m {
                let mut w = vec![Rational::from_i64(0); d];
                for (i, c) in v.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if let Some(p) = alg.product_index(g, i) {
                        w[p] += c;
                    }
                }
                if w.iter().any(|x| !x.is_zero()) {
                    next.push(w);
                }
            }
        }
        current = next;
    }
    HilbertFn::new(dims.windows(2).map(|w| w[0] - w[1]).collect())
}

fn unit(d: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::from_i64(0); d];
    v[i] = Rational::from_i64(1);
    v
}

fn row_basis(rows: &[Vec<Rational>], d: usize) -> Vec<Vec<Rational>> {
    let m = Matrix::from_vec(rows.len(), d, rows.concat()).expect("rows have length d");
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Indices (1–6) of the structural properties that fail for `h` as the
/// Hilbert function of a scheme of length `len`:
///
/// 1. zeros are terminal;
/// 2. `H(0) = 1`;
/// 3. finite support (always true for a finite sequence);
/// 4. `Σ H(i) = len`;
/// 5. the last nonzero value is 1, checked only when `gorenstein`;
/// 6. `H(1) = 1` forces `H(i) ≤ 1` everywhere.
pub fn check_hilbert_properties(h: &HilbertFn, len: usize, gorenstein: bool) -> Vec<u8> {
    let v = h.values();
    let mut bad = Vec::new();
    if let Some(z) = v.iter().position(|&x| x == 0) {
        if v[z..].iter().any(|&x| x != 0) {
            bad.push(1);
        }
    }
    if h.get(0) != 1 {
        bad.push(2);
    }
    if h.length() != len {
        bad.push(4);
    }
    if gorenstein && v.last() != Some(&1) {
        bad.push(5);
    }
    if h.get(1) == 1 && v.iter().any(|&x| x > 1) {
        bad.push(6);
    }
    bad
}
