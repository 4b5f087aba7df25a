//! Macaulay duality by contraction.
//!
//! Operators are polynomials in `x_1..x_n` acting on dual polynomials in
//! `y_1..y_n` as differential operators: `x^a ∘ y^b = b!/(b−a)! · y^{b−a}`
//! when `a ≤ b`, and zero otherwise. Both sides are stored as [`Polynomial`]s
//! over the same number of variables.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::hilbert::HilbertFn;
use crate::error::{invalid, Result};
use crate::linalg::Matrix;
use crate::poly::{enumerate_monomials, monomials_of_degree, Monomial, Polynomial};
use crate::scalar::Rational;

fn falling(b: u32, a: u32) -> BigInt {
    (b - a + 1..=b).fold(BigInt::one(), |acc, t| acc * BigInt::from(t))
}

fn contract_monomial(op: &Monomial, f: &Monomial) -> Option<(Monomial, BigInt)> {
    if !op.divides(f) {
        return None;
    }
    let mut c = BigInt::one();
    let mut e = Vec::with_capacity(f.nvars());
    for (&a, &b) in op.exponents().iter().zip(f.exponents()) {
        c *= falling(b, a);
        e.push(b - a);
    }
    Some((Monomial::new(e), c))
}

pub fn contract(op: &Polynomial, f: &Polynomial) -> Result<Polynomial> {
    if op.nvars() != f.nvars() {
        return invalid("operator and dual polynomial must share the variable count");
    }
    let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
    for (a, ca) in op.terms() {
        for (b, cb) in f.terms() {
            if let Some((m, c)) = contract_monomial(a, b) {
                *acc.entry(m).or_insert_with(Rational::zero) += ca * cb * Rational::from_integer(c);
            }
        }
    }
    Polynomial::from_terms(f.nvars(), acc)
}

/// Columns: operators `cols`; rows: coefficients of the contractions over
/// `targets`.
fn contraction_matrix(cols: &[Monomial], targets: &[Monomial], f: &Polynomial) -> Matrix {
    let index: BTreeMap<&Monomial, usize> =
        targets.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut m = Matrix::<Rational>::zeros(targets.len(), cols.len());
    for (j, op) in cols.iter().enumerate() {
        for (b, cb) in f.terms() {
            if let Some((t, c)) = contract_monomial(op, b) {
                let i = index[&t];
                let v = m.get(i, j).clone() + cb * Rational::from_integer(c);
                m.set(i, j, v);
            }
        }
    }
    m
}

fn to_polynomial(n: usize, monos: &[Monomial], coeffs: &[Rational]) -> Polynomial {
    Polynomial::from_terms(
        n,
        monos
            .iter()
            .cloned()
            .zip(coeffs.iter().cloned())
            .filter(|(_, c)| !c.is_zero()),
    )
    .expect("monomials share n")
}

fn coefficient_row(p: &Polynomial, monos: &[Monomial]) -> Vec<Rational> {
    monos.iter().map(|m| p.coeff(m)).collect()
}

/// Span of `{ x^a · g : g ∈ gens, deg(x^a · g) ≤ d }` as coefficient rows
/// over `monos` (all monomials of degree ≤ `d`).
fn truncated_ideal_rows(
    gens: &[Polynomial],
    n: usize,
    d: u32,
    monos: &[Monomial],
) -> Vec<Vec<Rational>> {
    let mut rows = Vec::new();
    for g in gens {
        let Some(dg) = g.degree() else { continue };
        if dg > d {
            continue;
        }
        for m in enumerate_monomials(n, d - dg).expect("n >= 1") {
            rows.push(coefficient_row(
                &g.mul(&Polynomial::from_monomial(m, Rational::one())),
                monos,
            ));
        }
    }
    rows
}

fn rank_of(rows: &[Vec<Rational>], cols: usize) -> usize {
    Matrix::from_vec(rows.len(), cols, rows.concat())
        .expect("rows have uniform length")
        .rank()
}

/// Generators of `Ann(f)` up to degree `deg f + 1`, each scaled to leading
/// coefficient 1.
///
/// Degree by degree, the kernel of contraction on operators of degree `≤ d`
/// is computed and a kernel vector is kept only if it lies outside the span of
/// the multiples of the generators kept so far (truncated at degree `d`). For
/// homogeneous `f` this gives a minimal generating set; for inhomogeneous `f`
/// the truncated membership test is approximate and may retain redundant
/// generators. Degree `deg f + 1` suffices since every operator of higher
/// degree kills `f`.
pub fn apolar_annihilator(f: &Polynomial) -> Result<Vec<Polynomial>> {
    let Some(df) = f.degree() else {
        return invalid("the dual socle generator must be nonzero");
    };
    let n = f.nvars();
    let targets = enumerate_monomials(n, df)?;
    let mut gens: Vec<Polynomial> = Vec::new();
    for d in 0..=df + 1 {
        let monos = enumerate_monomials(n, d)?;
        let kernel = contraction_matrix(&monos, &targets, f).kernel_basis();
        let mut span = truncated_ideal_rows(&gens, n, d, &monos);
        let mut rank = rank_of(&span, monos.len());
        for v in kernel {
            span.push(v.clone());
            let r = rank_of(&span, monos.len());
            if r == rank {
                span.pop();
                continue;
            }
            rank = r;
            let g = to_polynomial(n, &monos, &v);
            let lead = g.coeff(g.leading_monomial().expect("kernel vectors are nonzero"));
            gens.push(g.scale(&(Rational::one() / lead)));
        }
    }
    Ok(gens)
}

/// Catalecticant ranks of a form `f` of degree `d`: `H(i)` is the rank of
/// contraction from degree-`i` operators into degree `d − i` forms.
pub fn apolar_hilbert(f: &Polynomial) -> Result<HilbertFn> {
    let Some(d) = f.degree() else {
        return invalid("the dual socle generator must be nonzero");
    };
    if !f.is_homogeneous() {
        return invalid("apolar Hilbert functions need a homogeneous form");
    }
    let n = f.nvars();
    let values = (0..=d)
        .map(|i| {
            contraction_matrix(
                &monomials_of_degree(n, i),
                &monomials_of_degree(n, d - i),
                f,
            )
            .rank()
        })
        .collect();
    Ok(HilbertFn::new(values))
}

/// Dimension of the span of `f` and all its contractions, i.e. the length of
/// the apolar algebra.
pub fn contraction_span_dim(f: &Polynomial) -> Result<usize> {
    let Some(d) = f.degree() else {
        return invalid("the dual socle generator must be nonzero");
    };
    let monos = enumerate_monomials(f.nvars(), d)?;
    Ok(contraction_matrix(&monos, &monos, f).rank())
}

/// `dim C[x]_{≤d} / I_{≤d}` where `I_{≤d}` is spanned by the multiples of
/// `gens` of degree at most `d`. Equals the quotient dimension once `d`
/// exceeds the socle degree of a homogeneous ideal.
pub fn quotient_dimension(gens: &[Polynomial], n: usize, d: u32) -> Result<usize> {
    if gens.iter().any(|g| g.nvars() != n) {
        return invalid("generators in the wrong number of variables");
    }
    let monos = enumerate_monomials(n, d)?;
    let rows = truncated_ideal_rows(gens, n, d, &monos);
    Ok(monos.len() - rank_of(&rows, monos.len()))
}
