use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{invalid, Error, Result};
use crate::poly::{enumerate_monomials, Monomial, Polynomial};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AlgebraKind {
    /// `C[x]/(x^k)`.
    Curvilinear(usize),
    /// `C[x,y]/(xy, x^{k−2} − y²)`, `k ≥ 4`.
    Special(usize),
    /// `C[x_1..x_n]` modulo a monomial ideal.
    MonomialQuotient(Vec<Monomial>),
}

/// A finite local algebra with a monomial normal-form basis whose first
/// element is `1`. Every product of basis elements is either zero or another
/// basis element, so multiplication is stored as a table of indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteLocalAlgebra {
    kind: AlgebraKind,
    nvars: usize,
    basis: Vec<Monomial>,
    table: Vec<Option<usize>>,
}

impl FiniteLocalAlgebra {
    pub fn curvilinear(k: usize) -> Result<Self> {
        if k == 0 {
            return invalid("curvilinear algebras need length k >= 1");
        }
        let basis: Vec<Monomial> = (0..k as u32).map(|e| Monomial::new(vec![e])).collect();
        Ok(Self::build(
            AlgebraKind::Curvilinear(k),
            1,
            basis,
            |a, b| {
                let e = a.exponents()[0] + b.exponents()[0];
                ((e as usize) < k).then(|| Monomial::new(vec![e]))
            },
        ))
    }

    pub fn special(k: usize) -> Result<Self> {
        if k < 4 {
            return invalid(format!("special algebras need k >= 4, got {k}"));
        }
        let top = (k - 2) as u32;
        let mut basis: Vec<Monomial> = (0..=top).map(|e| Monomial::new(vec![e, 0])).collect();
        basis.push(Monomial::new(vec![0, 1]));
        Ok(Self::build(AlgebraKind::Special(k), 2, basis, |a, b| {
            let m = a.mul(b);
            match *m.exponents() {
                [e, 0] if e <= top => Some(m),
                [0, 1] => Some(m),
                [0, 2] => Some(Monomial::new(vec![top, 0])),
                _ => None,
            }
        }))
    }

    /// Errors with `NotFinite` unless every variable has a pure power among
    /// the generators.
    pub fn monomial_quotient(nvars: usize, generators: Vec<Monomial>) -> Result<Self> {
        if nvars == 0 {
            return invalid("monomial quotients need at least one variable");
        }
        if generators.iter().any(|g| g.nvars() != nvars) {
            return invalid("generator in the wrong number of variables");
        }
        if generators.iter().any(|g| g.degree() == 0) {
            return invalid("the ideal must lie in the maximal ideal");
        }
        let mut bound = 0;
        for i in 0..nvars {
            let e = generators
                .iter()
                .filter(|g| g.is_pure_power() && g.exponents()[i] > 0)
                .map(|g| g.exponents()[i])
                .min()
                .ok_or_else(|| {
                    Error::NotFinite(format!("no power of x{} lies in the ideal", i + 1))
                })?;
            bound += e - 1;
        }
        let in_ideal = |m: &Monomial| generators.iter().any(|g| g.divides(m));
        let basis: Vec<Monomial> = enumerate_monomials(nvars, bound)?
            .into_iter()
            .filter(|m| !in_ideal(m))
            .collect();
        let kind = AlgebraKind::MonomialQuotient(generators.clone());
        Ok(Self::build(kind, nvars, basis, |a, b| {
            let m = a.mul(b);
            (!in_ideal(&m)).then_some(m)
        }))
    }

    fn build(
        kind: AlgebraKind,
        nvars: usize,
        basis: Vec<Monomial>,
        mul: impl Fn(&Monomial, &Monomial) -> Option<Monomial>,
    ) -> Self {
        let dim = basis.len();
        let mut table = Vec::with_capacity(dim * dim);
        for a in &basis {
            for b in &basis {
                table.push(mul(a, b).map(|m| {
                    basis
                        .iter()
                        .position(|x| *x == m)
                        .expect("normal form stays in the basis")
                }));
            }
        }
        Self {
            kind,
            nvars,
            basis,
            table,
        }
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Variables of the presentation: 1 for curvilinear, 2 for special.
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn product_index(&self, i: usize, j: usize) -> Option<usize> {
        self.table[i * self.dim() + j]
    }

    /// Indices of the basis monomials of degree one.
    pub fn linear_indices(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.basis[i].degree() == 1)
            .collect()
    }

    pub fn one<S: Scalar>(&self) -> AlgebraElement<S> {
        self.basis_element(0)
    }

    pub fn basis_element<S: Scalar>(&self, i: usize) -> AlgebraElement<S> {
        let mut c = vec![S::zero(); self.dim()];
        c[i] = S::one();
        AlgebraElement { coeffs: c }
    }

    /// The class of the `i`-th presentation variable (`x`, `y`, or `x_i`).
    pub fn generator<S: Scalar>(&self, i: usize) -> Result<AlgebraElement<S>> {
        if i >= self.nvars {
            return invalid(format!("generator {i} out of range"));
        }
        let v = Monomial::var(self.nvars, i);
        Ok(match self.basis.iter().position(|m| *m == v) {
            Some(p) => self.basis_element(p),
            None => AlgebraElement::zero(self.dim()),
        })
    }

    fn var_names(&self) -> Vec<String> {
        match self.kind {
            AlgebraKind::Curvilinear(_) => vec!["x".into()],
            AlgebraKind::Special(_) => vec!["x".into(), "y".into()],
            AlgebraKind::MonomialQuotient(_) => (1..=self.nvars).map(|i| format!("x{i}")).collect(),
        }
    }

    pub fn format_element<S: Scalar>(&self, a: &AlgebraElement<S>) -> String {
        let names = self.var_names();
        let mut parts = Vec::new();
        for (c, m) in a.coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            let mono: Vec<String> = m
                .exponents()
                .iter()
                .zip(&names)
                .filter(|(e, _)| **e > 0)
                .map(|(e, v)| {
                    if *e == 1 {
                        v.clone()
                    } else {
                        format!("{v}^{e}")
                    }
                })
                .collect();
            parts.push(match (c.is_one(), mono.is_empty()) {
                (_, true) => format!("{c}"),
                (true, false) => mono.join("*"),
                (false, false) => format!("({c})*{}", mono.join("*")),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl FromStr for FiniteLocalAlgebra {
    type Err = Error;

    /// `curvilinear:K`, `special:K`, or `monomial:g1,g2,…` with monomials
    /// written like `x1^2*x2`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected kind:argument, got {s:?}")))?;
        let int = |a: &str| {
            a.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad length {a:?}")))
        };
        match kind.trim() {
            "curvilinear" => Self::curvilinear(int(arg)?),
            "special" => Self::special(int(arg)?),
            "monomial" => {
                let polys = arg
                    .split(',')
                    .map(|g| Polynomial::parse(g, None))
                    .collect::<Result<Vec<_>>>()?;
                let n = polys.iter().map(Polynomial::nvars).max().unwrap_or(1);
                let gens = arg
                    .split(',')
                    .map(|g| {
                        let p = Polynomial::parse(g, Some(n))?;
                        let m = match p.terms().next() {
                            Some((m, c)) if p.num_terms() == 1 && c.is_one() => Some(m.clone()),
                            _ => None,
                        };
                        m.ok_or_else(|| Error::Parse(format!("{g:?} is not a monomial")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::monomial_quotient(n, gens)
            }
            other => Err(Error::Parse(format!("unknown algebra kind {other:?}"))),
        }
    }
}

impl fmt::Display for FiniteLocalAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            AlgebraKind::Curvilinear(k) => write!(f, "curvilinear:{k}"),
            AlgebraKind::Special(k) => write!(f, "special:{k}"),
            AlgebraKind::MonomialQuotient(gens) => {
                let g: Vec<String> = gens
                    .iter()
                    .map(|m| {
                        Polynomial::<Rational>::from_monomial(m.clone(), Rational::from_i64(1))
                            .to_string()
                    })
                    .collect();
                write!(f, "monomial:{}", g.join(","))
            }
        }
    }
}

/// Coordinates over the normal-form basis of an algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraElement<S: Scalar = Rational> {
    coeffs: Vec<S>,
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        Self { coeffs }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            coeffs: vec![S::zero(); dim],
        }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(Scalar::to_json).collect())
    }
}

pub fn algebra_mul<S: Scalar>(
    alg: &FiniteLocalAlgebra,
    a: &AlgebraElement<S>,
    b: &AlgebraElement<S>,
) -> Result<AlgebraElement<S>> {
    let d = alg.dim();
    if a.coeffs.len() != d || b.coeffs.len() != d {
        return invalid(format!(
            "elements of length {} and {} in an algebra of dimension {d}",
            a.coeffs.len(),
            b.coeffs.len()
        ));
    }
    let mut out = vec![S::zero(); d];
    for (i, ai) in a.coeffs.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            if let Some(p) = alg.product_index(i, j) {
                out[p] = out[p].clone() + &(ai.clone() * bj);
            }
        }
    }
    Ok(AlgebraElement { coeffs: out })
}

/// An algebra homomorphism `C[x_1..x_n] → A` given by the images of the
/// variables, each in the maximal ideal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Embedding<S: Scalar = Rational> {
    algebra: FiniteLocalAlgebra,
    images: Vec<AlgebraElement<S>>,
}

impl<S: Scalar> Embedding<S> {
    pub fn new(algebra: FiniteLocalAlgebra, images: Vec<AlgebraElement<S>>) -> Result<Self> {
        if images.is_empty() {
            return invalid("an embedding needs at least one variable");
        }
        for (i, im) in images.iter().enumerate() {
            if im.coeffs.len() != algebra.dim() {
                return invalid(format!("image {i} has the wrong length"));
            }
            if !im.coeffs[0].is_zero() {
                return invalid(format!("image {i} has a nonzero constant term"));
            }
        }
        Ok(Self { algebra, images })
    }

    pub fn algebra(&self) -> &FiniteLocalAlgebra {
        &self.algebra
    }

    pub fn images(&self) -> &[AlgebraElement<S>] {
        &self.images
    }

    pub fn nvars(&self) -> usize {
        self.images.len()
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "algebra": self.algebra.to_string(),
            "images": self.images.iter().map(AlgebraElement::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Evaluates `p` at the images of the embedding.
pub fn push_polynomial<S: Scalar>(e: &Embedding<S>, p: &Polynomial) -> Result<AlgebraElement<S>> {
    if p.nvars() != e.nvars() {
        return invalid(format!(
            "polynomial in {} variables pushed through an embedding of {}",
            p.nvars(),
            e.nvars()
        ));
    }
    let alg = &e.algebra;
    let d = alg.dim();
    // powers[i][j] = image_i^j; images are nilpotent, so j < d suffices.
    let max_exp: Vec<u32> = (0..e.nvars())
        .map(|i| p.terms().map(|(m, _)| m.exponents()[i]).max().unwrap_or(0))
        .collect();
    let mut powers: Vec<Vec<AlgebraElement<S>>> = Vec::with_capacity(e.nvars());
    for (im, &top) in e.images.iter().zip(&max_exp) {
        let top = (top as usize).min(d);
        let mut pw = vec![alg.one::<S>()];
        for j in 1..=top {
            let next = algebra_mul(alg, &pw[j - 1], im)?;
            pw.push(next);
        }
        powers.push(pw);
    }
    let mut out = AlgebraElement::zero(d);
    for (m, c) in p.terms() {
        let mut acc = alg.one::<S>().scale(&S::from_rational(c));
        for (i, &ex) in m.exponents().iter().enumerate() {
            let ex = ex as usize;
            if ex == 0 {
                continue;
            }
            if ex >= powers[i].len() {
                acc = AlgebraElement::zero(d);
                break;
            }
            acc = algebra_mul(alg, &acc, &powers[i][ex])?;
        }
        out = out.add(&acc);
    }
    Ok(out)
}
