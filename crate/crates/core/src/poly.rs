//! Sparse multivariate polynomials with exact coefficients.
//!
//! Monomials are exponent vectors compared in graded lexicographic order with
//! `x_1 > x_2 > … > x_n`. Polynomials store only nonzero coefficients, so the
//! zero polynomial has no terms.

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::scalar::{parse_rational, Rational, Scalar};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    /// `x_i^e` in `n` variables.
    pub fn pure_power(n: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; n];
        v[i] = e;
        Monomial(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// True for the constant monomial and for `x_i^e`.
    pub fn is_pure_power(&self) -> bool {
        self.0.iter().filter(|&&e| e > 0).count() <= 1
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn weighted_degree(&self, w: &[u64]) -> u64 {
        self.0.iter().zip(w).map(|(&e, &wi)| e as u64 * wi).sum()
    }

    /// Sort key realising the enumeration order: grade ascending, and within a
    /// grade `x_1^d` first.
    pub fn enumeration_key(&self) -> (u32, Reverse<&[u32]>) {
        (self.degree(), Reverse(&self.0[..]))
    }

    pub fn eval<S: Scalar>(&self, point: &[S]) -> S {
        self.0
            .iter()
            .zip(point)
            .filter(|(&e, _)| e > 0)
            .fold(S::one(), |acc, (&e, x)| acc * &x.pow(e))
    }

    fn format_with(&self, var: &str) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("{var}{}", i + 1)
                } else {
                    format!("{var}{}^{e}", i + 1)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials in `n` variables of total degree at most `d_max`, grade
/// ascending and lexicographic within each grade (`x_1` largest).
pub fn enumerate_monomials(n: usize, d_max: u32) -> Result<Vec<Monomial>> {
    if n == 0 {
        return invalid("enumerate_monomials needs at least one variable");
    }
    let mut out = Vec::new();
    for d in 0..=d_max {
        out.extend(monomials_of_degree(n, d));
    }
    Ok(out)
}

/// Monomials of degree exactly `d`, lexicographically descending.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if n == 0 {
        return if d == 0 {
            vec![Monomial(vec![])]
        } else {
            vec![]
        };
    }
    let mut out = Vec::new();
    rec(0, d, &mut vec![0; n], &mut out);
    out
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial<C: Scalar = Rational> {
    n: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> Polynomial<C> {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: C) -> Self {
        Self::from_monomial(Monomial::one(n), c)
    }

    pub fn var(n: usize, i: usize) -> Self {
        Self::from_monomial(Monomial::var(n, i), C::one())
    }

    pub fn from_monomial(m: Monomial, c: C) -> Self {
        let n = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { n, terms }
    }

    /// Sums the given terms; repeated monomials are combined.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Result<Self> {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            if m.nvars() != n {
                return invalid(format!(
                    "monomial has {} exponents, expected {n}",
                    m.nvars()
                ));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + &c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            Some(d) => degs.all(|e| e == d),
            None => true,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-C::one()))
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (m, a) in &self.terms {
            for (k, b) in &other.terms {
                out.add_term(m.mul(k), a.clone() * b);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.n, C::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact value at a point with coordinates in the coefficient field.
    pub fn eval(&self, point: &[C]) -> Result<C> {
        if point.len() != self.n {
            return invalid(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.n
            ));
        }
        Ok(self
            .terms
            .iter()
            .fold(C::zero(), |acc, (m, c)| acc + &(m.eval(point) * c)))
    }

    /// Renames variable `i` to `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let mut e = vec![0; self.n];
            for (i, &x) in m.exponents().iter().enumerate() {
                e[perm[i]] = x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// The common weighted degree of all terms, or `None` if the terms
    /// disagree.
    pub fn weighted_degree(&self, w: &WeightVector) -> Result<Option<u64>> {
        if w.len() != self.n {
            return invalid(format!(
                "weight vector has length {}, polynomial has {} variables",
                w.len(),
                self.n
            ));
        }
        let mut degs = self.terms.keys().map(|m| m.weighted_degree(w.as_slice()));
        let first = match degs.next() {
            Some(d) => d,
            None => return invalid("weighted degree of the zero polynomial is undefined"),
        };
        Ok(degs.all(|d| d == first).then_some(first))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| json!({ "exp": m.exponents(), "coef": c.to_json() }))
            .collect();
        json!({ "n": self.n, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("polynomial needs an integer field \"n\"".into()))?
            as usize;
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("polynomial needs an array field \"terms\"".into()))?;
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            let exp = t
                .get("exp")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("term needs an \"exp\" array".into()))?
                .iter()
                .map(|e| {
                    e.as_u64()
                        .and_then(|e| u32::try_from(e).ok())
                        .ok_or_else(|| Error::Parse(format!("bad exponent {e}")))
                })
                .collect::<Result<Vec<u32>>>()?;
            if exp.len() != n {
                return Err(Error::Parse(format!(
                    "exponent array of length {} in a polynomial with n = {n}",
                    exp.len()
                )));
            }
            let coef = C::from_json(
                t.get("coef")
                    .ok_or_else(|| Error::Parse("term needs a \"coef\"".into()))?,
            )?;
            parsed.push((Monomial(exp), coef));
        }
        Self::from_terms(n, parsed)
    }

    /// Human-readable form using `var1, var2, …` as variable names.
    pub fn format_with(&self, var: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
                _ => (false, cs),
            };
            let mag = if mag.contains(['+', '-']) {
                format!("({mag})")
            } else {
                mag
            };
            match (idx, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            let mono = m.format_with(var);
            if m.degree() == 0 {
                s.push_str(&mag);
            } else if mag == "1" {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{mag}*{mono}"));
            }
        }
        s
    }
}

impl Polynomial<Rational> {
    /// Evaluates a rational polynomial at a point over any extension field.
    pub fn eval_in<S: Scalar>(&self, point: &[S]) -> Result<S> {
        if point.len() != self.n {
            return invalid(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.n
            ));
        }
        Ok(self.terms.iter().fold(S::zero(), |acc, (m, c)| {
            acc + &(m.eval(point) * &S::from_rational(c))
        }))
    }

    pub fn lift<S: Scalar>(&self) -> Polynomial<S> {
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), S::from_rational(c)))
                .collect(),
        }
    }

    /// Parses expressions such as `"y1^2 + y2^2"` or `"3/2*x1*x2 - x3"`.
    /// Variables are a letter followed by a 1-based index; a bare letter means
    /// index 1. `n` defaults to the largest index seen.
    pub fn parse(expr: &str, n: Option<usize>) -> Result<Self> {
        let raw = parse_expression(expr)?;
        let max_idx = raw
            .iter()
            .flat_map(|(_, f)| f.iter().map(|(i, _)| *i))
            .max()
            .unwrap_or(0);
        let n = n.unwrap_or(max_idx.max(1));
        if max_idx > n {
            return invalid(format!("variable index {max_idx} exceeds n = {n}"));
        }
        let terms = raw.into_iter().map(|(c, factors)| {
            let mut e = vec![0u32; n];
            for (i, p) in factors {
                e[i - 1] += p;
            }
            (Monomial(e), c)
        });
        Self::from_terms(n, terms)
    }
}

type RawTerm = (Rational, Vec<(usize, u32)>);

fn parse_expression(expr: &str) -> Result<Vec<RawTerm>> {
    let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut chunks = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' && bytes[i - 1] != b'*' {
            chunks.push(&s[start..i]);
            start = i;
        }
    }
    chunks.push(&s[start..]);

    let mut out = Vec::new();
    for chunk in chunks {
        let (sign, body) = match chunk.as_bytes()[0] {
            b'-' => (-Rational::one(), &chunk[1..]),
            b'+' => (Rational::one(), &chunk[1..]),
            _ => (Rational::one(), chunk),
        };
        if body.is_empty() {
            return Err(Error::Parse(format!("dangling sign in {expr:?}")));
        }
        let mut coef = sign;
        let mut factors = Vec::new();
        for f in body.split('*') {
            let first = f
                .chars()
                .next()
                .ok_or_else(|| Error::Parse(format!("empty factor in {expr:?}")))?;
            if first.is_ascii_alphabetic() {
                let (base, pow) = match f.split_once('^') {
                    Some((b, p)) => (
                        b,
                        p.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad exponent in {f:?}")))?,
                    ),
                    None => (f, 1),
                };
                let digits = base.trim_start_matches(|c: char| c.is_ascii_alphabetic());
                let idx = if digits.is_empty() {
                    1
                } else {
                    digits
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad variable {base:?}")))?
                };
                if idx == 0 {
                    return Err(Error::Parse("variable indices start at 1".into()));
                }
                factors.push((idx, pow));
            } else {
                coef *= parse_rational(f)?;
            }
        }
        out.push((coef, factors));
    }
    Ok(out)
}

impl<C: Scalar> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with("x"))
    }
}

/// An ordered list of `N ≥ 1` nonzero rational polynomials in `n` variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMap {
    n: usize,
    components: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(n: usize, components: Vec<Polynomial>) -> Result<Self> {
        if n == 0 {
            return invalid("a map needs at least one variable");
        }
        if components.is_empty() {
            return invalid("a map needs at least one component");
        }
        for (j, c) in components.iter().enumerate() {
            if c.nvars() != n {
                return invalid(format!(
                    "component {j} has {} variables, expected {n}",
                    c.nvars()
                ));
            }
            if c.is_zero() {
                return invalid(format!("component {j} is the zero polynomial"));
            }
        }
        Ok(Self { n, components })
    }

    pub fn from_monomials(n: usize, monomials: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        Self::new(
            n,
            monomials
                .into_iter()
                .map(|m| Polynomial::from_monomial(m, Rational::one()))
                .collect(),
        )
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn eval<S: Scalar>(&self, point: &[S]) -> Result<Vec<S>> {
        self.components.iter().map(|f| f.eval_in(point)).collect()
    }

    pub fn max_degree(&self) -> u32 {
        self.components
            .iter()
            .filter_map(Polynomial::degree)
            .max()
            .unwrap_or(0)
    }

    /// Index of the component equal to the monomial `m` with coefficient 1.
    pub fn position_of_monomial(&self, m: &Monomial) -> Option<usize> {
        self.components
            .iter()
            .position(|c| c.num_terms() == 1 && c.coeff(m).is_one())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "components": self.components.iter().map(Polynomial::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("map needs an integer field \"n\"".into()))?
            as usize;
        let comps = v
            .get("components")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("map needs an array field \"components\"".into()))?
            .iter()
            .map(Polynomial::from_json)
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, comps)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Strictly positive integer weights, one per variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeightVector(Vec<u64>);

impl WeightVector {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() || weights.contains(&0) {
            return invalid(format!("weights must be positive, got {weights:?}"));
        }
        Ok(Self(weights))
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The torus action: coordinate `i` scaled by `λ^{w_i}`.
    pub fn act<S: Scalar>(&self, lambda: &S, point: &[S]) -> Vec<S> {
        point
            .iter()
            .zip(&self.0)
            .map(|(x, &w)| x.clone() * &lambda.pow(w as u32))
            .collect()
    }
}
