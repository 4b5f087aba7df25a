//! Generators for the polynomial map families, linear projection of a map
//! from a center, and the generic-dimension bound.
//!
//! The two explicit families (`thm3`, `thm4`) order their components as
//! follows: by total degree, then mixed monomials before binomials before pure
//! powers, then by enumeration order of the leading monomial. With `mirror`
//! set this reproduces the published `C^3 → C^11` and `C^3 → C^14` tuples
//! verbatim.

use std::fmt;
use std::str::FromStr;

use num_integer::binomial;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::poly::{enumerate_monomials, monomials_of_degree, Monomial, PolyMap, Polynomial};
use crate::scalar::Rational;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Family {
    Veronese,
    Base,
    Thm3,
    Thm4,
    Real3Reg,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "veronese" => Ok(Family::Veronese),
            "base" => Ok(Family::Base),
            "thm3" => Ok(Family::Thm3),
            "thm4" => Ok(Family::Thm4),
            "real3reg" => Ok(Family::Real3Reg),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Veronese => "veronese",
            Family::Base => "base",
            Family::Thm3 => "thm3",
            Family::Thm4 => "thm4",
            Family::Real3Reg => "real3reg",
        })
    }
}

/// Parameters for one constructed map. `k` doubles as the Veronese degree `r`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MapRecipe {
    pub family: Family,
    pub n: usize,
    pub k: u32,
    pub mirror: bool,
}

impl MapRecipe {
    pub fn build(&self) -> Result<PolyMap> {
        match self.family {
            Family::Veronese => veronese_map(self.n, self.k),
            Family::Base => base_map(self.n, self.k),
            Family::Thm3 => thm3_map(self.n, self.k, self.mirror),
            Family::Thm4 => thm4_map(self.n, self.k, self.mirror),
            Family::Real3Reg => real3reg_map(self.n),
        }
    }
}

fn one_term(m: Monomial) -> Polynomial {
    Polynomial::from_monomial(m, Rational::one())
}

/// `x_a^p − x_b^q`.
fn binomial_component(n: usize, a: usize, p: u32, b: usize, q: u32) -> Polynomial {
    one_term(Monomial::pure_power(n, a, p)).sub(&one_term(Monomial::pure_power(n, b, q)))
}

/// All monomials of degree at most `r`, constant included.
pub fn veronese_map(n: usize, r: u32) -> Result<PolyMap> {
    if n == 0 || r == 0 {
        return invalid(format!(
            "veronese needs n >= 1 and r >= 1, got n={n}, r={r}"
        ));
    }
    PolyMap::from_monomials(n, enumerate_monomials(n, r)?)
}

/// All monomials of degree at most `k − 2` followed by `x_1^{k−1}, …, x_n^{k−1}`.
pub fn base_map(n: usize, k: u32) -> Result<PolyMap> {
    if n == 0 || k < 2 {
        return invalid(format!(
            "base map needs n >= 1 and k >= 2, got n={n}, k={k}"
        ));
    }
    let mut monos = enumerate_monomials(n, k - 2)?;
    monos.extend((0..n).map(|i| Monomial::pure_power(n, i, k - 1)));
    PolyMap::from_monomials(n, monos)
}

/// Applies `x_j ↦ x_{n+1−j}` to every component, if requested.
fn maybe_mirror(n: usize, comps: Vec<Polynomial>, mirror: bool) -> Vec<Polynomial> {
    if !mirror {
        return comps;
    }
    let perm: Vec<usize> = (0..n).rev().collect();
    comps.iter().map(|c| c.permute_vars(&perm)).collect()
}

fn canonical_order(comps: &mut [Polynomial]) {
    fn kind(p: &Polynomial) -> u8 {
        let lead = p.leading_monomial().expect("nonzero component");
        match (p.num_terms(), lead.is_pure_power()) {
            (1, false) => 0,
            (1, true) => 2,
            _ => 1,
        }
    }
    comps.sort_by(|a, b| {
        let (la, lb) = (a.leading_monomial().unwrap(), b.leading_monomial().unwrap());
        (la.degree(), kind(a))
            .cmp(&(lb.degree(), kind(b)))
            .then_with(|| la.enumeration_key().cmp(&lb.enumeration_key()))
    });
}

/// The binomials `x_{i+1}^{k−1} − x_i^{k−2}` plus `x_1^{k−1}` and `x_n^{k−2}`.
fn tail_components(n: usize, k: u32) -> Vec<Polynomial> {
    let mut out: Vec<Polynomial> = (0..n - 1)
        .map(|i| binomial_component(n, i + 1, k - 1, i, k - 2))
        .collect();
    out.push(one_term(Monomial::pure_power(n, 0, k - 1)));
    out.push(one_term(Monomial::pure_power(n, n - 1, k - 2)));
    out
}

/// The `k`-regular map with `C(n+k−2, k−2) + 1` components: monomials of
/// degree ≤ k−3, mixed monomials of degree k−2, and the binomial tail.
pub fn thm3_map(n: usize, k: u32, mirror: bool) -> Result<PolyMap> {
    if n < 2 || k <= 3 {
        return Err(Error::UnsupportedParameters(format!(
            "thm3 needs n >= 2 and k > 3, got n={n}, k={k}"
        )));
    }
    let mut comps: Vec<Polynomial> = enumerate_monomials(n, k - 3)?
        .into_iter()
        .chain(
            monomials_of_degree(n, k - 2)
                .into_iter()
                .filter(|m| !m.is_pure_power()),
        )
        .map(one_term)
        .collect();
    comps.extend(tail_components(n, k));
    let mut comps = maybe_mirror(n, comps, mirror);
    canonical_order(&mut comps);
    PolyMap::new(n, comps)
}

/// The `k`-regular map with `C(n+k−3, n) + n + 1` components: monomials of
/// degree ≤ k−3 and the binomial tail.
pub fn thm4_map(n: usize, k: u32, mirror: bool) -> Result<PolyMap> {
    if n < 2 || k <= 4 {
        return Err(Error::UnsupportedParameters(format!(
            "thm4 needs n >= 2 and k > 4, got n={n}, k={k}"
        )));
    }
    let mut comps: Vec<Polynomial> = enumerate_monomials(n, k - 3)?
        .into_iter()
        .map(one_term)
        .collect();
    comps.extend(tail_components(n, k));
    let mut comps = maybe_mirror(n, comps, mirror);
    canonical_order(&mut comps);
    PolyMap::new(n, comps)
}

/// `(1, x_1, …, x_n, x_1² + … + x_n²)`: 3-regular over the reals only.
pub fn real3reg_map(n: usize) -> Result<PolyMap> {
    if n == 0 {
        return invalid("real3reg needs n >= 1");
    }
    let mut comps: Vec<Polynomial> = enumerate_monomials(n, 1)?
        .into_iter()
        .map(one_term)
        .collect();
    let sq = Polynomial::from_terms(
        n,
        (0..n).map(|i| (Monomial::pure_power(n, i, 2), Rational::one())),
    )?;
    comps.push(sq);
    PolyMap::new(n, comps)
}

/// Composes `map` with the linear projection whose center is the point `c`.
///
/// With `p` the first nonzero coordinate of `c`, the result has components
/// `f_j − (c_j / c_p)·f_p` for `j ≠ p`, in the original order. Components that
/// cancel to zero are dropped.
pub fn project_off(map: &PolyMap, center: &[Rational]) -> Result<PolyMap> {
    if center.len() != map.len() {
        return invalid(format!(
            "center has {} coordinates, map has {} components",
            center.len(),
            map.len()
        ));
    }
    let Some(p) = center.iter().position(|c| !c.is_zero()) else {
        return invalid("projection center must be nonzero");
    };
    let fp = &map.components()[p];
    let comps: Vec<Polynomial> = map
        .components()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != p)
        .map(|(j, f)| {
            if center[j].is_zero() {
                f.clone()
            } else {
                f.sub(&fp.scale(&(center[j].clone() / &center[p])))
            }
        })
        .filter(|f| !f.is_zero())
        .collect();
    PolyMap::new(map.nvars(), comps)
}

/// Unit vector on the component that equals the monomial `m`.
pub fn monomial_center(map: &PolyMap, m: &Monomial) -> Result<Vec<Rational>> {
    let idx = map
        .position_of_monomial(m)
        .ok_or_else(|| Error::InvalidInput(format!("map has no component {m:?}")))?;
    let mut c = vec![Rational::zero(); map.len()];
    c[idx] = Rational::one();
    Ok(c)
}

/// Center with equal nonzero entries on the components `a` and `b`.
pub fn pair_center(map: &PolyMap, a: &Monomial, b: &Monomial) -> Result<Vec<Rational>> {
    let mut c = monomial_center(map, a)?;
    let jb = map
        .position_of_monomial(b)
        .ok_or_else(|| Error::InvalidInput(format!("map has no component {b:?}")))?;
    c[jb] = Rational::one();
    Ok(c)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CenterKind {
    /// A mixed monomial of degree `k − 1` projected off the Veronese map.
    TopMixed(Monomial),
    /// A mixed monomial of degree `k − 2` projected off the base map.
    SubTopMixed(Monomial),
    /// Equal coordinates on `x_a^{k−1}` and `x_b^{k−2}`.
    Binomial { high: Monomial, low: Monomial },
}

/// One projection step of a construction: the map before projecting, and
/// the center used.
#[derive(Clone, Debug)]
pub struct ProjectionStage {
    pub map: PolyMap,
    pub center: Vec<Rational>,
    pub kind: CenterKind,
}

/// A map whose components agree with `other` up to order and sign.
pub fn same_components_up_to_sign(a: &PolyMap, b: &PolyMap) -> bool {
    if a.len() != b.len() || a.nvars() != b.nvars() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.components().iter().all(|f| {
        let neg = f.scale(&-Rational::one());
        match b
            .components()
            .iter()
            .enumerate()
            .position(|(j, g)| !used[j] && (g == f || *g == neg))
        {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        }
    })
}

/// The chain of projections that turns `v_{k−1}` into the `thm3` (or, with
/// `with_subtop_mixed`, the `thm4`) map. Returns every stage and the final map.
pub fn projection_pipeline(
    n: usize,
    k: u32,
    mirror: bool,
    with_subtop_mixed: bool,
) -> Result<(Vec<ProjectionStage>, PolyMap)> {
    if n < 2 || k <= 3 || (with_subtop_mixed && k <= 4) {
        return Err(Error::UnsupportedParameters(format!(
            "projection pipeline needs n >= 2 and k > {}, got n={n}, k={k}",
            if with_subtop_mixed { 4 } else { 3 }
        )));
    }
    let mut stages = Vec::new();
    let mut map = veronese_map(n, k - 1)?;
    let mut step = |map: &mut PolyMap, center: Vec<Rational>, kind: CenterKind| -> Result<()> {
        let next = project_off(map, &center)?;
        stages.push(ProjectionStage {
            map: map.clone(),
            center,
            kind,
        });
        *map = next;
        Ok(())
    };

    for m in monomials_of_degree(n, k - 1)
        .into_iter()
        .filter(|m| !m.is_pure_power())
    {
        let c = monomial_center(&map, &m)?;
        step(&mut map, c, CenterKind::TopMixed(m))?;
    }
    if with_subtop_mixed {
        for m in monomials_of_degree(n, k - 2)
            .into_iter()
            .filter(|m| !m.is_pure_power())
        {
            let c = monomial_center(&map, &m)?;
            step(&mut map, c, CenterKind::SubTopMixed(m))?;
        }
    }
    for i in 0..n - 1 {
        // Statement convention pairs x_{i+1}^{k-1} with x_i^{k-2}; the
        // mirrored one pairs x_i^{k-1} with x_{i+1}^{k-2}.
        let (hi, lo) = if mirror { (i, i + 1) } else { (i + 1, i) };
        let high = Monomial::pure_power(n, hi, k - 1);
        let low = Monomial::pure_power(n, lo, k - 2);
        let c = pair_center(&map, &high, &low)?;
        step(&mut map, c, CenterKind::Binomial { high, low })?;
    }
    Ok((stages, map))
}

/// Minimal `N` for which generic polynomials of degree at least `k − 1` give a
/// `k`-regular map `C^n → C^N`, exceptions included. The `n = 1` case returns
/// `k − 1` exactly as the classical statement prints it; see
/// [`generic_bound_caveat`].
pub fn generic_bound(n: usize, k: u32) -> u64 {
    let (n64, k64) = (n as u64, k as u64);
    if n == 1 {
        k64.saturating_sub(1)
    } else if (n, k) == (2, 4) {
        9
    } else if (n, k) == (2, 5) {
        13
    } else if k == 3 {
        3 * n64 - 1
    } else {
        ((n64 + 1) * k64).saturating_sub(1)
    }
}

/// Note attached to [`generic_bound`] outputs that are known to be suspect.
pub fn generic_bound_caveat(n: usize, _k: u32) -> Option<&'static str> {
    (n == 1).then_some(
        "n = 1 bound printed as k-1; the rational normal curve needs k components for k points",
    )
}

pub fn thm3_size(n: usize, k: u32) -> u64 {
    binomial(n as u64 + k as u64 - 2, k as u64 - 2) + 1
}

pub fn thm4_size(n: usize, k: u32) -> u64 {
    binomial(n as u64 + k as u64 - 3, n as u64) + n as u64 + 1
}

/// Whether two maps are equal after the substitution `x_j ↦ x_{n+1−j}`, up to
/// reordering of components.
pub fn mirror_equivalent(a: &PolyMap, b: &PolyMap) -> bool {
    let n = a.nvars();
    let perm: Vec<usize> = (0..n).rev().collect();
    let mirrored: Vec<Polynomial> = a
        .components()
        .iter()
        .map(|c| c.permute_vars(&perm))
        .collect();
    match PolyMap::new(n, mirrored) {
        Ok(m) => same_components(&m, b),
        Err(_) => false,
    }
}

/// Multiset equality of components.
pub fn same_components(a: &PolyMap, b: &PolyMap) -> bool {
    let mut rest: Vec<&Polynomial> = b.components().iter().collect();
    for f in a.components() {
        match rest.iter().position(|g| *g == f) {
            Some(j) => {
                rest.swap_remove(j);
            }
            None => return false,
        }
    }
    rest.is_empty()
}

/// Every component has total degree at most `k − 1`.
pub fn degree_within(map: &PolyMap, k: u32) -> bool {
    map.components()
        .iter()
        .all(|c| c.degree().is_some_and(|d| d < k))
}
