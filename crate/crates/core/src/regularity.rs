//! The `k`-regularity verifier.
//!
//! A map is `k`-regular iff every `k × N` evaluation matrix at distinct points
//! has rank `k`. Searches here can only falsify: they sample tuples (uniformly
//! from bounded-height rationals, or clustered along short polynomial curves
//! collapsing onto a base point) and report the first rank-deficient one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::linalg::Matrix;
use crate::poly::{PolyMap, WeightVector};
use crate::sampling::{
    config_digest, sample_distinct_points, sample_point, trial_rng, SampleScalar, SamplerConfig,
};
use crate::scalar::{Rational, Scalar};

/// `k` pairwise distinct points of a common dimension.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointTuple<S: Scalar = Rational> {
    points: Vec<Vec<S>>,
}

impl<S: Scalar> PointTuple<S> {
    pub fn new(points: Vec<Vec<S>>) -> Result<Self> {
        if let Some(first) = points.first() {
            if points.iter().any(|p| p.len() != first.len()) {
                return invalid("points of a tuple must share one dimension");
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return invalid(format!("points {i} and {j} coincide"));
                }
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Vec<S>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.points.first().map(Vec::len)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.points
                .iter()
                .map(|p| Value::Array(p.iter().map(Scalar::to_json).collect()))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .get("points")
            .unwrap_or(v)
            .as_array()
            .ok_or_else(|| Error::Parse("expected an array of points".into()))?;
        let pts = arr
            .iter()
            .map(|p| {
                p.as_array()
                    .ok_or_else(|| Error::Parse("each point must be an array".into()))?
                    .iter()
                    .map(S::from_json)
                    .collect::<Result<Vec<S>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(pts)
    }
}

/// The matrix with entry `(i, j) = f_j(P_i)`.
pub fn eval_matrix<S: Scalar>(map: &PolyMap, tuple: &PointTuple<S>) -> Result<Matrix<S>> {
    let mut data = Vec::with_capacity(tuple.len() * map.len());
    for p in tuple.points() {
        if p.len() != map.nvars() {
            return invalid(format!(
                "point of dimension {} for a map in {} variables",
                p.len(),
                map.nvars()
            ));
        }
        data.extend(map.eval(p)?);
    }
    Matrix::from_vec(tuple.len(), map.len(), data)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TupleCheck {
    Regular,
    Deficient { rank: usize },
}

pub fn check_tuple<S: Scalar>(map: &PolyMap, tuple: &PointTuple<S>) -> Result<TupleCheck> {
    let rank = eval_matrix(map, tuple)?.rank();
    Ok(if rank == tuple.len() {
        TupleCheck::Regular
    } else {
        TupleCheck::Deficient { rank }
    })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Counterexample<S: Scalar> {
    pub trial: u64,
    pub tuple: PointTuple<S>,
    pub rank: usize,
    /// Cluster scale that produced the tuple, for cluster searches.
    pub scale: Option<Rational>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SearchReport<S: Scalar> {
    pub trials_run: u64,
    pub counterexample: Option<Counterexample<S>>,
    pub seed: u64,
    pub config_digest: String,
}

impl<S: Scalar> SearchReport<S> {
    pub fn to_json(&self) -> Value {
        let ce = self.counterexample.as_ref().map(|c| {
            json!({
                "trial": c.trial,
                "points": c.tuple.to_json(),
                "rank": c.rank,
                "scale": c.scale.as_ref().map(Scalar::to_json),
            })
        });
        json!({
            "trials_run": self.trials_run,
            "counterexample": ce,
            "seed": self.seed,
            "config_digest": self.config_digest,
        })
    }
}

fn finish<S: Scalar>(
    found: Option<Counterexample<S>>,
    trials: u64,
    seed: u64,
    digest: String,
) -> SearchReport<S> {
    SearchReport {
        trials_run: found.as_ref().map_or(trials, |c| c.trial + 1),
        counterexample: found,
        seed,
        config_digest: digest,
    }
}

/// Draws `trials` independent tuples of `k` distinct points and reports the
/// first rank-deficient one by trial index.
pub fn random_search<S: SampleScalar>(
    map: &PolyMap,
    k: usize,
    trials: u64,
    seed: u64,
    sampler: &SamplerConfig,
) -> Result<SearchReport<S>> {
    if trials == 0 || k == 0 {
        return invalid("random search needs trials >= 1 and k >= 1");
    }
    sampler.validate()?;
    let digest = config_digest(&json!({
        "mode": "random",
        "field": S::FIELD,
        "k": k,
        "trials": trials,
        "seed": seed,
        "sampler": sampler,
        "map": map.to_json(),
    }));
    let n = map.nvars();
    let found = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<Option<Counterexample<S>>> {
            let mut rng = trial_rng(seed, t);
            let tuple = PointTuple::new(sample_distinct_points(&mut rng, sampler, n, k))?;
            Ok(match check_tuple(map, &tuple)? {
                TupleCheck::Regular => None,
                TupleCheck::Deficient { rank } => Some(Counterexample {
                    trial: t,
                    tuple,
                    rank,
                    scale: None,
                }),
            })
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .transpose()?
        .flatten();
    Ok(finish(found, trials, seed, digest))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClusterConfig {
    pub curve_degree: u32,
    pub scales: Vec<Rational>,
}

impl Default for ClusterConfig {
    /// Cubic curves at scales `2^0, 2^-1, …, 2^-12`.
    fn default() -> Self {
        Self {
            curve_degree: 3,
            scales: (0..=12)
                .map(|m| Rational::new(BigInt::one(), BigInt::from(2).pow(m)))
                .collect(),
        }
    }
}

/// Each trial picks a base point `p` and a random curve
/// `γ(s) = p + a_1 s + … + a_d s^d`, then tests the tuple
/// `γ(0), γ(ε), …, γ((k−1)ε)` for every scale `ε`.
pub fn cluster_search<S: SampleScalar>(
    map: &PolyMap,
    k: usize,
    trials: u64,
    seed: u64,
    sampler: &SamplerConfig,
    cluster: &ClusterConfig,
) -> Result<SearchReport<S>> {
    if trials == 0 || k == 0 {
        return invalid("cluster search needs trials >= 1 and k >= 1");
    }
    if cluster.curve_degree == 0 {
        return invalid("curve degree must be at least 1");
    }
    if cluster.scales.is_empty() || cluster.scales.iter().any(Zero::is_zero) {
        return invalid("cluster scales must be nonempty and nonzero");
    }
    sampler.validate()?;
    let digest = config_digest(&json!({
        "mode": "cluster",
        "field": S::FIELD,
        "k": k,
        "trials": trials,
        "seed": seed,
        "sampler": sampler,
        "curve_degree": cluster.curve_degree,
        "scales": cluster.scales.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        "map": map.to_json(),
    }));
    let n = map.nvars();
    let found = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<Option<Counterexample<S>>> {
            let mut rng = trial_rng(seed, t);
            let base: Vec<S> = sample_point(&mut rng, sampler, n);
            let coeffs: Vec<Vec<S>> = (0..cluster.curve_degree)
                .map(|_| sample_point(&mut rng, sampler, n))
                .collect();
            for eps in &cluster.scales {
                let pts: Vec<Vec<S>> = (0..k)
                    .map(|j| {
                        let s = S::from_rational(&(eps * Rational::from_integer(BigInt::from(j))));
                        curve_point(&base, &coeffs, &s)
                    })
                    .collect();
                let Ok(tuple) = PointTuple::new(pts) else {
                    continue;
                };
                if let TupleCheck::Deficient { rank } = check_tuple(map, &tuple)? {
                    return Ok(Some(Counterexample {
                        trial: t,
                        tuple,
                        rank,
                        scale: Some(eps.clone()),
                    }));
                }
            }
            Ok(None)
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .transpose()?
        .flatten();
    Ok(finish(found, trials, seed, digest))
}

fn curve_point<S: Scalar>(base: &[S], coeffs: &[Vec<S>], s: &S) -> Vec<S> {
    // Horner in s, coordinate-wise.
    let mut out = vec![S::zero(); base.len()];
    for a in coeffs.iter().rev() {
        for (o, ai) in out.iter_mut().zip(a) {
            *o = (o.clone() + ai) * s;
        }
    }
    out.into_iter().zip(base).map(|(o, b)| o + b).collect()
}

/// Default half-width of the coefficient box searched for positive weights
/// when the weight cone has dimension above one.
pub const WEIGHT_SEARCH_BOUND: i64 = 5;

/// Finds strictly positive integer weights making every component weighted
/// homogeneous; see [`find_torus_weights_with`].
pub fn find_torus_weights(map: &PolyMap) -> Option<WeightVector> {
    find_torus_weights_with(map, WEIGHT_SEARCH_BOUND)
}

/// Solves the homogeneity constraints `Σ (a_i − b_i) w_i = 0` for all pairs of
/// terms within a component. A one-dimensional solution space is checked for a
/// sign-definite generator. Larger spaces are searched over integer
/// combinations of the kernel basis with coefficients in `[−bound, bound]`,
/// returning the admissible vector of least total weight; this search is
/// incomplete and may miss solutions outside the box.
pub fn find_torus_weights_with(map: &PolyMap, bound: i64) -> Option<WeightVector> {
    let n = map.nvars();
    let mut rows: Vec<Rational> = Vec::new();
    let mut nrows = 0;
    for f in map.components() {
        let mut terms = f.terms().map(|(m, _)| m);
        let Some(first) = terms.next() else { continue };
        for m in terms {
            rows.extend(
                m.exponents()
                    .iter()
                    .zip(first.exponents())
                    .map(|(&a, &b)| Rational::from_integer(BigInt::from(a as i64 - b as i64))),
            );
            nrows += 1;
        }
    }
    let constraints = Matrix::from_vec(nrows, n, rows).ok()?;

    let ones = vec![Rational::one(); n];
    if constraints.mul_vec(&ones).ok()?.iter().all(Zero::is_zero) {
        return WeightVector::new(vec![1; n]).ok();
    }

    let basis = constraints.kernel_basis();
    match basis.len() {
        0 => None,
        1 => {
            let v = &basis[0];
            if v.iter().all(Signed::is_positive) {
                primitive_weights(v)
            } else if v.iter().all(Signed::is_negative) {
                primitive_weights(&v.iter().map(|x| -x.clone()).collect::<Vec<_>>())
            } else {
                None
            }
        }
        dim => {
            let mut best: Option<(u64, Vec<u64>)> = None;
            let mut coeffs = vec![-bound; dim];
            loop {
                let mut cand = vec![Rational::zero(); n];
                for (c, v) in coeffs.iter().zip(&basis) {
                    if *c != 0 {
                        let c = Rational::from_integer(BigInt::from(*c));
                        for (x, vi) in cand.iter_mut().zip(v) {
                            *x += &c * vi;
                        }
                    }
                }
                if cand.iter().all(Signed::is_positive) {
                    if let Some(w) = primitive_weights(&cand) {
                        let w = w.as_slice().to_vec();
                        let total: u64 = w.iter().sum();
                        if best.as_ref().is_none_or(|(t, b)| (total, &w) < (*t, b)) {
                            best = Some((total, w));
                        }
                    }
                }
                // Odometer increment over [-bound, bound]^dim.
                let mut i = 0;
                loop {
                    if i == dim {
                        return best.and_then(|(_, w)| WeightVector::new(w).ok());
                    }
                    if coeffs[i] < bound {
                        coeffs[i] += 1;
                        break;
                    }
                    coeffs[i] = -bound;
                    i += 1;
                }
            }
        }
    }
}

/// Scales a positive rational vector to coprime positive integers.
fn primitive_weights(v: &[Rational]) -> Option<WeightVector> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return None;
    }
    let w: Option<Vec<u64>> = ints.iter().map(|x| u64::try_from(x / &g).ok()).collect();
    WeightVector::new(w?).ok()
}

/// Compares the rank of the evaluation matrix at `tuple` with the rank at
/// `τ_λ(tuple)`. For weighted-homogeneous maps the two always agree, since
/// the action only rescales columns.
pub fn rescale_invariance_check<S: Scalar>(
    map: &PolyMap,
    w: &WeightVector,
    tuple: &PointTuple<S>,
    lambda: &S,
) -> Result<bool> {
    if lambda.is_zero() {
        return invalid("the torus parameter must be nonzero");
    }
    for (j, f) in map.components().iter().enumerate() {
        if f.weighted_degree(w)?.is_none() {
            return invalid(format!(
                "component {j} is not weighted homogeneous under {w:?}"
            ));
        }
    }
    let moved = PointTuple::new(tuple.points().iter().map(|p| w.act(lambda, p)).collect())?;
    Ok(eval_matrix(map, tuple)?.rank() == eval_matrix(map, &moved)?.rank())
}
