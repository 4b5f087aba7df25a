use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::algebra::{push_polynomial, AlgebraElement, Embedding, FiniteLocalAlgebra};
use super::hilbert::hilbert_function;
use crate::error::{invalid, Error, Result};
use crate::linalg::Matrix;
use crate::poly::PolyMap;
use crate::sampling::{config_digest, trial_rng, SampleScalar, SamplerConfig};
use crate::scalar::Scalar;

/// The `N × dim A` matrix whose row `j` is the image of `f_j` in `A`.
fn image_matrix<S: Scalar>(map: &PolyMap, e: &Embedding<S>) -> Result<Matrix<S>> {
    if map.nvars() != e.nvars() {
        return invalid(format!(
            "map in {} variables with an embedding of {}",
            map.nvars(),
            e.nvars()
        ));
    }
    let rows = map
        .components()
        .iter()
        .map(|f| push_polynomial(e, f).map(|a| a.coeffs().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_vec(map.len(), e.algebra().dim(), rows.concat())
}

/// Basis of the linear functionals `L` on `C^N` with
/// `Σ L_j · f_j ↦ 0` in the algebra, i.e. those vanishing on the span of the
/// scheme's image.
pub fn scheme_span_kernel<S: Scalar>(map: &PolyMap, e: &Embedding<S>) -> Result<Vec<Vec<S>>> {
    Ok(image_matrix(map, e)?.transpose().kernel_basis())
}

/// Dimension of the span of the scheme's image.
pub fn image_rank<S: Scalar>(map: &PolyMap, e: &Embedding<S>) -> Result<usize> {
    Ok(image_matrix(map, e)?.rank())
}

pub fn point_in_span<S: Scalar>(p: &[S], map: &PolyMap, e: &Embedding<S>) -> Result<bool> {
    if p.len() != map.len() {
        return invalid(format!(
            "point of length {} for a map with {} components",
            p.len(),
            map.len()
        ));
    }
    // The span is the column space of the image matrix.
    let m = image_matrix(map, e)?;
    Ok(m.augment(p)?.rank() == m.rank())
}

/// Scheme types sampled by avoidance experiments.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SchemeFamily {
    Curvilinear(usize),
    Special(usize),
}

impl SchemeFamily {
    pub fn algebra(&self) -> Result<FiniteLocalAlgebra> {
        match *self {
            SchemeFamily::Curvilinear(k) => FiniteLocalAlgebra::curvilinear(k),
            SchemeFamily::Special(k) => FiniteLocalAlgebra::special(k),
        }
    }
}

impl FromStr for SchemeFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let alg: FiniteLocalAlgebra = s.parse()?;
        match alg.kind() {
            super::AlgebraKind::Curvilinear(k) => Ok(SchemeFamily::Curvilinear(*k)),
            super::AlgebraKind::Special(k) => Ok(SchemeFamily::Special(*k)),
            super::AlgebraKind::MonomialQuotient(_) => Err(Error::Parse(
                "avoidance experiments sample curvilinear or special schemes".into(),
            )),
        }
    }
}

impl fmt::Display for SchemeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeFamily::Curvilinear(k) => write!(f, "curvilinear:{k}"),
            SchemeFamily::Special(k) => write!(f, "special:{k}"),
        }
    }
}

/// A random embedding of `C[x_1..x_n]` onto `alg`: every image gets random
/// coefficients on the non-constant basis elements. Draws are repeated until
/// the linear parts have rank `H(1)`, so the map is surjective and the scheme
/// is genuinely embedded.
pub fn random_embedding<S: SampleScalar, R: Rng>(
    rng: &mut R,
    cfg: &SamplerConfig,
    alg: &FiniteLocalAlgebra,
    n: usize,
) -> Result<Embedding<S>> {
    if n == 0 {
        return invalid("embeddings need at least one variable");
    }
    let h1 = hilbert_function(alg).get(1);
    if h1 > n {
        return invalid(format!("{alg} does not embed in {n} variables"));
    }
    let lin = alg.linear_indices();
    loop {
        let images: Vec<AlgebraElement<S>> = (0..n)
            .map(|_| {
                let mut c = vec![S::zero(); alg.dim()];
                for x in c.iter_mut().skip(1) {
                    *x = S::sample(rng, cfg);
                }
                AlgebraElement::new(c)
            })
            .collect();
        let linear: Vec<S> = images
            .iter()
            .flat_map(|im| lin.iter().map(|&i| im.coeffs()[i].clone()))
            .collect();
        let rank = Matrix::from_vec(n, lin.len(), linear)?.rank();
        if rank == h1 {
            return Embedding::new(alg.clone(), images);
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AvoidanceWitness<S: Scalar> {
    pub trial: u64,
    pub embedding: Embedding<S>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AvoidanceReport<S: Scalar> {
    pub trials: u64,
    pub violations: u64,
    /// Every violating trial, in trial order.
    pub witnesses: Vec<AvoidanceWitness<S>>,
    pub seed: u64,
    pub config_digest: String,
}

impl<S: Scalar> AvoidanceReport<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "trials": self.trials,
            "violations": self.violations,
            "witnesses": self.witnesses.iter().map(|w| json!({
                "trial": w.trial,
                "embedding": w.embedding.to_json(),
            })).collect::<Vec<_>>(),
            "seed": self.seed,
            "config_digest": self.config_digest,
        })
    }
}

/// Samples `trials` embeddings of schemes from `family` and counts those
/// whose span contains `p`.
pub fn avoidance_experiment<S: SampleScalar>(
    map: &PolyMap,
    p: &[S],
    family: SchemeFamily,
    trials: u64,
    seed: u64,
    sampler: &SamplerConfig,
) -> Result<AvoidanceReport<S>> {
    if trials == 0 {
        return invalid("avoidance experiments need trials >= 1");
    }
    if p.len() != map.len() {
        return invalid(format!(
            "center of length {} for a map with {} components",
            p.len(),
            map.len()
        ));
    }
    sampler.validate()?;
    let alg = family.algebra()?;
    let digest = config_digest(&json!({
        "mode": "avoid",
        "field": S::FIELD,
        "family": family.to_string(),
        "trials": trials,
        "seed": seed,
        "sampler": sampler,
        "center": p.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        "map": map.to_json(),
    }));
    let n = map.nvars();
    let results = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<Option<AvoidanceWitness<S>>> {
            let mut rng = trial_rng(seed, t);
            let e = random_embedding(&mut rng, sampler, &alg, n)?;
            Ok(point_in_span(p, map, &e)?.then_some(AvoidanceWitness {
                trial: t,
                embedding: e,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let witnesses: Vec<_> = results.into_iter().flatten().collect();
    Ok(AvoidanceReport {
        trials,
        violations: witnesses.len() as u64,
        witnesses,
        seed,
        config_digest: digest,
    })
}
