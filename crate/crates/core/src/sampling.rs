//! Seeded sampling of bounded-height points.
//!
//! Every trial of a randomized campaign draws from its own ChaCha stream keyed
//! by `(seed, trial index)`, so results do not depend on how trials are
//! scheduled across threads.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Rational, Scalar};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Rational,
    Gaussian,
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Field::Rational),
            "gaussian" => Ok(Field::Gaussian),
            other => Err(Error::Parse(format!("unknown field {other:?}"))),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Rational => "rational",
            Field::Gaussian => "gaussian",
        })
    }
}

/// Coordinates are `a/b` with `|a| ≤ num_bound` and `1 ≤ b ≤ den_max`. Over
/// the Gaussian rationals both parts are drawn this way. With
/// `isotropic_lines`, half of the Gaussian tuples are placed on a line whose
/// direction `v` satisfies `Σ v_i² = 0`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub num_bound: i64,
    pub den_max: u64,
    pub isotropic_lines: bool,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            num_bound: 10,
            den_max: 8,
            isotropic_lines: false,
        }
    }
}

impl SamplerConfig {
    pub fn with_isotropic_lines(mut self, on: bool) -> Self {
        self.isotropic_lines = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_bound < 1 || self.den_max < 1 {
            return Err(Error::InvalidInput(format!(
                "sampler bounds must be positive: {self:?}"
            )));
        }
        Ok(())
    }
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn sample_rational<R: Rng>(rng: &mut R, cfg: &SamplerConfig) -> Rational {
    let a = rng.gen_range(-cfg.num_bound..=cfg.num_bound);
    let b = rng.gen_range(1..=cfg.den_max);
    Rational::new(BigInt::from(a), BigInt::from(b))
}

pub fn sample_nonzero_rational<R: Rng>(rng: &mut R, cfg: &SamplerConfig) -> Rational {
    loop {
        let r = sample_rational(rng, cfg);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Scalars that can be drawn from a [`SamplerConfig`].
pub trait SampleScalar: Scalar {
    const FIELD: Field;

    fn sample<R: Rng>(rng: &mut R, cfg: &SamplerConfig) -> Self;
}

impl SampleScalar for Rational {
    const FIELD: Field = Field::Rational;

    fn sample<R: Rng>(rng: &mut R, cfg: &SamplerConfig) -> Self {
        sample_rational(rng, cfg)
    }
}

impl SampleScalar for GaussianRational {
    const FIELD: Field = Field::Gaussian;

    fn sample<R: Rng>(rng: &mut R, cfg: &SamplerConfig) -> Self {
        let re = sample_rational(rng, cfg);
        let im = sample_rational(rng, cfg);
        GaussianRational::new(re, im)
    }
}

pub fn sample_point<S: SampleScalar, R: Rng>(rng: &mut R, cfg: &SamplerConfig, n: usize) -> Vec<S> {
    (0..n).map(|_| S::sample(rng, cfg)).collect()
}

/// `k` pairwise distinct points in `n` dimensions. Duplicates are redrawn
/// from the same stream.
pub fn sample_distinct_points<S: SampleScalar, R: Rng>(
    rng: &mut R,
    cfg: &SamplerConfig,
    n: usize,
    k: usize,
) -> Vec<Vec<S>> {
    if cfg.isotropic_lines && n >= 2 && k >= 2 && rng.gen_bool(0.5) {
        if let Some(pts) = sample_isotropic_line(rng, cfg, n, k) {
            return pts;
        }
    }
    let mut pts: Vec<Vec<S>> = Vec::with_capacity(k);
    while pts.len() < k {
        let p = sample_point(rng, cfg, n);
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts
}

/// `k` distinct points `p + t_j·v` on a line with isotropic direction
/// `v = c·(e_a ± i·e_b)`. Only available when the field contains `i`.
pub fn sample_isotropic_line<S: SampleScalar, R: Rng>(
    rng: &mut R,
    cfg: &SamplerConfig,
    n: usize,
    k: usize,
) -> Option<Vec<Vec<S>>> {
    let i = S::imaginary_unit()?;
    if n < 2 {
        return None;
    }
    let base: Vec<S> = sample_point(rng, cfg, n);
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    let c = S::from_rational(&sample_nonzero_rational(rng, cfg));
    let mut dir = vec![S::zero(); n];
    dir[a] = c.clone();
    dir[b] = if rng.gen_bool(0.5) { c * &i } else { -(c * &i) };
    let mut ts: Vec<Rational> = Vec::with_capacity(k);
    while ts.len() < k {
        let t = sample_rational(rng, cfg);
        if !ts.contains(&t) {
            ts.push(t);
        }
    }
    Some(
        ts.iter()
            .map(|t| {
                let t = S::from_rational(t);
                base.iter()
                    .zip(&dir)
                    .map(|(p, v)| p.clone() + &(v.clone() * &t))
                    .collect()
            })
            .collect(),
    )
}

/// Hex SHA-256 of a canonical JSON rendering of a campaign configuration.
pub fn config_digest(config: &serde_json::Value) -> String {
    let bytes = serde_json::to_vec(config).expect("json values always serialize");
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let cfg = SamplerConfig::default();
        let a: Vec<Rational> = sample_point(&mut trial_rng(7, 3), &cfg, 5);
        let b: Vec<Rational> = sample_point(&mut trial_rng(7, 3), &cfg, 5);
        let c: Vec<Rational> = sample_point(&mut trial_rng(7, 4), &cfg, 5);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn samples_respect_height_bounds() {
        let cfg = SamplerConfig::default();
        let mut rng = trial_rng(1, 0);
        for _ in 0..500 {
            let r = sample_rational(&mut rng, &cfg);
            assert!(r.numer() <= &BigInt::from(10) && r.numer() >= &BigInt::from(-10));
            assert!(r.denom() <= &BigInt::from(8));
        }
    }

    #[test]
    fn isotropic_lines_have_null_direction() {
        let cfg = SamplerConfig::default().with_isotropic_lines(true);
        let mut rng = trial_rng(11, 0);
        let pts: Vec<Vec<GaussianRational>> = sample_isotropic_line(&mut rng, &cfg, 3, 3).unwrap();
        let dir: Vec<GaussianRational> = pts[1]
            .iter()
            .zip(&pts[0])
            .map(|(a, b)| a.clone() - b)
            .collect();
        let q = dir
            .iter()
            .fold(GaussianRational::zero(), |acc, v| acc + &(v.clone() * v));
        assert!(q.is_zero());
        assert!(sample_isotropic_line::<Rational, _>(&mut rng, &cfg, 3, 3).is_none());
    }

    #[test]
    fn distinct_points_are_distinct() {
        let cfg = SamplerConfig {
            num_bound: 1,
            den_max: 1,
            isotropic_lines: false,
        };
        let mut rng = trial_rng(5, 0);
        let pts: Vec<Vec<Rational>> = sample_distinct_points(&mut rng, &cfg, 2, 9);
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                assert_ne!(pts[i], pts[j]);
            }
        }
    }
}
