//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any failed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::Value;

use kreg::constructions::{
    base_map, generic_bound, projection_pipeline, real3reg_map, same_components, thm3_map,
    thm3_size, thm4_map, thm4_size, veronese_map,
};
use kreg::interpolation::{as_polynomial, interpolate, InterpolationProblem};
use kreg::linalg::Matrix;
use kreg::regularity::{
    cluster_search, find_torus_weights, random_search, rescale_invariance_check, ClusterConfig,
    PointTuple,
};
use kreg::sampling::{
    sample_distinct_points, sample_nonzero_rational, sample_point, trial_rng, SamplerConfig,
};
use kreg::schemes::{
    apolar_annihilator, apolar_hilbert, avoidance_experiment, contract, hilbert_function,
    FiniteLocalAlgebra, SchemeFamily,
};
use kreg::{PolyMap, Polynomial, Rational};

const GOLDEN_THM3: &str = include_str!("golden/thm3_n3_k4_mirror.json");
const GOLDEN_THM4: &str = include_str!("golden/thm4_n3_k5.json");

const RANDOM_TRIALS_K4: u64 = 10_000;
const RANDOM_TRIALS_K5: u64 = 5_000;
const CLUSTER_TRIALS: u64 = 1_000;
const NEGATIVE_CONTROL_TRIALS: u64 = 500;
const RESCALE_PAIRS: u64 = 100;
const AVOIDANCE_TRIALS: u64 = 1_000;
const INTERPOLATION_PROBLEMS: u64 = 100;
const ORACLE_MATRICES: u64 = 1_000;
const ORACLE_MAX_SHAPE: (usize, usize) = (8, 16);
const ORACLE_HEIGHT: i64 = 100;

type Outcome = Result<String, String>;

struct Criterion {
    id: u8,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "flagship reproduction",
            budget: Duration::from_secs(1),
            run: flagship,
        },
        Criterion {
            id: 2,
            name: "4-regularity evidence",
            budget: Duration::from_secs(300),
            run: four_regular,
        },
        Criterion {
            id: 3,
            name: "5-regularity evidence",
            budget: Duration::from_secs(600),
            run: five_regular,
        },
        Criterion {
            id: 4,
            name: "negative control",
            budget: Duration::from_secs(60),
            run: negative_control,
        },
        Criterion {
            id: 5,
            name: "torus weights",
            budget: Duration::from_secs(60),
            run: torus_weights,
        },
        Criterion {
            id: 6,
            name: "hilbert and apolarity",
            budget: Duration::from_secs(1),
            run: hilbert_apolar,
        },
        Criterion {
            id: 7,
            name: "avoidance experiments",
            budget: Duration::from_secs(300),
            run: avoidance,
        },
        Criterion {
            id: 8,
            name: "interpolation round trip",
            budget: Duration::from_secs(60),
            run: interpolation,
        },
        Criterion {
            id: 9,
            name: "oracle equivalence",
            budget: Duration::from_secs(60),
            run: oracle_equivalence,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let mut result = (c.run)();
        let took = start.elapsed();
        if result.is_ok() && took > c.budget {
            result = Err(format!("took {took:.2?}, budget {:?}", c.budget));
        }
        match result {
            Ok(detail) => println!("PASS [{}] {} ({took:.2?}): {detail}", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {} ({took:.2?}): {why}", c.id, c.name);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(a: i64) -> Rational {
    Rational::from_integer(BigInt::from(a))
}

/// Parses a tuple written in `s, t, u`.
fn published(tuple: &str) -> PolyMap {
    let comps = tuple
        .split(',')
        .map(|c| {
            let c = c
                .trim()
                .replace('s', "x1")
                .replace('t', "x2")
                .replace('u', "x3");
            Polynomial::parse(&c, Some(3)).unwrap()
        })
        .collect();
    PolyMap::new(3, comps).unwrap()
}

fn flagship() -> Outcome {
    let cases = [
        (
            [
                "kreg",
                "construct",
                "--family",
                "thm3",
                "--n",
                "3",
                "--k",
                "4",
                "--mirror",
            ]
            .as_slice(),
            GOLDEN_THM3,
            "1,s,t,u,st,su,tu,s^2,s^3-t^2,t^3-u^2,u^3",
            11,
        ),
        (
            [
                "kreg",
                "construct",
                "--family",
                "thm4",
                "--n",
                "3",
                "--k",
                "5",
            ]
            .as_slice(),
            GOLDEN_THM4,
            "1,s,t,u,st,su,tu,s^2,t^2,u^2,u^3,t^4-s^3,u^4-t^3,s^4",
            14,
        ),
    ];
    for (args, golden, tuple, size) in cases {
        let out = kreg_cli::run(args.iter().copied());
        ensure(out.code == 0, || format!("{args:?} exited {}", out.code))?;
        ensure(out.stdout == golden, || {
            format!("{args:?} differs from its golden file")
        })?;
        let map = PolyMap::from_json(&serde_json::from_str(&out.stdout).unwrap()).unwrap();
        let tuple = tuple
            .replace("st", "s*t")
            .replace("su", "s*u")
            .replace("tu", "t*u");
        ensure(map.len() == size, || {
            format!("{} components, expected {size}", map.len())
        })?;
        ensure(same_components(&map, &published(&tuple)), || {
            format!("component set differs from ({tuple})")
        })?;
    }
    Ok("11- and 14-component tuples match the published maps and golden JSON".into())
}

fn regularity_campaign(map: &PolyMap, k: usize, random: u64, seeds: (u64, u64)) -> Outcome {
    let cfg = SamplerConfig::default();
    let r = random_search::<Rational>(map, k, random, seeds.0, &cfg).map_err(|e| e.to_string())?;
    if let Some(ce) = &r.counterexample {
        return Err(format!(
            "random counterexample at trial {}: rank {}",
            ce.trial, ce.rank
        ));
    }
    let cluster = ClusterConfig::default();
    let c = cluster_search::<Rational>(map, k, CLUSTER_TRIALS, seeds.1, &cfg, &cluster)
        .map_err(|e| e.to_string())?;
    if let Some(ce) = &c.counterexample {
        return Err(format!(
            "cluster counterexample at trial {} (scale {:?}): rank {}",
            ce.trial, ce.scale, ce.rank
        ));
    }
    Ok(format!(
        "{} random + {} cluster trials ({} scales), no counterexample",
        r.trials_run,
        c.trials_run,
        cluster.scales.len()
    ))
}

fn four_regular() -> Outcome {
    regularity_campaign(
        &thm3_map(3, 4, true).unwrap(),
        4,
        RANDOM_TRIALS_K4,
        (41, 42),
    )
}

fn five_regular() -> Outcome {
    regularity_campaign(
        &thm4_map(3, 5, false).unwrap(),
        5,
        RANDOM_TRIALS_K5,
        (51, 52),
    )
}

/// Minimal `Q(i)` arithmetic for the oracle.
#[derive(Clone, PartialEq, Debug)]
struct Gq(Rational, Rational);

trait Field: Clone + PartialEq {
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;
}

impl Field for Rational {
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

impl Field for Gq {
    fn one() -> Self {
        Gq(q(1), q(0))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.0) && Zero::is_zero(&self.1)
    }
    fn add(&self, o: &Self) -> Self {
        Gq(&self.0 + &o.0, &self.1 + &o.1)
    }
    fn mul(&self, o: &Self) -> Self {
        Gq(
            &self.0 * &o.0 - &self.1 * &o.1,
            &self.0 * &o.1 + &self.1 * &o.0,
        )
    }
    fn neg(&self) -> Self {
        Gq(-&self.0, -&self.1)
    }
    fn inv(&self) -> Self {
        let n = &self.0 * &self.0 + &self.1 * &self.1;
        Gq(&self.0 / &n, -&self.1 / &n)
    }
}

/// Textbook Gauss–Jordan rank.
fn oracle_rank<F: Field>(mut a: Vec<Vec<F>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].inv();
        let piv: Vec<F> = a[r].iter().map(|x| x.mul(&inv)).collect();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].neg();
                for j in 0..cols {
                    row[j] = row[j].add(&f.mul(&piv[j]));
                }
            }
        }
        a[r] = piv;
        r += 1;
    }
    r
}

fn parse_q(v: &Value) -> Rational {
    let s = v.as_str().unwrap();
    match s.split_once('/') {
        Some((a, b)) => Rational::new(a.parse().unwrap(), b.parse().unwrap()),
        None => Rational::from_integer(s.parse().unwrap()),
    }
}

fn negative_control() -> Outcome {
    let dir = std::env::temp_dir().join(format!("kreg-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let path = dir.join("real3reg.json");
    std::fs::write(&path, real3reg_map(2).unwrap().to_json_string()).map_err(|e| e.to_string())?;
    let trials = NEGATIVE_CONTROL_TRIALS.to_string();
    let out = kreg_cli::run([
        "kreg",
        "verify",
        "--map",
        path.to_str().unwrap(),
        "--k",
        "3",
        "--mode",
        "random",
        "--seed",
        "1",
        "--trials",
        &trials,
        "--field",
        "gaussian",
    ]);
    let _ = std::fs::remove_dir_all(&dir);
    ensure(out.code == 1, || {
        format!("expected exit 1, got {}: {}", out.code, out.stderr)
    })?;
    let report: Value = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
    let pts = report["counterexample"]["points"]
        .as_array()
        .ok_or("no witness points")?;
    ensure(pts.len() == 3, || {
        format!("witness has {} points", pts.len())
    })?;
    // Re-evaluate (1, x, y, x² + y²) and rank with the oracle.
    let rows: Vec<Vec<Gq>> = pts
        .iter()
        .map(|p| {
            let c: Vec<Gq> = p
                .as_array()
                .unwrap()
                .iter()
                .map(|z| Gq(parse_q(&z["re"]), parse_q(&z["im"])))
                .collect();
            let sq = c[0].mul(&c[0]).add(&c[1].mul(&c[1]));
            vec![Gq::one(), c[0].clone(), c[1].clone(), sq]
        })
        .collect();
    for i in 0..3 {
        for j in i + 1..3 {
            ensure(rows[i] != rows[j], || {
                "witness points are not distinct".into()
            })?;
        }
    }
    let rank = oracle_rank(rows);
    ensure(rank == 2, || format!("oracle rank {rank}, expected 2"))?;
    Ok(format!(
        "3-point witness at trial {} of {NEGATIVE_CONTROL_TRIALS}; oracle rank 2",
        report["counterexample"]["trial"]
    ))
}

fn torus_weights() -> Outcome {
    let cfg = SamplerConfig::default();
    for (map, k, expect, seed) in [
        (thm3_map(3, 4, true).unwrap(), 4, [4u64, 6, 9], 5u64),
        (thm4_map(3, 5, false).unwrap(), 5, [16, 12, 9], 6),
    ] {
        let w = find_torus_weights(&map).ok_or("no weights found")?;
        ensure(w.as_slice() == expect, || {
            format!("weights {:?}, expected {expect:?}", w.as_slice())
        })?;
        for t in 0..RESCALE_PAIRS {
            let mut rng = trial_rng(seed, t);
            let tuple =
                PointTuple::new(sample_distinct_points::<Rational, _>(&mut rng, &cfg, 3, k))
                    .map_err(|e| e.to_string())?;
            let lambda = sample_nonzero_rational(&mut rng, &cfg);
            let ok =
                rescale_invariance_check(&map, &w, &tuple, &lambda).map_err(|e| e.to_string())?;
            ensure(ok, || format!("rank changed under rescaling at pair {t}"))?;
        }
    }
    Ok(format!(
        "(4,6,9) and (16,12,9); {RESCALE_PAIRS} rescalings per map keep rank"
    ))
}

fn hilbert_apolar() -> Outcome {
    for (alg, expect) in [
        ("curvilinear:4", vec![1, 1, 1, 1]),
        ("special:5", vec![1, 2, 1, 1]),
        ("monomial:x1^2,x1*x2,x2^2", vec![1, 2]),
    ] {
        let a: FiniteLocalAlgebra = alg.parse().map_err(|e: kreg::Error| e.to_string())?;
        let h = hilbert_function(&a);
        ensure(h.values() == expect.as_slice(), || {
            format!("H({alg}) = {h}")
        })?;
    }
    let f = Polynomial::parse("y1^2 + y2^2", Some(2)).unwrap();
    let gens = apolar_annihilator(&f).map_err(|e| e.to_string())?;
    let expect = [
        Polynomial::parse("x1*x2", Some(2)).unwrap(),
        Polynomial::parse("x1^2 - x2^2", Some(2)).unwrap(),
    ];
    ensure(gens == expect, || format!("Ann generators {gens:?}"))?;
    for g in &gens {
        ensure(contract(g, &f).unwrap().is_zero(), || {
            format!("{g} does not annihilate")
        })?;
    }
    let h = apolar_hilbert(&f).map_err(|e| e.to_string())?;
    ensure(h.values() == [1, 2, 1] && h.is_palindrome(), || {
        format!("apolar H = {h}")
    })?;
    Ok(
        "(1,1,1,1), (1,2,1,1), (1,2); Ann = (x1x2, x1^2-x2^2); apolar H = (1,2,1) palindromic"
            .into(),
    )
}

fn avoidance() -> Outcome {
    let cfg = SamplerConfig::default();
    let mut runs = 0;
    let mut centers = 0;
    for (k, mirror, subtop) in [(4u32, true, false), (5, false, true)] {
        let (stages, _) = projection_pipeline(3, k, mirror, subtop).map_err(|e| e.to_string())?;
        let k = k as usize;
        for (s, st) in stages.iter().enumerate() {
            centers += 1;
            for fam in [
                SchemeFamily::Curvilinear(k),
                SchemeFamily::Curvilinear(k - 1),
                SchemeFamily::Special(k),
            ] {
                let rep = avoidance_experiment::<Rational>(
                    &st.map,
                    &st.center,
                    fam,
                    AVOIDANCE_TRIALS,
                    1000 + s as u64,
                    &cfg,
                )
                .map_err(|e| e.to_string())?;
                runs += 1;
                ensure(rep.violations == 0, || {
                    format!("{:?} with {fam}: {} violations", st.kind, rep.violations)
                })?;
            }
        }
    }
    Ok(format!(
        "{centers} centers x 3 families x {AVOIDANCE_TRIALS} embeddings ({runs} runs), no violations"
    ))
}

fn interpolation() -> Outcome {
    let cfg = SamplerConfig::default();
    let families: [(&str, PolyMap, usize); 4] = [
        ("thm3", thm3_map(3, 4, true).unwrap(), 4),
        ("thm4", thm4_map(3, 5, false).unwrap(), 5),
        ("veronese", veronese_map(3, 3).unwrap(), 4),
        ("base", base_map(3, 4).unwrap(), 4),
    ];
    for (name, map, k) in &families {
        for t in 0..INTERPOLATION_PROBLEMS {
            let mut rng = trial_rng(80, t);
            let nodes =
                PointTuple::new(sample_distinct_points::<Rational, _>(&mut rng, &cfg, 3, *k))
                    .map_err(|e| e.to_string())?;
            let values: Vec<Rational> = sample_point(&mut rng, &cfg, *k);
            let prob = InterpolationProblem::new(map.clone(), nodes.clone(), values.clone())
                .map_err(|e| e.to_string())?;
            let c = interpolate(&prob).map_err(|e| format!("{name} problem {t}: {e}"))?;
            let p = as_polynomial(map, &c).map_err(|e| e.to_string())?;
            for (pt, v) in nodes.points().iter().zip(&values) {
                ensure(&p.eval(pt).unwrap() == v, || {
                    format!("{name} problem {t} misses a node")
                })?;
            }
        }
    }
    let table = [
        (thm3_size(3, 4), generic_bound(3, 4)),
        (thm4_size(3, 5), generic_bound(3, 5)),
    ];
    ensure(table == [(11, 15), (14, 19)], || {
        format!("dimension table {table:?}")
    })?;
    ensure(
        families[0].1.len() == 11 && families[1].1.len() == 14,
        || "map sizes".into(),
    )?;
    Ok(format!(
        "{INTERPOLATION_PROBLEMS} problems x 4 families exact; 11 < 15 and 14 < 19"
    ))
}

fn oracle_equivalence() -> Outcome {
    let mut deficient = 0;
    for t in 0..ORACLE_MATRICES {
        let mut rng = trial_rng(9, t);
        let r = rng.gen_range(1..=ORACLE_MAX_SHAPE.0);
        let c = rng.gen_range(1..=ORACLE_MAX_SHAPE.1);
        let mut rows: Vec<Vec<Rational>> = (0..r)
            .map(|_| {
                (0..c)
                    .map(|_| {
                        let a = rng.gen_range(-ORACLE_HEIGHT..=ORACLE_HEIGHT);
                        let b = rng.gen_range(1..=ORACLE_HEIGHT);
                        Rational::new(BigInt::from(a), BigInt::from(b))
                    })
                    .collect()
            })
            .collect();
        // Force dependencies in half the cases without raising heights.
        if rng.gen_bool(0.5) && r > 1 {
            for i in 1..r {
                if rng.gen_bool(0.5) {
                    let j = rng.gen_range(0..i);
                    rows[i] = if rng.gen_bool(0.5) {
                        rows[j].clone()
                    } else {
                        rows[j].iter().map(|x| -x).collect()
                    };
                }
            }
        }
        let height_ok = rows.iter().flatten().all(|x| {
            x.numer().abs() <= BigInt::from(ORACLE_HEIGHT)
                && x.denom() <= &BigInt::from(ORACLE_HEIGHT)
        });
        ensure(height_ok, || {
            "generated entry exceeds the height bound".into()
        })?;
        let m = Matrix::from_rows(rows.clone()).unwrap();
        let (fast, slow) = (m.rank(), oracle_rank(rows));
        ensure(fast == slow, || {
            format!("matrix {t}: Bareiss {fast}, Gauss-Jordan {slow}")
        })?;
        if fast < r.min(c) {
            deficient += 1;
        }
    }
    Ok(format!(
        "{ORACLE_MATRICES} matrices agree ({deficient} rank-deficient)"
    ))
}
