//! The `kreg` command line.
//!
//! Every subcommand writes one JSON document to stdout. Exit codes: `0` when
//! the command succeeded and any checked property held, `1` when a
//! counterexample or violation was found (the payload carries the witness),
//! `2` on malformed input.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use kreg::constructions::{
    generic_bound, generic_bound_caveat, thm3_size, thm4_size, Family, MapRecipe,
};
use kreg::interpolation::{interpolate, interpolation_json, InterpolationProblem};
use kreg::regularity::{
    cluster_search, find_torus_weights_with, random_search, ClusterConfig, PointTuple,
};
use kreg::sampling::{Field, SampleScalar, SamplerConfig};
use kreg::schemes::{
    apolar_annihilator, apolar_hilbert, avoidance_experiment, check_hilbert_properties,
    contraction_span_dim, hilbert_function, FiniteLocalAlgebra, SchemeFamily,
};
use kreg::{Error, GaussianRational, PolyMap, Polynomial, Rational, Scalar};

#[derive(Parser, Debug)]
#[command(
    name = "kreg",
    version,
    about = "Construct and verify k-regular polynomial maps"
)]
pub struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a constructed map as JSON.
    Construct {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// Regularity parameter; the degree `r` for `veronese`.
        #[arg(long, default_value_t = 0)]
        k: u32,
        /// Use the variable-reversed convention.
        #[arg(long)]
        mirror: bool,
    },
    /// Search for k-point tuples on which the map is rank deficient.
    Verify {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Mode::Random)]
        mode: Mode,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        trials: u64,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[arg(long, default_value_t = 3)]
        curve_degree: u32,
        /// Cluster scales are 2^0 .. 2^-max_scale_exp.
        #[arg(long, default_value_t = 12)]
        max_scale_exp: u32,
    },
    /// Find positive weights making every component weighted homogeneous.
    Weights {
        #[arg(long)]
        map: PathBuf,
        /// Coefficient box for multi-dimensional weight cones.
        #[arg(long, default_value_t = kreg::regularity::WEIGHT_SEARCH_BOUND)]
        bound: i64,
    },
    /// Solve an interpolation problem in the span of the map.
    Interpolate {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        nodes: PathBuf,
        #[arg(long)]
        values: PathBuf,
        #[arg(long, value_enum, default_value_t = FieldArg::Rational)]
        field: FieldArg,
    },
    /// Hilbert function of a finite local algebra.
    Hilbert {
        /// `curvilinear:K`, `special:K` or `monomial:g1,g2,...`.
        #[arg(long)]
        algebra: String,
        /// Also check that the last nonzero value is 1.
        #[arg(long)]
        gorenstein: bool,
    },
    /// Annihilator and Hilbert function of a dual socle generator.
    Apolar {
        #[arg(long)]
        socle: String,
        /// Number of dual variables; defaults to the largest index used.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Count sampled scheme embeddings whose span contains a point.
    Avoid {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        center: PathBuf,
        /// `curvilinear:K` or `special:K`.
        #[arg(long)]
        family: String,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        sampler: SamplerArgs,
    },
    /// Component counts of the generic bound and the explicit families.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Random,
    Cluster,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FieldArg {
    Rational,
    Gaussian,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Rational => Field::Rational,
            FieldArg::Gaussian => Field::Gaussian,
        }
    }
}

#[derive(Args, Debug)]
struct SamplerArgs {
    #[arg(long, value_enum, default_value_t = FieldArg::Rational)]
    field: FieldArg,
    /// Numerators are drawn from [-num_bound, num_bound].
    #[arg(long, default_value_t = 10)]
    num_bound: i64,
    /// Denominators are drawn from [1, den_max].
    #[arg(long, default_value_t = 8)]
    den_max: u64,
    /// Disable the isotropic-line sampler that `--field gaussian` turns on.
    #[arg(long)]
    no_isotropic: bool,
}

impl SamplerArgs {
    fn config(&self) -> SamplerConfig {
        SamplerConfig {
            num_bound: self.num_bound,
            den_max: self.den_max,
            isotropic_lines: self.field == FieldArg::Gaussian && !self.no_isotropic,
        }
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(msg: impl std::fmt::Display) -> Self {
        Self {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

/// A JSON payload plus whether a counterexample or violation was found.
struct Report {
    value: Value,
    failed: bool,
}

impl Report {
    fn ok(value: Value) -> Self {
        Self {
            value,
            failed: false,
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome {
                        code: 0,
                        stdout: text,
                        stderr: String::new(),
                    }
                }
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let report = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => return Outcome::input_error(e),
    };
    let mut text = serde_json::to_string_pretty(&report.value).expect("json values serialize");
    text.push('\n');
    let code = i32::from(report.failed);
    match &cli.output {
        Some(path) => match fs::write(path, &text) {
            Ok(()) => Outcome {
                code,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => Outcome::input_error(format!("cannot write {}: {e}", path.display())),
        },
        None => Outcome {
            code,
            stdout: text,
            stderr: String::new(),
        },
    }
}

fn execute(cmd: &Command) -> Result<Report, Error> {
    match cmd {
        Command::Construct {
            family,
            n,
            k,
            mirror,
        } => {
            let recipe = MapRecipe {
                family: family.parse::<Family>()?,
                n: *n,
                k: *k,
                mirror: *mirror,
            };
            Ok(Report::ok(recipe.build()?.to_json()))
        }
        Command::Verify {
            map,
            k,
            mode,
            seed,
            trials,
            sampler,
            curve_degree,
            max_scale_exp,
        } => {
            let map = read_map(map)?;
            let cfg = sampler.config();
            let cluster = ClusterConfig {
                curve_degree: *curve_degree,
                scales: (0..=*max_scale_exp)
                    .map(|m| Rational::new(BigInt::one(), BigInt::from(2).pow(m)))
                    .collect(),
            };
            match Field::from(sampler.field) {
                Field::Rational => {
                    verify::<Rational>(&map, *k, *mode, *seed, *trials, &cfg, &cluster)
                }
                Field::Gaussian => {
                    verify::<GaussianRational>(&map, *k, *mode, *seed, *trials, &cfg, &cluster)
                }
            }
        }
        Command::Weights { map, bound } => {
            let map = read_map(map)?;
            if *bound < 1 {
                return Err(Error::InvalidInput("--bound must be positive".into()));
            }
            Ok(match find_torus_weights_with(&map, *bound) {
                Some(w) => Report::ok(json!({ "weights": w.as_slice() })),
                None => Report {
                    value: json!({ "weights": null }),
                    failed: true,
                },
            })
        }
        Command::Interpolate {
            map,
            nodes,
            values,
            field,
        } => {
            let map = read_map(map)?;
            let nodes = read_json(nodes)?;
            let values = read_json(values)?;
            match Field::from(*field) {
                Field::Rational => run_interpolation::<Rational>(map, &nodes, &values),
                Field::Gaussian => run_interpolation::<GaussianRational>(map, &nodes, &values),
            }
        }
        Command::Hilbert {
            algebra,
            gorenstein,
        } => {
            let alg: FiniteLocalAlgebra = algebra.parse()?;
            let h = hilbert_function(&alg);
            let violations = check_hilbert_properties(&h, alg.dim(), *gorenstein);
            Ok(Report {
                failed: !violations.is_empty(),
                value: json!({
                    "algebra": alg.to_string(),
                    "length": alg.dim(),
                    "hilbert": h.to_json(),
                    "violations": violations,
                }),
            })
        }
        Command::Apolar { socle, n } => {
            let f = Polynomial::parse(socle, *n)?;
            let gens = apolar_annihilator(&f)?;
            let hilbert = if f.is_homogeneous() {
                Some(apolar_hilbert(&f)?)
            } else {
                None
            };
            Ok(Report::ok(json!({
                "socle": f.format_with("y"),
                "generators": gens.iter().map(|g| g.format_with("x")).collect::<Vec<_>>(),
                "generators_json": gens.iter().map(Polynomial::to_json).collect::<Vec<_>>(),
                "length": contraction_span_dim(&f)?,
                "hilbert": hilbert.as_ref().map(|h| h.to_json()),
                "palindromic": hilbert.as_ref().map(|h| h.is_palindrome()),
            })))
        }
        Command::Avoid {
            map,
            center,
            family,
            trials,
            seed,
            sampler,
        } => {
            let map = read_map(map)?;
            let center = read_json(center)?;
            let family: SchemeFamily = family.parse()?;
            let cfg = sampler.config();
            match Field::from(sampler.field) {
                Field::Rational => avoid::<Rational>(&map, &center, family, *trials, *seed, &cfg),
                Field::Gaussian => {
                    avoid::<GaussianRational>(&map, &center, family, *trials, *seed, &cfg)
                }
            }
        }
        Command::Bounds { n, k } => {
            if *n == 0 || *k == 0 {
                return Err(Error::InvalidInput("bounds need n >= 1 and k >= 1".into()));
            }
            let mut out = serde_json::Map::new();
            out.insert("generic".into(), json!(generic_bound(*n, *k)));
            if *n >= 2 && *k > 3 {
                out.insert("thm3".into(), json!(thm3_size(*n, *k)));
            }
            if *n >= 2 && *k > 4 {
                out.insert("thm4".into(), json!(thm4_size(*n, *k)));
            }
            if let Some(c) = generic_bound_caveat(*n, *k) {
                out.insert("caveat".into(), json!(c));
            }
            Ok(Report::ok(Value::Object(out)))
        }
    }
}

fn verify<S: SampleScalar>(
    map: &PolyMap,
    k: usize,
    mode: Mode,
    seed: u64,
    trials: u64,
    cfg: &SamplerConfig,
    cluster: &ClusterConfig,
) -> Result<Report, Error> {
    let rep = match mode {
        Mode::Random => random_search::<S>(map, k, trials, seed, cfg)?,
        Mode::Cluster => cluster_search::<S>(map, k, trials, seed, cfg, cluster)?,
    };
    let mut value = rep.to_json();
    value["mode"] = json!(match mode {
        Mode::Random => "random",
        Mode::Cluster => "cluster",
    });
    value["field"] = json!(S::FIELD);
    Ok(Report {
        failed: rep.counterexample.is_some(),
        value,
    })
}

fn run_interpolation<S: Scalar>(
    map: PolyMap,
    nodes: &Value,
    values: &Value,
) -> Result<Report, Error> {
    let nodes = PointTuple::<S>::from_json(nodes)?;
    let values = scalar_list::<S>(values, "values")?;
    let prob = InterpolationProblem::new(map, nodes, values)?;
    match interpolate(&prob) {
        Ok(c) => Ok(Report::ok(interpolation_json(&prob.map, &c)?)),
        Err(Error::NotRegularOnNodes { rank, k }) => Ok(Report {
            value: json!({ "error": "not-regular-on-nodes", "rank": rank, "k": k }),
            failed: true,
        }),
        Err(e) => Err(e),
    }
}

fn avoid<S: SampleScalar>(
    map: &PolyMap,
    center: &Value,
    family: SchemeFamily,
    trials: u64,
    seed: u64,
    cfg: &SamplerConfig,
) -> Result<Report, Error> {
    let p = scalar_list::<S>(center, "center")?;
    let rep = avoidance_experiment::<S>(map, &p, family, trials, seed, cfg)?;
    Ok(Report {
        failed: rep.violations > 0,
        value: rep.to_json(),
    })
}

/// Accepts a bare array or an object holding the array under `key`.
fn scalar_list<S: Scalar>(v: &Value, key: &str) -> Result<Vec<S>, Error> {
    v.get(key)
        .unwrap_or(v)
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected an array of scalars for {key}")))?
        .iter()
        .map(S::from_json)
        .collect()
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_map(path: &Path) -> Result<PolyMap, Error> {
    PolyMap::from_json(&read_json(path)?)
}
