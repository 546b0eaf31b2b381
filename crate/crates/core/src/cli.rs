//! Command-line front end: parses a distribution, dispatches to a closed form,
//! the general engine or the oracle, and prints JSON.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::debug;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::characterizer::{
    is_strict, optimal_proxy_general, search_window, Family, ProxyResult, SolverConfig,
};
use crate::closed_forms::{
    asymmetric_three_mass_proxy, bernoulli_proxy, binomial_proxy, discrete_uniform_proxy,
    symmetric_three_mass_proxy, ThreeMassParams,
};
use crate::distribution::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::oracle::{export_curve, optimal_proxy_oracle, CurveRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

pub const DEFAULT_ORACLE_TOL: f64 = 1e-6;
const DEFAULT_CURVE_SAMPLES: usize = 1001;

/// Which solver to use.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodChoice {
    /// closed form when the family has one, general engine otherwise
    #[default]
    Auto,
    ClosedForm,
    General,
    Oracle,
}

/// A distribution family with its parameters.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DistributionKind {
    Bernoulli {
        p: f64,
    },
    Binomial {
        n: u32,
        p: f64,
    },
    ThreeMass {
        p1: f64,
        p2: f64,
        #[serde(default = "one")]
        a: f64,
    },
    Uniform {
        n: u32,
        #[serde(default = "one")]
        a: f64,
        #[serde(default)]
        b: f64,
    },
    Discrete {
        atoms: Vec<f64>,
        weights: Vec<f64>,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionSpec {
    pub kind: DistributionKind,
    pub method: MethodChoice,
}

impl DistributionKind {
    fn numbers(&self) -> Vec<f64> {
        match self {
            DistributionKind::Bernoulli { p } | DistributionKind::Binomial { p, .. } => vec![*p],
            DistributionKind::ThreeMass { p1, p2, a } => vec![*p1, *p2, *a],
            DistributionKind::Uniform { a, b, .. } => vec![*a, *b],
            DistributionKind::Discrete { atoms, weights } => {
                atoms.iter().chain(weights).copied().collect()
            }
        }
    }

    /// The distribution as explicit atoms and weights.
    pub fn distribution(&self) -> Result<DiscreteDistribution> {
        match *self {
            DistributionKind::Bernoulli { p } => DiscreteDistribution::bernoulli(p),
            DistributionKind::Binomial { n, p } => DiscreteDistribution::binomial(n, p),
            DistributionKind::ThreeMass { p1, p2, a } => DiscreteDistribution::three_mass(p1, p2, a),
            DistributionKind::Uniform { n, a, b } => {
                if a == 0.0 || !a.is_finite() {
                    return Err(crate::error::invalid("a", a, "must be finite and nonzero"));
                }
                DiscreteDistribution::uniform(n)?.affine_transform(a, b)
            }
            DistributionKind::Discrete {
                ref atoms,
                ref weights,
            } => DiscreteDistribution::new(atoms, weights),
        }
    }

    fn has_closed_form(&self) -> bool {
        !matches!(self, DistributionKind::Discrete { .. })
    }

    fn closed_form(&self) -> Result<ProxyResult> {
        match *self {
            DistributionKind::Bernoulli { p } => {
                let s = bernoulli_proxy(p)?;
                let var = p * (1.0 - p);
                Ok(ProxyResult::closed_form(Family::Bernoulli, s, var, is_strict(s, var)))
            }
            DistributionKind::Binomial { n, p } => {
                let s = binomial_proxy(n, p)?;
                let var = f64::from(n) * p * (1.0 - p);
                Ok(ProxyResult::closed_form(Family::Binomial, s, var, is_strict(s, var)))
            }
            DistributionKind::ThreeMass { p1, p2, a } => {
                if p1 == p2 {
                    symmetric_three_mass_proxy(p1, a)
                } else {
                    asymmetric_three_mass_proxy(ThreeMassParams::new(p1, p2, a)?)
                }
            }
            DistributionKind::Uniform { n, a, b } => discrete_uniform_proxy(n, a, b),
            DistributionKind::Discrete { .. } => Err(Error::Spec(
                "no closed form for an explicit discrete distribution; use --method general".into(),
            )),
        }
    }
}

impl DistributionSpec {
    /// Computes σ²_opt with the requested method.
    pub fn solve(&self, oracle_tol: f64) -> Result<ProxyResult> {
        if let Some(x) = self.kind.numbers().iter().find(|x| !x.is_finite()) {
            return Err(Error::Spec(format!("non-finite parameter {x}")));
        }
        let method = match self.method {
            MethodChoice::Auto if self.kind.has_closed_form() => MethodChoice::ClosedForm,
            MethodChoice::Auto => MethodChoice::General,
            m => m,
        };
        debug!("solving {:?} with {:?}", self.kind, method);
        match method {
            MethodChoice::ClosedForm => self.kind.closed_form(),
            MethodChoice::General => {
                optimal_proxy_general(&self.kind.distribution()?, &SolverConfig::default())
            }
            MethodChoice::Oracle => optimal_proxy_oracle(&self.kind.distribution()?, oracle_tol),
            MethodChoice::Auto => unreachable!(),
        }
    }
}

/// Parses a JSON distribution file.
///
/// Accepts either `{"atoms": [...], "weights": [...]}` or a tagged object
/// such as `{"kind": "bernoulli", "p": 0.1}`. An optional `"method"` field
/// selects the solver.
pub fn parse_spec_file(path: &Path) -> Result<DistributionSpec> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Spec(format!("cannot read {}: {e}", path.display())))?;
    parse_spec_str(&text)
}

pub fn parse_spec_str(text: &str) -> Result<DistributionSpec> {
    let mut value: Value =
        serde_json::from_str(text).map_err(|e| Error::Spec(format!("malformed JSON: {e}")))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Error::Spec("spec must be a JSON object".into()))?;
    let method = match obj.remove("method") {
        Some(m) => serde_json::from_value(m)
            .map_err(|e| Error::Spec(format!("invalid method: {e}")))?,
        None => MethodChoice::Auto,
    };
    if !obj.contains_key("kind") {
        obj.insert("kind".into(), Value::from("discrete"));
    }
    let kind: DistributionKind =
        serde_json::from_value(value).map_err(|e| Error::Spec(format!("invalid spec: {e}")))?;
    if let Some(x) = kind.numbers().iter().find(|x| !x.is_finite()) {
        return Err(Error::Spec(format!("non-finite number {x}")));
    }
    Ok(DistributionSpec { kind, method })
}

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros dropped.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else { format!("{x}") };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let fixed = format!("{:.*}", (16 - exp) as usize, x);
        trim_fraction(&fixed).to_string()
    } else {
        format!("{}e{}{:02}", trim_fraction(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

struct G17Formatter;

impl Formatter for G17Formatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(format_g17(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }
}

/// Serializes with every float printed to 17 significant digits.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, G17Formatter);
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(buf).expect("utf-8 JSON")
}

/// Writes curve rows as `lambda,g,g1,g2,h` CSV.
pub fn write_curve_csv<W: Write>(rows: &[CurveRow], mut out: W) -> io::Result<()> {
    writeln!(out, "lambda,g,g1,g2,h")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            format_g17(r.lambda),
            format_g17(r.g),
            format_g17(r.g1),
            format_g17(r.g2),
            format_g17(r.h)
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct JsonCandidate {
    lambda: f64,
    s: f64,
    local_min: bool,
}

#[derive(Serialize)]
struct JsonOutput<'a> {
    sigma2_opt: f64,
    variance: f64,
    strict: bool,
    method: String,
    candidates: Vec<JsonCandidate>,
    diagnostics: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    curve: Option<CurveInfo<'a>>,
}

#[derive(Serialize)]
struct CurveInfo<'a> {
    path: &'a Path,
    sigma2: f64,
    rows: usize,
}

#[derive(Debug, Parser)]
#[command(
    name = "subgauss",
    version,
    about = "Optimal sub-Gaussian variance proxy of finite discrete distributions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Solver selection
    #[arg(long, global = true, value_enum, default_value_t = MethodChoice::Auto)]
    method: MethodChoice,

    /// Emit JSON (the only output format)
    #[arg(long, global = true)]
    json: bool,

    /// Write λ ↦ (g, g', g'', h) samples to this CSV file
    #[arg(long, global = true, value_name = "OUT.csv")]
    curve: Option<PathBuf>,

    #[arg(long = "lambda-min", global = true, allow_negative_numbers = true)]
    lambda_min: Option<f64>,

    #[arg(long = "lambda-max", global = true, allow_negative_numbers = true)]
    lambda_max: Option<f64>,

    #[arg(long, global = true)]
    samples: Option<usize>,

    /// σ² for the curve: a number or `opt`
    #[arg(long, global = true, value_name = "S|opt")]
    sigma2: Option<String>,

    /// Relative tolerance of the oracle bisection
    #[arg(long, global = true, value_name = "R")]
    tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Two-point law on {0, 1}
    Bernoulli {
        #[arg(long)]
        p: f64,
    },
    /// Binomial(n, p)
    Binomial {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: f64,
    },
    /// Law on {-a, 0, a} with masses p1, 1 - p1 - p2, p2
    ThreeMass {
        #[arg(long)]
        p1: f64,
        #[arg(long)]
        p2: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
    /// Uniform law on {a + b, 2a + b, ..., na + b}
    Uniform {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        b: f64,
    },
    /// Arbitrary atoms and weights, inline or from a JSON file
    Discrete {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "weights")]
        atoms: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', requires = "atoms")]
        weights: Option<Vec<f64>>,
        #[arg(long, value_name = "FILE.json", conflicts_with_all = ["atoms", "weights"])]
        spec: Option<PathBuf>,
    },
}

enum Failure {
    Invalid(String),
    Solver(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Invalid(e.to_string())
        } else {
            Failure::Solver(e.to_string())
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T, O, E>(args: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_INVALID
                }
            };
        }
    };
    match execute(cli) {
        Ok(json) => {
            let _ = writeln!(out, "{json}");
            EXIT_OK
        }
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Solver(msg)) => {
            let _ = writeln!(err, "solver failure: {msg}");
            EXIT_SOLVER
        }
    }
}

fn execute(cli: Cli) -> std::result::Result<String, Failure> {
    let g = cli.global;
    let mut spec = match cli.command {
        Command::Bernoulli { p } => DistributionSpec {
            kind: DistributionKind::Bernoulli { p },
            method: MethodChoice::Auto,
        },
        Command::Binomial { n, p } => DistributionSpec {
            kind: DistributionKind::Binomial { n, p },
            method: MethodChoice::Auto,
        },
        Command::ThreeMass { p1, p2, a } => DistributionSpec {
            kind: DistributionKind::ThreeMass { p1, p2, a },
            method: MethodChoice::Auto,
        },
        Command::Uniform { n, a, b } => DistributionSpec {
            kind: DistributionKind::Uniform { n, a, b },
            method: MethodChoice::Auto,
        },
        Command::Discrete {
            atoms: Some(atoms),
            weights: Some(weights),
            spec: None,
        } => DistributionSpec {
            kind: DistributionKind::Discrete { atoms, weights },
            method: MethodChoice::Auto,
        },
        Command::Discrete {
            spec: Some(path), ..
        } => parse_spec_file(&path)?,
        Command::Discrete { .. } => {
            return Err(Failure::Invalid(
                "discrete needs --atoms and --weights, or --spec".into(),
            ))
        }
    };
    if g.method != MethodChoice::Auto || spec.method == MethodChoice::Auto {
        spec.method = g.method;
    }

    let tol = g.tol.unwrap_or(DEFAULT_ORACLE_TOL);
    if !(tol.is_finite() && tol >= 1e-10) {
        return Err(Failure::Invalid(format!("--tol {tol} must be at least 1e-10")));
    }

    let result = spec.solve(tol)?;

    let curve = match &g.curve {
        Some(path) => {
            let d = spec.kind.distribution()?;
            let sigma2 = match g.sigma2.as_deref() {
                None | Some("opt") => result.sigma2_opt,
                Some(s) => s
                    .parse::<f64>()
                    .map_err(|_| Failure::Invalid(format!("--sigma2 {s} is neither a number nor 'opt'")))?,
            };
            let (default_lo, default_hi) = search_window(&d).unwrap_or((-1.0, 1.0));
            let lo = g.lambda_min.unwrap_or(default_lo);
            let hi = g.lambda_max.unwrap_or(default_hi);
            let samples = g.samples.unwrap_or(DEFAULT_CURVE_SAMPLES);
            let rows = export_curve(&d, sigma2, lo, hi, samples)?;
            let file = fs::File::create(path)
                .map_err(|e| Failure::Invalid(format!("cannot create {}: {e}", path.display())))?;
            write_curve_csv(&rows, io::BufWriter::new(file))
                .map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", path.display())))?;
            Some(CurveInfo {
                path,
                sigma2,
                rows: rows.len(),
            })
        }
        None => None,
    };

    let output = JsonOutput {
        sigma2_opt: result.sigma2_opt,
        variance: result.variance,
        strict: result.strict,
        method: result.method.to_string(),
        candidates: result
            .candidates
            .iter()
            .map(|c| JsonCandidate {
                lambda: c.lambda_c,
                s: c.s_c,
                local_min: c.is_local_min,
            })
            .collect(),
        diagnostics: serde_json::to_value(&result.diagnostics)
            .map_err(|e| Failure::Solver(e.to_string()))?,
        curve,
    };
    Ok(to_json_string(&output))
}
