//! The `symtens` command-line driver.
//!
//! Every invocation prints exactly one document on standard output: a JSON
//! object carrying `schema_version` (default), or plain text. Failures print
//! `{"schema_version", "error": {"kind", "message"}}` and exit with 2 for
//! unparsable input, 3 for a violated precondition and 1 otherwise.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::coxring::{cox_presentation, PresentationKind};
use crate::error::{Error, Result};
use crate::fan::{build_exact_sequence, builtin, library, select_sigma1, validate_fan, Fan};
use crate::hypertoric::{central_fiber_components, CentralFiberReport, HypertoricProblem};
use crate::tensors::{
    certified_degree_bound, generator_report_cached, graded_dims, presentations_agree, Agreement, DiskCache,
    GeneratorReport, GradedDims,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Fiber degree used for generator enumeration when the certified bound is
/// larger and no bound is given.
pub const DEFAULT_DEGREE_CAP: u32 = 4;

#[derive(Debug, Parser)]
#[command(name = "symtens", version, about = "Symmetric tensors of smooth complete toric varieties")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Persistent cache directory; falls back to $SYMTENS_CACHE_DIR.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PresentationArg {
    #[value(name = "R")]
    R,
    #[value(name = "Rprime")]
    Rprime,
    #[value(name = "Rtilde")]
    Rtilde,
    #[value(name = "RtildePrime")]
    RtildePrime,
    #[value(name = "both")]
    Both,
}

impl PresentationArg {
    fn kinds(self) -> Vec<PresentationKind> {
        match self {
            Self::R => vec![PresentationKind::R],
            Self::Rprime => vec![PresentationKind::Rprime],
            Self::Rtilde => vec![PresentationKind::Rtilde],
            Self::RtildePrime => vec![PresentationKind::RtildePrime],
            Self::Both => vec![PresentationKind::R, PresentationKind::Rprime],
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct FanSource {
    /// Fan JSON file: {"dim", "rays", "max_cones"}.
    #[arg(long)]
    pub fan: Option<PathBuf>,
    /// Name of a built-in fan (see `examples`).
    #[arg(long)]
    pub builtin: Option<String>,
}

impl FanSource {
    fn load(&self) -> Result<(String, Fan)> {
        match (&self.fan, &self.builtin) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::precondition(format!("cannot read fan file {}: {e}", path.display())))?;
                Ok((path.display().to_string(), Fan::from_json(&text)?))
            }
            (None, Some(name)) => Ok((name.clone(), builtin(name)?)),
            (None, None) => Err(Error::input("one of --fan or --builtin is required")),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Smoothness and completeness checks.
    Validate {
        #[command(flatten)]
        src: FanSource,
    },
    /// Graded presentations of the fan.
    Cox {
        #[command(flatten)]
        src: FanSource,
        #[arg(long, value_enum, default_value_t = PresentationArg::Both)]
        presentation: PresentationArg,
    },
    /// Graded dimensions of the algebra of symmetric tensors.
    Dims {
        #[command(flatten)]
        src: FanSource,
        #[arg(long, default_value_t = 3)]
        p_max: u32,
        #[arg(long, value_enum, default_value_t = PresentationArg::Rprime)]
        presentation: PresentationArg,
    },
    /// Minimal generators of the invariant monomial semigroup.
    Generators {
        #[command(flatten)]
        src: FanSource,
        #[arg(long)]
        degree_bound: Option<u32>,
    },
    /// Compare graded dimensions of the two presentations.
    Agree {
        #[command(flatten)]
        src: FanSource,
        #[arg(long, default_value_t = 3)]
        p_max: u32,
    },
    /// Unimodularity, walls and central fiber for a stability parameter.
    Hypertoric {
        #[command(flatten)]
        src: FanSource,
        /// Comma-separated rationals, one per row of A.
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long)]
        degree_bound: Option<u32>,
    },
    /// List the built-in fans.
    Examples,
}

/// Exit status and the text written to standard output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input(_) | Error::DimensionMismatch { .. } | Error::Json(_) => 2,
        Error::Precondition(_) => 3,
        Error::Io(_) => 1,
    }
}

fn error_document(kind: &str, message: &str) -> String {
    let v = json!({"schema_version": SCHEMA_VERSION, "error": {"kind": kind, "message": message}});
    serde_json::to_string_pretty(&v).expect("json value serializes")
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: 0, stdout: e.to_string() };
            }
            let msg = e.render().to_string();
            let msg = msg.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            return Outcome { code: 2, stdout: error_document("usage", &msg) };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let stdout = match cli.format {
                Format::Json => {
                    let mut v = report.json;
                    v["schema_version"] = json!(SCHEMA_VERSION);
                    v["command"] = json!(report.command);
                    serde_json::to_string_pretty(&v).expect("json value serializes")
                }
                Format::Text => report.text,
            };
            Outcome { code: report.code, stdout }
        }
        Err(e) => Outcome { code: exit_code(&e), stdout: error_document(e.kind(), &e.to_string()) },
    }
}

struct Report {
    command: &'static str,
    json: Value,
    text: String,
    code: i32,
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

/// Loads `namespace/hash(key)` from the cache or computes and stores it.
fn cached<K: Serialize, T: Serialize + DeserializeOwned>(
    cache: Option<&DiskCache>,
    namespace: &str,
    key: &K,
    compute: impl FnOnce() -> Result<T>,
) -> Result<T> {
    let Some(c) = cache else { return compute() };
    let hash = DiskCache::key_hash(key)?;
    if let Some(v) = c.load(namespace, &hash) {
        return Ok(v);
    }
    let v = compute()?;
    c.store(namespace, &hash, &v)?;
    Ok(v)
}

fn parse_theta(s: &str) -> Result<Vec<BigRational>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let q = match t.split_once('/') {
                Some((n, d)) => {
                    let n: BigInt = n.trim().parse().map_err(|_| Error::input(format!("bad rational `{t}`")))?;
                    let d: BigInt = d.trim().parse().map_err(|_| Error::input(format!("bad rational `{t}`")))?;
                    if d == BigInt::from(0) {
                        return Err(Error::input(format!("zero denominator in `{t}`")));
                    }
                    BigRational::new(n, d)
                }
                None => BigRational::from_integer(t.parse().map_err(|_| Error::input(format!("bad rational `{t}`")))?),
            };
            Ok(q)
        })
        .collect()
}

fn dims_line(d: &GradedDims) -> String {
    let v: Vec<String> = d.dims.iter().map(ToString::to_string).collect();
    format!("{:<8} {}", d.presentation.tag(), v.join(" "))
}

fn generator_bound(f: &Fan, requested: Option<u32>) -> Result<u32> {
    if let Some(b) = requested {
        return Ok(b);
    }
    let esd = build_exact_sequence(f)?;
    Ok(certified_degree_bound(&esd).map_or(DEFAULT_DEGREE_CAP, |b| b.clamp(1, DEFAULT_DEGREE_CAP)))
}

fn execute(cli: &Cli) -> Result<Report> {
    let cache = DiskCache::resolve(cli.cache_dir.as_deref());
    let cache = cache.as_ref();
    match &cli.command {
        Command::Validate { src } => {
            let (name, f) = src.load()?;
            let v = validate_fan(&f)?;
            let mut text = format!("fan {name}: {}\n", if v.pass { "PASS" } else { "FAIL" });
            for failure in v.failures() {
                let _ = writeln!(text, "  {failure}");
            }
            Ok(Report {
                command: "validate",
                json: json!({"fan": name, "validation": to_value(&v)?}),
                text,
                code: if v.pass { 0 } else { 3 },
            })
        }
        Command::Cox { src, presentation } => {
            let (name, f) = src.load()?;
            let p = select_sigma1(&f);
            let pres = presentation
                .kinds()
                .into_iter()
                .map(|k| cox_presentation(&f, &p, k))
                .collect::<Result<Vec<_>>>()?;
            let text = pres.iter().map(|g| g.render_text()).collect::<Vec<_>>().join("\n");
            Ok(Report { command: "cox", json: json!({"fan": name, "presentations": to_value(&pres)?}), text, code: 0 })
        }
        Command::Dims { src, p_max, presentation } => {
            let (name, f) = src.load()?;
            if *presentation == PresentationArg::Both {
                let a: Agreement =
                    cached(cache, "agree", &(&f.rays, &f.max_cones, p_max), || presentations_agree(&f, *p_max))?;
                let text = format!(
                    "{}\n{}\nagree {}\n",
                    dims_line(&a.r),
                    dims_line(&a.rprime),
                    a.agree
                );
                return Ok(Report {
                    command: "dims",
                    json: json!({"fan": name, "p_max": p_max, "agree": a.agree, "dims": [to_value(&a.r)?, to_value(&a.rprime)?]}),
                    text,
                    code: 0,
                });
            }
            let kind = presentation.kinds()[0];
            let d: GradedDims = cached(cache, "dims", &(&f.rays, &f.max_cones, kind, p_max), || {
                graded_dims(&f, kind, *p_max)
            })?;
            let text = format!("{}\n", dims_line(&d));
            Ok(Report {
                command: "dims",
                json: json!({"fan": name, "p_max": p_max, "dims": [to_value(&d)?]}),
                text,
                code: 0,
            })
        }
        Command::Generators { src, degree_bound } => {
            let (name, f) = src.load()?;
            let bound = generator_bound(&f, *degree_bound)?;
            let r: GeneratorReport = generator_report_cached(&f, bound, cache)?;
            let mut text = String::new();
            for g in &r.generators {
                let _ = writeln!(
                    text,
                    "{:>3}  {}{}",
                    g.monomial.fiber_deg,
                    g.name,
                    if g.quotient_redundant { "  (redundant modulo relations)" } else { "" }
                );
            }
            let _ = writeln!(
                text,
                "degree bound {}, certification bound {}, certified {}",
                r.degree_bound_used, r.certification_bound, r.certified_complete
            );
            if let Some(w) = &r.warning {
                let _ = writeln!(text, "warning: {w}");
            }
            Ok(Report { command: "generators", json: json!({"fan": name, "report": to_value(&r)?}), text, code: 0 })
        }
        Command::Agree { src, p_max } => {
            let (name, f) = src.load()?;
            let a: Agreement =
                cached(cache, "agree", &(&f.rays, &f.max_cones, p_max), || presentations_agree(&f, *p_max))?;
            let text = format!("{}\n{}\nagree {}\n", dims_line(&a.r), dims_line(&a.rprime), a.agree);
            Ok(Report { command: "agree", json: json!({"fan": name, "p_max": p_max, "agreement": to_value(&a)?}), text, code: 0 })
        }
        Command::Hypertoric { src, theta, degree_bound } => {
            let (name, f) = src.load()?;
            let theta = parse_theta(theta)?;
            let h = HypertoricProblem::from_fan(&f, theta.clone())?;
            let bound = generator_bound(&f, *degree_bound)?;
            let gens = generator_report_cached(&f, bound, cache)?;
            let r: CentralFiberReport = central_fiber_components(&h, &gens)?;
            let mut text = format!(
                "unimodular {}\ngeneric {}\ntheta used ({}){}\ncomponents {}\n",
                r.unimodular,
                r.generic,
                r.theta_used.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
                if r.perturbed { " (perturbed off walls)" } else { "" },
                r.components.len()
            );
            for c in &r.components {
                let _ = writeln!(text, "  z {:?} w {:?} dim {}", c.z_support, c.w_support, c.dim);
            }
            let mut v = to_value(&r)?;
            v["fan"] = json!(name);
            v["theta"] = json!(theta.iter().map(ToString::to_string).collect::<Vec<_>>());
            Ok(Report { command: "hypertoric", json: v, text, code: 0 })
        }
        Command::Examples => {
            let lib = library();
            let mut text = String::new();
            for (k, f) in &lib {
                let _ = writeln!(text, "{k:<14} dim {} rays {}", f.dim, f.num_rays());
            }
            let entries: Vec<Value> = lib.iter().map(|(k, f)| json!({"name": k, "fan": f})).collect();
            Ok(Report { command: "examples", json: json!({"examples": entries}), text, code: 0 })
        }
    }
}
