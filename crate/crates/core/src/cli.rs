//! The `jn` command line front end.
//!
//! ```text
//! jn <sample|median|cz|maximal|seminorm|verify|suite> [flags]
//! ```
//!
//! Exit codes: 0 on success, 1 on invalid input (one JSON line on stderr),
//! 2 when a verification report does not pass.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::{sample_catalog, CatalogEntry, FunctionSpec, SamplingRule};
use crate::czd::cz_decompose;
use crate::error::{validation, Result};
use crate::grid::{DyadicCube, DyadicGrid, StepFunction};
use crate::io;
use crate::maximal;
use crate::median::{
    check_fraction, maximal_median, median_oscillation, min_center_oscillation,
};
use crate::seminorm::{companion_norms, jn_seminorm, jn_seminorm_bruteforce, CompanionNorms, SeminormConfig, SeminormReport};
use crate::verify::{self, LambdaGrid, SuiteConfig, VerificationReport};

#[derive(Debug, Parser)]
#[command(name = "jn", version, about = "Dyadic medians, maximal functions and John–Nirenberg seminorms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a catalog function onto a dyadic grid.
    Sample(Flags),
    /// Maximal median and median oscillations on one cube.
    Median(Flags),
    /// Median Calderón–Zygmund cubes at one level.
    Cz(Flags),
    /// Average (`--mode avg`) or median (`--mode median --t`) maximal function.
    Maximal(Flags),
    /// JN seminorm by the antichain recursion.
    Seminorm(Flags),
    /// Run one verification check on an input function.
    Verify {
        check: Check,
        #[command(flatten)]
        flags: Flags,
    },
    /// Run every check on the pinned corpus.
    Suite(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    GoodLambda,
    JnInequality,
    Equivalence,
    CenterComparison,
    MaximalBound,
    L1Bound,
    WeakType,
    Cz,
    Properties,
    Differentiation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub depth: Option<u32>,
    /// Catalog entry: constant, step, random-uniform, log-reciprocal, power,
    /// jn-extremal, smooth-lipschitz.
    #[arg(long = "fn")]
    pub function: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long = "K")]
    pub k: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Geometric grid `lo:hi:count`.
    #[arg(long = "lambda-grid")]
    pub lambda_grid: Option<LambdaGrid>,
    /// Seminorm: avg-mean, med-optimal, med-center. Maximal function: avg, median.
    #[arg(long)]
    pub mode: Option<String>,
    /// Cube as `level,k1[,k2...]`.
    #[arg(long)]
    pub cube: Option<DyadicCube>,
    #[arg(short = 'i', long = "input")]
    pub input: Option<PathBuf>,
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub seeds: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,

    /// Compare against exhaustive antichain enumeration.
    #[arg(long)]
    pub bruteforce: bool,
    /// Also report L^p, weak-L^p, L log L and dyadic BMO norms.
    #[arg(long)]
    pub companion: bool,

    #[arg(long)]
    pub c: Option<f64>,
    /// Comma-separated row-major values for `--fn step`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub values: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub exponent: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub amplitude: Option<f64>,
    #[arg(long)]
    pub frequency: Option<f64>,
    /// midpoint or exact-cell-average.
    #[arg(long)]
    pub rule: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub origin: Option<Vec<f64>>,
    #[arg(long)]
    pub side: Option<f64>,
}

fn require<T: Copy>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| validation(format!("missing required flag --{flag}")))
}

impl Flags {
    fn load(&self) -> Result<StepFunction> {
        let path = self.input.as_ref().ok_or_else(|| validation("missing required flag -i"))?;
        if !path.exists() {
            return Err(validation(format!("input file '{}' does not exist", path.display())));
        }
        io::load(path)
    }

    fn spec(&self) -> Result<FunctionSpec> {
        let name = self.function.as_deref().ok_or_else(|| validation("missing required flag --fn"))?;
        let entry = match name {
            "constant" => CatalogEntry::Constant { c: require(self.c, "c")? },
            "step" => CatalogEntry::Step {
                values: self.values.clone().ok_or_else(|| validation("missing required flag --values"))?,
            },
            "random-uniform" => CatalogEntry::RandomUniform {
                lo: self.lo.unwrap_or(0.0),
                hi: self.hi.unwrap_or(1.0),
                seed: self.seed.unwrap_or(0),
            },
            "log-reciprocal" => CatalogEntry::LogReciprocal,
            "power" => CatalogEntry::Power { exponent: require(self.exponent, "exponent")? },
            "jn-extremal" => CatalogEntry::JnExtremal,
            "smooth-lipschitz" => CatalogEntry::SmoothLipschitz {
                amplitude: self.amplitude.unwrap_or(1.0),
                frequency: self.frequency.unwrap_or(1.0),
            },
            other => return Err(validation(format!("unknown catalog function '{other}'"))),
        };
        let mut spec = FunctionSpec::new(entry);
        spec.rule = match self.rule.as_deref() {
            None | Some("midpoint") => SamplingRule::Midpoint,
            Some("exact-cell-average") => SamplingRule::ExactCellAverage,
            Some(other) => return Err(validation(format!("unknown sampling rule '{other}'"))),
        };
        if self.origin.is_some() || self.side.is_some() {
            let dim = self.dim.unwrap_or(1);
            let d = spec.domain_for(dim);
            spec = spec.with_domain(self.origin.clone().unwrap_or(d.origin), self.side.unwrap_or(d.side));
        }
        Ok(spec)
    }

    fn seminorm_config(&self) -> Result<SeminormConfig> {
        let p = self.p.unwrap_or(2.0);
        let cfg = match self.mode.as_deref().unwrap_or("avg-mean") {
            "avg-mean" => SeminormConfig::avg_mean(p),
            "med-optimal" => SeminormConfig::med_optimal(p, require(self.s, "s")?),
            "med-center" => SeminormConfig::med_center(p, require(self.s, "s")?, require(self.t, "t")?),
            other => return Err(validation(format!("unknown seminorm mode '{other}'"))),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn format_for_output(&self) -> OutputFormat {
        self.format.unwrap_or_else(|| match &self.output {
            Some(path) if io::Format::from_path(path) == io::Format::Csv => OutputFormat::Csv,
            _ => OutputFormat::Json,
        })
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{}", text.trim_end()) {
                // a closed reader (`jn ... | head`) is not an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn emit_function(f: &StepFunction, flags: &Flags) -> Result<()> {
    let text = match flags.format_for_output() {
        OutputFormat::Json => io::to_json(f)? + "\n",
        OutputFormat::Csv => io::to_csv(f)?,
    };
    emit(&text, flags.output.as_deref())
}

fn emit_report(report: &VerificationReport, flags: &Flags) -> Result<i32> {
    let text = match flags.format_for_output() {
        OutputFormat::Json => to_json(report)?,
        OutputFormat::Csv => report.to_csv()?,
    };
    emit(&text, flags.output.as_deref())?;
    Ok(if report.pass { 0 } else { 2 })
}

#[derive(Serialize)]
struct MedianOutput {
    cube: DyadicCube,
    s: f64,
    median: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oscillation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_center_oscillation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_center: Option<f64>,
}

#[derive(Serialize)]
struct CzOutput {
    lambda: f64,
    t: f64,
    cubes: crate::czd::CubeCollection,
    measure: f64,
}

#[derive(Serialize)]
struct SeminormOutput {
    #[serde(flatten)]
    report: SeminormReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    bruteforce_value_pow: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    companion: Option<CompanionNorms>,
}

fn sample(flags: &Flags) -> Result<i32> {
    let spec = flags.spec()?;
    let dim = flags.dim.unwrap_or(1);
    let depth = require(flags.depth, "depth")?;
    let grid = spec.grid(dim, depth)?;
    emit_function(&sample_catalog(&spec, &grid)?, flags)?;
    Ok(0)
}

fn median(flags: &Flags) -> Result<i32> {
    let f = flags.load()?;
    let cube = flags.cube.clone().unwrap_or_else(|| f.grid().root());
    let s = require(flags.s, "s")?;
    let out = MedianOutput {
        median: maximal_median(&f, &cube, s)?,
        oscillation: flags.t.map(|t| median_oscillation(&f, &cube, s, t)).transpose()?,
        min_center_oscillation: None,
        min_center: None,
        t: flags.t,
        s,
        cube: cube.clone(),
    };
    let out = if s <= 0.5 {
        let (value, center) = min_center_oscillation(&f, &cube, s)?;
        MedianOutput { min_center_oscillation: Some(value), min_center: Some(center), ..out }
    } else {
        out
    };
    emit(&to_json(&out)?, flags.output.as_deref())?;
    Ok(0)
}

fn cz(flags: &Flags) -> Result<i32> {
    let f = flags.load()?;
    let t = flags.t.unwrap_or(0.5);
    let lambda = require(flags.lambda, "lambda")?;
    let result = cz_decompose(&f, t, lambda)?;
    let measure = result.cubes.union_measure(f.grid());
    let out = CzOutput { lambda, t, cubes: result.cubes, measure };
    emit(&to_json(&out)?, flags.output.as_deref())?;
    Ok(0)
}

fn maximal_cmd(flags: &Flags) -> Result<i32> {
    let f = flags.load()?;
    let out = match flags.mode.as_deref().unwrap_or("avg") {
        "avg" => maximal::maximal_avg(&f),
        "median" => maximal::maximal_median(&f, require(flags.t, "t")?)?,
        other => return Err(validation(format!("unknown maximal mode '{other}', expected avg or median"))),
    };
    emit_function(&out, flags)?;
    Ok(0)
}

fn seminorm(flags: &Flags) -> Result<i32> {
    let f = flags.load()?;
    let cfg = flags.seminorm_config()?;
    let report = jn_seminorm(&f, &cfg)?;
    let bruteforce_value_pow = if flags.bruteforce {
        Some(jn_seminorm_bruteforce(&f, &cfg)?.value_pow)
    } else {
        None
    };
    let companion = if flags.companion { Some(companion_norms(&f, cfg.p)?) } else { None };
    let mismatch = bruteforce_value_pow.is_some_and(|b| b.to_bits() != report.value_pow.to_bits());
    let out = SeminormOutput { report, bruteforce_value_pow, companion };
    emit(&to_json(&out)?, flags.output.as_deref())?;
    Ok(if mismatch { 2 } else { 0 })
}

fn run_check(check: Check, flags: &Flags) -> Result<i32> {
    let p = flags.p.unwrap_or(2.0);
    let report = match check {
        Check::Properties => {
            let dims = vec![flags.dim.unwrap_or(1)];
            let depths = vec![flags.depth.unwrap_or(4)];
            verify::run_median_property_suite(flags.seeds.unwrap_or(1000), &dims, &depths)?
        }
        Check::Differentiation => {
            let spec = if flags.function.is_some() {
                flags.spec()?
            } else {
                FunctionSpec::new(CatalogEntry::SmoothLipschitz { amplitude: 1.0, frequency: 1.0 })
            };
            let fractions = flags.s.map_or(vec![0.25, 0.5], |s| vec![s]);
            for &s in &fractions {
                check_fraction("s", s)?;
            }
            verify::verify_differentiation(&spec, flags.depth.unwrap_or(10), &fractions)?
        }
        _ => {
            let f = flags.load()?;
            let dim = f.grid().dim();
            match check {
                Check::GoodLambda => {
                    let (t, k, _, _) = verify::good_lambda_params(dim);
                    let t = flags.t.unwrap_or(t);
                    let k = flags.k.unwrap_or(k);
                    let s = flags.s.unwrap_or(t / (2.0 * k.powf(p)));
                    verify::verify_good_lambda(&f, p, t, k, s, flags.lambda_grid)?
                }
                Check::JnInequality => verify::verify_jn_inequality(
                    &f,
                    p,
                    flags.s.unwrap_or(verify::jn_fraction(dim)),
                    flags.r.unwrap_or(0.5),
                    flags.lambda_grid,
                )?,
                Check::Equivalence => {
                    verify::verify_equivalence(&f, p, flags.s.unwrap_or(verify::jn_fraction(dim)))?
                }
                Check::CenterComparison => verify::verify_center_comparison(
                    &f,
                    p,
                    require(flags.s, "s")?,
                    flags.t.unwrap_or(0.5),
                )?,
                Check::MaximalBound => verify::verify_maximal_bound(&f, p)?,
                Check::L1Bound => verify::verify_l1_bound(&f, p)?,
                Check::WeakType => verify::verify_weak_type(&f, flags.lambda_grid)?,
                Check::Cz => verify::verify_cz(&f, flags.t.unwrap_or(0.5), flags.lambda_grid)?,
                Check::Properties | Check::Differentiation => unreachable!(),
            }
        }
    };
    emit_report(&report, flags)
}

fn suite(flags: &Flags) -> Result<i32> {
    let mut cfg = SuiteConfig::default();
    if let Some(seeds) = flags.seeds {
        cfg.property_seeds = seeds;
    }
    if let Some(dim) = flags.dim {
        cfg.dims = vec![dim];
    }
    if let Some(depth) = flags.depth {
        cfg.depths = vec![depth];
    }
    for &dim in &cfg.dims {
        for &depth in &cfg.depths {
            DyadicGrid::unit(dim, depth)?;
        }
    }
    let report = verify::run_suite(&cfg)?;
    let text = match flags.format_for_output() {
        OutputFormat::Json => to_json(&report)?,
        OutputFormat::Csv => verify::rows_to_csv(&report.reports)?,
    };
    emit(&text, flags.output.as_deref())?;
    Ok(if report.pass { 0 } else { 2 })
}

pub fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Sample(flags) => sample(flags),
        Command::Median(flags) => median(flags),
        Command::Cz(flags) => cz(flags),
        Command::Maximal(flags) => maximal_cmd(flags),
        Command::Seminorm(flags) => seminorm(flags),
        Command::Verify { check, flags } => run_check(*check, flags),
        Command::Suite(flags) => suite(flags),
    }
}

/// Single-line error payload written to stderr.
#[derive(Serialize)]
struct ErrorLine<'a> {
    error: &'a str,
    message: String,
}

fn report_error(kind: &str, message: String) {
    let line = ErrorLine { error: kind, message: message.replace('\n', " ") };
    eprintln!("{}", serde_json::to_string(&line).expect("error line serializes"));
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let message = e.render().to_string();
            let first = message.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            report_error("usage", first.to_string());
            return 1;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            report_error(e.kind(), e.to_string());
            1
        }
    }
}

