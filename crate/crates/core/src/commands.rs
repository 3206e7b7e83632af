//! File-based front end: each subcommand reads JSON/CSV inputs, runs one
//! pipeline and writes `{"manifest": …, "result": …}`.
//!
//! Exit codes: 0 on success (a polar finding is a success), 2 for unreadable
//! or invalid input, 3 when a pipeline stage fails.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bernstein::{verify_bernstein, Polynomial1D};
use crate::capacity::{capacity, green_function, GreenMethod, DEFAULT_FEKETE_N, DEFAULT_POLAR_THRESHOLD};
use crate::error::{Error, Result};
use crate::extension::{certify_extension, certify_uniform, evaluate, ExtensionCertificate, ExtensionConfig, SequenceSpec};
use crate::gamma::{gamma_cap, GridSpec};
use crate::set_model::{check_finite, CompactSet, ComplexPoint, Region};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_STAGE: i32 = 3;

/// Everything that determines a run's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// SHA-256 over every input file, in argument order.
    pub input_digest: String,
    pub seed: u64,
    pub tool_version: String,
    pub thresholds: Value,
}

#[derive(Debug, Parser)]
#[command(name = "holext", version, about = "Planar capacity, Green functions and certified series extension")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Logarithmic capacity of a compact set.
    Cap(CapArgs),
    /// Green function of the complement at a list of points.
    Green(GreenArgs),
    /// Check the Bernstein growth bound for a polynomial.
    Bernstein(BernsteinArgs),
    /// Γ-capacity of a region in ℂᵐ.
    Gammacap(GammaArgs),
    /// Certify a domain of convergence for a polynomial-coefficient series.
    Extend(ExtendArgs),
    /// Evaluate a certified series at one point.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
pub struct CapArgs {
    #[arg(long)]
    pub set: PathBuf,
    #[arg(long, default_value_t = DEFAULT_FEKETE_N)]
    pub n: usize,
    /// JSON output; the d_n sequence goes to `<stem>.dn.csv` beside it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GreenArgs {
    #[arg(long)]
    pub set: PathBuf,
    /// Evaluation points (CSV `re,im` or JSON).
    #[arg(long)]
    pub samples: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: MethodArg,
    /// CSV `re,im,g`; the manifest goes to `<stem>.manifest.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum MethodArg {
    Auto,
    Analytic,
    Fekete,
}

impl From<MethodArg> for GreenMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => GreenMethod::Auto,
            MethodArg::Analytic => GreenMethod::Analytic,
            MethodArg::Fekete => GreenMethod::Fekete,
        }
    }
}

#[derive(Debug, Args)]
pub struct BernsteinArgs {
    /// Polynomial JSON `{"coefficients": [[re, im], …]}`.
    #[arg(long)]
    pub poly: PathBuf,
    #[arg(long)]
    pub set: PathBuf,
    #[arg(long)]
    pub samples: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GammaArgs {
    /// Region predicate JSON.
    #[arg(long)]
    pub set: PathBuf,
    #[arg(long, default_value_t = 16)]
    pub unitaries: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Grid JSON; missing fields take their defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtendArgs {
    #[arg(long)]
    pub seq: PathBuf,
    /// Samples of the convergence set: a point list or a compact-set JSON, or CSV.
    #[arg(long)]
    pub samples: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub z2_max: Option<f64>,
    /// Certify a domain of constant radius (sublinear degree growth).
    #[arg(long)]
    pub uniform: bool,
    /// Certificate JSON; the boundary curve goes to `<stem>.boundary.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Certificate JSON as written by `extend`.
    #[arg(long)]
    pub cert: PathBuf,
    #[arg(long)]
    pub seq: PathBuf,
    /// Coordinates of z₁, e.g. `0.1+0.2i`; repeat for k > 1.
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub z1: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub z2: String,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Exit code for a failed run.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Stage { .. } => EXIT_STAGE,
        Error::Io(_)
        | Error::Json(_)
        | Error::InvalidArgument(_)
        | Error::InvalidSet(_)
        | Error::NonFinite
        | Error::EmptyPointCloud
        | Error::UnboundedSet
        | Error::DimensionTooLarge(_) => EXIT_INPUT,
        _ => EXIT_STAGE,
    }
}

/// Parse arguments, run, report; returns the process exit code.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(summary) => {
            println!("{summary}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Run one subcommand; returns a one-line summary.
pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Cap(a) => cmd_cap(a),
        Command::Green(a) => cmd_green(a),
        Command::Bernstein(a) => cmd_bernstein(a),
        Command::Gammacap(a) => cmd_gammacap(a),
        Command::Extend(a) => cmd_extend(a),
        Command::Eval(a) => cmd_eval(a),
    }
}

struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn new() -> Self {
        Inputs { hasher: Sha256::new() }
    }

    fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = fs::read(path)?;
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(&bytes);
        Ok(bytes)
    }

    fn json<T: for<'de> Deserialize<'de>>(&mut self, path: &Path) -> Result<T> {
        Ok(serde_json::from_slice(&self.read(path)?)?)
    }

    fn points(&mut self, path: &Path) -> Result<Vec<ComplexPoint>> {
        let bytes = self.read(path)?;
        parse_points(&bytes, path.extension().is_some_and(|e| e == "csv"))
    }

    fn manifest(self, command: &str, seed: u64, thresholds: Value) -> RunManifest {
        RunManifest {
            command: command.to_string(),
            input_digest: hex::encode(self.hasher.finalize()),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            thresholds,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PointsFile {
    List(Vec<Complex64>),
    Set(CompactSet),
}

/// Points from CSV rows `re,im` (a non-numeric header is skipped) or JSON:
/// an array of `[re, im]` pairs, or a compact set whose samples are used.
pub fn parse_points(bytes: &[u8], csv_format: bool) -> Result<Vec<ComplexPoint>> {
    let points = if csv_format {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(bytes);
        let mut out = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::InvalidArgument(format!("points CSV: {e}")))?;
            let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(f64::from_str).collect();
            match parsed {
                Ok(v) if v.len() == 2 => out.push(Complex64::new(v[0], v[1])),
                Err(_) if row == 0 => continue,
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "points CSV row {}: expected two numbers",
                        row + 1
                    )))
                }
            }
        }
        out
    } else {
        match serde_json::from_slice::<PointsFile>(bytes)? {
            PointsFile::List(v) => v,
            PointsFile::Set(s) => s.samples(),
        }
    };
    for &z in &points {
        check_finite(z)?;
    }
    Ok(points)
}

fn write_json(out: Option<&Path>, manifest: &RunManifest, result: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&json!({ "manifest": manifest, "result": result }))?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_io)?;
    w.write_record(header).map_err(csv_io)?;
    for row in rows {
        w.write_record(row.iter().map(f64::to_string)).map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// `<dir>/<stem>.<suffix>` next to `out`.
pub fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}"))
}

fn parse_complex(s: &str) -> Result<ComplexPoint> {
    let z = Complex64::from_str(s.trim()).map_err(|_| Error::InvalidArgument(format!("not a complex number: {s:?}")))?;
    check_finite(z)
}

#[derive(Serialize)]
struct CapResult {
    #[serde(flatten)]
    estimate: crate::capacity::CapacityEstimate,
    polar: bool,
}

pub fn cmd_cap(a: &CapArgs) -> Result<String> {
    if a.n < 8 {
        return Err(Error::InvalidArgument(format!("--n must be >= 8, got {}", a.n)));
    }
    let mut inputs = Inputs::new();
    let set: CompactSet = inputs.json(&a.set)?;
    let estimate = capacity(&set, a.n).map_err(|e| e.in_stage("capacity"))?;
    let polar = estimate.is_polar(DEFAULT_POLAR_THRESHOLD);
    let manifest = inputs.manifest(
        "cap",
        0,
        json!({ "n": a.n, "polar_threshold": DEFAULT_POLAR_THRESHOLD, "boundary_samples": set.boundary_samples() }),
    );
    if let Some(out) = &a.out {
        let rows = estimate.diameter_sequence.iter().map(|(n, d)| vec![*n as f64, *d]);
        write_csv(&sibling(out, "dn.csv"), &["n", "d_n"], rows)?;
    }
    let summary = format!("capacity {} (n = {}, polar = {polar})", estimate.value, estimate.n_used);
    write_json(a.out.as_deref(), &manifest, &CapResult { estimate, polar })?;
    Ok(summary)
}

pub fn cmd_green(a: &GreenArgs) -> Result<String> {
    let mut inputs = Inputs::new();
    let set: CompactSet = inputs.json(&a.set)?;
    let points = inputs.points(&a.samples)?;
    let method = GreenMethod::from(a.method);
    let green = green_function(&set, method).map_err(|e| e.in_stage("green"))?;
    let manifest = inputs.manifest(
        "green",
        0,
        json!({ "method": method, "polar_threshold": DEFAULT_POLAR_THRESHOLD, "fekete_n": DEFAULT_FEKETE_N }),
    );
    let rows = points.iter().map(|z| vec![z.re, z.im, green.eval(*z)]);
    write_csv(&a.out, &["re", "im", "g"], rows)?;
    let mut text = serde_json::to_string_pretty(&json!({
        "manifest": manifest,
        "result": { "backing": green.backing(), "robin_constant": green.robin_constant(), "points": points.len() },
    }))?;
    text.push('\n');
    fs::write(sibling(&a.out, "manifest.json"), text)?;
    Ok(format!("green function at {} points, Robin constant {}", points.len(), green.robin_constant()))
}

pub fn cmd_bernstein(a: &BernsteinArgs) -> Result<String> {
    let mut inputs = Inputs::new();
    let p: Polynomial1D = inputs.json(&a.poly)?;
    let set: CompactSet = inputs.json(&a.set)?;
    let points = inputs.points(&a.samples)?;
    let report = verify_bernstein(&p, &set, &points).map_err(|e| e.in_stage("bernstein"))?;
    let manifest = inputs.manifest("bernstein", 0, json!({ "slack": "deg * clamp + 1e-9", "polar_threshold": DEFAULT_POLAR_THRESHOLD }));
    write_json(a.out.as_deref(), &manifest, &report)?;
    Ok(format!("{} checks, {} violations", report.checks.len(), report.violations))
}

pub fn cmd_gammacap(a: &GammaArgs) -> Result<String> {
    let mut inputs = Inputs::new();
    let region: Region = inputs.json(&a.set)?;
    let grid: GridSpec = match &a.config {
        Some(path) => inputs.json(path)?,
        None => GridSpec::default(),
    };
    if a.unitaries == 0 {
        return Err(Error::InvalidArgument("--unitaries must be >= 1".into()));
    }
    region.validate()?;
    let result = gamma_cap(&region, a.unitaries, a.seed, &grid).map_err(|e| e.in_stage("gamma_cap"))?;
    let manifest = inputs.manifest("gammacap", a.seed, json!({ "unitaries": a.unitaries, "grid": grid }));
    write_json(a.out.as_deref(), &manifest, &result)?;
    Ok(format!(
        "gamma capacity {} (m = {}, polar = {})",
        result.value,
        result.dimension,
        result.value <= grid.fiber_threshold
    ))
}

pub fn cmd_extend(a: &ExtendArgs) -> Result<String> {
    let mut inputs = Inputs::new();
    let spec: SequenceSpec = inputs.json(&a.seq)?;
    let seq = spec.build()?;
    let samples = inputs.points(&a.samples)?;
    if samples.is_empty() {
        return Err(Error::EmptyPointCloud);
    }
    let mut cfg: ExtensionConfig = match &a.config {
        Some(path) => inputs.json(path)?,
        None => ExtensionConfig::default(),
    };
    if let Some(z) = a.z2_max {
        cfg.z2_max = z;
    }
    cfg.validate()?;
    let cert = if a.uniform {
        certify_uniform(&seq, &samples, &cfg)
    } else {
        certify_extension(&seq, &samples, &cfg)
    }?;
    let manifest = inputs.manifest("extend", 0, json!({ "config": cfg, "uniform": a.uniform }));
    if let Some(out) = &a.out {
        let rows = boundary_radii(cfg.z2_max).into_iter().map(|r| vec![r, cert.radius_at(r)]);
        write_csv(&sibling(out, "boundary.csv"), &["z2_abs", "z1_radius"], rows)?;
    }
    write_json(a.out.as_deref(), &manifest, &cert)?;
    Ok(format!(
        "certified |z1| < {} / (1 + |z2|)^{} (C0 = {}, C1 = {}, rho1 = {})",
        cert.c2, cert.exponent, cert.c0, cert.c1, cert.rho1
    ))
}

/// `|z₂| = 0` then 200 log-spaced radii from 1e-2 to `z2_max`.
fn boundary_radii(z2_max: f64) -> Vec<f64> {
    let (lo, hi) = (1e-2f64.min(z2_max).ln(), z2_max.ln());
    std::iter::once(0.0)
        .chain((0..200).map(|j| (lo + (hi - lo) * j as f64 / 199.0).exp()))
        .collect()
}

/// The certificate file is the output of `extend`: a manifest plus the certificate.
#[derive(Deserialize)]
struct CertificateFile {
    result: ExtensionCertificate,
}

pub fn cmd_eval(a: &EvalArgs) -> Result<String> {
    let mut inputs = Inputs::new();
    let bytes = inputs.read(&a.cert)?;
    let cert = match serde_json::from_slice::<CertificateFile>(&bytes) {
        Ok(f) => f.result,
        Err(_) => serde_json::from_slice::<ExtensionCertificate>(&bytes)?,
    };
    let spec: SequenceSpec = inputs.json(&a.seq)?;
    let seq = spec.build()?;
    let z1 = a
        .z1
        .iter()
        .flat_map(|s| s.split(','))
        .map(parse_complex)
        .collect::<Result<Vec<_>>>()?;
    let z2 = parse_complex(&a.z2)?;
    if z1.len() != seq.k() {
        return Err(Error::InvalidArgument(format!("--z1 has {} coordinates, sequence has k = {}", z1.len(), seq.k())));
    }
    if !(a.tol.is_finite() && a.tol > 0.0) {
        return Err(Error::InvalidArgument("--tol must be positive".into()));
    }
    let eval = evaluate(&cert, &seq, &z1, z2, a.tol).map_err(|e| e.in_stage("evaluate"))?;
    let manifest = inputs.manifest("eval", 0, json!({ "tol": a.tol, "z1": z1, "z2": z2 }));
    write_json(a.out.as_deref(), &manifest, &eval)?;
    Ok(format!(
        "f = {} with tail bound {} ({} terms, q = {})",
        eval.value, eval.tail_bound, eval.terms_used, eval.q
    ))
}
