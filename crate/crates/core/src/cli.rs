//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed validation or I/O failure, 2 usage error,
//! 3 parameter outside the model's domain.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::channel::ChannelVariant;
use crate::dynamics::{detect_events, linspace, scan, sweep_surface, ScanConfig, DEFAULT_REFINE_TOL};
use crate::error::Error;
use crate::validate::{run_checks, Fault};
use crate::witnesses::{NEGATIVITY_CLAMP, ZERO_BAND};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

/// Bumped whenever a CSV column set or the events JSON layout changes.
pub const SCHEMA_VERSION: u32 = 1;

pub const SCAN_COLUMNS: [&str; 5] = ["t", "p", "negativity", "ccnr", "lambda_min"];
pub const SURFACE_COLUMNS: [&str; 4] = ["alpha", "t", "p", "lambda_min"];

#[derive(Debug, Parser)]
#[command(
    name = "qutrit-dsd",
    version,
    about = "Two-qutrit finite-temperature amplitude damping: witness scans and DSD/DSB detection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Negativity, realignment value and smallest PT eigenvalue along t.
    Scan(ScanArgs),
    /// Smallest PT eigenvalue over an (alpha, t) grid.
    Surface(SurfaceArgs),
    /// DSD/DSB transitions and realignment windows along t, as JSON.
    Events(EventsArgs),
    /// Run the built-in invariant suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    AsWritten,
    Factorized,
}

impl From<VariantArg> for ChannelVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::AsWritten => ChannelVariant::AsWritten,
            VariantArg::Factorized => ChannelVariant::Factorized,
        }
    }
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    r: f64,
    #[arg(long, value_enum, default_value = "as-written")]
    variant: VariantArg,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    t_start: f64,
    #[arg(long, allow_negative_numbers = true)]
    t_end: f64,
    #[arg(long, default_value_t = 201)]
    steps: usize,
    /// Output CSV; the manifest is written next to it as <stem>.manifest.json.
    #[arg(long)]
    out: PathBuf,
}

impl ScanArgs {
    fn config(&self) -> ScanConfig {
        ScanConfig::new(
            self.alpha,
            self.r,
            self.variant.into(),
            self.t_start,
            self.t_end,
            self.steps,
        )
    }
}

#[derive(Debug, Args)]
struct EventsArgs {
    #[command(flatten)]
    scan: ScanArgs,
    #[arg(long, default_value_t = DEFAULT_REFINE_TOL)]
    refine_tol: f64,
}

#[derive(Debug, Args)]
struct SurfaceArgs {
    #[arg(long, default_value_t = 2.0)]
    alpha_min: f64,
    #[arg(long, default_value_t = 5.0)]
    alpha_max: f64,
    #[arg(long, default_value_t = 31)]
    alpha_steps: usize,
    #[arg(long)]
    r: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    t_min: f64,
    #[arg(long, allow_negative_numbers = true)]
    t_max: f64,
    #[arg(long, default_value_t = 51)]
    t_steps: usize,
    #[arg(long, value_enum, default_value = "factorized")]
    variant: VariantArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Break an invariant on purpose to exercise the failure path.
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<FaultArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FaultArg {
    Completeness,
}

/// Failure carrying the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_domain() { EXIT_DOMAIN } else { EXIT_USAGE };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_FAILED,
            message: format!("I/O error: {e}"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Scan(args) => cmd_scan(&args, stdout),
        Command::Surface(args) => cmd_surface(&args, stdout),
        Command::Events(args) => cmd_events(&args, stdout),
        Command::Validate(args) => cmd_validate(&args, stdout),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn fmt_float(x: f64) -> String {
    // Display is the shortest string that parses back to the same f64.
    format!("{x}")
}

fn csv_bytes<const N: usize>(header: [&str; N], rows: impl Iterator<Item = [f64; N]>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.map(fmt_float)).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// `dir/scan.csv` -> `dir/scan.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    out.with_extension("manifest.json")
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn write_with_manifest(
    command: &str,
    out: &Path,
    bytes: &[u8],
    arguments: Vec<String>,
    parameters: Value,
) -> Result<(), Failure> {
    std::fs::write(out, bytes)?;
    let file = out
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let manifest = json!({
        "command": command,
        "arguments": arguments,
        "parameters": parameters,
        "tolerances": {
            "negativity_clamp": NEGATIVITY_CLAMP,
            "negativity_zero_band": ZERO_BAND,
        },
        "library_version": env!("CARGO_PKG_VERSION"),
        "schema_version": SCHEMA_VERSION,
        "output": { "file": file, "sha256": sha256_hex(bytes), "bytes": bytes.len() },
    });
    // serde_json's default map is ordered, so keys come out sorted
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    std::fs::write(manifest_path(out), text)?;
    Ok(())
}

fn scan_arguments(a: &ScanArgs) -> Vec<String> {
    let variant: ChannelVariant = a.variant.into();
    [
        ("--alpha", fmt_float(a.alpha)),
        ("--r", fmt_float(a.r)),
        ("--variant", variant.to_string()),
        ("--t-start", fmt_float(a.t_start)),
        ("--t-end", fmt_float(a.t_end)),
        ("--steps", a.steps.to_string()),
    ]
    .into_iter()
    .flat_map(|(k, v)| [k.to_string(), v])
    .collect()
}

fn scan_parameters(config: &ScanConfig) -> Value {
    json!({
        "alpha": config.alpha,
        "r": config.r,
        "variant": config.variant,
        "t_start": config.t_start,
        "t_end": config.t_end,
        "steps": config.steps,
        "refine_tol": config.refine_tol,
    })
}

fn cmd_scan(args: &ScanArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let config = args.config();
    let series = scan(&config)?;
    let bytes = csv_bytes(
        SCAN_COLUMNS,
        series
            .points
            .iter()
            .map(|pt| [pt.t, pt.p, pt.report.negativity, pt.report.ccnr, pt.report.lambda_min]),
    );
    let mut parameters = scan_parameters(&config);
    parameters["columns"] = json!(SCAN_COLUMNS);
    write_with_manifest("scan", &args.out, &bytes, scan_arguments(args), parameters)?;
    writeln!(stdout, "wrote {} rows to {}", series.len(), args.out.display())?;
    Ok(EXIT_OK)
}

fn cmd_surface(a: &SurfaceArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    for (name, steps) in [("alpha-steps", a.alpha_steps), ("t-steps", a.t_steps)] {
        if steps == 0 {
            return Err(Error::Config(format!("--{name} must be at least 1")).into());
        }
    }
    let alphas = linspace(a.alpha_min, a.alpha_max, a.alpha_steps);
    let times = linspace(a.t_min, a.t_max, a.t_steps);
    let variant: ChannelVariant = a.variant.into();
    let rows = sweep_surface(&alphas, a.r, variant, &times)?;
    let bytes = csv_bytes(
        SURFACE_COLUMNS,
        rows.iter().map(|row| [row.alpha, row.t, row.p, row.lambda_min]),
    );
    let arguments = [
        ("--alpha-min", fmt_float(a.alpha_min)),
        ("--alpha-max", fmt_float(a.alpha_max)),
        ("--alpha-steps", a.alpha_steps.to_string()),
        ("--r", fmt_float(a.r)),
        ("--t-min", fmt_float(a.t_min)),
        ("--t-max", fmt_float(a.t_max)),
        ("--t-steps", a.t_steps.to_string()),
        ("--variant", variant.to_string()),
    ]
    .into_iter()
    .flat_map(|(k, v)| [k.to_string(), v])
    .collect();
    let parameters = json!({
        "alpha_min": a.alpha_min,
        "alpha_max": a.alpha_max,
        "alpha_steps": a.alpha_steps,
        "r": a.r,
        "t_min": a.t_min,
        "t_max": a.t_max,
        "t_steps": a.t_steps,
        "variant": variant,
        "columns": SURFACE_COLUMNS,
    });
    write_with_manifest("surface", &a.out, &bytes, arguments, parameters)?;
    writeln!(stdout, "wrote {} rows to {}", rows.len(), a.out.display())?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct EventRecord {
    kind: &'static str,
    t_start: f64,
    t_end: f64,
}

fn cmd_events(a: &EventsArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let config = a.scan.config().with_refine_tol(a.refine_tol);
    let series = scan(&config)?;
    let events = detect_events(&series, &config)?;
    let records: Vec<EventRecord> = events
        .iter()
        .map(|e| EventRecord {
            kind: e.kind.as_str(),
            t_start: e.t_start,
            t_end: e.t_end,
        })
        .collect();
    let mut bytes = serde_json::to_vec_pretty(&records).expect("events serialize");
    bytes.push(b'\n');
    let mut arguments = scan_arguments(&a.scan);
    arguments.extend(["--refine-tol".to_string(), fmt_float(a.refine_tol)]);
    write_with_manifest("events", &a.scan.out, &bytes, arguments, scan_parameters(&config))?;
    writeln!(stdout, "wrote {} events to {}", records.len(), a.scan.out.display())?;
    Ok(EXIT_OK)
}

fn cmd_validate(a: &ValidateArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let fault = a.inject_fault.map(|FaultArg::Completeness| Fault::BrokenCompleteness);
    let results = run_checks(fault);
    let failed = results.iter().filter(|r| !r.passed).count();
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        writeln!(stdout, "{status} {:<34} {}", r.name, r.detail)?;
    }
    writeln!(
        stdout,
        "{} checks run, {} passed, {} failed",
        results.len(),
        results.len() - failed,
        failed
    )?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
}
