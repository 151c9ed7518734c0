//! Command-line front end. Exit codes: 0 when every asserted row passes,
//! 1 on any failure, 2 on a usage error.

use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::ball::Ball;
use crate::chebyshev::{cdf, chebyshev_x, integrate_poly, poly_q, MeasureSpec};
use crate::experiments::{render, theorem1_experiment, theorem2_experiment, ExperimentConfig, ReportFormat};
use crate::petersson::{asymptotic_check, delta_truncated, error_envelope, window_ok};
use crate::verify::{bessel_suite, kloosterman_suite, measures_suite, Check};

pub const THREADS_ENV: &str = "PETERSSON_KIT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "petersson-kit", version, about = "Certified Petersson-formula experiments")]
pub struct Cli {
    /// Working precision in bits [default: 192]
    #[arg(long, global = true)]
    pub precision_bits: Option<u32>,
    /// Largest weight evaluated; heavier rows are skipped [default: 2500]
    #[arg(long, global = true)]
    pub max_k: Option<u64>,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report format [default: csv]
    #[arg(long, global = true, value_enum)]
    pub format: Option<ReportFormat>,
    /// `key=value` file supplying defaults for the flags above
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Built-in self-checks
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// One certified value of Delta_{k,N}(m,n)
    Petersson(PeterssonArgs),
    /// X_{2n} lower-bound experiment along k_n - 1 ~ 4 pi p^n / N
    Thm1(ExperimentArgs),
    /// Q_{2n+1} lower-bound experiment along k_n - 1 ~ 4 pi p^(2n+1) / N
    Thm2(ExperimentArgs),
    /// Density, cdf or moments of a limiting measure as CSV
    Measures(MeasuresArgs),
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    Kloosterman {
        /// Largest modulus swept
        #[arg(long, default_value_t = 200)]
        max_c: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    Bessel,
    Measures,
}

#[derive(Debug, Args)]
pub struct PeterssonArgs {
    #[arg(long)]
    pub k: u64,
    #[arg(long = "N", alias = "level")]
    pub level: u64,
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub n: u64,
    /// Truncation B; terms b < B are summed
    #[arg(long)]
    pub trunc: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long = "N", alias = "level")]
    pub level: u64,
    #[arg(long, default_value_t = 6)]
    pub n_max: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MeasureQuantity {
    Density,
    Cdf,
    Moment,
}

#[derive(Debug, Args)]
pub struct MeasuresArgs {
    /// inf, inf2, p:<prime> or p2:<prime>
    #[arg(long, value_parser = MeasureSpec::parse)]
    pub measure: MeasureSpec,
    #[arg(long, value_enum, default_value_t = MeasureQuantity::Density)]
    pub what: MeasureQuantity,
    /// Grid points for density and cdf
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Largest index for moments of X_n (or Q_n on the shifted support)
    #[arg(long, default_value_t = 10)]
    pub max_degree: usize,
}

/// Resolved global settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub precision_bits: u32,
    pub max_k: u64,
    pub out: Option<PathBuf>,
    pub format: ReportFormat,
}

/// Parses `key=value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<HashMap<String, String>, String> {
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key=value", i + 1))?;
        map.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(map)
}

fn settings(cli: &Cli) -> Result<Settings, String> {
    let cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            parse_config(&text)?
        }
        None => HashMap::new(),
    };
    for key in cfg.keys() {
        if !["precision-bits", "max-k", "out", "format"].contains(&key.as_str()) {
            return Err(format!("unknown config key {key:?}"));
        }
    }
    let num = |key: &str| -> Result<Option<u64>, String> {
        cfg.get(key).map(|v| v.parse::<u64>().map_err(|_| format!("{key} = {v:?} is not an integer"))).transpose()
    };
    let precision_bits = match cli.precision_bits {
        Some(p) => p,
        None => num("precision-bits")?.map_or(Ok(192), u32::try_from).map_err(|e| e.to_string())?,
    };
    if precision_bits < 64 {
        return Err(format!("--precision-bits {precision_bits} is below 64"));
    }
    let format = match (cli.format, cfg.get("format")) {
        (Some(f), _) => f,
        (None, Some(v)) => <ReportFormat as clap::ValueEnum>::from_str(v, true)?,
        (None, None) => ReportFormat::Csv,
    };
    Ok(Settings {
        precision_bits,
        max_k: cli.max_k.map_or_else(|| num("max-k").map(|v| v.unwrap_or(2500)), Ok)?,
        out: cli.out.clone().or_else(|| cfg.get("out").map(PathBuf::from)),
        format,
    })
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("writing {}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn print_checks(checks: &[Check]) -> bool {
    for c in checks {
        eprintln!("{c}");
    }
    checks.iter().all(|c| c.passed)
}

fn checks_output(checks: &[Check], fmt: ReportFormat) -> Result<String, String> {
    match fmt {
        ReportFormat::Json => serde_json::to_string_pretty(checks).map_err(|e| e.to_string()),
        _ => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for c in checks {
                w.serialize(c).map_err(|e| e.to_string())?;
            }
            String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())
        }
    }
}

fn run_verify(cmd: &VerifyCommand, s: &Settings) -> Result<bool, String> {
    match cmd {
        VerifyCommand::Kloosterman { max_c, seed } => {
            let checks = kloosterman_suite(*max_c, *seed);
            write_output(&s.out, &checks_output(&checks, s.format)?)?;
            Ok(print_checks(&checks))
        }
        VerifyCommand::Measures => {
            let checks = measures_suite(s.precision_bits.min(256));
            write_output(&s.out, &checks_output(&checks, s.format)?)?;
            Ok(print_checks(&checks))
        }
        VerifyCommand::Bessel => {
            let rows = bessel_suite(s.precision_bits);
            let text = match s.format {
                ReportFormat::Json => serde_json::to_string_pretty(&rows).map_err(|e| e.to_string())?,
                _ => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    for r in &rows {
                        w.serialize(r).map_err(|e| e.to_string())?;
                    }
                    String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?
                }
            };
            write_output(&s.out, &text)?;
            let failed = rows.iter().filter(|r| !r.pass).count();
            eprintln!("{} of {} Bessel checks passed", rows.len() - failed, rows.len());
            Ok(failed == 0)
        }
    }
}

#[derive(Debug, serde::Serialize)]
struct PeterssonOutput {
    k: u64,
    level: u64,
    m: u64,
    n: u64,
    trunc: u64,
    value_mid: String,
    value_rad: f64,
    tail_bound: f64,
    window_ok: bool,
    main_term_mid: f64,
    remainder_mid: f64,
    remainder_rad: f64,
    envelope: f64,
}

fn run_petersson(a: &PeterssonArgs, s: &Settings) -> Result<bool, String> {
    let prec = s.precision_bits;
    let value = match a.trunc {
        Some(b) => delta_truncated(a.k, a.level, a.m, a.n, b, prec),
        None => crate::petersson::delta(a.k, a.level, a.m, a.n, prec),
    }
    .map_err(|e| e.to_string())?;
    let main = value.terms.first().cloned().unwrap_or_else(|| Ball::zero(prec));
    let remainder = value.off_diagonal().sub_ball(&main);
    let out = PeterssonOutput {
        k: a.k,
        level: a.level,
        m: a.m,
        n: a.n,
        trunc: value.trunc,
        value_mid: value.value.mid().to_string_radix(10, Some(30)),
        value_rad: value.value.rad_f64(),
        tail_bound: value.tail_bound_f64(),
        window_ok: window_ok(a.k, a.level, a.m, a.n),
        main_term_mid: main.mid_f64(),
        remainder_mid: remainder.mid_f64(),
        remainder_rad: remainder.rad_f64(),
        envelope: error_envelope(a.k, prec).mid_f64(),
    };
    let json = serde_json::to_string_pretty(&out).map_err(|e| e.to_string())?;
    write_output(&s.out, &(json + "\n"))?;
    if out.window_ok && a.k >= 28 {
        let chk = asymptotic_check(a.k, a.level, a.m, a.n, prec).map_err(|e| e.to_string())?;
        let ok = chk.remainder_within(crate::calibration::C_ENVELOPE);
        eprintln!("{} remainder within {} x envelope", if ok { "PASS" } else { "FAIL" }, crate::calibration::C_ENVELOPE);
        return Ok(ok);
    }
    Ok(true)
}

fn run_experiment(a: &ExperimentArgs, s: &Settings, second: bool) -> Result<bool, String> {
    let cfg = ExperimentConfig { precision_bits: s.precision_bits, max_k: s.max_k, ..ExperimentConfig::new(a.p, a.level, a.n_max) };
    let report = if second { theorem2_experiment(&cfg) } else { theorem1_experiment(&cfg) }.map_err(|e| e.to_string())?;
    write_output(&s.out, &render(&report, s.format).map_err(|e| e.to_string())?)?;
    for r in &report.rows {
        log::info!("n={} k={} pass={} {}", r.n, r.k_n, r.pass, r.reason);
    }
    Ok(report.all_asserted_pass())
}

fn run_measures(a: &MeasuresArgs, s: &Settings) -> Result<bool, String> {
    let prec = s.precision_bits.min(256);
    let m = &a.measure;
    let (lo, hi) = m.support();
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| e.to_string();
    match a.what {
        MeasureQuantity::Density | MeasureQuantity::Cdf => {
            w.write_record(["x", "value_mid", "value_rad"]).map_err(err)?;
            let pts = a.points.max(2);
            for i in 0..pts {
                // density on cell midpoints, avoiding the endpoint singularities
                let x = if a.what == MeasureQuantity::Cdf {
                    lo as f64 + (hi - lo) as f64 * i as f64 / (pts - 1) as f64
                } else {
                    lo as f64 + (hi - lo) as f64 * (i as f64 + 0.5) / pts as f64
                };
                let xb = Ball::from_f64(x, prec);
                let v = if a.what == MeasureQuantity::Cdf { cdf(m, &xb, prec).map_err(|e| e.to_string())? } else { m.density(&xb) };
                w.write_record([x.to_string(), format!("{:e}", v.mid_f64()), format!("{:e}", v.rad_f64())]).map_err(err)?;
            }
        }
        MeasureQuantity::Moment => {
            w.write_record(["polynomial", "value_mid", "value_rad"]).map_err(err)?;
            let shifted = lo == -1;
            for d in 0..=a.max_degree {
                let (name, poly) = if shifted { (format!("Q_{d}"), poly_q(d)) } else { (format!("X_{d}"), chebyshev_x(d)) };
                let v = integrate_poly(&poly, m, prec).map_err(|e| e.to_string())?;
                w.write_record([name, format!("{:e}", v.mid_f64()), format!("{:e}", v.rad_f64())]).map_err(err)?;
            }
        }
    }
    let text = String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    write_output(&s.out, &text)?;
    Ok(true)
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("{THREADS_ENV}={n} ignored: {e}");
        }
    }
}

/// Runs a parsed command line; `Err` carries a usage message.
pub fn execute(cli: &Cli) -> Result<bool, String> {
    let s = settings(cli)?;
    match &cli.command {
        Command::Verify(v) => run_verify(v, &s),
        Command::Petersson(a) => run_petersson(a, &s),
        Command::Thm1(a) => run_experiment(a, &s, false),
        Command::Thm2(a) => run_experiment(a, &s, true),
        Command::Measures(a) => run_measures(a, &s),
    }
}

pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
