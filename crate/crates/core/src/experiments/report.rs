//! Experiment reports: CSV, JSON and SVG output, and the self-audit that
//! recomputes every pass flag from the emitted numbers.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rug::Float;

use crate::ball::Ball;
use crate::calibration;

use super::{ExperimentConfig, Mode};

pub const CSV_HEADER: [&str; 10] = ["n", "k_n", "window_ok", "delta_mid", "delta_rad", "tail_bound", "proxy", "bound", "pass", "reason"];

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("writing {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed report: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ReportMetadata {
    pub mode: Mode,
    pub p: u64,
    pub level: u64,
    pub n_max: u32,
    pub precision_bits: u32,
    pub max_k: u64,
    pub truncation_policy: String,
    pub constants: BTreeMap<String, f64>,
    pub timestamp: u64,
    pub version: String,
}

impl ReportMetadata {
    pub fn new(mode: Mode, cfg: &ExperimentConfig) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        ReportMetadata {
            mode,
            p: cfg.p,
            level: cfg.level,
            n_max: cfg.n_max,
            precision_bits: cfg.precision_bits,
            max_k: cfg.max_k,
            truncation_policy: "B = 2 min{B >= 2 : x_B <= 5/18}, tail by integral comparison".into(),
            constants: calibration::constants(),
            timestamp,
            version: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).into(),
        }
    }
}

/// One row. Numbers are rounded outward: `proxy` and `scaled` down,
/// `bound`, `head_abs` and the radii up, `head_envelope` down.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ReportRow {
    pub n: u32,
    pub k_n: u64,
    pub target: f64,
    pub window_ok: bool,
    /// Decimal midpoint; empty when nothing was computed.
    pub delta_mid: String,
    pub delta_rad: Option<f64>,
    pub tail_bound: Option<f64>,
    pub proxy: Option<f64>,
    pub bound: Option<f64>,
    pub pass: bool,
    /// Empty for asserted rows; `skipped: ...` or `failed: ...` otherwise.
    pub reason: String,
    pub certificate: Option<String>,
    /// `|value| (k-1)^{1/3}`.
    pub scaled: Option<f64>,
    pub floor: Option<f64>,
    /// The bound with `(k-1)^{1/3}` in place of `k^{1/3}`.
    pub bound_alt: Option<f64>,
    pub head_abs: Option<f64>,
    pub head_envelope: Option<f64>,
}

impl ReportRow {
    pub(super) fn fill_value(&mut self, v: &Ball, tail: &Float) {
        self.delta_mid = v.mid().to_string_radix(10, Some(30));
        self.delta_rad = Some(v.rad().to_f64_round(rug::float::Round::Up));
        self.tail_bound = Some(tail.to_f64_round(rug::float::Round::Up));
    }

    fn side_failure(&self) -> Option<String> {
        if let (Some(s), Some(f)) = (self.scaled, self.floor) {
            if s < f {
                return Some(format!("failed: scaled value {s:e} below floor {f:e}"));
            }
        }
        if let (Some(h), Some(e)) = (self.head_abs, self.head_envelope) {
            if h > e {
                return Some(format!("failed: head {h:e} above envelope {e:e}"));
            }
        }
        if let (Some(p), Some(b)) = (self.proxy, self.bound_alt) {
            if p < b {
                return Some(format!("failed: proxy {p:e} below shifted bound {b:e}"));
            }
        }
        None
    }

    pub(super) fn finish(&mut self) {
        if let Some(r) = self.side_failure() {
            self.reason = r;
        }
        self.pass = recompute_pass(&self.reason, self.proxy, self.bound);
    }

    /// Rows that make a claim: everything not skipped.
    pub fn asserted(&self) -> bool {
        !self.reason.starts_with("skipped")
    }
}

fn recompute_pass(reason: &str, proxy: Option<f64>, bound: Option<f64>) -> bool {
    reason.is_empty() && matches!((proxy, bound), (Some(p), Some(b)) if p >= b)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ExperimentReport {
    pub metadata: ReportMetadata,
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn all_asserted_pass(&self) -> bool {
        self.rows.iter().filter(|r| r.asserted()).all(|r| r.pass)
    }
}

/// Indices of rows whose stored flag disagrees with the recomputation.
pub fn audit_report(r: &ExperimentReport) -> Vec<usize> {
    r.rows
        .iter()
        .enumerate()
        .filter(|(_, row)| {
            let side = row.side_failure().is_some() && row.reason.is_empty();
            side || row.pass != recompute_pass(&row.reason, row.proxy, row.bound)
        })
        .map(|(i, _)| i)
        .collect()
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

pub fn render_csv(r: &ExperimentReport) -> Result<String, ReportError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for row in &r.rows {
        w.write_record([
            row.n.to_string(),
            row.k_n.to_string(),
            row.window_ok.to_string(),
            row.delta_mid.clone(),
            opt(row.delta_rad),
            opt(row.tail_bound),
            opt(row.proxy),
            opt(row.bound),
            row.pass.to_string(),
            row.reason.clone(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| ReportError::Malformed(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| ReportError::Malformed(e.to_string()))
}

/// Re-reads emitted CSV and returns the line numbers (1-based, header = 1)
/// whose `pass` does not follow from `proxy`, `bound` and `reason`.
pub fn audit_csv(text: &str) -> Result<Vec<usize>, ReportError> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rd.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(ReportError::Malformed(format!("unexpected header {header:?}")));
    }
    let parse = |s: &str| -> Result<Option<f64>, ReportError> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| ReportError::Malformed(format!("not a number: {s:?}")))
        }
    };
    let mut bad = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let pass: bool = rec[8].parse().map_err(|_| ReportError::Malformed(format!("pass = {:?}", &rec[8])))?;
        if pass != recompute_pass(&rec[9], parse(&rec[6])?, parse(&rec[7])?) {
            bad.push(i + 2);
        }
    }
    Ok(bad)
}

pub fn render_json(r: &ExperimentReport) -> Result<String, ReportError> {
    Ok(serde_json::to_string_pretty(r)?)
}

pub fn parse_json(s: &str) -> Result<ExperimentReport, ReportError> {
    Ok(serde_json::from_str(s)?)
}

/// Log-scale plot of `proxy` and `bound` against `n`.
pub fn render_svg(r: &ExperimentReport) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const M: f64 = 56.0;
    let pts: Vec<(u32, f64, f64)> = r
        .rows
        .iter()
        .filter_map(|row| match (row.proxy, row.bound) {
            (Some(p), Some(b)) if p > 0.0 && b > 0.0 => Some((row.n, p.log10(), b.log10())),
            _ => None,
        })
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let title = format!("{:?} p={} N={}", r.metadata.mode, r.metadata.p, r.metadata.level);
    let _ = writeln!(out, r#"<text x="{}" y="20" text-anchor="middle">{title}: log10 proxy vs bound</text>"#, W / 2.0);
    if pts.is_empty() {
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">no asserted rows</text>"#, W / 2.0, H / 2.0);
        out.push_str("</svg>\n");
        return out;
    }
    let (n_lo, n_hi) = (pts.iter().map(|p| p.0).min().unwrap_or(0) as f64, pts.iter().map(|p| p.0).max().unwrap_or(0) as f64);
    let ys = pts.iter().flat_map(|p| [p.1, p.2]);
    let (mut y_lo, mut y_hi) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    y_lo = y_lo.floor();
    y_hi = y_hi.ceil().max(y_lo + 1.0);
    let sx = |n: f64| if n_hi > n_lo { M + (W - 2.0 * M) * (n - n_lo) / (n_hi - n_lo) } else { W / 2.0 };
    let sy = |y: f64| H - M - (H - 2.0 * M) * (y - y_lo) / (y_hi - y_lo);
    let _ = writeln!(out, r#"<line x1="{M}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/>"#, b = H - M, r = W - M);
    let _ = writeln!(out, r#"<line x1="{M}" y1="{M}" x2="{M}" y2="{b}" stroke="black"/>"#, b = H - M);
    let mut e = y_lo;
    while e <= y_hi {
        let _ = writeln!(out, r#"<text x="{}" y="{:.1}" text-anchor="end">1e{e}</text>"#, M - 4.0, sy(e) + 4.0);
        e += ((y_hi - y_lo) / 8.0).ceil().max(1.0);
    }
    for &(n, _, _) in &pts {
        let _ = writeln!(out, r#"<text x="{:.1}" y="{}" text-anchor="middle">{n}</text>"#, sx(n as f64), H - M + 16.0);
    }
    for (idx, colour, label) in [(1usize, "#1f77b4", "proxy"), (2, "#d62728", "bound")] {
        let line: Vec<String> = pts
            .iter()
            .map(|p| format!("{:.1},{:.1}", sx(p.0 as f64), sy(if idx == 1 { p.1 } else { p.2 })))
            .collect();
        let _ = writeln!(out, r#"<polyline fill="none" stroke="{colour}" stroke-width="2" points="{}"/>"#, line.join(" "));
        let ly = M + 16.0 * idx as f64;
        let _ = writeln!(out, r#"<text x="{}" y="{ly}" fill="{colour}">{label}</text>"#, W - M - 60.0);
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">n</text>"#, W / 2.0, H - 12.0);
    out.push_str("</svg>\n");
    out
}

pub fn render(r: &ExperimentReport, format: ReportFormat) -> Result<String, ReportError> {
    match format {
        ReportFormat::Csv => render_csv(r),
        ReportFormat::Json => render_json(r),
        ReportFormat::Svg => Ok(render_svg(r)),
    }
}

pub fn emit_report(r: &ExperimentReport, format: ReportFormat, path: &Path) -> Result<(), ReportError> {
    let text = render(r, format)?;
    std::fs::write(path, text).map_err(|source| ReportError::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(rows: usize) -> ExperimentReport {
        let cfg = ExperimentConfig::new(3, 5, rows as u32);
        let mut r = ExperimentReport { metadata: ReportMetadata::new(Mode::Theorem1, &cfg), rows: Vec::new() };
        for i in 0..rows {
            let mut row = ReportRow {
                n: i as u32 + 1,
                k_n: 68 + 2 * i as u64,
                target: 67.9 + i as f64,
                window_ok: true,
                delta_mid: "0.43".into(),
                delta_rad: Some(1e-50),
                tail_bound: Some(1e-40),
                proxy: Some(1e-3 / (i + 1) as f64),
                bound: Some(2e-4),
                reason: if i == 0 { "skipped: k_n <= 27, window".into() } else { String::new() },
                ..ReportRow::default()
            };
            row.finish();
            r.rows.push(row);
        }
        r
    }

    #[test]
    fn empty_report_is_header_only() {
        let csv = render_csv(&sample(0)).unwrap();
        assert_eq!(csv, format!("{}\n", CSV_HEADER.join(",")));
    }

    #[test]
    fn three_rows_make_four_lines() {
        let csv = render_csv(&sample(3)).unwrap();
        assert_eq!(csv.lines().count(), 4);
        // a reason with a comma is quoted
        assert!(csv.contains("\"skipped: k_n <= 27, window\""));
    }

    #[test]
    fn json_round_trip() {
        let r = sample(6);
        assert_eq!(parse_json(&render_json(&r).unwrap()).unwrap(), r);
    }

    #[test]
    fn audit_detects_tampering() {
        let mut r = sample(6);
        assert!(audit_report(&r).is_empty());
        let csv = render_csv(&r).unwrap();
        assert!(audit_csv(&csv).unwrap().is_empty());
        r.rows[5].pass = !r.rows[5].pass;
        assert_eq!(audit_report(&r), vec![5]);
        assert_eq!(audit_csv(&render_csv(&r).unwrap()).unwrap(), vec![7]);
    }

    #[test]
    fn failed_side_condition_forces_fail() {
        let mut row = ReportRow { proxy: Some(1.0), bound: Some(0.5), scaled: Some(0.1), floor: Some(0.2), ..ReportRow::default() };
        row.finish();
        assert!(!row.pass && row.asserted() && row.reason.starts_with("failed"));
    }

    #[test]
    fn svg_is_well_formed() {
        let svg = render_svg(&sample(6));
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
    }

    #[test]
    fn io_errors_name_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("missing").join("r.csv");
        let err = emit_report(&sample(1), ReportFormat::Csv, &path).unwrap_err();
        assert!(err.to_string().contains("missing"));
    }
}
