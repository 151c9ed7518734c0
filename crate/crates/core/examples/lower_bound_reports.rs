//! Both lower-bound experiments for `p = 3`, `N = 5`, written as CSV, JSON
//! and SVG into a directory (default: the system temp dir).
//!
//! `cargo run --release --example lower_bound_reports -- [out_dir]`

use std::path::PathBuf;

use petersson_kit::experiments::{audit_report, emit_report, theorem1_experiment, theorem2_experiment, weight_sequence, ExperimentConfig, Mode, ReportFormat};

fn main() {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&dir).expect("output directory");

    for e in weight_sequence(3, 5, 6, Mode::Theorem1).unwrap() {
        println!("n = {}  4 pi 3^n / 5 = {:>9.3}  k_n = {:>4}  window: {}", e.n, e.target, e.k_n, e.window_ok);
    }

    let runs = [
        ("thm1", theorem1_experiment(&ExperimentConfig::new(3, 5, 6)).unwrap()),
        ("thm2", theorem2_experiment(&ExperimentConfig::new(3, 5, 2)).unwrap()),
    ];
    for (name, report) in &runs {
        println!("\n{name}: all asserted rows pass = {}, audit mismatches = {:?}", report.all_asserted_pass(), audit_report(report));
        for r in report.rows.iter().filter(|r| r.reason.is_empty()) {
            println!("  n = {}  k = {:>4}  proxy {:.3e} >= bound {:.3e}", r.n, r.k_n, r.proxy.unwrap(), r.bound.unwrap());
        }
        for (fmt, ext) in [(ReportFormat::Csv, "csv"), (ReportFormat::Json, "json"), (ReportFormat::Svg, "svg")] {
            let path = dir.join(format!("{name}.{ext}"));
            emit_report(report, fmt, &path).unwrap();
            println!("  wrote {}", path.display());
        }
    }
}
