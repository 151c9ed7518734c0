//! Measures the extremes behind the frozen constants and rewrites
//! `golden/calibration.csv`.
//!
//! `cargo run --release --example calibrate [-- --write]`

use petersson_kit::experiments::{asymptotic_grid, asymptotic_sweep, weight_sequence, ExperimentConfig, Mode};
use petersson_kit::kloosterman::nonvanishing_certificate;
use petersson_kit::petersson::{delta, small_sum_check};

const PREC: u32 = 192;

fn main() {
    let mut lines = vec!["quantity,case,value".to_string()];
    let mut push = |q: &str, case: String, v: f64| lines.push(format!("{q},{case},{v:e}"));

    let grid = asymptotic_grid(&[3, 5], &[3, 4, 5, 6], 28, 600);
    let mut worst_ratio = (0f64, String::new());
    let mut least_scaled = (f64::INFINITY, String::new());
    for (chk, (k, level, m, n)) in asymptotic_sweep(&grid, PREC).into_iter().zip(&grid) {
        let chk = chk.expect("grid value");
        let case = format!("k={k} N={level} m={m} n={n}");
        let r = chk.remainder_ratio().upper().to_f64();
        if r > worst_ratio.0 {
            worst_ratio = (r, case.clone());
        }
        if chk.leading_sum_nonzero {
            let s = chk.scaled_off_diagonal().lower().to_f64();
            if s < least_scaled.0 {
                least_scaled = (s, case);
            }
        }
    }
    println!("grid of {} tuples", grid.len());
    push("remainder_over_envelope_max", worst_ratio.1, worst_ratio.0);
    push("scaled_off_diagonal_min", least_scaled.1, least_scaled.0);

    let mut c1 = (f64::INFINITY, String::new());
    for (p, level, n_max) in [(3u64, 5u64, 6u32), (3, 4, 5), (5, 3, 4), (5, 6, 4), (7, 4, 3), (7, 5, 3), (11, 6, 2)] {
        for e in weight_sequence(p, level, n_max, Mode::Theorem1).unwrap() {
            if e.small || !e.window_ok || e.k_n > ExperimentConfig::new(p, level, n_max).max_k {
                continue;
            }
            assert!(nonvanishing_certificate(p, e.n, level).unwrap().is_nonzero());
            let v = delta(e.k_n, level, 1, p.pow(2 * e.n), PREC).unwrap();
            let k = e.k_n as f64;
            let abs = v.value.abs().lower().to_f64();
            let proxy = abs / (14.0 * (e.n * e.n) as f64);
            let ratio = proxy * (k - 1.0).cbrt() * k.ln().powi(2);
            let case = format!("p={p} N={level} n={} k={}", e.n, e.k_n);
            if ratio < c1.0 {
                c1 = (ratio, case.clone());
            }
            push("theorem1_scaled", case, abs * (k - 1.0).cbrt());
        }
    }
    push("theorem1_proxy_ratio_min", c1.1, c1.0);

    let mut c2 = (f64::INFINITY, String::new());
    let mut c3 = (f64::INFINITY, String::new());
    for (p, level, n_max) in [(3u64, 5u64, 2u32), (3, 4, 2), (5, 3, 1), (5, 6, 1), (7, 4, 1), (7, 5, 1)] {
        for e in weight_sequence(p, level, n_max, Mode::Theorem2).unwrap() {
            if e.small || !e.window_ok || e.k_n > 2500 {
                continue;
            }
            let chk = small_sum_check(p, level, e.n, e.k_n, PREC).unwrap();
            let t = chk.head.add_ball(&chk.last.value).abs().lower().to_f64();
            let k = e.k_n as f64;
            let deg = (2 * e.n + 1) as f64;
            let case = format!("p={p} N={level} n={} k={}", e.n, e.k_n);
            let s = t * (k - 1.0).cbrt();
            if s < c2.0 {
                c2 = (s, case.clone());
            }
            let r = t / (8.0 * deg.powi(3)) * k.cbrt() * k.ln().powi(3);
            if r < c3.0 {
                c3 = (r, case.clone());
            }
            push("theorem2_head_abs", case, chk.head.abs_upper().to_f64());
        }
    }
    push("theorem2_scaled_min", c2.1, c2.0);
    push("theorem2_proxy_ratio_min", c3.1, c3.0);

    let text = lines.join("\n") + "\n";
    print!("{text}");
    if std::env::args().any(|a| a == "--write") {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/golden/calibration.csv");
        std::fs::write(path, text).expect("write golden file");
        eprintln!("wrote {path}");
    }
}
