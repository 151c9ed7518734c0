//! Weight sequences along which the Petersson values stay large, and the
//! two lower-bound experiments built on them.
//!
//! Along `k_n - 1 ~ 4 pi p^n / N` the value `Delta_{k_n,N}(1, p^{2n})` is the
//! `X_{2n}` moment of the harmonic weighted measure, so `|Delta|` over the
//! integration-by-parts constant is a lower bound for the discrepancy
//! against `mu_infty`. The second experiment does the same with `Q_{2n+1}`,
//! `mu_{infty,2}` and `k_n - 1 ~ 4 pi p^{2n+1} / N`.

mod report;

pub use report::{audit_csv, audit_report, emit_report, parse_json, render, render_csv, render_json, render_svg, CSV_HEADER, ExperimentReport, ReportError, ReportFormat, ReportMetadata, ReportRow};

use rayon::prelude::*;
use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer};

use crate::arith::gcd;
use crate::ball::Ball;
use crate::calibration;
use crate::chebyshev::{C_Q_COMBINED, C_X_COMBINED};
use crate::kloosterman::nonvanishing_certificate;
use crate::petersson::{asymptotic_check, delta, small_sum_check, AsymptoticCheck, PeterssonError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExperimentError {
    #[error("p = {p} and N = {level} are not coprime")]
    NotCoprime { p: u64, level: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Petersson(#[from] PeterssonError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Theorem1,
    Theorem2,
}

impl Mode {
    /// Exponent `e` with `sqrt(mn) = p^e` for row `n`.
    pub fn exponent(self, n: u32) -> u32 {
        match self {
            Mode::Theorem1 => n,
            Mode::Theorem2 => 2 * n + 1,
        }
    }

    pub fn first_index(self) -> u32 {
        match self {
            Mode::Theorem1 => 1,
            Mode::Theorem2 => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct WeightSequenceEntry {
    pub n: u32,
    pub p: u64,
    pub level: u64,
    pub k_n: u64,
    pub window_ok: bool,
    /// `4 pi p^e / N`.
    pub target: f64,
    /// `k_n <= 27`, outside the range where the asymptotics are asserted.
    pub small: bool,
}

const TARGET_PREC: u32 = 160;

fn target_ball(p: u64, e: u32, level: u64) -> Ball {
    let pe = Integer::from(p).pow(e);
    Ball::pi(TARGET_PREC).mul_u64(4).mul_ball(&Ball::from_integer(&pe, TARGET_PREC)).div_u64(level)
}

/// Even `k` with `k - 1` the odd integer nearest to `t`.
fn nearest_even_weight(t: &Ball) -> Result<u64, ExperimentError> {
    let fl = t.mid().to_integer_round(Round::Down).map(|(i, _)| i).unwrap_or_default();
    let below = if fl.is_odd() { fl } else { fl - 1u32 };
    let above = Integer::from(&below + 2u32);
    let d_below = t.sub_ball(&Ball::from_integer(&below, t.prec()));
    let d_above = Ball::from_integer(&above, t.prec()).sub_ball(t);
    let odd = if d_above.lt(&d_below) { above } else { below };
    let odd = odd.max(Integer::from(1));
    odd.to_u64()
        .and_then(|o| o.checked_add(1))
        .ok_or_else(|| ExperimentError::InvalidParameter(format!("weight for target {} overflows", t.mid_f64())))
}

fn window_holds(t: &Ball, k: u64) -> bool {
    let a = Ball::from_u64(k - 1, t.prec());
    t.sub_ball(&a).abs().lt(&a.cbrt())
}

/// `k_n` for `n` from [`Mode::first_index`] to `n_max`.
pub fn weight_sequence(p: u64, level: u64, n_max: u32, mode: Mode) -> Result<Vec<WeightSequenceEntry>, ExperimentError> {
    if level == 0 || p < 2 {
        return Err(ExperimentError::InvalidParameter(format!("p = {p}, N = {level}")));
    }
    if gcd(p, level) != 1 {
        return Err(ExperimentError::NotCoprime { p, level });
    }
    if level % 8 == 0 {
        log::warn!("N = {level} is divisible by 8; S(1, p^2n, N) may vanish");
    }
    (mode.first_index()..=n_max)
        .map(|n| {
            let t = target_ball(p, mode.exponent(n), level);
            let k = nearest_even_weight(&t)?;
            Ok(WeightSequenceEntry {
                n,
                p,
                level,
                k_n: k,
                window_ok: k >= 2 && window_holds(&t, k),
                target: t.mid_f64(),
                small: k <= 27,
            })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub p: u64,
    pub level: u64,
    pub n_max: u32,
    pub precision_bits: u32,
    pub max_k: u64,
}

impl ExperimentConfig {
    pub fn new(p: u64, level: u64, n_max: u32) -> Self {
        ExperimentConfig { p, level, n_max, precision_bits: 192, max_k: 2500 }
    }
}

fn down(b: &Float) -> f64 {
    b.to_f64_round(Round::Down)
}

fn up(b: &Float) -> f64 {
    b.to_f64_round(Round::Up)
}

fn skip_reason(e: &WeightSequenceEntry, max_k: u64) -> Option<String> {
    if e.small {
        Some("skipped: k_n <= 27".into())
    } else if e.k_n > max_k {
        Some(format!("skipped: k_n above max-k {max_k}"))
    } else if !e.window_ok {
        Some("skipped: window condition fails".into())
    } else {
        None
    }
}

fn base_row(e: &WeightSequenceEntry) -> ReportRow {
    ReportRow { n: e.n, k_n: e.k_n, target: e.target, window_ok: e.window_ok, ..ReportRow::default() }
}

/// `c (k-1)^{-1/3} (log k)^{-2}`.
pub fn theorem1_bound(k: u64, c: f64, prec: u32) -> Ball {
    let lk = Ball::from_u64(k, prec).ln();
    Ball::from_f64(c, prec).div_ball(&Ball::from_u64(k - 1, prec).cbrt()).div_ball(&lk.sqr())
}

/// `c k^{-1/3} (log k)^{-3}` with `k` or `k - 1` under the cube root.
pub fn theorem2_bound(k: u64, c: f64, shifted: bool, prec: u32) -> Ball {
    let lk = Ball::from_u64(k, prec).ln();
    let base = if shifted { k - 1 } else { k };
    Ball::from_f64(c, prec).div_ball(&Ball::from_u64(base, prec).cbrt()).div_ball(&lk.pow_u(3))
}

fn theorem1_row(cfg: &ExperimentConfig, e: &WeightSequenceEntry) -> ReportRow {
    let mut row = base_row(e);
    if let Some(r) = skip_reason(e, cfg.max_k) {
        row.reason = r;
        return row;
    }
    match nonvanishing_certificate(cfg.p, e.n, cfg.level) {
        Ok(c) if c.is_nonzero() => row.certificate = Some(c.kind().into()),
        Ok(_) => {
            row.reason = "skipped: S(1, p^2n, N) = 0".into();
            return row;
        }
        Err(err) => {
            row.reason = format!("failed: {err}");
            return row;
        }
    }
    let Some(twist) = cfg.p.checked_pow(2 * e.n) else {
        row.reason = "skipped: p^2n overflows u64".into();
        return row;
    };
    let prec = cfg.precision_bits;
    let v = match delta(e.k_n, cfg.level, 1, twist, prec) {
        Ok(v) => v,
        Err(err) => {
            row.reason = format!("failed: {err}");
            return row;
        }
    };
    row.fill_value(&v.value, &v.tail_bound);
    let abs = v.value.abs();
    let n2 = u64::from(e.n) * u64::from(e.n);
    let proxy = down(&abs.div_ball(&Ball::from_f64(C_X_COMBINED, prec)).div_u64(n2).lower());
    let bound = up(&theorem1_bound(e.k_n, calibration::C1, prec).upper());
    let scaled = down(&abs.mul_ball(&Ball::from_u64(e.k_n - 1, prec).cbrt()).lower());
    row.proxy = Some(proxy);
    row.bound = Some(bound);
    row.scaled = Some(scaled);
    row.floor = Some(calibration::C0);
    row.finish();
    row
}

fn theorem2_row(cfg: &ExperimentConfig, e: &WeightSequenceEntry) -> ReportRow {
    let mut row = base_row(e);
    if let Some(r) = skip_reason(e, cfg.max_k) {
        row.reason = r;
        return row;
    }
    match nonvanishing_certificate(cfg.p, 2 * e.n + 1, cfg.level) {
        Ok(c) if c.is_nonzero() => row.certificate = Some(c.kind().into()),
        Ok(_) => {
            row.reason = "skipped: S(1, p^(4n+2), N) = 0".into();
            return row;
        }
        Err(err) => {
            row.reason = format!("failed: {err}");
            return row;
        }
    }
    let prec = cfg.precision_bits;
    let chk = match small_sum_check(cfg.p, cfg.level, e.n, e.k_n, prec) {
        Ok(c) => c,
        Err(err) => {
            row.reason = format!("failed: {err}");
            return row;
        }
    };
    let total = chk.head.add_ball(&chk.last.value);
    row.fill_value(&total, &chk.last.tail_bound);
    let abs = total.abs();
    let deg = u64::from(2 * e.n + 1);
    let proxy = down(&abs.div_ball(&Ball::from_f64(C_Q_COMBINED, prec)).div_u64(deg * deg * deg).lower());
    row.proxy = Some(proxy);
    row.bound = Some(up(&theorem2_bound(e.k_n, calibration::C3, false, prec).upper()));
    row.bound_alt = Some(up(&theorem2_bound(e.k_n, calibration::C3, true, prec).upper()));
    row.scaled = Some(down(&abs.mul_ball(&Ball::from_u64(e.k_n - 1, prec).cbrt()).lower()));
    row.floor = Some(calibration::C2);
    row.head_abs = Some(up(&chk.head.abs_upper()));
    row.head_envelope = Some(down(&chk.head_envelope().lower()));
    row.finish();
    row
}

fn run(cfg: &ExperimentConfig, mode: Mode) -> Result<ExperimentReport, ExperimentError> {
    if cfg.precision_bits < 64 {
        return Err(ExperimentError::InvalidParameter(format!("precision {} is below 64 bits", cfg.precision_bits)));
    }
    let entries = weight_sequence(cfg.p, cfg.level, cfg.n_max, mode)?;
    let rows: Vec<ReportRow> = entries
        .par_iter()
        .map(|e| match mode {
            Mode::Theorem1 => theorem1_row(cfg, e),
            Mode::Theorem2 => theorem2_row(cfg, e),
        })
        .collect();
    Ok(ExperimentReport { metadata: ReportMetadata::new(mode, cfg), rows })
}

/// Rows `n = 1..=n_max` of the `X_{2n}` experiment.
pub fn theorem1_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    run(cfg, Mode::Theorem1)
}

/// Rows `n = 0..=n_max` of the `Q_{2n+1}` experiment.
pub fn theorem2_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    run(cfg, Mode::Theorem2)
}

/// Tuples `(k, N, 1, p^{2j})` with `k_min <= k <= k_max` even and inside the window.
pub fn asymptotic_grid(primes: &[u64], levels: &[u64], k_min: u64, k_max: u64) -> Vec<(u64, u64, u64, u64)> {
    let mut out = Vec::new();
    for &p in primes {
        for &level in levels {
            for j in 0u32.. {
                let t = target_ball(p, j, level);
                let (lo, hi) = (t.mid_f64() - t.mid_f64().cbrt() - 1.0, t.mid_f64() + t.mid_f64().cbrt() + 2.0);
                if lo > k_max as f64 {
                    break;
                }
                let Some(n) = p.checked_pow(2 * j) else { break };
                let mut k = (lo.max(k_min as f64).ceil() as u64).max(k_min);
                k += k % 2;
                while k as f64 <= hi && k <= k_max {
                    if window_holds(&t, k) {
                        out.push((k, level, 1, n));
                    }
                    k += 2;
                }
            }
        }
    }
    out
}

/// [`asymptotic_check`] over a grid, in parallel.
pub fn asymptotic_sweep(grid: &[(u64, u64, u64, u64)], prec: u32) -> Vec<Result<AsymptoticCheck, PeterssonError>> {
    grid.par_iter().map(|&(k, level, m, n)| asymptotic_check(k, level, m, n, prec)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_weight_examples() {
        let seq = weight_sequence(3, 5, 4, Mode::Theorem1).unwrap();
        let e4 = seq.iter().find(|e| e.n == 4).unwrap();
        assert!((e4.target - 203.575).abs() < 0.01);
        assert_eq!(e4.k_n, 204);
        assert!(e4.window_ok && !e4.small);
        let e1 = &seq[0];
        assert_eq!(e1.n, 1);
        assert!((e1.target - 7.54).abs() < 0.01);
        assert_eq!(e1.k_n, 8);
        assert!(e1.small);
        assert!(seq.iter().all(|e| e.k_n % 2 == 0));
    }

    #[test]
    fn nearest_odd_is_chosen() {
        // 4 pi 729 / 5 = 1832.18: 1833 is nearer than 1831
        let seq = weight_sequence(3, 5, 6, Mode::Theorem1).unwrap();
        assert_eq!(seq.last().unwrap().k_n, 1834);
        for e in &seq {
            let best = (1..)
                .step_by(2)
                .take_while(|o| (*o as f64) < e.target + 3.0)
                .min_by(|a, b| (*a as f64 - e.target).abs().partial_cmp(&(*b as f64 - e.target).abs()).unwrap())
                .unwrap();
            assert_eq!(e.k_n - 1, best);
        }
    }

    #[test]
    fn theorem_two_sequence() {
        let seq = weight_sequence(3, 5, 2, Mode::Theorem2).unwrap();
        let ks: Vec<u64> = seq.iter().map(|e| e.k_n).collect();
        assert_eq!(ks, vec![8, 68, 612]);
        assert_eq!(seq[0].n, 0);
    }

    #[test]
    fn not_coprime_is_rejected() {
        assert_eq!(weight_sequence(3, 6, 3, Mode::Theorem1).unwrap_err(), ExperimentError::NotCoprime { p: 3, level: 6 });
    }

    #[test]
    fn growth_is_geometric() {
        for (p, level) in [(3u64, 5u64), (5, 6), (7, 4)] {
            for e in weight_sequence(p, level, 12, Mode::Theorem1).unwrap().iter().filter(|e| e.n >= 3) {
                assert!(e.k_n as f64 >= (p as f64).powf(0.9 * e.n as f64), "{e:?}");
            }
        }
    }

    #[test]
    fn grid_rows_are_in_window() {
        let g = asymptotic_grid(&[3, 5], &[3, 4, 5, 6], 28, 600);
        assert!(!g.is_empty());
        for (k, level, m, n) in g {
            assert!(k % 2 == 0 && (28..=600).contains(&k));
            assert!(crate::petersson::window_ok(k, level, m, n));
        }
    }

    #[test]
    fn theorem_one_rows_pass_and_audit() {
        let cfg = ExperimentConfig { max_k: 700, ..ExperimentConfig::new(3, 5, 5) };
        let r = theorem1_experiment(&cfg).unwrap();
        assert_eq!(r.rows.len(), 5);
        for row in &r.rows {
            if row.n >= 3 {
                assert!(row.pass, "{row:?}");
            } else {
                assert!(row.reason.starts_with("skipped"));
            }
        }
        assert!(audit_report(&r).is_empty());
    }

    #[test]
    fn theorem_two_rows() {
        let cfg = ExperimentConfig { max_k: 700, ..ExperimentConfig::new(3, 5, 2) };
        let r = theorem2_experiment(&cfg).unwrap();
        for row in r.rows.iter().filter(|r| r.n >= 1) {
            assert!(row.pass, "{row:?}");
            assert!(row.head_abs.unwrap() < 1e-20);
        }
        assert!(audit_report(&r).is_empty());
    }
}
