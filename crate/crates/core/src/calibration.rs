//! Frozen constants for the asymptotic checks.
//!
//! The asymptotic statements carry unspecified constants. Each one here was
//! measured on the calibration run recorded in `golden/calibration.csv`
//! (regenerate with `cargo run --release --example calibrate`) and frozen
//! at a round value below the observed extreme.

use std::collections::BTreeMap;

use crate::chebyshev::{C_Q_COMBINED, C_Q_ENDPOINT, C_X_COMBINED};

/// `|remainder| <= C_ENVELOPE e^{(k-1)(1 - 4/9 - log(9/5))} / (k-1)^{1/3}`.
pub const C_ENVELOPE: f64 = 5.0;
/// Floor for `|Delta - delta| (k-1)^{1/3}` in the window when `S(m,n,N) != 0`.
pub const C0: f64 = 0.05;
/// Constant in the `X_{2n}` proxy bound `c (k-1)^{-1/3} (log k)^{-2}`.
pub const C1: f64 = 0.015;
/// Floor for `|T_n| (k-1)^{1/3}` in the `Q_{2n+1}` experiment.
pub const C2: f64 = 0.4;
/// Constant in the `Q_{2n+1}` proxy bound `c k^{-1/3} (log k)^{-3}`.
pub const C3: f64 = 0.3;

pub const GOLDEN_CSV: &str = include_str!("../golden/calibration.csv");

pub fn constants() -> BTreeMap<String, f64> {
    [
        ("C_ENVELOPE", C_ENVELOPE),
        ("c0", C0),
        ("c1", C1),
        ("c2", C2),
        ("c3", C3),
        ("C_X_COMBINED", C_X_COMBINED),
        ("C_Q_COMBINED", C_Q_COMBINED),
        ("C_Q_ENDPOINT", C_Q_ENDPOINT),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

/// `(quantity, case, value)` rows of the golden file.
pub fn golden_rows() -> Vec<(String, String, f64)> {
    GOLDEN_CSV
        .lines()
        .skip(1)
        .filter_map(|l| {
            let mut it = l.splitn(3, ',');
            let (q, c, v) = (it.next()?, it.next()?, it.next()?);
            Some((q.to_string(), c.to_string(), v.trim().parse().ok()?))
        })
        .collect()
}

pub fn golden_value(quantity: &str) -> Option<f64> {
    golden_rows().into_iter().find(|r| r.0 == quantity).map(|r| r.2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_constants_sit_below_the_measured_extremes() {
        assert!(golden_value("remainder_over_envelope_max").unwrap() <= C_ENVELOPE);
        assert!(C0 > 0.0 && C0 <= golden_value("scaled_off_diagonal_min").unwrap());
        assert!(C1 > 0.0 && C1 <= golden_value("theorem1_proxy_ratio_min").unwrap());
        assert!(C2 > 0.0 && C2 <= golden_value("theorem2_scaled_min").unwrap());
        assert!(C3 > 0.0 && C3 <= golden_value("theorem2_proxy_ratio_min").unwrap());
    }

    #[test]
    fn golden_file_parses() {
        let rows = golden_rows();
        assert!(rows.len() > 10);
        assert!(rows.iter().all(|r| r.2.is_finite()));
    }
}
