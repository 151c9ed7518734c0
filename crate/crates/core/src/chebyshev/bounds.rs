//! Growth of `Q_n` and `X_{2n}` on their supports, measured exactly on a
//! uniform rational grid.
//!
//! The discrepancy argument integrates by parts, so what it consumes is
//! `|P(left)| + |P(right)| + TV(P)`. That combined quantity is `O(n^2)` for
//! `X_{2n}` and `O(n^3)` for `Q_n`. The pointwise derivative sup is reported
//! too, but it grows one power faster and carries no cap.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::poly::IntPolynomial;

use super::{chebyshev_x, poly_q};

/// Grid intervals; the grid has `GRID_POINTS + 1` points.
pub const GRID_POINTS: usize = 1000;
/// Cap on `(|X_{2n}(2)| + |X_{2n}(-2)| + TV(X_{2n})) / n^2`.
pub const C_X_COMBINED: f64 = 14.0;
/// Cap on `(|Q_n(3)| + |Q_n(-1)| + TV(Q_n)) / n^3`.
pub const C_Q_COMBINED: f64 = 8.0;
/// Cap on `|Q_n(3)| / n^2`.
pub const C_Q_ENDPOINT: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DerivativeBounds {
    pub n: usize,
    /// `max |Q_n'| / n^3` on the grid over `[-1, 3]`.
    pub q_derivative_ratio: f64,
    /// `|Q_n(3)| / n^2`.
    pub q_endpoint_ratio: f64,
    /// `(|Q_n(3)| + |Q_n(-1)| + TV(Q_n)) / n^3`.
    pub q_combined_ratio: f64,
    /// `max |X_{2n}'| / n^2` on the grid over `[-2, 2]`.
    pub x_derivative_ratio: f64,
    /// `(|X_{2n}(2)| + |X_{2n}(-2)| + TV(X_{2n})) / n^2`.
    pub x_combined_ratio: f64,
}

impl DerivativeBounds {
    pub fn within_caps(&self) -> bool {
        self.q_endpoint_ratio <= C_Q_ENDPOINT && self.q_combined_ratio <= C_Q_COMBINED && self.x_combined_ratio <= C_X_COMBINED
    }
}

struct GridProfile {
    left: Rational,
    right: Rational,
    variation: Rational,
    max_derivative: Rational,
}

fn profile(p: &IntPolynomial, lo: i64, hi: i64) -> GridProfile {
    let dp = p.derivative();
    let pts: Vec<Rational> = (0..=GRID_POINTS)
        .map(|i| Rational::from(lo) + Rational::from(((hi - lo) * i as i64, GRID_POINTS as i64)))
        .collect();
    let (vals, ders): (Vec<Rational>, Vec<Rational>) = pts.par_iter().map(|x| (p.eval_rational(x), dp.eval_rational(x).abs())).unzip();
    let variation = vals.windows(2).fold(Rational::new(), |acc, w| acc + Rational::from(&w[1] - &w[0]).abs());
    let max_derivative = ders.into_iter().max().unwrap_or_default();
    GridProfile {
        left: vals[0].clone().abs(),
        right: vals[GRID_POINTS].clone().abs(),
        variation,
        max_derivative,
    }
}

fn ratio(num: Rational, n: usize, power: u32) -> f64 {
    (num / Integer::from(n).pow(power)).to_f64()
}

/// Ratios for `Q_n` and `X_{2n}`, `n >= 1`.
pub fn derivative_bound_check(n: usize) -> DerivativeBounds {
    let n = n.max(1);
    let q = profile(&poly_q(n), -1, 3);
    let x = profile(&chebyshev_x(2 * n), -2, 2);
    DerivativeBounds {
        n,
        q_derivative_ratio: ratio(q.max_derivative, n, 3),
        q_endpoint_ratio: ratio(q.right.clone(), n, 2),
        q_combined_ratio: ratio(q.left + q.right + q.variation, n, 3),
        x_derivative_ratio: ratio(x.max_derivative, n, 2),
        x_combined_ratio: ratio(x.left + x.right + x.variation, n, 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_case_by_hand() {
        // Q_1 = x: derivative 1, Q_1(3) = 3, TV on [-1,3] = 4
        let b = derivative_bound_check(1);
        assert_eq!(b.q_derivative_ratio, 1.0);
        assert_eq!(b.q_endpoint_ratio, 3.0);
        assert_eq!(b.q_combined_ratio, 8.0);
        // X_2 = x^2 - 1: |X_2(+-2)| = 3, TV = 8, sup |2x| = 4
        assert_eq!(b.x_combined_ratio, 14.0);
        assert_eq!(b.x_derivative_ratio, 4.0);
    }

    #[test]
    fn endpoint_value_has_closed_form() {
        // Y_i(3) = X_{2i}(2) = 2i + 1, summed over i of the parity of n
        for n in 1..=40usize {
            let s: usize = (n % 2..=n).step_by(2).map(|i| 2 * i + 1).sum();
            assert_eq!(poly_q(n).eval_integer(&Integer::from(3)), s as i64);
        }
    }

    #[test]
    fn ratios_stay_under_caps() {
        for n in [1usize, 2, 5, 10, 20, 40] {
            let b = derivative_bound_check(n);
            assert!(b.within_caps(), "{b:?}");
        }
    }

    #[test]
    fn pointwise_derivative_ratio_grows() {
        let a = derivative_bound_check(5).x_derivative_ratio;
        let b = derivative_bound_check(20).x_derivative_ratio;
        assert!(b > 3.0 * a);
    }
}
