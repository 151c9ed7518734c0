//! J-Bessel functions of integer order with certified enclosures.
//!
//! The power series
//! `J_a(x) = sum_j (-1)^j / (j! (a+j)!) (x/2)^{a+2j}`
//! is summed in ball arithmetic. Near the transition `x ~ a` its terms grow
//! far beyond the result, so the working precision starts at
//! `prec + ceil(0.3 a) + 64` bits and is raised from the cancellation
//! observed in the previous attempt until the enclosure is as tight as asked.
//!
//! [`bessel_j_backward`] is an independent Miller-recurrence evaluation whose
//! radius is a heuristic; it is only a cross-check.

use rug::float::Round;
use rug::{Assign, Float, Integer};

use crate::ball::Ball;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BesselError {
    #[error("could not certify J_{order} to {target} bits within {max_working} bits of working precision")]
    PrecisionExhausted { order: u64, target: u32, max_working: u32 },
    #[error("argument must be nonnegative, got {0}")]
    NegativeArgument(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum BesselMethod {
    Series,
    BackwardRecurrence,
}

impl BesselMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            BesselMethod::Series => "series",
            BesselMethod::BackwardRecurrence => "backward",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BesselEval {
    pub order: u64,
    pub x: Ball,
    pub value: Ball,
    pub method: BesselMethod,
    pub precision_bits: u32,
    /// Precision of the attempt that was accepted.
    pub working_precision: u32,
    /// False for the backward recurrence, whose radius is an estimate.
    pub rigorous: bool,
}

pub const MIN_PRECISION: u32 = 64;

/// Largest working precision tried before giving up.
pub fn max_working_precision(order: u64, prec: u32) -> u32 {
    let a = order.min(1 << 24) as u32;
    (4 * prec + 2 * a + 4096).max(16 * prec)
}

/// Bits for building an inexact argument `x`: the series at `x` cancels at
/// most `log2 e^x < 1.45 x` bits, which the input radius must survive.
pub fn argument_precision(x: f64, prec: u32) -> u32 {
    prec + 64 + (1.45 * x.abs().min(1e7)).ceil() as u32
}

struct SeriesSum {
    value: Ball,
    /// `log2` of the largest term magnitude.
    max_term_log2: f64,
}

fn log2_upper(x: &Float) -> f64 {
    if x.is_zero() {
        f64::NEG_INFINITY
    } else {
        x.clone().abs().log2().to_f64()
    }
}

/// One pass of the series at working precision `w`.
fn series_at(a: u64, x: &Ball, w: u32) -> SeriesSum {
    let h = x.with_prec(w).div_u64(2);
    let h2 = h.sqr();
    let fact = Integer::from(Integer::factorial(a as u32));
    let mut term = h.pow_u(a).div_ball(&Ball::from_integer(&fact, w));
    let mut sum = term.clone();
    let mut max_term = term.abs_upper();
    let h2_up = h2.abs_upper();
    let tiny = {
        let mut t = Float::with_val(w, 1u32);
        t >>= w as i32;
        t
    };
    let mut j: u64 = 0;
    let iteration_cap = 64 + 4 * (h2_up.to_f64().sqrt() as u64 + a) + 4 * w as u64;
    loop {
        let denom = (j + 1) * (a + j + 1);
        let next = term.mul_ball(&h2).div_u64(denom).neg();
        let ratio_below_one = h2_up < denom;
        if ratio_below_one {
            // Terms from here on alternate and decrease in magnitude.
            let bound = next.abs_upper();
            let scale = {
                let s = sum.abs_lower();
                let m = Float::with_val(w, &max_term * &tiny);
                if s > m {
                    s
                } else {
                    m
                }
            };
            let small = bound.is_zero() || Float::with_val(w, &bound / &tiny) <= scale;
            if small || j >= iteration_cap {
                return SeriesSum { value: sum.widen(&bound), max_term_log2: log2_upper(&max_term) };
            }
        }
        term = next;
        sum = sum.add_ball(&term);
        let m = term.abs_upper();
        if m > max_term {
            max_term = m;
        }
        j += 1;
    }
}

fn accurate_enough(v: &Ball, target: u32) -> bool {
    if v.is_exact() {
        return true;
    }
    v.is_finite() && v.relative_accuracy_bits() >= target as f64
}

/// `J_a(x)` by the power series, with `x >= 0`.
///
/// The result is accepted once its relative radius is below
/// `2^{-(prec - 8)}`, or once further precision stops shrinking the radius
/// (the input ball's own width then dominates).
pub fn bessel_j(a: u64, x: &Ball, prec: u32) -> Result<BesselEval, BesselError> {
    if prec < MIN_PRECISION {
        return Err(BesselError::InvalidParameter(format!("precision {prec} is below {MIN_PRECISION} bits")));
    }
    if !x.is_finite() || *x.mid() < 0 {
        return Err(BesselError::NegativeArgument(x.to_string()));
    }
    let target = prec - 8;
    let cap = max_working_precision(a, prec);
    let mut extra = (0.3 * a as f64).ceil() as u32 + 64;
    let mut previous: Option<Ball> = None;
    loop {
        let w = prec + extra;
        let s = series_at(a, x, w);
        let value = s.value.with_prec(prec + 32);
        let stalled = value.is_finite()
            && value.relative_accuracy_bits() >= 16.0
            && previous.as_ref().is_some_and(|p| {
                let shrink = Float::with_val(64, p.rad() / value.rad());
                shrink >= 0.5 && shrink < 65536
            });
        if accurate_enough(&value, target) || stalled {
            return Ok(BesselEval {
                order: a,
                x: x.clone(),
                value,
                method: BesselMethod::Series,
                precision_bits: prec,
                working_precision: w,
                rigorous: true,
            });
        }
        if w >= cap {
            return Err(BesselError::PrecisionExhausted { order: a, target, max_working: cap });
        }
        let observed = if value.mid().is_zero() { f64::INFINITY } else { s.max_term_log2 - log2_upper(value.mid()) };
        let needed = if observed.is_finite() { observed.max(0.0).ceil() as u32 + 96 } else { 2 * extra };
        extra = needed.max(2 * extra).min(cap - prec);
        previous = Some(value);
    }
}

/// `J_a(a + d a^{1/3})` for `|d| < 1`.
pub fn transition_eval(a: u64, d: f64, prec: u32) -> Result<Ball, BesselError> {
    if a < 8 {
        return Err(BesselError::InvalidParameter(format!("order {a} is below 8")));
    }
    if !(d.abs() < 1.0) {
        return Err(BesselError::InvalidParameter(format!("|d| = {} is not below 1", d.abs())));
    }
    let w = argument_precision(a as f64 + (a as f64).cbrt(), prec);
    let arg = Ball::from_u64(a, w).cbrt().mul_ball(&Ball::from_f64(d, w)).add_ball(&Ball::from_u64(a, w));
    Ok(bessel_j(a, &arg, prec)?.value)
}

/// Enclosures behind the two-sided bound `1 <= J_a(ax) / (x^a J_a(a)) <= e^{a(1-x)}`.
#[derive(Debug, Clone)]
pub struct RatioCheck {
    pub order: u64,
    pub x: f64,
    pub ratio: Ball,
    pub envelope: Ball,
    pub holds: bool,
}

pub fn ratio_bound_check(a: u64, x: f64, prec: u32) -> Result<RatioCheck, BesselError> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(BesselError::InvalidParameter(format!("x = {x} is outside (0, 1]")));
    }
    let one = Ball::one(prec);
    if x == 1.0 || a == 0 {
        return Ok(RatioCheck { order: a, x, ratio: one.clone(), envelope: one, holds: true });
    }
    let cap = max_working_precision(a, prec);
    let mut p = prec;
    loop {
        let xb = Ball::from_f64(x, p);
        let ax = xb.mul_u64(a);
        let jax = bessel_j(a, &ax, p)?.value;
        let ja = bessel_j(a, &Ball::from_u64(a, p), p)?.value;
        let ratio = jax.div_ball(&xb.pow_u(a).mul_ball(&ja));
        let envelope = Ball::one(p).sub_ball(&xb).mul_u64(a).exp();
        let holds = one.le(&ratio) && ratio.le(&envelope);
        let undecided = ratio.contains_point(&Float::with_val(64, 1)) || ratio.overlaps(&envelope);
        if holds || !undecided || p >= cap {
            return Ok(RatioCheck { order: a, x, ratio, envelope, holds });
        }
        p *= 2;
    }
}

/// Certifies `1 <= J_a(ax) / (x^a J_a(a)) <= e^{a(1-x)}`.
pub fn verify_ratio_bound(a: u64, x: f64, prec: u32) -> Result<bool, BesselError> {
    let check = ratio_bound_check(a, x, prec)?;
    if !check.holds && (check.ratio.contains_point(&Float::with_val(64, 1)) || check.ratio.overlaps(&check.envelope)) {
        return Err(BesselError::PrecisionExhausted {
            order: a,
            target: prec,
            max_working: max_working_precision(a, prec),
        });
    }
    Ok(check.holds)
}

/// Miller's backward recurrence normalised by `J_0 + 2 sum J_{2k} = 1`,
/// in plain floating point at `prec + 64` bits.
fn miller(a: u64, x: &Float, start: u64, w: u32) -> Float {
    let two_over_x = Float::with_val(w, 2u32) / x;
    let mut upper = Float::new(w);
    let mut cur = Float::with_val(w, 1u32);
    let mut norm = Float::new(w);
    let mut at_a = Float::new(w);
    let mut k = start;
    loop {
        if k == a {
            at_a.assign(&cur);
        }
        if k % 2 == 0 {
            if k == 0 {
                norm += &cur;
            } else {
                norm += Float::with_val(w, &cur * 2u32);
            }
        }
        if k == 0 {
            break;
        }
        // J_{k-1} = (2k/x) J_k - J_{k+1}
        let lower = Float::with_val(w, &two_over_x * &cur) * k - &upper;
        upper = cur;
        cur = lower;
        k -= 1;
        // rescale to keep the magnitudes tame
        if cur.get_exp().is_some_and(|e| e > 4096) {
            let s = -(cur.get_exp().unwrap_or(0));
            cur <<= s;
            upper <<= s;
            norm <<= s;
            at_a <<= s;
        }
    }
    at_a / norm
}

fn miller_start(a: u64, x: f64, w: u32) -> u64 {
    let base = (a as f64).max(x).ceil() as u64 + 16;
    let mut m = base;
    // crude bound J_m(x) <~ (e x / 2m)^m
    while (m as f64) * ((std::f64::consts::E * x.max(1e-300)) / (2.0 * m as f64)).log2() > -(w as f64 + 32.0) {
        m += 8.max(m / 16);
    }
    m + (m % 2)
}

/// `J_a(x)` by backward recurrence. The radius is twice the change seen when
/// the start order is raised, plus a rounding allowance; it is not rigorous.
pub fn bessel_j_backward(a: u64, x: &Ball, prec: u32) -> Result<BesselEval, BesselError> {
    if !x.is_positive() {
        return Err(BesselError::NegativeArgument(x.to_string()));
    }
    let w = prec + 64;
    let xf = Float::with_val(w, x.mid());
    let m1 = miller_start(a, xf.to_f64(), w);
    let m2 = m1 + (m1 / 4).max(32);
    let v1 = miller(a, &xf, m1, w);
    let v2 = miller(a, &xf, m2, w);
    let diff = Float::with_val_round(64, &v1 - &v2, Round::Up).0.abs();
    let mut slack = Float::with_val(64, v2.clone().abs());
    slack >>= prec as i32;
    let rad = Float::with_val_round(64, diff * 2u32 + slack, Round::Up).0;
    let value = Ball::with_radius(Float::with_val(prec, &v2), &rad);
    Ok(BesselEval {
        order: a,
        x: x.clone(),
        value,
        method: BesselMethod::BackwardRecurrence,
        precision_bits: prec,
        working_precision: w,
        rigorous: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(v: &str, prec: u32) -> Float {
        Float::with_val(prec, Float::parse(v).unwrap())
    }

    #[test]
    fn trivial_values() {
        let z = Ball::zero(128);
        assert!(bessel_j(0, &z, 128).unwrap().value.contains_point(&Float::with_val(64, 1)));
        let v = bessel_j(5, &z, 128).unwrap().value;
        assert!(v.contains_point(&Float::new(64)) && v.abs_upper() < 1e-30);
    }

    #[test]
    fn order_hundred_at_hundred() {
        // mpmath.besselj(100, 100), 70 digits
        let oracle = f("0.09636667329586155967431402487040184831175541982502185591797352259414559", 256);
        let e = bessel_j(100, &Ball::from_u64(100, 128), 128).unwrap();
        assert!(e.value.contains_point(&oracle), "{}", e.value);
        assert!(e.value.relative_accuracy_bits() > 110.0);
        let scaled = e.value.mul_ball(&Ball::from_u64(100, 128).cbrt());
        assert!(scaled.lower() > 0.3 && scaled.upper() < 0.5);
    }

    #[test]
    fn order_301_at_295() {
        let oracle = f("0.02171664771322045025496799012750292048644623582002749683084620945782696", 256);
        let s = bessel_j(301, &Ball::from_u64(295, 128), 128).unwrap();
        let b = bessel_j_backward(301, &Ball::from_u64(295, 128), 128).unwrap();
        assert!(s.value.contains_point(&oracle));
        assert!(s.value.overlaps(&b.value));
        assert!(!b.rigorous);
    }

    #[test]
    fn small_argument_matches_known_values() {
        // mpmath, 70 digits
        let j01 = f("0.7651976865579665514497175261026632209092742897553252418615475491192789", 256);
        let j12 = f("0.5767248077568733872024482422691370869203026897196754401211390207640871", 256);
        assert!(bessel_j(0, &Ball::one(192), 192).unwrap().value.contains_point(&j01));
        assert!(bessel_j(1, &Ball::from_u64(2, 192), 192).unwrap().value.contains_point(&j12));
    }

    #[test]
    fn backward_agrees_with_series() {
        for (a, x) in [(0u64, 0.25f64), (3, 7.5), (100, 100.0), (40, 90.0), (250, 120.0)] {
            let xb = Ball::from_f64(x, 128);
            let s = bessel_j(a, &xb, 128).unwrap();
            let b = bessel_j_backward(a, &xb, 128).unwrap();
            assert!(s.value.overlaps(&b.value), "a={a} x={x}: {} vs {}", s.value, b.value);
        }
    }

    #[test]
    fn ratio_bound_examples() {
        assert!(verify_ratio_bound(37, 1.0, 128).unwrap());
        assert!(verify_ratio_bound(50, 0.5, 128).unwrap());
        assert!(verify_ratio_bound(200, 0.9, 128).unwrap());
        assert!(verify_ratio_bound(0, 0.3, 128).unwrap());
    }

    #[test]
    fn transition_examples() {
        let v = transition_eval(216, 0.5, 128).unwrap();
        let scaled = v.mul_ball(&Ball::from_u64(6, 128));
        assert!(scaled.lower() > 0.1 && scaled.upper() < 0.8);
        let at_zero = transition_eval(64, 0.0, 128).unwrap();
        assert!(at_zero.is_positive());
        assert!(transition_eval(7, 0.0, 128).is_err());
        assert!(transition_eval(64, 1.0, 128).is_err());
    }

    #[test]
    fn transition_left_of_peak_is_below_envelope() {
        let a = 1000u64;
        let prec = 128;
        let v = transition_eval(a, -0.9, prec).unwrap();
        assert!(v.is_positive());
        let x = Ball::from_u64(a, prec).sub_ball(&Ball::from_f64(0.9, prec).mul_ball(&Ball::from_u64(10, prec)));
        let xr = x.div_u64(a);
        let ja = bessel_j(a, &Ball::from_u64(a, prec), prec).unwrap().value;
        let env = ja.mul_ball(&xr.pow_u(a)).mul_ball(&Ball::one(prec).sub_ball(&xr).mul_u64(a).exp());
        assert!(v.le(&env));
    }

    #[test]
    fn rejects_negative_argument() {
        assert!(matches!(bessel_j(3, &Ball::from_i64(-2, 128), 128), Err(BesselError::NegativeArgument(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn doubling_precision_refines(a in 0u64..400, x in 0.0f64..500.0) {
            let xb = Ball::from_f64(x, 64);
            let lo = bessel_j(a, &xb, 96).unwrap().value;
            let hi = bessel_j(a, &xb, 192).unwrap().value;
            prop_assert!(lo.overlaps(&hi));
            let mut slack = lo.abs_upper();
            slack >>= 90;
            prop_assert!(lo.widen(&slack).contains(&hi));
        }
    }

    #[test]
    fn exhausted_precision_is_an_error_not_a_wide_ball() {
        // cancellation near 2^{7900} exceeds the working-precision cap
        let r = bessel_j(611, &Ball::from_f64(5496.0, 192), 192);
        assert!(matches!(r, Err(BesselError::PrecisionExhausted { .. })));
        let ok = bessel_j(611, &Ball::from_f64(916.0, 192), 192).unwrap();
        assert!(ok.value.relative_accuracy_bits() > 150.0);
    }

}
