//! Truncated Petersson formula
//!
//! `Delta_{k,N}(m,n) = delta(m,n) + 2 pi i^k sum_{b>=1} S(m,n,bN)/(bN) J_{k-1}(4 pi sqrt(mn)/(bN))`
//!
//! with a certified bound on the omitted terms `b >= B`.
//!
//! Write `a = k - 1` and `x_b = 4 pi sqrt(mn) / (a b N)`. For `x_B < 1`,
//! `|J_a(a x)| <= x^a e^{a(1-x)} J_a(a)` on `0 < x <= 1` and
//! `|S(m,n,c)| <= phi(c) <= c` give, after comparing the sum over `b > B`
//! with an integral,
//!
//! `tail <= 2 pi J_a(a) [ e^{a(1-x_B)} x_B^a + (e x_B)^a B / (a-1) ]`.

use rayon::prelude::*;
use rug::float::Round;
use rug::{Float, Integer};

use crate::ball::Ball;
use crate::bessel::{argument_precision, bessel_j, BesselError};
use crate::kloosterman::{brute_force_kloosterman_prec, kloosterman_exact, KloostermanError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PeterssonError {
    #[error("weight {0} must be even and at least 4")]
    InvalidWeight(u64),
    #[error("truncation B = {0} must be at least 2")]
    InvalidTruncation(u64),
    #[error("tail not certifiable: x_B = {x_b} is not below 1")]
    TailNotCertifiable { x_b: f64 },
    #[error("window condition fails: |{target} - {k_minus_one}| >= {width}")]
    WindowViolation { target: f64, k_minus_one: u64, width: f64 },
    #[error(transparent)]
    Bessel(#[from] BesselError),
    #[error(transparent)]
    Kloosterman(#[from] KloostermanError),
}

#[derive(Debug, Clone)]
pub struct PeterssonValue {
    pub k: u64,
    pub level: u64,
    pub m: u64,
    pub n: u64,
    /// Terms `b = 1, ..., B - 1` are summed.
    pub trunc: u64,
    pub precision_bits: u32,
    pub delta_term: u8,
    /// `2 pi i^k S(m,n,bN)/(bN) J_{k-1}(...)` for `b = 1, ..., B - 1`.
    pub terms: Vec<Ball>,
    /// `delta + sum of terms`.
    pub partial: Ball,
    /// Upper bound on the omitted terms, rounded up.
    pub tail_bound: Float,
    /// `partial` widened by `tail_bound`.
    pub value: Ball,
}

impl PeterssonValue {
    pub fn tail_bound_f64(&self) -> f64 {
        self.tail_bound.to_f64_round(Round::Up)
    }

    /// `value - delta`, computed from the terms.
    pub fn off_diagonal(&self) -> Ball {
        self.sum_from(0)
    }

    /// Sum of the terms with `b > first` plus the tail.
    fn sum_from(&self, skip: usize) -> Ball {
        let mut acc = Ball::zero(self.precision_bits);
        for t in self.terms.iter().skip(skip) {
            acc = acc.add_ball(t);
        }
        acc.widen(&self.tail_bound)
    }
}

fn check_weight(k: u64) -> Result<(), PeterssonError> {
    if k < 4 || k % 2 == 1 {
        return Err(PeterssonError::InvalidWeight(k));
    }
    Ok(())
}

/// `4 pi sqrt(mn) / N` as a ball.
pub fn leading_argument(level: u64, m: u64, n: u64, prec: u32) -> Ball {
    let mn = Integer::from(m) * n;
    Ball::pi(prec).mul_u64(4).mul_ball(&Ball::from_integer(&mn, prec).sqrt()).div_u64(level)
}

/// `x_B = 4 pi sqrt(mn) / ((k-1) B N)`.
pub fn x_at(k: u64, level: u64, m: u64, n: u64, trunc: u64, prec: u32) -> Ball {
    leading_argument(level, m, n, prec).div_u64(k - 1).div_u64(trunc)
}

/// Twice the smallest `B >= 2` with `x_B <= 5/18`.
pub fn default_truncation(k: u64, level: u64, m: u64, n: u64) -> u64 {
    let x1 = x_at(k, level, m, n, 1, 128);
    let threshold = Ball::from_u64(5, 128).div_u64(18);
    let mut b = 2u64;
    while !x1.div_u64(b).le(&threshold) {
        b += 1;
    }
    2 * b
}

/// `2 pi J_a(a) [ e^{a(1-x_B)} x_B^a + (e x_B)^a B / (a-1) ]` with `a = k-1`.
pub fn tail_bound(k: u64, level: u64, m: u64, n: u64, trunc: u64, prec: u32) -> Result<Float, PeterssonError> {
    check_weight(k)?;
    if trunc < 2 {
        return Err(PeterssonError::InvalidTruncation(trunc));
    }
    let a = k - 1;
    let xb = x_at(k, level, m, n, trunc, prec);
    if !xb.lt(&Ball::one(prec)) {
        return Err(PeterssonError::TailNotCertifiable { x_b: xb.mid_f64() });
    }
    let ja = bessel_j(a, &Ball::from_u64(a, prec), prec)?.value;
    let one = Ball::one(prec);
    let first = one.sub_ball(&xb).mul_u64(a).exp().mul_ball(&xb.pow_u(a));
    let rest = one.exp().mul_ball(&xb).pow_u(a).mul_u64(trunc).div_u64(a - 1);
    let bound = Ball::pi(prec).mul_u64(2).mul_ball(&ja.abs()).mul_ball(&first.add_ball(&rest));
    Ok(Float::with_val_round(64, bound.upper(), Round::Up).0)
}

fn series_term(k: u64, level: u64, m: u64, n: u64, b: u64, prec: u32) -> Result<Ball, PeterssonError> {
    let c = b * level;
    let sum = brute_force_kloosterman_prec(reduce_u64(m, c), reduce_u64(n, c), c, prec);
    if sum.is_zero() {
        return Ok(Ball::zero(prec));
    }
    let s = sum.numeric;
    let approx = leading_argument(level, m, n, 64).mid_f64() / b as f64;
    let arg = leading_argument(level, m, n, argument_precision(approx, prec)).div_u64(b);
    let j = bessel_j(k - 1, &arg, prec)?.value;
    let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
    Ok(Ball::pi(prec).mul_i64(2 * sign).mul_ball(&s).div_u64(c).mul_ball(&j))
}

fn reduce_u64(v: u64, c: u64) -> i64 {
    (v % c) as i64
}

/// `Delta_{k,N}(m,n)` summed over `b < B` plus a certified tail.
pub fn delta_truncated(k: u64, level: u64, m: u64, n: u64, trunc: u64, prec: u32) -> Result<PeterssonValue, PeterssonError> {
    check_weight(k)?;
    if trunc < 2 {
        return Err(PeterssonError::InvalidTruncation(trunc));
    }
    let tail = tail_bound(k, level, m, n, trunc, prec)?;
    let terms: Vec<Ball> = (1..trunc)
        .into_par_iter()
        .map(|b| series_term(k, level, m, n, b, prec))
        .collect::<Result<_, _>>()?;
    let delta_term = u8::from(m == n);
    let mut partial = Ball::from_u64(delta_term as u64, prec);
    for t in &terms {
        partial = partial.add_ball(t);
    }
    let value = partial.widen(&tail);
    Ok(PeterssonValue {
        k,
        level,
        m,
        n,
        trunc,
        precision_bits: prec,
        delta_term,
        terms,
        partial,
        tail_bound: tail,
        value,
    })
}

/// [`delta_truncated`] at [`default_truncation`].
pub fn delta(k: u64, level: u64, m: u64, n: u64, prec: u32) -> Result<PeterssonValue, PeterssonError> {
    check_weight(k)?;
    delta_truncated(k, level, m, n, default_truncation(k, level, m, n), prec)
}

/// `|4 pi sqrt(mn)/N - (k-1)| < (k-1)^{1/3}`, decided on enclosures.
pub fn window_ok(k: u64, level: u64, m: u64, n: u64) -> bool {
    let prec = 128;
    let t = leading_argument(level, m, n, prec).sub_ball(&Ball::from_u64(k - 1, prec)).abs();
    t.lt(&Ball::from_u64(k - 1, prec).cbrt())
}

/// `1 - 4/9 - log(9/5)`.
pub fn envelope_exponent(prec: u32) -> Ball {
    let r = Ball::from_u64(9, prec).div_u64(5).ln();
    Ball::from_u64(5, prec).div_u64(9).sub_ball(&r)
}

/// `e^{(k-1)(1 - 4/9 - log(9/5))} / (k-1)^{1/3}`.
pub fn error_envelope(k: u64, prec: u32) -> Ball {
    let a = Ball::from_u64(k - 1, prec);
    envelope_exponent(prec).mul_u64(k - 1).exp().div_ball(&a.cbrt())
}

#[derive(Debug, Clone)]
pub struct AsymptoticCheck {
    pub k: u64,
    pub level: u64,
    pub m: u64,
    pub n: u64,
    pub window_ok: bool,
    /// Whether `S(m,n,N) != 0` by the exact test.
    pub leading_sum_nonzero: bool,
    pub value: PeterssonValue,
    pub main_term: Ball,
    /// Terms `b >= 2` plus the tail.
    pub remainder: Ball,
    pub error_envelope: Ball,
}

impl AsymptoticCheck {
    /// `|remainder| <= c * envelope`, certified.
    pub fn remainder_within(&self, c: f64) -> bool {
        self.remainder.abs().le(&self.error_envelope.mul_ball(&Ball::from_f64(c, self.error_envelope.prec())))
    }

    /// `|value - delta| (k-1)^{1/3}` as a ball.
    pub fn scaled_off_diagonal(&self) -> Ball {
        let p = self.main_term.prec();
        self.value.off_diagonal().abs().mul_ball(&Ball::from_u64(self.k - 1, p).cbrt())
    }

    /// `|remainder| / envelope`, the quantity the constant `C` bounds.
    pub fn remainder_ratio(&self) -> Ball {
        self.remainder.abs().div_ball(&self.error_envelope)
    }
}

pub fn asymptotic_check(k: u64, level: u64, m: u64, n: u64, prec: u32) -> Result<AsymptoticCheck, PeterssonError> {
    check_weight(k)?;
    if k < 28 {
        return Err(PeterssonError::InvalidWeight(k));
    }
    let value = delta(k, level, m, n, prec)?;
    let main_term = value.terms[0].clone();
    let remainder = value.sum_from(1);
    let c = level;
    let leading_sum_nonzero = !kloosterman_exact(reduce_u64(m, c), reduce_u64(n, c), c).is_zero_exact();
    Ok(AsymptoticCheck {
        k,
        level,
        m,
        n,
        window_ok: window_ok(k, level, m, n),
        leading_sum_nonzero,
        value,
        main_term,
        remainder,
        error_envelope: error_envelope(k, prec),
    })
}

/// Head `sum_{i<n} Delta_{k_n,N}(1, p^{4i+2})` and last term `Delta_{k_n,N}(1, p^{4n+2})`.
#[derive(Debug, Clone)]
pub struct SmallSumCheck {
    pub p: u64,
    pub level: u64,
    pub n: u32,
    pub k: u64,
    pub head: Ball,
    pub last: PeterssonValue,
}

impl SmallSumCheck {
    /// `(5e/18)^{k-1} log(k) / (k-1)^{1/3}`.
    pub fn head_envelope(&self) -> Ball {
        let prec = self.head.prec();
        let base = Ball::one(prec).exp().mul_u64(5).div_u64(18);
        base.pow_u(self.k - 1)
            .mul_ball(&Ball::from_u64(self.k, prec).ln())
            .div_ball(&Ball::from_u64(self.k - 1, prec).cbrt())
    }

    /// `|last| (k-1)^{1/3}`.
    pub fn scaled_last(&self) -> Ball {
        let prec = self.head.prec();
        self.last.value.abs().mul_ball(&Ball::from_u64(self.k - 1, prec).cbrt())
    }
}

fn pow_u64(p: u64, e: u32) -> Result<u64, PeterssonError> {
    p.checked_pow(e).ok_or(PeterssonError::Kloosterman(KloostermanError::InvalidModulus {
        modulus: p,
        reason: format!("{p}^{e} overflows u64"),
    }))
}

pub fn small_sum_check(p: u64, level: u64, n: u32, k: u64, prec: u32) -> Result<SmallSumCheck, PeterssonError> {
    check_weight(k)?;
    if crate::arith::gcd(p, level) != 1 {
        return Err(KloostermanError::NotCoprime { a: p as i64, modulus: level }.into());
    }
    let last_n = pow_u64(p, 4 * n + 2)?;
    if !window_ok(k, level, 1, last_n) {
        let target = leading_argument(level, 1, last_n, 64).mid_f64();
        return Err(PeterssonError::WindowViolation {
            target,
            k_minus_one: k - 1,
            width: ((k - 1) as f64).cbrt(),
        });
    }
    let mut head = Ball::zero(prec);
    for i in 0..n {
        head = head.add_ball(&delta(k, level, 1, pow_u64(p, 4 * i + 2)?, prec)?.value);
    }
    let last = delta(k, level, 1, last_n, prec)?;
    Ok(SmallSumCheck { p, level, n, k, head, last })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(v: &str) -> Float {
        Float::with_val(256, Float::parse(v).unwrap())
    }

    #[test]
    fn weight_twelve_level_one_against_direct_summation() {
        // direct mpmath summation of the series to b = 400
        let oracle = f("2.8402873751675004918625185900048");
        let v = delta_truncated(12, 1, 1, 1, 40, 128).unwrap();
        assert!(v.value.contains_point(&oracle), "{}", v.value);
        assert_eq!(v.delta_term, 1);
        assert!(v.value.rad() >= &v.tail_bound);
    }

    #[test]
    fn invalid_inputs() {
        assert_eq!(delta_truncated(11, 1, 1, 1, 10, 128).unwrap_err(), PeterssonError::InvalidWeight(11));
        assert_eq!(delta_truncated(12, 1, 1, 1, 1, 128).unwrap_err(), PeterssonError::InvalidTruncation(1));
        // x_2 = 4 pi 100 / (11 * 2) > 1
        assert!(matches!(delta_truncated(12, 1, 100, 100, 2, 128), Err(PeterssonError::TailNotCertifiable { .. })));
    }

    #[test]
    fn tail_shrinks_and_values_nest() {
        let mut prev: Option<PeterssonValue> = None;
        for b in [6u64, 8, 12, 20, 40] {
            let v = delta_truncated(30, 3, 1, 25, b, 128).unwrap();
            if let Some(p) = &prev {
                assert!(v.tail_bound < p.tail_bound);
                let mut slack = p.value.abs_upper();
                slack >>= 120;
                assert!(p.value.widen(&slack).contains(&v.value), "B={b}");
            }
            prev = Some(v);
        }
    }

    #[test]
    fn window_case_is_dominated_by_first_term() {
        // p = 5, n = 1, N = 3: 4 pi 5/3 = 20.94, k - 1 = 21
        let k = 22;
        assert!(window_ok(k, 3, 1, 25));
        let v = delta(k, 3, 1, 25, 128).unwrap();
        let first = v.terms[0].abs();
        let rest = v.off_diagonal().sub_ball(&v.terms[0]).abs();
        assert!(rest.lt(&first.div_u64(10)));
    }

    #[test]
    fn vanishing_leading_sum_leaves_only_the_remainder() {
        // S(1,9,8) = 0, so the b = 1 term vanishes exactly
        let chk = asymptotic_check(30, 8, 1, 9, 128).unwrap();
        assert!(!chk.leading_sum_nonzero);
        assert!(chk.main_term.is_exact() && chk.main_term.mid().is_zero());
        assert!(chk.remainder_within(5.0));
    }

    #[test]
    fn envelope_exponent_value() {
        let e = envelope_exponent(128);
        assert!(e.contains_point(&f("-0.0322311093465634526341755850633082142138242058214256260011852")));
        assert!(e.upper() < -0.03);
    }

    #[test]
    fn theorem_two_head_is_tiny() {
        // p = 3, N = 5, n = 1: 4 pi 27 / 5 = 67.86, k = 68
        let chk = small_sum_check(3, 5, 1, 68, 128).unwrap();
        assert!(chk.head.abs_upper() < 1e-20);
        assert!(chk.head.abs().le(&chk.head_envelope()));
        assert!(chk.scaled_last().lower() > 0.05);
        let zero = small_sum_check(3, 5, 0, 8, 128).unwrap();
        assert!(zero.head.is_exact() && zero.head.mid().is_zero());
    }

    #[test]
    fn window_violation_is_reported() {
        assert!(matches!(small_sum_check(3, 5, 1, 100, 128), Err(PeterssonError::WindowViolation { .. })));
    }

    #[test]
    fn sign_alternates_with_weight() {
        // i^k = (-1)^{k/2}; with S(1,1,1) = 1 the b = 1 term has sign (-1)^{k/2}
        for k in [12u64, 14, 16, 18] {
            let v = delta_truncated(k, 1, 1, 1, 40, 128).unwrap();
            let t = &v.terms[0];
            if (k / 2) % 2 == 0 {
                assert!(t.is_positive());
            } else {
                assert!(t.is_negative());
            }
        }
    }
}
