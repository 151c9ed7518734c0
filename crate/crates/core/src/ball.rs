//! Midpoint-radius real balls over MPFR floats.
//!
//! A [`Ball`] stores a midpoint at some working precision together with a
//! nonnegative radius held at [`RAD_PREC`] bits and always rounded upward.
//! Every operation returns a ball containing the exact result of the same
//! operation applied to any points of the input balls. Division by a ball
//! that contains zero, or a function evaluated outside its domain, yields an
//! indeterminate ball (infinite radius) rather than an error, so failures
//! surface at the comparison that needed the value.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::{Float, Integer, Rational};

/// Precision of the radius.
pub const RAD_PREC: u32 = 64;

#[derive(Clone, Debug)]
pub struct Ball {
    mid: Float,
    rad: Float,
}

fn rad_zero() -> Float {
    Float::new(RAD_PREC)
}

fn rad_inf() -> Float {
    Float::with_val(RAD_PREC, rug::float::Special::Infinity)
}

fn mag_up(x: &Float) -> Float {
    Float::with_val_round(RAD_PREC, x.abs_ref(), Round::Up).0
}

fn add_up(a: &Float, b: &Float) -> Float {
    Float::with_val_round(RAD_PREC, a + b, Round::Up).0
}

fn mul_up(a: &Float, b: &Float) -> Float {
    Float::with_val_round(RAD_PREC, a * b, Round::Up).0
}

fn div_up(a: &Float, b: &Float) -> Float {
    Float::with_val_round(RAD_PREC, a / b, Round::Up).0
}

/// Upper bound for the rounding error committed when `mid` was produced with
/// ternary value `ord`.
fn rounding_err(mid: &Float, ord: Ordering) -> Float {
    if ord == Ordering::Equal {
        return rad_zero();
    }
    match mid.get_exp() {
        Some(e) => {
            let mut r = Float::with_val(RAD_PREC, 1u32);
            r <<= e - mid.prec() as i32;
            r
        }
        None => rad_zero(),
    }
}

impl Ball {
    pub fn zero(prec: u32) -> Ball {
        Ball { mid: Float::new(prec), rad: rad_zero() }
    }

    pub fn one(prec: u32) -> Ball {
        Ball::from_i64(1, prec)
    }

    /// The whole real line; the result of undefined operations.
    pub fn indeterminate(prec: u32) -> Ball {
        Ball { mid: Float::new(prec), rad: rad_inf() }
    }

    pub fn from_i64(v: i64, prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, v, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        Ball { mid, rad }
    }

    pub fn from_u64(v: u64, prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, v, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        Ball { mid, rad }
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, v, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        Ball { mid, rad }
    }

    pub fn from_rational(v: &Rational, prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, v, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        Ball { mid, rad }
    }

    /// Exact ball around the binary value of `v`. Panics on non-finite input.
    pub fn from_f64(v: f64, prec: u32) -> Ball {
        assert!(v.is_finite(), "non-finite f64 {v}");
        let (mid, ord) = Float::with_val_round(prec.max(53), v, Round::Nearest);
        let rad = rounding_err(&mid, ord);
        Ball { mid, rad }
    }

    /// Ball with the given midpoint and radius (radius rounded up).
    pub fn with_radius(mid: Float, rad: &Float) -> Ball {
        assert!(*rad >= 0 || rad.is_nan(), "negative radius");
        Ball { mid, rad: mag_up(rad) }
    }

    /// Smallest representable ball containing `[lo, hi]`.
    pub fn from_interval(lo: &Float, hi: &Float, prec: u32) -> Ball {
        if lo.is_nan() || hi.is_nan() || lo.is_infinite() || hi.is_infinite() {
            return Ball::indeterminate(prec);
        }
        debug_assert!(lo <= hi);
        let sum = Float::with_val(lo.prec().max(hi.prec()) + 1, lo + hi);
        let mid = Float::with_val(prec, sum / 2u32);
        let r1 = Float::with_val_round(RAD_PREC, hi - &mid, Round::Up).0;
        let r2 = Float::with_val_round(RAD_PREC, &mid - lo, Round::Up).0;
        let rad = if r1 > r2 { r1 } else { r2 };
        Ball { mid, rad: rad.max(&rad_zero()) }
    }

    pub fn pi(prec: u32) -> Ball {
        let lo = Float::with_val_round(prec, Constant::Pi, Round::Down).0;
        let hi = Float::with_val_round(prec, Constant::Pi, Round::Up).0;
        Ball::from_interval(&lo, &hi, prec)
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Float {
        &self.rad
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Radius as an `f64`, rounded upward.
    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64_round(Round::Up)
    }

    pub fn is_finite(&self) -> bool {
        self.mid.is_finite() && self.rad.is_finite()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Rigorous lower endpoint.
    pub fn lower(&self) -> Float {
        if !self.is_finite() {
            return Float::with_val(self.prec(), rug::float::Special::NegInfinity);
        }
        Float::with_val_round(self.prec(), &self.mid - &self.rad, Round::Down).0
    }

    /// Rigorous upper endpoint.
    pub fn upper(&self) -> Float {
        if !self.is_finite() {
            return Float::with_val(self.prec(), rug::float::Special::Infinity);
        }
        Float::with_val_round(self.prec(), &self.mid + &self.rad, Round::Up).0
    }

    /// Upper bound on `|x|` over the ball.
    pub fn abs_upper(&self) -> Float {
        if !self.is_finite() {
            return rad_inf();
        }
        add_up(&mag_up(&self.mid), &self.rad)
    }

    /// Lower bound on `|x|` over the ball (zero when the ball contains zero).
    pub fn abs_lower(&self) -> Float {
        if !self.is_finite() {
            return rad_zero();
        }
        let m = Float::with_val(self.prec(), self.mid.abs_ref());
        let d = Float::with_val_round(self.prec(), &m - &self.rad, Round::Down).0;
        if d > 0 {
            d
        } else {
            Float::new(self.prec())
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_finite() || self.lower() <= 0 && self.upper() >= 0
    }

    pub fn is_positive(&self) -> bool {
        self.is_finite() && self.lower() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.is_finite() && self.upper() < 0
    }

    pub fn is_nonnegative(&self) -> bool {
        self.is_finite() && self.lower() >= 0
    }

    pub fn contains_point(&self, x: &Float) -> bool {
        !self.is_finite() || (self.lower() <= *x && *x <= self.upper())
    }

    /// True when every point of `other` lies in `self`.
    pub fn contains(&self, other: &Ball) -> bool {
        if !self.is_finite() {
            return true;
        }
        other.is_finite() && self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        if !self.is_finite() || !other.is_finite() {
            return true;
        }
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// Certified `self < other`.
    pub fn lt(&self, other: &Ball) -> bool {
        self.is_finite() && other.is_finite() && self.upper() < other.lower()
    }

    /// Certified `self <= other`.
    pub fn le(&self, other: &Ball) -> bool {
        self.is_finite() && other.is_finite() && self.upper() <= other.lower()
    }

    /// Enlarges the radius by `extra` (taken in absolute value).
    pub fn widen(&self, extra: &Float) -> Ball {
        Ball { mid: self.mid.clone(), rad: add_up(&self.rad, &mag_up(extra)) }
    }

    pub fn with_prec(&self, prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, &self.mid, Round::Nearest);
        let rad = add_up(&self.rad, &rounding_err(&mid, ord));
        Ball { mid, rad }
    }

    fn op_prec(&self, other: &Ball) -> u32 {
        self.prec().max(other.prec())
    }

    pub fn add_ball(&self, other: &Ball) -> Ball {
        let prec = self.op_prec(other);
        let (mid, ord) = Float::with_val_round(prec, &self.mid + &other.mid, Round::Nearest);
        let rad = add_up(&add_up(&self.rad, &other.rad), &rounding_err(&mid, ord));
        Ball { mid, rad }
    }

    pub fn sub_ball(&self, other: &Ball) -> Ball {
        let prec = self.op_prec(other);
        let (mid, ord) = Float::with_val_round(prec, &self.mid - &other.mid, Round::Nearest);
        let rad = add_up(&add_up(&self.rad, &other.rad), &rounding_err(&mid, ord));
        Ball { mid, rad }
    }

    pub fn mul_ball(&self, other: &Ball) -> Ball {
        let prec = self.op_prec(other);
        let (mid, ord) = Float::with_val_round(prec, &self.mid * &other.mid, Round::Nearest);
        if !self.is_finite() || !other.is_finite() {
            return Ball::indeterminate(prec);
        }
        let a = mul_up(&mag_up(&self.mid), &other.rad);
        let b = mul_up(&mag_up(&other.mid), &self.rad);
        let c = mul_up(&self.rad, &other.rad);
        let rad = add_up(&add_up(&add_up(&a, &b), &c), &rounding_err(&mid, ord));
        Ball { mid, rad }
    }

    /// Division; indeterminate when the divisor contains zero.
    pub fn div_ball(&self, other: &Ball) -> Ball {
        let prec = self.op_prec(other);
        if other.contains_zero() || !self.is_finite() {
            return Ball::indeterminate(prec);
        }
        let (mid, ord) = Float::with_val_round(prec, &self.mid / &other.mid, Round::Nearest);
        let err = rounding_err(&mid, ord);
        // |a/b - a'/b'| <= (ra + |a/b| rb) / (|b| - rb)
        let denom = {
            let m = Float::with_val(other.prec(), other.mid.abs_ref());
            Float::with_val_round(RAD_PREC, &m - &other.rad, Round::Down).0
        };
        let q = add_up(&mag_up(&mid), &err);
        let num = add_up(&self.rad, &mul_up(&q, &other.rad));
        let rad = add_up(&div_up(&num, &denom), &err);
        Ball { mid, rad }
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: Float::with_val(self.prec(), -&self.mid), rad: self.rad.clone() }
    }

    pub fn abs(&self) -> Ball {
        if self.contains_zero() && self.is_finite() {
            let hi = self.abs_upper();
            let lo = Float::new(self.prec());
            Ball::from_interval(&lo, &hi, self.prec())
        } else {
            Ball { mid: Float::with_val(self.prec(), self.mid.abs_ref()), rad: self.rad.clone() }
        }
    }

    pub fn mul_i64(&self, v: i64) -> Ball {
        self.mul_ball(&Ball::from_i64(v, self.prec()))
    }

    pub fn mul_u64(&self, v: u64) -> Ball {
        self.mul_ball(&Ball::from_u64(v, self.prec()))
    }

    pub fn div_u64(&self, v: u64) -> Ball {
        assert!(v != 0, "division by zero");
        self.div_ball(&Ball::from_u64(v, self.prec()))
    }

    pub fn sqr(&self) -> Ball {
        if self.contains_zero() && self.is_finite() {
            let hi = mul_up(&self.abs_upper(), &self.abs_upper());
            return Ball::from_interval(&Float::new(self.prec()), &hi, self.prec());
        }
        self.mul_ball(self)
    }

    /// Integer power by repeated squaring.
    pub fn pow_u(&self, mut e: u64) -> Ball {
        let mut base = self.clone();
        let mut acc = Ball::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ball(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// Applies a nondecreasing function given its directed-rounding evaluator.
    fn monotone_up<F>(&self, lo: &Float, hi: &Float, f: F) -> Ball
    where
        F: Fn(&Float, Round) -> Float,
    {
        let flo = f(lo, Round::Down);
        let fhi = f(hi, Round::Up);
        Ball::from_interval(&flo, &fhi, self.prec())
    }

    pub fn sqrt(&self) -> Ball {
        let prec = self.prec();
        if !self.is_finite() || self.upper() < 0 {
            return Ball::indeterminate(prec);
        }
        let lo = self.lower();
        let lo = if lo < 0 { Float::new(prec) } else { lo };
        self.monotone_up(&lo, &self.upper(), |x, r| Float::with_val_round(prec, x.sqrt_ref(), r).0)
    }

    pub fn cbrt(&self) -> Ball {
        let prec = self.prec();
        if !self.is_finite() {
            return Ball::indeterminate(prec);
        }
        self.monotone_up(&self.lower(), &self.upper(), |x, r| {
            Float::with_val_round(prec, x.cbrt_ref(), r).0
        })
    }

    pub fn exp(&self) -> Ball {
        let prec = self.prec();
        if !self.is_finite() {
            return Ball::indeterminate(prec);
        }
        self.monotone_up(&self.lower(), &self.upper(), |x, r| {
            Float::with_val_round(prec, x.exp_ref(), r).0
        })
    }

    pub fn ln(&self) -> Ball {
        let prec = self.prec();
        if !self.is_positive() {
            return Ball::indeterminate(prec);
        }
        self.monotone_up(&self.lower(), &self.upper(), |x, r| {
            Float::with_val_round(prec, x.ln_ref(), r).0
        })
    }

    /// Arc cosine on `[-1, 1]`; the ball is clipped to the domain.
    pub fn acos(&self) -> Ball {
        let prec = self.prec();
        if !self.is_finite() || self.upper() < -1 || self.lower() > 1 {
            return Ball::indeterminate(prec);
        }
        let one = Float::with_val(prec, 1u32);
        let lo = self.lower().max(&Float::with_val(prec, -1i32));
        let hi = self.upper().min(&one);
        // decreasing: acos(hi) <= acos(x) <= acos(lo)
        let flo = Float::with_val_round(prec, hi.acos_ref(), Round::Down).0;
        let fhi = Float::with_val_round(prec, lo.acos_ref(), Round::Up).0;
        Ball::from_interval(&flo, &fhi, prec)
    }

    /// Cosine, using that it is 1-Lipschitz.
    pub fn cos(&self) -> Ball {
        let prec = self.prec();
        if !self.is_finite() {
            return Ball::indeterminate(prec);
        }
        let (mid, ord) = Float::with_val_round(prec, self.mid.cos_ref(), Round::Nearest);
        let rad = add_up(&self.rad, &rounding_err(&mid, ord));
        Ball { mid, rad }
    }

    pub fn sin(&self) -> Ball {
        let prec = self.prec();
        if !self.is_finite() {
            return Ball::indeterminate(prec);
        }
        let (mid, ord) = Float::with_val_round(prec, self.mid.sin_ref(), Round::Nearest);
        let rad = add_up(&self.rad, &rounding_err(&mid, ord));
        Ball { mid, rad }
    }

    pub fn cosh(&self) -> Ball {
        let e = self.exp();
        let ie = Ball::one(self.prec()).div_ball(&e);
        e.add_ball(&ie).div_u64(2)
    }

    /// Smallest ball containing both inputs.
    pub fn union(&self, other: &Ball) -> Ball {
        if !self.is_finite() || !other.is_finite() {
            return Ball::indeterminate(self.op_prec(other));
        }
        let lo = self.lower().min(&other.lower());
        let hi = self.upper().max(&other.upper());
        Ball::from_interval(&lo, &hi, self.op_prec(other))
    }

    /// `log2` of the radius relative to `|mid|`; `-inf` for exact balls.
    pub fn relative_accuracy_bits(&self) -> f64 {
        if self.rad.is_zero() {
            return f64::INFINITY;
        }
        if self.mid.is_zero() || !self.is_finite() {
            return f64::NEG_INFINITY;
        }
        let r = Float::with_val(RAD_PREC, &self.rad / &self.mid).abs();
        -r.log2().to_f64()
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.prec() as f64) * std::f64::consts::LOG10_2).ceil() as usize;
        let digits = digits.clamp(4, 40);
        write!(
            f,
            "[{} +/- {:.3e}]",
            self.mid.to_string_radix(10, Some(digits)),
            self.rad_f64()
        )
    }
}

macro_rules! ball_binop {
    ($tr:ident, $method:ident, $impl_fn:ident) => {
        impl $tr<&Ball> for &Ball {
            type Output = Ball;
            fn $method(self, rhs: &Ball) -> Ball {
                self.$impl_fn(rhs)
            }
        }
        impl $tr<Ball> for Ball {
            type Output = Ball;
            fn $method(self, rhs: Ball) -> Ball {
                self.$impl_fn(&rhs)
            }
        }
        impl $tr<&Ball> for Ball {
            type Output = Ball;
            fn $method(self, rhs: &Ball) -> Ball {
                self.$impl_fn(rhs)
            }
        }
    };
}

ball_binop!(Add, add, add_ball);
ball_binop!(Sub, sub, sub_ball);
ball_binop!(Mul, mul, mul_ball);

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball::neg(&self)
    }
}

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball::neg(self)
    }
}
