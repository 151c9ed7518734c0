//! Dense univariate polynomials with arbitrary-precision integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use rug::{Integer, Rational};

use crate::ball::Ball;

/// Integer polynomial, `coeffs[i]` is the coefficient of `x^i`.
/// The coefficient vector never has a trailing zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<Integer>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: i64) -> Self {
        Self::from_i64s(&[c])
    }

    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    /// `x^n - 1`
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![Integer::new(); n + 1];
        c[0] = Integer::from(-1);
        c[n] = Integer::from(1);
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Integer {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Integer> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| *c == 1)
    }

    pub fn scale(&self, k: &Integer) -> Self {
        Self::new(self.coeffs.iter().map(|c| Integer::from(c * k)).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Integer::from(c * i as u64))
                .collect(),
        )
    }

    /// `self(inner(x))` by Horner's scheme.
    pub fn compose(&self, inner: &IntPolynomial) -> Self {
        let mut acc = IntPolynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &IntPolynomial::new(vec![c.clone()]);
        }
        acc
    }

    /// Quotient and remainder by a monic divisor.
    pub fn div_rem_monic(&self, divisor: &IntPolynomial) -> (IntPolynomial, IntPolynomial) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (IntPolynomial::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Integer::new(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let t = std::mem::take(&mut rem[i]);
            if t == 0 {
                continue;
            }
            for (j, dc) in divisor.coeffs[..dd].iter().enumerate() {
                if *dc != 0 {
                    rem[i - dd + j] -= Integer::from(&t * dc);
                }
            }
            quot[i - dd] = t;
        }
        rem.truncate(dd);
        (IntPolynomial::new(quot), IntPolynomial::new(rem))
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact_monic(&self, divisor: &IntPolynomial) -> Option<IntPolynomial> {
        let (q, r) = self.div_rem_monic(divisor);
        r.is_zero().then_some(q)
    }

    pub fn eval_integer(&self, x: &Integer) -> Integer {
        let mut acc = Integer::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_ball(&self, x: &Ball) -> Ball {
        let prec = x.prec();
        let mut acc = Ball::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ball(x).add_ball(&Ball::from_integer(c, prec));
        }
        acc
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> Integer {
        self.coeffs.iter().map(|c| Integer::from(c.abs_ref())).sum()
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![Integer::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += Integer::from(a * b);
            }
        }
        IntPolynomial::new(out)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let mag = Integer::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (i, mag == 1) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_degree() {
        let p = IntPolynomial::from_i64s(&[1, 0, -1, 0, 1]);
        assert_eq!(p.to_string(), "x^4 - x^2 + 1");
        assert_eq!(p.degree(), Some(4));
        assert_eq!(IntPolynomial::zero().degree(), None);
    }

    #[test]
    fn division_by_monic() {
        let num = IntPolynomial::x_pow_minus_one(6);
        let den = IntPolynomial::from_i64s(&[-1, 1]);
        let q = num.div_exact_monic(&den).unwrap();
        assert_eq!(q, IntPolynomial::from_i64s(&[1, 1, 1, 1, 1, 1]));
        assert!(IntPolynomial::from_i64s(&[1, 0, 1]).div_exact_monic(&den).is_none());
    }

    #[test]
    fn compose_square() {
        let x2m1 = IntPolynomial::from_i64s(&[-1, 0, 1]);
        let y2 = IntPolynomial::from_i64s(&[-1, -1, 1]);
        assert_eq!(y2.compose(&x2m1), IntPolynomial::from_i64s(&[1, 0, -3, 0, 1]));
    }

    #[test]
    fn derivative_of_cubic() {
        let p = IntPolynomial::from_i64s(&[5, 3, 0, 2]);
        assert_eq!(p.derivative(), IntPolynomial::from_i64s(&[3, 0, 6]));
    }

    proptest::proptest! {
        #[test]
        fn product_evaluates_as_product(a in proptest::collection::vec(-20i64..20, 0..6),
                                        b in proptest::collection::vec(-20i64..20, 0..6),
                                        x in -5i64..5) {
            let pa = IntPolynomial::from_i64s(&a);
            let pb = IntPolynomial::from_i64s(&b);
            let xi = Integer::from(x);
            let lhs = (&pa * &pb).eval_integer(&xi);
            let rhs = pa.eval_integer(&xi) * pb.eval_integer(&xi);
            proptest::prop_assert_eq!(lhs, rhs);
        }
    }
}
