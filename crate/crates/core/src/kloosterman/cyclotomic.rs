//! Exact arithmetic in `Z[zeta_c]` through coefficient vectors indexed mod `c`,
//! with a zero test by reduction modulo the cyclotomic polynomial.

use rug::Integer;

use crate::arith::{divisors, mobius};
use crate::ball::Ball;
use crate::poly::IntPolynomial;

/// `sum_j coeffs[j] * exp(2 pi i j / modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicElement {
    modulus: u64,
    coeffs: Vec<i64>,
}

impl CyclotomicElement {
    pub fn new(modulus: u64, coeffs: Vec<i64>) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        assert_eq!(coeffs.len() as u64, modulus, "coefficient vector length must equal modulus");
        CyclotomicElement { modulus, coeffs }
    }

    pub fn zero(modulus: u64) -> Self {
        Self::new(modulus, vec![0; modulus as usize])
    }

    pub fn one(modulus: u64) -> Self {
        let mut e = Self::zero(modulus);
        e.coeffs[0] = 1;
        e
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Adds `count * zeta^j`.
    pub fn add_root_power(&mut self, j: u64, count: i64) {
        self.coeffs[(j % self.modulus) as usize] += count;
    }

    /// Complex conjugate: `zeta^j -> zeta^{-j}`.
    pub fn conjugate(&self) -> Self {
        let c = self.modulus as usize;
        let coeffs = (0..c).map(|j| self.coeffs[(c - j) % c]).collect();
        CyclotomicElement { modulus: self.modulus, coeffs }
    }

    /// Whether the coefficient vector is invariant under `j -> -j`, which
    /// makes the element visibly real.
    pub fn is_symmetric(&self) -> bool {
        let c = self.modulus as usize;
        (1..c).all(|j| self.coeffs[j] == self.coeffs[c - j])
    }

    /// Image under the ring map `zeta -> 1` (the sum of coefficients).
    pub fn coefficient_sum(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Re-expresses the element in `Z[zeta_target]` via `zeta_c = zeta_target^(target/c)`.
    pub fn embed(&self, target: u64) -> Self {
        assert!(target % self.modulus == 0, "target must be a multiple of the modulus");
        let step = (target / self.modulus) as usize;
        let mut out = vec![0i64; target as usize];
        for (j, &v) in self.coeffs.iter().enumerate() {
            out[j * step] = v;
        }
        CyclotomicElement { modulus: target, coeffs: out }
    }

    /// Product in `Z[x]/(x^c - 1)`; both factors must share the modulus.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus, "moduli must agree; embed first");
        let c = self.modulus as usize;
        let lhs: Vec<(usize, i64)> = nonzero(&self.coeffs);
        let rhs: Vec<(usize, i64)> = nonzero(&other.coeffs);
        let mut out = vec![0i64; c];
        for &(i, a) in &lhs {
            for &(j, b) in &rhs {
                out[(i + j) % c] += a * b;
            }
        }
        CyclotomicElement { modulus: self.modulus, coeffs: out }
    }

    /// Product after embedding both factors into the ring of `lcm` of the moduli.
    pub fn mul_embedded(&self, other: &Self) -> Self {
        let l = lcm(self.modulus, other.modulus);
        self.embed(l).mul(&other.embed(l))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus, "moduli must agree; embed first");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        CyclotomicElement { modulus: self.modulus, coeffs }
    }

    pub fn is_zero_exact(&self) -> bool {
        is_zero_exact(self)
    }

    /// Real part `sum_j coeffs[j] cos(2 pi j / c)` as a ball.
    pub fn numeric_value(&self, prec: u32) -> Ball {
        self.numeric_part(prec, Ball::cos)
    }

    /// Imaginary part `sum_j coeffs[j] sin(2 pi j / c)` as a ball.
    pub fn numeric_imag(&self, prec: u32) -> Ball {
        self.numeric_part(prec, Ball::sin)
    }

    fn numeric_part(&self, prec: u32, trig: fn(&Ball) -> Ball) -> Ball {
        let two_pi_over_c = Ball::pi(prec).mul_u64(2).div_u64(self.modulus);
        let mut acc = Ball::zero(prec);
        for (j, v) in nonzero(&self.coeffs) {
            let angle = two_pi_over_c.mul_u64(j as u64);
            acc = acc.add_ball(&trig(&angle).mul_i64(v));
        }
        acc
    }
}

fn nonzero(v: &[i64]) -> Vec<(usize, i64)> {
    v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, x)).collect()
}

fn lcm(a: u64, b: u64) -> u64 {
    a / crate::arith::gcd(a, b) * b
}

/// The `c`-th cyclotomic polynomial, obtained by dividing `x^c - 1` by
/// `Phi_d` for every proper divisor `d` of `c`.
pub fn cyclotomic_polynomial(c: u64) -> IntPolynomial {
    assert!(c >= 1, "cyclotomic index must be positive");
    let divs = divisors(c);
    let mut table: Vec<(u64, IntPolynomial)> = Vec::with_capacity(divs.len());
    for &d in &divs {
        let mut p = IntPolynomial::x_pow_minus_one(d as usize);
        for (e, phi_e) in &table {
            if d % e == 0 {
                p = p.div_exact_monic(phi_e).expect("Phi_e divides x^d - 1 for e | d");
            }
        }
        table.push((d, p));
    }
    table.pop().map(|(_, p)| p).expect("c has at least one divisor")
}

/// `Phi_c` as sparse `(exponent, coefficient)` pairs, built as the product of
/// `(1 - x^d)^{mu(c/d)}` truncated at degree `phi(c)`.
pub(crate) fn cyclotomic_sparse(c: u64) -> Vec<(usize, i64)> {
    if c == 1 {
        return vec![(0, -1), (1, 1)];
    }
    let deg = crate::arith::euler_phi(c) as usize;
    let mut a = vec![0i64; deg + 1];
    a[0] = 1;
    let divs = divisors(c);
    for &d in &divs {
        if mobius(c / d) == 1 {
            let d = d as usize;
            for i in (d..=deg).rev() {
                a[i] -= a[i - d];
            }
        }
    }
    for &d in &divs {
        if mobius(c / d) == -1 {
            let d = d as usize;
            for i in d..=deg {
                a[i] += a[i - d];
            }
        }
    }
    nonzero(&a)
}

/// True iff `sum_j coeffs[j] x^j` is divisible by `Phi_c` in `Z[x]`.
pub fn is_zero_exact(e: &CyclotomicElement) -> bool {
    if e.coeffs.iter().all(|&v| v == 0) {
        return true;
    }
    let phi = cyclotomic_sparse(e.modulus);
    match reduce_i128(&e.coeffs, &phi) {
        Some(zero) => zero,
        None => {
            let p = IntPolynomial::new(e.coeffs.iter().map(|&v| Integer::from(v)).collect());
            let (_, r) = p.div_rem_monic(&cyclotomic_polynomial(e.modulus));
            r.is_zero()
        }
    }
}

/// Remainder test with checked `i128` arithmetic; `None` on overflow.
fn reduce_i128(coeffs: &[i64], phi: &[(usize, i64)]) -> Option<bool> {
    let deg = phi.last().map(|&(e, _)| e)?;
    let mut r: Vec<i128> = coeffs.iter().map(|&v| v as i128).collect();
    for i in (deg..r.len()).rev() {
        let t = r[i];
        if t == 0 {
            continue;
        }
        r[i] = 0;
        for &(e, ce) in &phi[..phi.len() - 1] {
            let idx = i - deg + e;
            let delta = t.checked_mul(ce as i128)?;
            r[idx] = r[idx].checked_sub(delta)?;
        }
    }
    Some(r[..deg.min(r.len())].iter().all(|&v| v == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), IntPolynomial::from_i64s(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(5), IntPolynomial::from_i64s(&[1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(12), IntPolynomial::from_i64s(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn phi_105_has_a_coefficient_minus_two() {
        let p = cyclotomic_polynomial(105);
        assert_eq!(p.degree(), Some(48));
        assert_eq!(p.coeff(7), Integer::from(-2));
    }

    #[test]
    fn sparse_route_agrees_with_iterated_division() {
        for c in 1..=300u64 {
            let dense = cyclotomic_polynomial(c);
            let mut coeffs = vec![0i64; dense.coeffs().len()];
            for (e, v) in cyclotomic_sparse(c) {
                coeffs[e] = v;
            }
            assert_eq!(IntPolynomial::from_i64s(&coeffs), dense, "c = {c}");
        }
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        // sum over all c-th roots of unity vanishes for c > 1
        for c in 2..40u64 {
            let e = CyclotomicElement::new(c, vec![1; c as usize]);
            assert!(e.is_zero_exact());
        }
        assert!(!CyclotomicElement::one(7).is_zero_exact());
        assert!(CyclotomicElement::zero(9).is_zero_exact());
    }

    #[test]
    fn embedding_preserves_value() {
        let mut e = CyclotomicElement::zero(6);
        e.add_root_power(1, 2);
        e.add_root_power(5, 2);
        e.add_root_power(3, -1);
        let v1 = e.numeric_value(128);
        let v2 = e.embed(30).numeric_value(128);
        assert!(v1.overlaps(&v2));
        // 2*2cos(pi/3) - cos(pi) = 3
        assert!(v1.contains_point(&rug::Float::with_val(128, 3)));
    }

    #[test]
    fn zero_test_handles_non_canonical_representatives() {
        // 1 + zeta_4^2 = 0 in Z[zeta_4]
        let e = CyclotomicElement::new(4, vec![1, 0, 1, 0]);
        assert!(e.is_zero_exact());
        let f = CyclotomicElement::new(4, vec![1, 0, 2, 0]);
        assert!(!f.is_zero_exact());
    }
}
