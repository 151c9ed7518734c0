//! Kloosterman sums `S(m, n, c)`: exact values in the cyclotomic ring,
//! certified numerics, Salié's closed form for odd prime powers, the
//! multiplicative decomposition of `S(1, p^{2n}, N)`, and non-vanishing
//! certificates.

mod certificate;
mod cyclotomic;
mod decompose;
mod modular;
mod salie;

pub use certificate::{factor_certificate, nonvanishing_certificate, Certificate, FactorCertificate};
pub use cyclotomic::{cyclotomic_polynomial, is_zero_exact, CyclotomicElement};
pub use decompose::{decompose, multiplicativity_split, DecompositionPlan, KloostermanFactor};
pub use modular::{jacobi_symbol, sqrt_mod_prime_power};
pub use salie::{salie_evaluate, salie_evaluate_branch, salie_matching_brute_force, SalieBranch, SalieMatch};

use crate::arith::{euler_phi, gcd, inv_mod, reduce};
use crate::ball::Ball;

/// Working precision for Kloosterman numerics.
pub const DEFAULT_PREC: u32 = 128;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KloostermanError {
    #[error("{a} is not a square modulo {modulus}")]
    NoSquareRoot { a: i64, modulus: u64 },
    #[error("invalid modulus {modulus}: {reason}")]
    InvalidModulus { modulus: u64, reason: String },
    #[error("{a} is not coprime to {modulus}")]
    NotCoprime { a: i64, modulus: u64 },
    #[error("closed form disagrees with brute force for S({a}, {b}, {modulus}) on both square-root branches")]
    SalieMismatch { a: i64, b: i64, modulus: u64 },
}

/// A Kloosterman sum with its exact value, an enclosure of its numeric
/// value and a zero/non-zero certificate.
#[derive(Debug, Clone)]
pub struct KloostermanResult {
    pub m: i64,
    pub n: i64,
    pub c: u64,
    pub exact: CyclotomicElement,
    pub numeric: Ball,
    pub certificate: Certificate,
}

impl KloostermanResult {
    pub fn is_zero(&self) -> bool {
        matches!(self.certificate, Certificate::ZeroExact)
    }

    /// `|S(m,n,c)| <= phi(c)` checked on the enclosure.
    pub fn satisfies_trivial_bound(&self) -> bool {
        let phi = Ball::from_u64(euler_phi(self.c), self.numeric.prec());
        self.numeric.abs_lower() <= phi.upper()
    }
}

/// Exact element `sum_{x in (Z/c)^*} zeta_c^{m x + n xbar}`. `S(m, n, 1) = 1`.
pub fn kloosterman_exact(m: i64, n: i64, c: u64) -> CyclotomicElement {
    assert!(c >= 1, "modulus must be positive");
    let (mr, nr) = (reduce(m, c), reduce(n, c));
    let mut e = CyclotomicElement::zero(c);
    for x in 0..c {
        if gcd(x, c) != 1 {
            continue;
        }
        let xi = inv_mod(x, c).expect("unit has an inverse");
        let j = ((mr as u128 * x as u128 + nr as u128 * xi as u128) % c as u128) as u64;
        e.add_root_power(j, 1);
    }
    e
}

/// `S(m, n, c)` by direct summation over the units mod `c`, at the default
/// 128-bit precision.
pub fn brute_force_kloosterman(m: i64, n: i64, c: u64) -> KloostermanResult {
    brute_force_kloosterman_prec(m, n, c, DEFAULT_PREC)
}

pub fn brute_force_kloosterman_prec(m: i64, n: i64, c: u64, prec: u32) -> KloostermanResult {
    let exact = kloosterman_exact(m, n, c);
    let numeric = exact.numeric_value(prec);
    let certificate = if exact.is_zero_exact() {
        Certificate::ZeroExact
    } else {
        Certificate::NonzeroByCyclotomic
    };
    KloostermanResult { m, n, c, exact, numeric, certificate }
}
