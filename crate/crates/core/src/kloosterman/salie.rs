//! Closed-form evaluation of `S(a, b, q^beta)` for an odd prime `q` and
//! `beta >= 2`:
//!
//! `S(a, b, q^beta) = 2 (l/q^beta) sqrt(q^beta) Re(eps e(2l/q^beta))`, `l^2 = ab`,
//!
//! with `eps = 1` when `q^beta = 1 (mod 4)` and `eps = i` otherwise.

use crate::arith::{is_prime, mul_mod, reduce};
use crate::ball::Ball;

use super::modular::{jacobi_symbol, sqrt_mod_prime_power};
use super::{brute_force_kloosterman_prec, KloostermanError};

/// Which square root of `ab` was plugged into the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SalieBranch {
    /// The root in `[0, q^beta / 2]`.
    Canonical,
    /// `q^beta` minus the canonical root.
    Conjugate,
}

#[derive(Debug, Clone)]
pub struct SalieMatch {
    pub branch: SalieBranch,
    pub root: u64,
    pub value: Ball,
}

fn check_modulus(q: u64, beta: u32) -> Result<u64, KloostermanError> {
    if q % 2 == 0 || !is_prime(q) {
        return Err(KloostermanError::InvalidModulus { modulus: q, reason: "q must be an odd prime".into() });
    }
    if beta < 2 {
        return Err(KloostermanError::InvalidModulus {
            modulus: q,
            reason: format!("exponent {beta} is below 2"),
        });
    }
    q.checked_pow(beta).ok_or_else(|| KloostermanError::InvalidModulus {
        modulus: q,
        reason: format!("{q}^{beta} overflows u64"),
    })
}

/// Closed form evaluated at the canonical square root.
pub fn salie_evaluate(a: i64, b: i64, q: u64, beta: u32, prec: u32) -> Result<Ball, KloostermanError> {
    salie_evaluate_branch(a, b, q, beta, prec, SalieBranch::Canonical).map(|m| m.value)
}

pub fn salie_evaluate_branch(
    a: i64,
    b: i64,
    q: u64,
    beta: u32,
    prec: u32,
    branch: SalieBranch,
) -> Result<SalieMatch, KloostermanError> {
    let l = check_modulus(q, beta)?;
    let ab = mul_mod(reduce(a, l), reduce(b, l), l);
    if ab % q == 0 {
        return Err(KloostermanError::NotCoprime { a: ab as i64, modulus: q });
    }
    let canonical = sqrt_mod_prime_power(ab as i64, q, beta)?;
    let root = match branch {
        SalieBranch::Canonical => canonical,
        SalieBranch::Conjugate => (l - canonical) % l,
    };

    // Re(eps e(2 root / l)) is cos(4 pi root / l) for eps = 1 and
    // -sin(4 pi root / l) for eps = i.
    let angle = Ball::pi(prec).mul_u64(4).mul_u64(root).div_u64(l);
    let re = if l % 4 == 1 { angle.cos() } else { angle.sin().neg() };
    let sign = jacobi_symbol(root as i64, l) as i64;
    let value = Ball::from_u64(l, prec).sqrt().mul_ball(&re).mul_i64(2 * sign);
    Ok(SalieMatch { branch, root, value })
}

/// Tries the canonical root, then the conjugate root, and returns the first
/// one whose enclosure meets the brute-force enclosure of `S(a, b, q^beta)`.
pub fn salie_matching_brute_force(
    a: i64,
    b: i64,
    q: u64,
    beta: u32,
    prec: u32,
) -> Result<SalieMatch, KloostermanError> {
    let l = check_modulus(q, beta)?;
    let brute = brute_force_kloosterman_prec(a, b, l, prec).numeric;
    for branch in [SalieBranch::Canonical, SalieBranch::Conjugate] {
        let m = salie_evaluate_branch(a, b, q, beta, prec, branch)?;
        if m.value.overlaps(&brute) {
            return Ok(m);
        }
    }
    Err(KloostermanError::SalieMismatch { a, b, modulus: l })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kloosterman::brute_force_kloosterman;

    #[test]
    fn spec_examples_match_brute_force() {
        for (a, b) in [(1, 1), (1, 25), (1, 4)] {
            let v = salie_evaluate(a, b, 3, 2, 128).unwrap();
            let brute = brute_force_kloosterman(a, b, 9).numeric;
            assert!(v.overlaps(&brute), "S({a},{b},9): {v} vs {brute}");
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(salie_evaluate(1, 1, 4, 2, 64), Err(KloostermanError::InvalidModulus { .. })));
        assert!(matches!(salie_evaluate(1, 1, 3, 1, 64), Err(KloostermanError::InvalidModulus { .. })));
        assert!(matches!(salie_evaluate(1, 2, 3, 2, 64), Err(KloostermanError::NoSquareRoot { .. })));
        assert!(matches!(salie_evaluate(3, 1, 3, 2, 64), Err(KloostermanError::NotCoprime { .. })));
    }

    #[test]
    fn both_branches_agree_with_brute_force() {
        for (q, beta) in [(3u64, 2u32), (3, 3), (5, 2), (7, 2), (3, 4), (11, 2)] {
            let l = q.pow(beta);
            for a in 1..l.min(40) as i64 {
                if a as u64 % q == 0 {
                    continue;
                }
                let b = a * 4;
                let brute = brute_force_kloosterman(a, b, l).numeric;
                for branch in [SalieBranch::Canonical, SalieBranch::Conjugate] {
                    let v = salie_evaluate_branch(a, b, q, beta, 128, branch).unwrap().value;
                    assert!(v.overlaps(&brute), "S({a},{b},{l}) {branch:?}");
                }
            }
        }
    }

    #[test]
    fn matching_reports_a_branch() {
        let m = salie_matching_brute_force(2, 8, 5, 3, 128).unwrap();
        assert_eq!(m.branch, SalieBranch::Canonical);
        assert!(2 * m.root <= 125);
    }
}
