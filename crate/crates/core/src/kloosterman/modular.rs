//! Jacobi symbols and square roots modulo odd prime powers.

use crate::arith::{gcd, inv_mod, mul_mod, pow_mod, reduce};

use super::KloostermanError;

/// Jacobi symbol `(a / b)` for odd `b >= 1`, by quadratic reciprocity.
pub fn jacobi_symbol(a: i64, b: u64) -> i32 {
    assert!(b % 2 == 1, "Jacobi symbol needs an odd modulus, got {b}");
    let mut a = reduce(a, b);
    let mut b = b;
    let mut sign = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if b % 8 == 3 || b % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut b);
        if a % 4 == 3 && b % 4 == 3 {
            sign = -sign;
        }
        a %= b;
    }
    if b == 1 {
        sign
    } else {
        0
    }
}

/// Square root of `a` modulo the odd prime `q` (Tonelli-Shanks).
fn sqrt_mod_prime(a: u64, q: u64) -> Option<u64> {
    let a = a % q;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (q - 1) / 2, q) != 1 {
        return None;
    }
    if q % 4 == 3 {
        return Some(pow_mod(a, (q + 1) / 4, q));
    }
    let mut s = 0;
    let mut d = q - 1;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let z = (2..q).find(|&z| pow_mod(z, (q - 1) / 2, q) == q - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, d, q);
    let mut t = pow_mod(a, d, q);
    let mut r = pow_mod(a, (d + 1) / 2, q);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, q);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), q);
        m = i;
        c = mul_mod(b, b, q);
        t = mul_mod(t, c, q);
        r = mul_mod(r, b, q);
    }
    Some(r)
}

/// Root `l` of `l^2 = a (mod q^beta)` for an odd prime `q` not dividing `a`.
///
/// Tonelli-Shanks modulo `q`, then Hensel lifting one power at a time. Of the
/// two roots `l` and `q^beta - l` the smaller one is returned, so the result
/// lies in `[0, q^beta / 2]`.
pub fn sqrt_mod_prime_power(a: i64, q: u64, beta: u32) -> Result<u64, KloostermanError> {
    if q % 2 == 0 || !crate::arith::is_prime(q) || beta == 0 {
        return Err(KloostermanError::InvalidModulus {
            modulus: q,
            reason: "expected an odd prime and a positive exponent".into(),
        });
    }
    let modulus = q.checked_pow(beta).ok_or_else(|| KloostermanError::InvalidModulus {
        modulus: q,
        reason: format!("{q}^{beta} overflows u64"),
    })?;
    let a = reduce(a, modulus);
    if gcd(a, q) != 1 {
        return Err(KloostermanError::NotCoprime { a: a as i64, modulus: q });
    }
    let mut r = sqrt_mod_prime(a, q).ok_or(KloostermanError::NoSquareRoot { a: a as i64, modulus: q })?;
    let mut qk = q;
    for _ in 1..beta {
        let next = qk * q;
        // r <- r - (r^2 - a) / (2r)  (mod q^{k+1})
        let r2 = mul_mod(r, r, next);
        let diff = (r2 as i128 - (a % next) as i128).rem_euclid(next as i128) as u64;
        let inv = inv_mod(mul_mod(2, r, next), next).expect("2r is a unit mod q^k");
        let step = mul_mod(diff, inv, next);
        r = (r + next - step) % next;
        qk = next;
    }
    Ok(r.min(modulus - r))
}
