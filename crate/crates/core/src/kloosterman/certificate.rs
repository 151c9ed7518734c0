//! Witnesses that `S(1, p^{2n}, N)` vanishes or not.

use std::fmt;

use crate::arith::reduce;
use crate::ball::Ball;

use super::decompose::{decompose, KloostermanFactor};
use super::salie::salie_matching_brute_force;
use super::{KloostermanError, DEFAULT_PREC};

#[derive(Debug, Clone)]
pub enum Certificate {
    /// The element is divisible by the cyclotomic polynomial.
    ZeroExact,
    /// Exact division left a non-zero remainder.
    NonzeroByCyclotomic,
    /// Image under `zeta -> 1` reduced mod `q` is `residue != 0`.
    NonzeroByPrimeReduction { q: u64, residue: u64 },
    /// Closed-form enclosure excluding zero.
    NonzeroBySalie { value: Ball },
    /// Known value for moduli 1, 2 and 4.
    NonzeroByTable { modulus: u64, value: i64 },
    /// Every prime-power factor of a composite level is non-zero.
    NonzeroByFactors(Vec<FactorCertificate>),
}

#[derive(Debug, Clone)]
pub struct FactorCertificate {
    pub factor: KloostermanFactor,
    pub certificate: Certificate,
}

impl Certificate {
    pub fn is_nonzero(&self) -> bool {
        !matches!(self, Certificate::ZeroExact)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::ZeroExact => "ZeroExact",
            Certificate::NonzeroByCyclotomic => "NonzeroByCyclotomic",
            Certificate::NonzeroByPrimeReduction { .. } => "NonzeroByPrimeReduction",
            Certificate::NonzeroBySalie { .. } => "NonzeroBySalie",
            Certificate::NonzeroByTable { .. } => "NonzeroByTable",
            Certificate::NonzeroByFactors(_) => "NonzeroByFactors",
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::NonzeroByPrimeReduction { q, residue } => write!(f, "NonzeroByPrimeReduction(q={q};residue={residue})"),
            Certificate::NonzeroBySalie { value } => write!(f, "NonzeroBySalie({value})"),
            Certificate::NonzeroByTable { modulus, value } => write!(f, "NonzeroByTable(S mod {modulus}={value})"),
            Certificate::NonzeroByFactors(parts) => {
                write!(f, "NonzeroByFactors(")?;
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{}:{}", part.factor.l, part.certificate.kind())?;
                }
                write!(f, ")")
            }
            other => write!(f, "{}", other.kind()),
        }
    }
}

/// Value of `S(a, b, l)` for `l in {1, 2, 4}` and odd `a, b`.
fn table_value(a: u64, b: u64, l: u64) -> Option<i64> {
    match l {
        1 => Some(1),
        2 => Some(1),
        4 => match (a + b) % 4 {
            2 => Some(-2),
            0 => Some(2),
            _ => None,
        },
        _ => None,
    }
}

fn exact_certificate(factor: &KloostermanFactor) -> Certificate {
    if factor.exact().is_zero_exact() {
        Certificate::ZeroExact
    } else {
        Certificate::NonzeroByCyclotomic
    }
}

/// Certificate for a single prime-power factor `S(a, b, q^beta)` with `a` a unit.
pub fn factor_certificate(factor: &KloostermanFactor) -> Certificate {
    let KloostermanFactor { a, b, l, q, beta } = *factor;
    if l <= 4 {
        if let Some(value) = table_value(a, b, l) {
            return Certificate::NonzeroByTable { modulus: l, value };
        }
        return exact_certificate(factor);
    }
    if q == 2 {
        return exact_certificate(factor);
    }
    if beta == 1 {
        let residue = reduce(factor.exact().coefficient_sum(), q);
        if residue != 0 {
            return Certificate::NonzeroByPrimeReduction { q, residue };
        }
        return exact_certificate(factor);
    }
    match salie_matching_brute_force(a as i64, b as i64, q, beta, DEFAULT_PREC) {
        Ok(m) if !m.value.contains_zero() => Certificate::NonzeroBySalie { value: m.value },
        _ => exact_certificate(factor),
    }
}

/// Certifies `S(1, p^{2n}, N)` factor by factor. A single prime-power level
/// yields that factor's certificate directly; a zero factor makes the whole
/// product `ZeroExact`.
pub fn nonvanishing_certificate(p: u64, n: u32, level: u64) -> Result<Certificate, KloostermanError> {
    let plan = decompose(p, n, level)?;
    if plan.factors.is_empty() {
        return Ok(Certificate::NonzeroByTable { modulus: 1, value: 1 });
    }
    let mut parts: Vec<FactorCertificate> = plan
        .factors
        .iter()
        .map(|f| FactorCertificate { factor: f.clone(), certificate: factor_certificate(f) })
        .collect();
    if parts.iter().any(|part| !part.certificate.is_nonzero()) {
        return Ok(Certificate::ZeroExact);
    }
    if parts.len() == 1 {
        return Ok(parts.pop().expect("one part").certificate);
    }
    Ok(Certificate::NonzeroByFactors(parts))
}
