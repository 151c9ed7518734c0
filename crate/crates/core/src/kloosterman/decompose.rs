//! Splitting `S(1, p^{2n}, N)` into a product of sums to prime-power moduli.

use crate::arith::{factorize, gcd, inv_mod, mul_mod, pow_mod, reduce};

use super::{kloosterman_exact, CyclotomicElement, KloostermanError};

/// One factor `S(a, b, l)` with `l = q^beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KloostermanFactor {
    pub a: u64,
    pub b: u64,
    pub l: u64,
    pub q: u64,
    pub beta: u32,
}

impl KloostermanFactor {
    pub fn exact(&self) -> CyclotomicElement {
        kloosterman_exact(self.a as i64, self.b as i64, self.l)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionPlan {
    pub p: u64,
    pub n: u32,
    pub level: u64,
    /// `p^{2n} mod N`.
    pub twist: u64,
    /// `c_i = N / (l_1 ... l_i)`.
    pub cofactors: Vec<u64>,
    /// `m_i`, reduced modulo `c_i`.
    pub multipliers: Vec<u64>,
    pub factors: Vec<KloostermanFactor>,
}

impl DecompositionPlan {
    /// Product of the factors inside `Z[zeta_N]`.
    pub fn product_exact(&self) -> CyclotomicElement {
        let mut acc = CyclotomicElement::one(self.level);
        for f in &self.factors {
            acc = acc.mul(&f.exact().embed(self.level));
        }
        acc
    }

    /// The whole sum `S(1, p^{2n}, N)` by brute force.
    pub fn target_exact(&self) -> CyclotomicElement {
        kloosterman_exact(1, self.twist as i64, self.level)
    }

    /// Exact check that the factor product equals the brute-force sum.
    pub fn verify_exact(&self) -> bool {
        self.product_exact().sub(&self.target_exact()).is_zero_exact()
    }
}

/// Twisted-multiplicative decomposition of `S(1, p^{2n}, N)` along the prime powers of
/// `N`, taken in ascending order of the primes. `N = 1` gives an empty plan.
pub fn decompose(p: u64, n: u32, level: u64) -> Result<DecompositionPlan, KloostermanError> {
    if level == 0 {
        return Err(KloostermanError::InvalidModulus { modulus: 0, reason: "level must be positive".into() });
    }
    if gcd(p, level) != 1 {
        return Err(KloostermanError::NotCoprime { a: p as i64, modulus: level });
    }
    let twist = pow_mod(p, 2 * n as u64, level);
    let mut plan = DecompositionPlan {
        p,
        n,
        level,
        twist,
        cofactors: Vec::new(),
        multipliers: Vec::new(),
        factors: Vec::new(),
    };
    let mut c_prev = level;
    let mut m_prev = 1u64;
    for (q, beta) in factorize(level) {
        let l = q.pow(beta);
        let c = c_prev / l;
        let a = mul_mod(m_prev % l, inv_mod(c % l, l).expect("cofactor is a unit"), l);
        let b = mul_mod(a, pow_mod(p, 2 * n as u64, l), l);
        let m = if c == 1 { 0 } else { mul_mod(m_prev % c, inv_mod(l % c, c).expect("prime power is a unit"), c) };
        plan.factors.push(KloostermanFactor { a, b, l, q, beta });
        plan.cofactors.push(c);
        plan.multipliers.push(m);
        c_prev = c;
        m_prev = m;
    }
    Ok(plan)
}

/// General two-factor split for coprime `c, d`:
/// `S(a, b, cd) = S(a cbar, b cbar, d) * S(a dbar, b dbar, c)` with inverses
/// taken mod `d` and mod `c` respectively. Returns the `(a, b)` pairs for the
/// moduli `d` and `c`.
pub fn multiplicativity_split(a: i64, b: i64, c: u64, d: u64) -> Result<((u64, u64), (u64, u64)), KloostermanError> {
    if gcd(c, d) != 1 {
        return Err(KloostermanError::NotCoprime { a: c as i64, modulus: d });
    }
    let cbar = inv_mod(c % d, d).expect("coprime");
    let dbar = inv_mod(d % c, c).expect("coprime");
    let for_d = (mul_mod(reduce(a, d), cbar, d), mul_mod(reduce(b, d), cbar, d));
    let for_c = (mul_mod(reduce(a, c), dbar, c), mul_mod(reduce(b, c), dbar, c));
    Ok((for_d, for_c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kloosterman::brute_force_kloosterman;
    use rand::{Rng, SeedableRng};

    #[test]
    fn prime_power_level_has_one_trivial_factor() {
        let plan = decompose(5, 1, 27).unwrap();
        assert_eq!(plan.factors.len(), 1);
        let f = &plan.factors[0];
        assert_eq!((f.a, f.b, f.l), (1, 25 % 27, 27));
        assert!(plan.verify_exact());
    }

    #[test]
    fn two_factor_examples() {
        for (p, n, level) in [(7u64, 1u32, 15u64), (3, 1, 20)] {
            let plan = decompose(p, n, level).unwrap();
            assert_eq!(plan.factors.len(), 2);
            assert!(plan.verify_exact(), "p={p} N={level}");
            let prod = plan
                .factors
                .iter()
                .map(|f| brute_force_kloosterman(f.a as i64, f.b as i64, f.l).numeric)
                .fold(crate::ball::Ball::one(128), |acc, v| acc.mul_ball(&v));
            let whole = brute_force_kloosterman(1, pow_mod(p, 2 * n as u64, level) as i64, level).numeric;
            assert!(prod.overlaps(&whole));
        }
    }

    #[test]
    fn every_factor_has_a_unit_first_argument() {
        for level in 2..300u64 {
            if let Ok(plan) = decompose(7, 2, level) {
                for f in &plan.factors {
                    assert_eq!(gcd(f.a, f.l), 1, "N={level}");
                }
            }
        }
    }

    #[test]
    fn rejects_shared_factor() {
        assert!(matches!(decompose(3, 1, 12), Err(KloostermanError::NotCoprime { .. })));
    }

    #[test]
    fn general_multiplicativity_on_random_pairs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 50 {
            let c = rng.gen_range(1..60u64);
            let d = rng.gen_range(1..60u64);
            if gcd(c, d) != 1 || c * d > 2000 {
                continue;
            }
            let (a, b) = (rng.gen_range(-50..50i64), rng.gen_range(-50..50i64));
            let ((ad, bd), (ac, bc)) = multiplicativity_split(a, b, c, d).unwrap();
            let lhs = kloosterman_exact(a, b, c * d);
            let rhs = kloosterman_exact(ad as i64, bd as i64, d).mul_embedded(&kloosterman_exact(ac as i64, bc as i64, c));
            assert!(lhs.sub(&rhs).is_zero_exact(), "a={a} b={b} c={c} d={d}");
            let num = brute_force_kloosterman(ad as i64, bd as i64, d)
                .numeric
                .mul_ball(&brute_force_kloosterman(ac as i64, bc as i64, c).numeric);
            assert!(num.overlaps(&brute_force_kloosterman(a, b, c * d).numeric));
            checked += 1;
        }
    }
}
