use petersson_kit::arith::{gcd, inv_mod};
use petersson_kit::kloosterman::{brute_force_kloosterman, kloosterman_exact};
use proptest::prelude::*;

fn divisor_count(c: u64) -> u64 {
    (1..=c).filter(|d| c % d == 0).count() as u64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn exact_matches_floating_sum(m in -50i64..50, n in -50i64..50, c in 1u64..120) {
        let exact = kloosterman_exact(m, n, c).numeric_value(128);
        prop_assert!(exact.overlaps(&brute_force_kloosterman(m, n, c).numeric));
    }

    #[test]
    fn real_and_symmetric(m in -50i64..50, n in -50i64..50, c in 1u64..120) {
        let s = kloosterman_exact(m, n, c);
        prop_assert!(s.is_symmetric());
        prop_assert!(s.sub(&kloosterman_exact(n, m, c)).is_zero_exact());
    }

    #[test]
    fn unit_twist_moves_between_arguments(m in 1i64..50, n in 1i64..50, c in 2u64..120, a in 1u64..120) {
        prop_assume!(gcd(a, c) == 1);
        let lhs = kloosterman_exact(m * a as i64, n, c);
        let rhs = kloosterman_exact(m, n * a as i64, c);
        prop_assert!(lhs.sub(&rhs).is_zero_exact());
    }

    #[test]
    fn weil_bound(m in 1i64..60, n in 1i64..60, c in 1u64..200) {
        let g = gcd(gcd(m as u64, n as u64), c) as f64;
        let bound = divisor_count(c) as f64 * g.sqrt() * (c as f64).sqrt();
        let v = kloosterman_exact(m, n, c).numeric_value(128);
        prop_assert!(v.abs_upper().to_f64() <= bound + 1e-9, "S({m},{n},{c}) = {v}, bound {bound}");
    }

    #[test]
    fn twisted_multiplicativity(m in 1i64..40, n in 1i64..40, c in 2u64..40, d in 2u64..40) {
        prop_assume!(gcd(c, d) == 1);
        let cb = inv_mod(c % d, d).unwrap() as i64;
        let db = inv_mod(d % c, c).unwrap() as i64;
        let prod = kloosterman_exact(m * db * db, n, c).numeric_value(128).mul_ball(&kloosterman_exact(m * cb * cb, n, d).numeric_value(128));
        prop_assert!(prod.overlaps(&kloosterman_exact(m, n, c * d).numeric_value(128)));
    }
}
