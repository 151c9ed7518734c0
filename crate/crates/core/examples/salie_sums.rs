//! Closed-form evaluation of Kloosterman sums to odd prime-power moduli,
//! checked against the defining sum.
//!
//! `cargo run --release --example salie_sums`

use petersson_kit::kloosterman::{brute_force_kloosterman, salie_evaluate, sqrt_mod_prime_power};

fn main() {
    for (a, b, q, beta) in [(1i64, 2i64, 3u64, 2u32), (2, 7, 5, 2), (1, 1, 7, 3), (3, 5, 11, 2), (1, 3, 5, 3)] {
        let qb = q.pow(beta);
        let brute = brute_force_kloosterman(a, b, qb).numeric;
        match salie_evaluate(a, b, q, beta, 128) {
            Ok(v) => {
                let root = sqrt_mod_prime_power(a * b, q, beta).expect("root exists");
                println!("S({a},{b},{qb:>4}) = {:>12.8}  root {root:>4}  agrees: {}", v.mid_f64(), v.overlaps(&brute));
            }
            Err(e) => println!("S({a},{b},{qb:>4}): {e}; direct sum = {:.3}", brute.mid_f64()),
        }
    }
}
