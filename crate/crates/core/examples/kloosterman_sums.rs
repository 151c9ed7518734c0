//! Exact Kloosterman sums as cyclotomic integers, the exact zero test, and
//! nonvanishing certificates for `S(1, p^{2n}, N)`.
//!
//! `cargo run --release --example kloosterman_sums`

use petersson_kit::kloosterman::{brute_force_kloosterman, decompose, kloosterman_exact, nonvanishing_certificate};

fn main() {
    for c in [2u64, 4, 8, 9, 30] {
        let s = kloosterman_exact(1, 1, c);
        println!("S(1,1,{c:>2}) = {:>10.6}  exactly zero: {}", s.numeric_value(128).mid_f64(), s.is_zero_exact());
    }

    let r = brute_force_kloosterman(3, 7, 45);
    println!("\nS(3,7,45) = {}  (|S| <= phi(c): {})", r.numeric, r.satisfies_trivial_bound());

    let plan = decompose(7, 1, 180).expect("coprime");
    println!("\nS(1, 7^2, 180) splits into {} prime-power factors:", plan.factors.len());
    for f in &plan.factors {
        println!("  S({}, {}, {})", f.a, f.b, f.l);
    }
    println!("product matches the direct sum exactly: {}", plan.verify_exact());

    println!();
    for (p, n, level) in [(3u64, 1u32, 5u64), (5, 2, 9), (7, 1, 180), (3, 2, 8)] {
        match nonvanishing_certificate(p, n, level) {
            Ok(c) => println!("S(1, {p}^{}, {level}): {c}", 2 * n),
            Err(e) => println!("S(1, {p}^{}, {level}): {e}", 2 * n),
        }
    }
}
