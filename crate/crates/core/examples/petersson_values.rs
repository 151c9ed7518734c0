//! Truncated Petersson formula with a certified tail, and the comparison
//! with its leading term inside the transition window.
//!
//! `cargo run --release --example petersson_values`

use petersson_kit::petersson::{asymptotic_check, delta, delta_truncated};

fn main() {
    let prec = 192;
    for b in [4u64, 10, 40] {
        let v = delta_truncated(12, 1, 1, 1, b, prec).expect("value");
        println!("Delta_12,1(1,1) with B = {b:>2}: {}  tail <= {:.2e}", v.value, v.tail_bound_f64());
    }

    let v = delta(30, 3, 1, 25, prec).expect("value");
    println!("\nDelta_30,3(1,25) = {:.12} (B = {})", v.value.mid_f64(), v.trunc);
    for (b, t) in v.terms.iter().enumerate().take(4) {
        println!("  b = {}: {:+.3e}", b + 1, t.mid_f64());
    }

    println!("\n   k  N       n   window  main term      remainder/envelope");
    for (k, level, n) in [(68u64, 5u64, 729u64), (204, 5, 6561), (30, 8, 9), (612, 5, 59049)] {
        let c = asymptotic_check(k, level, 1, n, prec).expect("check");
        println!(
            "{k:>4} {level:>2} {n:>7}   {:>5}   {:+.6e}  {:.3e}",
            c.window_ok,
            c.main_term.mid_f64(),
            c.remainder_ratio().upper().to_f64()
        );
    }
}
