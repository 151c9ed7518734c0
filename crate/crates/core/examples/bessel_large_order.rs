//! Certified `J_a(x)` for large orders, including the transition region
//! `x = a + d a^{1/3}`, with the backward recurrence as a cross-check.
//!
//! `cargo run --release --example bessel_large_order`

use petersson_kit::ball::Ball;
use petersson_kit::bessel::{bessel_j, bessel_j_backward, ratio_bound_check, transition_eval};

fn main() {
    let prec = 192;
    for (a, x) in [(100u64, 100.0), (301, 295.0), (1000, 1000.0), (2000, 1500.0)] {
        let s = bessel_j(a, &Ball::from_f64(x, prec), prec).expect("series");
        let b = bessel_j_backward(a, &Ball::from_f64(x, prec), prec).expect("recurrence");
        println!(
            "J_{a}({x}) = {:.15e} +- {:.1e}  (working {} bits; recurrence agrees: {})",
            s.value.mid_f64(),
            s.value.rad_f64(),
            s.working_precision,
            s.value.overlaps(&b.value)
        );
    }

    println!("\na^(1/3) J_a(a + d a^(1/3)):");
    for a in [64u64, 512, 1728] {
        let row: Vec<String> = [-0.9, 0.0, 0.9]
            .iter()
            .map(|&d| {
                let v = transition_eval(a, d, prec).expect("transition");
                format!("{:.4}", v.mid_f64() * (a as f64).cbrt())
            })
            .collect();
        println!("  a = {a:>4}: {}", row.join("  "));
    }

    let r = ratio_bound_check(200, 0.9, prec).expect("ratio");
    println!("\n1 <= J_200(180) / (0.9^200 J_200(200)) = {:.6} <= {:.6}: {}", r.ratio.mid_f64(), r.envelope.mid_f64(), r.holds);
}
