//! Growth of `Q_n` and `X_{2n}` on their supports, measured exactly on a
//! rational grid, next to the frozen caps.
//!
//! `cargo run --release --example polynomial_growth`

use petersson_kit::chebyshev::{derivative_bound_check, C_Q_COMBINED, C_Q_ENDPOINT, C_X_COMBINED};

fn main() {
    println!("caps: Q endpoint {C_Q_ENDPOINT}, Q combined {C_Q_COMBINED}, X combined {C_X_COMBINED}");
    println!("   n  |Q'|/n^3  |Q(3)|/n^2  Q comb/n^3  |X'|/n^2  X comb/n^2");
    for n in [1usize, 2, 5, 10, 20, 40] {
        let b = derivative_bound_check(n);
        println!(
            "{n:>4}  {:>8.4}  {:>10.4}  {:>10.4}  {:>8.3}  {:>10.4}",
            b.q_derivative_ratio, b.q_endpoint_ratio, b.q_combined_ratio, b.x_derivative_ratio, b.x_combined_ratio
        );
    }
}
