//! The polynomial families `X_n`, `Y_m`, `Q_m` and certified integrals
//! against the four limiting measures.
//!
//! `cargo run --release --example chebyshev_measures`

use petersson_kit::ball::Ball;
use petersson_kit::chebyshev::{cdf, chebyshev_x, discrepancy_grid, integrate_poly, poly_q, poly_y, verify_composition, MeasureSpec};

fn main() {
    println!("X_4 = {:?}", chebyshev_x(4).coeffs());
    println!("Y_2 = {:?}", poly_y(2).coeffs());
    println!("Q_3 = {:?}", poly_q(3).coeffs());
    println!("X_2m = Y_m(X_2) for m <= 50: {}", (0..=50).all(verify_composition));

    let prec = 128;
    let measures = [
        MeasureSpec::mu_infinity(),
        MeasureSpec::mu_p(3).unwrap(),
        MeasureSpec::mu_infinity2(),
        MeasureSpec::mu_p_squared(3).unwrap(),
    ];
    println!("\nmeasure     int X_2 / Q_2    int X_4 / Q_4    F(1)");
    for m in &measures {
        let shifted = m.support().0 == -1;
        let moment = |d: usize| {
            let p = if shifted { poly_q(d) } else { chebyshev_x(d) };
            integrate_poly(&p, m, prec).unwrap().mid_f64()
        };
        let f1 = cdf(m, &Ball::one(prec), prec).unwrap().mid_f64();
        println!("{:<10} {:>14.10}  {:>14.10}  {:.10}", m.name(), moment(2), moment(4), f1);
    }

    let d = discrepancy_grid(&MeasureSpec::mu_p(3).unwrap(), &MeasureSpec::mu_infinity(), 401, 64).unwrap();
    println!("\ngrid discrepancy between mu_3 and mu_inf: {d:.6}");
}
