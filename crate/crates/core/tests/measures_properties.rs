use petersson_kit::ball::Ball;
use petersson_kit::chebyshev::{cdf, chebyshev_x, integrate_poly, integrate_poly_quadrature, poly_q, poly_y, MeasureSpec};
use proptest::prelude::*;

const PREC: u32 = 128;

fn measures() -> Vec<MeasureSpec> {
    vec![MeasureSpec::mu_infinity(), MeasureSpec::mu_infinity2(), MeasureSpec::mu_p(5).unwrap(), MeasureSpec::mu_p_squared(7).unwrap()]
}

#[test]
fn exact_and_quadrature_moments_agree() {
    for m in [MeasureSpec::mu_infinity(), MeasureSpec::mu_infinity2()] {
        for d in 0..12 {
            let p = if m.support().0 == -1 { poly_q(d) } else { chebyshev_x(d) };
            let exact = integrate_poly(&p, &m, PREC).unwrap();
            let quad = integrate_poly_quadrature(&p, &m, PREC).unwrap();
            assert!(exact.overlaps(&quad), "{} degree {d}", m.name());
        }
    }
}

#[test]
fn hecke_moments() {
    for p in [3u64, 5, 11] {
        for n in 0..5usize {
            let want = 1.0 / (p as f64).powi(n as i32);
            let a = integrate_poly(&chebyshev_x(2 * n), &MeasureSpec::mu_p(p).unwrap(), PREC).unwrap();
            let b = integrate_poly(&poly_y(n), &MeasureSpec::mu_p_squared(p).unwrap(), PREC).unwrap();
            assert!((a.mid_f64() - want).abs() < 1e-12 && a.rad_f64() < 1e-10);
            assert!((b.mid_f64() - want).abs() < 1e-12 && b.rad_f64() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn cdf_is_monotone_and_bounded(u in 0.0f64..1.0, v in 0.0f64..1.0) {
        for m in measures() {
            let (lo, hi) = m.support();
            let w = (hi - lo) as f64;
            let (x, y) = (lo as f64 + w * u.min(v), lo as f64 + w * u.max(v));
            let fx = cdf(&m, &Ball::from_f64(x, PREC), PREC).unwrap();
            let fy = cdf(&m, &Ball::from_f64(y, PREC), PREC).unwrap();
            prop_assert!(fx.lower() >= -1e-12 && fy.upper() <= 1.0 + 1e-12);
            prop_assert!(fx.mid_f64() <= fy.mid_f64() + 1e-12);
        }
    }

    #[test]
    fn density_is_nonnegative(u in 0.001f64..0.999) {
        for m in measures() {
            let (lo, hi) = m.support();
            let x = lo as f64 + (hi - lo) as f64 * u;
            prop_assert!(m.density(&Ball::from_f64(x, PREC)).upper() >= 0.0);
        }
    }
}
