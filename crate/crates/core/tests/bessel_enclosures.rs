use petersson_kit::ball::Ball;
use petersson_kit::bessel::{bessel_j, bessel_j_backward};
use proptest::prelude::*;
use rug::Float;

const P: u32 = 128;

fn near_decimal(b: &Ball, s: &str) -> bool {
    let want = Float::with_val(256, Float::parse(s).unwrap());
    b.overlaps(&Ball::with_radius(want, &Float::with_val(64, 1e-28)))
}

#[test]
fn tabulated_values() {
    let cases = [
        (0u64, 1.0, "0.765197686557966551449717526103"),
        (1, 10.0, "0.0434727461688614366697487680258"),
        (2, 5.0, "0.046565116277752215532303284310691058"),
        (10, 10.0, "0.207486106633358857697278723518"),
    ];
    for (a, x, want) in cases {
        let v = bessel_j(a, &Ball::from_f64(x, P), P).unwrap().value;
        assert!(near_decimal(&v, want), "J_{a}({x}) = {v}");
        assert!(v.rad_f64() < 1e-30);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn enclosures_nest_across_precisions(a in 0u64..=400, x in 0.01f64..500.0) {
        let xb = Ball::from_f64(x, 2 * P);
        let lo = bessel_j(a, &xb, P).unwrap().value;
        let hi = bessel_j(a, &xb, 2 * P).unwrap().value;
        prop_assert!(lo.overlaps(&hi), "J_{a}({x}): {lo} vs {hi}");
        prop_assert!(hi.rad() <= lo.rad() || hi.rad_f64() == 0.0);
        let back = bessel_j_backward(a, &xb, P).unwrap().value;
        prop_assert!(back.overlaps(&hi), "recurrence J_{a}({x}): {back} vs {hi}");
    }
}
