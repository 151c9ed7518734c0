//! The measures `mu_infty`, `mu_p`, `mu_{infty,2}` and `mu_{p^2}`.
//!
//! Each is integrated in the angle variable: `x = s + 2 cos(theta)` on
//! `[0, pi]` with shift `s = 0` for the first pair and `s = 1` for the second.
//! With `A = (p + 1)^2 / p` the weights become
//!
//! | measure           | weight in `theta`                                    |
//! |-------------------|------------------------------------------------------|
//! | `mu_infty`        | `(2/pi) sin^2`                                       |
//! | `mu_p`            | `(2/pi) (p+1) sin^2 / (A - 4 cos^2)`                 |
//! | `mu_{infty,2}`    | `(1/pi) (1 - cos)`                                   |
//! | `mu_{p^2}`        | `((p+1)/pi) (1 - cos) / (A - 2 - 2 cos)`             |
//!
//! which removes the endpoint square roots, including the inverse square
//! root of `mu_{infty,2}` and `mu_{p^2}` at `x = -1`.

use rug::float::Round;
use rug::{Float, Integer};

use crate::arith::is_prime;
use crate::ball::Ball;
use crate::poly::IntPolynomial;

use super::quadrature::{integrate, StripBound};
use super::{chebyshev_x, x_basis_coefficients, ChebyshevError, MAX_DEGREE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureKind {
    MuP(u64),
    MuInfinity,
    MuPSquared(u64),
    MuInfinity2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasureSpec {
    pub kind: MeasureKind,
}

impl MeasureSpec {
    pub fn new(kind: MeasureKind) -> Result<Self, ChebyshevError> {
        match kind {
            MeasureKind::MuP(p) | MeasureKind::MuPSquared(p) if !is_prime(p) => Err(ChebyshevError::InvalidPrime(p)),
            _ => Ok(MeasureSpec { kind }),
        }
    }

    pub fn mu_infinity() -> Self {
        MeasureSpec { kind: MeasureKind::MuInfinity }
    }

    pub fn mu_infinity2() -> Self {
        MeasureSpec { kind: MeasureKind::MuInfinity2 }
    }

    pub fn mu_p(p: u64) -> Result<Self, ChebyshevError> {
        Self::new(MeasureKind::MuP(p))
    }

    pub fn mu_p_squared(p: u64) -> Result<Self, ChebyshevError> {
        Self::new(MeasureKind::MuPSquared(p))
    }

    pub fn name(&self) -> String {
        match self.kind {
            MeasureKind::MuP(p) => format!("mu_{p}"),
            MeasureKind::MuInfinity => "mu_inf".into(),
            MeasureKind::MuPSquared(p) => format!("mu_{p}^2"),
            MeasureKind::MuInfinity2 => "mu_inf2".into(),
        }
    }

    /// Parses `inf`, `inf2`, `p:<prime>`, `p2:<prime>`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let bad = || format!("unknown measure {s:?}; expected inf, inf2, p:<prime> or p2:<prime>");
        match s {
            "inf" => Ok(Self::mu_infinity()),
            "inf2" => Ok(Self::mu_infinity2()),
            _ => {
                let (tag, p) = s.split_once(':').ok_or_else(bad)?;
                let p: u64 = p.parse().map_err(|_| bad())?;
                match tag {
                    "p" => Self::mu_p(p).map_err(|e| e.to_string()),
                    "p2" => Self::mu_p_squared(p).map_err(|e| e.to_string()),
                    _ => Err(bad()),
                }
            }
        }
    }

    pub fn support(&self) -> (i64, i64) {
        match self.kind {
            MeasureKind::MuP(_) | MeasureKind::MuInfinity => (-2, 2),
            MeasureKind::MuPSquared(_) | MeasureKind::MuInfinity2 => (-1, 3),
        }
    }

    fn shift(&self) -> i64 {
        self.support().0 + 2
    }

    fn a_const(p: u64, prec: u32) -> Ball {
        Ball::from_integer(&Integer::from((p + 1) * (p + 1)), prec).div_u64(p)
    }

    /// Density in `x`, as printed for each measure.
    pub fn density(&self, x: &Ball) -> Ball {
        let prec = x.prec();
        let one = Ball::one(prec);
        let pi = Ball::pi(prec);
        match self.kind {
            MeasureKind::MuInfinity => one.sub_ball(&x.sqr().div_u64(4)).sqrt().div_ball(&pi),
            MeasureKind::MuP(p) => {
                let num = one.sub_ball(&x.sqr().div_u64(4)).sqrt().mul_u64(p + 1);
                num.div_ball(&pi.mul_ball(&Self::a_const(p, prec).sub_ball(&x.sqr())))
            }
            MeasureKind::MuInfinity2 => {
                let r = Ball::from_u64(3, prec).sub_ball(x).div_ball(&one.add_ball(x)).sqrt();
                r.div_ball(&pi.mul_u64(2))
            }
            MeasureKind::MuPSquared(p) => {
                let r = Ball::from_u64(3, prec).sub_ball(x).div_ball(&one.add_ball(x)).sqrt();
                let den = Self::a_const(p, prec).sub_ball(&x.add_ball(&one));
                r.mul_u64(p + 1).div_ball(&pi.mul_u64(2).mul_ball(&den))
            }
        }
    }

    /// Weight in `theta`, so that `int f dmu = int_0^pi f(s + 2cos t) w(t) dt`.
    pub fn theta_weight(&self, t: &Ball) -> Ball {
        let prec = t.prec();
        let pi = Ball::pi(prec);
        let one = Ball::one(prec);
        match self.kind {
            MeasureKind::MuInfinity => t.sin().sqr().mul_u64(2).div_ball(&pi),
            MeasureKind::MuP(p) => {
                let den = Self::a_const(p, prec).sub_ball(&t.cos().sqr().mul_u64(4));
                t.sin().sqr().mul_u64(2 * (p + 1)).div_ball(&pi.mul_ball(&den))
            }
            MeasureKind::MuInfinity2 => one.sub_ball(&t.cos()).div_ball(&pi),
            MeasureKind::MuPSquared(p) => {
                let den = Self::a_const(p, prec).sub_ball(&Ball::from_u64(2, prec)).sub_ball(&t.cos().mul_u64(2));
                one.sub_ball(&t.cos()).mul_u64(p + 1).div_ball(&pi.mul_ball(&den))
            }
        }
    }

    fn x_of_theta(&self, t: &Ball) -> Ball {
        t.cos().mul_u64(2).add_ball(&Ball::from_i64(self.shift(), t.prec()))
    }

    /// Strips `|Im theta| <= v` free of poles, with the distance to the pole
    /// for `mu_p` and `mu_{p^2}` halved.
    fn strip_candidates(&self) -> Vec<f64> {
        match self.kind {
            MeasureKind::MuInfinity | MeasureKind::MuInfinity2 => vec![0.25, 0.5, 1.0, 2.0],
            MeasureKind::MuP(p) => {
                let lim = 0.5 * (p as f64).ln();
                vec![lim / 4.0, lim / 2.0]
            }
            MeasureKind::MuPSquared(p) => {
                let lim = (p as f64).ln();
                vec![lim / 4.0, lim / 2.0]
            }
        }
    }

    /// Upper bound on `|w(theta)|` for `|Im theta| <= v`, using
    /// `|cos|, |sin| <= cosh v` and `|cos 2 theta| <= cosh 2v`.
    fn weight_bound(&self, v: f64, prec: u32) -> Ball {
        let vb = Ball::from_f64(v, prec);
        let ch = vb.cosh();
        let pi = Ball::pi(prec);
        let one = Ball::one(prec);
        let two = Ball::from_u64(2, prec);
        match self.kind {
            MeasureKind::MuInfinity => ch.sqr().mul_u64(2).div_ball(&pi),
            MeasureKind::MuP(p) => {
                // A - 4cos^2 = (p + 1/p) - 2 cos 2 theta
                let gap = Self::a_const(p, prec).sub_ball(&two).sub_ball(&vb.mul_u64(2).cosh().mul_u64(2));
                if !gap.is_positive() {
                    return Ball::indeterminate(prec);
                }
                ch.sqr().mul_u64(2 * (p + 1)).div_ball(&pi.mul_ball(&gap))
            }
            MeasureKind::MuInfinity2 => one.add_ball(&ch).div_ball(&pi),
            MeasureKind::MuPSquared(p) => {
                let gap = Self::a_const(p, prec).sub_ball(&two).sub_ball(&ch.mul_u64(2));
                if !gap.is_positive() {
                    return Ball::indeterminate(prec);
                }
                one.add_ball(&ch).mul_u64(p + 1).div_ball(&pi.mul_ball(&gap))
            }
        }
    }

    /// Upper bound on `|P(x(theta))|` for `|Im theta| <= v`.
    fn poly_bound(&self, poly: &IntPolynomial, v: f64, prec: u32) -> Ball {
        let abs = IntPolynomial::new(poly.coeffs().iter().map(|c| Integer::from(c.abs_ref())).collect());
        let xmax = Ball::from_f64(v, prec).cosh().mul_u64(2).add_ball(&Ball::from_i64(self.shift().abs(), prec));
        abs.eval_ball(&xmax)
    }

    fn strips_for(&self, poly: &IntPolynomial) -> Vec<StripBound> {
        let prec = 128;
        self.strip_candidates()
            .into_iter()
            .map(|v| {
                let m = self.poly_bound(poly, v, prec).mul_ball(&self.weight_bound(v, prec));
                StripBound { v, m: Float::with_val_round(64, m.upper(), Round::Up).0 }
            })
            .collect()
    }

    /// `sup |P(x(theta)) w(theta)|` on the real axis.
    fn real_sup(&self, poly: &IntPolynomial, prec: u32) -> Float {
        self.poly_bound(poly, 0.0, prec).mul_ball(&self.weight_bound(0.0, prec)).abs_upper()
    }
}

fn default_tol(prec: u32) -> f64 {
    2f64.powi(-(prec.min(1000) as i32) / 2)
}

fn check_degree(poly: &IntPolynomial) -> Result<(), ChebyshevError> {
    match poly.degree() {
        Some(d) if d > MAX_DEGREE => Err(ChebyshevError::DegreeTooLarge { degree: d, cap: MAX_DEGREE }),
        _ => Ok(()),
    }
}

/// `int_lo^hi P(x(theta)) w(theta) dtheta` where `hi` may be `pi`.
fn theta_integral(m: &MeasureSpec, poly: &IntPolynomial, lo: &Float, upper_is_pi: bool, hi: &Float, tol: f64, prec: u32) -> Result<Ball, ChebyshevError> {
    let strips = m.strips_for(poly);
    let f = |t: &Ball| poly.eval_ball(&m.x_of_theta(t)).mul_ball(&m.theta_weight(t));
    if upper_is_pi {
        let pi = Ball::pi(prec + 32);
        let up = pi.upper();
        let rep = integrate(f, lo, &up, &strips, tol, prec)?;
        // the integral over [pi, up] is at most (up - lo(pi)) sup|f|
        let width = Float::with_val_round(64, &up - pi.lower(), Round::Up).0;
        let extra = Float::with_val_round(64, width * m.real_sup(poly, prec), Round::Up).0;
        Ok(rep.value.widen(&extra))
    } else {
        Ok(integrate(f, lo, hi, &strips, tol, prec)?.value)
    }
}

/// `int P dmu` by certified quadrature in `theta`, to absolute error `2^{-prec/2}`.
pub fn integrate_poly_quadrature(poly: &IntPolynomial, m: &MeasureSpec, prec: u32) -> Result<Ball, ChebyshevError> {
    check_degree(poly)?;
    if poly.is_zero() {
        return Ok(Ball::zero(prec));
    }
    theta_integral(m, poly, &Float::new(prec), true, &Float::new(prec), default_tol(prec), prec)
}

/// `int P dmu`. Against `mu_infty` this is the `X_0` coefficient of `P`, and
/// `mu_{infty,2}` is the image of `mu_infty` under `x -> x^2 - 1`, so both are
/// exact; the other two go through quadrature.
pub fn integrate_poly(poly: &IntPolynomial, m: &MeasureSpec, prec: u32) -> Result<Ball, ChebyshevError> {
    check_degree(poly)?;
    match m.kind {
        MeasureKind::MuInfinity => Ok(semicircle_moment(poly, prec)),
        MeasureKind::MuInfinity2 => Ok(semicircle_moment(&poly.compose(&chebyshev_x(2)), prec)),
        _ => integrate_poly_quadrature(poly, m, prec),
    }
}

fn semicircle_moment(poly: &IntPolynomial, prec: u32) -> Ball {
    let a0 = x_basis_coefficients(poly).into_iter().next().unwrap_or_default();
    Ball::from_integer(&a0, prec)
}

/// `mu((-inf, x])`, with `x` clamped to the support.
pub fn cdf(m: &MeasureSpec, x: &Ball, prec: u32) -> Result<Ball, ChebyshevError> {
    let (lo, hi) = m.support();
    if x.upper() <= lo {
        return Ok(Ball::zero(prec));
    }
    if x.lower() >= hi {
        return Ok(Ball::one(prec));
    }
    let w = prec + 32;
    let theta = x.with_prec(w).sub_ball(&Ball::from_i64(m.shift(), w)).div_u64(2).acos();
    let pi = Ball::pi(w);
    match m.kind {
        MeasureKind::MuInfinity => {
            // (1/pi)(pi - theta + sin theta cos theta)
            let v = pi.sub_ball(&theta).add_ball(&theta.sin().mul_ball(&theta.cos()));
            Ok(v.div_ball(&pi).with_prec(prec))
        }
        MeasureKind::MuInfinity2 => {
            let v = pi.sub_ball(&theta).add_ball(&theta.sin());
            Ok(v.div_ball(&pi).with_prec(prec))
        }
        _ => {
            let one = IntPolynomial::constant(1);
            let start = Float::with_val(w, theta.mid());
            let core = theta_integral(m, &one, &start, true, &Float::new(w), default_tol(prec), prec)?;
            let slack = Float::with_val_round(64, theta.rad() * m.real_sup(&one, prec), Round::Up).0;
            Ok(core.widen(&slack))
        }
    }
}

/// `sup_I |mu_a(I) - mu_b(I)|` over intervals with endpoints on a uniform grid
/// of `points` points spanning both supports.
pub fn discrepancy_grid(a: &MeasureSpec, b: &MeasureSpec, points: usize, prec: u32) -> Result<f64, ChebyshevError> {
    let lo = a.support().0.min(b.support().0) as f64;
    let hi = a.support().1.max(b.support().1) as f64;
    let mut max_d = 0f64;
    let mut min_d = 0f64;
    for i in 0..points.max(2) {
        let x = lo + (hi - lo) * i as f64 / (points.max(2) - 1) as f64;
        let xb = Ball::from_f64(x, prec);
        let d = cdf(a, &xb, prec)?.sub_ball(&cdf(b, &xb, prec)?).mid_f64();
        max_d = max_d.max(d);
        min_d = min_d.min(d);
    }
    Ok(max_d - min_d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::{chebyshev_x_all, poly_q, poly_y};
    use rug::ops::Pow;
    use rug::Rational;

    const PREC: u32 = 128;

    fn all_measures() -> Vec<MeasureSpec> {
        let mut v = vec![MeasureSpec::mu_infinity(), MeasureSpec::mu_infinity2()];
        for p in [3u64, 5, 7] {
            v.push(MeasureSpec::mu_p(p).unwrap());
            v.push(MeasureSpec::mu_p_squared(p).unwrap());
        }
        v
    }

    #[test]
    fn masses_are_one() {
        let one = IntPolynomial::constant(1);
        for m in all_measures() {
            let q = integrate_poly_quadrature(&one, &m, PREC).unwrap();
            assert!(q.contains_point(&Float::with_val(64, 1)), "{}: {q}", m.name());
            assert!(q.rad_f64() < 1e-10);
        }
    }

    #[test]
    fn semicircle_orthogonality_exact_and_by_quadrature() {
        let m = MeasureSpec::mu_infinity();
        for (n, x) in chebyshev_x_all(30).iter().enumerate() {
            let exact = integrate_poly(x, &m, PREC).unwrap();
            let expect = if n == 0 { 1 } else { 0 };
            assert!(exact.is_exact() && exact.contains_point(&Float::with_val(64, expect)));
            let q = integrate_poly_quadrature(x, &m, PREC).unwrap();
            assert!(q.contains_point(&Float::with_val(64, expect)) && q.rad_f64() < 1e-10, "n={n}: {q}");
        }
    }

    #[test]
    fn odd_q_integrate_to_zero_against_mu_inf2() {
        let m = MeasureSpec::mu_infinity2();
        for n in 0..=10usize {
            let q = poly_q(2 * n + 1);
            assert!(integrate_poly(&q, &m, PREC).unwrap().contains_point(&Float::new(64)));
            let quad = integrate_poly_quadrature(&q, &m, PREC).unwrap();
            assert!(quad.contains_point(&Float::new(64)) && quad.rad_f64() < 1e-10, "n={n}: {quad}");
        }
    }

    #[test]
    fn hecke_moments_of_mu_p() {
        // int X_{2n} dmu_p = p^{-n}, odd ones vanish; mu_{p^2} is the image of
        // mu_p under x -> x^2 - 1, so int Y_n dmu_{p^2} = p^{-n}.
        let xs = chebyshev_x_all(16);
        for p in [3u64, 5] {
            let mp = MeasureSpec::mu_p(p).unwrap();
            let mp2 = MeasureSpec::mu_p_squared(p).unwrap();
            for (j, x) in xs.iter().enumerate() {
                let v = integrate_poly(x, &mp, PREC).unwrap();
                let expect = if j % 2 == 1 { Rational::new() } else { Rational::from((1, Integer::from(p).pow(j as u32 / 2))) };
                assert!(v.contains_point(&Float::with_val(200, &expect)), "p={p} j={j}: {v}");
            }
            for n in 0..8usize {
                let v = integrate_poly(&poly_y(n), &mp2, PREC).unwrap();
                let expect = Rational::from((1, Integer::from(p).pow(n as u32)));
                assert!(v.contains_point(&Float::with_val(200, &expect)), "p^2 n={n}: {v}");
            }
        }
    }

    #[test]
    fn semicircle_catalan_moments() {
        let m = MeasureSpec::mu_infinity();
        let catalan = [1, 1, 2, 5, 14, 42, 132];
        for (k, c) in catalan.iter().enumerate() {
            let mut coeffs = vec![0i64; 2 * k + 1];
            coeffs[2 * k] = 1;
            let v = integrate_poly(&IntPolynomial::from_i64s(&coeffs), &m, PREC).unwrap();
            assert!(v.contains_point(&Float::with_val(64, *c)));
        }
    }

    #[test]
    fn cdf_values() {
        for m in all_measures() {
            let (lo, hi) = m.support();
            assert!(cdf(&m, &Ball::from_i64(hi, PREC), PREC).unwrap().contains_point(&Float::with_val(64, 1)));
            assert!(cdf(&m, &Ball::from_i64(lo, PREC), PREC).unwrap().contains_point(&Float::new(64)));
        }
        let half = cdf(&MeasureSpec::mu_infinity(), &Ball::zero(PREC), PREC).unwrap();
        assert!(half.contains_point(&Float::with_val(64, 0.5)));
        // F(1) = 2/3 + sqrt(3)/(4 pi)
        let f1 = cdf(&MeasureSpec::mu_infinity(), &Ball::one(PREC), PREC).unwrap();
        let expect = Ball::from_u64(2, PREC)
            .div_u64(3)
            .add_ball(&Ball::from_u64(3, PREC).sqrt().div_ball(&Ball::pi(PREC).mul_u64(4)));
        assert!(f1.overlaps(&expect) && f1.rad_f64() < 1e-30);
        // mu_p is symmetric
        let h = cdf(&MeasureSpec::mu_p(5).unwrap(), &Ball::zero(PREC), PREC).unwrap();
        assert!(h.contains_point(&Float::with_val(64, 0.5)));
    }

    #[test]
    fn cdf_agrees_with_density_quadrature() {
        // mu_inf2 on [-1, x]: closed form against quadrature of the theta weight
        let m = MeasureSpec::mu_infinity2();
        let closed = cdf(&m, &Ball::from_f64(1.5, PREC), PREC).unwrap();
        let theta = Ball::from_f64(0.25, PREC).acos();
        let one = IntPolynomial::constant(1);
        let start = Float::with_val(PREC, theta.mid());
        let quad = theta_integral(&m, &one, &start, true, &Float::new(PREC), 1e-25, PREC).unwrap();
        assert!(closed.overlaps(&quad.widen(&Float::with_val(64, 1e-30))));
    }

    #[test]
    fn densities_are_nonnegative_inside() {
        for m in all_measures() {
            let (lo, hi) = m.support();
            for i in 1..100 {
                let x = lo as f64 + (hi - lo) as f64 * i as f64 / 100.0;
                assert!(m.density(&Ball::from_f64(x, PREC)).is_nonnegative(), "{} at {x}", m.name());
            }
        }
    }

    #[test]
    fn mu_p_squared_approaches_mu_inf2() {
        // mu_{p^2} / mu_inf2 - 1 = (x - 1/p) / (p + 1 + 1/p - x), which changes
        // sign at x = 1/p: monotone in p off [0, 1], uniformly monotone overall
        let limit = MeasureSpec::mu_infinity2();
        let primes = [3u64, 5, 11, 101];
        let mut sups = [0f64; 4];
        for i in 1..40 {
            let xf = -1.0 + 4.0 * i as f64 / 40.0;
            let x = Ball::from_f64(xf, PREC);
            let target = limit.density(&x);
            let diffs: Vec<f64> = primes
                .iter()
                .map(|&p| MeasureSpec::mu_p_squared(p).unwrap().density(&x).sub_ball(&target).abs().mid_f64())
                .collect();
            for (s, d) in sups.iter_mut().zip(&diffs) {
                *s = s.max(*d);
            }
            if !(0.0..=1.0).contains(&xf) {
                assert!(diffs.windows(2).all(|w| w[1] < w[0]), "x={xf}: {diffs:?}");
            }
        }
        assert!(sups.windows(2).all(|w| w[1] < w[0]), "{sups:?}");
        let at_fifth = Ball::from_u64(1, PREC).div_u64(5);
        let d = MeasureSpec::mu_p_squared(5).unwrap().density(&at_fifth).sub_ball(&limit.density(&at_fifth));
        assert!(d.contains_zero() && d.rad_f64() < 1e-30);
    }

    #[test]
    fn discrepancy_between_mu_p_and_semicircle_shrinks_with_p() {
        let inf = MeasureSpec::mu_infinity();
        let d3 = discrepancy_grid(&MeasureSpec::mu_p(3).unwrap(), &inf, 201, 64).unwrap();
        let d101 = discrepancy_grid(&MeasureSpec::mu_p(101).unwrap(), &inf, 201, 64).unwrap();
        assert!(d101 < d3 && d3 > 0.0);
    }

    #[test]
    fn parse_names() {
        assert_eq!(MeasureSpec::parse("p:3").unwrap(), MeasureSpec::mu_p(3).unwrap());
        assert_eq!(MeasureSpec::parse("inf2").unwrap(), MeasureSpec::mu_infinity2());
        assert!(MeasureSpec::parse("p:4").is_err());
    }
}
