//! Gauss-Legendre quadrature with certified nodes, weights and truncation
//! error for integrands analytic in a horizontal strip.
//!
//! If `f` is analytic with `|f| <= M` on `|Im z| <= V`, then on a panel of
//! half-width `h` the `n`-point rule errs by at most
//! `h * 64 M / (15 (rho^2 - 1) rho^{2n})` with `rho = V/h + sqrt((V/h)^2 + 1)`,
//! the Bernstein ellipse of parameter `rho` around the panel fitting in the strip.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rug::float::Round;
use rug::Float;

use crate::ball::Ball;

use super::ChebyshevError;

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub n: usize,
    pub nodes: Vec<Ball>,
    pub weights: Vec<Ball>,
}

/// `(P_n(t), P_n'(t))` by the three-term recurrences.
fn legendre_with_derivative(n: usize, t: &Ball) -> (Ball, Ball) {
    let prec = t.prec();
    let mut p_prev = Ball::one(prec);
    let mut p = t.clone();
    let mut d_prev = Ball::zero(prec);
    let mut d = Ball::one(prec);
    if n == 0 {
        return (p_prev, d_prev);
    }
    for k in 1..n as u64 {
        // (k+1) P_{k+1} = (2k+1) t P_k - k P_{k-1}
        let p_next = t.mul_ball(&p).mul_u64(2 * k + 1).sub_ball(&p_prev.mul_u64(k)).div_u64(k + 1);
        // (k+1) P'_{k+1} = (2k+1) (P_k + t P'_k) - k P'_{k-1}
        let d_next = p.add_ball(&t.mul_ball(&d)).mul_u64(2 * k + 1).sub_ball(&d_prev.mul_u64(k)).div_u64(k + 1);
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d)
}

fn legendre_float(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p_prev = Float::with_val(prec, 1);
    let mut p = x.clone();
    for k in 1..n as u32 {
        let next = (Float::with_val(prec, x * &p) * (2 * k + 1) - Float::with_val(prec, &p_prev * k)) / (k + 1);
        p_prev = p;
        p = next;
    }
    // P_n' = n (x P_n - P_{n-1}) / (x^2 - 1)
    let num = (Float::with_val(prec, x * &p) - &p_prev) * n as u32;
    let den = Float::with_val(prec, x * x) - 1u32;
    (p, num / den)
}

/// Bracket of width about `2^{-(w - 16)}` around a Newton iterate at `w` bits.
fn certify_root(n: usize, x: &Float, w: u32) -> Option<Ball> {
    for shift in [16i32, 32, 64] {
        let mut delta = Float::with_val(w, 1);
        delta >>= w as i32 - shift;
        let lo = Float::with_val_round(w, x - &delta, Round::Down).0;
        let hi = Float::with_val_round(w, x + &delta, Round::Up).0;
        let plo = legendre_with_derivative(n, &Ball::from_interval(&lo, &lo, w + 32)).0;
        let phi = legendre_with_derivative(n, &Ball::from_interval(&hi, &hi, w + 32)).0;
        let change = (plo.is_negative() && phi.is_positive()) || (plo.is_positive() && phi.is_negative());
        if change {
            return Some(Ball::from_interval(&lo, &hi, w));
        }
    }
    None
}

fn build_rule(n: usize, prec: u32) -> GaussLegendre {
    let w = prec + 32;
    let mut nodes = Vec::with_capacity(n);
    for i in 1..=n {
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut x = Float::with_val(w, guess);
        for _ in 0..200 {
            let (p, d) = legendre_float(n, &x);
            let step = p / d;
            x -= &step;
            if step.is_zero() || step.get_exp().is_some_and(|e| e < -(w as i32) + 4) {
                break;
            }
        }
        nodes.push(certify_root(n, &x, w).expect("Newton iterate brackets a Legendre root"));
    }
    nodes.sort_by(|a, b| a.mid().partial_cmp(b.mid()).expect("finite nodes"));
    for pair in nodes.windows(2) {
        assert!(pair[0].upper() < pair[1].lower(), "root brackets overlap");
    }
    let weights = nodes
        .iter()
        .map(|t| {
            let d = legendre_with_derivative(n, t).1;
            let one = Ball::one(w);
            Ball::from_u64(2, w).div_ball(&one.sub_ball(&t.sqr()).mul_ball(&d.sqr())).with_prec(prec)
        })
        .collect();
    let nodes = nodes.iter().map(|t| t.with_prec(prec)).collect();
    GaussLegendre { n, nodes, weights }
}

/// Cached `n`-point rule at `prec` bits.
pub fn gauss_legendre(n: usize, prec: u32) -> Arc<GaussLegendre> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<GaussLegendre>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().expect("rule cache").get(&(n, prec)) {
        return r.clone();
    }
    let rule = Arc::new(build_rule(n, prec));
    cache.lock().expect("rule cache").insert((n, prec), rule.clone());
    rule
}

/// An analyticity strip `|Im z| <= v` with `|f| <= m` on it.
#[derive(Debug, Clone)]
pub struct StripBound {
    pub v: f64,
    pub m: Float,
}

#[derive(Debug, Clone)]
pub struct QuadratureReport {
    pub value: Ball,
    pub panels: usize,
    pub nodes_per_panel: usize,
    pub truncation_bound: Float,
    pub strip: f64,
}

pub const NODES: usize = 32;
const MAX_PANELS: usize = 1 << 14;

/// Upper bound on the truncation error of `panels` equal panels covering
/// an interval of length `len`.
fn total_error(len: f64, panels: usize, n: usize, strip: &StripBound) -> Float {
    let prec = 128;
    let h = Ball::from_f64(len, prec).div_u64(2 * panels as u64);
    let r = Ball::from_f64(strip.v, prec).div_ball(&h);
    let rho = r.add_ball(&r.sqr().add_ball(&Ball::one(prec)).sqrt());
    let m = Ball::with_radius(Float::with_val(prec, &strip.m), &Float::new(64));
    let per_panel = h
        .mul_ball(&m)
        .mul_u64(64)
        .div_ball(&rho.sqr().sub_ball(&Ball::one(prec)).mul_u64(15).mul_ball(&rho.pow_u(2 * n as u64)));
    Float::with_val_round(64, per_panel.mul_u64(panels as u64).upper(), Round::Up).0
}

/// `int_a^b f` with total error below `tol`, choosing among the candidate
/// strips the one needing the fewest panels.
pub fn integrate<F>(f: F, a: &Float, b: &Float, strips: &[StripBound], tol: f64, prec: u32) -> Result<QuadratureReport, ChebyshevError>
where
    F: Fn(&Ball) -> Ball + Sync,
{
    let len = Float::with_val(prec, b - a).to_f64_round(Round::Up);
    if len <= 0.0 {
        return Ok(QuadratureReport {
            value: Ball::zero(prec),
            panels: 0,
            nodes_per_panel: NODES,
            truncation_bound: Float::new(64),
            strip: 0.0,
        });
    }
    let mut best: Option<(usize, Float, f64)> = None;
    for strip in strips.iter().filter(|s| s.v > 0.0 && s.m.is_finite()) {
        let mut panels = 1;
        while panels <= MAX_PANELS {
            let e = total_error(len, panels, NODES, strip);
            if e <= tol {
                if best.as_ref().map_or(true, |(p, _, _)| panels < *p) {
                    best = Some((panels, e, strip.v));
                }
                break;
            }
            panels *= 2;
        }
    }
    let Some((panels, err, v)) = best else {
        return Err(ChebyshevError::QuadratureNotConverged { tol, panels: MAX_PANELS });
    };
    let rule = gauss_legendre(NODES, prec);
    let width = Ball::from_interval(a, a, prec + 32).sub_ball(&Ball::from_interval(b, b, prec + 32)).neg();
    let half = width.div_u64(2 * panels as u64);
    let start = Ball::from_interval(a, a, prec + 32);
    let sums: Vec<Ball> = (0..panels)
        .into_par_iter()
        .map(|i| {
            let centre = start.add_ball(&half.mul_u64(2 * i as u64 + 1));
            let mut s = Ball::zero(prec);
            for (t, w) in rule.nodes.iter().zip(&rule.weights) {
                let x = centre.add_ball(&half.mul_ball(t));
                s = s.add_ball(&w.mul_ball(&f(&x)));
            }
            s.mul_ball(&half)
        })
        .collect();
    let mut value = Ball::zero(prec);
    for s in &sums {
        value = value.add_ball(s);
    }
    Ok(QuadratureReport { value: value.widen(&err), panels, nodes_per_panel: NODES, truncation_bound: err, strip: v })
}
