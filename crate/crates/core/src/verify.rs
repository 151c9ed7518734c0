//! Self-checks behind `verify kloosterman|bessel|measures`.

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use rug::{Float, Integer};

use crate::arith::{gcd, is_prime, mobius};
use crate::ball::Ball;
use crate::bessel::{bessel_j, bessel_j_backward, transition_eval, verify_ratio_bound};
use crate::chebyshev::{chebyshev_x_all, integrate_poly, poly_q, verify_composition, MeasureSpec};
use crate::kloosterman::{brute_force_kloosterman, decompose, kloosterman_exact, nonvanishing_certificate, salie_evaluate};

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

fn count_check(name: &str, failures: Vec<String>, total: usize) -> Check {
    let detail = match failures.first() {
        None => format!("{total} cases"),
        Some(f) => format!("{} of {total} failed, first: {f}", failures.len()),
    };
    Check::new(name, failures.is_empty(), detail)
}

/// Odd prime powers `q^beta <= limit` with `beta >= 2`.
pub fn odd_prime_powers(limit: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for q in (3..).step_by(2).take_while(|q| q * q <= limit) {
        if !is_prime(q) {
            continue;
        }
        let mut beta = 2;
        while q.pow(beta) <= limit {
            out.push((q, beta));
            beta += 1;
        }
    }
    out
}

/// Levels `2^a b <= limit` with `a <= 2`, `b` odd.
pub fn admissible_levels(limit: u64) -> impl Iterator<Item = u64> {
    (1..=limit).filter(|n| n % 8 != 0)
}

pub fn table_check() -> Check {
    let table: Vec<(u64, i64)> = [2u64, 4, 8].iter().map(|&c| (c, kloosterman_exact(1, 1, c).numeric_value(64).mid_f64().round() as i64)).collect();
    let zero8 = kloosterman_exact(1, 1, 8).is_zero_exact();
    let exact_table = table == vec![(2, 1), (4, -2), (8, 0)] && zero8 && !kloosterman_exact(1, 1, 4).is_zero_exact();
    Check::new("S(1,1,c) for c = 2, 4, 8", exact_table, format!("{table:?}, S(1,1,8) exactly zero: {zero8}"))
}

pub fn mobius_check(max_c: u64) -> Check {
    let mob: Vec<String> = (1..=max_c)
        .into_par_iter()
        .filter_map(|c| {
            let s = kloosterman_exact(1, 0, c);
            let v = s.numeric_value(64);
            let ok = v.contains_point(&Float::with_val(64, mobius(c))) && (mobius(c) != 0 || s.is_zero_exact());
            (!ok).then(|| format!("c={c}"))
        })
        .collect();
    count_check("S(1,0,c) = mu(c)", mob, max_c as usize)
}

/// `samples` random unit pairs per odd prime power `q^beta <= limit`.
pub fn salie_check(limit: u64, samples: usize, seed: u64) -> Check {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut jobs = Vec::new();
    for (q, beta) in odd_prime_powers(limit) {
        let qb = q.pow(beta);
        for _ in 0..samples {
            let (a, b) = loop {
                let a = rng.gen_range(1..qb) as i64;
                let b = rng.gen_range(1..qb) as i64;
                if a as u64 % q != 0 && b as u64 % q != 0 {
                    break (a, b);
                }
            };
            jobs.push((a, b, q, beta));
        }
    }
    let fails: Vec<String> = jobs
        .par_iter()
        .filter_map(|&(a, b, q, beta)| {
            let qb = q.pow(beta);
            let brute = brute_force_kloosterman(a, b, qb).numeric;
            match salie_evaluate(a, b, q, beta, 128) {
                Ok(v) if v.overlaps(&brute) => None,
                Ok(_) => Some(format!("S({a},{b},{qb}) mismatch")),
                // no square root: the sum vanishes
                Err(_) if brute.contains_zero() => None,
                Err(e) => Some(format!("S({a},{b},{qb}): {e}")),
            }
        })
        .collect();
    count_check("Salie closed form", fails, jobs.len())
}

pub fn decomposition_check(max_c: u64, primes: &[u64], exponents: &[u32]) -> Check {
    let jobs: Vec<(u64, u32, u64)> = primes
        .iter()
        .flat_map(|&p| (1..=max_c).filter(move |&l| gcd(p, l) == 1).flat_map(move |l| exponents.iter().map(move |&n| (p, n, l))))
        .collect();
    let fails: Vec<String> = jobs
        .par_iter()
        .filter(|&&(p, n, level)| !decompose(p, n, level).map(|d| d.verify_exact()).unwrap_or(false))
        .map(|(p, n, level)| format!("p={p} n={n} N={level}"))
        .collect();
    count_check("multiplicative decomposition", fails, jobs.len())
}

/// Levels `N <= max_c` with `8` not dividing `N`, `n = 1..=n_max`.
pub fn nonvanishing_check(max_c: u64, primes: &[u64], n_max: u32) -> Check {
    let jobs: Vec<(u64, u32, u64)> = primes
        .iter()
        .flat_map(|&p| admissible_levels(max_c).filter(move |&l| gcd(p, l) == 1).flat_map(move |l| (1..=n_max).map(move |n| (p, n, l))))
        .collect();
    let fails: Vec<String> = jobs
        .par_iter()
        .filter(|&&(p, n, level)| {
            let cert = nonvanishing_certificate(p, n, level);
            let twist = Integer::from(p).pow_mod(&Integer::from(2 * n), &Integer::from(level)).expect("level >= 1").to_i64().expect("fits");
            let exact_zero = kloosterman_exact(1, twist, level).is_zero_exact();
            !cert.map(|c| c.is_nonzero()).unwrap_or(false) || exact_zero
        })
        .map(|(p, n, level)| format!("p={p} n={n} N={level}"))
        .collect();
    count_check("nonvanishing for 8 not dividing N", fails, jobs.len())
}

pub fn kloosterman_suite(max_c: u64, seed: u64) -> Vec<Check> {
    vec![
        table_check(),
        mobius_check(max_c),
        salie_check(max_c.clamp(9, 3000), 3, seed),
        decomposition_check(max_c, &[3, 5, 7], &[1, 2]),
        nonvanishing_check(max_c, &[3, 5, 7], 3),
    ]
}

/// One CSV row of `verify bessel`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BesselRow {
    pub a: u64,
    pub x_mid: f64,
    pub value_mid: f64,
    pub value_rad: f64,
    pub method: String,
    pub lemma_check: String,
    pub pass: bool,
}

pub const RATIO_ORDERS: [u64; 5] = [10, 50, 100, 200, 400];
pub const RATIO_POINTS: [f64; 6] = [0.1, 0.25, 0.5, 0.75, 0.9, 1.0];
pub const TRANSITION_ORDERS: [u64; 5] = [64, 216, 512, 1000, 1728];
pub const TRANSITION_SHIFTS: [f64; 5] = [-0.9, -0.5, 0.0, 0.5, 0.9];
pub const SCALING_BRACKET: (f64, f64) = (0.3, 0.5);
pub const TRANSITION_BRACKET: (f64, f64) = (0.1, 0.8);

/// Orders sampled for the `a^{1/3} J_a(a)` bracket.
pub fn scaling_orders() -> Vec<u64> {
    (50..=2000).step_by(50).collect()
}

fn bracket_holds(v: &Ball, a: u64, (lo, hi): (f64, f64)) -> bool {
    let s = v.mul_ball(&Ball::from_u64(a, v.prec()).cbrt());
    s.lower() >= lo && s.upper() <= hi
}

pub fn bessel_suite(prec: u32) -> Vec<BesselRow> {
    let mut jobs: Vec<(u64, f64, &'static str)> = Vec::new();
    for a in RATIO_ORDERS {
        for x in RATIO_POINTS {
            jobs.push((a, x, "ratio"));
        }
    }
    for a in scaling_orders() {
        jobs.push((a, 1.0, "scaling"));
    }
    for a in TRANSITION_ORDERS {
        for d in TRANSITION_SHIFTS {
            jobs.push((a, d, "transition"));
        }
    }
    for (a, x) in [(0u64, 1.0), (100, 100.0), (301, 295.0)] {
        jobs.push((a, x, "backward"));
    }
    jobs.par_iter()
        .map(|&(a, x, kind)| {
            let err_row = |e: String| BesselRow {
                a,
                x_mid: x,
                value_mid: f64::NAN,
                value_rad: f64::NAN,
                method: "series".into(),
                lemma_check: format!("{kind}: {e}"),
                pass: false,
            };
            match kind {
                "ratio" => {
                    let ax = Ball::from_f64(x * a as f64, prec);
                    match (bessel_j(a, &ax, prec), verify_ratio_bound(a, x, prec)) {
                        (Ok(v), Ok(ok)) => row(a, ax.mid_f64(), &v.value, "series", "ratio", ok),
                        (Err(e), _) => err_row(e.to_string()),
                        (_, Err(e)) => err_row(e.to_string()),
                    }
                }
                "scaling" => match bessel_j(a, &Ball::from_u64(a, prec), prec) {
                    Ok(v) => row(a, a as f64, &v.value, "series", "scaling", bracket_holds(&v.value, a, SCALING_BRACKET)),
                    Err(e) => err_row(e.to_string()),
                },
                "transition" => match transition_eval(a, x, prec) {
                    Ok(v) => {
                        let arg = a as f64 + x * (a as f64).cbrt();
                        row(a, arg, &v, "series", "transition", bracket_holds(&v, a, TRANSITION_BRACKET))
                    }
                    Err(e) => err_row(e.to_string()),
                },
                _ => {
                    let xb = Ball::from_f64(x, prec);
                    match (bessel_j(a, &xb, prec), bessel_j_backward(a, &xb, prec)) {
                        (Ok(s), Ok(b)) => row(a, x, &b.value, "backward", "agreement", s.value.overlaps(&b.value)),
                        (Err(e), _) => err_row(e.to_string()),
                        (_, Err(e)) => err_row(e.to_string()),
                    }
                }
            }
        })
        .collect()
}

fn row(a: u64, x: f64, v: &Ball, method: &str, check: &str, pass: bool) -> BesselRow {
    BesselRow {
        a,
        x_mid: x,
        value_mid: v.mid_f64(),
        value_rad: v.rad_f64(),
        method: method.into(),
        lemma_check: check.into(),
        pass,
    }
}

pub fn measures_suite(prec: u32) -> Vec<Check> {
    let mut out = Vec::new();
    let comp: Vec<String> = (0..=50).filter(|&m| !verify_composition(m)).map(|m| format!("m={m}")).collect();
    out.push(count_check("X_2m = Y_m o X_2", comp, 51));

    let tiny = 1e-10;
    let inf = MeasureSpec::mu_infinity();
    let orth: Vec<String> = chebyshev_x_all(30)
        .iter()
        .enumerate()
        .filter_map(|(n, x)| {
            let expect = Float::with_val(64, u8::from(n == 0));
            let v = integrate_poly(x, &inf, prec).ok()?;
            (!(v.contains_point(&expect) && v.rad_f64() < tiny)).then(|| format!("n={n}: {v}"))
        })
        .collect();
    out.push(count_check("int X_n dmu_inf = delta_n0", orth, 31));

    let inf2 = MeasureSpec::mu_infinity2();
    let odd: Vec<String> = (0..=10)
        .filter_map(|n| {
            let v = integrate_poly(&poly_q(2 * n + 1), &inf2, prec).ok()?;
            (!(v.contains_point(&Float::new(64)) && v.rad_f64() < tiny)).then(|| format!("n={n}: {v}"))
        })
        .collect();
    out.push(count_check("int Q_2n+1 dmu_inf2 = 0", odd, 11));

    let mut measures = vec![inf, inf2];
    for p in [3, 5, 7] {
        measures.extend([MeasureSpec::mu_p(p).expect("prime"), MeasureSpec::mu_p_squared(p).expect("prime")]);
    }
    let one = crate::poly::IntPolynomial::constant(1);
    let mass: Vec<String> = measures
        .par_iter()
        .filter_map(|m| match crate::chebyshev::integrate_poly_quadrature(&one, m, prec) {
            Ok(v) if v.contains_point(&Float::with_val(64, 1)) && v.rad_f64() < tiny => None,
            Ok(v) => Some(format!("{}: {v}", m.name())),
            Err(e) => Some(format!("{}: {e}", m.name())),
        })
        .collect();
    out.push(count_check("total mass 1", mass, measures.len()));
    out
}
