//! Chebyshev polynomials of the second kind `X_n`, the derived families
//! `Y_m` and `Q_m`, the four limiting measures, and certified integration
//! against them.

mod bounds;
mod measures;
mod quadrature;

pub use bounds::{derivative_bound_check, DerivativeBounds, C_Q_COMBINED, C_Q_ENDPOINT, C_X_COMBINED, GRID_POINTS};
pub use measures::{cdf, discrepancy_grid, integrate_poly, integrate_poly_quadrature, MeasureKind, MeasureSpec};
pub use quadrature::{gauss_legendre, GaussLegendre, QuadratureReport};

use rug::Integer;

use crate::poly::IntPolynomial;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChebyshevError {
    #[error("quadrature did not reach tolerance {tol:e} with {panels} panels")]
    QuadratureNotConverged { tol: f64, panels: usize },
    #[error("polynomial degree {degree} exceeds the cap {cap}")]
    DegreeTooLarge { degree: usize, cap: usize },
    #[error("invalid prime {0}")]
    InvalidPrime(u64),
}

/// Largest polynomial degree accepted by the integration routines.
pub const MAX_DEGREE: usize = 400;

/// `X_0 = 1`, `X_1 = x`, `X_{n+1} = x X_n - X_{n-1}`.
pub fn chebyshev_x(n: usize) -> IntPolynomial {
    chebyshev_x_all(n).pop().expect("at least X_0")
}

/// `X_0, ..., X_n`.
pub fn chebyshev_x_all(n: usize) -> Vec<IntPolynomial> {
    three_term(n, &IntPolynomial::x())
}

/// `Y_0 = 1`, `Y_1 = x`, `Y_m = (x - 1) Y_{m-1} - Y_{m-2}`.
pub fn poly_y(m: usize) -> IntPolynomial {
    poly_y_all(m).pop().expect("at least Y_0")
}

pub fn poly_y_all(m: usize) -> Vec<IntPolynomial> {
    three_term(m, &IntPolynomial::from_i64s(&[-1, 1]))
}

fn three_term(n: usize, mult: &IntPolynomial) -> Vec<IntPolynomial> {
    let mut out = vec![IntPolynomial::constant(1)];
    if n >= 1 {
        out.push(IntPolynomial::x());
    }
    for i in 2..=n {
        let next = &(mult * &out[i - 1]) - &out[i - 2];
        out.push(next);
    }
    out
}

/// `Q_m = Y_m + Y_{m-2} + ...` down to `Y_0` or `Y_1`.
pub fn poly_q(m: usize) -> IntPolynomial {
    let ys = poly_y_all(m);
    let mut acc = IntPolynomial::zero();
    for y in ys.iter().skip(m % 2).step_by(2) {
        acc = &acc + y;
    }
    acc
}

/// `X_{2m} = Y_m(X_2)`, checked coefficient by coefficient.
pub fn verify_composition(m: usize) -> bool {
    chebyshev_x(2 * m) == poly_y(m).compose(&chebyshev_x(2))
}

/// Coefficients `a_j` with `p = sum_j a_j X_j`. Exact because every `X_j` is monic.
pub fn x_basis_coefficients(p: &IntPolynomial) -> Vec<Integer> {
    let Some(d) = p.degree() else {
        return Vec::new();
    };
    let xs = chebyshev_x_all(d);
    let mut rest = p.clone();
    let mut out = vec![Integer::new(); d + 1];
    while let Some(deg) = rest.degree() {
        let lead = rest.leading().expect("nonzero").clone();
        rest = &rest - &xs[deg].scale(&lead);
        out[deg] = lead;
    }
    out
}
