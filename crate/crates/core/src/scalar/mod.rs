//! Numeric tower: exact rationals, double-precision complex values, the
//! scalar-literal language used in input files, and lattice membership.

mod expr;
mod lattice;

pub use expr::{literal_for, parse_scalar, ScalarExpr};
pub use lattice::Lattice;

/// Exact rational number in reduced form with a positive denominator.
pub type Rational = num::rational::Ratio<i64>;

/// Double-precision complex number. Equality is always tolerance based.
pub type ApproxComplex = num::complex::Complex64;

pub fn c(re: f64, im: f64) -> ApproxComplex {
    ApproxComplex::new(re, im)
}

pub fn real(re: f64) -> ApproxComplex {
    ApproxComplex::new(re, 0.0)
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Evaluates a scalar expression; shorthand for `parse_scalar(text)?.eval()`.
pub fn eval_str(text: &str) -> crate::Result<ApproxComplex> {
    parse_scalar(text)?.eval()
}

/// `|a - b| <= tol` in the complex modulus.
pub fn approx_eq(a: ApproxComplex, b: ApproxComplex, tol: f64) -> bool {
    (a - b).norm() <= tol
}

/// Returns the nearest integer when `x` is a non-negative integer within `tol`.
pub fn is_nonneg_integer(x: ApproxComplex, tol: f64) -> Option<i64> {
    let r = x.re.round();
    if x.im.abs() <= tol && (x.re - r).abs() <= tol && r >= 0.0 && r < i64::MAX as f64 {
        Some(r as i64)
    } else {
        None
    }
}

/// Returns the nearest integer (of either sign) when `x` is an integer within `tol`.
pub fn nearest_integer(x: ApproxComplex, tol: f64) -> Option<i64> {
    let r = x.re.round();
    if x.im.abs() <= tol && (x.re - r).abs() <= tol && r.abs() < i64::MAX as f64 {
        Some(r as i64)
    } else {
        None
    }
}
