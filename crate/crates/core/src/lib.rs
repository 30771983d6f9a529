//! Finite abelian probability groups built from fusion rules.
//!
//! The crate turns a fusion-rule tensor into a normalized probability group,
//! computes its characters, primitive idempotents, codegrees and dual
//! hypergroup, forms double-coset quotients, and builds the class algebra
//! with its Burnside-type structure constants. Finite groups and their
//! Drinfeld doubles are provided as a source of test inputs.
//!
//! Numbers that should be exact (fusion coefficients, file literals) are
//! rationals; everything produced by linear algebra is a double-precision
//! complex number compared under a [`Tolerances`] pair.

// Tensor code reads better with explicit indices, and `!(x <= tol)` is used
// on purpose so that NaN fails the comparison.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod classalg;
pub mod error;
pub mod fusion;
pub mod groups;
pub mod hypergroup;
pub mod io;
mod linalg;
pub mod quotient;
pub mod report;
pub mod scalar;

pub use error::{Error, ErrorClass, Result};

use serde::{Deserialize, Serialize};

/// Tolerance pair used by every numerical comparison.
///
/// `eq` bounds accumulated linear-algebra error when two scalars are
/// compared; `int` is the looser bound used when rounding a final value to
/// an integer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub eq: f64,
    pub int: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { eq: 1e-9, int: 1e-6 }
    }
}

impl Tolerances {
    pub fn new(eq: f64, int: f64) -> Result<Self> {
        if !(eq > 0.0 && eq.is_finite() && int > 0.0 && int.is_finite()) {
            return Err(Error::Malformed(format!(
                "tolerances must be positive and finite (eq={eq}, int={int})"
            )));
        }
        Ok(Tolerances { eq, int })
    }
}
