//! Casimir friction between parallel half-space plates in slowly varying
//! relative motion.
//!
//! All computations run in natural units with ħ = k_B = 1; see [`units`] for
//! conversion at the boundary.

// NaN must fail the domain checks, which `!(x > 0.0)` does and `x <= 0.0` does not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Quadrature nodes are quoted to full published precision.
#![allow(clippy::excessive_precision)]

pub mod dissipation;
pub mod error;
pub mod friction;
pub mod oracle;
pub mod quad;
pub mod response;
pub mod trajectory;
pub mod units;

pub use error::{Error, QuadratureError, Result};
