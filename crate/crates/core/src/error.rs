use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error bound {error_bound:e})"
    )]
    NotConverged {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },
    #[error("integrand produced a non-finite value")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{quantity} = {value:e} is outside the domain ({reason})")]
    Domain {
        quantity: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("numeric range exceeded while evaluating {0}")]
    NumericRange(&'static str),

    #[error("degenerate interval matching: angular frequency must be non-zero")]
    DegenerateMatching,

    #[error("trajectory is not a closed loop: end point misses start by {gap:e} (tolerance {tolerance:e})")]
    OpenLoop { gap: f64, tolerance: f64 },

    #[error("invalid trajectory: {0}")]
    Trajectory(String),

    #[error("wave-vector magnitude must be positive for the Coulomb kernel")]
    SingularKernel,

    #[error("dielectric value {0} maps onto the pole of (eps - 1)/(eps + 1)")]
    SingularMapping(String),

    #[error("mode {mode} is inconsistent with the thermal state of the plates")]
    ThermalMode { mode: &'static str },

    #[error("accuracy target missed: estimate {estimate:e} with error {error:e} (target {target:e})")]
    Accuracy { estimate: f64, error: f64, target: f64 },

    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn require(cond: bool, name: &'static str, reason: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: reason() })
    }
}
