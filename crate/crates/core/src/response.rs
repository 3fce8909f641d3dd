//! Kubo response of a coupled pair of harmonic oscillators and the Drude
//! description of a metal half-space.
//!
//! Everything here is in natural units with ħ = k_B = 1, so energies and
//! angular frequencies are interchangeable and β is an inverse frequency.

use num_complex::Complex64;

use crate::error::{require, Error, Result};

/// Static polarizabilities and eigenfrequencies of two oscillators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorPair {
    pub alpha1: f64,
    pub alpha2: f64,
    pub omega1: f64,
    pub omega2: f64,
}

impl OscillatorPair {
    pub fn new(alpha1: f64, alpha2: f64, omega1: f64, omega2: f64) -> Result<Self> {
        require(omega1 > 0.0 && omega1.is_finite(), "omega1", || {
            format!("{omega1} must be positive")
        })?;
        require(omega2 > 0.0 && omega2.is_finite(), "omega2", || {
            format!("{omega2} must be positive")
        })?;
        require(alpha1 >= 0.0 && alpha1.is_finite(), "alpha1", || {
            format!("{alpha1} must be non-negative")
        })?;
        require(alpha2 >= 0.0 && alpha2.is_finite(), "alpha2", || {
            format!("{alpha2} must be non-negative")
        })?;
        Ok(Self {
            alpha1,
            alpha2,
            omega1,
            omega2,
        })
    }

    /// ω₊ = ω₁ + ω₂.
    pub fn omega_plus(&self) -> f64 {
        self.omega1 + self.omega2
    }

    /// ω₋ = |ω₁ − ω₂|.
    pub fn omega_minus(&self) -> f64 {
        (self.omega1 - self.omega2).abs()
    }
}

/// Temperature of the plates. Zero temperature is kept distinct from a large
/// but finite β so the hyperbolic ratios can be taken in their limit form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThermalState {
    ZeroTemperature,
    Finite { beta: f64 },
}

impl ThermalState {
    pub fn from_beta(beta: f64) -> Result<Self> {
        if beta == f64::INFINITY {
            return Ok(Self::ZeroTemperature);
        }
        require(beta > 0.0 && beta.is_finite(), "beta", || {
            format!("{beta} must be positive")
        })?;
        Ok(Self::Finite { beta })
    }

    pub fn from_temperature(temperature: f64) -> Result<Self> {
        require(temperature >= 0.0 && temperature.is_finite(), "temperature", || {
            format!("{temperature} must be non-negative")
        })?;
        if temperature == 0.0 {
            Ok(Self::ZeroTemperature)
        } else {
            Self::from_beta(1.0 / temperature)
        }
    }

    /// β, with `f64::INFINITY` standing for T = 0.
    pub fn beta(&self) -> f64 {
        match *self {
            Self::ZeroTemperature => f64::INFINITY,
            Self::Finite { beta } => beta,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::ZeroTemperature)
    }
}

/// Thermal weights C₋, C₊ and the common factor H of the response function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseCoefficients {
    pub c_minus: f64,
    pub c_plus: f64,
    pub h_factor: f64,
}

/// `2 sinh(x) = e^x (1 - e^{-2x})`, returned as (exponent, mantissa) so that
/// products of several such terms never overflow.
fn sinh_parts(x: f64) -> (f64, f64) {
    (x, -(-2.0 * x).exp_m1() * 0.5)
}

/// sinh(c) / (sinh(a) sinh(b)) for a, b > 0 and c ≥ 0.
pub(crate) fn sinh_ratio(a: f64, b: f64, c: f64) -> f64 {
    if c == 0.0 {
        return 0.0;
    }
    let (ea, ma) = sinh_parts(a);
    let (eb, mb) = sinh_parts(b);
    let (ec, mc) = sinh_parts(c);
    (ec - ea - eb).exp() * mc / (ma * mb)
}

/// C± = H sinh(βω±/2), H = ω₁ω₂α₁α₂ / (4 sinh(βω₁/2) sinh(βω₂/2)).
pub fn coefficients(pair: &OscillatorPair, state: &ThermalState) -> Result<ResponseCoefficients> {
    let prefactor = 0.25 * pair.omega1 * pair.omega2 * pair.alpha1 * pair.alpha2;
    let coeffs = match *state {
        ThermalState::ZeroTemperature => ResponseCoefficients {
            // sinh(a + b) / (sinh a sinh b) -> 2 while the difference channel
            // is exponentially suppressed.
            c_minus: 0.0,
            c_plus: 2.0 * prefactor,
            h_factor: 0.0,
        },
        ThermalState::Finite { beta } => {
            let a = 0.5 * beta * pair.omega1;
            let b = 0.5 * beta * pair.omega2;
            let (ea, ma) = sinh_parts(a);
            let (eb, mb) = sinh_parts(b);
            ResponseCoefficients {
                c_minus: prefactor * sinh_ratio(a, b, 0.5 * beta * pair.omega_minus()),
                c_plus: prefactor * sinh_ratio(a, b, 0.5 * beta * pair.omega_plus()),
                h_factor: prefactor * (-ea - eb).exp() / (ma * mb),
            }
        }
    };
    if coeffs.c_minus.is_finite() && coeffs.c_plus.is_finite() && coeffs.h_factor.is_finite() {
        Ok(coeffs)
    } else {
        Err(Error::NumericRange("response coefficients"))
    }
}

/// Causal response function φ(t) = C₋ sin(ω₋t) + C₊ sin(ω₊t) for t ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseFunction {
    pub coefficients: ResponseCoefficients,
    pub omega_minus: f64,
    pub omega_plus: f64,
}

impl ResponseFunction {
    pub fn new(pair: &OscillatorPair, state: &ThermalState) -> Result<Self> {
        Ok(Self {
            coefficients: coefficients(pair, state)?,
            omega_minus: pair.omega_minus(),
            omega_plus: pair.omega_plus(),
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 {
            0.0
        } else {
            self.analytic(t)
        }
    }

    /// The sine series without the causal cut-off.
    pub fn analytic(&self, t: f64) -> f64 {
        self.coefficients.c_minus * (self.omega_minus * t).sin()
            + self.coefficients.c_plus * (self.omega_plus * t).sin()
    }

    /// (weight, frequency) of each channel, difference channel first.
    pub fn channels(&self) -> [(f64, f64); 2] {
        [
            (self.coefficients.c_minus, self.omega_minus),
            (self.coefficients.c_plus, self.omega_plus),
        ]
    }
}

pub fn phi(t: f64, pair: &OscillatorPair, state: &ThermalState) -> Result<f64> {
    Ok(ResponseFunction::new(pair, state)?.eval(t))
}

/// Drude metal: plasma frequency ω_p, relaxation rate ν and free-electron
/// density ρ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeMetal {
    pub plasma_frequency: f64,
    pub relaxation: f64,
    pub density: f64,
}

impl DrudeMetal {
    pub fn new(plasma_frequency: f64, relaxation: f64, density: f64) -> Result<Self> {
        require(
            plasma_frequency > 0.0 && plasma_frequency.is_finite(),
            "plasma_frequency",
            || format!("{plasma_frequency} must be positive"),
        )?;
        require(relaxation > 0.0 && relaxation.is_finite(), "relaxation", || {
            format!("{relaxation} must be positive")
        })?;
        require(density > 0.0 && density.is_finite(), "density", || {
            format!("{density} must be positive")
        })?;
        Ok(Self {
            plasma_frequency,
            relaxation,
            density,
        })
    }

    /// The metal with dissipation constant `d` at relaxation rate ν and
    /// density ρ, i.e. ω_p = √(ν/(ρd))/π.
    pub fn from_dissipation_constant(d: f64, relaxation: f64, density: f64) -> Result<Self> {
        require(d > 0.0 && d.is_finite(), "dissipation_constant", || {
            format!("{d} must be positive")
        })?;
        require(density > 0.0 && density.is_finite(), "density", || {
            format!("{density} must be positive")
        })?;
        let plasma_frequency = (relaxation / (density * d)).sqrt() / std::f64::consts::PI;
        Self::new(plasma_frequency, relaxation, density)
    }

    /// Same metal at another electron density.
    pub fn with_density(&self, density: f64) -> Result<Self> {
        Self::new(self.plasma_frequency, self.relaxation, density)
    }

    /// D = ν / (ρ (π ω_p)²).
    pub fn dissipation_constant(&self) -> f64 {
        self.relaxation / (self.density * (std::f64::consts::PI * self.plasma_frequency).powi(2))
    }

    /// Upper end of the linear small-m regime of the spectral density.
    pub fn default_m_max(&self) -> f64 {
        0.1 * self.plasma_frequency
    }
}

/// ε(ξ) = 1 + ω_p² / (ξ(ξ + ν)) at imaginary frequency ξ > 0.
pub fn drude_epsilon(xi: f64, metal: &DrudeMetal) -> Result<f64> {
    if !(xi > 0.0) {
        return Err(Error::Domain {
            quantity: "xi",
            value: xi,
            reason: "imaginary frequency must be positive",
        });
    }
    if xi.is_infinite() {
        return Ok(1.0);
    }
    Ok(1.0 + metal.plasma_frequency.powi(2) / (xi * (xi + metal.relaxation)))
}

/// Continuation of the Drude function to real frequency, ε(ω) = 1 − ω_p²/(ω(ω + iν)).
pub fn drude_epsilon_real(omega: f64, metal: &DrudeMetal) -> Complex64 {
    let denom = Complex64::new(omega * omega, omega * metal.relaxation);
    Complex64::new(1.0, 0.0) - metal.plasma_frequency.powi(2) / denom
}

/// A spectral-density value together with whether it was evaluated beyond
/// the small-m cutoff where the linear form stops being trustworthy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySample {
    pub value: f64,
    pub beyond_cutoff: bool,
}

/// m² α_I(m²) = D m.
pub fn alpha_imag_density(m: f64, metal: &DrudeMetal, m_max: f64) -> Result<DensitySample> {
    if !(m >= 0.0) || !m.is_finite() {
        return Err(Error::Domain {
            quantity: "m",
            value: m,
            reason: "spectral variable must be finite and non-negative",
        });
    }
    Ok(DensitySample {
        value: metal.dissipation_constant() * m,
        beyond_cutoff: m > m_max,
    })
}
