//! Unit-suffixed quantities and conversion into the internal unit system.
//!
//! Internally every computation runs with ħ = k_B = 1. Inputs are either
//! already in such natural units (suffix `nat`) or given in SI-style units,
//! in which case lengths are kept in metres, times in seconds and energies
//! measured in ħ/s. The two systems must not be mixed within one run.

use std::fmt;

use thiserror::Error;

/// Reduced Planck constant in J s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Boltzmann constant in J/K.
pub const K_B_SI: f64 = 1.380_649e-23;
/// Elementary charge in C (one electron-volt in J).
pub const EV_SI: f64 = 1.602_176_634e-19;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitSystem {
    Natural,
    Si,
}

impl fmt::Display for UnitSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Natural => f.write_str("natural (hbar = kB = 1)"),
            Self::Si => f.write_str("SI (m, s; energies in J)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Time,
    /// Angular frequency; also used for angular velocity.
    Frequency,
    Speed,
    /// Number density (inverse volume).
    Density,
    /// Temperature, converted to k_B T.
    Temperature,
    /// Inverse temperature β = 1/(k_B T).
    InverseTemperature,
    /// Drude dissipation constant ν/(ρ(πω_p)²): volume times time.
    DissipationConstant,
    Dimensionless,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Length => "length",
            Self::Time => "time",
            Self::Frequency => "angular frequency",
            Self::Speed => "speed",
            Self::Density => "number density",
            Self::Temperature => "temperature",
            Self::InverseTemperature => "inverse temperature",
            Self::DissipationConstant => "dissipation constant",
            Self::Dimensionless => "dimensionless number",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitError {
    #[error("missing numeric value in `{0}`")]
    MissingValue(String),
    #[error("missing unit suffix in `{0}` (use `nat` for natural units)")]
    MissingUnit(String),
    #[error("unknown unit `{unit}` for a {dimension}")]
    UnknownUnit { unit: String, dimension: Dimension },
    #[error("mixed unit systems: {first} and {second}")]
    Mixed { first: UnitSystem, second: UnitSystem },
}

/// A parsed value already converted into internal units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub system: UnitSystem,
}

fn si_factor(dimension: Dimension, unit: &str) -> Option<f64> {
    use Dimension::*;
    let f = match (dimension, unit) {
        (Length, "m") => 1.0,
        (Length, "cm") => 1e-2,
        (Length, "mm") => 1e-3,
        (Length, "um") => 1e-6,
        (Length, "nm") => 1e-9,
        (Length, "pm") => 1e-12,
        (Length, "A") => 1e-10,
        (Time, "s") => 1.0,
        (Time, "ms") => 1e-3,
        (Time, "us") => 1e-6,
        (Time, "ns") => 1e-9,
        (Time, "ps") => 1e-12,
        (Time, "fs") => 1e-15,
        (Frequency, "rad/s") | (Frequency, "1/s") => 1.0,
        (Frequency, "Hz") => std::f64::consts::TAU,
        (Frequency, "THz") => std::f64::consts::TAU * 1e12,
        (Frequency, "eV") => EV_SI / HBAR_SI,
        (Frequency, "meV") => 1e-3 * EV_SI / HBAR_SI,
        (Speed, "m/s") => 1.0,
        (Speed, "km/s") => 1e3,
        (Density, "m^-3") => 1.0,
        (Density, "cm^-3") => 1e6,
        (Temperature, "K") => K_B_SI / HBAR_SI,
        (InverseTemperature, "s") => 1.0,
        (InverseTemperature, "1/eV") => HBAR_SI / EV_SI,
        (InverseTemperature, "1/K") => HBAR_SI / K_B_SI,
        (DissipationConstant, "m^3 s") => 1.0,
        (Dimensionless, "1") => 1.0,
        _ => return None,
    };
    Some(f)
}

/// Split `"1.5e-9 m"` or `"1.5e-9m"` into the number and the unit.
fn split_number(text: &str) -> Option<(f64, &str)> {
    let text = text.trim();
    if let Some((num, unit)) = text.split_once(char::is_whitespace) {
        if let Ok(v) = num.parse::<f64>() {
            return Some((v, unit.trim()));
        }
    }
    // Longest prefix that parses as a float.
    let mut best = None;
    for (i, _) in text.char_indices().skip(1).chain(std::iter::once((text.len(), ' '))) {
        if let Ok(v) = text[..i].parse::<f64>() {
            best = Some((v, text[i..].trim()));
        }
    }
    best
}

/// Parse a value with a mandatory unit suffix.
pub fn parse_quantity(text: &str, dimension: Dimension) -> Result<Quantity, UnitError> {
    let (value, unit) = split_number(text).ok_or_else(|| UnitError::MissingValue(text.to_string()))?;
    if unit.is_empty() {
        if dimension == Dimension::Dimensionless {
            return Ok(Quantity {
                value,
                system: UnitSystem::Natural,
            });
        }
        return Err(UnitError::MissingUnit(text.to_string()));
    }
    parse_unit(unit, dimension).map(|(factor, system)| Quantity {
        value: value * factor,
        system,
    })
}

/// Parse a bare unit token or `"<scale> <unit>"` into a conversion factor.
pub fn parse_scale(text: &str, dimension: Dimension) -> Result<Quantity, UnitError> {
    match split_number(text) {
        Some(_) => parse_quantity(text, dimension),
        None => parse_unit(text.trim(), dimension).map(|(value, system)| Quantity { value, system }),
    }
}

fn parse_unit(unit: &str, dimension: Dimension) -> Result<(f64, UnitSystem), UnitError> {
    if unit == "nat" {
        return Ok((1.0, UnitSystem::Natural));
    }
    si_factor(dimension, unit)
        .map(|f| (f, UnitSystem::Si))
        .ok_or_else(|| UnitError::UnknownUnit {
            unit: unit.to_string(),
            dimension,
        })
}

/// Tracks the unit system seen so far and rejects mixing.
#[derive(Debug, Clone, Copy, Default)]
pub struct SystemGuard {
    seen: Option<UnitSystem>,
}

impl SystemGuard {
    pub fn admit(&mut self, q: Quantity) -> Result<f64, UnitError> {
        self.admit_system(q.system)?;
        Ok(q.value)
    }

    pub fn admit_system(&mut self, system: UnitSystem) -> Result<(), UnitError> {
        match self.seen {
            None => {
                self.seen = Some(system);
                Ok(())
            }
            Some(first) if first == system => Ok(()),
            Some(first) => Err(UnitError::Mixed { first, second: system }),
        }
    }

    pub fn system(&self) -> UnitSystem {
        self.seen.unwrap_or(UnitSystem::Natural)
    }
}

/// Output scaling of derived quantities from internal units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derived {
    /// Force per unit area: Pa in SI.
    Pressure,
    /// Torque: N m in SI.
    Torque,
    /// Energy per unit area: J/m² in SI.
    EnergyPerArea,
    /// Speed: m/s in SI.
    Speed,
    /// Angular velocity: rad/s in SI.
    AngularVelocity,
    /// Length: m in SI.
    Length,
}

impl Derived {
    pub fn factor(self, system: UnitSystem) -> f64 {
        match (system, self) {
            (UnitSystem::Natural, _) => 1.0,
            (UnitSystem::Si, Self::Pressure | Self::Torque | Self::EnergyPerArea) => HBAR_SI,
            (UnitSystem::Si, _) => 1.0,
        }
    }

    pub fn label(self, system: UnitSystem) -> &'static str {
        match (system, self) {
            (UnitSystem::Natural, _) => "nat",
            (UnitSystem::Si, Self::Pressure) => "Pa",
            (UnitSystem::Si, Self::Torque) => "N m",
            (UnitSystem::Si, Self::EnergyPerArea) => "J/m^2",
            (UnitSystem::Si, Self::Speed) => "m/s",
            (UnitSystem::Si, Self::AngularVelocity) => "rad/s",
            (UnitSystem::Si, Self::Length) => "m",
        }
    }
}
