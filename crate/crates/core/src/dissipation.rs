//! Dissipated energy per unit area between two Drude half-spaces.
//!
//! The trajectory enters through the δ-terms of its spectral weight I(ω).
//! Each term at a positive centre c is multiplied by the pair density of the
//! relevant response channel, integrated over the Drude spectrum, and the
//! result is integrated over in-plane wave vectors with the Coulomb kernel
//! and the analytic z-integrals over both half-spaces.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{require, Error, QuadratureError, Result};
use crate::quad::{compensated_sum, try_integrate, Tolerance};
use crate::response::{sinh_ratio, DrudeMetal, ResponseCoefficients, ThermalState};
use crate::trajectory::{velocity_angle, DeltaTerm, SegmentedLoop, Trajectory, WaveVector};

/// Gap, plate densities and temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateConfig {
    pub gap: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub thermal: ThermalState,
}

impl PlateConfig {
    pub fn new(gap: f64, rho1: f64, rho2: f64, thermal: ThermalState) -> Result<Self> {
        require(gap > 0.0 && gap.is_finite(), "gap", || {
            format!("{gap} must be positive")
        })?;
        require(rho1 >= 0.0 && rho1.is_finite(), "rho1", || {
            format!("{rho1} must be non-negative")
        })?;
        require(rho2 >= 0.0 && rho2.is_finite(), "rho2", || {
            format!("{rho2} must be non-negative")
        })?;
        Ok(Self {
            gap,
            rho1,
            rho2,
            thermal,
        })
    }

    /// Both plates made of `metal`, at its electron density.
    pub fn symmetric(gap: f64, metal: &DrudeMetal, thermal: ThermalState) -> Result<Self> {
        Self::new(gap, metal.density, metal.density, thermal)
    }
}

/// Tolerances and cut-offs of the numeric pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    /// Upper wave-number limit in units of 1/d.
    pub k_max_factor: f64,
    /// End of the linear spectral regime; `None` takes the metal's default.
    pub m_max: Option<f64>,
    pub max_subdivisions: usize,
    /// Segmentation budget, see [`crate::trajectory::segmentize`].
    pub max_velocity_change: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            k_max_factor: 40.0,
            m_max: None,
            max_subdivisions: 200,
            max_velocity_change: crate::trajectory::DEFAULT_MAX_VELOCITY_CHANGE,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        require(self.rel_tol > 0.0 && self.rel_tol < 1.0, "rel_tol", || {
            format!("{} must lie in (0, 1)", self.rel_tol)
        })?;
        require(self.k_max_factor > 0.0, "k_max_factor", || {
            format!("{} must be positive", self.k_max_factor)
        })?;
        if let Some(m) = self.m_max {
            require(m > 0.0, "m_max", || format!("{m} must be positive"))?;
        }
        require(self.max_subdivisions > 0, "max_subdivisions", || {
            "must be positive".into()
        })?;
        require(self.max_velocity_change > 0.0, "max_velocity_change", || {
            format!("{} must be positive", self.max_velocity_change)
        })
    }

    fn tolerance(&self, rel: f64) -> Tolerance {
        Tolerance {
            rel,
            abs: 0.0,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

/// Which response channel carries the dissipation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemperatureMode {
    /// Sum-frequency channel C₊ at T = 0.
    ZeroTemperature,
    /// Difference-frequency channel C₋ at T > 0.
    FiniteTemperature,
}

impl TemperatureMode {
    pub fn for_state(state: &ThermalState) -> Self {
        if state.is_zero() {
            Self::ZeroTemperature
        } else {
            Self::FiniteTemperature
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::ZeroTemperature => "T0",
            Self::FiniteTemperature => "finiteT",
        }
    }
}

/// Spectral density m² α_I(m²) used for the oscillator spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpectralModel {
    /// The small-m form D m.
    #[default]
    LinearDrude,
    /// Im[(ε − 1)/(ε + 1)] / (2π² ρ) with the full Drude ε at real frequency.
    HalfSpaceDrude,
}

/// Outcome of [`band_integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandResult {
    /// Dissipated energy per unit area.
    pub energy: f64,
    pub abs_error: f64,
    /// Whether spectral weight beyond `m_max` contributed.
    pub beyond_cutoff: bool,
}

/// ψ̂(z₀, k) = 2π e^{−k|z₀|} / k.
pub fn coulomb_dipole_hat(z0: f64, wv: &WaveVector) -> Result<f64> {
    if wv.k == 0.0 {
        return Err(Error::SingularKernel);
    }
    Ok(TAU * (-wv.k * z0.abs()).exp() / wv.k)
}

/// Ĝ(z₀, q) = (2q²)² ψ̂² = 16π² q² e^{−2q|z₀|}.
pub fn g_kernel(z0: f64, q: f64) -> Result<f64> {
    if !(q > 0.0) {
        return Err(Error::Domain {
            quantity: "q",
            value: q,
            reason: "wave number must be positive",
        });
    }
    Ok(16.0 * PI * PI * q * q * (-2.0 * q * z0.abs()).exp())
}

/// ∫_{z₁>d} ∫_{z₂<0} e^{−2q(z₁−z₂)} dz₁ dz₂ = e^{−2qd}/(2q)².
pub fn halfspace_z_integral(q: f64, d: f64) -> Result<f64> {
    if !(q > 0.0) {
        return Err(Error::Domain {
            quantity: "q",
            value: q,
            reason: "wave number must be positive",
        });
    }
    if !(d >= 0.0) {
        return Err(Error::Domain {
            quantity: "d",
            value: d,
            reason: "gap must be non-negative",
        });
    }
    Ok((-2.0 * q * d).exp() / (4.0 * q * q))
}

/// J = C₋ I(ω₋) + C₊ I(ω₊).
pub fn j_of_omega_v(i_minus: f64, i_plus: f64, coeffs: &ResponseCoefficients) -> f64 {
    coeffs.c_minus * i_minus + coeffs.c_plus * i_plus
}

/// (ε − 1)/(ε + 1), the half-space replacement of 2πρα.
pub fn epsilon_substitution(eps: f64) -> Result<f64> {
    if eps.is_infinite() && eps > 0.0 {
        return Ok(1.0);
    }
    if !(eps > -1.0) {
        return Err(Error::SingularMapping(eps.to_string()));
    }
    Ok((eps - 1.0) / (eps + 1.0))
}

/// Complex form of [`epsilon_substitution`] for dispersive ε.
pub fn epsilon_substitution_complex(eps: Complex64) -> Result<Complex64> {
    let denom = eps + 1.0;
    if denom.norm() == 0.0 || !eps.is_finite() {
        return Err(Error::SingularMapping(eps.to_string()));
    }
    Ok((eps - 1.0) / denom)
}

/// Pair density of one response channel integrated over the spectrum of
/// both plates, as a function of the channel frequency.
#[derive(Debug, Clone, Copy)]
pub struct ChannelKernel {
    metal: DrudeMetal,
    model: SpectralModel,
    mode: TemperatureMode,
    beta: f64,
    rho_product: f64,
    m_max: f64,
    tol: Tolerance,
}

impl ChannelKernel {
    pub fn new(
        metal: &DrudeMetal,
        config: &PlateConfig,
        spec: &QuadratureSpec,
        mode: TemperatureMode,
        model: SpectralModel,
    ) -> Result<Self> {
        spec.validate()?;
        if TemperatureMode::for_state(&config.thermal) != mode {
            return Err(Error::ThermalMode { mode: mode.name() });
        }
        Ok(Self {
            metal: *metal,
            model,
            mode,
            beta: config.thermal.beta(),
            rho_product: config.rho1 * config.rho2,
            m_max: spec.m_max.unwrap_or_else(|| metal.default_m_max()),
            tol: spec.tolerance(0.01 * spec.rel_tol),
        })
    }

    /// m² α_I(m²).
    pub fn density(&self, m: f64) -> f64 {
        match self.model {
            SpectralModel::LinearDrude => self.metal.dissipation_constant() * m,
            SpectralModel::HalfSpaceDrude => {
                if m == 0.0 {
                    return 0.0;
                }
                let eps = crate::response::drude_epsilon_real(m, &self.metal);
                let mapped = (eps - 1.0) / (eps + 1.0);
                mapped.im / (2.0 * PI * PI * self.metal.density)
            }
        }
    }

    /// Largest spectral energy that carries weight at channel frequency `c`.
    fn spectral_reach(&self, c: f64) -> f64 {
        match self.mode {
            TemperatureMode::ZeroTemperature => c,
            TemperatureMode::FiniteTemperature => c + 10.0 / self.beta,
        }
    }

    pub fn exceeds_cutoff(&self, c: f64) -> bool {
        self.spectral_reach(c) > self.m_max
    }

    /// B(c): pair density at channel frequency `c` > 0.
    pub fn weight(&self, c: f64) -> Result<f64> {
        if !(c > 0.0) {
            return Ok(0.0);
        }
        let est = match self.mode {
            // 2 ρ₁ρ₂ ∫₀^c σ(m) σ(c − m) dm.
            TemperatureMode::ZeroTemperature => try_integrate(
                |m| Ok::<_, Error>(self.density(m) * self.density(c - m)),
                &[0.0, c],
                self.tol,
            ),
            // 2 ρ₁ρ₂ ∫₀^∞ σ(m) σ(m + c) sinh(βc/2) / (sinh(βm/2) sinh(β(m+c)/2)) dm,
            // both orderings of the two plates included.
            TemperatureMode::FiniteTemperature => {
                let s = 1.0 / self.beta;
                let edges = [0.0, 0.5 * s, 2.0 * s, 8.0 * s, 24.0 * s, 80.0 * s];
                try_integrate(
                    |m| {
                        let hb = 0.5 * self.beta;
                        Ok::<_, Error>(self.density(m) * self.density(m + c) * sinh_ratio(hb * m, hb * (m + c), hb * c))
                    },
                    &edges,
                    self.tol,
                )
            }
        };
        Ok(2.0 * self.rho_product * accuracy(est)?.value)
    }
}

fn accuracy(est: Result<crate::quad::Estimate>) -> Result<crate::quad::Estimate> {
    est.map_err(|e| match e {
        Error::Quadrature(QuadratureError::NotConverged {
            estimate, error_bound, ..
        }) => Error::Accuracy {
            estimate,
            error: error_bound,
            target: f64::NAN,
        },
        other => other,
    })
}

/// Σ over positive δ-centres of weight · B(centre).
fn channel_sum(terms: &[DeltaTerm], kernel: &ChannelKernel) -> Result<f64> {
    let mut acc = crate::quad::NeumaierSum::default();
    for t in terms.iter().filter(|t| t.center > 0.0) {
        acc.add(t.weight * kernel.weight(t.center)?);
    }
    Ok(acc.sum())
}

/// Initial φ-panels: the kinks of |k·u| at φ = φ_u ± π/2 for each distinct
/// segment direction, or a uniform grid for many directions.
fn angle_breakpoints(lp: &SegmentedLoop) -> Vec<f64> {
    const MAX_KINKS: usize = 32;
    let mut pts = vec![0.0, TAU];
    let mut angles: Vec<f64> = lp
        .segments()
        .iter()
        .filter(|s| s.qdot() > 0.0)
        .map(velocity_angle)
        .collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if angles.len() * 2 > MAX_KINKS {
        return crate::quad::uniform_breakpoints(0.0, TAU, MAX_KINKS);
    }
    for a in angles {
        for shift in [0.5 * PI, 1.5 * PI] {
            let p = (a + shift).rem_euclid(TAU);
            if p > 1e-12 && p < TAU - 1e-12 {
                pts.push(p);
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    pts
}

/// Total dissipated energy per unit area with the small-m Drude density.
pub fn band_integrate(
    traj: &Trajectory,
    config: &PlateConfig,
    metal: &DrudeMetal,
    spec: &QuadratureSpec,
    mode: TemperatureMode,
) -> Result<BandResult> {
    band_integrate_with(traj, config, metal, spec, mode, SpectralModel::LinearDrude)
}

/// [`band_integrate`] with a choice of spectral density.
pub fn band_integrate_with(
    traj: &Trajectory,
    config: &PlateConfig,
    metal: &DrudeMetal,
    spec: &QuadratureSpec,
    mode: TemperatureMode,
    model: SpectralModel,
) -> Result<BandResult> {
    let kernel = ChannelKernel::new(metal, config, spec, mode, model)?;
    let lp = SegmentedLoop::new(traj, spec.max_velocity_change)?;
    let d = config.gap;
    let k_max = spec.k_max_factor / d;
    let mut k_edges = vec![0.0];
    let mut edge = 0.125 / d;
    while edge < k_max {
        k_edges.push(edge);
        edge *= 2.0;
    }
    k_edges.push(k_max);
    let k_tol = spec.tolerance(0.1 * spec.rel_tol);
    let phi_tol = spec.tolerance(spec.rel_tol);
    let norm = 1.0 / (TAU * TAU);

    let fastest = lp
        .segments()
        .iter()
        .map(|s| s.qdot() * s.speed_scale)
        .fold(0.0, f64::max);
    let beyond_cutoff = kernel.exceeds_cutoff(k_max * fastest);

    let at_angle = |phi: f64| -> Result<(f64, f64)> {
        let mut terms = Vec::with_capacity(2 * lp.segments().len());
        let est = try_integrate(
            |k: f64| {
                if k == 0.0 {
                    return Ok(0.0);
                }
                let wv = WaveVector { k, phi };
                terms.clear();
                lp.delta_terms_into(&wv, &mut terms);
                let j = channel_sum(&terms, &kernel)?;
                if j == 0.0 {
                    return Ok(0.0);
                }
                Ok::<_, Error>(norm * k * g_kernel(0.0, k)? * halfspace_z_integral(k, d)? * j)
            },
            &k_edges,
            k_tol,
        );
        let est = accuracy(est)?;
        Ok((est.value, est.abs_error))
    };

    let panels = angle_breakpoints(&lp);
    let pieces: Vec<Result<(f64, f64)>> = panels
        .par_windows(2)
        .map(|w| {
            let mut inner_error = 0.0f64;
            let est = try_integrate(
                |phi| {
                    let (v, e) = at_angle(phi)?;
                    inner_error = inner_error.max(e);
                    Ok::<_, Error>(v)
                },
                w,
                phi_tol,
            );
            let est = accuracy(est)?;
            Ok((est.value, est.abs_error + inner_error * (w[1] - w[0])))
        })
        .collect();
    let mut energies = Vec::with_capacity(pieces.len());
    let mut errors = Vec::with_capacity(pieces.len());
    for p in pieces {
        let (v, e) = p?;
        energies.push(v);
        errors.push(e);
    }
    let energy = compensated_sum(energies);
    let abs_error = compensated_sum(errors);
    if !(energy >= 0.0) {
        return Err(Error::NumericRange("dissipated energy"));
    }
    Ok(BandResult {
        energy,
        abs_error,
        beyond_cutoff,
    })
}
