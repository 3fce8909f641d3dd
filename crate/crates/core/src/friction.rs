//! Friction force laws for Drude plates and the torque on a rotating disc.

use std::f64::consts::PI;

use crate::dissipation::{band_integrate, PlateConfig, QuadratureSpec, TemperatureMode};
use crate::error::{require, Error, Result};
use crate::quad::{compensated_sum, try_integrate, Tolerance};
use crate::response::DrudeMetal;
use crate::trajectory::Trajectory;

/// Disc of radius R rotating at angular velocity Ω above an infinite plate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscSpec {
    pub radius: f64,
    pub omega: f64,
}

impl DiscSpec {
    pub fn new(radius: f64, omega: f64) -> Result<Self> {
        require(radius > 0.0 && radius.is_finite(), "radius", || {
            format!("{radius} must be positive")
        })?;
        require(omega.is_finite(), "omega", || format!("{omega} must be finite"))?;
        Ok(Self { radius, omega })
    }

    /// Speed at the rim, |Ω| R.
    pub fn rim_speed(&self) -> f64 {
        self.omega.abs() * self.radius
    }
}

/// Friction force per unit area as a function of the (signed) sliding speed.
pub trait ForceLaw: Sync {
    fn force(&self, v: f64) -> f64;

    /// Speeds at which the law is not smooth.
    fn kinks(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Largest |v| for which the law is defined.
    fn max_speed(&self) -> f64 {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawKind {
    /// F = −C_P v³.
    Cubic,
    /// F = −C v.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrictionLaw {
    pub kind: LawKind,
    pub coefficient: f64,
}

impl FrictionLaw {
    pub fn new(kind: LawKind, coefficient: f64) -> Result<Self> {
        require(coefficient >= 0.0 && coefficient.is_finite(), "coefficient", || {
            format!("{coefficient} must be non-negative")
        })?;
        Ok(Self { kind, coefficient })
    }
}

impl ForceLaw for FrictionLaw {
    fn force(&self, v: f64) -> f64 {
        match self.kind {
            LawKind::Cubic => -self.coefficient * v * v * v,
            LawKind::Linear => -self.coefficient * v,
        }
    }
}

/// Piecewise-linear F(v) from a table on v ≥ 0, continued as an odd function.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedLaw {
    speeds: Vec<f64>,
    forces: Vec<f64>,
}

impl TabulatedLaw {
    pub fn new(speeds: Vec<f64>, forces: Vec<f64>) -> Result<Self> {
        require(speeds.len() == forces.len(), "table", || {
            format!("{} speeds but {} forces", speeds.len(), forces.len())
        })?;
        require(speeds.len() >= 2, "table", || "need at least two rows".into())?;
        require(speeds[0] == 0.0, "table", || "first speed must be 0".into())?;
        require(speeds.windows(2).all(|w| w[1] > w[0]), "table", || {
            "speeds must increase strictly".into()
        })?;
        require(forces.iter().all(|f| f.is_finite()), "table", || {
            "forces must be finite".into()
        })?;
        Ok(Self { speeds, forces })
    }
}

impl ForceLaw for TabulatedLaw {
    fn force(&self, v: f64) -> f64 {
        let s = v.abs();
        let i = self.speeds.partition_point(|&x| x <= s).clamp(1, self.speeds.len() - 1);
        let (v0, v1) = (self.speeds[i - 1], self.speeds[i]);
        let (f0, f1) = (self.forces[i - 1], self.forces[i]);
        let f = f0 + (f1 - f0) * (s - v0) / (v1 - v0);
        if v < 0.0 {
            -f
        } else {
            f
        }
    }

    fn kinks(&self) -> Vec<f64> {
        self.speeds[1..self.speeds.len() - 1].to_vec()
    }

    fn max_speed(&self) -> f64 {
        self.speeds[self.speeds.len() - 1]
    }
}

impl<F: Fn(f64) -> f64 + Sync> ForceLaw for F {
    fn force(&self, v: f64) -> f64 {
        self(v)
    }
}

/// C_P = 15π²/(64 d⁶) ρ₁ρ₂ D² from explicit ρ and D.
pub fn coefficient_t0_raw(rho1: f64, rho2: f64, dissipation_constant: f64, gap: f64) -> f64 {
    15.0 * PI * PI / (64.0 * gap.powi(6)) * rho1 * rho2 * dissipation_constant.powi(2)
}

/// C = π⁴/(4 β² d⁴) ρ₁ρ₂ D² from explicit ρ, D and β.
pub fn coefficient_finite_t_raw(rho1: f64, rho2: f64, dissipation_constant: f64, gap: f64, beta: f64) -> f64 {
    PI.powi(4) / (4.0 * beta * beta * gap.powi(4)) * rho1 * rho2 * dissipation_constant.powi(2)
}

/// Coefficient of the cubic zero-temperature law.
pub fn coefficient_t0(metal: &DrudeMetal, config: &PlateConfig) -> f64 {
    coefficient_t0_raw(config.rho1, config.rho2, metal.dissipation_constant(), config.gap)
}

/// Coefficient of the linear finite-temperature law.
pub fn coefficient_finite_t(metal: &DrudeMetal, config: &PlateConfig) -> Result<f64> {
    if config.thermal.is_zero() {
        return Err(Error::ThermalMode { mode: "finiteT" });
    }
    Ok(coefficient_finite_t_raw(
        config.rho1,
        config.rho2,
        metal.dissipation_constant(),
        config.gap,
        config.thermal.beta(),
    ))
}

/// τ_P = −(π/3) C_P R⁶ Ω³.
pub fn torque_t0(disc: &DiscSpec, c_p: f64) -> f64 {
    -PI / 3.0 * c_p * disc.radius.powi(6) * disc.omega.powi(3)
}

/// τ = −(π/2) C R⁴ Ω.
pub fn torque_finite_t(disc: &DiscSpec, c: f64) -> f64 {
    -PI / 2.0 * c * disc.radius.powi(4) * disc.omega
}

/// How the disc is cut into annuli for [`torque_numeric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Annuli {
    /// `n` equal-width annuli, each treated as a patch moving at the speed of
    /// its mid-radius. With a target, an error estimate above
    /// `rel_tol · |τ|` is reported as an accuracy failure.
    Fixed { n: usize, rel_tol: Option<f64> },
    /// Adaptive Gauss–Kronrod refinement of the radial integral.
    Adaptive { rel_tol: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorqueEstimate {
    pub torque: f64,
    pub abs_error: f64,
    /// Annuli used in the final estimate.
    pub annuli: usize,
}

fn midpoint_patches(disc: &DiscSpec, law: &dyn ForceLaw, n: usize) -> f64 {
    let h = disc.radius / n as f64;
    compensated_sum((0..n).map(|i| {
        let (r0, r1) = (i as f64 * h, (i + 1) as f64 * h);
        let r = 0.5 * (r0 + r1);
        r * law.force(disc.omega * r) * PI * (r1 * r1 - r0 * r0)
    }))
}

/// τ = ∫₀ᴿ r F(Ωr) 2πr dr.
pub fn torque_numeric(disc: &DiscSpec, law: &dyn ForceLaw, annuli: Annuli) -> Result<TorqueEstimate> {
    if disc.rim_speed() > law.max_speed() {
        return Err(Error::Domain {
            quantity: "rim speed",
            value: disc.rim_speed(),
            reason: "force law is not defined up to the disc rim",
        });
    }
    match annuli {
        Annuli::Fixed { n, rel_tol } => {
            require(n > 0, "n_annuli", || "must be positive".into())?;
            let coarse = midpoint_patches(disc, law, n);
            let fine = midpoint_patches(disc, law, 2 * n);
            let est = TorqueEstimate {
                torque: coarse,
                abs_error: (fine - coarse).abs() * 4.0 / 3.0,
                annuli: n,
            };
            match rel_tol {
                Some(tol) if est.abs_error > tol * est.torque.abs() => Err(Error::Accuracy {
                    estimate: est.torque,
                    error: est.abs_error,
                    target: tol * est.torque.abs(),
                }),
                _ => Ok(est),
            }
        }
        Annuli::Adaptive { rel_tol } => {
            require(rel_tol > 0.0, "rel_tol", || format!("{rel_tol} must be positive"))?;
            let mut edges = vec![0.0, disc.radius];
            if disc.omega != 0.0 {
                edges.extend(
                    law.kinks()
                        .into_iter()
                        .map(|v| v / disc.omega.abs())
                        .filter(|&r| r > 0.0 && r < disc.radius),
                );
            }
            edges.sort_by(f64::total_cmp);
            let tol = Tolerance {
                rel: rel_tol,
                abs: 0.0,
                max_subdivisions: 10_000,
            };
            let est = try_integrate(
                |r| Ok::<_, Error>(2.0 * PI * r * r * law.force(disc.omega * r)),
                &edges,
                tol,
            )?;
            Ok(TorqueEstimate {
                torque: est.value,
                abs_error: est.abs_error,
                annuli: est.evaluations / 15,
            })
        }
    }
}

/// Frictional power dissipated over the disc, ∫₀ᴿ −F(Ωr) Ωr 2πr dr.
pub fn frictional_power(disc: &DiscSpec, law: &dyn ForceLaw, rel_tol: f64) -> Result<f64> {
    let est = try_integrate(
        |r| {
            let v = disc.omega * r;
            Ok::<_, Error>(-law.force(v) * v * 2.0 * PI * r)
        },
        &[0.0, disc.radius],
        Tolerance::relative(rel_tol),
    )?;
    Ok(est.value)
}

/// Validity warnings attached to a force or torque evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RegimeFlags {
    /// Finite temperature with d/(βv) ≤ 1, where the linear law is not assured.
    pub thermal: bool,
    /// Frequencies beyond the linear spectral regime m_max are involved.
    pub spectral: bool,
}

impl RegimeFlags {
    pub fn any(&self) -> bool {
        self.thermal || self.spectral
    }

    pub fn label(&self) -> &'static str {
        match (self.thermal, self.spectral) {
            (false, false) => "ok",
            (true, false) => "thermal",
            (false, true) => "spectral",
            (true, true) => "thermal+spectral",
        }
    }
}

/// Flags for sliding at speed `v`. The characteristic frequency is v/d at
/// T = 0 and the thermal energy 1/β otherwise.
pub fn regime_flags(metal: &DrudeMetal, config: &PlateConfig, m_max: Option<f64>, v: f64) -> RegimeFlags {
    let m_max = m_max.unwrap_or_else(|| metal.default_m_max());
    let v = v.abs();
    if config.thermal.is_zero() {
        RegimeFlags {
            thermal: false,
            spectral: v / config.gap > m_max,
        }
    } else {
        let beta = config.thermal.beta();
        RegimeFlags {
            thermal: v > 0.0 && config.gap / (beta * v) <= 1.0,
            spectral: 1.0 / beta > m_max,
        }
    }
}

/// Friction force per unit area from the full dissipation pipeline, read off
/// a back-and-forth loop at speed `v` as −ΔE / (duration · v).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineForce {
    pub force: f64,
    pub abs_error: f64,
    pub beyond_cutoff: bool,
}

pub fn pipeline_force(
    metal: &DrudeMetal,
    config: &PlateConfig,
    spec: &QuadratureSpec,
    v: f64,
) -> Result<PipelineForce> {
    require(v > 0.0 && v.is_finite(), "v", || format!("{v} must be positive"))?;
    let leg = 1.0;
    let traj = Trajectory::rectilinear_loop(v, leg, 0.0)?;
    let mode = TemperatureMode::for_state(&config.thermal);
    let r = band_integrate(&traj, config, metal, spec, mode)?;
    let scale = 1.0 / (2.0 * leg * v);
    Ok(PipelineForce {
        force: -r.energy * scale,
        abs_error: r.abs_error * scale,
        beyond_cutoff: r.beyond_cutoff,
    })
}
