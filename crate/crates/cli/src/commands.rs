//! The `force`, `torque` and `dissipation` tables.

use casimir_friction::dissipation::{band_integrate, PlateConfig, TemperatureMode};
use casimir_friction::friction::{
    coefficient_finite_t, coefficient_t0, pipeline_force, regime_flags, torque_finite_t, torque_numeric, torque_t0,
    Annuli, DiscSpec, FrictionLaw, LawKind,
};
use casimir_friction::units::Derived;
use log::warn;

use crate::config::{AnnuliChoice, Config};
use crate::error::CliError;
use crate::table::{fmt_num, Table};

fn column(name: &str, quantity: Derived, cfg: &Config) -> String {
    format!("{name} [{}]", quantity.label(cfg.system))
}

fn join_flags(flags: &[&str]) -> String {
    if flags.is_empty() {
        "ok".to_string()
    } else {
        flags.join("+")
    }
}

/// Rows (v, F_T0, F_finiteT, flags) over the `[run] v` grid, plus the
/// pipeline force when `[run] pipeline = true`. F_finiteT is left empty for
/// plates at zero temperature.
pub fn force(cfg: &Config) -> Result<Table, CliError> {
    let metal = cfg.require_metal()?;
    let plates = cfg.require_plates()?;
    let p = Derived::Pressure.factor(cfg.system);
    let c_p = coefficient_t0(&metal, &plates);
    let c = (!plates.thermal.is_zero())
        .then(|| coefficient_finite_t(&metal, &plates))
        .transpose()?;

    let mut columns = vec![
        column("v", Derived::Speed, cfg),
        column("F_T0", Derived::Pressure, cfg),
        column("F_finiteT", Derived::Pressure, cfg),
    ];
    if cfg.run.pipeline {
        columns.push(column("F_pipeline", Derived::Pressure, cfg));
        columns.push(column("F_pipeline_err", Derived::Pressure, cfg));
    }
    columns.push("flags".into());
    let mut table = Table::new("force", &cfg.hash, cfg.system, columns, 1);

    for &v in &cfg.run.v {
        let mut row = vec![fmt_num(v), fmt_num(-c_p * v * v * v * p)];
        row.push(c.map(|c| fmt_num(-c * v * p)).unwrap_or_default());
        let regime = regime_flags(&metal, &plates, cfg.quadrature.m_max, v);
        let mut flags = Vec::new();
        if regime.any() {
            warn!("v = {v}: outside the validated regime ({})", regime.label());
            flags.push(regime.label());
        }
        if cfg.run.pipeline {
            if v == 0.0 {
                row.extend([fmt_num(0.0), fmt_num(0.0)]);
            } else {
                let r = pipeline_force(&metal, &plates, &cfg.quadrature, v.abs())?;
                row.extend([fmt_num(r.force * v.signum() * p), fmt_num(r.abs_error * p)]);
                if r.beyond_cutoff && !regime.spectral {
                    flags.push("spectral");
                }
            }
        }
        row.push(join_flags(&flags));
        table.push(row);
    }
    Ok(table)
}

/// Rows (R, Ω, τ_T0, τ_finiteT, τ_numeric, rel_err, flags) over the radius
/// and angular-velocity grids. The numeric torque integrates the force law
/// belonging to the plate temperature and is compared with its closed form.
pub fn torque(cfg: &Config) -> Result<Table, CliError> {
    let metal = cfg.require_metal()?;
    let plates = cfg.require_plates()?;
    let radii = match (&cfg.run.radius, cfg.radius) {
        (Some(grid), _) => grid.clone(),
        (None, Some(r)) => vec![r],
        (None, None) => return Err(cfg.missing_key("plates", "radius")),
    };
    let scale = Derived::Torque.factor(cfg.system);
    let c_p = coefficient_t0(&metal, &plates);
    let c = (!plates.thermal.is_zero())
        .then(|| coefficient_finite_t(&metal, &plates))
        .transpose()?;
    let law = match c {
        None => FrictionLaw::new(LawKind::Cubic, c_p)?,
        Some(c) => FrictionLaw::new(LawKind::Linear, c)?,
    };
    let tol = cfg.quadrature.rel_tol;
    let annuli = match cfg.run.annuli {
        AnnuliChoice::Adaptive => Annuli::Adaptive { rel_tol: tol },
        AnnuliChoice::Fixed(n) => Annuli::Fixed { n, rel_tol: None },
    };

    let columns = vec![
        column("R", Derived::Length, cfg),
        column("Omega", Derived::AngularVelocity, cfg),
        column("tau_T0", Derived::Torque, cfg),
        column("tau_finiteT", Derived::Torque, cfg),
        column("tau_numeric", Derived::Torque, cfg),
        "rel_err".into(),
        "flags".into(),
    ];
    let mut table = Table::new("torque", &cfg.hash, cfg.system, columns, 4);
    for &radius in &radii {
        for &omega in &cfg.run.omega {
            let disc = DiscSpec::new(radius, omega)?;
            let t0 = torque_t0(&disc, c_p);
            let tf = c.map(|c| torque_finite_t(&disc, c));
            let closed = tf.unwrap_or(t0);
            let numeric = torque_numeric(&disc, &law, annuli)?.torque;
            let rel_err = if closed == 0.0 {
                numeric.abs()
            } else {
                ((numeric - closed) / closed).abs()
            };
            let mut flags = Vec::new();
            if rel_err > tol {
                warn!("R = {radius}, Omega = {omega}: numeric torque off by {rel_err:.3e}");
                flags.push("coarse");
            }
            let regime = regime_flags(&metal, &plates, cfg.quadrature.m_max, disc.rim_speed());
            if regime.any() {
                warn!(
                    "R = {radius}, Omega = {omega}: rim outside the validated regime ({})",
                    regime.label()
                );
                flags.push(regime.label());
            }
            table.push(vec![
                fmt_num(radius),
                fmt_num(omega),
                fmt_num(t0 * scale),
                tf.map(|t| fmt_num(t * scale)).unwrap_or_default(),
                fmt_num(numeric * scale),
                fmt_num(rel_err),
                join_flags(&flags),
            ]);
        }
    }
    Ok(table)
}

/// Rows (gap, ΔE, error, mode, flags): energy per unit area dissipated
/// along the configured closed trajectory, over `[run] gap` or the plate gap.
pub fn dissipation(cfg: &Config) -> Result<Table, CliError> {
    let metal = cfg.require_metal()?;
    let plates = cfg.require_plates()?;
    let traj = cfg.require_trajectory()?;
    let gaps = cfg.run.gap.clone().unwrap_or_else(|| vec![plates.gap]);
    let scale = Derived::EnergyPerArea.factor(cfg.system);
    let mode = TemperatureMode::for_state(&plates.thermal);
    let columns = vec![
        column("gap", Derived::Length, cfg),
        column("dE", Derived::EnergyPerArea, cfg),
        column("dE_err", Derived::EnergyPerArea, cfg),
        "mode".into(),
        "flags".into(),
    ];
    let mut table = Table::new("dissipation", &cfg.hash, cfg.system, columns, 1);
    for &gap in &gaps {
        let config = PlateConfig { gap, ..plates };
        let r = band_integrate(traj, &config, &metal, &cfg.quadrature, mode)?;
        if r.beyond_cutoff {
            warn!("gap = {gap}: frequencies beyond the linear spectral regime contribute");
        }
        table.push(vec![
            fmt_num(gap),
            fmt_num(r.energy * scale),
            fmt_num(r.abs_error * scale),
            mode.name().to_string(),
            join_flags(if r.beyond_cutoff { &["spectral"] } else { &[] }),
        ]);
    }
    Ok(table)
}
