//! The full dissipation pipeline against the closed-form friction laws and
//! its geometric invariances.

use std::f64::consts::{PI, TAU};

use casimir_friction::dissipation::{
    band_integrate, band_integrate_with, PlateConfig, QuadratureSpec, SpectralModel, TemperatureMode,
};
use casimir_friction::friction::{coefficient_finite_t_raw, coefficient_t0_raw, pipeline_force};
use casimir_friction::response::{DrudeMetal, ThermalState};
use casimir_friction::trajectory::{Node, Trajectory};
use proptest::prelude::*;

fn unit_metal() -> DrudeMetal {
    DrudeMetal::from_dissipation_constant(1.0, 1.0, 1.0).unwrap()
}

fn spec() -> QuadratureSpec {
    QuadratureSpec {
        m_max: Some(100.0),
        ..QuadratureSpec::default()
    }
}

fn force(gap: f64, thermal: ThermalState, v: f64) -> f64 {
    let config = PlateConfig::new(gap, 1.0, 1.0, thermal).unwrap();
    pipeline_force(&unit_metal(), &config, &spec(), v).unwrap().force
}

fn slope(x: (f64, f64), y: (f64, f64)) -> f64 {
    (y.1.abs() / y.0.abs()).ln() / (x.1 / x.0).ln()
}

#[test]
fn zero_temperature_law() {
    let t0 = ThermalState::ZeroTemperature;
    let f = force(1.0, t0, 1e-3);
    let c_p = coefficient_t0_raw(1.0, 1.0, 1.0, 1.0);
    assert!((f / (-c_p * 1e-9) - 1.0).abs() < 1e-6, "{f}");
    assert!((slope((1e-3, 2e-3), (f, force(1.0, t0, 2e-3))) - 3.0).abs() < 1e-6);
    assert!((slope((1.0, 2.0), (f, force(2.0, t0, 1e-3))) + 6.0).abs() < 1e-4);
}

#[test]
fn finite_temperature_law() {
    let warm = ThermalState::from_beta(1.0).unwrap();
    let f = force(1.0, warm, 1e-3);
    let c = coefficient_finite_t_raw(1.0, 1.0, 1.0, 1.0, 1.0);
    assert!((f / (-c * 1e-3) - 1.0).abs() < 1e-3, "{f}");
    assert!((slope((1e-3, 2e-3), (f, force(1.0, warm, 2e-3))) - 1.0).abs() < 0.01);
    assert!((slope((1.0, 2.0), (f, force(2.0, warm, 1e-3))) + 4.0).abs() < 0.05);
}

#[test]
fn coefficient_is_stable_across_parameters() {
    // The pipeline-to-closed-form ratio stays 1 when ρ, D and d move.
    let spec = spec();
    for (rho, d_const, gap) in [(1.0, 1.0, 1.0), (2.0, 0.5, 0.7), (0.3, 3.0, 1.9)] {
        let metal = DrudeMetal::from_dissipation_constant(d_const, 1.0, rho).unwrap();
        let config = PlateConfig::symmetric(gap, &metal, ThermalState::ZeroTemperature).unwrap();
        let f = pipeline_force(&metal, &config, &spec, 1e-3).unwrap().force;
        let closed = -coefficient_t0_raw(rho, rho, d_const, gap) * 1e-9;
        assert!(
            (f / closed - 1.0).abs() < 1e-6,
            "rho {rho} D {d_const} d {gap}: {}",
            f / closed
        );
    }
}

#[test]
fn rotated_loop_dissipates_the_same() {
    let metal = unit_metal();
    let config = PlateConfig::new(1.0, 1.0, 1.0, ThermalState::ZeroTemperature).unwrap();
    let traj = Trajectory::polygon_loop(&[(0.0, 0.0), (2e-3, 0.0), (5e-4, 1.5e-3)], 1e-3).unwrap();
    let e = |t: &Trajectory| {
        band_integrate(t, &config, &metal, &spec(), TemperatureMode::ZeroTemperature)
            .unwrap()
            .energy
    };
    let base = e(&traj);
    for angle in [0.4, 1.9, -2.5] {
        assert!((e(&traj.rotated(angle)) / base - 1.0).abs() < 1e-7);
    }
    assert!((e(&traj.reversed()) / base - 1.0).abs() < 1e-7);
}

#[test]
fn two_speed_loop_adds_leg_by_leg() {
    // Out at v₁, back at v₂ over the same distance: half of each
    // single-speed loop.
    let metal = unit_metal();
    let config = PlateConfig::new(1.0, 1.0, 1.0, ThermalState::ZeroTemperature).unwrap();
    let e = |t: &Trajectory| {
        band_integrate(t, &config, &metal, &spec(), TemperatureMode::ZeroTemperature)
            .unwrap()
            .energy
    };
    let (v1, v2, reach) = (1e-3, 3e-3, 1.0);
    let mixed = Trajectory::new(
        vec![
            Node::new(0.0, 0.0, 0.0),
            Node::new(reach / v1, reach, 0.0),
            Node::new(reach / v1 + reach / v2, 0.0, 0.0),
        ],
        v2,
    )
    .unwrap();
    let a = Trajectory::rectilinear_loop(v1, reach / v1, 0.0).unwrap();
    let b = Trajectory::rectilinear_loop(v2, reach / v2, 0.0).unwrap();
    let sum = 0.5 * (e(&a) + e(&b));
    assert!((e(&mixed) / sum - 1.0).abs() < 1e-7);
}

#[test]
fn circular_path_matches_ring_estimate() {
    let metal = unit_metal();
    let config = PlateConfig::new(1.0, 1.0, 1.0, ThermalState::ZeroTemperature).unwrap();
    let (radius, v) = (1.0, 1e-3);
    let traj = Trajectory::circle(radius, v, 360).unwrap();
    let e = band_integrate(&traj, &config, &metal, &spec(), TemperatureMode::ZeroTemperature)
        .unwrap()
        .energy;
    // Chords are shorter than the arc by (π/360)²/6 and are run slower by
    // the same factor, so F·L falls by about four times that.
    let chord = 1.0 - (PI / 360.0).powi(2) / 6.0;
    let expected = coefficient_t0_raw(1.0, 1.0, 1.0, 1.0) * (v * chord).powi(3) * TAU * radius * chord;
    assert!((e / expected - 1.0).abs() < 1e-5, "{}", e / expected);
}

#[test]
fn half_space_drude_reduces_to_linear_density() {
    // At channel frequencies far below ν and ω_p the full Drude mapping
    // reduces to D m.
    let metal = DrudeMetal::new(20.0, 5.0, 1.0).unwrap();
    let config = PlateConfig::symmetric(1.0, &metal, ThermalState::ZeroTemperature).unwrap();
    let traj = Trajectory::rectilinear_loop(1e-3, 1.0, 0.0).unwrap();
    let spec = QuadratureSpec::default();
    let mode = TemperatureMode::ZeroTemperature;
    let linear = band_integrate_with(&traj, &config, &metal, &spec, mode, SpectralModel::LinearDrude).unwrap();
    let full = band_integrate_with(&traj, &config, &metal, &spec, mode, SpectralModel::HalfSpaceDrude).unwrap();
    assert!((full.energy / linear.energy - 1.0).abs() < 1e-3);
    assert!(!linear.beyond_cutoff);
}

#[test]
fn mode_must_match_temperature() {
    let metal = unit_metal();
    let config = PlateConfig::new(1.0, 1.0, 1.0, ThermalState::ZeroTemperature).unwrap();
    let traj = Trajectory::rectilinear_loop(1e-3, 1.0, 0.0).unwrap();
    assert!(band_integrate(&traj, &config, &metal, &spec(), TemperatureMode::FiniteTemperature).is_err());
}

fn polygon() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-2e-3..2e-3f64, -2e-3..2e-3f64), 3..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dissipation_is_non_negative(vertices in polygon(), speed in 2e-4..2e-3f64, warm in any::<bool>()) {
        let thermal = if warm { ThermalState::from_beta(1.0).unwrap() } else { ThermalState::ZeroTemperature };
        let config = PlateConfig::new(1.0, 1.0, 1.0, thermal).unwrap();
        let traj = Trajectory::polygon_loop(&vertices, speed).unwrap();
        let r = band_integrate(&traj, &config, &unit_metal(), &spec(), TemperatureMode::for_state(&thermal)).unwrap();
        prop_assert!(r.energy >= -r.abs_error, "{:?}", r);
    }
}
