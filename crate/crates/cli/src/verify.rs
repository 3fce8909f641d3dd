//! The oracle suite behind `verify`: each check compares a main-path result
//! with an independent reference at unit parameters and reports the
//! achieved error against its tolerance.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use casimir_friction::friction::{
    coefficient_finite_t_raw, coefficient_t0_raw, torque_finite_t, torque_numeric, torque_t0, Annuli, DiscSpec,
    FrictionLaw, LawKind,
};
use casimir_friction::oracle::{
    cross_term_residual, dissipation_brute, qhat_brute, qhat_brute_segment, two_leg_loop, windowed_dissipation_brute,
    windowed_spectral_prediction, KWindow, OmegaWindow, OracleSpec, PlaneWaveCoupling,
};
use casimir_friction::quad::{integrate, uniform_breakpoints, Tolerance};
use casimir_friction::response::{OscillatorPair, ThermalState};
use casimir_friction::trajectory::{
    delta_i_limit, delta_qhat, sinc_factor, Segment, SegmentedLoop, Trajectory, WaveVector,
};
use casimir_friction::units::UnitSystem;
use log::info;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::config::RunSpec;
use crate::table::Table;

/// Names accepted in `[run] suite`, in execution order.
pub const CHECKS: [&str; 9] = [
    "closed-form",
    "torque-numeric",
    "delta-limit",
    "segment",
    "closed-loop",
    "pair-duration",
    "pair-halving",
    "cross-term",
    "non-negativity",
];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub achieved: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CheckOutcome {
    fn new(name: &str, achieved: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name: name.to_string(),
            achieved,
            tolerance,
            passed: achieved <= tolerance,
            detail,
            seconds: 0.0,
        }
    }

    fn failed(name: &str, detail: String) -> Self {
        Self {
            name: name.to_string(),
            achieved: f64::NAN,
            tolerance: f64::NAN,
            passed: false,
            detail,
            seconds: 0.0,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

type Outcome = casimir_friction::Result<CheckOutcome>;

/// Closed-form coefficients and torques at unit parameters.
pub fn closed_form() -> Outcome {
    let disc = DiscSpec::new(1.0, 1.0)?;
    let errs = [
        rel(coefficient_t0_raw(1.0, 1.0, 1.0, 1.0), 2.313_188_531_505_318),
        rel(
            coefficient_finite_t_raw(1.0, 1.0, 1.0, 1.0, 1.0),
            24.352_272_758_500_604,
        ),
        rel(torque_t0(&disc, 1.0), -PI / 3.0),
        rel(torque_finite_t(&disc, 1.0), -PI / 2.0),
    ];
    let worst = errs.iter().copied().fold(0.0, f64::max);
    Ok(CheckOutcome::new(
        "closed-form",
        worst,
        1e-12,
        "C_P, C, tau_T0, tau_finiteT".into(),
    ))
}

/// Adaptive radial integration of both laws against the closed forms.
pub fn torque_numeric_check() -> Outcome {
    let mut worst = 0.0f64;
    for (radius, omega) in [(1.0, 1.0), (2.0, 0.5), (0.5, 3.0), (1.5, -2.0)] {
        let disc = DiscSpec::new(radius, omega)?;
        let annuli = Annuli::Adaptive { rel_tol: 1e-12 };
        let cubic = torque_numeric(&disc, &FrictionLaw::new(LawKind::Cubic, 1.0)?, annuli)?.torque;
        let linear = torque_numeric(&disc, &FrictionLaw::new(LawKind::Linear, 1.0)?, annuli)?.torque;
        worst = worst
            .max(rel(cubic, torque_t0(&disc, 1.0)))
            .max(rel(linear, torque_finite_t(&disc, 1.0)));
    }
    Ok(CheckOutcome::new(
        "torque-numeric",
        worst,
        1e-9,
        "adaptive annuli, 4 discs".into(),
    ))
}

/// Area under the finite-duration kernel of one segment over a window of
/// half-width X/τ around its resonance, relative to the δ weight πτ ω_v q̇.
pub fn delta_limit_ratio(x_window: f64, tau: f64) -> casimir_friction::Result<f64> {
    let seg = Segment::from_motion(0.0, tau, (0.0, 0.0), (1.0, 0.0), 1.0)?;
    let wv = WaveVector::new(1.0, 0.0)?;
    let doppler = seg.doppler(&wv);
    let half = x_window / tau;
    let panels = (4.0 * x_window / PI).ceil() as usize;
    let area = integrate(
        |w: f64| sinc_factor(w - doppler, tau).powi(2),
        &uniform_breakpoints(doppler - half, doppler + half, panels),
        Tolerance::relative(1e-12),
    )?
    .value;
    let weight = delta_i_limit(&seg, &wv).map_or(f64::NAN, |t| t[0].weight);
    Ok(area * doppler / weight)
}

pub fn delta_limit() -> Outcome {
    let x = 1e3;
    let ratio = delta_limit_ratio(x, 1e3)?;
    Ok(CheckOutcome::new(
        "delta-limit",
        (ratio - 1.0).abs(),
        2.0 / x,
        format!("X = {x}, area ratio {ratio:.9}"),
    ))
}

/// A random exactly-linear segment with a frequency away from zero.
pub fn random_segment(rng: &mut StdRng) -> casimir_friction::Result<(Segment, f64, WaveVector)> {
    let seg = Segment::from_motion(
        rng.random_range(-5.0..5.0),
        rng.random_range(0.1..10.0),
        (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
        (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
        1.0,
    )?;
    let omega = rng.random_range(0.05..5.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let wv = WaveVector::new(rng.random_range(0.1..3.0), rng.random_range(0.0..TAU))?;
    Ok((seg, omega, wv))
}

/// Largest |qhat_brute − ΔQ̂| over random segments.
pub fn segment_max_error(draws: usize, seed: u64) -> casimir_friction::Result<f64> {
    let mut rng = StdRng::seed_from_u64(seed);
    let spec = OracleSpec::default();
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let (seg, omega, wv) = random_segment(&mut rng)?;
        let brute = qhat_brute_segment(&seg, omega, &wv, &spec)?;
        worst = worst.max((brute - delta_qhat(&seg, omega, &wv)?).norm());
    }
    Ok(worst)
}

pub fn segment(run: &RunSpec) -> Outcome {
    let worst = segment_max_error(run.draws, run.seed)?;
    Ok(CheckOutcome::new(
        "segment",
        worst,
        1e-6,
        format!("{} draws", run.draws),
    ))
}

/// A random closed polygon with 3 to 6 vertices, traversed at constant speed.
pub fn random_polygon(rng: &mut StdRng) -> casimir_friction::Result<Trajectory> {
    let n = rng.random_range(3..=6);
    let vertices: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)))
        .collect();
    Trajectory::polygon_loop(&vertices, rng.random_range(0.2..2.0))
}

pub fn closed_loop(run: &RunSpec) -> Outcome {
    let mut rng = StdRng::seed_from_u64(run.seed.wrapping_add(1));
    let spec = OracleSpec::default();
    let loops = run.draws.div_ceil(10);
    let mut worst = 0.0f64;
    for _ in 0..loops {
        let traj = random_polygon(&mut rng)?;
        // Vanishing budget: every polygon edge stays its own segment.
        let lp = SegmentedLoop::new(&traj, 1e-12)?;
        for _ in 0..5 {
            let omega = rng.random_range(0.1..4.0);
            let wv = WaveVector::new(rng.random_range(0.2..2.0), rng.random_range(0.0..TAU))?;
            worst = worst.max((qhat_brute(&traj, omega, &wv, &spec)? - lp.qhat(omega, &wv)?).norm());
        }
    }
    Ok(CheckOutcome::new(
        "closed-loop",
        worst,
        1e-6,
        format!("{loops} polygons x 5 frequencies"),
    ))
}

/// Pair-level setup: a back-and-forth loop at unit speed with the wave
/// vector along the motion, lasting `periods` periods of the dissipating
/// channel. At T = 0 the pair (1, 1, 0.5, 0.5) dissipates through ω₊ = 1;
/// at β = 1 the pair (1, 1, 1, 1.5) through ω₋ = 0.5.
pub fn pair_relative_error(periods: f64, finite_temperature: bool) -> casimir_friction::Result<f64> {
    let (pair, state, window, omega) = if finite_temperature {
        (
            OscillatorPair::new(1.0, 1.0, 1.0, 1.5)?,
            ThermalState::from_beta(1.0)?,
            KWindow::new(0.0, 0.3, 0.7)?,
            0.5,
        )
    } else {
        (
            OscillatorPair::new(1.0, 1.0, 0.5, 0.5)?,
            ThermalState::ZeroTemperature,
            KWindow::new(0.0, 0.6, 1.4)?,
            1.0,
        )
    };
    let duration = periods * TAU / omega;
    let traj = Trajectory::rectilinear_loop(1.0, 0.5 * duration, 0.0)?;
    let brute = windowed_dissipation_brute(&pair, &traj, 1.0, &window, &state, &OracleSpec::default())?;
    let predicted = windowed_spectral_prediction(&pair, &traj, 1.0, &window, &state, 0.01)?;
    Ok((brute.energy - predicted) / predicted)
}

pub fn pair_duration(run: &RunSpec, error: f64) -> CheckOutcome {
    CheckOutcome::new(
        "pair-duration",
        error.abs(),
        0.05,
        format!(
            "{} periods, relative error {error:.3e} (O(1/duration))",
            run.pair_periods
        ),
    )
}

pub fn pair_halving(e1: f64, e2: f64) -> CheckOutcome {
    let ratio = e1 / e2;
    CheckOutcome::new(
        "pair-halving",
        (ratio / 2.0 - 1.0).abs(),
        0.25,
        format!("error ratio {ratio:.4} on doubling the duration"),
    )
}

pub fn cross_term() -> Outcome {
    let wv = WaveVector::new(1.0, 0.0)?;
    let window = OmegaWindow {
        center: 1.0,
        width: 0.1,
    };
    let spec = OracleSpec::default();
    let res = |gap: f64| cross_term_residual(&two_leg_loop(1.0, 10.0, gap, 0.0)?, &window, &wv, 0.01, &spec);
    let (r1, r2, r3) = (res(8.0)?, res(16.0)?, res(32.0)?);
    let decays = r2.residual.abs() < r1.residual.abs() && r3.residual.abs() < r2.residual.abs();
    let achieved = r3.residual.abs() / r3.diagonal;
    let mut out = CheckOutcome::new(
        "cross-term",
        achieved,
        1e-3,
        format!(
            "|residual| at gaps 8, 16, 32: {:.3e}, {:.3e}, {:.3e}",
            r1.residual.abs(),
            r2.residual.abs(),
            r3.residual.abs()
        ),
    );
    out.passed &= decays;
    Ok(out)
}

/// Most negative ΔE, in units of its own error estimate plus a floor,
/// over random pairs driven along random closed polygons.
pub fn non_negativity(run: &RunSpec) -> Outcome {
    let mut rng = StdRng::seed_from_u64(run.seed.wrapping_add(2));
    let spec = OracleSpec::default();
    let mut worst = f64::INFINITY;
    for _ in 0..run.draws {
        let traj = random_polygon(&mut rng)?;
        let pair = OscillatorPair::new(
            rng.random_range(0.5..2.0),
            rng.random_range(0.5..2.0),
            rng.random_range(0.2..2.0),
            rng.random_range(0.2..2.0),
        )?;
        let state = if rng.random_bool(0.5) {
            ThermalState::ZeroTemperature
        } else {
            ThermalState::from_beta(rng.random_range(0.5..5.0))?
        };
        let coupling = PlaneWaveCoupling {
            amplitude: 1.0,
            wave_vector: WaveVector::new(rng.random_range(0.2..2.0), rng.random_range(0.0..TAU))?,
        };
        let e = dissipation_brute(&pair, &traj, &coupling, &state, &spec)?;
        worst = worst.min(e.energy + e.abs_error + 1e-12);
    }
    let mut out = CheckOutcome::new(
        "non-negativity",
        0.0,
        0.0,
        format!("{} loops, min(dE + err) = {worst:.3e}", run.draws),
    );
    out.passed = worst >= 0.0;
    out.achieved = (-worst).max(0.0);
    Ok(out)
}

fn timed(name: &str, f: impl FnOnce() -> Outcome) -> CheckOutcome {
    let start = Instant::now();
    let mut out = f().unwrap_or_else(|e| CheckOutcome::failed(name, e.to_string()));
    out.seconds = start.elapsed().as_secs_f64();
    info!(
        "{name}: {} in {:.2} s",
        if out.passed { "pass" } else { "FAIL" },
        out.seconds
    );
    out
}

/// Run the selected checks; unknown names are reported as failures.
pub fn run_suite(run: &RunSpec) -> Vec<CheckOutcome> {
    let selected: Vec<String> = match &run.suite {
        Some(list) => list.clone(),
        None => CHECKS.iter().map(|s| s.to_string()).collect(),
    };
    let wants = |name: &str| selected.iter().any(|s| s == name);
    let mut out = Vec::new();
    for name in &selected {
        if !CHECKS.contains(&name.as_str()) {
            out.push(CheckOutcome::failed(
                name,
                format!("unknown check; expected one of {}", CHECKS.join(", ")),
            ));
        }
    }
    let mut pair_error = None;
    for &name in CHECKS.iter().filter(|n| wants(n)) {
        let outcome = match name {
            "closed-form" => timed(name, closed_form),
            "torque-numeric" => timed(name, torque_numeric_check),
            "delta-limit" => timed(name, delta_limit),
            "segment" => timed(name, || segment(run)),
            "closed-loop" => timed(name, || closed_loop(run)),
            "pair-duration" => timed(name, || {
                let e = pair_relative_error(run.pair_periods, false)?;
                pair_error = Some(e);
                Ok(pair_duration(run, e))
            }),
            "pair-halving" => timed(name, || {
                let e1 = match pair_error {
                    Some(e) => e,
                    None => pair_relative_error(run.pair_periods, false)?,
                };
                let e2 = pair_relative_error(2.0 * run.pair_periods, false)?;
                Ok(pair_halving(e1, e2))
            }),
            "cross-term" => timed(name, cross_term),
            "non-negativity" => timed(name, || non_negativity(run)),
            _ => unreachable!(),
        };
        out.push(outcome);
    }
    out
}

/// The pass/fail table written by `verify`.
pub fn report(outcomes: &[CheckOutcome], hash: &str) -> Table {
    let columns = ["check", "achieved", "tolerance", "status", "detail"];
    let mut table = Table::new(
        "verify",
        hash,
        UnitSystem::Natural,
        columns.iter().map(|s| s.to_string()).collect(),
        1,
    );
    for o in outcomes {
        table.push(vec![
            o.name.clone(),
            format!("{:.3e}", o.achieved),
            format!("{:.3e}", o.tolerance),
            if o.passed { "pass" } else { "FAIL" }.to_string(),
            o.detail.clone(),
        ]);
    }
    table
}
