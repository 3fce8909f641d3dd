//! Spectral factors of a closed path: matched intervals, the per-segment
//! contribution ΔQ̂ to the phase transform, its squared weight ΔI and the
//! large-duration δ-function representation of that weight.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::path::{segmentize, Segment, Trajectory, WaveVector};
use crate::error::{Error, Result};
use crate::quad::compensated_sum;

/// Below this value of |ω − ω_v q̇| τ the sinc factor is taken from its series.
pub const RESONANCE_SERIES_THRESHOLD: f64 = 1e-6;

/// Segment counts above which per-segment work is spread over threads.
const PARALLEL_SEGMENTS: usize = 256;

/// Primed interval [t0' − τ', t0' + τ'] paired with a segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedInterval {
    pub t0: f64,
    pub tau: f64,
}

/// One δ-function term: weight · δ(ω − center).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaTerm {
    pub center: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralMode {
    /// Finite segment durations (sinc² kernels).
    FiniteDuration,
    /// Large-duration limit, returned as δ-function terms.
    DeltaLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralI {
    Finite(f64),
    Delta(Vec<DeltaTerm>),
}

fn nonzero(omega: f64) -> Result<()> {
    if omega == 0.0 || !omega.is_finite() {
        Err(Error::DegenerateMatching)
    } else {
        Ok(())
    }
}

/// sin(xτ)/x, continued to τ at x = 0.
pub fn sinc_factor(x: f64, tau: f64) -> f64 {
    let arg = x * tau;
    if arg.abs() < RESONANCE_SERIES_THRESHOLD {
        tau * (1.0 - arg * arg / 6.0)
    } else {
        arg.sin() / x
    }
}

/// ωτ' = (ω − ω_v q̇)τ and ωt0' = ωt0 − k·x(t0).
pub fn matched_interval(seg: &Segment, omega: f64, wv: &WaveVector) -> Result<MatchedInterval> {
    nonzero(omega)?;
    let doppler = seg.doppler(wv);
    Ok(MatchedInterval {
        t0: seg.t0 - seg.phase(wv) / omega,
        tau: (omega - doppler) * seg.tau / omega,
    })
}

fn qhat_branch(seg: &Segment, omega: f64, wv: &WaveVector, sign: f64) -> Complex64 {
    let doppler = sign * seg.doppler(wv);
    let phase = omega * seg.t0 - sign * seg.phase(wv);
    let magnitude = 2.0 * doppler * sinc_factor(omega - doppler, seg.tau) / omega;
    Complex64::from_polar(1.0, -phase) * magnitude
}

/// Segment contribution ΔQ̂(ω, −ω_v) = S₂ − S₁ to ∫(e^{ik·x} − 1)e^{−iωt} dt.
pub fn delta_qhat(seg: &Segment, omega: f64, wv: &WaveVector) -> Result<Complex64> {
    nonzero(omega)?;
    Ok(qhat_branch(seg, omega, wv, 1.0))
}

/// Same contribution with the wave vector reversed, ΔQ̂(ω, +ω_v).
pub fn delta_qhat_reversed(seg: &Segment, omega: f64, wv: &WaveVector) -> Result<Complex64> {
    nonzero(omega)?;
    Ok(qhat_branch(seg, omega, wv, -1.0))
}

fn delta_i_unchecked(seg: &Segment, omega: f64, doppler: f64) -> f64 {
    if doppler == 0.0 {
        return 0.0;
    }
    let a = sinc_factor(omega - doppler, seg.tau);
    let b = sinc_factor(omega + doppler, seg.tau);
    doppler * doppler / omega * (a * a + b * b)
}

/// Finite-duration weight ΔI(ω), summed over both signs of ω_v.
pub fn delta_i(seg: &Segment, omega: f64, wv: &WaveVector) -> Result<f64> {
    nonzero(omega)?;
    Ok(delta_i_unchecked(seg, omega, seg.doppler(wv)))
}

/// δ-function limit of [`delta_i`]: π τ (ω_v q̇)²/ω at ω = ±ω_v q̇.
/// Segments with no Doppler shift contribute nothing.
pub fn delta_i_limit(seg: &Segment, wv: &WaveVector) -> Option<[DeltaTerm; 2]> {
    let doppler = seg.doppler(wv);
    if doppler == 0.0 {
        return None;
    }
    let amplitude = PI * seg.tau * doppler;
    Some([
        DeltaTerm {
            center: doppler,
            weight: amplitude,
        },
        DeltaTerm {
            center: -doppler,
            weight: -amplitude,
        },
    ])
}

/// A closed path cut into segments.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentedLoop {
    segments: Vec<Segment>,
}

impl SegmentedLoop {
    pub fn new(traj: &Trajectory, max_velocity_change: f64) -> Result<Self> {
        traj.ensure_closed()?;
        Ok(Self {
            segments: segmentize(traj, max_velocity_change),
        })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Moving time, i.e. total duration of segments with non-zero velocity.
    pub fn moving_time(&self) -> f64 {
        compensated_sum(self.segments.iter().filter(|s| s.qdot() > 0.0).map(|s| 2.0 * s.tau))
    }

    fn map_sum<F>(&self, f: F) -> f64
    where
        F: Fn(&Segment) -> f64 + Sync,
    {
        if self.segments.len() > PARALLEL_SEGMENTS {
            let parts: Vec<f64> = self.segments.par_iter().map(&f).collect();
            compensated_sum(parts)
        } else {
            compensated_sum(self.segments.iter().map(f))
        }
    }

    /// I(ω) as the sum of per-segment weights, cross terms dropped.
    pub fn spectral_i_finite(&self, omega: f64, wv: &WaveVector) -> Result<f64> {
        nonzero(omega)?;
        Ok(self.map_sum(|s| delta_i_unchecked(s, omega, s.doppler(wv))))
    }

    /// δ-terms of I(ω) for every moving segment, appended to `out`.
    pub fn delta_terms_into(&self, wv: &WaveVector, out: &mut Vec<DeltaTerm>) {
        out.extend(self.segments.iter().filter_map(|s| delta_i_limit(s, wv)).flatten());
    }

    pub fn delta_terms(&self, wv: &WaveVector) -> Vec<DeltaTerm> {
        let mut out = Vec::with_capacity(2 * self.segments.len());
        self.delta_terms_into(wv, &mut out);
        out
    }

    /// Σ ΔQ̂ over segments, which equals the full transform for a closed
    /// piecewise-linear path.
    pub fn qhat(&self, omega: f64, wv: &WaveVector) -> Result<Complex64> {
        nonzero(omega)?;
        let re = self.map_sum(|s| qhat_branch(s, omega, wv, 1.0).re);
        let im = self.map_sum(|s| qhat_branch(s, omega, wv, 1.0).im);
        Ok(Complex64::new(re, im))
    }

    /// Σ |ΔQ̂|² (the diagonal part of |Q̂|²).
    pub fn diagonal_qhat_sq(&self, omega: f64, wv: &WaveVector) -> Result<f64> {
        nonzero(omega)?;
        Ok(self.map_sum(|s| qhat_branch(s, omega, wv, 1.0).norm_sqr()))
    }
}

/// I(ω) of a closed trajectory in either representation.
pub fn spectral_i(
    omega: f64,
    traj: &Trajectory,
    wv: &WaveVector,
    mode: SpectralMode,
    max_velocity_change: f64,
) -> Result<SpectralI> {
    let lp = SegmentedLoop::new(traj, max_velocity_change)?;
    match mode {
        SpectralMode::FiniteDuration => lp.spectral_i_finite(omega, wv).map(SpectralI::Finite),
        SpectralMode::DeltaLimit => Ok(SpectralI::Delta(lp.delta_terms(wv))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, uniform_breakpoints, Tolerance};
    use crate::trajectory::path::{Node, DEFAULT_MAX_VELOCITY_CHANGE};
    use approx::assert_relative_eq;
    use gauss_quad::legendre::GaussLegendre;
    use proptest::prelude::*;

    fn seg(t0: f64, tau: f64, x0: f64, ux: f64) -> Segment {
        Segment::from_motion(t0, tau, (x0, 0.0), (ux, 0.0), 1.0).unwrap()
    }

    fn kx(k: f64) -> WaveVector {
        WaveVector::new(k, 0.0).unwrap()
    }

    // Oracle: S₂ − S₁ by composite Gauss–Legendre with the primed endpoints
    // taken from ωt' = ωt − k·x(t) at the two segment ends.
    fn split_quadrature(s: &Segment, omega: f64, wv: &WaveVector) -> Complex64 {
        let gl = GaussLegendre::new(20.try_into().unwrap());
        let (ux, uy) = s.velocity();
        let (x0, y0) = s.midpoint();
        let theta = |t: f64| wv.dot(x0 + ux * (t - s.t0), y0 + uy * (t - s.t0));
        let panels = 64;
        let composite = |a: f64, b: f64, f: &dyn Fn(f64) -> f64| {
            let h = (b - a) / panels as f64;
            (0..panels)
                .map(|i| gl.integrate(a + i as f64 * h, a + (i + 1) as f64 * h, f))
                .sum::<f64>()
        };
        let (t1, t2) = (s.start(), s.end());
        let s2_re = composite(t1, t2, &|t| (theta(t) - omega * t).cos());
        let s2_im = composite(t1, t2, &|t| (theta(t) - omega * t).sin());
        let (p1, p2) = (t1 - theta(t1) / omega, t2 - theta(t2) / omega);
        let s1_re = composite(p1, p2, &|t| (omega * t).cos());
        let s1_im = composite(p1, p2, &|t| -(omega * t).sin());
        Complex64::new(s2_re - s1_re, s2_im - s1_im)
    }

    #[test]
    fn matched_interval_examples() {
        let m = matched_interval(&seg(0.0, 1.0, 0.0, 0.5), 2.0, &kx(1.0)).unwrap();
        assert_eq!(m, MatchedInterval { t0: 0.0, tau: 0.75 });
        let s = seg(1.3, 0.4, 0.2, 0.0);
        let m = matched_interval(&s, 1.7, &kx(0.0)).unwrap();
        assert_eq!((m.t0, m.tau), (1.3, 0.4));
        let m = matched_interval(&seg(0.0, 2.0, 0.0, 1.0), 1.0, &kx(1.0)).unwrap();
        assert_eq!(m.tau, 0.0);
        assert!(matches!(
            matched_interval(&s, 0.0, &kx(1.0)),
            Err(Error::DegenerateMatching)
        ));
    }

    #[test]
    fn delta_qhat_reference_value() {
        let s = seg(0.0, 1.0, 0.0, 1.0);
        let q = delta_qhat(&s, 2.0, &kx(1.0)).unwrap();
        assert!((q - Complex64::new(1f64.sin(), 0.0)).norm() < 1e-15);
        let oracle = split_quadrature(&s, 2.0, &kx(1.0));
        assert!((q - oracle).norm() < 1e-6, "oracle {oracle}");
    }

    #[test]
    fn delta_qhat_special_cases() {
        assert_eq!(
            delta_qhat(&seg(0.5, 1.0, 0.3, 0.0), 2.0, &kx(1.0)).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        // Resonant limit 2 ω_v q̇ τ / ω.
        let q = delta_qhat(&seg(0.0, 3.0, 0.0, 1.0), 1.0, &kx(1.0)).unwrap();
        assert!((q - Complex64::new(6.0, 0.0)).norm() < 1e-15);
        assert!(delta_qhat(&seg(0.0, 3.0, 0.0, 1.0), 0.0, &kx(1.0)).is_err());
    }

    #[test]
    fn resonance_branch_is_continuous() {
        let s = Segment::from_motion(0.7, 2.5, (0.4, -0.1), (0.9, 0.3), 1.0).unwrap();
        let wv = WaveVector::new(1.2, 0.4).unwrap();
        let doppler = s.doppler(&wv);
        for delta in [1e-8, 1e-7, 1e-6, 1e-5, 1e-4] {
            let omega = doppler + delta / s.tau;
            let got = delta_qhat(&s, omega, &wv).unwrap();
            let series = s.tau * (1.0 - delta * delta / 6.0 + delta.powi(4) / 120.0);
            let phase = omega * s.t0 - s.phase(&wv);
            let expected = Complex64::from_polar(2.0 * doppler * series / omega, -phase);
            assert!((got - expected).norm() <= 1e-9 * expected.norm(), "delta {delta}");
        }
    }

    #[test]
    fn delta_i_at_resonance() {
        // τ = π/2 makes the mirrored branch sin(2ω_v τ) vanish.
        let tau = PI / 2.0;
        let s = seg(0.0, tau, 0.0, 1.0);
        let val = delta_i(&s, 1.0, &kx(1.0)).unwrap();
        assert_relative_eq!(val, tau * tau, max_relative = 1e-12);
        assert_eq!(delta_i(&seg(0.0, 1.0, 0.0, 0.0), 1.0, &kx(1.0)).unwrap(), 0.0);
        assert!(delta_i_limit(&seg(0.0, 1.0, 0.0, 0.0), &kx(1.0)).is_none());
        assert!(delta_i(&s, 0.0, &kx(1.0)).is_err());
    }

    #[test]
    fn kernel_area_approaches_delta_weight() {
        // ∫ (sin x / x)² over [−X, X] against π, with tail bound 2/X.
        let x_window = 1e3;
        let oracle = integrate(
            |x: f64| if x == 0.0 { 1.0 } else { (x.sin() / x).powi(2) },
            &uniform_breakpoints(-x_window, x_window, 2000),
            Tolerance::relative(1e-13),
        )
        .unwrap()
        .value;
        assert!((oracle - PI).abs() <= 2.0 / x_window);

        // The same area read off the segment kernel around its resonance.
        let tau = 1e3;
        let s = seg(0.0, tau, 0.0, 1.0);
        let wv = kx(1.0);
        let doppler = 1.0;
        let half = x_window / tau;
        let area = integrate(
            |w: f64| {
                let a = sinc_factor(w - doppler, tau);
                a * a
            },
            &uniform_breakpoints(doppler - half, doppler + half, 2000),
            Tolerance::relative(1e-12),
        )
        .unwrap()
        .value;
        let weight = delta_i_limit(&s, &wv).unwrap()[0].weight;
        // weight = π τ ω_v q̇ and the kernel carries (ω_v q̇)²/ω, which is ω_v q̇ at the center.
        let ratio = area * doppler / weight;
        assert!((ratio - 1.0).abs() <= 2e-3, "ratio {ratio}");
        assert_relative_eq!(ratio, oracle / PI, max_relative = 1e-9);
    }

    #[test]
    fn delta_limit_converges_like_inverse_duration() {
        // Smooth bump on [0.5, 1.5] tested against ΔI for growing τ.
        let bump = |w: f64| {
            let s = 2.0 * (w - 1.0);
            if s.abs() >= 1.0 {
                0.0
            } else {
                (-1.0 / (1.0 - s * s)).exp()
            }
        };
        let wv = kx(1.0);
        let rel_err = |tau: f64| {
            let s = seg(0.0, tau, 0.0, 1.0);
            let finite = integrate(
                |w| bump(w) * delta_i(&s, w, &wv).unwrap(),
                &uniform_breakpoints(0.5, 1.5, (4.0 * tau) as usize),
                Tolerance::relative(1e-11),
            )
            .unwrap()
            .value;
            let limit: f64 = delta_i_limit(&s, &wv)
                .unwrap()
                .iter()
                .map(|d| d.weight * bump(d.center))
                .sum();
            (finite - limit).abs() / limit
        };
        let (e1, e2, e3) = (rel_err(100.0), rel_err(200.0), rel_err(400.0));
        for ratio in [e1 / e2, e2 / e3] {
            assert!((ratio / 2.0 - 1.0).abs() < 0.2, "errors {e1:e} {e2:e} {e3:e}");
        }
    }

    #[test]
    fn stationary_and_open_loops() {
        let still = Trajectory::new(vec![Node::new(0.0, 1.0, 1.0), Node::new(5.0, 1.0, 1.0)], 1.0).unwrap();
        let wv = WaveVector::new(0.8, 0.3).unwrap();
        let res = spectral_i(
            1.0,
            &still,
            &wv,
            SpectralMode::FiniteDuration,
            DEFAULT_MAX_VELOCITY_CHANGE,
        )
        .unwrap();
        assert_eq!(res, SpectralI::Finite(0.0));
        let res = spectral_i(1.0, &still, &wv, SpectralMode::DeltaLimit, DEFAULT_MAX_VELOCITY_CHANGE).unwrap();
        assert_eq!(res, SpectralI::Delta(vec![]));

        let open = Trajectory::new(vec![Node::new(0.0, 0.0, 0.0), Node::new(1.0, 1.0, 0.0)], 1.0).unwrap();
        assert!(matches!(
            spectral_i(1.0, &open, &wv, SpectralMode::DeltaLimit, 0.01),
            Err(Error::OpenLoop { .. })
        ));
    }

    #[test]
    fn constant_speed_loop_weights() {
        // Constant |q̇| = 1 for total moving time T: weight πT/2 · ω_v at ω = |ω_v|.
        let leg = 7.0;
        let traj = Trajectory::rectilinear_loop(1.0, leg, 0.0).unwrap();
        let wv = kx(0.6);
        let SpectralI::Delta(terms) = spectral_i(1.0, &traj, &wv, SpectralMode::DeltaLimit, 0.01).unwrap() else {
            panic!("expected delta terms");
        };
        let total_time = 2.0 * leg;
        let positive: f64 = terms.iter().filter(|d| d.center > 0.0).map(|d| d.weight).sum();
        assert_relative_eq!(positive, PI * total_time / 2.0 * 0.6 * 0.6 / 0.6, max_relative = 1e-14);
        assert!(terms.iter().all(|d| (d.center.abs() - 0.6).abs() < 1e-15));
    }

    #[test]
    fn two_speed_loop_weights_add() {
        // Out at speed 1 for 2L, back at speed 2 for L.
        let l = 3.0;
        let traj = Trajectory::new(
            vec![
                Node::new(0.0, 0.0, 0.0),
                Node::new(2.0 * l, 2.0 * l, 0.0),
                Node::new(3.0 * l, 0.0, 0.0),
            ],
            1.0,
        )
        .unwrap();
        let wv = kx(0.5);
        let lp = SegmentedLoop::new(&traj, 0.01).unwrap();
        assert_eq!(lp.segments().len(), 2);
        let terms = lp.delta_terms(&wv);
        let slow: Vec<_> = terms.iter().filter(|d| d.center == 0.5).collect();
        let fast: Vec<_> = terms.iter().filter(|d| d.center == 1.0).collect();
        assert_eq!((slow.len(), fast.len()), (1, 1));
        // Weight π τ (ω_v q̇)²/ω at its own center; the squared factor is 4x.
        let (tau_slow, tau_fast) = (l, l / 2.0);
        assert_relative_eq!(slow[0].weight, PI * tau_slow * 0.25 / 0.5, max_relative = 1e-14);
        assert_relative_eq!(fast[0].weight, PI * tau_fast * 1.0 / 1.0, max_relative = 1e-14);
        assert_relative_eq!(
            (fast[0].weight * fast[0].center / tau_fast) / (slow[0].weight * slow[0].center / tau_slow),
            4.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn rotation_invariance() {
        let traj = Trajectory::circle(1.5, 0.8, 97).unwrap();
        let wv = WaveVector::new(1.1, 0.25).unwrap();
        for angle in [0.3, 1.0, 2.5] {
            for omega in [0.2, 0.88, 1.7] {
                let a = SegmentedLoop::new(&traj, 0.01)
                    .unwrap()
                    .spectral_i_finite(omega, &wv)
                    .unwrap();
                let b = SegmentedLoop::new(&traj.rotated(angle), 0.01)
                    .unwrap()
                    .spectral_i_finite(omega, &wv.rotated(angle))
                    .unwrap();
                assert!((a - b).abs() <= 1e-9 * a.abs(), "{a} vs {b}");
            }
        }
    }

    proptest! {
        #[test]
        fn delta_i_is_squared_qhat(
            t0 in -5.0f64..5.0, tau in 0.1f64..20.0, x0 in -3.0f64..3.0, y0 in -3.0f64..3.0,
            ux in -2.0f64..2.0, uy in -2.0f64..2.0, k in 0.0f64..3.0, phi in 0.0f64..6.3,
            omega in 0.05f64..4.0,
        ) {
            let s = Segment::from_motion(t0, tau, (x0, y0), (ux, uy), 1.0).unwrap();
            let wv = WaveVector::new(k, phi).unwrap();
            let di = delta_i(&s, omega, &wv).unwrap();
            let q1 = delta_qhat(&s, omega, &wv).unwrap().norm_sqr();
            let q2 = delta_qhat_reversed(&s, omega, &wv).unwrap().norm_sqr();
            let expected = omega / 4.0 * (q1 + q2);
            prop_assert!((di - expected).abs() <= 1e-12 * expected.max(1e-300));
        }

        #[test]
        fn delta_qhat_matches_split_quadrature(
            tau in 0.2f64..3.0, x0 in -1.0f64..1.0, ux in -1.5f64..1.5, k in 0.1f64..2.0, omega in 0.3f64..3.0,
        ) {
            let s = seg(0.4, tau, x0, ux);
            let wv = kx(k);
            let q = delta_qhat(&s, omega, &wv).unwrap();
            prop_assert!((q - split_quadrature(&s, omega, &wv)).norm() < 1e-9);
        }
    }
}
