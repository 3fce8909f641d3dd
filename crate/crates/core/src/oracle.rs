//! Brute-force references for the spectral path.
//!
//! Everything here works on the raw trajectory nodes with Gauss–Legendre
//! rules, independent of the segment construction and of the Gauss–Kronrod
//! code used by the main pipeline.

use std::f64::consts::{PI, TAU};
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{require, Error, Result};
use crate::quad::{compensated_sum, NeumaierSum};
use crate::response::{OscillatorPair, ResponseFunction, ThermalState};
use crate::trajectory::{Node, Segment, SegmentedLoop, Trajectory, WaveVector};

/// Resolution of the brute-force rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSpec {
    /// Absolute tolerance on transforms such as Q̂.
    pub abs_tol: f64,
    /// Gauss–Legendre order of the time-domain panels.
    pub order: usize,
    /// Panels per period of the fastest oscillation in the integrand.
    pub panels_per_period: f64,
    /// Bisection depth limit of adaptive rules.
    pub max_depth: usize,
}

impl Default for OracleSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            order: 16,
            panels_per_period: 2.0,
            max_depth: 40,
        }
    }
}

impl OracleSpec {
    fn validate(&self) -> Result<()> {
        require(self.abs_tol > 0.0, "abs_tol", || {
            format!("{} must be positive", self.abs_tol)
        })?;
        require(self.order >= 4, "order", || format!("{} is below 4", self.order))?;
        require(self.panels_per_period > 0.0, "panels_per_period", || {
            format!("{} must be positive", self.panels_per_period)
        })
    }
}

fn rule(order: usize) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(order).expect("order is positive");
    GaussLegendre::new(n).as_node_weight_pairs().to_vec()
}

/// Straight piece of the raw path with θ(t) = k·x(t) linear in t.
#[derive(Debug, Clone, Copy)]
struct Leg {
    ta: f64,
    tb: f64,
    theta_a: f64,
    rate: f64,
}

impl Leg {
    fn theta(&self, t: f64) -> f64 {
        self.theta_a + self.rate * (t - self.ta)
    }
}

fn legs(traj: &Trajectory, wv: &WaveVector) -> Vec<Leg> {
    let nodes = traj.nodes();
    let o = nodes[0];
    let theta = |n: &Node| wv.dot(n.x - o.x, n.y - o.y);
    nodes
        .windows(2)
        .map(|w| {
            let (ta, tb) = (w[0].t, w[1].t);
            let (a, b) = (theta(&w[0]), theta(&w[1]));
            Leg {
                ta,
                tb,
                theta_a: a,
                rate: (b - a) / (tb - ta),
            }
        })
        .collect()
}

fn panel_count(len: f64, freq: f64, per_period: f64) -> usize {
    ((len * freq * per_period / TAU).ceil() as usize).max(1)
}

/// Adaptive Gauss–Legendre of a complex integrand: each panel compares the
/// low and high order rules and is bisected until the difference is within
/// its share of `tol`.
struct ComplexAdaptive {
    low: Vec<(f64, f64)>,
    high: Vec<(f64, f64)>,
    max_depth: usize,
}

impl ComplexAdaptive {
    fn new(order: usize, max_depth: usize) -> Self {
        Self {
            low: rule(order),
            high: rule(2 * order),
            max_depth,
        }
    }

    fn apply<F: Fn(f64) -> Complex64>(nodes: &[(f64, f64)], f: &F, a: f64, b: f64) -> Complex64 {
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        nodes.iter().map(|&(x, w)| f(c + h * x) * w).sum::<Complex64>() * h
    }

    fn integrate<F: Fn(f64) -> Complex64>(
        &self,
        f: &F,
        a: f64,
        b: f64,
        tol_density: f64,
        depth: usize,
    ) -> Result<Complex64> {
        let coarse = Self::apply(&self.low, f, a, b);
        let fine = Self::apply(&self.high, f, a, b);
        let err = (fine - coarse).norm();
        if err <= tol_density * (b - a) {
            return Ok(fine);
        }
        if depth >= self.max_depth {
            return Err(Error::Accuracy {
                estimate: fine.norm(),
                error: err,
                target: tol_density * (b - a),
            });
        }
        let m = 0.5 * (a + b);
        Ok(self.integrate(f, a, m, tol_density, depth + 1)? + self.integrate(f, m, b, tol_density, depth + 1)?)
    }
}

/// Q̂(ω, −ω_v) = ∫ (e^{ik·x(t)} − 1) e^{−iωt} dt over the whole closed path.
pub fn qhat_brute(traj: &Trajectory, omega: f64, wv: &WaveVector, spec: &OracleSpec) -> Result<Complex64> {
    spec.validate()?;
    traj.ensure_closed()?;
    let quad = ComplexAdaptive::new(spec.order, spec.max_depth);
    let tol_density = spec.abs_tol / traj.duration();
    let mut re = NeumaierSum::default();
    let mut im = NeumaierSum::default();
    for leg in legs(traj, wv) {
        let f = |t: f64| (Complex64::from_polar(1.0, leg.theta(t)) - 1.0) * Complex64::from_polar(1.0, -omega * t);
        let n = panel_count(leg.tb - leg.ta, omega.abs() + leg.rate.abs(), spec.panels_per_period);
        let h = (leg.tb - leg.ta) / n as f64;
        for i in 0..n {
            let a = leg.ta + i as f64 * h;
            let b = if i + 1 == n { leg.tb } else { a + h };
            let v = quad.integrate(&f, a, b, tol_density, 0)?;
            re.add(v.re);
            im.add(v.im);
        }
    }
    Ok(Complex64::new(re.sum(), im.sum()))
}

/// S₂ − S₁ for one straight segment, both integrals done by quadrature:
/// S₂ over the segment, S₁ over the primed interval whose end points are
/// t − k·x(t)/ω at the segment ends.
pub fn qhat_brute_segment(seg: &Segment, omega: f64, wv: &WaveVector, spec: &OracleSpec) -> Result<Complex64> {
    spec.validate()?;
    if omega == 0.0 {
        return Err(Error::DegenerateMatching);
    }
    let quad = ComplexAdaptive::new(spec.order, spec.max_depth);
    let (x0, y0) = seg.midpoint();
    let (ux, uy) = seg.velocity();
    let theta = |t: f64| wv.dot(x0 + ux * (t - seg.t0), y0 + uy * (t - seg.t0));
    let (t1, t2) = (seg.start(), seg.end());
    let freq = omega.abs() + wv.dot(ux, uy).abs();
    let tol_density = 0.5 * spec.abs_tol / (t2 - t1);
    let s2_integrand = |t: f64| Complex64::from_polar(1.0, theta(t) - omega * t);
    let s1_integrand = |t: f64| Complex64::from_polar(1.0, -omega * t);
    let (p1, p2) = (t1 - theta(t1) / omega, t2 - theta(t2) / omega);
    let panels = |a: f64, b: f64, f: &dyn Fn(f64) -> Complex64| -> Result<Complex64> {
        let (lo, hi, sign) = if b >= a { (a, b, 1.0) } else { (b, a, -1.0) };
        let n = panel_count(hi - lo, freq, spec.panels_per_period);
        let h = (hi - lo) / n as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let pa = lo + i as f64 * h;
            let pb = if i + 1 == n { hi } else { pa + h };
            acc += quad.integrate(&f, pa, pb, tol_density, 0)?;
        }
        Ok(acc * sign)
    };
    Ok(panels(t1, t2, &s2_integrand)? - panels(p1, p2, &s1_integrand)?)
}

/// Gauss–Legendre nodes with the matrix S[j][k] = ∫_{−1}^{x_j} ℓ_k(x) dx that
/// integrates the interpolant of nodal values up to each node.
struct SpectralRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    cumulative: Vec<Vec<f64>>,
}

impl SpectralRule {
    fn new(order: usize) -> Self {
        let pairs = rule(order);
        let nodes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let n = nodes.len();
        let bary: Vec<f64> = (0..n)
            .map(|k| 1.0 / (0..n).filter(|&m| m != k).map(|m| nodes[k] - nodes[m]).product::<f64>())
            .collect();
        let lagrange =
            |k: usize, x: f64| -> f64 { (0..n).filter(|&m| m != k).map(|m| x - nodes[m]).product::<f64>() * bary[k] };
        let cumulative = nodes
            .iter()
            .map(|&xj| {
                let half = 0.5 * (xj + 1.0);
                (0..n)
                    .map(|k| {
                        pairs
                            .iter()
                            .map(|&(z, w)| w * lagrange(k, -1.0 + half * (z + 1.0)))
                            .sum::<f64>()
                            * half
                    })
                    .collect()
            })
            .collect();
        Self {
            nodes,
            weights,
            cumulative,
        }
    }
}

/// Lateral plane-wave coupling F(t) = A cos(k·x(t) + θ₀) between the pair,
/// averaged over the offset θ₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveCoupling {
    pub amplitude: f64,
    pub wave_vector: WaveVector,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteEnergy {
    pub energy: f64,
    /// Difference between two rule orders.
    pub abs_error: f64,
}

/// ∫ θ̇(t) ∫_{t′<t} sin(θ(t) − θ(t′)) sin(ω(t − t′)) dt′ dt for one channel.
///
/// The inner integral is split into products of functions of t and t′ and
/// accumulated panel by panel. Before the motion starts θ = 0, and the
/// remaining sin(ω(t − t′)) tail is taken with adiabatic switching,
/// ∫_{−∞}^{t_s} sin(ω(t − t′)) dt′ = cos(ω(t − t_s))/ω.
fn channel_integral(legs: &[Leg], omega: f64, rule: &SpectralRule, per_period: f64) -> f64 {
    let ts = legs[0].ta;
    let n = rule.nodes.len();
    let mut g_minus = Complex64::new(0.0, 0.0);
    let mut g_plus = Complex64::new(0.0, 0.0);
    let mut total = NeumaierSum::default();
    let mut f_minus = vec![Complex64::new(0.0, 0.0); n];
    let mut f_plus = vec![Complex64::new(0.0, 0.0); n];
    let mut e_theta = vec![Complex64::new(0.0, 0.0); n];
    let mut e_omega = vec![Complex64::new(0.0, 0.0); n];
    for leg in legs {
        let panels = panel_count(leg.tb - leg.ta, omega + leg.rate.abs(), per_period);
        let h = 0.5 * (leg.tb - leg.ta) / panels as f64;
        for p in 0..panels {
            let a = leg.ta + 2.0 * h * p as f64;
            for j in 0..n {
                let t = a + h * (1.0 + rule.nodes[j]);
                e_theta[j] = Complex64::from_polar(1.0, leg.theta(t));
                e_omega[j] = Complex64::from_polar(1.0, omega * (t - ts));
                // e^{−i(θ − ωt)} and e^{−i(θ + ωt)}.
                f_minus[j] = e_theta[j].conj() * e_omega[j];
                f_plus[j] = e_theta[j].conj() * e_omega[j].conj();
            }
            if leg.rate != 0.0 {
                let mut panel_sum = 0.0;
                for j in 0..n {
                    let row = &rule.cumulative[j];
                    let mut pm = Complex64::new(0.0, 0.0);
                    let mut pp = Complex64::new(0.0, 0.0);
                    for k in 0..n {
                        pm += f_minus[k] * row[k];
                        pp += f_plus[k] * row[k];
                    }
                    let inside = f_minus[j].conj() * (g_minus + pm * h) - f_plus[j].conj() * (g_plus + pp * h);
                    let tail = e_theta[j].im * e_omega[j].re / omega;
                    panel_sum += rule.weights[j] * (0.5 * inside.re + tail);
                }
                total.add(panel_sum * h * leg.rate);
            }
            for j in 0..n {
                g_minus += f_minus[j] * (rule.weights[j] * h);
                g_plus += f_plus[j] * (rule.weights[j] * h);
            }
        }
    }
    total.sum()
}

fn pair_energy(legs: &[Leg], response: &ResponseFunction, amplitude: f64, rule: &SpectralRule, per_period: f64) -> f64 {
    let mut acc = 0.0;
    for (c, omega) in response.channels() {
        if c != 0.0 && omega > 0.0 {
            acc += 0.5 * amplitude * amplitude * c * channel_integral(legs, omega, rule, per_period);
        }
    }
    acc
}

/// Energy dissipated in one oscillator pair driven by a plane-wave coupling
/// along the trajectory, by double-time quadrature of the Kubo expression
/// −∫∫ Ḟ(t) φ(t − t′) F(t′) dt′ dt.
pub fn dissipation_brute(
    pair: &OscillatorPair,
    traj: &Trajectory,
    coupling: &PlaneWaveCoupling,
    state: &ThermalState,
    spec: &OracleSpec,
) -> Result<BruteEnergy> {
    spec.validate()?;
    traj.ensure_closed()?;
    let response = ResponseFunction::new(pair, state)?;
    let legs = legs(traj, &coupling.wave_vector);
    let fine = SpectralRule::new(spec.order);
    let coarse = SpectralRule::new(spec.order - spec.order / 4);
    let e_fine = pair_energy(&legs, &response, coupling.amplitude, &fine, spec.panels_per_period);
    let e_coarse = pair_energy(&legs, &response, coupling.amplitude, &coarse, spec.panels_per_period);
    Ok(BruteEnergy {
        energy: e_fine,
        abs_error: (e_fine - e_coarse).abs(),
    })
}

/// Smooth bump in |k| along a fixed direction, vanishing outside
/// [k_min, k_max] and equal to 1 at the centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KWindow {
    pub direction: f64,
    pub k_min: f64,
    pub k_max: f64,
}

impl KWindow {
    pub fn new(direction: f64, k_min: f64, k_max: f64) -> Result<Self> {
        require(k_min >= 0.0 && k_max > k_min, "k window", || {
            format!("[{k_min}, {k_max}] is empty")
        })?;
        Ok(Self {
            direction,
            k_min,
            k_max,
        })
    }

    pub fn weight(&self, k: f64) -> f64 {
        let s = (2.0 * k - self.k_min - self.k_max) / (self.k_max - self.k_min);
        if s.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - s * s)).exp()
        }
    }
}

/// ∫ W(k) ΔE_brute(k) dk: the pair energy smeared over wave numbers, which
/// turns the resonances into finite, duration-proportional contributions.
pub fn windowed_dissipation_brute(
    pair: &OscillatorPair,
    traj: &Trajectory,
    amplitude: f64,
    window: &KWindow,
    state: &ThermalState,
    spec: &OracleSpec,
) -> Result<BruteEnergy> {
    spec.validate()?;
    traj.ensure_closed()?;
    let response = ResponseFunction::new(pair, state)?;
    let unit = WaveVector::new(1.0, window.direction)?;
    let slope = legs(traj, &unit).iter().map(|l| l.rate.abs()).fold(0.0, f64::max);
    // Panels of half a resonance half-width, 2π/(duration · |k̂·u|).
    let width = if slope > 0.0 {
        PI / (traj.duration() * slope)
    } else {
        window.k_max - window.k_min
    };
    let n_panels = ((window.k_max - window.k_min) / width).ceil().max(1.0) as usize;
    let h = (window.k_max - window.k_min) / n_panels as f64;
    let k_rule = rule(8);
    let points: Vec<(f64, f64)> = (0..n_panels)
        .flat_map(|p| {
            let c = window.k_min + (p as f64 + 0.5) * h;
            k_rule.iter().map(move |&(x, w)| (c + 0.5 * h * x, 0.5 * h * w))
        })
        .collect();
    let fine = SpectralRule::new(spec.order);
    let coarse = SpectralRule::new(spec.order - spec.order / 4);
    let values: Vec<(f64, f64)> = points
        .par_iter()
        .map(|&(k, w)| {
            let weight = w * window.weight(k);
            if weight == 0.0 {
                return (0.0, 0.0);
            }
            let legs = legs(
                traj,
                &WaveVector {
                    k,
                    phi: window.direction,
                },
            );
            (
                weight * pair_energy(&legs, &response, amplitude, &fine, spec.panels_per_period),
                weight * pair_energy(&legs, &response, amplitude, &coarse, spec.panels_per_period),
            )
        })
        .collect();
    let energy = compensated_sum(values.iter().map(|v| v.0));
    let other = compensated_sum(values.iter().map(|v| v.1));
    Ok(BruteEnergy {
        energy,
        abs_error: (energy - other).abs(),
    })
}

/// The same windowed energy from the spectral path: (A²/2) Σ_channels C
/// Σ_δ-terms weight · δ(ω_channel − centre), with the δ integrated over k.
pub fn windowed_spectral_prediction(
    pair: &OscillatorPair,
    traj: &Trajectory,
    amplitude: f64,
    window: &KWindow,
    state: &ThermalState,
    max_velocity_change: f64,
) -> Result<f64> {
    let response = ResponseFunction::new(pair, state)?;
    let lp = SegmentedLoop::new(traj, max_velocity_change)?;
    // Centres and weights are linear in k; read them off at k = 1.
    let terms = lp.delta_terms(&WaveVector::new(1.0, window.direction)?);
    let mut acc = NeumaierSum::default();
    for (c, omega) in response.channels() {
        if c == 0.0 || omega <= 0.0 {
            continue;
        }
        for t in &terms {
            let k_star = omega / t.center;
            if k_star > 0.0 {
                acc.add(0.5 * amplitude * amplitude * c * window.weight(k_star) * k_star * t.weight / t.center.abs());
            }
        }
    }
    Ok(acc.sum())
}

/// Out along `direction` for `leg`, rest for `gap`, then straight back.
pub fn two_leg_loop(speed: f64, leg: f64, gap: f64, direction: f64) -> Result<Trajectory> {
    require(speed > 0.0, "speed", || format!("{speed} must be positive"))?;
    require(leg > 0.0, "leg", || format!("{leg} must be positive"))?;
    require(gap >= 0.0, "gap", || format!("{gap} must be non-negative"))?;
    let (s, c) = direction.sin_cos();
    let (x, y) = (speed * leg * c, speed * leg * s);
    let mut nodes = vec![Node::new(0.0, 0.0, 0.0), Node::new(leg, x, y)];
    if gap > 0.0 {
        nodes.push(Node::new(leg + gap, x, y));
    }
    nodes.push(Node::new(2.0 * leg + gap, 0.0, 0.0));
    Trajectory::new(nodes, speed)
}

/// Gaussian weight in ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaWindow {
    pub center: f64,
    pub width: f64,
}

impl OmegaWindow {
    pub fn weight(&self, omega: f64) -> f64 {
        let x = (omega - self.center) / self.width;
        (-0.5 * x * x).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossTerm {
    /// |∫ W(ω) (I_full − I_diagonal) dω|.
    pub residual: f64,
    /// ∫ W(ω) I_diagonal dω.
    pub diagonal: f64,
}

/// Weight of the inter-segment cross terms that the spectral path drops:
/// I_full(ω) = (ω/4) Σ_± |Q̂|² by brute quadrature against the diagonal
/// (ω/4) Σ_± Σ_s |ΔQ̂_s|², both integrated over a Gaussian ω-window.
pub fn cross_term_residual(
    traj: &Trajectory,
    window: &OmegaWindow,
    wv: &WaveVector,
    max_velocity_change: f64,
    spec: &OracleSpec,
) -> Result<CrossTerm> {
    require(window.width > 0.0, "width", || {
        format!("{} must be positive", window.width)
    })?;
    // (ω/4)|ΔQ̂|² grows like 1/ω, so the window must stay clear of ω = 0.
    require(window.center > 8.0 * window.width, "window", || {
        format!("centre {} is within 8 widths of zero", window.center)
    })?;
    let lp = SegmentedLoop::new(traj, max_velocity_change)?;
    let lo = window.center - 8.0 * window.width;
    let hi = window.center + 8.0 * window.width;
    let h_max = (PI / traj.duration()).min(0.25 * window.width);
    let n_panels = ((hi - lo) / h_max).ceil().max(1.0) as usize;
    let h = (hi - lo) / n_panels as f64;
    let w_rule = rule(8);
    let back = wv.rotated(PI);
    let mut residual = NeumaierSum::default();
    let mut diagonal = NeumaierSum::default();
    for p in 0..n_panels {
        let c = lo + (p as f64 + 0.5) * h;
        for &(x, w) in &w_rule {
            let omega = c + 0.5 * h * x;
            let weight = 0.5 * h * w * window.weight(omega) * omega / 4.0;
            let full = qhat_brute(traj, omega, wv, spec)?.norm_sqr() + qhat_brute(traj, omega, &back, spec)?.norm_sqr();
            let diag = lp.diagonal_qhat_sq(omega, wv)? + lp.diagonal_qhat_sq(omega, &back)?;
            residual.add(weight * (full - diag));
            diagonal.add(weight * diag);
        }
    }
    Ok(CrossTerm {
        residual: residual.sum().abs(),
        diagonal: diagonal.sum(),
    })
}
