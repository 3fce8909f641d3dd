use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{require, Error, Result};

/// Default bound on the relative velocity change inside one segment.
pub const DEFAULT_MAX_VELOCITY_CHANGE: f64 = 0.01;

/// Closure tolerance relative to the path's extent.
const CLOSURE_RTOL: f64 = 1e-12;

/// In-plane wave vector in polar form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVector {
    pub k: f64,
    pub phi: f64,
}

impl WaveVector {
    pub fn new(k: f64, phi: f64) -> Result<Self> {
        require(k >= 0.0 && k.is_finite(), "k", || {
            format!("{k} must be finite and non-negative")
        })?;
        require(phi.is_finite(), "phi", || format!("{phi} must be finite"))?;
        Ok(Self { k, phi })
    }

    pub fn kx(&self) -> f64 {
        self.k * self.phi.cos()
    }

    pub fn ky(&self) -> f64 {
        self.k * self.phi.sin()
    }

    pub fn rotated(&self, angle: f64) -> Self {
        Self {
            k: self.k,
            phi: self.phi + angle,
        }
    }

    /// k · (x, y).
    pub fn dot(&self, x: f64, y: f64) -> f64 {
        let (s, c) = self.phi.sin_cos();
        self.k * (c * x + s * y)
    }
}

/// One sample of the in-plane path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

impl Node {
    pub fn new(t: f64, x: f64, y: f64) -> Self {
        Self { t, x, y }
    }
}

/// Piecewise-linear relative path (x(t), y(t)) = v (q_x(t), q_y(t)).
///
/// Positions are taken relative to the first node, so q vanishes at the start.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    nodes: Vec<Node>,
    speed_scale: f64,
}

impl Trajectory {
    pub fn new(nodes: Vec<Node>, speed_scale: f64) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Trajectory(format!("need at least 2 nodes, got {}", nodes.len())));
        }
        require(speed_scale > 0.0 && speed_scale.is_finite(), "speed_scale", || {
            format!("{speed_scale} must be positive")
        })?;
        for (i, n) in nodes.iter().enumerate() {
            if !(n.t.is_finite() && n.x.is_finite() && n.y.is_finite()) {
                return Err(Error::Trajectory(format!("node {i} has a non-finite coordinate")));
            }
        }
        if let Some(i) = nodes.windows(2).position(|w| w[1].t <= w[0].t) {
            return Err(Error::Trajectory(format!(
                "times must increase strictly (node {} at t = {} follows t = {})",
                i + 1,
                nodes[i + 1].t,
                nodes[i].t
            )));
        }
        Ok(Self { nodes, speed_scale })
    }

    /// Out along `direction` at constant `speed` for `leg_duration`, then back.
    pub fn rectilinear_loop(speed: f64, leg_duration: f64, direction: f64) -> Result<Self> {
        require(leg_duration > 0.0, "leg_duration", || {
            format!("{leg_duration} must be positive")
        })?;
        let reach = speed * leg_duration;
        let (s, c) = direction.sin_cos();
        Self::new(
            vec![
                Node::new(0.0, 0.0, 0.0),
                Node::new(leg_duration, reach * c, reach * s),
                Node::new(2.0 * leg_duration, 0.0, 0.0),
            ],
            if speed == 0.0 { 1.0 } else { speed.abs() },
        )
    }

    /// Closed polygon through `vertices` traversed at constant `speed`; the
    /// first vertex is revisited at the end.
    pub fn polygon_loop(vertices: &[(f64, f64)], speed: f64) -> Result<Self> {
        require(speed > 0.0, "speed", || format!("{speed} must be positive"))?;
        require(vertices.len() >= 2, "vertices", || "need at least two vertices".into())?;
        let mut nodes = Vec::with_capacity(vertices.len() + 1);
        let mut t = 0.0;
        let mut prev = vertices[0];
        nodes.push(Node::new(0.0, prev.0, prev.1));
        for &v in vertices[1..].iter().chain(std::iter::once(&vertices[0])) {
            t += (v.0 - prev.0).hypot(v.1 - prev.1) / speed;
            nodes.push(Node::new(t, v.0, v.1));
            prev = v;
        }
        Self::new(nodes, speed)
    }

    /// Circle of `radius` discretised into `n_nodes` chords, traversed once at
    /// constant angular rate with nominal `speed`.
    pub fn circle(radius: f64, speed: f64, n_nodes: usize) -> Result<Self> {
        require(radius > 0.0, "radius", || format!("{radius} must be positive"))?;
        require(speed > 0.0, "speed", || format!("{speed} must be positive"))?;
        require(n_nodes >= 3, "n_nodes", || format!("{n_nodes} is too few for a circle"))?;
        let period = TAU * radius / speed;
        let nodes = (0..=n_nodes)
            .map(|i| {
                let frac = i as f64 / n_nodes as f64;
                let angle = if i == n_nodes { 0.0 } else { TAU * frac };
                Node::new(period * frac, radius * (angle.cos() - 1.0), radius * angle.sin())
            })
            .collect();
        Self::new(nodes, speed)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn speed_scale(&self) -> f64 {
        self.speed_scale
    }

    pub fn start_time(&self) -> f64 {
        self.nodes[0].t
    }

    pub fn end_time(&self) -> f64 {
        self.nodes[self.nodes.len() - 1].t
    }

    pub fn duration(&self) -> f64 {
        self.end_time() - self.start_time()
    }

    /// Total distance travelled.
    pub fn path_length(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|w| (w[1].x - w[0].x).hypot(w[1].y - w[0].y))
            .sum()
    }

    /// Diagonal of the bounding box of all nodes.
    pub fn extent(&self) -> f64 {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for n in &self.nodes {
            x0 = x0.min(n.x);
            x1 = x1.max(n.x);
            y0 = y0.min(n.y);
            y1 = y1.max(n.y);
        }
        (x1 - x0).hypot(y1 - y0)
    }

    pub fn closure_gap(&self) -> f64 {
        let a = self.nodes[0];
        let b = self.nodes[self.nodes.len() - 1];
        (b.x - a.x).hypot(b.y - a.y)
    }

    pub fn is_closed(&self) -> bool {
        self.closure_gap() <= CLOSURE_RTOL * self.extent()
    }

    pub fn ensure_closed(&self) -> Result<()> {
        if self.is_closed() {
            Ok(())
        } else {
            Err(Error::OpenLoop {
                gap: self.closure_gap(),
                tolerance: CLOSURE_RTOL * self.extent(),
            })
        }
    }

    /// Position relative to the start node, linearly interpolated.
    pub fn displacement(&self, t: f64) -> Result<(f64, f64)> {
        if !(t >= self.start_time() && t <= self.end_time()) {
            return Err(Error::Domain {
                quantity: "t",
                value: t,
                reason: "outside the trajectory's time span",
            });
        }
        let i = self.nodes.partition_point(|n| n.t <= t).clamp(1, self.nodes.len() - 1);
        let (a, b) = (self.nodes[i - 1], self.nodes[i]);
        let s = (t - a.t) / (b.t - a.t);
        let origin = self.nodes[0];
        Ok((a.x + s * (b.x - a.x) - origin.x, a.y + s * (b.y - a.y) - origin.y))
    }

    /// Same path traversed backwards over the same time span.
    pub fn reversed(&self) -> Self {
        let (ts, te) = (self.start_time(), self.end_time());
        let nodes = self
            .nodes
            .iter()
            .rev()
            .map(|n| Node::new(ts + te - n.t, n.x, n.y))
            .collect();
        Self {
            nodes,
            speed_scale: self.speed_scale,
        }
    }

    /// Rotated rigidly about the start node.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let o = self.nodes[0];
        let nodes = self
            .nodes
            .iter()
            .map(|n| {
                let (dx, dy) = (n.x - o.x, n.y - o.y);
                Node::new(n.t, o.x + c * dx - s * dy, o.y + s * dx + c * dy)
            })
            .collect();
        Self {
            nodes,
            speed_scale: self.speed_scale,
        }
    }

    /// Positions multiplied by `factor` at unchanged times.
    pub fn scaled(&self, factor: f64) -> Self {
        let o = self.nodes[0];
        let nodes = self
            .nodes
            .iter()
            .map(|n| Node::new(n.t, o.x + factor * (n.x - o.x), o.y + factor * (n.y - o.y)))
            .collect();
        Self {
            nodes,
            speed_scale: self.speed_scale,
        }
    }
}

/// Straight piece of a path on [t0 − τ, t0 + τ].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub t0: f64,
    pub tau: f64,
    pub q0x: f64,
    pub q0y: f64,
    pub qdotx: f64,
    pub qdoty: f64,
    pub speed_scale: f64,
}

impl Segment {
    /// Segment with midpoint position `(x0, y0)` and velocity `(ux, uy)` in
    /// physical units; `speed_scale` only fixes the normalisation of q.
    pub fn from_motion(
        t0: f64,
        tau: f64,
        position: (f64, f64),
        velocity: (f64, f64),
        speed_scale: f64,
    ) -> Result<Self> {
        require(tau > 0.0 && tau.is_finite(), "tau", || {
            format!("{tau} must be positive")
        })?;
        require(speed_scale > 0.0, "speed_scale", || {
            format!("{speed_scale} must be positive")
        })?;
        let seg = Self {
            t0,
            tau,
            q0x: position.0 / speed_scale,
            q0y: position.1 / speed_scale,
            qdotx: velocity.0 / speed_scale,
            qdoty: velocity.1 / speed_scale,
            speed_scale,
        };
        require(seg.qdot().is_finite(), "velocity", || "non-finite velocity".into())?;
        Ok(seg)
    }

    pub fn start(&self) -> f64 {
        self.t0 - self.tau
    }

    pub fn end(&self) -> f64 {
        self.t0 + self.tau
    }

    /// |q̇|.
    pub fn qdot(&self) -> f64 {
        self.qdotx.hypot(self.qdoty)
    }

    pub fn velocity(&self) -> (f64, f64) {
        (self.speed_scale * self.qdotx, self.speed_scale * self.qdoty)
    }

    pub fn midpoint(&self) -> (f64, f64) {
        (self.speed_scale * self.q0x, self.speed_scale * self.q0y)
    }

    /// Doppler frequency k · v q̇ of this segment.
    pub fn doppler(&self, wv: &WaveVector) -> f64 {
        let (ux, uy) = self.velocity();
        wv.dot(ux, uy)
    }

    /// Phase k · v q(t0) at the midpoint.
    pub fn phase(&self, wv: &WaveVector) -> f64 {
        let (x, y) = self.midpoint();
        wv.dot(x, y)
    }
}

/// Q(t) = exp(−i k·x(t)) − 1.
pub fn q_factor(t: f64, traj: &Trajectory, wv: &WaveVector) -> Result<Complex64> {
    let (x, y) = traj.displacement(t)?;
    Ok(Complex64::from_polar(1.0, -wv.dot(x, y)) - 1.0)
}

fn relative_change(a: (f64, f64), b: (f64, f64)) -> f64 {
    let scale = a.0.hypot(a.1).max(b.0.hypot(b.1));
    if scale == 0.0 {
        0.0
    } else {
        (a.0 - b.0).hypot(a.1 - b.1) / scale
    }
}

/// Group consecutive legs whose velocity stays within `max_velocity_change`
/// (relative, direction and magnitude together) of the group's first leg.
///
/// Each group becomes one segment along the chord between its end nodes, so
/// the segments tile the time span and reproduce the node positions exactly.
pub fn segmentize(traj: &Trajectory, max_velocity_change: f64) -> Vec<Segment> {
    let nodes = traj.nodes();
    let origin = nodes[0];
    let v = traj.speed_scale();
    let leg_velocity = |i: usize| {
        let (a, b) = (nodes[i], nodes[i + 1]);
        ((b.x - a.x) / (b.t - a.t), (b.y - a.y) / (b.t - a.t))
    };
    let mut out = Vec::new();
    let mut first = 0;
    while first + 1 < nodes.len() {
        let reference = leg_velocity(first);
        let mut last = first + 1;
        while last + 1 < nodes.len() && relative_change(reference, leg_velocity(last)) < max_velocity_change {
            last += 1;
        }
        let (a, b) = (nodes[first], nodes[last]);
        let tau = 0.5 * (b.t - a.t);
        out.push(Segment {
            t0: 0.5 * (a.t + b.t),
            tau,
            q0x: (0.5 * (a.x + b.x) - origin.x) / v,
            q0y: (0.5 * (a.y + b.y) - origin.y) / v,
            qdotx: (b.x - a.x) / (2.0 * tau * v),
            qdoty: (b.y - a.y) / (2.0 * tau * v),
            speed_scale: v,
        });
        first = last;
    }
    out
}

/// Angle of the segment velocity, or 0 for a pause.
pub fn velocity_angle(seg: &Segment) -> f64 {
    if seg.qdot() == 0.0 {
        0.0
    } else {
        seg.qdoty.atan2(seg.qdotx).rem_euclid(TAU)
    }
}
