//! Closed-loop relative motion and its spectral factors.

mod file;
mod path;
mod spectral;

pub use file::{parse_trajectory, read_trajectory, TrajectoryFile, TrajectoryFileError};
pub use path::{
    q_factor, segmentize, velocity_angle, Node, Segment, Trajectory, WaveVector, DEFAULT_MAX_VELOCITY_CHANGE,
};
pub use spectral::{
    delta_i, delta_i_limit, delta_qhat, delta_qhat_reversed, matched_interval, sinc_factor, spectral_i, DeltaTerm,
    MatchedInterval, SegmentedLoop, SpectralI, SpectralMode, RESONANCE_SERIES_THRESHOLD,
};
