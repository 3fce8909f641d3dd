//! Plain-text trajectory tables: one `t x y` triple per line, `#` comments,
//! and a header `# units: time=<unit>, length=<unit>, v=<unit>`.

use std::path::Path;

use thiserror::Error;

use super::path::{Node, Trajectory};
use crate::units::{parse_scale, Dimension, SystemGuard, UnitError, UnitSystem};

#[derive(Debug, Error)]
pub enum TrajectoryFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Unit {
        line: usize,
        #[source]
        source: UnitError,
    },
    #[error("missing `# units:` header")]
    MissingUnits,
    #[error(transparent)]
    Invalid(#[from] crate::Error),
}

/// A parsed table in internal units.
#[derive(Debug, Clone)]
pub struct TrajectoryFile {
    pub trajectory: Trajectory,
    pub system: UnitSystem,
}

struct Units {
    time: f64,
    length: f64,
    speed: f64,
    system: UnitSystem,
}

fn parse_units(spec: &str, line: usize) -> Result<Units, TrajectoryFileError> {
    let (mut time, mut length, mut speed) = (None, None, None);
    let mut guard = SystemGuard::default();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = item.split_once('=').ok_or_else(|| TrajectoryFileError::Syntax {
            line,
            message: format!("expected key=unit, found `{item}`"),
        })?;
        let dim = match key.trim() {
            "time" => Dimension::Time,
            "length" => Dimension::Length,
            "v" => Dimension::Speed,
            other => {
                return Err(TrajectoryFileError::Syntax {
                    line,
                    message: format!("unknown units key `{other}`"),
                })
            }
        };
        let q = parse_scale(value, dim).map_err(|source| TrajectoryFileError::Unit { line, source })?;
        let factor = guard
            .admit(q)
            .map_err(|source| TrajectoryFileError::Unit { line, source })?;
        match dim {
            Dimension::Time => time = Some(factor),
            Dimension::Length => length = Some(factor),
            _ => speed = Some(factor),
        }
    }
    let missing = |name: &str| TrajectoryFileError::Syntax {
        line,
        message: format!("units header lacks `{name}`"),
    };
    Ok(Units {
        time: time.ok_or_else(|| missing("time"))?,
        length: length.ok_or_else(|| missing("length"))?,
        speed: speed.ok_or_else(|| missing("v"))?,
        system: guard.system(),
    })
}

/// Parse a trajectory table from text.
pub fn parse_trajectory(text: &str) -> Result<TrajectoryFile, TrajectoryFileError> {
    let mut units = None;
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(spec) = comment.trim().strip_prefix("units:") {
                units = Some(parse_units(spec, line)?);
            }
            continue;
        }
        let data = trimmed.split('#').next().unwrap_or("").trim();
        if data.is_empty() {
            continue;
        }
        let fields: Vec<&str> = data.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(TrajectoryFileError::Syntax {
                line,
                message: format!("expected 3 columns `t x y`, found {}", fields.len()),
            });
        }
        let mut vals = [0.0; 3];
        for (v, f) in vals.iter_mut().zip(&fields) {
            *v = f.parse().map_err(|_| TrajectoryFileError::Syntax {
                line,
                message: format!("`{f}` is not a number"),
            })?;
        }
        rows.push(vals);
    }
    let units = units.ok_or(TrajectoryFileError::MissingUnits)?;
    let nodes = rows
        .iter()
        .map(|[t, x, y]| Node::new(t * units.time, x * units.length, y * units.length))
        .collect();
    let trajectory = Trajectory::new(nodes, units.speed)?;
    Ok(TrajectoryFile {
        trajectory,
        system: units.system,
    })
}

pub fn read_trajectory(path: &Path) -> Result<TrajectoryFile, TrajectoryFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| TrajectoryFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_trajectory(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_table_with_units() {
        let text = "# units: time=ns, length=nm, v=m/s\n0 0 0\n1 2 0 # tip\n\n2 0 0\n";
        let f = parse_trajectory(text).unwrap();
        assert_eq!(f.system, UnitSystem::Si);
        let nodes = f.trajectory.nodes();
        assert_eq!(nodes.len(), 3);
        assert!((nodes[1].t - 1e-9).abs() < 1e-24 && (nodes[1].x - 2e-9).abs() < 1e-24);
        assert!(f.trajectory.is_closed());
    }

    #[test]
    fn natural_units() {
        let f = parse_trajectory("# units: time=nat, length=nat, v=nat\n0 0 0\n1 1 1\n").unwrap();
        assert_eq!(f.system, UnitSystem::Natural);
        assert_eq!(f.trajectory.speed_scale(), 1.0);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_trajectory("# units: time=s, length=m, v=m/s\n0 0 0\n1 x 0\n").unwrap_err();
        assert!(matches!(err, TrajectoryFileError::Syntax { line: 3, .. }), "{err}");
        let err = parse_trajectory("# units: time=s, length=m, v=m/s\n0 0\n").unwrap_err();
        assert!(matches!(err, TrajectoryFileError::Syntax { line: 2, .. }));
        assert!(matches!(
            parse_trajectory("0 0 0\n1 1 0\n"),
            Err(TrajectoryFileError::MissingUnits)
        ));
        let mixed = parse_trajectory("# units: time=s, length=nat, v=m/s\n0 0 0\n1 1 0\n").unwrap_err();
        assert!(matches!(mixed, TrajectoryFileError::Unit { line: 1, .. }));
    }

    #[test]
    fn rejects_non_increasing_times() {
        let err = parse_trajectory("# units: time=s, length=m, v=m/s\n0 0 0\n0 1 0\n").unwrap_err();
        assert!(matches!(err, TrajectoryFileError::Invalid(_)));
    }
}
