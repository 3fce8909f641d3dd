//! Run configuration.
//!
//! A TOML document with the sections `[metal]`, `[plates]`, `[trajectory]`,
//! `[quadrature]` and `[run]`. Physical values are strings carrying a unit
//! suffix (`gap = "10 nm"`, `gap = "1 nat"`); one run uses one unit system.
//! Any key can be overridden from the environment as `CF_<SECTION>_<KEY>`,
//! e.g. `CF_PLATES_GAP="2 nat"`.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use casimir_friction::dissipation::{PlateConfig, QuadratureSpec};
use casimir_friction::response::{DrudeMetal, ThermalState};
use casimir_friction::trajectory::{parse_trajectory, Trajectory, TrajectoryFileError};
use casimir_friction::units::{parse_quantity, Dimension, SystemGuard, UnitSystem};
use sha2::{Digest, Sha256};
use toml::{Table, Value};

use crate::error::CliError;

const SECTIONS: [(&str, &[&str]); 5] = [
    (
        "metal",
        &["plasma_frequency", "relaxation", "density", "dissipation_constant"],
    ),
    ("plates", &["gap", "temperature", "beta", "rho1", "rho2", "radius"]),
    (
        "trajectory",
        &[
            "file",
            "shape",
            "speed",
            "leg_duration",
            "direction",
            "radius",
            "nodes",
            "vertices",
            "max_velocity_change",
        ],
    ),
    ("quadrature", &["rel_tol", "k_max_factor", "m_max", "max_subdivisions"]),
    (
        "run",
        &[
            "v",
            "omega",
            "radius",
            "gap",
            "n_annuli",
            "pipeline",
            "suite",
            "draws",
            "seed",
            "pair_periods",
        ],
    ),
];

/// Settings that come from outside the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    /// Environment pairs; only `CF_<SECTION>_<KEY>` entries are used.
    pub env: Vec<(String, String)>,
    /// Replaces `[quadrature] rel_tol`.
    pub tolerance: Option<f64>,
}

impl Overrides {
    pub fn from_process_env(tolerance: Option<f64>) -> Self {
        Self {
            env: std::env::vars().collect(),
            tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnnuliChoice {
    Adaptive,
    Fixed(usize),
}

/// The `[run]` section: grids and verification settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub v: Vec<f64>,
    pub omega: Vec<f64>,
    pub radius: Option<Vec<f64>>,
    pub gap: Option<Vec<f64>>,
    pub annuli: AnnuliChoice,
    /// Add a column with the force from the full dissipation pipeline.
    pub pipeline: bool,
    /// Checks to run; `None` selects the default suite.
    pub suite: Option<Vec<String>>,
    pub draws: usize,
    pub seed: u64,
    /// Duration of the pair-level oracle loop in response periods.
    pub pair_periods: f64,
}

impl Default for RunSpec {
    fn default() -> Self {
        Self {
            v: Vec::new(),
            omega: Vec::new(),
            radius: None,
            gap: None,
            annuli: AnnuliChoice::Adaptive,
            pipeline: false,
            suite: None,
            draws: 100,
            seed: 1,
            pair_periods: 200.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    pub system: UnitSystem,
    pub metal: Option<DrudeMetal>,
    pub plates: Option<PlateConfig>,
    /// Disc radius from `[plates]`.
    pub radius: Option<f64>,
    pub trajectory: Option<Trajectory>,
    pub quadrature: QuadratureSpec,
    pub run: RunSpec,
    /// SHA-256 of the effective configuration (after overrides) and any
    /// referenced trajectory file.
    pub hash: String,
    name: String,
}

impl Config {
    /// Read and parse a config file.
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse {
            location: path.display().to_string(),
            message: format!("cannot read config: {e}"),
        })?;
        Self::parse(&text, Some(path), overrides)
    }

    /// Parse config text; `origin` names the file in messages and anchors
    /// relative trajectory paths.
    pub fn parse(text: &str, origin: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let name = origin.map_or_else(|| "<config>".to_string(), |p| p.display().to_string());
        let mut table: Table = text.parse().map_err(|e: toml::de::Error| CliError::Parse {
            location: match e.span() {
                Some(span) => format!("{name}:{}", line_at(text, span.start)),
                None => name.clone(),
            },
            message: e.message().to_string(),
        })?;
        let mut doc = Doc {
            text,
            name,
            from_env: BTreeSet::new(),
            guard: SystemGuard::default(),
        };
        doc.check_layout(&table)?;
        doc.apply_env(&mut table, &overrides.env)?;
        if let Some(tol) = overrides.tolerance {
            section_mut(&mut table, "quadrature").insert("rel_tol".into(), Value::Float(tol));
        }

        let mut hasher = Sha256::new();
        hasher.update(toml::to_string(&table).unwrap_or_default().as_bytes());

        let metal = doc.metal(&table)?;
        let (plates, radius) = doc.plates(&table, metal.as_ref())?;
        let base = origin.and_then(Path::parent).map(Path::to_path_buf);
        let trajectory = doc.trajectory(&table, base.as_deref(), &mut hasher)?;
        let mut quadrature = doc.quadrature(&table)?;
        if let Some(m) = doc.number(&table, "trajectory", "max_velocity_change")? {
            quadrature.max_velocity_change = m;
        }
        quadrature
            .validate()
            .map_err(|e| doc.err("quadrature", "rel_tol", e.to_string()))?;
        let run = doc.run(&table)?;

        Ok(Self {
            system: doc.guard.system(),
            metal,
            plates,
            radius,
            trajectory,
            quadrature,
            run,
            hash: hex::encode(hasher.finalize()),
            name: doc.name,
        })
    }

    pub fn require_metal(&self) -> Result<DrudeMetal, CliError> {
        self.metal.ok_or_else(|| self.missing("[metal]"))
    }

    pub fn require_plates(&self) -> Result<PlateConfig, CliError> {
        self.plates.ok_or_else(|| self.missing("[plates]"))
    }

    pub fn require_trajectory(&self) -> Result<&Trajectory, CliError> {
        self.trajectory.as_ref().ok_or_else(|| self.missing("[trajectory]"))
    }

    fn missing(&self, what: &str) -> CliError {
        CliError::Parse {
            location: self.name.clone(),
            message: format!("this command needs a {what} section"),
        }
    }

    pub fn missing_key(&self, section: &str, key: &str) -> CliError {
        CliError::Parse {
            location: self.name.clone(),
            message: format!("[{section}] {key} is required by this command"),
        }
    }
}

fn line_at(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Line of `key = ...` inside `[section]`, by a plain scan of the text.
fn key_line(text: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix('[') {
            current = rest.trim_end_matches(']').trim().to_string();
            continue;
        }
        if current == section {
            if let Some((k, _)) = line.split_once('=') {
                if k.trim().trim_matches('"') == key {
                    return Some(i + 1);
                }
            }
        }
    }
    None
}

fn section_mut<'t>(table: &'t mut Table, section: &str) -> &'t mut Table {
    let entry = table.entry(section).or_insert_with(|| Value::Table(Table::new()));
    match entry {
        Value::Table(t) => t,
        _ => unreachable!("layout checked before overrides"),
    }
}

fn describe(v: &Value) -> &'static str {
    v.type_str()
}

struct Doc<'a> {
    text: &'a str,
    name: String,
    from_env: BTreeSet<(String, String)>,
    guard: SystemGuard,
}

impl Doc<'_> {
    fn location(&self, section: &str, key: &str) -> String {
        if self.from_env.contains(&(section.to_string(), key.to_string())) {
            return format!("environment CF_{}_{}", section.to_uppercase(), key.to_uppercase());
        }
        match key_line(self.text, section, key) {
            Some(line) => format!("{}:{line}", self.name),
            None => self.name.clone(),
        }
    }

    fn err(&self, section: &str, key: &str, message: impl Into<String>) -> CliError {
        CliError::Parse {
            location: self.location(section, key),
            message: format!("[{section}] {key}: {}", message.into()),
        }
    }

    fn check_layout(&self, table: &Table) -> Result<(), CliError> {
        for (section, value) in table {
            let Some((_, keys)) = SECTIONS.iter().find(|(s, _)| s == section) else {
                let line = self
                    .text
                    .lines()
                    .position(|l| l.trim().trim_start_matches('[').trim_end_matches(']').trim() == section)
                    .map_or_else(|| self.name.clone(), |i| format!("{}:{}", self.name, i + 1));
                return Err(CliError::Parse {
                    location: line,
                    message: format!("unknown section `{section}`"),
                });
            };
            let Value::Table(entries) = value else {
                return Err(CliError::Parse {
                    location: self.name.clone(),
                    message: format!("`{section}` must be a section, found a {}", describe(value)),
                });
            };
            for key in entries.keys() {
                if !keys.contains(&key.as_str()) {
                    return Err(self.err(
                        section,
                        key,
                        format!("unknown key; expected one of {}", keys.join(", ")),
                    ));
                }
            }
        }
        Ok(())
    }

    fn apply_env(&mut self, table: &mut Table, env: &[(String, String)]) -> Result<(), CliError> {
        let mut sorted: Vec<&(String, String)> = env.iter().collect();
        sorted.sort();
        for (name, raw) in sorted {
            let Some(rest) = name.strip_prefix("CF_") else {
                continue;
            };
            let rest = rest.to_lowercase();
            let Some((section, key)) = rest.split_once('_') else {
                continue;
            };
            let Some((_, keys)) = SECTIONS.iter().find(|(s, _)| *s == section) else {
                continue;
            };
            if !keys.contains(&key) {
                return Err(CliError::Parse {
                    location: format!("environment {name}"),
                    message: format!("[{section}] has no key `{key}`"),
                });
            }
            let value = format!("x = {raw}")
                .parse::<Table>()
                .ok()
                .and_then(|mut t| t.remove("x"))
                .unwrap_or_else(|| Value::String(raw.clone()));
            section_mut(table, section).insert(key.to_string(), value);
            self.from_env.insert((section.to_string(), key.to_string()));
        }
        Ok(())
    }

    fn get<'t>(&self, table: &'t Table, section: &str, key: &str) -> Option<&'t Value> {
        table.get(section).and_then(Value::as_table).and_then(|t| t.get(key))
    }

    fn has_section(&self, table: &Table, section: &str) -> bool {
        table
            .get(section)
            .and_then(Value::as_table)
            .is_some_and(|t| !t.is_empty())
    }

    fn parse_value(&mut self, section: &str, key: &str, value: &Value, dim: Dimension) -> Result<f64, CliError> {
        let text = match value {
            Value::String(s) => s.as_str(),
            Value::Integer(_) | Value::Float(_) => {
                return Err(self.err(section, key, "missing unit suffix (write e.g. \"1 nat\")"));
            }
            other => {
                return Err(self.err(
                    section,
                    key,
                    format!("expected a quantity string, found a {}", describe(other)),
                ))
            }
        };
        let q = parse_quantity(text, dim).map_err(|e| self.err(section, key, e.to_string()))?;
        self.guard.admit(q).map_err(|e| self.err(section, key, e.to_string()))
    }

    fn quantity(&mut self, table: &Table, section: &str, key: &str, dim: Dimension) -> Result<Option<f64>, CliError> {
        match self.get(table, section, key) {
            None => Ok(None),
            Some(v) => self.parse_value(section, key, v, dim).map(Some),
        }
    }

    fn required(&mut self, table: &Table, section: &str, key: &str, dim: Dimension) -> Result<f64, CliError> {
        self.quantity(table, section, key, dim)?
            .ok_or_else(|| self.err(section, key, "missing"))
    }

    fn number(&self, table: &Table, section: &str, key: &str) -> Result<Option<f64>, CliError> {
        match self.get(table, section, key) {
            None => Ok(None),
            Some(Value::Float(x)) => Ok(Some(*x)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(Value::String(s)) => parse_quantity(s, Dimension::Dimensionless)
                .map(|q| Some(q.value))
                .map_err(|e| self.err(section, key, e.to_string())),
            Some(other) => Err(self.err(section, key, format!("expected a number, found a {}", describe(other)))),
        }
    }

    fn count(&self, table: &Table, section: &str, key: &str) -> Result<Option<usize>, CliError> {
        match self.get(table, section, key) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as usize)),
            Some(other) => Err(self.err(section, key, format!("expected a non-negative integer, found {other}"))),
        }
    }

    fn string<'t>(&self, table: &'t Table, section: &str, key: &str) -> Result<Option<&'t str>, CliError> {
        match self.get(table, section, key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(other) => Err(self.err(section, key, format!("expected a string, found a {}", describe(other)))),
        }
    }

    /// A list of quantities, or `{ from, to, points, spacing = "log" | "linear" }`.
    fn grid(&mut self, table: &Table, section: &str, key: &str, dim: Dimension) -> Result<Option<Vec<f64>>, CliError> {
        let Some(value) = self.get(table, section, key) else {
            return Ok(None);
        };
        match value {
            Value::Array(items) => items
                .iter()
                .map(|v| self.parse_value(section, key, v, dim))
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
            Value::String(_) => self.parse_value(section, key, value, dim).map(|x| Some(vec![x])),
            Value::Table(spec) => {
                for k in spec.keys() {
                    if !["from", "to", "points", "spacing"].contains(&k.as_str()) {
                        return Err(self.err(section, key, format!("unknown grid field `{k}`")));
                    }
                }
                let field = |name: &str| {
                    spec.get(name)
                        .ok_or_else(|| self.err(section, key, format!("grid lacks `{name}`")))
                };
                let (from, to) = (field("from")?.clone(), field("to")?.clone());
                let from = self.parse_value(section, key, &from, dim)?;
                let to = self.parse_value(section, key, &to, dim)?;
                let points = match spec.get("points") {
                    Some(Value::Integer(n)) if *n >= 0 => *n as usize,
                    _ => return Err(self.err(section, key, "grid needs a non-negative integer `points`")),
                };
                let log = match spec.get("spacing").map(Value::as_str) {
                    None | Some(Some("linear")) => false,
                    Some(Some("log")) => true,
                    _ => return Err(self.err(section, key, "spacing must be \"log\" or \"linear\"")),
                };
                if log && !(from > 0.0 && to > 0.0) {
                    return Err(self.err(section, key, "a log grid needs positive end points"));
                }
                Ok(Some(grid_points(from, to, points, log)))
            }
            other => Err(self.err(
                section,
                key,
                format!("expected a list or grid table, found a {}", describe(other)),
            )),
        }
    }

    fn metal(&mut self, table: &Table) -> Result<Option<DrudeMetal>, CliError> {
        if !self.has_section(table, "metal") {
            return Ok(None);
        }
        let relaxation = self.required(table, "metal", "relaxation", Dimension::Frequency)?;
        let density = self.required(table, "metal", "density", Dimension::Density)?;
        let wp = self.quantity(table, "metal", "plasma_frequency", Dimension::Frequency)?;
        let d = self.quantity(table, "metal", "dissipation_constant", Dimension::DissipationConstant)?;
        let metal = match (wp, d) {
            (Some(wp), None) => DrudeMetal::new(wp, relaxation, density),
            (None, Some(d)) => DrudeMetal::from_dissipation_constant(d, relaxation, density),
            _ => {
                return Err(self.err(
                    "metal",
                    "plasma_frequency",
                    "give exactly one of plasma_frequency and dissipation_constant",
                ))
            }
        };
        metal.map(Some).map_err(|e| self.err("metal", "density", e.to_string()))
    }

    fn plates(
        &mut self,
        table: &Table,
        metal: Option<&DrudeMetal>,
    ) -> Result<(Option<PlateConfig>, Option<f64>), CliError> {
        if !self.has_section(table, "plates") {
            return Ok((None, None));
        }
        let gap = self.required(table, "plates", "gap", Dimension::Length)?;
        let temperature = self.quantity(table, "plates", "temperature", Dimension::Temperature)?;
        let beta = self.quantity(table, "plates", "beta", Dimension::InverseTemperature)?;
        let thermal = match (temperature, beta) {
            (None, None) => Ok(ThermalState::ZeroTemperature),
            (Some(t), None) => ThermalState::from_temperature(t),
            (None, Some(b)) => ThermalState::from_beta(b),
            (Some(_), Some(_)) => return Err(self.err("plates", "beta", "give temperature or beta, not both")),
        }
        .map_err(|e| self.err("plates", "temperature", e.to_string()))?;
        let default_rho = metal.map(|m| m.density);
        let mut rho = |key: &str| -> Result<f64, CliError> {
            match self.quantity(table, "plates", key, Dimension::Density)? {
                Some(r) => Ok(r),
                None => {
                    default_rho.ok_or_else(|| self.err("plates", key, "missing and no [metal] density to default to"))
                }
            }
        };
        let rho1 = rho("rho1")?;
        let rho2 = rho("rho2")?;
        let radius = self.quantity(table, "plates", "radius", Dimension::Length)?;
        if let Some(r) = radius {
            if !(r > 0.0) {
                return Err(self.err("plates", "radius", format!("{r} must be positive")));
            }
        }
        let config =
            PlateConfig::new(gap, rho1, rho2, thermal).map_err(|e| self.err("plates", "gap", e.to_string()))?;
        Ok((Some(config), radius))
    }

    fn trajectory(
        &mut self,
        table: &Table,
        base: Option<&Path>,
        hasher: &mut Sha256,
    ) -> Result<Option<Trajectory>, CliError> {
        let file = self.string(table, "trajectory", "file")?;
        let shape = self.string(table, "trajectory", "shape")?;
        match (file, shape) {
            (None, None) => Ok(None),
            (Some(_), Some(_)) => Err(self.err("trajectory", "shape", "give either file or shape")),
            (Some(file), None) => {
                let path: PathBuf = match base {
                    Some(dir) if Path::new(file).is_relative() => dir.join(file),
                    _ => PathBuf::from(file),
                };
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| self.err("trajectory", "file", format!("cannot read {}: {e}", path.display())))?;
                hasher.update(text.as_bytes());
                let parsed = parse_trajectory(&text).map_err(|e| {
                    let location = match &e {
                        TrajectoryFileError::Syntax { line, .. } | TrajectoryFileError::Unit { line, .. } => {
                            format!("{}:{line}", path.display())
                        }
                        _ => path.display().to_string(),
                    };
                    CliError::Parse {
                        location,
                        message: e.to_string(),
                    }
                })?;
                self.guard
                    .admit_system(parsed.system)
                    .map_err(|e| self.err("trajectory", "file", e.to_string()))?;
                Ok(Some(parsed.trajectory))
            }
            (None, Some(shape)) => {
                let speed = self.required(table, "trajectory", "speed", Dimension::Speed)?;
                let built = match shape {
                    "rectilinear" => {
                        let leg = self.required(table, "trajectory", "leg_duration", Dimension::Time)?;
                        let direction = self.number(table, "trajectory", "direction")?.unwrap_or(0.0);
                        Trajectory::rectilinear_loop(speed, leg, direction)
                    }
                    "circle" => {
                        let radius = self.required(table, "trajectory", "radius", Dimension::Length)?;
                        let nodes = self.count(table, "trajectory", "nodes")?.unwrap_or(360);
                        Trajectory::circle(radius, speed, nodes)
                    }
                    "polygon" => {
                        let vertices = self.vertices(table)?;
                        Trajectory::polygon_loop(&vertices, speed)
                    }
                    other => {
                        return Err(self.err(
                            "trajectory",
                            "shape",
                            format!("unknown shape `{other}`; expected rectilinear, circle or polygon"),
                        ))
                    }
                };
                built
                    .map(Some)
                    .map_err(|e| self.err("trajectory", "shape", e.to_string()))
            }
        }
    }

    fn vertices(&mut self, table: &Table) -> Result<Vec<(f64, f64)>, CliError> {
        let Some(Value::Array(items)) = self.get(table, "trajectory", "vertices") else {
            return Err(self.err("trajectory", "vertices", "a polygon needs a list of [x, y] pairs"));
        };
        let mut out = Vec::with_capacity(items.len());
        for item in items {
            match item.as_array().map(Vec::as_slice) {
                Some([x, y]) => out.push((
                    self.parse_value("trajectory", "vertices", x, Dimension::Length)?,
                    self.parse_value("trajectory", "vertices", y, Dimension::Length)?,
                )),
                _ => return Err(self.err("trajectory", "vertices", "each vertex must be a pair [x, y]")),
            }
        }
        Ok(out)
    }

    fn quadrature(&mut self, table: &Table) -> Result<QuadratureSpec, CliError> {
        let mut spec = QuadratureSpec::default();
        if let Some(t) = self.number(table, "quadrature", "rel_tol")? {
            spec.rel_tol = t;
        }
        if let Some(k) = self.number(table, "quadrature", "k_max_factor")? {
            spec.k_max_factor = k;
        }
        spec.m_max = self.quantity(table, "quadrature", "m_max", Dimension::Frequency)?;
        if let Some(n) = self.count(table, "quadrature", "max_subdivisions")? {
            spec.max_subdivisions = n;
        }
        Ok(spec)
    }

    fn run(&mut self, table: &Table) -> Result<RunSpec, CliError> {
        let mut run = RunSpec {
            v: self.grid(table, "run", "v", Dimension::Speed)?.unwrap_or_default(),
            omega: self
                .grid(table, "run", "omega", Dimension::Frequency)?
                .unwrap_or_default(),
            radius: self.grid(table, "run", "radius", Dimension::Length)?,
            gap: self.grid(table, "run", "gap", Dimension::Length)?,
            ..RunSpec::default()
        };
        if let Some(bad) = run.radius.iter().chain(&run.gap).flatten().find(|x| !(**x > 0.0)) {
            return Err(self.err("run", "radius", format!("{bad} must be positive")));
        }
        run.annuli = match self.get(table, "run", "n_annuli") {
            None => AnnuliChoice::Adaptive,
            Some(Value::String(s)) if s == "adaptive" => AnnuliChoice::Adaptive,
            Some(Value::Integer(n)) if *n > 0 => AnnuliChoice::Fixed(*n as usize),
            Some(other) => {
                return Err(self.err(
                    "run",
                    "n_annuli",
                    format!("expected a positive integer or \"adaptive\", found {other}"),
                ))
            }
        };
        run.pipeline = match self.get(table, "run", "pipeline") {
            None => false,
            Some(Value::Boolean(b)) => *b,
            Some(other) => return Err(self.err("run", "pipeline", format!("expected true or false, found {other}"))),
        };
        run.suite = match self.get(table, "run", "suite") {
            None => None,
            Some(Value::Array(items)) => Some(
                items
                    .iter()
                    .map(|v| {
                        v.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| self.err("run", "suite", "check names must be strings"))
                    })
                    .collect::<Result<_, _>>()?,
            ),
            Some(other) => {
                return Err(self.err("run", "suite", format!("expected a list of check names, found {other}")))
            }
        };
        if let Some(n) = self.count(table, "run", "draws")? {
            run.draws = n;
        }
        if let Some(s) = self.count(table, "run", "seed")? {
            run.seed = s as u64;
        }
        if let Some(p) = self.number(table, "run", "pair_periods")? {
            if !(p > 0.0) {
                return Err(self.err("run", "pair_periods", format!("{p} must be positive")));
            }
            run.pair_periods = p;
        }
        Ok(run)
    }
}

/// `points` values from `from` to `to` inclusive, evenly spaced in value or
/// in logarithm.
pub fn grid_points(from: f64, to: f64, points: usize, log: bool) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![from],
        n => (0..n)
            .map(|i| {
                let s = i as f64 / (n - 1) as f64;
                if i == n - 1 {
                    to
                } else if log {
                    10f64.powf(from.log10() + (to.log10() - from.log10()) * s)
                } else {
                    from + (to - from) * s
                }
            })
            .collect(),
    }
}
