//! Flat `key = value` run configuration.
//!
//! Keys are lowercase snake case. Model keys match the fields of
//! [`FullModelParams`]; the rest control sampling, grids and output.
//! `#` starts a comment, blank lines are ignored, and later assignments win.

use std::fmt;
use std::path::Path;

use ddesim_core::{ConcurrenceVariant, FullModelParams, RelaxationOperator};

/// Where a setting came from, for error messages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Flag,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Flag => f.write_str("--set"),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("{origin}: expected `key = value`, got `{text}`")]
    Syntax { origin: Origin, text: String },
    #[error("{origin}: unknown key `{key}`")]
    UnknownKey { origin: Origin, key: String },
    #[error("{origin}: invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue {
        origin: Origin,
        key: String,
        value: String,
        reason: String,
    },
    #[error("cannot read config `{path}`: {reason}")]
    Read { path: String, reason: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Partially specified grid axis; unset parts fall back to command defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AxisSettings {
    pub name: Option<String>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub params: FullModelParams,
    /// End of the population time series; defaults to two Rabi cycles.
    pub t_max: Option<f64>,
    pub n_times: usize,
    /// τ range of correlation traces; per-parameter default when unset.
    pub tau_max: Option<f64>,
    pub n_samples: usize,
    pub axis1: AxisSettings,
    pub axis2: AxisSettings,
    pub concurrence_variant: ConcurrenceVariant,
    pub pi_units: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: FullModelParams::default(),
            t_max: None,
            n_times: 201,
            tau_max: None,
            n_samples: ddesim_core::observables::DEFAULT_SAMPLES,
            axis1: AxisSettings::default(),
            axis2: AxisSettings::default(),
            concurrence_variant: ConcurrenceVariant::Standard,
            pi_units: false,
        }
    }
}

/// Every key [`RunConfig::set`] accepts.
pub fn known_keys() -> Vec<&'static str> {
    let mut keys = FullModelParams::REAL_FIELDS.to_vec();
    keys.extend([
        "n_max",
        "relaxation_operator",
        "t_max",
        "n_times",
        "tau_max",
        "n_samples",
        "axis1",
        "axis1_min",
        "axis1_max",
        "axis1_points",
        "axis2",
        "axis2_min",
        "axis2_max",
        "axis2_points",
        "concurrence_variant",
        "pi_units",
    ]);
    keys
}

fn invalid(origin: &Origin, key: &str, value: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        origin: origin.clone(),
        key: key.to_owned(),
        value: value.to_owned(),
        reason: reason.into(),
    }
}

fn real(origin: &Origin, key: &str, value: &str) -> Result<f64, ConfigError> {
    let v: f64 = value
        .parse()
        .map_err(|_| invalid(origin, key, value, "not a number"))?;
    if !v.is_finite() {
        return Err(invalid(origin, key, value, "must be finite"));
    }
    Ok(v)
}

fn count(origin: &Origin, key: &str, value: &str) -> Result<usize, ConfigError> {
    value
        .parse()
        .map_err(|_| invalid(origin, key, value, "not a nonnegative integer"))
}

fn flag(origin: &Origin, key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(invalid(origin, key, value, "expected true or false")),
    }
}

impl RunConfig {
    /// Applies one assignment.
    pub fn set(&mut self, key: &str, value: &str, origin: Origin) -> Result<(), ConfigError> {
        let o = &origin;
        if FullModelParams::REAL_FIELDS.contains(&key) {
            let v = real(o, key, value)?;
            return self
                .params
                .set(key, v)
                .map_err(|e| invalid(o, key, value, e.to_string()));
        }
        match key {
            "n_max" => self.params.n_max = count(o, key, value)?,
            "relaxation_operator" => {
                self.params.relaxation = value
                    .parse::<RelaxationOperator>()
                    .map_err(|_| invalid(o, key, value, "expected lower or raise"))?
            }
            "t_max" => self.t_max = Some(real(o, key, value)?),
            "n_times" => self.n_times = count(o, key, value)?,
            "tau_max" => self.tau_max = Some(real(o, key, value)?),
            "n_samples" => self.n_samples = count(o, key, value)?,
            "concurrence_variant" => {
                self.concurrence_variant = match value {
                    "standard" => ConcurrenceVariant::Standard,
                    "literal" => ConcurrenceVariant::Literal,
                    _ => return Err(invalid(o, key, value, "expected standard or literal")),
                }
            }
            "pi_units" => self.pi_units = flag(o, key, value)?,
            _ => {
                let (target, field) = match key.split_once('_') {
                    Some(("axis1", f)) => (&mut self.axis1, Some(f)),
                    Some(("axis2", f)) => (&mut self.axis2, Some(f)),
                    _ if key == "axis1" => (&mut self.axis1, None),
                    _ if key == "axis2" => (&mut self.axis2, None),
                    _ => {
                        return Err(ConfigError::UnknownKey {
                            origin,
                            key: key.to_owned(),
                        })
                    }
                };
                match field {
                    None => {
                        if !FullModelParams::REAL_FIELDS.contains(&value) {
                            return Err(invalid(o, key, value, "not a sweepable model parameter"));
                        }
                        target.name = Some(value.to_owned());
                    }
                    Some("min") => target.min = Some(real(o, key, value)?),
                    Some("max") => target.max = Some(real(o, key, value)?),
                    Some("points") => target.points = Some(count(o, key, value)?),
                    Some(_) => {
                        return Err(ConfigError::UnknownKey {
                            origin,
                            key: key.to_owned(),
                        })
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks the cross-field rules after all assignments.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.params
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if self.n_times < 2 {
            return Err(ConfigError::Invalid("n_times must be at least 2".into()));
        }
        if !(self.n_samples >= ddesim_core::observables::MIN_SAMPLES
            && self.n_samples.is_power_of_two())
        {
            return Err(ConfigError::Invalid(format!(
                "n_samples must be a power of two >= {}",
                ddesim_core::observables::MIN_SAMPLES
            )));
        }
        for (name, v) in [("t_max", self.t_max), ("tau_max", self.tau_max)] {
            if v.is_some_and(|t| t <= 0.0) {
                return Err(ConfigError::Invalid(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

/// Parses config text, then applies `overrides` (`key=value`) on top.
pub fn parse_config(text: &str, overrides: &[String]) -> Result<RunConfig, ConfigError> {
    let mut config = RunConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let origin = Origin::Line(idx + 1);
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            origin: origin.clone(),
            text: line.to_owned(),
        })?;
        config.set(key.trim(), value.trim(), origin)?;
    }
    for item in overrides {
        let (key, value) = item.split_once('=').ok_or_else(|| ConfigError::Syntax {
            origin: Origin::Flag,
            text: item.clone(),
        })?;
        config.set(key.trim(), value.trim(), Origin::Flag)?;
    }
    config.validate()?;
    Ok(config)
}

/// Reads `path` (if given) and applies `overrides`.
pub fn load_config(path: Option<&Path>, overrides: &[String]) -> Result<RunConfig, ConfigError> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| ConfigError::Read {
            path: p.display().to_string(),
            reason: e.to_string(),
        })?,
        None => String::new(),
    };
    parse_config(&text, overrides)
}

/// Resolved settings as `(key, value)` pairs, in [`known_keys`] order.
pub fn resolved_pairs(config: &RunConfig) -> Vec<(String, String)> {
    let p = &config.params;
    let opt = |v: Option<f64>| v.map_or_else(|| "auto".to_owned(), |x| format!("{x:e}"));
    let mut out: Vec<(String, String)> = FullModelParams::REAL_FIELDS
        .iter()
        .map(|k| (k.to_string(), format!("{:e}", p.get(k).unwrap())))
        .collect();
    out.push(("n_max".into(), p.n_max.to_string()));
    out.push(("relaxation_operator".into(), p.relaxation.as_str().into()));
    out.push(("t_max".into(), opt(config.t_max)));
    out.push(("n_times".into(), config.n_times.to_string()));
    out.push(("tau_max".into(), opt(config.tau_max)));
    out.push(("n_samples".into(), config.n_samples.to_string()));
    out.push((
        "concurrence_variant".into(),
        match config.concurrence_variant {
            ConcurrenceVariant::Standard => "standard",
            ConcurrenceVariant::Literal => "literal",
        }
        .into(),
    ));
    out.push(("pi_units".into(), config.pi_units.to_string()));
    out
}
