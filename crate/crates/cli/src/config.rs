//! Run configuration assembled from a `key=value` file and command-line flags.
//!
//! File format: one `key=value` per line, `#` starts a comment line, blank
//! lines are ignored, keys may use `-` or `_`. Later assignments win, and
//! flags are applied after the file.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use qwalk::analysis::Parity;
use thiserror::Error;

use crate::angle::parse_angle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid config: `{field}`: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { field: field.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Evolve,
    EntropyTable,
    Sweep,
    TraceDistance,
    Variance,
    Tomography,
    Verify,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Evolve,
        Command::EntropyTable,
        Command::Sweep,
        Command::TraceDistance,
        Command::Variance,
        Command::Tomography,
        Command::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::EntropyTable => "entropy-table",
            Command::Sweep => "sweep",
            Command::TraceDistance => "trace-distance",
            Command::Variance => "variance",
            Command::Tomography => "tomography",
            Command::Verify => "verify",
        }
    }

    fn default_steps(self) -> usize {
        match self {
            Command::Sweep => 9,
            Command::TraceDistance | Command::Variance => 1000,
            _ => 11,
        }
    }

    fn default_fit_range(self) -> (usize, usize) {
        match self {
            Command::Variance => (100, 1000),
            _ => (10, 1000),
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ConfigError::new("command", format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Which steps of the trace-distance series enter the fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParityFilter {
    #[default]
    All,
    Only(Parity),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub theta: f64,
    pub phi: f64,
    pub steps: Option<usize>,
    pub grid_theta: usize,
    pub grid_phi: usize,
    pub n0: f64,
    pub loss_db: f64,
    pub seed: u64,
    pub seeds: usize,
    pub fit_min: Option<usize>,
    pub fit_max: Option<usize>,
    pub parity: ParityFilter,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub plot: bool,
    pub header: bool,
    pub counts: Option<PathBuf>,
    pub write_counts: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let (theta, phi) = qwalk::observables::OPERATING_POINT;
        RunConfig {
            command: None,
            theta,
            phi,
            steps: None,
            grid_theta: 101,
            grid_phi: 101,
            n0: 1e6,
            loss_db: 3.6,
            seed: 0,
            seeds: 100,
            fit_min: None,
            fit_max: None,
            parity: ParityFilter::All,
            output: None,
            format: Format::Csv,
            plot: false,
            header: true,
            counts: None,
            write_counts: None,
        }
    }
}

fn parse_num<T: FromStr>(field: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.parse::<T>().map_err(|e| ConfigError::new(field, format!("`{value}`: {e}")))
}

fn parse_bool(field: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(ConfigError::new(field, format!("expected a boolean, got `{value}`"))),
    }
}

/// Splits config file text into `(key, value)` pairs in file order.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut pairs = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::new(format!("line {}", n + 1), "expected `key=value`"));
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::new(format!("line {}", n + 1), "empty key"));
        }
        pairs.push((key.replace('-', "_"), value.trim().to_string()));
    }
    Ok(pairs)
}

impl RunConfig {
    /// Applies one assignment. `key` may use `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = key.replace('-', "_");
        let field = key.as_str();
        let angle = |v: &str| parse_angle(v).map_err(|e| ConfigError::new(field, e.to_string()));
        match field {
            "command" => self.command = Some(value.parse()?),
            "theta" => self.theta = angle(value)?,
            "phi" => self.phi = angle(value)?,
            "steps" => self.steps = Some(parse_num(field, value)?),
            "grid_theta" => self.grid_theta = parse_num(field, value)?,
            "grid_phi" => self.grid_phi = parse_num(field, value)?,
            "n0" => self.n0 = parse_num(field, value)?,
            "loss_db" => self.loss_db = parse_num(field, value)?,
            "seed" => self.seed = parse_num(field, value)?,
            "seeds" => self.seeds = parse_num(field, value)?,
            "fit_min" => self.fit_min = Some(parse_num(field, value)?),
            "fit_max" => self.fit_max = Some(parse_num(field, value)?),
            "parity" => {
                self.parity = match value {
                    "all" => ParityFilter::All,
                    "even" => ParityFilter::Only(Parity::Even),
                    "odd" => ParityFilter::Only(Parity::Odd),
                    _ => return Err(ConfigError::new(field, format!("expected all, even or odd, got `{value}`"))),
                }
            }
            "output" => self.output = non_empty_path(field, value)?,
            "format" => {
                self.format = match value {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => return Err(ConfigError::new(field, format!("expected csv or json, got `{value}`"))),
                }
            }
            "plot" => self.plot = parse_bool(field, value)?,
            "no_header" => self.header = !parse_bool(field, value)?,
            "counts" => self.counts = non_empty_path(field, value)?,
            "write_counts" => self.write_counts = non_empty_path(field, value)?,
            _ => return Err(ConfigError::new(field, "unknown key")),
        }
        Ok(())
    }

    /// Builds a config from file assignments followed by flag assignments.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        for (k, v) in pairs {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn command(&self) -> Command {
        self.command.expect("validated config has a command")
    }

    pub fn steps(&self) -> usize {
        self.steps.unwrap_or_else(|| self.command().default_steps())
    }

    pub fn fit_range(&self) -> (usize, usize) {
        let (lo, hi) = self.command().default_fit_range();
        (self.fit_min.unwrap_or(lo), self.fit_max.unwrap_or(hi))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let Some(command) = self.command else {
            return Err(ConfigError::new("command", "no command given"));
        };
        let steps = self.steps();
        let min_steps = match command {
            Command::Evolve | Command::Verify => 0,
            Command::TraceDistance => 2,
            _ => 1,
        };
        if steps < min_steps {
            return Err(ConfigError::new("steps", format!("{command} needs at least {min_steps} steps")));
        }
        if self.grid_theta < 1 {
            return Err(ConfigError::new("grid_theta", "must be at least 1"));
        }
        if self.grid_phi < 1 {
            return Err(ConfigError::new("grid_phi", "must be at least 1"));
        }
        if command == Command::Tomography {
            if !(self.n0.is_finite() && self.n0 > 0.0) {
                return Err(ConfigError::new("n0", "must be positive"));
            }
            if !(self.loss_db.is_finite() && self.loss_db >= 0.0) {
                return Err(ConfigError::new("loss_db", "must be non-negative"));
            }
            if self.seeds < 1 {
                return Err(ConfigError::new("seeds", "must be at least 1"));
            }
        }
        let (lo, hi) = self.fit_range();
        if lo < 1 {
            return Err(ConfigError::new("fit_min", "must be at least 1"));
        }
        if lo > hi {
            return Err(ConfigError::new("fit_max", format!("must not be below fit_min ({lo})")));
        }
        Ok(())
    }
}

fn non_empty_path(field: &str, value: &str) -> Result<Option<PathBuf>, ConfigError> {
    if value.is_empty() {
        Err(ConfigError::new(field, "empty path"))
    } else {
        Ok(Some(PathBuf::from(value)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn file_then_flags() {
        let text = "# example\ncommand = entropy-table\ntheta=pi/2\n\nphi = pi/4\nsteps=5\n";
        let pairs = parse_config_text(text).unwrap();
        assert_eq!(pairs.len(), 4);
        let mut all: Vec<(&str, &str)> = pairs.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
        all.push(("steps", "7"));
        let cfg = RunConfig::from_pairs(all).unwrap();
        assert_eq!(cfg.command(), Command::EntropyTable);
        assert_eq!((cfg.theta, cfg.phi, cfg.steps()), (FRAC_PI_2, FRAC_PI_4, 7));
    }

    #[test]
    fn defaults_per_command() {
        let cfg = RunConfig::from_pairs([("command", "variance")]).unwrap();
        assert_eq!(cfg.steps(), 1000);
        assert_eq!(cfg.fit_range(), (100, 1000));
        let cfg = RunConfig::from_pairs([("command", "trace-distance"), ("fit-min", "20")]).unwrap();
        assert_eq!(cfg.fit_range(), (20, 1000));
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            (vec![("theta", "abc"), ("command", "sweep")], "theta"),
            (vec![("command", "sweep"), ("grid_theta", "0")], "grid_theta"),
            (vec![("command", "tomography"), ("n0", "0")], "n0"),
            (vec![("command", "tomography"), ("n0", "-5")], "n0"),
            (vec![("command", "evolve"), ("steps", "-1")], "steps"),
            (vec![("command", "trace-distance"), ("steps", "1")], "steps"),
            (vec![("command", "evolve"), ("colour", "red")], "colour"),
            (vec![("command", "dance")], "command"),
            (vec![("steps", "3")], "command"),
            (vec![("command", "variance"), ("fit_min", "50"), ("fit_max", "10")], "fit_max"),
            (vec![("command", "evolve"), ("format", "xml")], "format"),
            (vec![("command", "evolve"), ("plot", "maybe")], "plot"),
        ];
        for (pairs, field) in cases {
            let err = RunConfig::from_pairs(pairs.clone()).unwrap_err();
            assert_eq!(err.field, field, "{pairs:?}: {err}");
        }
    }

    #[test]
    fn malformed_file_lines() {
        assert_eq!(parse_config_text("steps 5").unwrap_err().field, "line 1");
        assert_eq!(parse_config_text("\n = 5").unwrap_err().field, "line 2");
        assert!(parse_config_text("a=\n# c\n").is_ok());
    }
}
