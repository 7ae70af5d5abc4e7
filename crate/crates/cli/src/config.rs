//! Flat `key = value` configuration with flag overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fracq_core::Complex64;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    MlEval,
    FoxEval,
    BoxScan,
    VeffScan,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// `start:stop:count[:log]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl TimeGrid {
    pub fn nodes(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                if k == 0 {
                    return self.start;
                }
                if k == self.count - 1 {
                    return self.stop;
                }
                let f = k as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + f * (self.stop - self.start),
                    Spacing::Log => (self.start.ln() + f * (self.stop / self.start).ln()).exp(),
                }
            })
            .collect()
    }
}

impl FromStr for TimeGrid {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::Usage(format!("t-grid `{s}`: {why}"));
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad("expected START:STOP:COUNT[:log]"));
        }
        let start: f64 = parts[0].parse().map_err(|_| bad("START is not a number"))?;
        let stop: f64 = parts[1].parse().map_err(|_| bad("STOP is not a number"))?;
        let count: usize = parts[2].parse().map_err(|_| bad("COUNT is not an integer"))?;
        let spacing = match parts.get(3) {
            None | Some(&"lin") | Some(&"linear") => Spacing::Linear,
            Some(&"log") => Spacing::Log,
            Some(other) => return Err(bad(&format!("unknown spacing `{other}`"))),
        };
        if count < 2 {
            return Err(bad("COUNT must be at least 2"));
        }
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(bad("grid must be strictly increasing"));
        }
        if spacing == Spacing::Log && !(start > 0.0) {
            return Err(bad("a log grid needs START > 0"));
        }
        Ok(Self { start, stop, count, spacing })
    }
}

/// Everything a sweep needs, after merging file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub command: Command,
    pub alpha: Vec<f64>,
    pub beta: f64,
    pub lambda: Vec<f64>,
    pub a: f64,
    pub n: Vec<u32>,
    pub d_alpha: f64,
    pub hbar: f64,
    pub mass: f64,
    pub t_grid: TimeGrid,
    pub output: Option<PathBuf>,
    pub tol: Option<f64>,
    pub only: Vec<u8>,
    pub params: Option<String>,
    pub z: Vec<Complex64>,
}

/// Raw key/value pairs, later entries overriding earlier ones.
#[derive(Debug, Clone, Default)]
pub struct RawConfig(BTreeMap<String, String>);

const KEYS: &[&str] =
    &["alpha", "beta", "lambda", "a", "n", "d-alpha", "hbar", "mass", "t-grid", "output", "tol", "only", "params", "z"];

fn normalise_key(k: &str) -> String {
    k.trim().replace('_', "-").to_ascii_lowercase()
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut raw = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
            raw.set(k, v.trim())?;
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = normalise_key(key);
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("unknown config key `{key}`")));
        }
        self.0.insert(key, value.to_string());
        Ok(())
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn list<T: FromStr + Clone>(&self, key: &str, default: &[T]) -> Result<Vec<T>, CliError> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| CliError::Usage(format!("{key}: cannot parse `{x}`"))))
                .collect(),
        }
    }

    fn scalar<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("{key}: cannot parse `{v}`"))),
        }
    }

    pub fn resolve(&self, command: Command) -> Result<SweepConfig, CliError> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(CliError::Usage(format!("{name} must be positive, got {v}")))
            }
        };
        let t_grid: TimeGrid = self.get("t-grid").unwrap_or("0:10:101").parse()?;
        let z = match self.get("z") {
            None => Vec::new(),
            Some(v) => v.split(';').map(parse_complex).collect::<Result<_, _>>()?,
        };
        let tol = match self.get("tol") {
            None => None,
            Some(v) => {
                Some(positive("tol", v.parse().map_err(|_| CliError::Usage(format!("tol: cannot parse `{v}`")))?)?)
            }
        };
        Ok(SweepConfig {
            command,
            alpha: self.list("alpha", &[0.5])?,
            beta: self.scalar("beta", 1.0)?,
            lambda: self.list("lambda", &[-1.0])?,
            a: positive("a", self.scalar("a", std::f64::consts::PI)?)?,
            n: self.list("n", &[1])?,
            d_alpha: positive("d-alpha", self.scalar("d-alpha", 1.0)?)?,
            hbar: positive("hbar", self.scalar("hbar", 1.0)?)?,
            mass: positive("mass", self.scalar("mass", 0.5)?)?,
            t_grid,
            output: self.get("output").map(PathBuf::from),
            tol,
            only: self.list("only", &[])?,
            params: self.get("params").map(str::to_string),
            z,
        })
    }
}

/// `RE,IM` or a bare real number.
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Usage(format!("cannot parse complex number `{s}` (expected RE,IM)"));
    let mut it = s.split(',').map(|p| p.trim().parse::<f64>());
    let re = it.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let im = match it.next() {
        None => 0.0,
        Some(v) => v.map_err(|_| bad())?,
    };
    if it.next().is_some() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}
