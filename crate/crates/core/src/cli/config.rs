//! Flat `key = value` sweep configuration.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::models::{ModelKind, ModelParams};
use crate::states::SectorParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateKind {
    /// `exp(-beta H) / Z`
    Thermal,
    /// Parity-sector Gibbs mixture with fixed sector populations.
    Sector,
    /// Redfield steady state with even and odd projected baths.
    Redfield,
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateKind::Thermal => "thermal",
            StateKind::Sector => "sector",
            StateKind::Redfield => "redfield",
        })
    }
}

impl FromStr for StateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thermal" => Ok(StateKind::Thermal),
            "sector" => Ok(StateKind::Sector),
            "redfield" => Ok(StateKind::Redfield),
            other => Err(Error::Parameter(format!(
                "unknown state_kind '{other}' (expected thermal, sector or redfield)"
            ))),
        }
    }
}

/// `steps` evenly spaced couplings from `min` to `max` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaGrid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl LambdaGrid {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        let grid = Self { min, max, steps };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::Parameter("lambda_grid bounds must be finite".into()));
        }
        if self.steps == 0 {
            return Err(Error::Parameter(
                "lambda_grid needs at least one step".into(),
            ));
        }
        if self.steps == 1 && self.max != self.min {
            return Err(Error::Parameter(
                "a single-step lambda_grid needs min = max".into(),
            ));
        }
        if self.steps > 1 && self.max <= self.min {
            return Err(Error::Parameter(format!(
                "lambda_grid must increase, got {} .. {}",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.max
                } else {
                    self.min + (self.max - self.min) * (k as f64 / last)
                }
            })
            .collect()
    }
}

impl Default for LambdaGrid {
    fn default() -> Self {
        Self {
            min: 0.0,
            max: 3.5,
            steps: 141,
        }
    }
}

impl fmt::Display for LambdaGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}, {}", self.min, self.max, self.steps)
    }
}

impl FromStr for LambdaGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parameter(format!(
                "lambda_grid expects 'min, max, steps', got '{s}'"
            )));
        }
        let min = parse_real("lambda_grid min", parts[0])?;
        let max = parse_real("lambda_grid max", parts[1])?;
        let steps = parts[2].parse::<usize>().map_err(|_| {
            Error::Parameter(format!(
                "lambda_grid steps must be an integer, got '{}'",
                parts[2]
            ))
        })?;
        LambdaGrid::new(min, max, steps)
    }
}

fn parse_real(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| Error::Parameter(format!("{key} must be a real number, got '{value}'")))
}

/// Every parameter of a coupling sweep. Keys in the text form match the
/// field names, with `lambda_grid` written as `min, max, steps`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub model: ModelKind,
    pub state_kind: StateKind,
    pub delta: f64,
    pub epsilon: f64,
    pub beta: f64,
    pub beta_e: f64,
    pub beta_o: f64,
    pub p_e: f64,
    pub p_o: f64,
    pub gamma_e: f64,
    pub gamma_o: f64,
    pub lambda_grid: LambdaGrid,
    pub n_max: usize,
    /// Ohmic cutoff; `delta` when unset.
    pub cutoff: Option<f64>,
    pub out: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            model: ModelKind::Qrm,
            state_kind: StateKind::Thermal,
            delta: 2.0,
            epsilon: 0.0,
            beta: 90.0,
            beta_e: 90.0,
            beta_o: 90.0,
            p_e: 0.5,
            p_o: 0.5,
            gamma_e: 1e-5,
            gamma_o: 1e-5,
            lambda_grid: LambdaGrid::default(),
            n_max: crate::models::DEFAULT_N_MAX,
            cutoff: None,
            out: None,
            plot: None,
        }
    }
}

pub const KEYS: [&str; 16] = [
    "model",
    "state_kind",
    "delta",
    "epsilon",
    "beta",
    "beta_e",
    "beta_o",
    "p_e",
    "p_o",
    "gamma_e",
    "gamma_o",
    "lambda_grid",
    "n_max",
    "cutoff",
    "out",
    "plot",
];

impl SweepConfig {
    /// Parses the text form on top of the defaults and validates the result.
    /// Blank lines and `#` comments are ignored; a key may appear once.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SweepConfig::default();
        let mut seen: Vec<&str> = Vec::new();
        let mut offset = 0;
        for raw in text.split_inclusive('\n') {
            let line_start = offset;
            offset += raw.len();
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let Some(eq) = body.find('=') else {
                return Err(Error::Parse {
                    offset: line_start + (body.len() - body.trim_start().len()),
                    message: "expected 'key = value'".into(),
                });
            };
            let key = body[..eq].trim();
            let value = body[eq + 1..].trim();
            let key_offset = line_start + (body.len() - body.trim_start().len());
            let value_offset =
                line_start + eq + 1 + (body[eq + 1..].len() - body[eq + 1..].trim_start().len());
            let Some(&known) = KEYS.iter().find(|k| **k == key) else {
                return Err(Error::Parse {
                    offset: key_offset,
                    message: format!("unknown key '{key}'"),
                });
            };
            if seen.contains(&known) {
                return Err(Error::Parse {
                    offset: key_offset,
                    message: format!("duplicate key '{key}'"),
                });
            }
            seen.push(known);
            cfg.set(known, value).map_err(|e| Error::Parse {
                offset: value_offset,
                message: match e {
                    Error::Parameter(m) => m,
                    other => other.to_string(),
                },
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Assigns one field from its text form without revalidating the whole
    /// configuration.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let real = |v: &str| parse_real(key, v);
        match key {
            "model" => self.model = value.parse()?,
            "state_kind" => self.state_kind = value.parse()?,
            "delta" => self.delta = real(value)?,
            "epsilon" => self.epsilon = real(value)?,
            "beta" => self.beta = real(value)?,
            "beta_e" => self.beta_e = real(value)?,
            "beta_o" => self.beta_o = real(value)?,
            "p_e" => self.p_e = real(value)?,
            "p_o" => self.p_o = real(value)?,
            "gamma_e" => self.gamma_e = real(value)?,
            "gamma_o" => self.gamma_o = real(value)?,
            "lambda_grid" => self.lambda_grid = value.parse()?,
            "n_max" => {
                self.n_max = value.parse().map_err(|_| {
                    Error::Parameter(format!("n_max must be a positive integer, got '{value}'"))
                })?
            }
            "cutoff" => self.cutoff = Some(real(value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "plot" => self.plot = Some(PathBuf::from(value)),
            other => return Err(Error::Parameter(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff.unwrap_or(self.delta)
    }

    pub fn model_params(&self, lambda: f64) -> ModelParams {
        ModelParams::new(self.delta, lambda, self.n_max).with_epsilon(self.epsilon)
    }

    pub fn sector_params(&self) -> Result<SectorParams> {
        SectorParams::new(self.p_e, self.p_o, self.beta_e, self.beta_o)
    }

    pub fn validate(&self) -> Result<()> {
        self.lambda_grid.validate()?;
        for lambda in [self.lambda_grid.min, self.lambda_grid.max] {
            self.model_params(lambda).validate()?;
        }
        if self.epsilon != 0.0 && self.model != ModelKind::QrmEps {
            return Err(Error::Parameter(format!(
                "epsilon = {} only applies to model qrm_eps",
                self.epsilon
            )));
        }
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Parameter(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        match self.state_kind {
            StateKind::Thermal => positive("beta", self.beta)?,
            StateKind::Sector => {
                self.sector_params()?;
                let params = self.model_params(self.lambda_grid.min);
                if !self.model.has_parity(&params) {
                    return Err(Error::Parameter(
                        "sector states need a parity-symmetric model (epsilon = 0)".into(),
                    ));
                }
            }
            StateKind::Redfield => {
                positive("beta_e", self.beta_e)?;
                positive("beta_o", self.beta_o)?;
                positive("cutoff", self.cutoff())?;
                for (name, g) in [("gamma_e", self.gamma_e), ("gamma_o", self.gamma_o)] {
                    if !(g.is_finite() && g >= 0.0) {
                        return Err(Error::Parameter(format!(
                            "{name} must be nonnegative, got {g}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The text form; parsing it reproduces `self`.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "model = {}\nstate_kind = {}\ndelta = {:?}\nepsilon = {:?}\nbeta = {:?}\n\
             beta_e = {:?}\nbeta_o = {:?}\np_e = {:?}\np_o = {:?}\ngamma_e = {:?}\n\
             gamma_o = {:?}\nlambda_grid = {:?}, {:?}, {}\nn_max = {}\n",
            self.model,
            self.state_kind,
            self.delta,
            self.epsilon,
            self.beta,
            self.beta_e,
            self.beta_o,
            self.p_e,
            self.p_o,
            self.gamma_e,
            self.gamma_o,
            self.lambda_grid.min,
            self.lambda_grid.max,
            self.lambda_grid.steps,
            self.n_max,
        );
        if let Some(c) = self.cutoff {
            s.push_str(&format!("cutoff = {c:?}\n"));
        }
        if let Some(p) = &self.out {
            s.push_str(&format!("out = {}\n", p.display()));
        }
        if let Some(p) = &self.plot {
            s.push_str(&format!("plot = {}\n", p.display()));
        }
        s
    }
}
