//! Run configuration: which medium, which geometry, which accelerations.
//!
//! A scenario is one JSON document. The same schema drives single runs,
//! h-sweeps, photon/phonon comparisons and Galilean-limit reports; command
//! line flags override individual fields after parsing.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use rindler_cavity::{speed_of_sound, BackgroundState, Error as CoreError};

/// What carries the signal: light in an optical cavity or sound in a
/// stationary medium. Physically identical here — the medium only fixes how
/// the effective signal speed is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Medium {
    Photon,
    Phonon,
}

/// Sweep specification: explicit h values, or a log-spaced range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sweep {
    List(Vec<f64>),
    LogRange { lo: f64, hi: f64, n: usize },
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Sweep::List(vs) => vs.clone(),
            Sweep::LogRange { lo, hi, n } => {
                if *n == 1 {
                    return vec![*lo];
                }
                let ratio = hi / lo;
                (0..*n)
                    .map(|i| lo * ratio.powf(i as f64 / (*n as f64 - 1.0)))
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub medium: Medium,
    /// Proper acceleration of the cavity center (m/s^2).
    pub a: f64,
    /// Cavity length (m).
    #[serde(rename = "L")]
    pub length: f64,
    /// Signal speed given directly: the light speed for photons, or the
    /// sound speed for phonons when no background is provided.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// Alternatively for phonons: a condensate background from which the
    /// sound speed is derived via its equation of state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub background: Option<BackgroundState>,
    pub cutoff: usize,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    /// Directory for CSV/JSON artifacts; no files are written when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

/// Everything that can go wrong before, during or after a run, mapped onto
/// the process exit codes (2 config, 3 numeric/io).
#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("config field `{field}`: {message}")]
    Config { field: &'static str, message: String },
    #[error("config parse: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("numeric failure at h = {h}: {source}")]
    Numeric { h: f64, source: CoreError },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl ScenarioError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Config { .. } | ScenarioError::Parse(..) => 2,
            ScenarioError::Numeric { .. } | ScenarioError::Io(..) => 3,
        }
    }
}

fn config_err(field: &'static str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Config {
        field,
        message: message.into(),
    }
}

impl ScenarioConfig {
    /// Effective signal speed for this scenario.
    pub fn c_eff(&self) -> Result<f64, ScenarioError> {
        match (self.medium, self.c, &self.background) {
            (_, Some(_), Some(_)) => Err(config_err(
                "c",
                "give either `c` or `background`, not both",
            )),
            (Medium::Photon, Some(c), None) => Ok(c),
            (Medium::Photon, None, Some(_)) => Err(config_err(
                "background",
                "photon scenarios take a direct `c`, not a condensate background",
            )),
            (Medium::Phonon, Some(c_s), None) => Ok(c_s),
            (Medium::Phonon, None, Some(bg)) => {
                speed_of_sound(bg).map_err(|e| config_err("background", e.to_string()))
            }
            (_, None, None) => Err(config_err("c", "one of `c` or `background` is required")),
        }
    }

    /// The h values this scenario will run: the sweep if present, otherwise
    /// the single value derived from (a, L, c_eff).
    pub fn h_values(&self) -> Result<Vec<f64>, ScenarioError> {
        let c_eff = self.c_eff()?;
        let hs = match &self.sweep {
            Some(sweep) => sweep.values(),
            None => vec![self.a * self.length / (c_eff * c_eff)],
        };
        for &h in &hs {
            if !(h > 0.0) || !h.is_finite() {
                return Err(config_err("sweep", format!("h = {h} must be positive")));
            }
            if h >= 2.0 {
                return Err(config_err(
                    "a",
                    format!(
                        "h = {h} >= 2: the acceleration horizon would sit inside the cavity \
                         (near wall chi_L = L/h - L/2 <= 0); reduce a*L/c_eff^2"
                    ),
                ));
            }
        }
        Ok(hs)
    }

    /// Full validation pass: every field checked, field-named messages.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.a > 0.0) || !self.a.is_finite() {
            return Err(config_err("a", format!("must be positive, got {}", self.a)));
        }
        if !(self.length > 0.0) || !self.length.is_finite() {
            return Err(config_err(
                "L",
                format!("must be positive, got {}", self.length),
            ));
        }
        if let Some(c) = self.c {
            if !(c > 0.0) || !c.is_finite() {
                return Err(config_err("c", format!("must be positive, got {c}")));
            }
        }
        if self.cutoff == 0 {
            return Err(config_err("cutoff", "at least one mode is required"));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(config_err(
                "tol",
                format!("must be positive, got {}", self.tol),
            ));
        }
        if let Some(Sweep::LogRange { lo, hi, n }) = &self.sweep {
            if *n == 0 {
                return Err(config_err("sweep", "log range needs n >= 1"));
            }
            if !(*lo > 0.0) || !(hi >= lo) {
                return Err(config_err(
                    "sweep",
                    format!("log range needs 0 < lo <= hi, got [{lo}, {hi}]"),
                ));
            }
        }
        if let Some(Sweep::List(vs)) = &self.sweep {
            if vs.is_empty() {
                return Err(config_err("sweep", "empty h list"));
            }
        }
        self.h_values().map(|_| ())
    }
}

/// Parse a `LO:HI:N` log-range argument (used by --sweep and --galilean).
pub fn parse_log_range(arg: &str, field: &'static str) -> Result<Sweep, ScenarioError> {
    let parts: Vec<&str> = arg.split(':').collect();
    if parts.len() != 3 {
        return Err(config_err(field, format!("expected LO:HI:N, got {arg:?}")));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| config_err(field, format!("bad LO in {arg:?}")))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| config_err(field, format!("bad HI in {arg:?}")))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| config_err(field, format!("bad N in {arg:?}")))?;
    Ok(Sweep::LogRange { lo, hi, n })
}
