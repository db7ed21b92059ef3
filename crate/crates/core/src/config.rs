//! Run configuration, read from TOML.

use serde::{Deserialize, Serialize};

use crate::dynamics::{AutoMonitor, EomMode, LambdaPolicy, ZCoupling};
use crate::error::{Error, Result};
use crate::integrals::Hamiltonian;
use crate::potentials::{double_well, ferretti, DoubleWellParams, FerrettiParams};
use crate::sampling::InitialWavepacket;

pub const DOUBLE_WELL_PRESET: &str = include_str!("../presets/double_well.preset");
pub const FERRETTI_PRESET: &str = include_str!("../presets/ferretti.preset");

/// Model selector and parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelConfig {
    DoubleWell(DoubleWellParams),
    Ferretti(FerrettiParams),
}

impl ModelConfig {
    pub fn hamiltonian(&self) -> Result<Hamiltonian> {
        match self {
            ModelConfig::DoubleWell(p) => double_well(p),
            ModelConfig::Ferretti(p) => ferretti(p),
        }
    }

    pub fn masses(&self) -> Vec<f64> {
        match self {
            ModelConfig::DoubleWell(p) => vec![p.mass],
            ModelConfig::Ferretti(p) => vec![p.mx, p.my],
        }
    }

    pub fn n_states(&self) -> usize {
        match self {
            ModelConfig::DoubleWell(_) => 1,
            ModelConfig::Ferretti(_) => 2,
        }
    }

    /// Shortest harmonic period of the model.
    pub fn shortest_period(&self) -> f64 {
        match self {
            ModelConfig::DoubleWell(p) => p.well_period(),
            ModelConfig::Ferretti(p) => p.x_period().min(p.y_period()),
        }
    }

    /// Half of the X-direction harmonic period (Ferretti only).
    pub fn half_period(&self) -> Option<f64> {
        match self {
            ModelConfig::DoubleWell(_) => None,
            ModelConfig::Ferretti(p) => Some(0.5 * p.x_period()),
        }
    }
}

/// Center EOM to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeName {
    Classical,
    Quantum,
    Auto,
}

impl ModeName {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModeName::Classical => "classical",
            ModeName::Quantum => "quantum",
            ModeName::Auto => "auto",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "classical" => Ok(ModeName::Classical),
            "quantum" => Ok(ModeName::Quantum),
            "auto" => Ok(ModeName::Auto),
            other => Err(Error::config("modes", format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AutoConfig {
    pub delta: f64,
    pub monitor: AutoMonitor,
}

impl Default for AutoConfig {
    fn default() -> Self {
        Self {
            delta: 1e-3,
            monitor: AutoMonitor::default(),
        }
    }
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub n_tbfs: usize,
    /// Also place a zero-amplitude TBF on every other state at each sampled center.
    #[serde(default)]
    pub all_states: bool,
    /// Step size; defaults to 1/1000 of the model's shortest harmonic period.
    #[serde(default)]
    pub dt: Option<f64>,
    /// Absolute propagation time.
    #[serde(default)]
    pub total_time: Option<f64>,
    /// Propagation time in X half-periods (Ferretti only).
    #[serde(default)]
    pub half_periods: Option<f64>,
    pub modes: Vec<ModeName>,
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default)]
    pub lambda: LambdaPolicy,
    #[serde(default)]
    pub auto: AutoConfig,
    /// Which TBFs enter `Z` in the quantum EOM.
    #[serde(default)]
    pub z_coupling: ZCoupling,
    pub model: ModelConfig,
    pub wavepacket: InitialWavepacket,
}

fn default_stride() -> usize {
    1
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let key = e
                .span()
                .map(|s| format!("bytes {}..{}", s.start, s.end))
                .unwrap_or_else(|| "config".into());
            Error::config(key, e.message().to_string())
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn preset(name: &str) -> Result<Self> {
        let text = match name.trim_end_matches(".preset") {
            "double_well" => DOUBLE_WELL_PRESET,
            "ferretti" => FERRETTI_PRESET,
            other => return Err(Error::config("preset", format!("unknown preset `{other}`"))),
        };
        Self::from_toml(text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_tbfs == 0 {
            return Err(Error::config("n_tbfs", "must be at least 1"));
        }
        if self.stride == 0 {
            return Err(Error::config("stride", "must be at least 1"));
        }
        if self.modes.is_empty() {
            return Err(Error::config("modes", "at least one mode is required"));
        }
        for (i, m) in self.modes.iter().enumerate() {
            if self.modes[..i].contains(m) {
                return Err(Error::config("modes", format!("`{}` listed twice", m.as_str())));
            }
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::config("dt", "must be positive and finite"));
            }
        }
        match (self.total_time, self.half_periods) {
            (Some(_), Some(_)) => {
                return Err(Error::config(
                    "total_time",
                    "give either total_time or half_periods, not both",
                ))
            }
            (None, None) => {
                return Err(Error::config("total_time", "total_time or half_periods is required"))
            }
            (Some(t), None) if !(t > 0.0 && t.is_finite()) => {
                return Err(Error::config("total_time", "must be positive and finite"))
            }
            (None, Some(h)) => {
                if self.model.half_period().is_none() {
                    return Err(Error::config(
                        "half_periods",
                        "only defined for the ferretti model",
                    ));
                }
                if !(h > 0.0 && h.is_finite()) {
                    return Err(Error::config("half_periods", "must be positive and finite"));
                }
            }
            _ => {}
        }
        self.model.hamiltonian()?;
        self.lambda.validate()?;
        self.mode(ModeName::Auto).validate()?;
        let ndof = self.model.masses().len();
        let wp = &self.wavepacket;
        for (key, v) in [
            ("wavepacket.position", &wp.position),
            ("wavepacket.momentum", &wp.momentum),
            ("wavepacket.widths", &wp.widths),
        ] {
            if v.len() != ndof {
                return Err(Error::config(
                    key,
                    format!("expected {ndof} entries, got {}", v.len()),
                ));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::config(key, "entries must be finite"));
            }
        }
        if wp.widths.iter().any(|&w| w <= 0.0) {
            return Err(Error::config("wavepacket.widths", "must be positive"));
        }
        if wp.state >= self.model.n_states() {
            return Err(Error::config(
                "wavepacket.state",
                format!("model has {} states", self.model.n_states()),
            ));
        }
        let steps = self.n_steps();
        if steps == 0 || steps > 100_000_000 {
            return Err(Error::config("total_time", format!("gives {steps} steps")));
        }
        Ok(())
    }

    pub fn resolved_dt(&self) -> f64 {
        self.dt.unwrap_or_else(|| self.model.shortest_period() / 1000.0)
    }

    pub fn resolved_total_time(&self) -> f64 {
        match (self.total_time, self.half_periods) {
            (Some(t), _) => t,
            (None, Some(h)) => h * self.model.half_period().unwrap_or(f64::NAN),
            (None, None) => f64::NAN,
        }
    }

    pub fn n_steps(&self) -> usize {
        let n = self.resolved_total_time() / self.resolved_dt();
        if n.is_finite() && n > 0.0 {
            (n - 1e-9).ceil() as usize
        } else {
            0
        }
    }

    /// Copy with `dt` and `total_time` made explicit.
    pub fn resolved(&self) -> Self {
        let mut c = self.clone();
        c.dt = Some(self.resolved_dt());
        c.total_time = Some(self.resolved_total_time());
        c.half_periods = None;
        c
    }

    pub fn mode(&self, name: ModeName) -> EomMode {
        match name {
            ModeName::Classical => EomMode::Classical,
            ModeName::Quantum => EomMode::Quantum {
                lambda: self.lambda,
                coupling: self.z_coupling,
            },
            ModeName::Auto => EomMode::Auto {
                delta: self.auto.delta,
                lambda: self.lambda,
                coupling: self.z_coupling,
                monitor: self.auto.monitor,
            },
        }
    }
}
