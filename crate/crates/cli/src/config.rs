//! Run configuration: defaults, then a `key = value` file, then flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fri_ids::five::{FiveParams, UniverseMode};
use fri_ids::learn::LearnerConfig;
use fri_ids::select::Discretizer;

/// Bad flags, config keys or values. Maps to exit code 1.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub features: Option<Vec<String>>,
    pub five: FiveParams,
    pub learner: LearnerConfig,
    pub seed: u64,
    pub bins: usize,
    pub binary: bool,
    /// Stratified fraction of the input kept before pooling.
    pub sample: Option<f64>,
    pub train_per_class: usize,
    pub test_per_class: Option<usize>,
    pub out: Option<PathBuf>,
    pub trace: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            rules: None,
            features: None,
            five: FiveParams::default(),
            learner: LearnerConfig::default(),
            seed: 0,
            bins: Discretizer::default().bins(),
            binary: false,
            sample: None,
            train_per_class: 500,
            test_per_class: None,
            out: None,
            trace: None,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> anyhow::Result<T> {
    value
        .parse()
        .map_err(|_| config_error(format!("invalid value `{value}` for `{key}`")))
}

impl RunConfig {
    /// Loads `key = value` lines; `#` starts a comment.
    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_error(format!("{}:{}: expected `key = value`", path.display(), i + 1)))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| config_error(format!("{}:{}: {e}", path.display(), i + 1)))?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> anyhow::Result<()> {
        match key {
            "input" => self.input = Some(value.into()),
            "rules" => self.rules = Some(value.into()),
            "features" => {
                self.features = Some(value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
            }
            "seed" => self.seed = parse(key, value)?,
            "bins" => self.bins = parse(key, value)?,
            "binary" => self.binary = parse(key, value)?,
            "sample" => self.sample = Some(parse(key, value)?),
            "train_per_class" => self.train_per_class = parse(key, value)?,
            "test_per_class" => self.test_per_class = Some(parse(key, value)?),
            "out" => self.out = Some(value.into()),
            "trace" => self.trace = Some(value.into()),
            "five.p" => self.five.p = parse(key, value)?,
            "five.w" => self.five.w = parse(key, value)?,
            "five.scaling_floor" => self.five.scaling_floor = parse(key, value)?,
            "five.threshold" => self.five.threshold = parse(key, value)?,
            "five.strict_universe" => {
                self.five.universe = if parse(key, value)? {
                    UniverseMode::Strict
                } else {
                    UniverseMode::Clamp
                }
            }
            "learner.max_rules" => self.learner.max_rules = parse(key, value)?,
            "learner.max_iterations" => self.learner.max_iterations = parse(key, value)?,
            "learner.target" => self.learner.target = parse(key, value)?,
            "learner.initial_step" => self.learner.initial_step = parse(key, value)?,
            "learner.decay" => self.learner.decay = parse(key, value)?,
            "learner.stall_window" => self.learner.stall_window = parse(key, value)?,
            _ => return Err(config_error(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        self.five.validate().map_err(|e| config_error(e.to_string()))?;
        self.learner.validate().map_err(|e| config_error(e.to_string()))?;
        Discretizer::equal_frequency(self.bins).map_err(|e| config_error(e.to_string()))?;
        if let Some(s) = self.sample {
            if !(s > 0.0 && s <= 1.0) {
                return Err(config_error(format!("sample must be in (0, 1], got {s}")));
            }
        }
        if self.train_per_class == 0 {
            return Err(config_error("train_per_class must be positive"));
        }
        if self.test_per_class == Some(0) {
            return Err(config_error("test_per_class must be positive"));
        }
        Ok(())
    }

    pub fn discretizer(&self) -> Discretizer {
        Discretizer::equal_frequency(self.bins).expect("validated")
    }

    pub fn require_input(&self) -> anyhow::Result<&Path> {
        self.input
            .as_deref()
            .ok_or_else(|| config_error("no input file; pass --input or set `input` in the config"))
    }
}
