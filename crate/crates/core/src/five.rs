//! Interpolative inference in a vague environment.
//!
//! Every input axis gets a scaling function derived from the steepness of its
//! fuzzy partition. The integral of that density is a distance in which fuzzy
//! sets become points: two crisp values are "far apart" when many steep
//! membership edges lie between them. Rules are anchored at the core midpoints
//! of their antecedent sets and the conclusion is the Shepard
//! inverse-distance-weighted mean of the rule consequents. Observations that
//! no rule fires on classically still receive a conclusion, and the output is
//! already crisp.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fuzzy::{FuzzyError, InputPartition, Observation, RuleBase};

#[derive(Debug, Error, PartialEq)]
pub enum FiveError {
    #[error("scaling floor must be finite and positive, got {0}")]
    InvalidFloor(f64),
    #[error("scaling function `{0}`: breakpoints must be strictly increasing, at least two, with one positive finite density per segment")]
    InvalidScaling(String),
    #[error("invalid engine parameter: {0}")]
    InvalidParams(String),
    #[error("environment has {env} dimensions, rule base has {rb}")]
    EnvironmentMismatch { env: usize, rb: usize },
    #[error("rules {first} and {second} both sit at distance 0 with different consequents")]
    ZeroDistanceConflict { first: usize, second: usize },
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
}

/// Piecewise-constant scaling density over one input universe.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFunction {
    dimension: String,
    breakpoints: Vec<f64>,
    densities: Vec<f64>,
    /// Integral of the density from the first breakpoint to each breakpoint.
    cumulative: Vec<f64>,
}

impl ScalingFunction {
    pub fn new(
        dimension: impl Into<String>,
        breakpoints: Vec<f64>,
        densities: Vec<f64>,
    ) -> Result<Self, FiveError> {
        let dimension = dimension.into();
        let ok = breakpoints.len() >= 2
            && densities.len() + 1 == breakpoints.len()
            && breakpoints.iter().all(|x| x.is_finite())
            && breakpoints.windows(2).all(|w| w[0] < w[1])
            && densities.iter().all(|s| s.is_finite() && *s > 0.0);
        if !ok {
            return Err(FiveError::InvalidScaling(dimension));
        }
        let mut cumulative = Vec::with_capacity(breakpoints.len());
        cumulative.push(0.0);
        for (i, s) in densities.iter().enumerate() {
            let prev = cumulative[i];
            cumulative.push(prev + s * (breakpoints[i + 1] - breakpoints[i]));
        }
        Ok(Self {
            dimension,
            breakpoints,
            densities,
            cumulative,
        })
    }

    pub fn dimension(&self) -> &str {
        &self.dimension
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    fn segment(&self, x: f64) -> usize {
        let last = self.densities.len() - 1;
        self.breakpoints
            .partition_point(|&b| b <= x)
            .saturating_sub(1)
            .min(last)
    }

    /// Scaling density at `x`; the end segments extend past the breakpoints.
    pub fn density_at(&self, x: f64) -> f64 {
        self.densities[self.segment(x)]
    }

    /// Scaled position of `x`: the density integrated from the first
    /// breakpoint.
    pub fn position(&self, x: f64) -> f64 {
        let i = self.segment(x);
        self.cumulative[i] + self.densities[i] * (x - self.breakpoints[i])
    }

    /// Vague distance between two crisp values of this dimension.
    pub fn distance(&self, x1: f64, x2: f64) -> f64 {
        if x1 == x2 {
            return 0.0;
        }
        (self.position(x2) - self.position(x1)).abs()
    }
}

/// Derives the scaling function of a partition: the steepest membership edge
/// over each stretch between knots, never below `floor`.
pub fn derive_scaling(partition: &InputPartition, floor: f64) -> Result<ScalingFunction, FiveError> {
    if !(floor.is_finite() && floor > 0.0) {
        return Err(FiveError::InvalidFloor(floor));
    }
    let (lo, hi) = partition.universe();
    if lo >= hi {
        return Err(FiveError::InvalidScaling(partition.name().to_string()));
    }
    let mut knots: Vec<f64> = partition
        .terms()
        .iter()
        .flat_map(|t| t.set.knots())
        .map(|k| k.clamp(lo, hi))
        .chain([lo, hi])
        .collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();

    let densities = knots
        .windows(2)
        .map(|w| {
            let mid = (w[0] + w[1]) / 2.0;
            partition
                .terms()
                .iter()
                .map(|t| t.set.slope_at(mid))
                .fold(floor, f64::max)
        })
        .collect();
    ScalingFunction::new(partition.name(), knots, densities)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UniverseMode {
    /// Out-of-universe coordinates are clamped to the nearest bound.
    #[default]
    Clamp,
    /// Out-of-universe coordinates are rejected.
    Strict,
}

/// Engine knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiveParams {
    /// Shepard exponent.
    pub p: f64,
    /// Order of the Minkowski aggregation of per-dimension distances.
    pub w: f64,
    /// Scaling floor relative to the universe width: each dimension uses
    /// `scaling_floor / width` as its absolute floor.
    pub scaling_floor: f64,
    pub threshold: f64,
    pub universe: UniverseMode,
}

impl Default for FiveParams {
    fn default() -> Self {
        Self {
            p: 2.0,
            w: 2.0,
            scaling_floor: 1.0,
            threshold: 0.5,
            universe: UniverseMode::Clamp,
        }
    }
}

impl FiveParams {
    pub fn validate(&self) -> Result<(), FiveError> {
        if !(self.p.is_finite() && self.p >= 1.0) {
            return Err(FiveError::InvalidParams(format!("p must be finite and >= 1, got {}", self.p)));
        }
        if !(self.w.is_finite() && self.w >= 1.0) {
            return Err(FiveError::InvalidParams(format!("w must be finite and >= 1, got {}", self.w)));
        }
        if !(self.scaling_floor.is_finite() && self.scaling_floor > 0.0) {
            return Err(FiveError::InvalidFloor(self.scaling_floor));
        }
        if !self.threshold.is_finite() {
            return Err(FiveError::InvalidParams("threshold must be finite".into()));
        }
        Ok(())
    }
}

/// Conclusion for one observation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InferenceResult {
    pub level: f64,
    pub alert: bool,
    /// Index of the rule the observation coincides with, if any.
    pub matched_rule: Option<usize>,
    pub per_rule_distances: Vec<f64>,
}

/// Scaling functions for every input plus the interpolation settings.
#[derive(Debug, Clone, PartialEq)]
pub struct VagueEnvironment {
    scalings: Vec<ScalingFunction>,
    p: f64,
    w: f64,
    threshold: f64,
    universe: UniverseMode,
}

impl VagueEnvironment {
    /// Derives the environment of a rule base.
    pub fn derive(rb: &RuleBase, params: &FiveParams) -> Result<Self, FiveError> {
        params.validate()?;
        let (out_lo, out_hi) = rb.output_range();
        if params.threshold < out_lo || params.threshold > out_hi {
            return Err(FiveError::InvalidParams(format!(
                "threshold {} outside output range [{out_lo}, {out_hi}]",
                params.threshold
            )));
        }
        let scalings = rb
            .partitions()
            .iter()
            .map(|p| derive_scaling(p, params.scaling_floor / p.width()))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            scalings,
            p: params.p,
            w: params.w,
            threshold: params.threshold,
            universe: params.universe,
        })
    }

    /// Assembles an environment from explicit scaling functions.
    pub fn from_parts(
        scalings: Vec<ScalingFunction>,
        p: f64,
        w: f64,
        threshold: f64,
    ) -> Result<Self, FiveError> {
        FiveParams {
            p,
            w,
            threshold,
            ..FiveParams::default()
        }
        .validate()?;
        Ok(Self {
            scalings,
            p,
            w,
            threshold,
            universe: UniverseMode::Clamp,
        })
    }

    pub fn scalings(&self) -> &[ScalingFunction] {
        &self.scalings
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn dims(&self) -> usize {
        self.scalings.len()
    }

    fn check(&self, rb: &RuleBase) -> Result<(), FiveError> {
        if self.dims() != rb.dims() {
            return Err(FiveError::EnvironmentMismatch {
                env: self.dims(),
                rb: rb.dims(),
            });
        }
        Ok(())
    }

    fn aggregate(&self, per_dim: impl Iterator<Item = f64>) -> f64 {
        if self.w == 2.0 {
            per_dim.map(|d| d * d).sum::<f64>().sqrt()
        } else if self.w == 1.0 {
            per_dim.sum()
        } else {
            per_dim.map(|d| d.powf(self.w)).sum::<f64>().powf(1.0 / self.w)
        }
    }

    /// Clamps or rejects the observation according to the universe mode.
    pub fn prepare(&self, rb: &RuleBase, obs: &Observation) -> Result<Observation, FiveError> {
        match self.universe {
            UniverseMode::Clamp => Ok(rb.clamp(obs)?),
            UniverseMode::Strict => {
                rb.check_universe(obs)?;
                Ok(obs.clone())
            }
        }
    }

    /// Distance from a prepared observation to a rule's antecedent anchor.
    pub fn rule_distance(&self, rb: &RuleBase, obs: &Observation, rule: usize) -> f64 {
        let anchor = rb.anchor(rule);
        self.aggregate(
            self.scalings
                .iter()
                .zip(obs.values())
                .zip(anchor)
                .map(|((s, &x), a)| s.distance(x, a)),
        )
    }

    pub fn infer(&self, rb: &RuleBase, obs: &Observation) -> Result<InferenceResult, FiveError> {
        self.check(rb)?;
        let obs = self.prepare(rb, obs)?;
        let distances: Vec<f64> = (0..rb.rules().len())
            .map(|r| self.rule_distance(rb, &obs, r))
            .collect();
        let rules = rb.rules();

        let mut matched: Option<usize> = None;
        for (r, &d) in distances.iter().enumerate() {
            if d == 0.0 {
                match matched {
                    None => matched = Some(r),
                    Some(first) if rules[first].consequent != rules[r].consequent => {
                        return Err(FiveError::ZeroDistanceConflict {
                            first: first + 1,
                            second: r + 1,
                        })
                    }
                    Some(_) => {}
                }
            }
        }

        let level = match matched {
            Some(r) => rules[r].consequent,
            None => {
                // Weights relative to the nearest rule keep tiny distances
                // from overflowing d^-p.
                let nearest = distances.iter().copied().fold(f64::INFINITY, f64::min);
                let (num, den) = rules.iter().zip(&distances).fold((0.0, 0.0), |(n, d), (rule, &dist)| {
                    let wgt = (nearest / dist).powf(self.p);
                    (n + wgt * rule.consequent, d + wgt)
                });
                let (lo, hi) = rb.consequent_bounds();
                (num / den).clamp(lo, hi)
            }
        };

        Ok(InferenceResult {
            level,
            alert: classify(level, self.threshold),
            matched_rule: matched,
            per_rule_distances: distances,
        })
    }
}

/// Binarizes an attack level; the threshold itself raises an alert.
pub fn classify(level: f64, threshold: f64) -> bool {
    level >= threshold
}
