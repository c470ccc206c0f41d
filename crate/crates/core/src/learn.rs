//! Sparse rule-base identification: rule-base extension with default set
//! shapes, tuned by coordinate hill climbing.
//!
//! The learner starts from two rules anchored at the rows with the smallest
//! and largest target. It then sweeps every trapezoid knot and consequent,
//! keeping any single-parameter nudge that lowers the relative RMSE. When a
//! number of consecutive sweeps bring no improvement, a new rule is placed at
//! the training row with the largest residual. It stops at the target index
//! or after the iteration budget and returns the best rule base it has seen.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::five::{FiveError, FiveParams, VagueEnvironment};
use crate::fuzzy::{FuzzyError, InputPartition, Observation, Rule, RuleBase, TrapezoidalSet};
use crate::pipeline::Pools;

/// Core width of a default set, as a fraction of the universe width.
pub const DEFAULT_CORE_FRACTION: f64 = 0.05;
/// Support width of a default set, as a fraction of the universe width.
pub const DEFAULT_SUPPORT_FRACTION: f64 = 0.15;

#[derive(Debug, Error, PartialEq)]
pub enum LearnError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("training row {row} has {got} inputs, expected {expected}")]
    DimensionMismatch { row: usize, expected: usize, got: usize },
    #[error("training row {row}: target {value} must be finite and within [0, 1]")]
    InvalidTarget { row: usize, value: f64 },
    #[error("training row {row} has a non-finite input")]
    NonFiniteInput { row: usize },
    #[error("invalid learner configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error(transparent)]
    Inference(#[from] FiveError),
}

/// Observations paired with target levels in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    names: Vec<String>,
    rows: Vec<(Observation, f64)>,
}

impl TrainingSet {
    pub fn new(rows: Vec<(Observation, f64)>) -> Result<Self, LearnError> {
        let dims = rows.first().map(|(o, _)| o.len()).ok_or(LearnError::EmptyTrainingSet)?;
        let names = (1..=dims).map(|i| format!("x{i}")).collect();
        Self::with_names(names, rows)
    }

    pub fn with_names(names: Vec<String>, rows: Vec<(Observation, f64)>) -> Result<Self, LearnError> {
        if rows.is_empty() {
            return Err(LearnError::EmptyTrainingSet);
        }
        for (i, (obs, target)) in rows.iter().enumerate() {
            if obs.len() != names.len() {
                return Err(LearnError::DimensionMismatch {
                    row: i + 1,
                    expected: names.len(),
                    got: obs.len(),
                });
            }
            if obs.values().iter().any(|v| !v.is_finite()) {
                return Err(LearnError::NonFiniteInput { row: i + 1 });
            }
            if !(target.is_finite() && (0.0..=1.0).contains(target)) {
                return Err(LearnError::InvalidTarget {
                    row: i + 1,
                    value: *target,
                });
            }
        }
        Ok(Self { names, rows })
    }

    /// Normal observations target 0, intrusions target 1.
    pub fn from_pools(pools: &Pools) -> Result<Self, LearnError> {
        let names = pools.features.iter().map(|f| f.column()).collect();
        let rows = pools
            .normal
            .iter()
            .map(|o| (o.clone(), 0.0))
            .chain(pools.intrusion.iter().map(|o| (o.clone(), 1.0)))
            .collect();
        Self::with_names(names, rows)
    }

    pub fn rows(&self) -> &[(Observation, f64)] {
        &self.rows
    }

    pub fn dims(&self) -> usize {
        self.names.len()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Per-dimension `[min, max]` of the inputs, widened by one unit around
    /// constant columns.
    pub fn universes(&self) -> Vec<(f64, f64)> {
        (0..self.dims())
            .map(|i| {
                let (lo, hi) = self.rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (o, _)| {
                    (lo.min(o.values()[i]), hi.max(o.values()[i]))
                });
                if lo < hi {
                    (lo, hi)
                } else {
                    (lo - 0.5, hi + 0.5)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LearnerConfig {
    pub max_rules: usize,
    pub max_iterations: usize,
    /// Stop once the relative RMSE is at or below this value.
    pub target: f64,
    /// Initial step, as a fraction of each parameter's range.
    pub initial_step: f64,
    /// Step multiplier after a sweep without improvement.
    pub decay: f64,
    /// Consecutive non-improving sweeps that trigger a rule extension.
    pub stall_window: usize,
    pub seed: u64,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        Self {
            max_rules: 8,
            max_iterations: 500,
            target: 0.05,
            initial_step: 0.05,
            decay: 0.5,
            stall_window: 3,
            seed: 0,
        }
    }
}

impl LearnerConfig {
    pub fn validate(&self) -> Result<(), LearnError> {
        let bad = |m: &str| Err(LearnError::InvalidConfig(m.to_string()));
        if self.max_rules == 0 {
            return bad("max_rules must be positive");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be positive");
        }
        if !(self.target.is_finite() && self.target > 0.0) {
            return bad("target must be positive");
        }
        if !(self.initial_step.is_finite() && self.initial_step > 0.0) {
            return bad("initial_step must be positive");
        }
        if !(self.decay > 0.0 && self.decay < 1.0) {
            return bad("decay must lie in (0, 1)");
        }
        if self.stall_window == 0 {
            return bad("stall_window must be positive");
        }
        Ok(())
    }
}

/// Relative RMSE of the rule base over the training rows.
pub fn performance_index(rb: &RuleBase, env: &VagueEnvironment, train: &TrainingSet) -> Result<f64, LearnError> {
    if train.is_empty() {
        return Err(LearnError::EmptyTrainingSet);
    }
    let mut sse = 0.0;
    for (obs, target) in &train.rows {
        let err = env.infer(rb, obs)?.level - target;
        sse += err * err;
    }
    let rmse = (sse / train.len() as f64).sqrt();
    let (lo, hi) = rb.output_range();
    Ok(if hi > lo { rmse / (hi - lo) } else { rmse })
}

fn index_of(rb: &RuleBase, params: &FiveParams, train: &TrainingSet) -> Result<f64, LearnError> {
    let env = VagueEnvironment::derive(rb, params)?;
    performance_index(rb, &env, train)
}

/// Symmetric default set centred on `center`: core 5% and support 15% of the
/// universe width, both cut back to fit inside the universe.
pub fn default_set(center: f64, lo: f64, hi: f64) -> Result<TrapezoidalSet, FuzzyError> {
    let width = hi - lo;
    let half_core = (DEFAULT_CORE_FRACTION * width / 2.0).min(center - lo).min(hi - center).max(0.0);
    let half_support = DEFAULT_SUPPORT_FRACTION * width / 2.0;
    TrapezoidalSet::new(
        (center - half_support).max(lo),
        center - half_core,
        center + half_core,
        (center + half_support).min(hi),
    )
}

/// Antecedent labels for a rule anchored at `point`, adding default sets to
/// the partitions where no term is centred there yet.
fn anchor_terms(partitions: &mut [InputPartition], point: &[f64]) -> Result<Vec<String>, FuzzyError> {
    partitions
        .iter_mut()
        .zip(point)
        .map(|(p, &x)| {
            let (lo, hi) = p.universe();
            let x = x.clamp(lo, hi);
            p.ensure_term(default_set(x, lo, hi)?)
        })
        .collect()
}

/// Two rules at the rows with the smallest and largest target (first
/// occurrence wins ties). When every target is equal the base has a single
/// rule.
pub fn init_rulebase(train: &TrainingSet) -> Result<RuleBase, LearnError> {
    if train.is_empty() {
        return Err(LearnError::EmptyTrainingSet);
    }
    let (mut lo_row, mut hi_row) = (0, 0);
    for (i, (_, t)) in train.rows.iter().enumerate() {
        if *t < train.rows[lo_row].1 {
            lo_row = i;
        }
        if *t > train.rows[hi_row].1 {
            hi_row = i;
        }
    }

    let first = &train.rows[lo_row];
    let mut partitions: Vec<InputPartition> = train
        .universes()
        .into_iter()
        .zip(&train.names)
        .zip(first.0.values())
        .map(|(((lo, hi), name), &x)| InputPartition::new(name.clone(), lo, hi, vec![crate::fuzzy::Term::new("T1", default_set(x, lo, hi)?)]))
        .collect::<Result<_, FuzzyError>>()?;
    let mut rules = vec![Rule::new(
        partitions.iter().map(|p| p.terms()[0].label.clone()),
        first.1,
    )];

    let last = &train.rows[hi_row];
    if last.1 > first.1 {
        let labels = anchor_terms(&mut partitions, last.0.values())?;
        rules.push(Rule::new(labels, last.1));
    }
    Ok(RuleBase::new(partitions, rules, (0.0, 1.0))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Param {
    Knot { dim: usize, term: usize, knot: usize },
    Consequent { rule: usize },
}

fn parameters(rb: &RuleBase) -> Vec<Param> {
    let mut params = Vec::new();
    for (dim, p) in rb.partitions().iter().enumerate() {
        for term in 0..p.terms().len() {
            for knot in 0..4 {
                params.push(Param::Knot { dim, term, knot });
            }
        }
    }
    params.extend((0..rb.rules().len()).map(|rule| Param::Consequent { rule }));
    params
}

/// Copy of the rule base with one parameter moved by `delta` (a fraction of
/// that parameter's range), or `None` if the result is invalid.
fn nudge(rb: &RuleBase, param: Param, delta: f64) -> Option<RuleBase> {
    let (mut partitions, mut rules, range) = rb.clone().into_parts();
    match param {
        Param::Knot { dim, term, knot } => {
            let p = &partitions[dim];
            let value = p.terms()[term].set.knots()[knot] + delta * p.width();
            partitions[dim] = p.with_knot(term, knot, value).ok()?;
        }
        Param::Consequent { rule } => {
            rules[rule].consequent += delta * (range.1 - range.0);
        }
    }
    RuleBase::new(partitions, rules, range).ok()
}

/// One sweep over `order`; returns the tuned base and its index if any move
/// was accepted.
fn sweep(
    rb: &RuleBase,
    params: &FiveParams,
    train: &TrainingSet,
    step: f64,
    order: &[Param],
    mut current: f64,
) -> (RuleBase, Option<f64>) {
    let mut rb = rb.clone();
    let mut improved = false;
    for &param in order {
        for delta in [step, -step] {
            let Some(candidate) = nudge(&rb, param, delta) else {
                continue;
            };
            match index_of(&candidate, params, train) {
                Ok(idx) if idx < current => {
                    rb = candidate;
                    current = idx;
                    improved = true;
                    break;
                }
                _ => {}
            }
        }
    }
    (rb, improved.then_some(current))
}

/// One hill-climbing sweep in canonical parameter order: every knot of every
/// term, then every consequent. For each parameter `+step` is tried before
/// `-step`; the first strictly improving move is kept. Knot steps are a
/// fraction of the universe width, consequent steps of the output range.
pub fn tune_step(
    rb: &RuleBase,
    params: &FiveParams,
    train: &TrainingSet,
    step: f64,
) -> Result<(RuleBase, bool), LearnError> {
    if !(step.is_finite() && step > 0.0) {
        return Err(LearnError::InvalidConfig("step must be positive".into()));
    }
    let start = index_of(rb, params, train)?;
    let (tuned, idx) = sweep(rb, params, train, step, &parameters(rb), start);
    Ok((tuned, idx.is_some()))
}

/// Adds a rule at the training row with the largest absolute residual (first
/// row wins ties). Rows whose anchor would repeat an existing antecedent are
/// passed over; if every row does, the base is returned unchanged.
pub fn extend_rule(rb: &RuleBase, params: &FiveParams, train: &TrainingSet) -> Result<RuleBase, LearnError> {
    if train.is_empty() {
        return Err(LearnError::EmptyTrainingSet);
    }
    let env = VagueEnvironment::derive(rb, params)?;
    let mut residuals = train
        .rows
        .iter()
        .enumerate()
        .map(|(i, (obs, target))| Ok((i, (env.infer(rb, obs)?.level - target).abs())))
        .collect::<Result<Vec<_>, LearnError>>()?;
    residuals.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    let (partitions, rules, range) = rb.clone().into_parts();
    for (row, _) in residuals {
        let (obs, target) = &train.rows[row];
        let mut parts = partitions.clone();
        let Ok(labels) = anchor_terms(&mut parts, obs.values()) else {
            continue;
        };
        if rules.iter().any(|r| r.antecedent == labels) {
            continue;
        }
        let mut next_rules = rules.clone();
        next_rules.push(Rule::new(labels, *target));
        if let Ok(next) = RuleBase::new(parts, next_rules, range) {
            return Ok(next);
        }
    }
    Ok(rb.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceEvent {
    Init,
    Tune,
    Stall,
    Extend,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub event: TraceEvent,
    /// Index of the current working rule base.
    pub index: f64,
    /// Best index seen so far.
    pub best_index: f64,
    pub rules: usize,
    pub step: f64,
}

#[derive(Debug, Clone)]
pub struct LearnOutcome {
    pub rule_base: RuleBase,
    pub index: f64,
    pub trace: Vec<TraceEntry>,
}

/// Runs the full identification loop. Each sweep visits the parameters in an
/// order drawn from a generator seeded with `config.seed`, so a run is
/// reproducible for a fixed seed.
pub fn learn(train: &TrainingSet, config: &LearnerConfig, params: &FiveParams) -> Result<LearnOutcome, LearnError> {
    config.validate()?;
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut rb = init_rulebase(train)?;
    let mut index = index_of(&rb, params, train)?;
    let mut best = (rb.clone(), index);
    let mut step = config.initial_step;
    let mut stall = 0;
    let mut trace = vec![TraceEntry {
        iteration: 0,
        event: TraceEvent::Init,
        index,
        best_index: index,
        rules: rb.rules().len(),
        step,
    }];

    for iteration in 1..=config.max_iterations {
        if best.1 <= config.target {
            break;
        }
        let mut order = parameters(&rb);
        order.shuffle(&mut rng);
        let (tuned, improved) = sweep(&rb, params, train, step, &order, index);
        let mut event = match improved {
            Some(idx) => {
                rb = tuned;
                index = idx;
                stall = 0;
                TraceEvent::Tune
            }
            None => {
                stall += 1;
                step *= config.decay;
                TraceEvent::Stall
            }
        };

        if stall >= config.stall_window && rb.rules().len() < config.max_rules {
            let extended = extend_rule(&rb, params, train)?;
            if extended.rules().len() > rb.rules().len() {
                rb = extended;
                index = index_of(&rb, params, train)?;
                step = config.initial_step;
                stall = 0;
                event = TraceEvent::Extend;
            }
        }

        if index < best.1 {
            best = (rb.clone(), index);
        }
        trace.push(TraceEntry {
            iteration,
            event,
            index,
            best_index: best.1,
            rules: rb.rules().len(),
            step,
        });
    }

    Ok(LearnOutcome {
        rule_base: best.0,
        index: best.1,
        trace,
    })
}
