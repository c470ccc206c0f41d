//! `fri-ids`: feature ranking, rule learning and detection runs over flow
//! record CSV files.
//!
//! Exit codes: 0 on success, 1 for usage or configuration errors, 2 for data
//! errors (unreadable or malformed input, inference failures).

mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use fri_ids::five::{FiveParams, UniverseMode, VagueEnvironment};
use fri_ids::flow::{load_csv, Feature, FlowRecord};
use fri_ids::fuzzy::{Observation, RuleBase};
use fri_ids::learn::{learn, TrainingSet};
use fri_ids::pipeline::{
    evaluate, feature_table, filter_and_sort, resolve_features, split_pools, stratified_sample, ConfusionMatrix,
    MetricsReport,
};
use fri_ids::rulefile::{baseline, parse_rule_base, write_rule_base};
use fri_ids::select::rank_features;
use serde::Serialize;

use config::{config_error, ConfigError, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "fri-ids", version, about = "Fuzzy rule interpolation intrusion detection")]
struct Cli {
    /// `key = value` config file; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank dataset features by information gain about the packet class
    Rank {
        #[command(flatten)]
        data: DataArgs,
        /// Equal-frequency bins for continuous features
        #[arg(long)]
        bins: Option<usize>,
        /// Score against normal vs. attack instead of the full class label
        #[arg(long)]
        binary: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Learn a rule base from a labeled CSV file
    Train {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        engine: EngineArgs,
        /// Training rows drawn per pool (normal, intrusion)
        #[arg(long)]
        train_per_class: Option<usize>,
        #[arg(long)]
        max_rules: Option<usize>,
        #[arg(long)]
        max_iterations: Option<usize>,
        /// Relative RMSE at which learning stops
        #[arg(long)]
        target: Option<f64>,
        /// Where to write the JSON trace (default: `<out>.trace.json`)
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the detector over a labeled CSV file and report detection rates
    Eval {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        engine: EngineArgs,
        /// Evaluate at most this many rows per pool (seeded draw)
        #[arg(long)]
        test_per_class: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Classify one observation
    Infer {
        /// Observation values, one per rule-base input
        #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
        obs: Vec<f64>,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Classify the two reference observations and show the reference metrics
    Demo {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args, Debug)]
struct DataArgs {
    /// Flow record CSV file
    #[arg(long)]
    input: Option<PathBuf>,
    /// Keep this stratified fraction of the rows before anything else
    #[arg(long)]
    sample: Option<f64>,
}

#[derive(Args, Debug)]
struct EngineArgs {
    /// Rule-base file (default: the bundled baseline)
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Comma-separated input features
    #[arg(long, value_delimiter = ',')]
    features: Option<Vec<String>>,
    /// Shepard exponent
    #[arg(long)]
    p: Option<f64>,
    /// Minkowski order for combining per-input distances
    #[arg(long)]
    w: Option<f64>,
    /// Scaling floor relative to each universe width
    #[arg(long)]
    scaling_floor: Option<f64>,
    /// Alert threshold on the conclusion level
    #[arg(long)]
    threshold: Option<f64>,
    /// Reject observations outside the universes instead of clamping them
    #[arg(long)]
    strict_universe: bool,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Write the result to this file
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

impl DataArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(p) = &self.input {
            cfg.input = Some(p.clone());
        }
        if self.sample.is_some() {
            cfg.sample = self.sample;
        }
    }
}

impl EngineArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(r) = &self.rules {
            cfg.rules = Some(r.clone());
        }
        if let Some(f) = &self.features {
            cfg.features = Some(f.clone());
        }
        let five = &mut cfg.five;
        five.p = self.p.unwrap_or(five.p);
        five.w = self.w.unwrap_or(five.w);
        five.scaling_floor = self.scaling_floor.unwrap_or(five.scaling_floor);
        five.threshold = self.threshold.unwrap_or(five.threshold);
        if self.strict_universe {
            five.universe = UniverseMode::Strict;
        }
    }
}

impl CommonArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(o) = &self.out {
            cfg.out = Some(o.clone());
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

/// The error chain, skipping causes already spelled out by an outer message.
fn describe(e: &anyhow::Error) -> String {
    let mut msg = e.to_string();
    for cause in e.chain().skip(1) {
        let s = cause.to_string();
        if !msg.contains(&s) {
            msg.push_str(": ");
            msg.push_str(&s);
        }
    }
    msg
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    match &cli.command {
        Command::Rank { data, bins, binary, common } => {
            data.apply(&mut cfg);
            common.apply(&mut cfg);
            cfg.bins = bins.unwrap_or(cfg.bins);
            cfg.binary |= binary;
        }
        Command::Train {
            data,
            engine,
            train_per_class,
            max_rules,
            max_iterations,
            target,
            trace,
            common,
        } => {
            data.apply(&mut cfg);
            engine.apply(&mut cfg);
            common.apply(&mut cfg);
            cfg.train_per_class = train_per_class.unwrap_or(cfg.train_per_class);
            cfg.learner.max_rules = max_rules.unwrap_or(cfg.learner.max_rules);
            cfg.learner.max_iterations = max_iterations.unwrap_or(cfg.learner.max_iterations);
            cfg.learner.target = target.unwrap_or(cfg.learner.target);
            if trace.is_some() {
                cfg.trace = trace.clone();
            }
        }
        Command::Eval {
            data,
            engine,
            test_per_class,
            common,
        } => {
            data.apply(&mut cfg);
            engine.apply(&mut cfg);
            common.apply(&mut cfg);
            if test_per_class.is_some() {
                cfg.test_per_class = *test_per_class;
            }
        }
        Command::Infer { engine, common, .. } => {
            engine.apply(&mut cfg);
            common.apply(&mut cfg);
        }
        Command::Demo { common } => common.apply(&mut cfg),
    }
    cfg.validate()?;

    match cli.command {
        Command::Rank { .. } => cmd_rank(&cfg),
        Command::Train { .. } => cmd_train(&cfg),
        Command::Eval { .. } => cmd_eval(&cfg),
        Command::Infer { obs, .. } => cmd_infer(&cfg, obs),
        Command::Demo { .. } => cmd_demo(&cfg),
    }
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write `{}`", path.display()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn load_records(cfg: &RunConfig) -> Result<Vec<FlowRecord>> {
    let path = cfg.require_input()?;
    let report = load_csv(path)?;
    if let Some(first) = report.rejects.first() {
        eprintln!(
            "warning: skipped {} malformed row(s) in `{}` (first: row {}: {})",
            report.rejects.len(),
            path.display(),
            first.row,
            first.reason
        );
    }
    Ok(match cfg.sample {
        Some(fraction) => stratified_sample(&report.records, fraction, cfg.seed),
        None => report.records,
    })
}

fn load_rule_base(cfg: &RunConfig) -> Result<RuleBase> {
    match &cfg.rules {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read `{}`", path.display()))?;
            parse_rule_base(&text).with_context(|| format!("invalid rule base `{}`", path.display()))
        }
        None => Ok(baseline()),
    }
}

/// Engine inputs: the configured features, else the rule base's partition names.
fn engine_features(cfg: &RunConfig, rb: Option<&RuleBase>) -> Result<Vec<Feature>> {
    let names: Vec<String> = match (&cfg.features, rb) {
        (Some(f), _) => f.clone(),
        (None, Some(rb)) => rb.partitions().iter().map(|p| p.name().to_string()).collect(),
        (None, None) => fri_ids::pipeline::DEFAULT_FEATURES.iter().map(|f| f.column()).collect(),
    };
    let features = resolve_features(&names).map_err(|e| config_error(e.to_string()))?;
    if let Some(rb) = rb {
        if features.len() != rb.dims() {
            return Err(config_error(format!(
                "{} feature(s) selected but the rule base has {} input(s)",
                features.len(),
                rb.dims()
            )));
        }
    }
    Ok(features)
}

fn environment(rb: &RuleBase, params: &FiveParams) -> Result<VagueEnvironment> {
    VagueEnvironment::derive(rb, params).map_err(|e| config_error(e.to_string()))
}

fn cmd_rank(cfg: &RunConfig) -> Result<()> {
    let records = load_records(cfg)?;
    let table = feature_table(&records, cfg.binary)?;
    let ranked = rank_features(&table, &cfg.discretizer())?;
    let mut text = format!("{:<5}{:<22}{}\n", "No.", "Feature", "Information gain");
    for (i, r) in ranked.iter().enumerate() {
        writeln!(text, "{:<5}{:<22}{:.7}", i + 1, r.feature, r.gain).unwrap();
    }
    print!("{text}");
    if let Some(out) = &cfg.out {
        write_out(out, &text)?;
    }
    Ok(())
}

fn cmd_train(cfg: &RunConfig) -> Result<()> {
    let out = cfg
        .out
        .as_deref()
        .ok_or_else(|| config_error("train needs --out for the rule-base file"))?;
    let features = engine_features(cfg, None)?;
    let records = load_records(cfg)?;
    let pools = filter_and_sort(&records, &features)?;
    let (train_pools, _) = split_pools(&pools, cfg.train_per_class, 0, cfg.seed);
    let train = TrainingSet::from_pools(&train_pools)?;
    let learner = fri_ids::learn::LearnerConfig {
        seed: cfg.seed,
        ..cfg.learner
    };
    let outcome = learn(&train, &learner, &cfg.five)?;

    write_out(out, &write_rule_base(&outcome.rule_base))?;
    let trace_path = cfg.trace.clone().unwrap_or_else(|| {
        let mut p = out.as_os_str().to_owned();
        p.push(".trace.json");
        PathBuf::from(p)
    });
    write_out(&trace_path, &to_json(&outcome.trace))?;
    println!(
        "trained on {} normal + {} intrusion rows: {} rules, relative RMSE {:.4}",
        train_pools.normal.len(),
        train_pools.intrusion.len(),
        outcome.rule_base.rules().len(),
        outcome.index
    );
    println!("rule base: {}", out.display());
    println!("trace: {}", trace_path.display());
    Ok(())
}

fn cmd_eval(cfg: &RunConfig) -> Result<()> {
    let rb = load_rule_base(cfg)?;
    let features = engine_features(cfg, Some(&rb))?;
    let env = environment(&rb, &cfg.five)?;
    let records = load_records(cfg)?;
    let mut pools = filter_and_sort(&records, &features)?;
    if let Some(n) = cfg.test_per_class {
        pools = split_pools(&pools, 0, n, cfg.seed).1;
    }
    let cm = evaluate(&env, &rb, &pools.normal, &pools.intrusion)?;
    let report = MetricsReport::new(&cm)?;
    let json = to_json(&report);
    println!("{report}\n");
    print!("{json}");
    if let Some(out) = &cfg.out {
        write_out(out, &json)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct InferReport<'a> {
    observation: &'a [f64],
    level: f64,
    alert: bool,
    verdict: &'static str,
    matched_rule: Option<usize>,
}

fn verdict(alert: bool) -> &'static str {
    if alert {
        "attack"
    } else {
        "normal"
    }
}

fn cmd_infer(cfg: &RunConfig, obs: Vec<f64>) -> Result<()> {
    let rb = load_rule_base(cfg)?;
    if obs.len() != rb.dims() {
        return Err(config_error(format!(
            "--obs has {} value(s) but the rule base has {} input(s)",
            obs.len(),
            rb.dims()
        )));
    }
    let env = environment(&rb, &cfg.five)?;
    let result = env.infer(&rb, &Observation::new(obs.clone()))?;
    let report = InferReport {
        observation: &obs,
        level: result.level,
        alert: result.alert,
        verdict: verdict(result.alert),
        // 1-based, like rule numbers in messages.
        matched_rule: result.matched_rule.map(|r| r + 1),
    };
    println!("level {:.4} -> {}", report.level, report.verdict);
    if let Some(out) = &cfg.out {
        write_out(out, &to_json(&report))?;
    }
    Ok(())
}

fn cmd_demo(cfg: &RunConfig) -> Result<()> {
    let rb = baseline();
    let env = environment(&rb, &FiveParams::default())?;
    let mut text = String::from("Bundled rule base, default engine settings\n\n");
    for obs in [[200.0, 55943.0, 11560.0], [900.0, 1190251.0, 22029.0]] {
        let o = Observation::new(obs.to_vec());
        let r = env.infer(&rb, &o)?;
        writeln!(
            text,
            "PKT_RATE={} BYTE_RATE={} UTILIZATION={}: level {:.4} -> {} (classically covered: {})",
            obs[0],
            obs[1],
            obs[2],
            r.level,
            verdict(r.alert),
            rb.classical_covered(&o)?
        )
        .unwrap();
    }
    let cm = ConfusionMatrix::new(4668, 4997, 3, 332);
    let report = MetricsReport::new(&cm)?;
    let rate = |r: Option<f64>| r.map_or_else(|| "undefined".to_string(), |v| format!("{v:.4}"));
    writeln!(
        text,
        "\nCounts tp={} tn={} fp={} fn={}\ndr={} tpr={} tnr={} fpr={} fnr={}\n\n{report}",
        cm.tp,
        cm.tn,
        cm.fp,
        cm.fn_,
        report.dr,
        rate(report.tpr),
        rate(report.tnr),
        rate(report.fpr),
        rate(report.fnr)
    )
    .unwrap();
    print!("{text}");
    if let Some(out) = &cfg.out {
        write_out(out, &text)?;
    }
    Ok(())
}
