//! Filtration into normal/intrusion pools, detection runs and metrics.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::five::{FiveError, VagueEnvironment};
use crate::flow::{Cell, DataError, Feature, FeatureKind, FlowRecord, PacketClass};
use crate::fuzzy::{Observation, RuleBase};
use crate::select::{LabeledTable, SelectError, Value};

/// The three highest-gain features used as engine inputs.
pub const DEFAULT_FEATURES: [Feature; 3] = [Feature::PktRate, Feature::ByteRate, Feature::Utilization];

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("pool `{0}` is empty")]
    EmptyPool(&'static str),
    #[error("confusion matrix is empty")]
    EmptyMatrix,
    #[error(transparent)]
    Inference(#[from] FiveError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Select(#[from] SelectError),
}

/// Resolves feature names, rejecting unknown or categorical ones.
pub fn resolve_features<S: AsRef<str>>(names: &[S]) -> Result<Vec<Feature>, DataError> {
    names
        .iter()
        .map(|n| {
            let n = n.as_ref();
            let f = Feature::from_name(n).ok_or_else(|| DataError::UnknownFeature(n.to_string()))?;
            if f.kind() != FeatureKind::Continuous {
                return Err(DataError::NotNumeric(n.to_string()));
            }
            Ok(f)
        })
        .collect()
}

/// Projected observations split by ground truth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pools {
    pub features: Vec<Feature>,
    pub normal: Vec<Observation>,
    pub intrusion: Vec<Observation>,
}

/// Splits records into normal and intrusion pools, drops records with any
/// missing entry and keeps only the selected features.
pub fn filter_and_sort(records: &[FlowRecord], selected: &[Feature]) -> Result<Pools, DataError> {
    if let Some(f) = selected.iter().find(|f| f.kind() != FeatureKind::Continuous) {
        return Err(DataError::NotNumeric(f.column()));
    }
    let mut pools = Pools {
        features: selected.to_vec(),
        normal: Vec::new(),
        intrusion: Vec::new(),
    };
    for rec in records.iter().filter(|r| !r.has_missing()) {
        let obs = Observation::new(
            selected
                .iter()
                .map(|&f| rec.numeric(f).expect("continuous and present"))
                .collect(),
        );
        if rec.class.is_attack() {
            pools.intrusion.push(obs);
        } else {
            pools.normal.push(obs);
        }
    }
    Ok(pools)
}

/// Per-class random sample of `fraction` of the records (at least one per
/// non-empty class), deterministic for a seed. Output keeps input order.
pub fn stratified_sample(records: &[FlowRecord], fraction: f64, seed: u64) -> Vec<FlowRecord> {
    let mut by_class: BTreeMap<PacketClass, Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        by_class.entry(r.class).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = Vec::new();
    for idx in by_class.values_mut() {
        idx.shuffle(&mut rng);
        let n = ((idx.len() as f64 * fraction.clamp(0.0, 1.0)).ceil() as usize).clamp(1, idx.len());
        keep.extend_from_slice(&idx[..n]);
    }
    keep.sort_unstable();
    keep.into_iter().map(|i| records[i].clone()).collect()
}

/// Seeded disjoint train/test split of each pool: up to `train_per_pool`
/// observations for training and up to `test_per_pool` of the rest for
/// testing.
pub fn split_pools(pools: &Pools, train_per_pool: usize, test_per_pool: usize, seed: u64) -> (Pools, Pools) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut split = |pool: &[Observation]| {
        let mut idx: Vec<usize> = (0..pool.len()).collect();
        idx.shuffle(&mut rng);
        let n_train = train_per_pool.min(idx.len());
        let n_test = test_per_pool.min(idx.len() - n_train);
        let pick = |ids: &[usize]| ids.iter().map(|&i| pool[i].clone()).collect::<Vec<_>>();
        (pick(&idx[..n_train]), pick(&idx[n_train..n_train + n_test]))
    };
    let (normal_train, normal_test) = split(&pools.normal);
    let (intrusion_train, intrusion_test) = split(&pools.intrusion);
    (
        Pools {
            features: pools.features.clone(),
            normal: normal_train,
            intrusion: intrusion_train,
        },
        Pools {
            features: pools.features.clone(),
            normal: normal_test,
            intrusion: intrusion_test,
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, tn: u64, fp: u64, fn_: u64) -> Self {
        Self { tp, tn, fp, fn_ }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }

    fn merge(self, o: Self) -> Self {
        Self::new(self.tp + o.tp, self.tn + o.tn, self.fp + o.fp, self.fn_ + o.fn_)
    }
}

/// Runs the engine over both pools. Alerts on normal traffic count as false
/// positives; missed intrusions as false negatives.
pub fn evaluate(
    env: &VagueEnvironment,
    rb: &RuleBase,
    normal: &[Observation],
    intrusion: &[Observation],
) -> Result<ConfusionMatrix, PipelineError> {
    if normal.is_empty() {
        return Err(PipelineError::EmptyPool("normal"));
    }
    if intrusion.is_empty() {
        return Err(PipelineError::EmptyPool("intrusion"));
    }
    let count = |pool: &[Observation], attack: bool| -> Result<ConfusionMatrix, PipelineError> {
        pool.par_iter()
            .map(|obs| {
                let alert = env.infer(rb, obs)?.alert;
                Ok(match (attack, alert) {
                    (true, true) => ConfusionMatrix::new(1, 0, 0, 0),
                    (true, false) => ConfusionMatrix::new(0, 0, 0, 1),
                    (false, true) => ConfusionMatrix::new(0, 0, 1, 0),
                    (false, false) => ConfusionMatrix::new(0, 1, 0, 0),
                })
            })
            .try_reduce(ConfusionMatrix::default, |a, b| Ok(a.merge(b)))
    };
    Ok(count(normal, false)?.merge(count(intrusion, true)?))
}

/// Detection rates; `None` marks a rate whose denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    pub dr: f64,
    pub tpr: Option<f64>,
    pub tnr: Option<f64>,
    pub fpr: Option<f64>,
    pub fnr: Option<f64>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn metrics(cm: &ConfusionMatrix) -> Result<Metrics, PipelineError> {
    let total = cm.total();
    if total == 0 {
        return Err(PipelineError::EmptyMatrix);
    }
    let pos = cm.tp + cm.fn_;
    let neg = cm.fp + cm.tn;
    Ok(Metrics {
        dr: (cm.tp + cm.tn) as f64 / total as f64,
        tpr: ratio(cm.tp, pos),
        fnr: ratio(cm.fn_, pos),
        fpr: ratio(cm.fp, neg),
        tnr: ratio(cm.tn, neg),
    })
}

/// Flat JSON-friendly report `{tp, tn, fp, fn, dr, tpr, tnr, fpr, fnr}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricsReport {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub dr: f64,
    pub tpr: Option<f64>,
    pub tnr: Option<f64>,
    pub fpr: Option<f64>,
    pub fnr: Option<f64>,
}

impl MetricsReport {
    pub fn new(cm: &ConfusionMatrix) -> Result<Self, PipelineError> {
        let m = metrics(cm)?;
        Ok(Self {
            tp: cm.tp,
            tn: cm.tn,
            fp: cm.fp,
            fn_: cm.fn_,
            dr: m.dr,
            tpr: m.tpr,
            tnr: m.tnr,
            fpr: m.fpr,
            fnr: m.fnr,
        })
    }
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rate = |r: Option<f64>| r.map_or_else(|| "undefined".to_string(), |v| format!("{v:.4}"));
        let normal = self.tn + self.fp;
        let intrusion = self.fn_ + self.tp;
        writeln!(f, "{:<12}{:>10}{:>11}{:>8}", "Actual", "Normal", "Intrusion", "Total")?;
        writeln!(f, "{:<12}{:>10}{:>11}{:>8}", "Normal", self.tn, self.fp, normal)?;
        writeln!(f, "{:<12}{:>10}{:>11}{:>8}", "Intrusion", self.fn_, self.tp, intrusion)?;
        writeln!(
            f,
            "{:<12}{:>10}{:>11}{:>8}",
            "Total",
            self.tn + self.fn_,
            self.fp + self.tp,
            normal + intrusion
        )?;
        writeln!(f)?;
        writeln!(f, "{:<12}{:<22}Normal predicted", "Alert", "Intrusion predicted")?;
        let (tpr, fnr, fpr, tnr) = (rate(self.tpr), rate(self.fnr), rate(self.fpr), rate(self.tnr));
        writeln!(f, "{:<12}{:<22}FNR = {fnr}", "Intrusion", format!("TPR = {tpr}"))?;
        writeln!(f, "{:<12}{:<22}TNR = {tnr}", "Normal", format!("FPR = {fpr}"))?;
        writeln!(f)?;
        write!(f, "Detection rate: {:.2}%", self.dr * 100.0)
    }
}

/// Labeled table over every non-class column. With `binary` the class is
/// normal vs. attack, otherwise the raw packet class.
pub fn feature_table(records: &[FlowRecord], binary: bool) -> Result<LabeledTable, SelectError> {
    let features: Vec<Feature> = Feature::ALL
        .iter()
        .copied()
        .filter(|&f| f != Feature::PktClass)
        .collect();
    let names = features.iter().map(|f| f.title().to_string()).collect();
    let rows = records
        .iter()
        .map(|r| {
            features
                .iter()
                .map(|&f| match r.get(f) {
                    Cell::Num(x) => Value::Num(*x),
                    Cell::Text(s) => Value::Cat(s.clone()),
                    Cell::Missing => Value::Missing,
                })
                .collect()
        })
        .collect();
    let classes = records
        .iter()
        .map(|r| {
            if binary {
                if r.class.is_attack() { "Attack" } else { "Normal" }.to_string()
            } else {
                r.class.label().to_string()
            }
        })
        .collect();
    LabeledTable::new(names, rows, classes)
}
