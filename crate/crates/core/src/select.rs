//! Entropy, information gain and feature ranking.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SelectError {
    #[error("class counts are all zero")]
    AllZeroCounts,
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("discretizer needs at least 2 bins, got {0}")]
    TooFewBins(usize),
    #[error("row {row} has {got} values, table has {expected} features")]
    RowArity { row: usize, expected: usize, got: usize },
    #[error("a labeled table needs at least 2 rows, got {0}")]
    TooFewRows(usize),
    #[error("row {0} has an empty class label")]
    EmptyLabel(usize),
    #[error("{rows} rows but {labels} class labels")]
    LabelCount { rows: usize, labels: usize },
}

/// One cell of a feature column.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Cat(String),
    Missing,
}

/// Feature columns plus one class label per row.
#[derive(Debug, Clone)]
pub struct LabeledTable {
    features: Vec<String>,
    columns: Vec<Vec<Value>>,
    classes: Vec<String>,
}

impl LabeledTable {
    pub fn new(
        features: Vec<String>,
        rows: Vec<Vec<Value>>,
        classes: Vec<String>,
    ) -> Result<Self, SelectError> {
        if rows.len() != classes.len() {
            return Err(SelectError::LabelCount {
                rows: rows.len(),
                labels: classes.len(),
            });
        }
        if rows.len() < 2 {
            return Err(SelectError::TooFewRows(rows.len()));
        }
        if let Some(i) = classes.iter().position(|c| c.trim().is_empty()) {
            return Err(SelectError::EmptyLabel(i + 1));
        }
        let mut columns = vec![Vec::with_capacity(rows.len()); features.len()];
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != features.len() {
                return Err(SelectError::RowArity {
                    row: r + 1,
                    expected: features.len(),
                    got: row.len(),
                });
            }
            for (col, v) in columns.iter_mut().zip(row) {
                col.push(v);
            }
        }
        Ok(Self {
            features,
            columns,
            classes,
        })
    }

    pub fn features(&self) -> &[String] {
        &self.features
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn column(&self, feature: &str) -> Option<&[Value]> {
        self.features
            .iter()
            .position(|f| f == feature)
            .map(|i| self.columns[i].as_slice())
    }
}

/// Equal-frequency binning of continuous values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Discretizer {
    bins: usize,
}

impl Default for Discretizer {
    fn default() -> Self {
        Self { bins: 10 }
    }
}

impl Discretizer {
    pub fn equal_frequency(bins: usize) -> Result<Self, SelectError> {
        if bins < 2 {
            return Err(SelectError::TooFewBins(bins));
        }
        Ok(Self { bins })
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    /// Interior cut points: the order statistics at ranks `j·n/bins`, with
    /// duplicates merged so the edges are strictly increasing.
    pub fn edges(&self, values: &[f64]) -> Vec<f64> {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        if n == 0 {
            return Vec::new();
        }
        let mut edges: Vec<f64> = (1..self.bins).map(|j| sorted[j * n / self.bins]).collect();
        edges.dedup();
        edges
    }

    /// Bin index of `x`: the number of edges at or below it.
    pub fn bin(edges: &[f64], x: f64) -> usize {
        edges.partition_point(|&e| e <= x)
    }
}

/// Shannon entropy in bits of a class histogram.
pub fn entropy(counts: &[usize]) -> Result<f64, SelectError> {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return Err(SelectError::AllZeroCounts);
    }
    let total = total as f64;
    Ok(counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum::<f64>()
        .max(0.0))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Group<'a> {
    Bin(usize),
    Cat(&'a str),
}

/// Information gain of one feature about the class column.
///
/// Rows missing this feature are left out of its score (class entropy
/// included).
pub fn info_gain(table: &LabeledTable, feature: &str, disc: &Discretizer) -> Result<f64, SelectError> {
    let column = table
        .column(feature)
        .ok_or_else(|| SelectError::UnknownFeature(feature.to_string()))?;

    // Sorted label order keeps the floating-point sums row-order independent.
    let class_ids: BTreeMap<&str, usize> = table
        .classes
        .iter()
        .map(String::as_str)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    let n_classes = class_ids.len();

    let numeric: Vec<f64> = column
        .iter()
        .filter_map(|v| match v {
            Value::Num(x) => Some(*x),
            _ => None,
        })
        .collect();
    let edges = disc.edges(&numeric);

    let mut groups: BTreeMap<Group<'_>, Vec<usize>> = BTreeMap::new();
    let mut overall = vec![0usize; n_classes];
    for (v, class) in column.iter().zip(&table.classes) {
        let key = match v {
            Value::Num(x) => Group::Bin(Discretizer::bin(&edges, *x)),
            Value::Cat(s) => Group::Cat(s.as_str()),
            Value::Missing => continue,
        };
        let k = class_ids[class.as_str()];
        groups.entry(key).or_insert_with(|| vec![0; n_classes])[k] += 1;
        overall[k] += 1;
    }

    let n: usize = overall.iter().sum();
    if n == 0 {
        return Ok(0.0);
    }
    let base = entropy(&overall)?;
    let mut conditional = 0.0;
    for counts in groups.values() {
        let size: usize = counts.iter().sum();
        conditional += size as f64 / n as f64 * entropy(counts)?;
    }
    Ok((base - conditional).clamp(0.0, base))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedFeature {
    pub feature: String,
    pub gain: f64,
}

/// Scores every feature and sorts by descending gain, ties by name.
pub fn rank_features(table: &LabeledTable, disc: &Discretizer) -> Result<Vec<RankedFeature>, SelectError> {
    let mut ranked = table
        .features
        .iter()
        .map(|f| {
            Ok(RankedFeature {
                feature: f.clone(),
                gain: info_gain(table, f, disc)?,
            })
        })
        .collect::<Result<Vec<_>, SelectError>>()?;
    ranked.sort_by(|a, b| b.gain.total_cmp(&a.gain).then_with(|| a.feature.cmp(&b.feature)));
    Ok(ranked)
}
