//! Fuzzy rule interpolation for network intrusion detection.
//!
//! * [`fuzzy`]: trapezoidal sets, partitions, sparse rule bases, coverage.
//! * [`five`]: vague-environment interpolative inference.
//! * [`select`]: entropy / information-gain feature ranking.
//! * [`learn`]: rule-base extension with hill-climbing tuning.
//! * [`flow`]: DDoS flow-record CSV ingestion.
//! * [`pipeline`]: normal/intrusion pools, detection runs, metrics.
//! * [`rulefile`]: text format for rule bases and the bundled baseline.

pub mod five;
pub mod flow;
pub mod fuzzy;
pub mod learn;
pub mod pipeline;
pub mod rulefile;
pub mod select;

pub use five::{classify, FiveParams, InferenceResult, VagueEnvironment};
pub use fuzzy::{InputPartition, Observation, Rule, RuleBase, TrapezoidalSet};
pub use rulefile::baseline;
