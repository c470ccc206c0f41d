//! Trapezoidal fuzzy sets, linguistic partitions and sparse rule bases.
//!
//! A [`RuleBase`] maps one linguistic term per input dimension to a crisp
//! consequent level. Rule bases are allowed to be *sparse*: the union of the
//! term supports of a partition need not cover its universe, in which case
//! classical (compositional) inference has nothing to fire for some
//! observations. [`InputPartition::coverage`] reports those holes.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FuzzyError {
    #[error("trapezoid knots must be finite and ordered a <= b <= c <= d, got [{a}, {b}, {c}, {d}]")]
    InvalidTrapezoid { a: f64, b: f64, c: f64, d: f64 },
    #[error("partition `{0}`: universe must satisfy lo < hi with finite bounds")]
    InvalidUniverse(String),
    #[error("partition `{partition}`: term `{term}` support [{a}, {d}] leaves the universe [{lo}, {hi}]")]
    SupportOutsideUniverse {
        partition: String,
        term: String,
        a: f64,
        d: f64,
        lo: f64,
        hi: f64,
    },
    #[error("partition `{partition}`: terms must be ordered by strictly increasing core midpoint (`{term}` is out of order)")]
    UnorderedTerms { partition: String, term: String },
    #[error("partition `{partition}`: duplicate term label `{term}`")]
    DuplicateTerm { partition: String, term: String },
    #[error("partition `{0}` has no terms")]
    EmptyPartition(String),
    #[error("rule base has no rules")]
    NoRules,
    #[error("rule {rule}: antecedent has {got} labels, rule base has {expected} inputs")]
    AntecedentArity { rule: usize, expected: usize, got: usize },
    #[error("rule {rule}: label `{label}` is not a term of partition `{partition}`")]
    UnknownLabel { rule: usize, partition: String, label: String },
    #[error("rule {rule} repeats the antecedent of rule {first}")]
    DuplicateAntecedent { rule: usize, first: usize },
    #[error("rule {rule}: consequent {value} outside output range [{lo}, {hi}]")]
    ConsequentOutOfRange { rule: usize, value: f64, lo: f64, hi: f64 },
    #[error("output range must satisfy finite lo <= hi, got [{0}, {1}]")]
    InvalidOutputRange(f64, f64),
    #[error("observation has {got} values, rule base has {expected} inputs")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("observation value {value} for `{partition}` is not finite")]
    NonFinite { partition: String, value: f64 },
    #[error("observation value {value} for `{partition}` lies outside the universe [{lo}, {hi}]")]
    OutsideUniverse { partition: String, value: f64, lo: f64, hi: f64 },
}

/// Four-knot trapezoid `[a, b, c, d]`; `[b, c]` is the core, `[a, d]` the
/// closure of the support.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapezoidalSet {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl TrapezoidalSet {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, FuzzyError> {
        let finite = [a, b, c, d].iter().all(|v| v.is_finite());
        if !finite || !(a <= b && b <= c && c <= d) {
            return Err(FuzzyError::InvalidTrapezoid { a, b, c, d });
        }
        Ok(Self { a, b, c, d })
    }

    pub fn knots(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Membership degree of a crisp value.
    ///
    /// Vertical edges (`a == b` or `c == d`) are steps: the knot itself
    /// belongs to the core and gets degree 1.
    pub fn membership(&self, x: f64) -> f64 {
        let Self { a, b, c, d } = *self;
        if x < a || x > d {
            0.0
        } else if b <= x && x <= c {
            1.0
        } else if x < b {
            ((x - a) / (b - a)).clamp(0.0, 1.0)
        } else {
            ((d - x) / (d - c)).clamp(0.0, 1.0)
        }
    }

    pub fn core_midpoint(&self) -> f64 {
        (self.b + self.c) / 2.0
    }

    /// Absolute slope of the membership function on the open interval that
    /// contains `x`, or 0 on plateaus and outside the support.
    pub fn slope_at(&self, x: f64) -> f64 {
        let Self { a, b, c, d } = *self;
        if a < x && x < b {
            1.0 / (b - a)
        } else if c < x && x < d {
            1.0 / (d - c)
        } else {
            0.0
        }
    }

    /// The set of points with positive membership, as an interval with
    /// explicit endpoint inclusion.
    fn positive_interval(&self) -> Interval {
        Interval {
            lo: self.a,
            hi: self.d,
            lo_closed: self.a == self.b,
            hi_closed: self.c == self.d,
        }
    }
}

impl fmt::Display for TrapezoidalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {} {} {}]", self.a, self.b, self.c, self.d)
    }
}

#[derive(Debug, Clone, Copy)]
struct Interval {
    lo: f64,
    hi: f64,
    lo_closed: bool,
    hi_closed: bool,
}

/// A named trapezoid inside a partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    pub set: TrapezoidalSet,
}

impl Term {
    pub fn new(label: impl Into<String>, set: TrapezoidalSet) -> Self {
        Self {
            label: label.into(),
            set,
        }
    }
}

/// Uncovered stretch of a universe: the open interval `(lo, hi)`, or the
/// single point `lo` when `lo == hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gap {
    pub lo: f64,
    pub hi: f64,
}

impl Gap {
    pub fn contains(&self, x: f64) -> bool {
        if self.lo == self.hi {
            x == self.lo
        } else {
            self.lo < x && x < self.hi
        }
    }

    /// A point guaranteed to lie in the gap.
    pub fn witness(&self) -> f64 {
        (self.lo + self.hi) / 2.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Coverage {
    Complete,
    Sparse(Vec<Gap>),
}

impl Coverage {
    pub fn is_complete(&self) -> bool {
        matches!(self, Coverage::Complete)
    }

    pub fn gaps(&self) -> &[Gap] {
        match self {
            Coverage::Complete => &[],
            Coverage::Sparse(gaps) => gaps,
        }
    }
}

/// Linguistic terms over one input universe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputPartition {
    name: String,
    universe: (f64, f64),
    terms: Vec<Term>,
}

impl InputPartition {
    pub fn new(
        name: impl Into<String>,
        universe_lo: f64,
        universe_hi: f64,
        terms: Vec<Term>,
    ) -> Result<Self, FuzzyError> {
        let partition = Self {
            name: name.into(),
            universe: (universe_lo, universe_hi),
            terms,
        };
        partition.validate()?;
        Ok(partition)
    }

    /// Builds a partition whose universe is the hull of the term supports.
    pub fn spanning(name: impl Into<String>, terms: Vec<Term>) -> Result<Self, FuzzyError> {
        let name = name.into();
        let lo = terms.iter().map(|t| t.set.a).fold(f64::INFINITY, f64::min);
        let hi = terms.iter().map(|t| t.set.d).fold(f64::NEG_INFINITY, f64::max);
        if terms.is_empty() {
            return Err(FuzzyError::EmptyPartition(name));
        }
        Self::new(name, lo, hi, terms)
    }

    fn validate(&self) -> Result<(), FuzzyError> {
        let (lo, hi) = self.universe;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(FuzzyError::InvalidUniverse(self.name.clone()));
        }
        if self.terms.is_empty() {
            return Err(FuzzyError::EmptyPartition(self.name.clone()));
        }
        let mut seen = HashSet::new();
        let mut prev_mid = f64::NEG_INFINITY;
        for term in &self.terms {
            if !seen.insert(term.label.as_str()) {
                return Err(FuzzyError::DuplicateTerm {
                    partition: self.name.clone(),
                    term: term.label.clone(),
                });
            }
            let [a, _, _, d] = term.set.knots();
            if a < lo || d > hi {
                return Err(FuzzyError::SupportOutsideUniverse {
                    partition: self.name.clone(),
                    term: term.label.clone(),
                    a,
                    d,
                    lo,
                    hi,
                });
            }
            let mid = term.set.core_midpoint();
            if mid <= prev_mid {
                return Err(FuzzyError::UnorderedTerms {
                    partition: self.name.clone(),
                    term: term.label.clone(),
                });
            }
            prev_mid = mid;
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> (f64, f64) {
        self.universe
    }

    pub fn width(&self) -> f64 {
        self.universe.1 - self.universe.0
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term_index(&self, label: &str) -> Option<usize> {
        self.terms.iter().position(|t| t.label == label)
    }

    pub fn term(&self, label: &str) -> Option<&Term> {
        self.terms.iter().find(|t| t.label == label)
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.universe.0, self.universe.1)
    }

    /// Copy with one knot of one term replaced, if still valid.
    pub(crate) fn with_knot(&self, term: usize, knot: usize, value: f64) -> Result<Self, FuzzyError> {
        let mut k = self.terms[term].set.knots();
        k[knot] = value;
        let mut next = self.clone();
        next.terms[term].set = TrapezoidalSet::new(k[0], k[1], k[2], k[3])?;
        next.validate()?;
        Ok(next)
    }

    /// Label of the term whose core midpoint equals that of `set`, or of a
    /// newly inserted term at its ordered position.
    pub(crate) fn ensure_term(&mut self, set: TrapezoidalSet) -> Result<String, FuzzyError> {
        let mid = set.core_midpoint();
        let tol = 1e-12 * self.width();
        if let Some(t) = self.terms.iter().find(|t| (t.set.core_midpoint() - mid).abs() <= tol) {
            return Ok(t.label.clone());
        }
        let mut n = self.terms.len() + 1;
        let label = loop {
            let candidate = format!("T{n}");
            if self.term(&candidate).is_none() {
                break candidate;
            }
            n += 1;
        };
        let at = self.terms.partition_point(|t| t.set.core_midpoint() < mid);
        let mut next = self.clone();
        next.terms.insert(at, Term::new(label.clone(), set));
        next.validate()?;
        *self = next;
        Ok(label)
    }

    /// Sweeps the term supports and reports the uncovered parts of the
    /// universe.
    pub fn coverage(&self) -> Coverage {
        let (u_lo, u_hi) = self.universe;
        let mut intervals: Vec<Interval> =
            self.terms.iter().map(|t| t.set.positive_interval()).collect();
        // Closed left ends first so a shared start point is seen as covered.
        intervals.sort_by(|x, y| {
            x.lo.total_cmp(&y.lo)
                .then_with(|| y.lo_closed.cmp(&x.lo_closed))
        });

        let mut gaps = Vec::new();
        let mut reach = u_lo;
        let mut reach_covered = false;
        for iv in intervals {
            if iv.lo > reach {
                gaps.push(Gap { lo: reach, hi: iv.lo });
                reach = iv.hi;
                reach_covered = iv.hi_closed || (iv.hi == iv.lo && iv.lo_closed);
                continue;
            }
            if iv.lo == reach && !reach_covered && !iv.lo_closed {
                gaps.push(Gap { lo: reach, hi: reach });
            }
            if iv.hi > reach {
                reach = iv.hi;
                reach_covered = iv.hi_closed;
            } else if iv.hi == reach {
                reach_covered |= iv.hi_closed || (iv.lo == iv.hi && iv.lo_closed);
            }
        }
        if reach < u_hi {
            gaps.push(Gap { lo: reach, hi: u_hi });
        } else if !reach_covered {
            gaps.push(Gap { lo: u_hi, hi: u_hi });
        }

        if gaps.is_empty() {
            Coverage::Complete
        } else {
            Coverage::Sparse(gaps)
        }
    }
}

/// One term label per input dimension mapped to a crisp level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub antecedent: Vec<String>,
    pub consequent: f64,
}

impl Rule {
    pub fn new<S: Into<String>>(antecedent: impl IntoIterator<Item = S>, consequent: f64) -> Self {
        Self {
            antecedent: antecedent.into_iter().map(Into::into).collect(),
            consequent,
        }
    }
}

/// One crisp value per input dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation(pub Vec<f64>);

impl Observation {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<f64>> for Observation {
    fn from(values: Vec<f64>) -> Self {
        Self(values)
    }
}

/// Validated sparse rule base.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBase {
    partitions: Vec<InputPartition>,
    rules: Vec<Rule>,
    /// `resolved[r][i]` is the index of rule `r`'s term in partition `i`.
    resolved: Vec<Vec<usize>>,
    output_range: (f64, f64),
}

impl RuleBase {
    pub fn new(
        partitions: Vec<InputPartition>,
        rules: Vec<Rule>,
        output_range: (f64, f64),
    ) -> Result<Self, FuzzyError> {
        let (out_lo, out_hi) = output_range;
        if !(out_lo.is_finite() && out_hi.is_finite() && out_lo <= out_hi) {
            return Err(FuzzyError::InvalidOutputRange(out_lo, out_hi));
        }
        if rules.is_empty() {
            return Err(FuzzyError::NoRules);
        }
        for p in &partitions {
            p.validate()?;
        }

        let mut resolved = Vec::with_capacity(rules.len());
        let mut firsts = std::collections::HashMap::new();
        for (r, rule) in rules.iter().enumerate() {
            if rule.antecedent.len() != partitions.len() {
                return Err(FuzzyError::AntecedentArity {
                    rule: r + 1,
                    expected: partitions.len(),
                    got: rule.antecedent.len(),
                });
            }
            if !(rule.consequent.is_finite()
                && out_lo <= rule.consequent
                && rule.consequent <= out_hi)
            {
                return Err(FuzzyError::ConsequentOutOfRange {
                    rule: r + 1,
                    value: rule.consequent,
                    lo: out_lo,
                    hi: out_hi,
                });
            }
            let idx = rule
                .antecedent
                .iter()
                .zip(&partitions)
                .map(|(label, p)| {
                    p.term_index(label).ok_or_else(|| FuzzyError::UnknownLabel {
                        rule: r + 1,
                        partition: p.name.clone(),
                        label: label.clone(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(first) = firsts.insert(idx.clone(), r + 1) {
                return Err(FuzzyError::DuplicateAntecedent { rule: r + 1, first });
            }
            resolved.push(idx);
        }

        Ok(Self {
            partitions,
            rules,
            resolved,
            output_range,
        })
    }

    pub fn partitions(&self) -> &[InputPartition] {
        &self.partitions
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn dims(&self) -> usize {
        self.partitions.len()
    }

    pub fn output_range(&self) -> (f64, f64) {
        self.output_range
    }

    /// Resolved term indices of a rule's antecedent, one per dimension.
    pub fn antecedent_terms(&self, rule: usize) -> &[usize] {
        &self.resolved[rule]
    }

    /// Core midpoints of a rule's antecedent sets.
    pub fn anchor(&self, rule: usize) -> Vec<f64> {
        self.resolved[rule]
            .iter()
            .zip(&self.partitions)
            .map(|(&t, p)| p.terms[t].set.core_midpoint())
            .collect()
    }

    pub fn consequent_bounds(&self) -> (f64, f64) {
        self.rules.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r.consequent), hi.max(r.consequent))
        })
    }

    pub fn check_dims(&self, obs: &Observation) -> Result<(), FuzzyError> {
        if obs.len() != self.dims() {
            return Err(FuzzyError::DimensionMismatch {
                expected: self.dims(),
                got: obs.len(),
            });
        }
        for (p, &v) in self.partitions.iter().zip(obs.values()) {
            if !v.is_finite() {
                return Err(FuzzyError::NonFinite {
                    partition: p.name.clone(),
                    value: v,
                });
            }
        }
        Ok(())
    }

    /// Clamps every coordinate into its universe.
    pub fn clamp(&self, obs: &Observation) -> Result<Observation, FuzzyError> {
        self.check_dims(obs)?;
        Ok(Observation(
            self.partitions
                .iter()
                .zip(obs.values())
                .map(|(p, &v)| p.clamp(v))
                .collect(),
        ))
    }

    /// Rejects observations with any coordinate outside its universe.
    pub fn check_universe(&self, obs: &Observation) -> Result<(), FuzzyError> {
        self.check_dims(obs)?;
        for (p, &v) in self.partitions.iter().zip(obs.values()) {
            let (lo, hi) = p.universe;
            if v < lo || v > hi {
                return Err(FuzzyError::OutsideUniverse {
                    partition: p.name.clone(),
                    value: v,
                    lo,
                    hi,
                });
            }
        }
        Ok(())
    }

    /// Min-composition firing degree of one rule.
    pub fn firing_degree(&self, rule: usize, obs: &Observation) -> f64 {
        self.resolved[rule]
            .iter()
            .zip(&self.partitions)
            .zip(obs.values())
            .map(|((&t, p), &x)| p.terms[t].set.membership(x))
            .fold(1.0, f64::min)
    }

    /// Whether classical compositional inference has any rule to fire.
    pub fn classical_covered(&self, obs: &Observation) -> Result<bool, FuzzyError> {
        self.check_dims(obs)?;
        Ok((0..self.rules.len()).any(|r| self.firing_degree(r, obs) > 0.0))
    }

    pub(crate) fn into_parts(self) -> (Vec<InputPartition>, Vec<Rule>, (f64, f64)) {
        (self.partitions, self.rules, self.output_range)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trap(a: f64, b: f64, c: f64, d: f64) -> TrapezoidalSet {
        TrapezoidalSet::new(a, b, c, d).unwrap()
    }

    const LOW: [f64; 4] = [166.81, 222.66, 278.51, 334.36];

    #[test]
    fn membership_on_plateau_boundary_and_edge() {
        let s = trap(LOW[0], LOW[1], LOW[2], LOW[3]);
        assert_eq!(s.membership(250.0), 1.0);
        assert_eq!(s.membership(166.81), 0.0);
        assert!((s.membership(194.735) - 0.5).abs() < 1e-12);
        assert_eq!(s.membership(222.66), 1.0);
        assert_eq!(s.membership(334.36), 0.0);
        assert_eq!(s.membership(1e9), 0.0);
    }

    #[test]
    fn vertical_edges_belong_to_core() {
        let s = trap(1.0, 1.0, 35.92, 91.78);
        assert_eq!(s.membership(1.0), 1.0);
        assert_eq!(s.membership(0.999), 0.0);
        let singleton = trap(3.0, 3.0, 3.0, 3.0);
        assert_eq!(singleton.membership(3.0), 1.0);
        assert_eq!(singleton.membership(3.0 + 1e-12), 0.0);
    }

    #[test]
    fn core_midpoints() {
        assert!((trap(LOW[0], LOW[1], LOW[2], LOW[3]).core_midpoint() - 250.585).abs() < 1e-12);
        assert!((trap(1.0, 1.0, 35.92, 91.78).core_midpoint() - 18.46).abs() < 1e-12);
        assert_eq!(trap(3.0, 3.0, 3.0, 3.0).core_midpoint(), 3.0);
    }

    #[test]
    fn rejects_unordered_knots() {
        assert!(TrapezoidalSet::new(2.0, 1.0, 3.0, 4.0).is_err());
        assert!(TrapezoidalSet::new(0.0, 1.0, f64::NAN, 4.0).is_err());
    }

    #[test]
    fn single_full_term_is_complete() {
        let p = InputPartition::new("x", 0.0, 5.0, vec![Term::new("all", trap(0.0, 0.0, 5.0, 5.0))])
            .unwrap();
        assert_eq!(p.coverage(), Coverage::Complete);
    }

    #[test]
    fn abutting_open_edges_leave_a_point_gap() {
        let p = InputPartition::new(
            "x",
            0.0,
            6.0,
            vec![
                Term::new("lo", trap(0.0, 0.0, 2.0, 3.0)),
                Term::new("hi", trap(3.0, 4.0, 6.0, 6.0)),
            ],
        )
        .unwrap();
        assert_eq!(p.coverage(), Coverage::Sparse(vec![Gap { lo: 3.0, hi: 3.0 }]));
    }

    #[test]
    fn shared_knot_with_closed_core_is_covered() {
        let p = InputPartition::new(
            "x",
            0.0,
            6.0,
            vec![
                Term::new("lo", trap(0.0, 0.0, 2.0, 3.0)),
                Term::new("hi", trap(3.0, 3.0, 6.0, 6.0)),
            ],
        )
        .unwrap();
        assert!(p.coverage().is_complete());
    }

    #[test]
    fn partition_validation() {
        let t = |l: &str, s| Term::new(l, s);
        let err = InputPartition::new(
            "x",
            0.0,
            10.0,
            vec![t("b", trap(5.0, 6.0, 7.0, 8.0)), t("a", trap(0.0, 1.0, 2.0, 3.0))],
        )
        .unwrap_err();
        assert!(matches!(err, FuzzyError::UnorderedTerms { .. }));
        let err = InputPartition::new("x", 0.0, 2.0, vec![t("a", trap(0.0, 1.0, 2.0, 3.0))]).unwrap_err();
        assert!(matches!(err, FuzzyError::SupportOutsideUniverse { .. }));
        let err = InputPartition::new("x", 1.0, 1.0, vec![t("a", trap(1.0, 1.0, 1.0, 1.0))]).unwrap_err();
        assert!(matches!(err, FuzzyError::InvalidUniverse(_)));
    }

    fn tiny_base(rules: Vec<Rule>) -> Result<RuleBase, FuzzyError> {
        let p = InputPartition::new(
            "x",
            0.0,
            10.0,
            vec![
                Term::new("L", trap(0.0, 1.0, 2.0, 3.0)),
                Term::new("H", trap(7.0, 8.0, 9.0, 10.0)),
            ],
        )
        .unwrap();
        RuleBase::new(vec![p], rules, (0.0, 1.0))
    }

    #[test]
    fn rule_base_rejects_duplicates_and_unknown_labels() {
        let dup = tiny_base(vec![Rule::new(["L"], 0.0), Rule::new(["L"], 1.0)]).unwrap_err();
        assert_eq!(dup, FuzzyError::DuplicateAntecedent { rule: 2, first: 1 });
        let unknown = tiny_base(vec![Rule::new(["VL"], 0.0)]).unwrap_err();
        assert!(matches!(unknown, FuzzyError::UnknownLabel { .. }));
        let arity = tiny_base(vec![Rule::new(["L", "H"], 0.0)]).unwrap_err();
        assert!(matches!(arity, FuzzyError::AntecedentArity { .. }));
        assert_eq!(tiny_base(vec![]).unwrap_err(), FuzzyError::NoRules);
        let range = tiny_base(vec![Rule::new(["L"], 1.5)]).unwrap_err();
        assert!(matches!(range, FuzzyError::ConsequentOutOfRange { .. }));
    }

    #[test]
    fn classical_coverage_in_gap_and_core() {
        let rb = tiny_base(vec![Rule::new(["L"], 0.0), Rule::new(["H"], 1.0)]).unwrap();
        assert!(!rb.classical_covered(&Observation::new(vec![5.0])).unwrap());
        assert!(rb.classical_covered(&Observation::new(vec![8.5])).unwrap());
        assert!(rb.classical_covered(&Observation::new(vec![2.5])).unwrap());
        assert!(rb.classical_covered(&Observation::new(vec![1.0, 2.0])).is_err());
    }

    #[test]
    fn clamp_and_strict_universe() {
        let rb = tiny_base(vec![Rule::new(["L"], 0.0)]).unwrap();
        let obs = Observation::new(vec![42.0]);
        assert_eq!(rb.clamp(&obs).unwrap().values(), &[10.0]);
        assert!(matches!(
            rb.check_universe(&obs).unwrap_err(),
            FuzzyError::OutsideUniverse { .. }
        ));
    }
}
