//! Line-oriented rule-base text format.
//!
//! ```text
//! # comment
//! output 0 1
//! partition PKT_RATE 1 1118
//! term L 166.81 222.66 278.51 334.36
//! rule L L L -> FA
//! ```
//!
//! `output` is optional and defaults to `[0, 1]`. Consequents are numbers or
//! the labels `FA` (0.0) and `A` (1.0).

use std::fmt::Write as _;

use thiserror::Error;

use crate::fuzzy::{FuzzyError, InputPartition, Rule, RuleBase, Term, TrapezoidalSet};

/// Consequent level of a "false attack" rule.
pub const FALSE_ATTACK: f64 = 0.0;
/// Consequent level of an "attack" rule.
pub const ATTACK: f64 = 1.0;

const BASELINE: &str = include_str!("../data/baseline.rules");

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: FuzzyError,
    },
    #[error(transparent)]
    RuleBase(#[from] FuzzyError),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn number(line: usize, tok: &str) -> Result<f64, ParseError> {
    tok.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| syntax(line, format!("expected a finite number, got `{tok}`")))
}

fn consequent(line: usize, tok: &str) -> Result<f64, ParseError> {
    match tok.to_ascii_uppercase().as_str() {
        "FA" => Ok(FALSE_ATTACK),
        "A" => Ok(ATTACK),
        _ => number(line, tok),
    }
}

struct PendingPartition {
    line: usize,
    name: String,
    lo: f64,
    hi: f64,
    terms: Vec<Term>,
}

impl PendingPartition {
    fn finish(self) -> Result<InputPartition, ParseError> {
        InputPartition::new(self.name, self.lo, self.hi, self.terms).map_err(|source| {
            ParseError::Invalid {
                line: self.line,
                source,
            }
        })
    }
}

pub fn parse_rule_base(text: &str) -> Result<RuleBase, ParseError> {
    let mut output = (0.0, 1.0);
    let mut partitions = Vec::new();
    let mut current: Option<PendingPartition> = None;
    let mut rules = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks[0] {
            "output" => {
                if toks.len() != 3 {
                    return Err(syntax(line, "usage: output <lo> <hi>"));
                }
                output = (number(line, toks[1])?, number(line, toks[2])?);
            }
            "partition" => {
                if !rules.is_empty() {
                    return Err(syntax(line, "partitions must precede rules"));
                }
                if toks.len() != 4 {
                    return Err(syntax(line, "usage: partition <name> <lo> <hi>"));
                }
                if let Some(done) = current.take() {
                    partitions.push(done.finish()?);
                }
                current = Some(PendingPartition {
                    line,
                    name: toks[1].to_string(),
                    lo: number(line, toks[2])?,
                    hi: number(line, toks[3])?,
                    terms: Vec::new(),
                });
            }
            "term" => {
                let Some(p) = current.as_mut() else {
                    return Err(syntax(line, "term outside of a partition"));
                };
                if toks.len() != 6 {
                    return Err(syntax(line, "usage: term <label> <a> <b> <c> <d>"));
                }
                let k: Vec<f64> = toks[2..]
                    .iter()
                    .map(|t| number(line, t))
                    .collect::<Result<_, _>>()?;
                let set = TrapezoidalSet::new(k[0], k[1], k[2], k[3])
                    .map_err(|source| ParseError::Invalid { line, source })?;
                p.terms.push(Term::new(toks[1], set));
            }
            "rule" => {
                if let Some(done) = current.take() {
                    partitions.push(done.finish()?);
                }
                let arrow = toks
                    .iter()
                    .position(|t| *t == "->")
                    .ok_or_else(|| syntax(line, "rule is missing `->`"))?;
                if arrow + 2 != toks.len() {
                    return Err(syntax(line, "rule needs exactly one consequent after `->`"));
                }
                rules.push(Rule::new(
                    toks[1..arrow].iter().copied(),
                    consequent(line, toks[arrow + 1])?,
                ));
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    if let Some(done) = current.take() {
        partitions.push(done.finish()?);
    }
    Ok(RuleBase::new(partitions, rules, output)?)
}

pub fn write_rule_base(rb: &RuleBase) -> String {
    let mut out = String::new();
    let (lo, hi) = rb.output_range();
    let _ = writeln!(out, "output {lo} {hi}");
    for p in rb.partitions() {
        let (ulo, uhi) = p.universe();
        let _ = writeln!(out, "\npartition {} {ulo} {uhi}", p.name());
        for t in p.terms() {
            let [a, b, c, d] = t.set.knots();
            let _ = writeln!(out, "term {} {a} {b} {c} {d}", t.label);
        }
    }
    out.push('\n');
    for r in rb.rules() {
        let _ = writeln!(out, "rule {} -> {}", r.antecedent.join(" "), r.consequent);
    }
    out
}

/// The bundled 28-rule DDoS rule base over packet rate, byte rate and
/// utilization.
pub fn baseline() -> RuleBase {
    parse_rule_base(BASELINE).expect("bundled baseline rule base is valid")
}

pub fn baseline_text() -> &'static str {
    BASELINE
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::Coverage;

    #[test]
    fn baseline_shape() {
        let rb = baseline();
        assert_eq!(rb.dims(), 3);
        assert_eq!(rb.rules().len(), 28);
        let names: Vec<_> = rb.partitions().iter().map(|p| p.name()).collect();
        assert_eq!(names, ["PKT_RATE", "BYTE_RATE", "UTILIZATION"]);
        assert_eq!(rb.partitions()[0].terms().len(), 4);
        assert_eq!(rb.rules()[20].consequent, FALSE_ATTACK);
        assert_eq!(rb.rules()[27].antecedent, ["VL", "L", "L"]);
    }

    #[test]
    fn round_trip_preserves_rule_base() {
        let rb = baseline();
        assert_eq!(parse_rule_base(&write_rule_base(&rb)).unwrap(), rb);
    }

    #[test]
    fn very_low_outside_packet_rate_is_rejected() {
        let text = baseline_text().replace("rule VL L L -> A", "rule L VL L -> A");
        let err = parse_rule_base(&text).unwrap_err();
        assert!(matches!(
            err,
            ParseError::RuleBase(FuzzyError::UnknownLabel { rule: 28, .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_rule_base("partition x 0 1\nterm a 0 0 1\n").unwrap_err();
        assert!(err.to_string().starts_with("line 2:"), "{err}");
        let err = parse_rule_base("term a 0 0 1 1\n").unwrap_err();
        assert!(err.to_string().contains("outside of a partition"));
        let err = parse_rule_base("partition x 0 1\nterm a 0 0 1 1\nrule a 0.5\n").unwrap_err();
        assert!(err.to_string().contains("->"));
    }

    #[test]
    fn baseline_coverage_matches_annex_supports() {
        let rb = baseline();
        let pr = rb.partitions()[0].coverage();
        let gaps = pr.gaps();
        assert!(gaps.iter().any(|g| g.lo == 643.28 && g.hi == 950.67));
        assert!(gaps.iter().any(|g| g.contains(900.0)));
        assert!(matches!(rb.partitions()[1].coverage(), Coverage::Sparse(_)));
        assert_eq!(rb.partitions()[2].coverage(), Coverage::Complete);
    }
}
