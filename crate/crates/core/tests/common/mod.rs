#![allow(dead_code)]

use fri_ids::five::ScalingFunction;
use fri_ids::flow::{canonical_header, Feature};
use fri_ids::fuzzy::{InputPartition, Rule, RuleBase, Term, TrapezoidalSet};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random piecewise-constant scaling over a random interval.
pub fn random_scaling<R: Rng>(rng: &mut R) -> ScalingFunction {
    let segments = rng.gen_range(1..=12);
    let mut x = rng.gen_range(-100.0..100.0);
    let mut breakpoints = vec![x];
    for _ in 0..segments {
        x += rng.gen_range(1e-3..50.0);
        breakpoints.push(x);
    }
    let densities = (0..segments).map(|_| rng.gen_range(1e-4..10.0)).collect();
    ScalingFunction::new("x", breakpoints, densities).unwrap()
}

/// Random valid partition over `[0, width]` with `terms` trapezoids whose core
/// midpoints increase.
pub fn random_partition<R: Rng>(rng: &mut R, name: &str, terms: usize) -> InputPartition {
    let width = rng.gen_range(1.0..1000.0);
    let slot = width / terms as f64;
    let sets = (0..terms)
        .map(|i| {
            let lo = slot * i as f64;
            let mut k: Vec<f64> = (0..4).map(|_| lo + rng.gen_range(0.0..slot)).collect();
            k.sort_by(f64::total_cmp);
            // Allow occasional overlap into the neighbouring slots.
            let spread = rng.gen_range(0.0..slot);
            let a = (k[0] - spread).max(0.0);
            let d = (k[3] + spread).min(width);
            Term::new(format!("t{i}"), TrapezoidalSet::new(a, k[1], k[2], d).unwrap())
        })
        .collect();
    InputPartition::new(name, 0.0, width, sets).unwrap()
}

/// Random rule base with `rules` distinct antecedents over `dims` inputs.
pub fn random_rule_base<R: Rng>(rng: &mut R, dims: usize, rules: usize) -> RuleBase {
    let max_terms = if dims == 1 { 10 } else { 5 };
    let counts = loop {
        let c: Vec<usize> = (0..dims).map(|_| rng.gen_range(2..=max_terms)).collect();
        if c.iter().product::<usize>() >= rules {
            break c;
        }
    };
    let partitions: Vec<InputPartition> = counts
        .iter()
        .enumerate()
        .map(|(i, &terms)| random_partition(rng, &format!("x{i}"), terms))
        .collect();
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for p in &partitions {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..p.terms().len()).map(move |i| {
                    let mut n = t.clone();
                    n.push(i);
                    n
                })
            })
            .collect();
    }
    tuples.shuffle(rng);
    let rules = tuples
        .into_iter()
        .take(rules)
        .map(|t| {
            let labels = t
                .iter()
                .zip(&partitions)
                .map(|(&i, p)| p.terms()[i].label.clone());
            Rule::new(labels, rng.gen_range(0.0..=1.0))
        })
        .collect();
    RuleBase::new(partitions, rules, (0.0, 1.0)).unwrap()
}

/// One synthetic flow-record CSV line. Attack rows get high packet and byte
/// rates; normal rows low ones.
pub fn synthetic_row<R: Rng>(rng: &mut R, class: &str) -> String {
    let attack = class != "Normal";
    Feature::ALL
        .iter()
        .map(|f| match f {
            Feature::PktClass => class.to_string(),
            Feature::PktRate if attack => format!("{:.2}", rng.gen_range(960.0..1118.0)),
            Feature::PktRate => format!("{:.2}", rng.gen_range(170.0..330.0)),
            Feature::ByteRate if attack => format!("{:.2}", rng.gen_range(1.43e6..1.67e6)),
            Feature::ByteRate => format!("{:.2}", rng.gen_range(55.0..160_000.0)),
            Feature::Utilization => format!("{:.2}", rng.gen_range(3.0..23650.0)),
            Feature::PktType => "tcp".into(),
            Feature::Flags => "-------".into(),
            Feature::NodeNameFrom => "Switch1".into(),
            Feature::NodeNameTo => "Router".into(),
            other => format!("{}", rng.gen_range(0..1000) + other.index()),
        })
        .collect::<Vec<_>>()
        .join(",")
}

pub fn synthetic_csv<R: Rng>(rng: &mut R, normal: usize, attack: usize) -> String {
    const ATTACKS: [&str; 4] = ["UDP-Flood", "Smurf", "SIDDOS", "HTTP-FLOOD"];
    let mut out = canonical_header();
    out.push('\n');
    for i in 0..normal + attack {
        let class = if i < normal { "Normal" } else { ATTACKS[i % 4] };
        out.push_str(&synthetic_row(rng, class));
        out.push('\n');
    }
    out
}
