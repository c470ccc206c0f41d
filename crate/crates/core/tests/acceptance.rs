//! Acceptance suite. Each test prints one PASS/FAIL line; run with
//! `cargo test -p fri-ids-core --test acceptance -- --nocapture` to see them.

mod common;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use fri_ids::five::{FiveParams, VagueEnvironment};
use fri_ids::flow::load_csv;
use fri_ids::fuzzy::{Coverage, Observation};
use fri_ids::learn::{learn, LearnerConfig, TraceEvent, TrainingSet};
use fri_ids::pipeline::{evaluate, filter_and_sort, metrics, split_pools, stratified_sample, ConfusionMatrix, DEFAULT_FEATURES};
use fri_ids::rulefile::baseline;
use fri_ids::select::{entropy, info_gain, Discretizer, LabeledTable, Value};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u8, name: &str, ok: bool, detail: &str) {
    println!("[{}] criterion {id}: {name} ({detail})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} failed: {detail}");
}

fn baseline_env() -> (fri_ids::RuleBase, VagueEnvironment) {
    let rb = baseline();
    let env = VagueEnvironment::derive(&rb, &FiveParams::default()).unwrap();
    (rb, env)
}

#[test]
fn c1_reference_observations() {
    let start = Instant::now();
    let (rb, env) = baseline_env();
    let normal = env.infer(&rb, &Observation::new(vec![200.0, 55943.0, 11560.0])).unwrap();
    let attack = env.infer(&rb, &Observation::new(vec![900.0, 1190251.0, 22029.0])).unwrap();
    let elapsed = start.elapsed();
    let ok = !normal.alert && attack.alert && elapsed < Duration::from_secs(1);
    report(
        1,
        "reference observations",
        ok,
        &format!(
            "levels {:.4} / {:.4}, alerts {} / {}, {:?}",
            normal.level, attack.level, normal.alert, attack.alert, elapsed
        ),
    );
}

#[test]
fn c2_metrics_arithmetic() {
    let m = metrics(&ConfusionMatrix::new(4668, 4997, 3, 332)).unwrap();
    let tpr = m.tpr.unwrap();
    let fpr = m.fpr.unwrap();
    let ok = m.dr == 0.9665 && (tpr - 0.9336).abs() <= 1e-4 && (fpr - 0.0006).abs() <= 1e-4;
    report(2, "metrics arithmetic", ok, &format!("dr {} tpr {tpr:.6} fpr {fpr:.6}", m.dr));

    // Soft check on the public dataset, reported but never asserted.
    match std::env::var("FRI_IDS_DATASET") {
        Ok(path) => match soft_dataset_check(&path) {
            Ok(dr) => println!(
                "[{}] criterion 2 (soft): dataset detection rate {dr:.4} (want >= 0.90)",
                if dr >= 0.90 { "PASS" } else { "FAIL" }
            ),
            Err(e) => println!("[SKIP] criterion 2 (soft): {e}"),
        },
        Err(_) => println!("[SKIP] criterion 2 (soft): FRI_IDS_DATASET not set"),
    }
}

fn soft_dataset_check(path: &str) -> Result<f64, Box<dyn std::error::Error>> {
    let report = load_csv(path)?;
    let sample = stratified_sample(&report.records, 0.1, 0);
    let pools = filter_and_sort(&sample, &DEFAULT_FEATURES)?;
    let (_, test) = split_pools(&pools, 0, 5000, 0);
    let (rb, env) = baseline_env();
    let cm = evaluate(&env, &rb, &test.normal, &test.intrusion)?;
    Ok(metrics(&cm)?.dr)
}

#[test]
fn c3_sparse_coverage() {
    let start = Instant::now();
    let (rb, env) = baseline_env();
    let pkt = rb.partitions()[0].coverage();
    let bytes = rb.partitions()[1].coverage();
    let obs = Observation::new(vec![900.0, 1190251.0, 22029.0]);
    let covered = rb.classical_covered(&obs).unwrap();
    let level = env.infer(&rb, &obs).unwrap().level;
    let elapsed = start.elapsed();
    let gap_900 = matches!(&pkt, Coverage::Sparse(g) if g.iter().any(|g| g.contains(900.0)));
    let ok = gap_900
        && matches!(bytes, Coverage::Sparse(_))
        && !covered
        && level.is_finite()
        && elapsed < Duration::from_secs(1);
    report(
        3,
        "sparse coverage",
        ok,
        &format!(
            "packet-rate gaps {:?}, byte-rate sparse {}, covered {covered}, level {level:.4}, {elapsed:?}",
            pkt.gaps(),
            !bytes.is_complete()
        ),
    );
}

#[test]
fn c4_metric_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let s = common::random_scaling(&mut rng);
        let (lo, hi) = (s.breakpoints()[0], *s.breakpoints().last().unwrap());
        // Sample a little past the ends to exercise extrapolation.
        let pad = 0.1 * (hi - lo);
        let [x, y, z] = [(); 3].map(|_| rng.gen_range(lo - pad..hi + pad));
        worst = worst
            .max((s.distance(x, y) - s.distance(y, x)).abs())
            .max(s.distance(x, x).abs())
            .max(s.distance(x, z) - s.distance(x, y) - s.distance(y, z));
    }
    report(4, "vague metric axioms", worst <= 1e-9, &format!("worst violation {worst:e}"));
}

#[test]
fn c5_exact_match_and_boundedness() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let params = FiveParams::default();
    let (mut checked, mut skipped, mut worst_match, mut worst_bound) = (0, 0, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let dims = rng.gen_range(1..=4);
        let rules = rng.gen_range(2..=10);
        let rb = common::random_rule_base(&mut rng, dims, rules);
        let env = VagueEnvironment::derive(&rb, &params).unwrap();
        let (cmin, cmax) = rb.consequent_bounds();
        for r in 0..rb.rules().len() {
            let obs = Observation::new(rb.anchor(r));
            let dists: Vec<f64> = (0..rb.rules().len()).map(|k| env.rule_distance(&rb, &obs, k)).collect();
            if dists.iter().enumerate().any(|(k, &d)| k != r && d <= 1e-6) {
                skipped += 1;
                continue;
            }
            let level = env.infer(&rb, &obs).unwrap().level;
            worst_match = worst_match.max((level - rb.rules()[r].consequent).abs());
            checked += 1;
        }
        for _ in 0..10 {
            let obs = Observation::new(
                rb.partitions()
                    .iter()
                    .map(|p| {
                        let (lo, hi) = p.universe();
                        rng.gen_range(lo - 0.2 * (hi - lo)..hi + 0.2 * (hi - lo))
                    })
                    .collect(),
            );
            let level = env.infer(&rb, &obs).unwrap().level;
            worst_bound = worst_bound.max(cmin - level).max(level - cmax);
        }
    }
    let ok = worst_match <= 1e-9 && worst_bound <= 0.0 && checked > 0;
    report(
        5,
        "exact match and boundedness",
        ok,
        &format!("{checked} anchors checked, {skipped} skipped, worst match {worst_match:e}, worst bound {worst_bound:e}"),
    );
}

/// Information gain straight from the definition: class entropy minus the
/// size-weighted entropy of each value's subset.
fn brute_force_gain(values: &[&str], classes: &[&str]) -> f64 {
    fn h(labels: &[&str]) -> f64 {
        let mut counts: HashMap<&str, f64> = HashMap::new();
        for l in labels {
            *counts.entry(l).or_default() += 1.0;
        }
        let n = labels.len() as f64;
        counts.values().map(|c| -(c / n) * (c / n).ln() / 2f64.ln()).sum()
    }
    let mut subsets: HashMap<&str, Vec<&str>> = HashMap::new();
    for (v, c) in values.iter().zip(classes) {
        subsets.entry(v).or_default().push(c);
    }
    let n = values.len() as f64;
    h(classes) - subsets.values().map(|s| s.len() as f64 / n * h(s)).sum::<f64>()
}

#[test]
fn c6_information_gain_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    const VALUES: [&str; 4] = ["a", "b", "c", "d"];
    const CLASSES: [&str; 3] = ["Normal", "Smurf", "UDP-Flood"];
    let disc = Discretizer::default();
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let rows = rng.gen_range(2..=50);
        let nv = rng.gen_range(1..=4);
        let nc = rng.gen_range(1..=3);
        let values: Vec<&str> = (0..rows).map(|_| VALUES[rng.gen_range(0..nv)]).collect();
        let classes: Vec<&str> = (0..rows).map(|_| CLASSES[rng.gen_range(0..nc)]).collect();
        let table = LabeledTable::new(
            vec!["f".into()],
            values.iter().map(|v| vec![Value::Cat(v.to_string())]).collect(),
            classes.iter().map(|c| c.to_string()).collect(),
        )
        .unwrap();
        let got = info_gain(&table, "f", &disc).unwrap();
        worst = worst.max((got - brute_force_gain(&values, &classes)).abs());
    }
    let balanced = entropy(&[5000, 5000]).unwrap();
    let skewed = entropy(&[1, 3]).unwrap();
    let ok = worst <= 1e-9 && balanced == 1.0 && (skewed - 0.811278).abs() <= 1e-6;
    report(
        6,
        "information gain oracle",
        ok,
        &format!("worst deviation {worst:e}, entropy(5000,5000) {balanced}, entropy(1,3) {skewed:.6}"),
    );
}

#[test]
fn c7_learner_convergence() {
    let start = Instant::now();
    let rows: Vec<(Observation, f64)> = (0..100)
        .map(|i| {
            let x = i as f64 / 99.0;
            (Observation::new(vec![x]), x * x)
        })
        .collect();
    let train = TrainingSet::new(rows.clone()).unwrap();
    let config = LearnerConfig {
        max_rules: 8,
        max_iterations: 500,
        target: 0.05,
        seed: 7,
        ..Default::default()
    };
    let params = FiveParams::default();
    let first = learn(&train, &config, &params).unwrap();
    let second = learn(&train, &config, &params).unwrap();
    let elapsed = start.elapsed();

    // Recompute the relative RMSE independently of the learner.
    let env = VagueEnvironment::derive(&first.rule_base, &params).unwrap();
    let sse: f64 = rows
        .iter()
        .map(|(obs, y)| (env.infer(&first.rule_base, obs).unwrap().level - y).powi(2))
        .sum();
    let (lo, hi) = first.rule_base.output_range();
    let rel_rmse = (sse / rows.len() as f64).sqrt() / (hi - lo);

    let iterations = first.trace.last().map_or(0, |t| t.iteration);
    let monotone = first.trace.windows(2).all(|w| w[1].best_index <= w[0].best_index);
    let deterministic = first.index == second.index
        && first.rule_base.rules() == second.rule_base.rules()
        && first.trace.len() == second.trace.len();
    let ok = rel_rmse <= 0.05
        && first.rule_base.rules().len() <= 8
        && iterations <= 500
        && monotone
        && deterministic
        && first.trace.iter().any(|t| t.event == TraceEvent::Init)
        && elapsed < Duration::from_secs(30);
    report(
        7,
        "learner convergence",
        ok,
        &format!(
            "relative RMSE {rel_rmse:.4}, {} rules, {iterations} iterations, deterministic {deterministic}, monotone {monotone}, {elapsed:?}",
            first.rule_base.rules().len()
        ),
    );
}

#[test]
fn c8_pipeline_conservation() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (rb, env) = baseline_env();
    let mut failures = 0;
    for _ in 0..100 {
        let (n, a) = (rng.gen_range(1..200), rng.gen_range(1..200));
        let csv = common::synthetic_csv(&mut rng, n, a);
        let records = fri_ids::flow::read_csv(csv.as_bytes()).unwrap().records;
        let pools = filter_and_sort(&records, &DEFAULT_FEATURES).unwrap();
        let mut normal = pools.normal.clone();
        let mut intrusion = pools.intrusion.clone();
        // Mix in observations anywhere in and around the universes.
        for pool in [&mut normal, &mut intrusion] {
            for _ in 0..rng.gen_range(0..50) {
                pool.push(Observation::new(vec![
                    rng.gen_range(-100.0..1500.0),
                    rng.gen_range(0.0..2e6),
                    rng.gen_range(0.0..30000.0),
                ]));
            }
        }
        let cm = evaluate(&env, &rb, &normal, &intrusion).unwrap();
        normal.shuffle(&mut rng);
        intrusion.shuffle(&mut rng);
        let shuffled = evaluate(&env, &rb, &normal, &intrusion).unwrap();
        let conserved = cm.tp + cm.fn_ == intrusion.len() as u64 && cm.tn + cm.fp == normal.len() as u64;
        if !conserved || cm != shuffled {
            failures += 1;
        }
    }
    report(8, "pipeline conservation", failures == 0, &format!("{failures} of 100 runs failed"));
}
