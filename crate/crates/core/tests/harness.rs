mod common;

use common::{binom, spanning_two_factors};
use pcycles_core::harness::{
    aggregate, complete_graph, distinct_count, enumerate_two_factors, exact_recovery_check, run_trial, sweep,
    ExperimentConfig, CSV_HEADER,
};
use pcycles_core::rng::{mix_seed, rng_from_seed};
use pcycles_core::{Edge, Graph, ModelParams};

#[test]
fn complete_graph_counts_match_the_cycle_formula() {
    for n in 3..=8 {
        let g = complete_graph(n);
        for k in 3..=n {
            let all = enumerate_two_factors(&g, k).unwrap();
            assert_eq!(all.len() as u64, binom(n as u64, k as u64) * spanning_two_factors(k), "K{n}, k={k}");
            assert_eq!(distinct_count(&all), all.len());
        }
    }
    assert_eq!(enumerate_two_factors(&complete_graph(8), 8).unwrap().len(), 3507);
}

#[test]
fn petersen_graph_has_no_hamiltonian_cycle() {
    let outer = (0..5).map(|i| Edge::of(i, (i + 1) % 5));
    let spokes = (0..5).map(|i| Edge::of(i, i + 5));
    let inner = (0..5).map(|i| Edge::of(5 + i, 5 + (i + 2) % 5));
    let g = Graph::new(10, outer.chain(spokes).chain(inner)).unwrap();
    let all = enumerate_two_factors(&g, 10).unwrap();
    // Six 2-factors, each a pair of 5-cycles.
    assert_eq!(all.len(), 6);
    assert!(all.iter().all(|f| f.cycle_count() == 2));
}

fn config(text: &str) -> ExperimentConfig {
    text.parse().unwrap()
}

#[test]
fn one_cell_gives_trials_plus_an_aggregate() {
    let cfg = config("delta = 1\nlambda = 0.2\nn = 60\ntrials = 4\nseed = 5\n");
    let res = sweep(&cfg).unwrap();
    let csv = res.to_csv().unwrap();
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), CSV_HEADER.to_vec());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[4][3].starts_with("agg sd="));
}

#[test]
fn rows_reproduce_from_their_seed() {
    let cfg = config("delta = 1\ndelta = 0.5\nlambda = 0.1\nlambda = 0.3\nn = 50\ntrials = 3\nseed = 77\n");
    let res = sweep(&cfg).unwrap();
    for slot in &res.slots {
        assert_eq!(slot.seed, mix_seed(77, slot.cell.index, slot.trial));
        let again = run_trial(&slot.cell.params, &cfg.knobs, slot.seed).unwrap();
        assert!(slot.outcome.as_ref().unwrap().same_outcome(&again));
    }
    for agg in &res.aggregates {
        let recs: Vec<_> = res
            .slots
            .iter()
            .filter(|s| s.cell.index == agg.cell.index)
            .map(|s| s.outcome.as_ref().unwrap())
            .collect();
        let batch = aggregate(agg.cell, &recs);
        assert_eq!(batch.mean_risk, agg.mean_risk);
        assert_eq!(batch.sd_risk, agg.sd_risk);
        let mean = recs.iter().map(|r| r.risk).sum::<f64>() / recs.len() as f64;
        assert!((mean - agg.mean_risk).abs() < 1e-15);
    }
}

#[test]
fn failed_trials_become_error_rows() {
    let cfg = config("delta = 1\nlambda = 3\nn = 60\ntrials = 2\nmax_len = 8\ntrail_cap = 50\n");
    let csv = sweep(&cfg).unwrap().to_csv().unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[1].contains("error:trail-explosion"));
    assert!(rows[3].contains("agg sd="));
}

#[test]
fn records_are_consistent() {
    let params = ModelParams::new(120, 0.3, 0.5);
    let r = run_trial(&params, &Default::default(), 9).unwrap();
    assert!((r.risk - r.symdiff as f64 / params.support_size() as f64).abs() < 1e-15);
    assert!(r.same_outcome(&run_trial(&params, &Default::default(), 9).unwrap()));
}

#[test]
fn zero_background_is_always_unique() {
    let stats = exact_recovery_check(&ModelParams::new(10, 0.0, 1.0), 30, &mut rng_from_seed(1)).unwrap();
    assert_eq!(stats.frequency(), 1.0);
    assert_eq!(stats.posterior_miss, 0);
    assert!(exact_recovery_check(&ModelParams::new(13, 0.1, 1.0), 1, &mut rng_from_seed(1)).is_err());
}

#[test]
fn dense_background_breaks_uniqueness() {
    let stats = exact_recovery_check(&ModelParams::new(12, 5.0, 1.0), 60, &mut rng_from_seed(2)).unwrap();
    assert!(stats.frequency() < 0.5, "{}", stats.frequency());
    assert!(stats.posterior_miss > 0);
}

#[test]
fn risk_rises_across_the_threshold() {
    let lambdas = [0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3];
    let text = format!(
        "delta = 1\nlambda = {}\nn = 200\ntrials = 6\nseed = 21\n",
        lambdas.map(|l| l.to_string()).join(", ")
    );
    let res = sweep(&config(&text)).unwrap();
    let means: Vec<f64> = res.aggregates.iter().map(|a| a.mean_risk).collect();
    let rising = means.windows(2).filter(|w| w[1] >= w[0]).count();
    assert!(rising as f64 >= 0.9 * (means.len() - 1) as f64, "{means:?}");
}

#[test]
fn mean_difference_stays_below_the_generating_function_bound() {
    let bound = pcycles_core::genfun::expected_diff_bound(0.3, 1.0).unwrap();
    let res = sweep(&config("delta = 1\nlambda = 0.3\nn = 300\ntrials = 20\nseed = 22\n")).unwrap();
    let mean = res.aggregates[0].mean_symdiff;
    assert!(mean <= bound, "{mean} > {bound}");
}
