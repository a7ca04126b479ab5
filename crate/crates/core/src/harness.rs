//! Experiment orchestration and brute-force oracles.
//!
//! A sweep runs `trials` recoveries in every cell of the `delta × lambda × n`
//! grid. Trial `t` of cell `c` uses seed `mix_seed(master, c, t)`, so any row
//! of the CSV can be reproduced on its own with [`run_trial`].

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{precondition, Error, Result};
use crate::graph::{risk, symmetric_difference, Edge, Graph, TwoFactor, Vertex};
use crate::recovery::{recover, RecoveryKnobs};
use crate::rng::{mix_seed, rng_from_seed};
use crate::sampler::{sample_instance, ModelParams, Variant};

/// Column names of the sweep CSV.
pub const CSV_HEADER: [&str; 9] = ["delta", "lambda", "n", "seed", "risk", "edges", "deg1", "symdiff", "ms"];

/// Vertex count above which [`enumerate_two_factors`] refuses to run.
pub const ENUMERATION_MAX_N: usize = 16;

/// A sweep description, read from flat `key = value` text. Repeating a key
/// builds a list; a value may also hold a comma-separated list.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub deltas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub ns: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub variant: Variant,
    pub knobs: RecoveryKnobs,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            deltas: Vec::new(),
            lambdas: Vec::new(),
            ns: Vec::new(),
            trials: 1,
            seed: 0,
            variant: Variant::TwoFactor,
            knobs: RecoveryKnobs::default(),
            out: None,
        }
    }
}

/// One grid point of a sweep.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Cell {
    pub index: u64,
    pub params: ModelParams,
}

impl ExperimentConfig {
    /// Grid cells in `delta`, then `lambda`, then `n` order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &delta in &self.deltas {
            for &lambda in &self.lambdas {
                for &n in &self.ns {
                    let params = ModelParams::new(n, lambda, delta).with_variant(self.variant);
                    out.push(Cell { index: out.len() as u64, params });
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(precondition("trials must be at least 1"));
        }
        self.cells().iter().try_for_each(|c| c.params.validate())
    }
}

fn parse_value<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<T> {
    raw.parse().map_err(|_| Error::Parse { line, msg: format!("bad value {raw:?} for {key}") })
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| Error::Parse { line, msg: format!("expected key = value, got {body:?}") })?;
            let (key, value) = (key.trim(), value.trim());
            let items = || value.split(',').map(str::trim).filter(|s| !s.is_empty());
            match key {
                "delta" => {
                    for v in items() {
                        cfg.deltas.push(parse_value(line, key, v)?);
                    }
                }
                "lambda" => {
                    for v in items() {
                        cfg.lambdas.push(parse_value(line, key, v)?);
                    }
                }
                "n" => {
                    for v in items() {
                        cfg.ns.push(parse_value(line, key, v)?);
                    }
                }
                "trials" => cfg.trials = parse_value(line, key, value)?,
                "seed" => cfg.seed = parse_value(line, key, value)?,
                "variant" => cfg.variant = value.parse().map_err(|e: Error| Error::Parse { line, msg: e.to_string() })?,
                "max_len" => cfg.knobs.max_len = Some(parse_value(line, key, value)?),
                "quota" => cfg.knobs.quota = Some(parse_value(line, key, value)?),
                "trail_cap" => cfg.knobs.trail_cap = parse_value(line, key, value)?,
                "out" => cfg.out = Some(PathBuf::from(value)),
                _ => return Err(Error::Parse { line, msg: format!("unknown key {key:?}") }),
            }
        }
        Ok(cfg)
    }
}

/// Outcome of one sampled instance and its recovery.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub delta: f64,
    pub lambda: f64,
    pub n: usize,
    pub seed: u64,
    pub risk: f64,
    /// `|H|` of the estimate.
    pub edges: usize,
    pub deg1: usize,
    pub symdiff: usize,
    /// Wall time in milliseconds.
    pub ms: f64,
    pub iterations: usize,
    pub updates_a: usize,
    pub updates_b: usize,
}

impl TrialRecord {
    /// Equality on everything except wall time.
    pub fn same_outcome(&self, other: &TrialRecord) -> bool {
        TrialRecord { ms: 0.0, ..self.clone() } == TrialRecord { ms: 0.0, ..other.clone() }
    }
}

/// Samples an instance from `seed` and recovers it.
pub fn run_trial(params: &ModelParams, knobs: &RecoveryKnobs, seed: u64) -> Result<TrialRecord> {
    params.validate()?;
    let start = Instant::now();
    let mut rng = rng_from_seed(seed);
    let (g, h_star) = sample_instance(params, &mut rng)?;
    let out = recover(g.graph(), knobs)?;
    let symdiff = symmetric_difference(h_star.edges(), out.h.edges()).len();
    Ok(TrialRecord {
        delta: params.delta,
        lambda: params.lambda,
        n: params.n,
        seed,
        risk: risk(&h_star, out.h.edges())?,
        edges: out.h.len(),
        deg1: out.h.deg1_count(),
        symdiff,
        ms: start.elapsed().as_secs_f64() * 1e3,
        iterations: out.iterations,
        updates_a: out.updates_a,
        updates_b: out.updates_b,
    })
}

/// One trial of a sweep: its record, or the error it raised.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialSlot {
    pub cell: Cell,
    pub trial: u64,
    pub seed: u64,
    pub outcome: std::result::Result<TrialRecord, Error>,
}

/// Mean and standard deviation (n − 1 denominator) of the successful trials
/// of a cell.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct CellAggregate {
    pub cell: Cell,
    pub count: usize,
    pub mean_risk: f64,
    pub sd_risk: f64,
    pub mean_edges: f64,
    pub mean_deg1: f64,
    pub mean_symdiff: f64,
    pub mean_ms: f64,
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        f64::NAN
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Aggregates the successful records of one cell.
pub fn aggregate(cell: Cell, records: &[&TrialRecord]) -> CellAggregate {
    let col = |f: fn(&TrialRecord) -> f64| records.iter().map(|r| f(r)).collect::<Vec<f64>>();
    let risks = col(|r| r.risk);
    CellAggregate {
        cell,
        count: records.len(),
        mean_risk: mean(&risks),
        sd_risk: sample_sd(&risks),
        mean_edges: mean(&col(|r| r.edges as f64)),
        mean_deg1: mean(&col(|r| r.deg1 as f64)),
        mean_symdiff: mean(&col(|r| r.symdiff as f64)),
        mean_ms: mean(&col(|r| r.ms)),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    /// Trials in cell order, then trial order.
    pub slots: Vec<TrialSlot>,
    pub aggregates: Vec<CellAggregate>,
}

impl SweepResult {
    /// CSV text: each cell's trial rows followed by its aggregate row.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(CSV_HEADER).map_err(io)?;
        for agg in &self.aggregates {
            let p = agg.cell.params;
            let lead = [p.delta.to_string(), p.lambda.to_string(), p.n.to_string()];
            for slot in self.slots.iter().filter(|s| s.cell.index == agg.cell.index) {
                let row: Vec<String> = match &slot.outcome {
                    Ok(r) => [
                        r.seed.to_string(),
                        r.risk.to_string(),
                        r.edges.to_string(),
                        r.deg1.to_string(),
                        r.symdiff.to_string(),
                        format!("{:.3}", r.ms),
                    ]
                    .into(),
                    Err(e) => vec![
                        slot.seed.to_string(),
                        format!("error:{}", e.kind()),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                    ],
                };
                w.write_record(lead.iter().cloned().chain(row)).map_err(io)?;
            }
            let row = [
                format!("agg sd={}", agg.sd_risk),
                agg.mean_risk.to_string(),
                agg.mean_edges.to_string(),
                agg.mean_deg1.to_string(),
                agg.mean_symdiff.to_string(),
                format!("{:.3}", agg.mean_ms),
            ];
            w.write_record(lead.iter().cloned().chain(row)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Runs every trial of the grid on the rayon pool. Failed trials are kept as
/// error slots and excluded from the aggregates.
pub fn sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let cells = cfg.cells();
    let jobs: Vec<(Cell, u64)> =
        cells.iter().flat_map(|&c| (0..cfg.trials as u64).map(move |t| (c, t))).collect();
    let slots: Vec<TrialSlot> = jobs
        .into_par_iter()
        .map(|(cell, trial)| {
            let seed = mix_seed(cfg.seed, cell.index, trial);
            TrialSlot { cell, trial, seed, outcome: run_trial(&cell.params, &cfg.knobs, seed) }
        })
        .collect();
    let aggregates = cells
        .iter()
        .map(|&c| {
            let ok: Vec<&TrialRecord> =
                slots.iter().filter(|s| s.cell.index == c.index).filter_map(|s| s.outcome.as_ref().ok()).collect();
            aggregate(c, &ok)
        })
        .collect();
    Ok(SweepResult { slots, aggregates })
}

/// Every 2-factor of `g` on exactly `k` vertices, each listed once.
///
/// Backtracks over the smallest undecided vertex: it is either left out of
/// the support or anchors a new cycle through larger, unused vertices. Each
/// cycle is fixed in one direction by requiring its second vertex to be
/// smaller than its last.
pub fn enumerate_two_factors(g: &Graph, k: usize) -> Result<Vec<TwoFactor>> {
    let n = g.n();
    if n > ENUMERATION_MAX_N {
        return Err(precondition(format!("enumeration limited to n <= {ENUMERATION_MAX_N}, got {n}")));
    }
    if k > n {
        return Ok(Vec::new());
    }
    let mut search = CoverSearch { g, k, used: vec![false; n], covered: 0, cycles: Vec::new(), out: Vec::new() };
    search.decide(0);
    Ok(search.out)
}

struct CoverSearch<'a> {
    g: &'a Graph,
    k: usize,
    used: Vec<bool>,
    covered: usize,
    cycles: Vec<Vec<Vertex>>,
    out: Vec<TwoFactor>,
}

impl CoverSearch<'_> {
    fn decide(&mut self, from: usize) {
        let n = self.g.n();
        if self.covered == self.k {
            let tf = TwoFactor::from_cycles(n, &self.cycles).expect("cover cycles are disjoint");
            self.out.push(tf);
            return;
        }
        let Some(v) = (from..n).find(|&v| !self.used[v]) else { return };
        let remaining = (v..n).filter(|&x| !self.used[x]).count();
        if self.covered + remaining < self.k {
            return;
        }
        // v anchors a cycle.
        self.used[v] = true;
        let mut path = vec![v as Vertex];
        self.extend_cycle(&mut path, v + 1);
        self.used[v] = false;
        // v stays outside the support.
        self.used[v] = true;
        self.decide(v + 1);
        self.used[v] = false;
    }

    fn extend_cycle(&mut self, path: &mut Vec<Vertex>, next_from: usize) {
        let anchor = path[0];
        let last = *path.last().unwrap();
        if self.covered + path.len() > self.k {
            return;
        }
        let nbrs: Vec<Vertex> = self.g.incidences(last).iter().map(|i| i.to).collect();
        if path.len() >= 3 && path[1] < last && self.g.has_edge(last, anchor) {
            self.covered += path.len();
            self.cycles.push(path.clone());
            self.decide(next_from);
            self.cycles.pop();
            self.covered -= path.len();
        }
        for w in nbrs {
            if w <= anchor || self.used[w as usize] {
                continue;
            }
            self.used[w as usize] = true;
            path.push(w);
            self.extend_cycle(path, next_from);
            path.pop();
            self.used[w as usize] = false;
        }
    }
}

/// Brute-force check of whether `H*` is the only 2-factor of `G`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ExactRecoveryStats {
    pub trials: usize,
    /// Trials in which `H*` was the unique 2-factor of `G` on `⌊δn⌋` vertices.
    pub unique: usize,
    /// Trials in which a uniform draw from all such 2-factors differed from `H*`.
    pub posterior_miss: usize,
    /// Mean risk of the uniform posterior draw.
    pub mean_posterior_risk: f64,
}

impl ExactRecoveryStats {
    pub fn frequency(&self) -> f64 {
        self.unique as f64 / self.trials as f64
    }
}

/// Samples `trials` instances (`n ≤ 12`) and enumerates their 2-factors.
pub fn exact_recovery_check<R: Rng + ?Sized>(params: &ModelParams, trials: usize, rng: &mut R) -> Result<ExactRecoveryStats> {
    if params.n > 12 {
        return Err(precondition(format!("exact recovery check needs n <= 12, got {}", params.n)));
    }
    params.validate()?;
    let k = params.support_size();
    let mut stats = ExactRecoveryStats { trials, unique: 0, posterior_miss: 0, mean_posterior_risk: 0.0 };
    let mut risk_sum = 0.0;
    for _ in 0..trials {
        let (g, h_star) = sample_instance(params, rng)?;
        let all = enumerate_two_factors(g.graph(), k)?;
        debug_assert!(all.iter().any(|h| h.edges() == h_star.edges()));
        if all.len() == 1 {
            stats.unique += 1;
        }
        let draw = &all[rng.random_range(0..all.len())];
        let r = risk(&h_star, draw.edges())?;
        if r > 0.0 {
            stats.posterior_miss += 1;
        }
        risk_sum += r;
    }
    stats.mean_posterior_risk = if trials == 0 { 0.0 } else { risk_sum / trials as f64 };
    Ok(stats)
}

/// Complete graph on `n` vertices.
pub fn complete_graph(n: usize) -> Graph {
    let edges = (0..n as Vertex).flat_map(|a| (a + 1..n as Vertex).map(move |b| Edge::of(a, b)));
    Graph::new(n, edges).expect("complete graph is well formed")
}

/// Distinct edge sets among `factors`, as a sanity check for duplicates.
pub fn distinct_count(factors: &[TwoFactor]) -> usize {
    factors.iter().map(|f| f.edges().clone()).collect::<BTreeSet<_>>().len()
}
