//! `pcycles`: command-line front end for the planted cycles toolkit.
//!
//! Graphs are read and written in the plain edge-list format of
//! [`pcycles_core::io`]. Output goes to stdout unless `--out` is given.
//! Exit codes: 0 on success, 2 on a precondition or input error, 3 when
//! trail enumeration hits its cap, 1 otherwise.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use pcycles_core::adversary::{run_adversary, AdversaryConfig};
use pcycles_core::branching::{parse_law, simulate_survival, survival_bound};
use pcycles_core::decomposition::decompose_diff;
use pcycles_core::genfun::{coefficient_table, find_m_star, report};
use pcycles_core::harness::{enumerate_two_factors, exact_recovery_check, sweep, ExperimentConfig};
use pcycles_core::io::{format_edge_set, format_graph, format_two_factor, parse_edge_list, parse_graph, parse_two_factor};
use pcycles_core::recovery::{recover, RecoveryKnobs};
use pcycles_core::rng::rng_from_seed;
use pcycles_core::trails::{classify_ab_trail, count_ab_trails, enumerate_trails};
use pcycles_core::{
    risk, sample_instance, symmetric_difference, DegreeBoundedSubgraph, Graph, ModelParams, Variant, Vertex,
    DEFAULT_TRAIL_CAP,
};

#[derive(Parser)]
#[command(name = "pcycles", version, about = "Planted 2-factor recovery experiments")]
struct Cli {
    /// Master seed for every random choice (default 0; `sweep` falls back
    /// to the config file's seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct ModelArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    /// `two-factor` or `single-cycle`.
    #[arg(long, default_value_t = Variant::TwoFactor)]
    variant: Variant,
}

impl ModelArgs {
    fn params(&self) -> ModelParams {
        ModelParams::new(self.n, self.lambda, self.delta).with_variant(self.variant)
    }
}

#[derive(Args, Clone, Copy)]
struct KnobArgs {
    /// Trail length bound L (trails have at most L - 1 edges).
    #[arg(long)]
    max_len: Option<usize>,
    /// Subroutine B quota q.
    #[arg(long)]
    quota: Option<usize>,
    /// Abort when more trails than this are enumerated.
    #[arg(long, default_value_t = DEFAULT_TRAIL_CAP)]
    trail_cap: usize,
}

impl KnobArgs {
    fn knobs(&self) -> RecoveryKnobs {
        RecoveryKnobs { max_len: self.max_len, quota: self.quota, trail_cap: self.trail_cap }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample an instance; planted edges are colored R.
    Generate {
        #[command(flatten)]
        model: ModelArgs,
        /// Also write the planted 2-factor to this file.
        #[arg(long)]
        planted: Option<PathBuf>,
    },
    /// Run the estimator on a graph file (colors are ignored).
    Recover {
        graph: PathBuf,
        #[command(flatten)]
        knobs: KnobArgs,
    },
    /// List trails, or count (a,b)-trails from a vertex.
    Trails {
        graph: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, requires_all = ["b", "from"])]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        from: Option<Vertex>,
        #[arg(long)]
        to: Option<Vertex>,
        #[arg(long, default_value_t = DEFAULT_TRAIL_CAP)]
        trail_cap: usize,
    },
    /// Decompose the symmetric difference of a planted 2-factor and a candidate.
    Decompose { planted: PathBuf, candidate: PathBuf },
    /// Threshold, witness and m* for (lambda, delta).
    Genfun {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 200)]
        m_cap: u64,
        /// Print c_{a,b} for a, b up to this bound as CSV instead.
        #[arg(long)]
        table: Option<u64>,
    },
    /// Build trees, link them and extract balanced cycles on a fresh instance.
    Adversary {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0.1)]
        gamma: f64,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// Defaults to the smallest m with c_{m,m} > 1.
        #[arg(long)]
        m_star: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        cycle_limit: usize,
    },
    /// Simulate survival of a Galton-Watson process.
    Branching {
        /// `poisson:<mean>` or probabilities of 0, 1, 2, ... children.
        #[arg(long)]
        law: String,
        #[arg(long, default_value_t = 30)]
        depth: usize,
        #[arg(long, default_value_t = 10_000)]
        runs: usize,
        /// Use the bound for history-dependent laws.
        #[arg(long)]
        history: bool,
    },
    /// Run a Monte Carlo sweep from a key = value config file; writes CSV.
    Sweep { config: PathBuf },
    /// List the 2-factors of a small graph, or check exact recovery on random instances.
    Enumerate {
        /// Graph file; omit to run the exact recovery check instead.
        graph: Option<PathBuf>,
        /// Support size (defaults to n).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn join(vs: &[Vertex]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let mut rng = rng_from_seed(cli.seed.unwrap_or(0));
    let out = &cli.out;
    match cli.command {
        Command::Generate { model, planted } => {
            let (g, h) = sample_instance(&model.params(), &mut rng)?;
            if planted.is_some() {
                emit(&planted, &format_two_factor(&h))?;
            }
            emit(out, &format_graph(&g))
        }
        Command::Recover { graph, knobs } => {
            let list = parse_edge_list(&read(&graph)?)?;
            let g = Graph::new(list.n, list.edge_set())?;
            let res = recover(&g, &knobs.knobs())?;
            let planted: Vec<_> = list.edges.iter().filter(|(_, c)| c.is_red()).map(|(e, _)| *e).collect();
            let mut summary = format!(
                "edges {} deg1 {} iterations {} updates_a {} updates_b {} trails {} L {} q {}",
                res.h.len(),
                res.h.deg1_count(),
                res.iterations,
                res.updates_a,
                res.updates_b,
                res.trail_count,
                res.max_len,
                res.quota
            );
            if let Ok(h_star) = pcycles_core::TwoFactor::from_edges(list.n, planted.iter().copied()) {
                let diff = symmetric_difference(h_star.edges(), res.h.edges());
                summary += &format!(" symdiff {} risk {}", diff.len(), risk(&h_star, res.h.edges())?);
            }
            eprintln!("{summary}");
            let red: std::collections::BTreeSet<_> = planted.into_iter().collect();
            emit(out, &format_edge_set(list.n, res.h.edges(), |e| red.contains(e)))
        }
        Command::Trails { graph, max_len, a, b, from, to, trail_cap } => {
            let g = parse_graph(&read(&graph)?)?;
            if let (Some(a), Some(b), Some(from)) = (a, b, from) {
                let count = count_ab_trails(&g, a, b, from, to, max_len, trail_cap)?;
                return emit(out, &format!("{count}\n"));
            }
            let mut text = String::new();
            for t in enumerate_trails(g.graph(), max_len, trail_cap)? {
                let (red, blue) = t.profile(&g);
                let ab = classify_ab_trail(&g, &t).map_or("-".to_string(), |(a, b)| format!("({a},{b})"));
                text += &format!("{} red {red} blue {blue} ab {ab}\n", join(t.vertices()));
            }
            emit(out, &text)
        }
        Command::Decompose { planted, candidate } => {
            let h_star = parse_two_factor(&read(&planted)?)?;
            let list = parse_edge_list(&read(&candidate)?)?;
            let h = DegreeBoundedSubgraph::from_edges(list.n, list.edge_set())?;
            let dec = decompose_diff(&h_star, &h)?;
            let mut text = String::new();
            for t in &dec.trails {
                let (a, b) = t.profile();
                let kind = if t.is_closed() { "closed" } else { "open" };
                let colors: String = t.colors.iter().map(|c| c.letter()).collect();
                text += &format!("{kind} ({a},{b}) {colors}: {}\n", join(&t.vertices));
            }
            text += &format!("trails {} open {}\n", dec.trails.len(), dec.open_count);
            emit(out, &text)
        }
        Command::Genfun { lambda, delta, m_cap, table } => match table {
            Some(a_max) => {
                let mut text = String::from("a,b,c\n");
                for (a, b, c) in coefficient_table(lambda, delta, a_max)? {
                    text += &format!("{a},{b},{c}\n");
                }
                emit(out, &text)
            }
            None => emit(out, &report(lambda, delta, m_cap)?.to_string()),
        },
        Command::Adversary { model, gamma, ell, d, m_star, cycle_limit } => {
            let m_star = match m_star {
                Some(m) => m,
                None => find_m_star(model.lambda, model.delta, 200)?
                    .context("no m with c_{m,m} > 1 up to 200; pass --m-star")? as usize,
            };
            let (g, h) = sample_instance(&model.params(), &mut rng)?;
            let cfg = AdversaryConfig { gamma, ell, d, m_star, cycle_limit };
            let run = run_adversary(&g, &h, &cfg, &mut rng)?;
            let mut text = format!(
                "reserved {} trees {} failed {} admitted {} arcs {} cycles {} rejected {}\n",
                run.reserved.edges.len(),
                run.build.trees.len(),
                run.build.failed,
                run.link.trees.len(),
                run.link.arcs.len(),
                run.extraction.cycles.len(),
                run.extraction.rejected
            );
            for c in &run.extraction.cycles {
                let other = symmetric_difference(h.edges(), &c.edges().into_iter().collect());
                text += &format!("cycle len {} trees {:?} risk {}\n", c.vertices.len(), c.trees, risk(&h, &other)?);
            }
            emit(out, &text)
        }
        Command::Branching { law, depth, runs, history } => {
            let spec = parse_law(&law)?;
            let est = simulate_survival(&spec, depth, runs, &mut rng)?;
            let bound = survival_bound(spec.mean(), spec.variance(), history)?;
            emit(
                out,
                &format!(
                    "mean {} variance {}\nsurvival {} se {} runs {} depth {}\nbound {}{}\n",
                    spec.mean(),
                    spec.variance(),
                    est.rate,
                    est.std_err,
                    est.runs,
                    est.depth,
                    bound.value,
                    if bound.subcritical { " (subcritical)" } else { "" }
                ),
            )
        }
        Command::Sweep { config } => {
            let mut cfg: ExperimentConfig = read(&config)?.parse()?;
            cfg.seed = cli.seed.unwrap_or(cfg.seed);
            let target = out.clone().or(cfg.out.take());
            emit(&target, &sweep(&cfg)?.to_csv()?)
        }
        Command::Enumerate { graph: Some(path), k, .. } => {
            let list = parse_edge_list(&read(&path)?)?;
            let g = Graph::new(list.n, list.edge_set())?;
            let all = enumerate_two_factors(&g, k.unwrap_or(list.n))?;
            let mut text = String::new();
            for f in &all {
                let cycles: Vec<String> = f.cycles().iter().map(|c| join(c)).collect();
                text += &format!("{}\n", cycles.join(" | "));
            }
            text += &format!("count {}\n", all.len());
            emit(out, &text)
        }
        Command::Enumerate { graph: None, n, lambda, delta, trials, .. } => {
            let stats = exact_recovery_check(&ModelParams::new(n, lambda, delta), trials, &mut rng)?;
            emit(
                out,
                &format!(
                    "trials {} unique {} frequency {} posterior_miss {} mean_posterior_risk {}\n",
                    stats.trials,
                    stats.unique,
                    stats.frequency(),
                    stats.posterior_miss,
                    stats.mean_posterior_risk
                ),
            )
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use pcycles_core::Error as E;
    match err.downcast_ref::<E>() {
        Some(E::TrailExplosion { .. }) => 3,
        Some(E::Precondition(_) | E::Domain(_) | E::Parse { .. } | E::UndefinedRisk) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
