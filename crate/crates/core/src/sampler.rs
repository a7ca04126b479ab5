//! Sampling from the planted 2-factor model.
//!
//! An instance on `n` vertices picks a uniform subset `V` of size `⌊δn⌋`,
//! plants a uniform 2-factor `H*` on `V` (or a single Hamiltonian cycle of `V`
//! in the single-cycle variant), and overlays an Erdős–Rényi background graph
//! with edge probability `λ/n` over all pairs. A background edge that
//! coincides with a planted one is merged into a single red edge.

use std::collections::BTreeMap;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand_distr::{Distribution, Geometric};

use crate::error::{precondition, Result};
use crate::graph::{Color, ColoredGraph, Edge, TwoFactor, Vertex};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    #[default]
    TwoFactor,
    SingleCycle,
}

impl std::str::FromStr for Variant {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Variant> {
        match s {
            "two-factor" => Ok(Variant::TwoFactor),
            "single-cycle" => Ok(Variant::SingleCycle),
            other => Err(precondition(format!("unknown variant `{other}` (expected two-factor or single-cycle)"))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::TwoFactor => "two-factor",
            Variant::SingleCycle => "single-cycle",
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ModelParams {
    pub n: usize,
    pub lambda: f64,
    pub delta: f64,
    pub variant: Variant,
}

impl ModelParams {
    pub fn new(n: usize, lambda: f64, delta: f64) -> ModelParams {
        ModelParams { n, lambda, delta, variant: Variant::TwoFactor }
    }

    pub fn with_variant(self, variant: Variant) -> ModelParams {
        ModelParams { variant, ..self }
    }

    /// `⌊δn⌋`, the number of planted vertices.
    pub fn support_size(&self) -> usize {
        planted_count(self.n, self.delta)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(precondition(format!("delta must lie in (0, 1], got {}", self.delta)));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(precondition(format!("lambda must be a non-negative real, got {}", self.lambda)));
        }
        if self.lambda > self.n as f64 {
            return Err(precondition(format!("lambda = {} exceeds n = {}", self.lambda, self.n)));
        }
        if self.support_size() < 3 {
            return Err(precondition(format!(
                "floor(delta * n) = {} is below 3; no 2-factor exists",
                self.support_size()
            )));
        }
        Ok(())
    }
}

/// `⌊δn⌋`, with a small guard against `δn` landing just below an integer.
pub fn planted_count(n: usize, delta: f64) -> usize {
    (delta * n as f64 + 1e-9).floor() as usize
}

/// A uniformly random 2-factor on `support`.
///
/// Draws uniform permutations, rejects any with a fixed point or 2-cycle and
/// otherwise accepts with probability `2^(1-c)` for `c` cycles. A 2-factor
/// with `c` cycles arises from exactly `2^c` permutations, so accepted draws
/// are uniform.
pub fn sample_two_factor<R: Rng + ?Sized>(n: usize, support: &[Vertex], rng: &mut R) -> Result<TwoFactor> {
    let m = support.len();
    if m < 3 {
        return Err(precondition(format!("a 2-factor needs at least 3 vertices, got {m}")));
    }
    let mut perm: Vec<usize> = (0..m).collect();
    let mut seen = vec![false; m];
    loop {
        perm.shuffle(rng);
        seen.iter_mut().for_each(|s| *s = false);
        let mut cycles: Vec<Vec<Vertex>> = Vec::new();
        let mut short = false;
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(support[x]);
                x = perm[x];
            }
            if cycle.len() < 3 {
                short = true;
                break;
            }
            cycles.push(cycle);
        }
        if short {
            continue;
        }
        let c = cycles.len() as i32;
        if c == 1 || rng.random::<f64>() < 2f64.powi(1 - c) {
            return TwoFactor::from_cycles(n, &cycles);
        }
    }
}

/// A uniformly random Hamiltonian cycle on `support`.
pub fn sample_single_cycle<R: Rng + ?Sized>(n: usize, support: &[Vertex], rng: &mut R) -> Result<TwoFactor> {
    if support.len() < 3 {
        return Err(precondition(format!("a cycle needs at least 3 vertices, got {}", support.len())));
    }
    let mut order = support.to_vec();
    order.shuffle(rng);
    TwoFactor::from_cycles(n, &[order])
}

/// Each of the `n(n-1)/2` pairs independently with probability `p`, by
/// geometric skipping over the row-major pair index.
pub fn sample_background<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Vec<Edge>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(precondition(format!("edge probability {p} outside [0, 1]")));
    }
    let total = (n as u64) * (n as u64).saturating_sub(1) / 2;
    let mut edges = Vec::new();
    if p == 0.0 || total == 0 {
        return Ok(edges);
    }
    let geo = Geometric::new(p).map_err(|e| precondition(e.to_string()))?;
    let (mut row, mut row_start, mut row_end) = (0u64, 0u64, n as u64 - 1);
    let mut idx = 0u64;
    loop {
        idx = idx.saturating_add(geo.sample(rng));
        if idx >= total {
            break;
        }
        while idx >= row_end {
            row += 1;
            row_start = row_end;
            row_end += n as u64 - 1 - row;
        }
        let col = row + 1 + (idx - row_start);
        edges.push(Edge::of(row as Vertex, col as Vertex));
        idx += 1;
    }
    Ok(edges)
}

/// One draw of `(G, H*)`.
pub fn sample_instance<R: Rng + ?Sized>(params: &ModelParams, rng: &mut R) -> Result<(ColoredGraph, TwoFactor)> {
    params.validate()?;
    let n = params.n;
    let mut support: Vec<Vertex> = index::sample(rng, n, params.support_size()).into_iter().map(|v| v as Vertex).collect();
    support.sort_unstable();
    let planted = match params.variant {
        Variant::TwoFactor => sample_two_factor(n, &support, rng)?,
        Variant::SingleCycle => sample_single_cycle(n, &support, rng)?,
    };
    let background = sample_background(n, params.lambda / n as f64, rng)?;
    let edges = background
        .into_iter()
        .map(|e| (e, Color::Blue))
        .chain(planted.edges().iter().map(|&e| (e, Color::Red)));
    let graph = ColoredGraph::new(n, edges)?;
    Ok((graph, planted))
}

/// Cycle lengths of a 2-factor, longest first.
pub fn cycle_type(h: &TwoFactor) -> Vec<usize> {
    let mut t: Vec<usize> = h.cycles().iter().map(Vec::len).collect();
    t.sort_unstable_by(|a, b| b.cmp(a));
    t
}

/// Histogram of the number of cycles over `samples` uniform 2-factors on
/// `m` vertices.
pub fn cycle_count_stats<R: Rng + ?Sized>(samples: usize, m: usize, rng: &mut R) -> Result<BTreeMap<usize, u64>> {
    let support: Vec<Vertex> = (0..m as Vertex).collect();
    let mut hist = BTreeMap::new();
    for _ in 0..samples {
        let h = sample_two_factor(m, &support, rng)?;
        *hist.entry(h.cycle_count()).or_insert(0) += 1;
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn triangle_is_the_only_two_factor_on_three_vertices() {
        let mut rng = rng_from_seed(1);
        let h = sample_two_factor(5, &[1, 3, 4], &mut rng).unwrap();
        assert_eq!(h.edges().len(), 3);
        assert!(h.edges().contains(&Edge::of(1, 3)) && h.edges().contains(&Edge::of(3, 4)));
        assert!(sample_two_factor(5, &[1, 3], &mut rng).is_err());
    }

    #[test]
    fn zero_lambda_gives_planted_graph_only() {
        let mut rng = rng_from_seed(2);
        let (g, h) = sample_instance(&ModelParams::new(50, 0.0, 0.5), &mut rng).unwrap();
        assert_eq!(g.blue_count(), 0);
        assert_eq!(&g.planted_edges(), h.edges());
        assert_eq!(h.support().len(), 25);
    }

    #[test]
    fn full_support_when_delta_is_one() {
        let mut rng = rng_from_seed(3);
        let (g, h) = sample_instance(&ModelParams::new(40, 1.0, 1.0), &mut rng).unwrap();
        assert_eq!(h.support().len(), 40);
        assert_eq!(g.support_size(), 40);
    }

    #[test]
    fn single_cycle_variant_has_one_cycle() {
        let mut rng = rng_from_seed(4);
        let params = ModelParams::new(30, 0.5, 0.8).with_variant(Variant::SingleCycle);
        let (_, h) = sample_instance(&params, &mut rng).unwrap();
        assert_eq!(h.cycle_count(), 1);
        assert_eq!(h.len(), 24);
    }

    #[test]
    fn parameter_errors() {
        let mut rng = rng_from_seed(5);
        assert!(sample_instance(&ModelParams::new(5, 6.0, 1.0), &mut rng).is_err());
        assert!(sample_instance(&ModelParams::new(5, 1.0, 0.5), &mut rng).is_err());
        assert!(sample_instance(&ModelParams::new(5, 1.0, 0.0), &mut rng).is_err());
    }

    #[test]
    fn background_covers_all_pairs_at_p_one() {
        let mut rng = rng_from_seed(6);
        let edges = sample_background(7, 1.0, &mut rng).unwrap();
        assert_eq!(edges.len(), 21);
        let distinct: std::collections::BTreeSet<_> = edges.iter().collect();
        assert_eq!(distinct.len(), 21);
    }

    #[test]
    fn cycle_count_of_three_is_always_one() {
        let mut rng = rng_from_seed(7);
        let hist = cycle_count_stats(100, 3, &mut rng).unwrap();
        assert_eq!(hist.get(&1), Some(&100));
    }

    #[test]
    fn variant_parses() {
        assert_eq!("single-cycle".parse::<Variant>().unwrap(), Variant::SingleCycle);
        assert!("x".parse::<Variant>().is_err());
    }
}
