//! Shared fixtures for the benchmarks.

use pcycles_core::rng::rng_from_seed;
use pcycles_core::sampler::sample_two_factor;
use pcycles_core::{sample_instance, ColoredGraph, DegreeBoundedSubgraph, ModelParams, TwoFactor, Vertex};

/// A seeded instance of the planted model.
pub fn instance(n: usize, lambda: f64, delta: f64, seed: u64) -> (ColoredGraph, TwoFactor) {
    sample_instance(&ModelParams::new(n, lambda, delta), &mut rng_from_seed(seed)).expect("valid parameters")
}

/// Two independent spanning 2-factors on `n` vertices, the second viewed as
/// a candidate estimate.
pub fn two_factor_pair(n: usize, seed: u64) -> (TwoFactor, DegreeBoundedSubgraph) {
    let mut rng = rng_from_seed(seed);
    let support: Vec<Vertex> = (0..n as Vertex).collect();
    let a = sample_two_factor(n, &support, &mut rng).expect("n >= 3");
    let b = sample_two_factor(n, &support, &mut rng).expect("n >= 3");
    let h = DegreeBoundedSubgraph::from_edges(n, b.edges().iter().copied()).expect("degree two");
    (a, h)
}
