mod common;

use common::spanning_two_factors;
use pcycles_core::rng::rng_from_seed;
use pcycles_core::sampler::{cycle_type, sample_background, sample_single_cycle, sample_two_factor};
use pcycles_core::{sample_instance, ModelParams, Variant, Vertex};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Number of spanning 2-factors of `K_m` with the given cycle type:
/// `m! / (Π 2p_i · Π mult_j!)`.
fn type_count(m: usize, parts: &[usize]) -> u64 {
    let fact = |k: u64| (1..=k).product::<u64>();
    let mut denom: u64 = parts.iter().map(|&p| 2 * p as u64).product();
    let mut sorted = parts.to_vec();
    sorted.sort_unstable();
    for chunk in sorted.chunk_by(|a, b| a == b) {
        denom *= fact(chunk.len() as u64);
    }
    fact(m as u64) / denom
}

#[test]
fn cycle_types_on_eight_vertices_are_uniform() {
    let m = 8;
    let types: Vec<Vec<usize>> = vec![vec![8], vec![5, 3], vec![4, 4]];
    let counts: Vec<u64> = types.iter().map(|t| type_count(m, t)).collect();
    let total = spanning_two_factors(m);
    assert_eq!(counts, vec![2520, 672, 315]);
    assert_eq!(counts.iter().sum::<u64>(), total);

    let draws = 20_000;
    let support: Vec<Vertex> = (0..m as Vertex).collect();
    let mut rng = rng_from_seed(31);
    let mut observed = [0u64; 3];
    for _ in 0..draws {
        let t = cycle_type(&sample_two_factor(m, &support, &mut rng).unwrap());
        let idx = types.iter().position(|x| *x == t).expect("unexpected cycle type");
        observed[idx] += 1;
    }
    let chi2: f64 = observed
        .iter()
        .zip(counts)
        .map(|(&o, c)| {
            let e = draws as f64 * c as f64 / total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let p = 1.0 - ChiSquared::new(2.0).unwrap().cdf(chi2);
    assert!(p > 0.001, "chi2 = {chi2}, p = {p}");
}

#[test]
fn single_cycle_variant_is_one_cycle() {
    let mut rng = rng_from_seed(32);
    let support: Vec<Vertex> = (0..10).collect();
    for _ in 0..50 {
        let h = sample_single_cycle(12, &support, &mut rng).unwrap();
        assert_eq!(cycle_type(&h), vec![10]);
    }
    let (_, h) = sample_instance(&ModelParams::new(40, 0.5, 0.5).with_variant(Variant::SingleCycle), &mut rng).unwrap();
    assert_eq!(h.cycle_count(), 1);
}

#[test]
fn support_is_uniform_over_vertices() {
    let (n, runs) = (20, 4000);
    let mut hits = vec![0u64; n];
    let mut rng = rng_from_seed(33);
    for _ in 0..runs {
        let (_, h) = sample_instance(&ModelParams::new(n, 0.0, 0.5), &mut rng).unwrap();
        assert_eq!(h.support().len(), 10);
        for &v in h.support() {
            hits[v as usize] += 1;
        }
    }
    // Each vertex is planted with probability 1/2 in every run.
    let sd = (runs as f64 * 0.25).sqrt();
    for (v, &h) in hits.iter().enumerate() {
        assert!((h as f64 - runs as f64 / 2.0).abs() < 4.5 * sd, "vertex {v}: {h}");
    }
}

#[test]
fn background_edge_count_matches_its_mean() {
    let (n, lambda) = (500, 1.0);
    let p = lambda / n as f64;
    let pairs = (n * (n - 1) / 2) as f64;
    let runs = 200;
    let mut rng = rng_from_seed(34);
    let total: usize = (0..runs).map(|_| sample_background(n, p, &mut rng).unwrap().len()).sum();
    let mean = total as f64 / runs as f64;
    let sd = (pairs * p * (1.0 - p) / runs as f64).sqrt();
    assert!((mean - pairs * p).abs() < 4.0 * sd, "{mean} vs {}", pairs * p);
}

#[test]
fn coinciding_edges_become_red() {
    let mut rng = rng_from_seed(35);
    let (g, h) = sample_instance(&ModelParams::new(30, 25.0, 1.0), &mut rng).unwrap();
    assert_eq!(g.red_count(), h.len());
    assert_eq!(&g.planted_edges(), h.edges());
    assert!(g.blue_count() > 0);
}
