use std::collections::{BTreeMap, BTreeSet};

use pcycles_core::decomposition::{check_decomposition, decompose_diff, excess};
use pcycles_core::rng::rng_from_seed;
use pcycles_core::sampler::sample_two_factor;
use pcycles_core::{symmetric_difference, DegreeBoundedSubgraph, Edge, TwoFactor, Vertex};
use rand::seq::SliceRandom;
use rand::Rng;

fn random_two_factor<R: Rng>(n: usize, rng: &mut R) -> TwoFactor {
    let k = rng.random_range(3..=n);
    let mut vs: Vec<Vertex> = (0..n as Vertex).collect();
    vs.shuffle(rng);
    let mut support = vs[..k].to_vec();
    support.sort_unstable();
    sample_two_factor(n, &support, rng).unwrap()
}

/// A random subgraph of maximum degree two, biased towards `H*` edges.
fn random_candidate<R: Rng>(h_star: &TwoFactor, rng: &mut R) -> DegreeBoundedSubgraph {
    let n = h_star.n();
    let mut pool: Vec<Edge> = Vec::new();
    match rng.random_range(0..3) {
        0 => pool.extend(random_two_factor(n, rng).edges().iter().copied()),
        1 => {
            pool.extend(h_star.edges().iter().copied().filter(|_| rng.random_bool(0.7)));
            for _ in 0..n {
                let (a, b) = (rng.random_range(0..n as Vertex), rng.random_range(0..n as Vertex));
                if a != b {
                    pool.push(Edge::of(a, b));
                }
            }
        }
        _ => {
            for _ in 0..2 * n {
                let (a, b) = (rng.random_range(0..n as Vertex), rng.random_range(0..n as Vertex));
                if a != b {
                    pool.push(Edge::of(a, b));
                }
            }
        }
    }
    pool.shuffle(rng);
    let mut deg = vec![0u8; n];
    let mut kept = BTreeSet::new();
    for e in pool {
        if deg[e.u() as usize] < 2 && deg[e.v() as usize] < 2 && kept.insert(e) {
            deg[e.u() as usize] += 1;
            deg[e.v() as usize] += 1;
        }
    }
    DegreeBoundedSubgraph::from_edges(n, kept).unwrap()
}

#[test]
fn random_pairs_satisfy_every_invariant() {
    let mut rng = rng_from_seed(21);
    for case in 0..1000 {
        let n = rng.random_range(3..=30);
        let h_star = random_two_factor(n, &mut rng);
        let h = random_candidate(&h_star, &mut rng);
        let dec = decompose_diff(&h_star, &h).unwrap();
        check_decomposition(&h_star, &h, &dec).unwrap_or_else(|e| panic!("case {case}: {e}"));

        // Partition of the difference, with correct colors.
        let diff = symmetric_difference(h_star.edges(), h.edges());
        let mut covered = Vec::new();
        for t in &dec.trails {
            for (e, c) in t.edges().into_iter().zip(&t.colors) {
                assert_eq!(c.is_red(), h_star.edges().contains(&e));
                covered.push(e);
            }
        }
        let as_set: BTreeSet<Edge> = covered.iter().copied().collect();
        assert_eq!(as_set.len(), covered.len(), "case {case}: repeated edge");
        assert_eq!(as_set, diff, "case {case}");

        // Alternation wherever a trail passes through a vertex of both H* and H.
        let in_h: BTreeSet<Vertex> = h.edges().iter().flat_map(|e| [e.u(), e.v()]).collect();
        let shared = |v: &Vertex| h_star.support().contains(v) && in_h.contains(v);
        for t in &dec.trails {
            let k = t.colors.len();
            let closed = t.vertices[0] == t.vertices[k];
            for i in 0..k {
                let (prev, next) = match (i, closed) {
                    (0, false) => continue,
                    (0, true) => (k - 1, 0),
                    _ => (i - 1, i),
                };
                if shared(&t.vertices[i]) {
                    assert_ne!(t.colors[prev], t.colors[next], "case {case}: no alternation at {}", t.vertices[i]);
                }
            }
            if !closed {
                assert_eq!(h.degree(t.vertices[0]), 1);
                assert_eq!(h.degree(t.vertices[k]), 1);
            }
        }

        // Exactly half as many open trails as degree-1 vertices of H.
        let deg1 = (0..n as Vertex).filter(|&v| h.degree(v) == 1).count();
        assert_eq!(2 * dec.open_count, deg1, "case {case}");

        // Degree profile of the difference graph.
        let mut prof: BTreeMap<Vertex, (usize, usize)> = BTreeMap::new();
        for e in &diff {
            for v in [e.u(), e.v()] {
                let p = prof.entry(v).or_default();
                if h_star.edges().contains(e) {
                    p.0 += 1;
                } else {
                    p.1 += 1;
                }
            }
        }
        for (v, (r, b)) in prof {
            assert!(r + b <= 4, "case {case}: vertex {v}");
            if r + b == 4 {
                assert_eq!((r, b), (2, 2));
            }
            if r + b == 3 {
                assert_eq!((r, b), (2, 1));
            }
        }

        // Balance: Σ (a - b) = |H*| - |H|.
        let balance: i64 = dec.trails.iter().map(|t| t.profile().0 as i64 - t.profile().1 as i64).sum();
        assert_eq!(balance, h_star.len() as i64 - h.len() as i64);
    }
}

#[test]
fn two_factor_differences_are_closed_and_balanced() {
    let mut rng = rng_from_seed(22);
    for _ in 0..200 {
        let n = rng.random_range(6..=20);
        let support: Vec<Vertex> = (0..n as Vertex).collect();
        let a = sample_two_factor(n, &support, &mut rng).unwrap();
        let b = sample_two_factor(n, &support, &mut rng).unwrap();
        let h = DegreeBoundedSubgraph::from_edges(n, b.edges().iter().copied()).unwrap();
        let dec = decompose_diff(&a, &h).unwrap();
        assert_eq!(dec.open_count, 0);
        let reds: usize = dec.trails.iter().map(|t| t.profile().0).sum();
        let blues: usize = dec.trails.iter().map(|t| t.profile().1).sum();
        assert_eq!(reds, blues);
    }
}

#[test]
fn excess_values() {
    assert_eq!(excess((3, 3), 0.0), 0.0);
    assert!((excess((0, 4), 0.1) - 2.4).abs() < 1e-12);
    assert_eq!(excess((5, 1), 0.0), -2.0);
}

#[test]
fn degree_violations_are_rejected() {
    let h_star = TwoFactor::from_cycles(6, &[vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
    // Vertex 0 would have degree 3 in H.
    assert!(DegreeBoundedSubgraph::from_edges(6, [Edge::of(0, 3), Edge::of(0, 4), Edge::of(0, 5)]).is_err());
    let h = DegreeBoundedSubgraph::from_edges(6, [Edge::of(0, 3), Edge::of(0, 4)]).unwrap();
    assert!(decompose_diff(&h_star, &h).is_ok());
}
