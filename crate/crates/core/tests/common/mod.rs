//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use pcycles_core::{Color, ColoredGraph, Edge, Graph, Vertex};
use rand::Rng;

/// Random simple graph with `m` distinct edges on `n` vertices.
pub fn random_graph<R: Rng>(n: usize, m: usize, rng: &mut R) -> Graph {
    let mut edges = BTreeSet::new();
    let max = n * (n - 1) / 2;
    while edges.len() < m.min(max) {
        let a = rng.random_range(0..n as Vertex);
        let b = rng.random_range(0..n as Vertex);
        if a != b {
            edges.insert(Edge::of(a, b));
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Canonical key of a vertex walk. Open walks start at the smaller endpoint;
/// closed ones (first vertex repeated at the end) take the smallest
/// rotation in either direction.
pub fn canonical_key(seq: &[Vertex]) -> Vec<Vertex> {
    let closed = seq.len() > 2 && seq.first() == seq.last();
    if !closed {
        let rev: Vec<Vertex> = seq.iter().rev().copied().collect();
        return if rev < seq.to_vec() { rev } else { seq.to_vec() };
    }
    let cyc = &seq[..seq.len() - 1];
    let k = cyc.len();
    let mut best: Option<Vec<Vertex>> = None;
    for dir in [false, true] {
        let base: Vec<Vertex> = if dir { cyc.iter().rev().copied().collect() } else { cyc.to_vec() };
        for r in 0..k {
            let mut cand: Vec<Vertex> = (0..k).map(|i| base[(r + i) % k]).collect();
            cand.push(cand[0]);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap()
}

/// Every trail with 1..max_len-1 edges, found by extending all sequences of
/// distinct edges and keeping those that form a walk.
pub fn brute_force_trails(g: &Graph, max_len: usize) -> Vec<Vec<Vertex>> {
    let edges = g.edges().to_vec();
    let mut out = BTreeSet::new();
    let mut used = vec![false; edges.len()];
    let mut seq: Vec<usize> = Vec::new();
    fn rec(
        edges: &[Edge],
        used: &mut [bool],
        seq: &mut Vec<usize>,
        max_len: usize,
        out: &mut BTreeSet<Vec<Vertex>>,
    ) {
        if !seq.is_empty() {
            for walk in walks_of(edges, seq) {
                out.insert(canonical_key(&walk));
            }
        }
        if seq.len() + 1 >= max_len {
            return;
        }
        for i in 0..edges.len() {
            if !used[i] {
                used[i] = true;
                seq.push(i);
                if !walks_of(edges, seq).is_empty() {
                    rec(edges, used, seq, max_len, out);
                }
                seq.pop();
                used[i] = false;
            }
        }
    }
    rec(&edges, &mut used, &mut seq, max_len, &mut out);
    out.into_iter().collect()
}

/// Vertex walks realising an edge sequence, trying both starts of the first edge.
fn walks_of(edges: &[Edge], seq: &[usize]) -> Vec<Vec<Vertex>> {
    let first = edges[seq[0]];
    let mut out = Vec::new();
    'start: for start in [first.u(), first.v()] {
        let mut walk = vec![start];
        let mut cur = start;
        for &i in seq {
            let e = edges[i];
            if !e.contains(cur) {
                continue 'start;
            }
            cur = e.other(cur);
            walk.push(cur);
        }
        out.push(walk);
    }
    out
}

/// Independent (a, b) classification of one directed walk.
pub fn ab_oracle(g: &ColoredGraph, seq: &[Vertex]) -> Option<(usize, usize)> {
    let colors: Vec<Color> = seq.windows(2).map(|w| g.color_of(Edge::of(w[0], w[1])).unwrap()).collect();
    let a = colors.iter().filter(|c| **c == Color::Red).count();
    let b = colors.len() - a;
    if colors[0] != Color::Blue {
        return None;
    }
    if a >= 1 && *colors.last().unwrap() != Color::Red {
        return None;
    }
    for i in 1..colors.len() {
        if colors[i - 1] == Color::Blue && colors[i] == Color::Blue && g.in_support(seq[i]) {
            return None;
        }
    }
    let closed = seq.len() > 2 && seq[0] == *seq.last().unwrap();
    if closed && colors[0] == Color::Blue && *colors.last().unwrap() == Color::Blue && g.in_support(seq[0]) {
        return None;
    }
    Some((a, b))
}

/// Directed traversals of a canonical walk: both directions, and every
/// rotation of a closed walk.
pub fn directed_walks(seq: &[Vertex]) -> Vec<Vec<Vertex>> {
    let closed = seq.len() > 2 && seq.first() == seq.last();
    let mut out = BTreeSet::new();
    let rev: Vec<Vertex> = seq.iter().rev().copied().collect();
    if !closed {
        out.insert(seq.to_vec());
        out.insert(rev);
    } else {
        let cyc = &seq[..seq.len() - 1];
        let k = cyc.len();
        for base in [cyc.to_vec(), cyc.iter().rev().copied().collect::<Vec<_>>()] {
            for r in 0..k {
                let mut w: Vec<Vertex> = (0..k).map(|i| base[(r + i) % k]).collect();
                w.push(w[0]);
                out.insert(w);
            }
        }
    }
    out.into_iter().collect()
}

/// Number of 2-factors spanning `K_k` (cycle covers with cycles of length ≥ 3),
/// by choosing the cycle through the smallest vertex.
pub fn spanning_two_factors(k: usize) -> u64 {
    let mut f = vec![0u64; k + 1];
    f[0] = 1;
    for m in 1..=k {
        let mut total = 0u64;
        for len in 3..=m {
            // C(m-1, len-1) choices of companions, (len-1)!/2 cyclic orders.
            let choose = binom(m as u64 - 1, len as u64 - 1);
            let orders = (1..len as u64).product::<u64>() / 2;
            total += choose * orders * f[m - len];
        }
        f[m] = total;
    }
    f[k]
}

pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Extinction probability of a finite law: smallest fixed point of the
/// generating function, by iteration from 0.
pub fn extinction_probability(probs: &[f64]) -> f64 {
    let mut q = 0.0f64;
    for _ in 0..100_000 {
        let next = probs.iter().rev().fold(0.0, |acc, p| acc * q + p);
        if (next - q).abs() < 1e-15 {
            return next;
        }
        q = next;
    }
    q
}
