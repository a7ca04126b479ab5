//! Greedy recovery of the planted 2-factor by flipping short trails.
//!
//! Starting from `H = ∅`, the estimator repeatedly replaces `H` by `H Δ P` for
//! trails `P` of the observed graph with fewer than `L` edges:
//!
//! * subroutine A scans all trails in order and applies every `P` that grows
//!   `H`, keeps all degrees at most two and does not add degree-1 vertices;
//! * subroutine B then picks the trail maximizing `|H Δ P|` among those keeping
//!   degrees at most two, and applies it if it grows `H` by at least `q`.
//!
//! The loop stops after a round in which neither subroutine changed `H`. Only
//! the uncolored graph is consulted.

use rayon::prelude::*;

use crate::error::Result;
use crate::graph::{DegreeBoundedSubgraph, EdgeId, Graph, Vertex};
use crate::trails::{enumerate_trails, Trail, DEFAULT_TRAIL_CAP};

/// `L = max(3, ⌊ln n⌋)`.
pub fn default_max_len(n: usize) -> usize {
    ((n.max(1) as f64).ln().floor() as usize).max(3)
}

/// `q = max(1, ⌈√(ln n)⌉)`.
pub fn default_quota(n: usize) -> usize {
    ((n.max(1) as f64).ln().sqrt().ceil() as usize).max(1)
}

/// Guarantees on the output when the input contains a 2-factor on
/// `⌊δn⌋` vertices: at least `δn - 9n/√(ln n)` edges and at most
/// `2n/√(ln n)` vertices of degree one.
pub fn structural_bounds(n: usize, delta: f64) -> (f64, f64) {
    let root = (n as f64).ln().sqrt();
    (delta * n as f64 - 9.0 * n as f64 / root, 2.0 * n as f64 / root)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct RecoveryKnobs {
    /// Trails have at most `max_len - 1` edges.
    pub max_len: Option<usize>,
    pub quota: Option<usize>,
    pub trail_cap: usize,
}

impl Default for RecoveryKnobs {
    fn default() -> Self {
        RecoveryKnobs { max_len: None, quota: None, trail_cap: DEFAULT_TRAIL_CAP }
    }
}

impl RecoveryKnobs {
    pub fn resolve(&self, n: usize) -> (usize, usize) {
        (self.max_len.unwrap_or_else(|| default_max_len(n)), self.quota.unwrap_or_else(|| default_quota(n)))
    }
}

/// The evolving candidate `H` over the edge ids of a fixed graph.
#[derive(Clone, Debug)]
pub struct RecoveryState<'g> {
    graph: &'g Graph,
    in_h: Vec<bool>,
    degree: Vec<u8>,
    size: usize,
    deg1: usize,
    pub iterations: usize,
    pub updates_a: usize,
    pub updates_b: usize,
}

/// Effect of flipping one trail against the current `H`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct FlipEffect {
    /// `|H Δ P|`.
    pub new_size: usize,
    /// Degree-1 vertex count of `H Δ P`.
    pub new_deg1: usize,
    /// Whether `H Δ P` keeps every degree at most two.
    pub degree_ok: bool,
}

/// Per-worker scratch space for evaluating flips without materializing `H Δ P`.
#[derive(Clone, Debug)]
struct Scratch {
    delta: Vec<i8>,
    seen: Vec<bool>,
    touched: Vec<Vertex>,
}

impl Scratch {
    fn new(n: usize) -> Scratch {
        Scratch { delta: vec![0; n], seen: vec![false; n], touched: Vec::new() }
    }
}

impl<'g> RecoveryState<'g> {
    pub fn new(graph: &'g Graph) -> RecoveryState<'g> {
        RecoveryState {
            graph,
            in_h: vec![false; graph.edge_count()],
            degree: vec![0; graph.n()],
            size: 0,
            deg1: 0,
            iterations: 0,
            updates_a: 0,
            updates_b: 0,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn deg1_count(&self) -> usize {
        self.deg1
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.in_h[id as usize]
    }

    pub fn subgraph(&self) -> DegreeBoundedSubgraph {
        let edges = self.in_h.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| self.graph.edge(i as EdgeId));
        DegreeBoundedSubgraph::from_edges(self.graph.n(), edges).expect("recovery keeps degrees at most two")
    }

    fn evaluate(&self, trail: &Trail, scratch: &mut Scratch) -> FlipEffect {
        let mut new_size = self.size;
        for &id in trail.edge_ids() {
            let e = self.graph.edge(id);
            let step: i8 = if self.in_h[id as usize] { -1 } else { 1 };
            if step > 0 {
                new_size += 1;
            } else {
                new_size -= 1;
            }
            for v in [e.u(), e.v()] {
                if !scratch.seen[v as usize] {
                    scratch.seen[v as usize] = true;
                    scratch.touched.push(v);
                }
                scratch.delta[v as usize] += step;
            }
        }
        let mut degree_ok = true;
        let mut deg1 = self.deg1 as isize;
        for &v in &scratch.touched {
            let d = scratch.delta[v as usize];
            if d == 0 {
                continue;
            }
            let old = self.degree[v as usize] as i32;
            let new = old + d as i32;
            if new > 2 {
                degree_ok = false;
            }
            deg1 += (new == 1) as isize - (old == 1) as isize;
        }
        for &v in &scratch.touched {
            scratch.delta[v as usize] = 0;
            scratch.seen[v as usize] = false;
        }
        scratch.touched.clear();
        FlipEffect { new_size, new_deg1: deg1.max(0) as usize, degree_ok }
    }

    /// The effect of replacing `H` by `H Δ P`.
    pub fn flip_effect(&self, trail: &Trail) -> FlipEffect {
        self.evaluate(trail, &mut Scratch::new(self.graph.n()))
    }

    fn apply(&mut self, trail: &Trail) {
        for &id in trail.edge_ids() {
            let e = self.graph.edge(id);
            let was = self.in_h[id as usize];
            self.in_h[id as usize] = !was;
            for v in [e.u(), e.v()] {
                let d = &mut self.degree[v as usize];
                if *d == 1 {
                    self.deg1 -= 1;
                }
                if was {
                    *d -= 1;
                } else {
                    *d += 1;
                }
                if *d == 1 {
                    self.deg1 += 1;
                }
            }
            if was {
                self.size -= 1;
            } else {
                self.size += 1;
            }
        }
        debug_assert!(self.degree.iter().all(|&d| d <= 2));
    }

    /// Applies, in order, every trail that grows `H` without creating a vertex
    /// of degree three or more and without adding degree-1 vertices. Returns
    /// the number of updates.
    pub fn subroutine_a(&mut self, trails: &[Trail]) -> usize {
        let mut scratch = Scratch::new(self.graph.n());
        let mut updates = 0;
        for p in trails {
            let eff = self.evaluate(p, &mut scratch);
            if eff.degree_ok && eff.new_size > self.size && eff.new_deg1 <= self.deg1 {
                self.apply(p);
                updates += 1;
            }
        }
        self.updates_a += updates;
        updates
    }

    /// Index of the trail maximizing `|H Δ P|` among those keeping degrees at
    /// most two, earliest on ties.
    pub fn best_flip(&self, trails: &[Trail]) -> Option<(usize, FlipEffect)> {
        let n = self.graph.n();
        trails
            .par_iter()
            .enumerate()
            .map_init(
                || Scratch::new(n),
                |scratch, (i, p)| {
                    let eff = self.evaluate(p, scratch);
                    eff.degree_ok.then_some((i, eff))
                },
            )
            .flatten()
            .reduce_with(|x, y| {
                if y.1.new_size > x.1.new_size || (y.1.new_size == x.1.new_size && y.0 < x.0) {
                    y
                } else {
                    x
                }
            })
    }

    /// Applies the best flip if it grows `H` by at least `quota` edges.
    pub fn subroutine_b(&mut self, trails: &[Trail], quota: usize) -> bool {
        match self.best_flip(trails) {
            Some((i, eff)) if eff.new_size >= self.size + quota => {
                self.apply(&trails[i]);
                self.updates_b += 1;
                true
            }
            _ => false,
        }
    }

    /// Runs both subroutines until a round changes nothing.
    pub fn run(&mut self, trails: &[Trail], quota: usize) {
        loop {
            self.iterations += 1;
            let a = self.subroutine_a(trails);
            let b = self.subroutine_b(trails, quota);
            if a == 0 && !b {
                break;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveryOutcome {
    pub h: DegreeBoundedSubgraph,
    pub iterations: usize,
    pub updates_a: usize,
    pub updates_b: usize,
    pub trail_count: usize,
    pub max_len: usize,
    pub quota: usize,
}

/// Runs the estimator on the uncolored graph.
pub fn recover(graph: &Graph, knobs: &RecoveryKnobs) -> Result<RecoveryOutcome> {
    let (max_len, quota) = knobs.resolve(graph.n());
    let trails = enumerate_trails(graph, max_len.max(2), knobs.trail_cap)?;
    let mut state = RecoveryState::new(graph);
    state.run(&trails, quota.max(1));
    Ok(RecoveryOutcome {
        h: state.subgraph(),
        iterations: state.iterations,
        updates_a: state.updates_a,
        updates_b: state.updates_b,
        trail_count: trails.len(),
        max_len,
        quota,
    })
}
