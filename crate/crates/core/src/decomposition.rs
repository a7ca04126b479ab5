//! Alternating-trail decomposition of `H Δ H*`.
//!
//! Red edges are `H* \ H`, blue edges are `H \ H*`. Every vertex of the
//! difference graph is split into copies of degree at most two, pairing one red
//! with one blue edge wherever a vertex has degree three or four, and the
//! resulting paths and cycles are read off as trails:
//!
//! * degree 4 (two red, two blue): the red edge with the smallest other
//!   endpoint is paired with the blue edge with the smallest other endpoint,
//!   and the remaining two form the second pair;
//! * degree 3 (two red, one blue): the red edge with the smaller other endpoint
//!   is paired with the blue edge, and the other red edge ends a trail there;
//! * degree 2: the two edges are paired; degree 1: the edge ends a trail.
//!
//! Afterwards, whenever the two pairs at a degree-4 vertex lie on different
//! trails and at least one of them is closed, the pairs are crossed, which
//! merges the two trails into one. This keeps every pairing alternating while
//! avoiding circuits that could be absorbed into a neighbour.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{precondition, Result};
use crate::graph::{symmetric_difference, Color, DegreeBoundedSubgraph, Edge, EdgeSet, TwoFactor, Vertex};
use crate::trails::canonical_sequence;

/// One trail of the decomposition, in canonical orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffTrail {
    pub vertices: Vec<Vertex>,
    pub colors: Vec<Color>,
}

impl DiffTrail {
    pub fn is_closed(&self) -> bool {
        self.vertices.first() == self.vertices.last()
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// `(red, blue)` edge counts.
    pub fn profile(&self) -> (usize, usize) {
        let red = self.colors.iter().filter(|c| c.is_red()).count();
        (red, self.colors.len() - red)
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.vertices.windows(2).map(|w| Edge::of(w[0], w[1])).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingDecomposition {
    pub trails: Vec<DiffTrail>,
    pub open_count: usize,
}

/// `b - (1/2 - ε)(a + b)`.
pub fn excess(profile: (usize, usize), epsilon: f64) -> f64 {
    let (a, b) = (profile.0 as f64, profile.1 as f64);
    b - (0.5 - epsilon) * (a + b)
}

struct DiffGraph {
    edges: Vec<Edge>,
    /// Per vertex: pairs of edge indices joined at that vertex, and edges
    /// ending a trail there.
    pairs: BTreeMap<Vertex, Vec<(usize, usize)>>,
}

impl DiffGraph {
    fn partner(&self, v: Vertex, e: usize) -> Option<usize> {
        self.pairs.get(&v)?.iter().find_map(|&(x, y)| {
            if x == e {
                Some(y)
            } else if y == e {
                Some(x)
            } else {
                None
            }
        })
    }

    /// Trails as `(start vertex, edge indices)`, open ones first.
    fn trails(&self) -> Vec<(Vertex, Vec<usize>)> {
        let m = self.edges.len();
        let mut used = vec![false; m];
        let mut out = Vec::new();
        // Open trails start at an edge end without a partner.
        for i in 0..m {
            for start in [self.edges[i].u(), self.edges[i].v()] {
                if used[i] || self.partner(start, i).is_some() {
                    continue;
                }
                out.push((start, self.walk(start, i, &mut used)));
            }
        }
        for i in 0..m {
            if !used[i] {
                let start = self.edges[i].u();
                out.push((start, self.walk(start, i, &mut used)));
            }
        }
        out
    }

    fn walk(&self, start: Vertex, first: usize, used: &mut [bool]) -> Vec<usize> {
        let mut seq = Vec::new();
        let (mut at, mut e) = (start, first);
        loop {
            used[e] = true;
            seq.push(e);
            let w = self.edges[e].other(at);
            match self.partner(w, e) {
                Some(f) if !used[f] => {
                    at = w;
                    e = f;
                }
                _ => break,
            }
        }
        seq
    }
}

/// Decomposes `H Δ H*` into alternating trails.
pub fn decompose_diff(h_star: &TwoFactor, h: &DegreeBoundedSubgraph) -> Result<AlternatingDecomposition> {
    if h.max_degree() > 2 || !h.is_consistent() {
        return Err(precondition("candidate must have maximum degree at most 2"));
    }
    let diff = symmetric_difference(h_star.edges(), h.edges());
    let edges: Vec<Edge> = diff.iter().copied().collect();
    let colors: Vec<Color> =
        edges.iter().map(|e| if h_star.edges().contains(e) { Color::Red } else { Color::Blue }).collect();
    let mut incident: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        incident.entry(e.u()).or_default().push(i);
        incident.entry(e.v()).or_default().push(i);
    }
    let mut pairs: BTreeMap<Vertex, Vec<(usize, usize)>> = BTreeMap::new();
    for (&v, inc) in &incident {
        let mut reds: Vec<usize> = inc.iter().copied().filter(|&i| colors[i].is_red()).collect();
        let mut blues: Vec<usize> = inc.iter().copied().filter(|&i| !colors[i].is_red()).collect();
        reds.sort_by_key(|&i| edges[i].other(v));
        blues.sort_by_key(|&i| edges[i].other(v));
        let p = match (inc.len(), reds.len(), blues.len()) {
            (1, _, _) => vec![],
            (2, _, _) => vec![(inc[0], inc[1])],
            (3, 2, 1) => vec![(reds[0], blues[0])],
            (4, 2, 2) => vec![(reds[0], blues[0]), (reds[1], blues[1])],
            (d, r, b) => {
                return Err(precondition(format!(
                    "vertex {v} has degree {d} ({r} red, {b} blue) in the difference graph"
                )))
            }
        };
        pairs.insert(v, p);
    }
    let mut dg = DiffGraph { edges, pairs };
    splice(&mut dg);
    let mut trails: Vec<DiffTrail> = dg
        .trails()
        .into_iter()
        .map(|(start, seq)| {
            let mut vertices = vec![start];
            for &e in &seq {
                let last = *vertices.last().unwrap();
                vertices.push(dg.edges[e].other(last));
            }
            let vertices = canonical_sequence(&vertices);
            let colors = vertices
                .windows(2)
                .map(|w| if h_star.edges().contains(&Edge::of(w[0], w[1])) { Color::Red } else { Color::Blue })
                .collect();
            DiffTrail { vertices, colors }
        })
        .collect();
    trails.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    let open_count = trails.iter().filter(|t| !t.is_closed()).count();
    Ok(AlternatingDecomposition { trails, open_count })
}

fn splice(dg: &mut DiffGraph) {
    loop {
        let trails = dg.trails();
        let mut trail_of = vec![0usize; dg.edges.len()];
        let mut closed = Vec::with_capacity(trails.len());
        for (t, (start, seq)) in trails.iter().enumerate() {
            for &e in seq {
                trail_of[e] = t;
            }
            let mut end = *start;
            for &e in seq {
                end = dg.edges[e].other(end);
            }
            closed.push(end == *start && dg.partner(*start, seq[0]) == Some(*seq.last().unwrap()));
        }
        let target = dg.pairs.iter().find_map(|(&v, p)| {
            if p.len() != 2 {
                return None;
            }
            let (t1, t2) = (trail_of[p[0].0], trail_of[p[1].0]);
            (t1 != t2 && (closed[t1] || closed[t2])).then_some(v)
        });
        match target {
            Some(v) => {
                let p = dg.pairs.get_mut(&v).unwrap();
                let ((r1, b1), (r2, b2)) = (p[0], p[1]);
                *p = vec![(r1, b2), (r2, b1)];
            }
            None => return,
        }
    }
}

/// Checks every decomposition invariant, returning a description of the
/// first violation.
pub fn check_decomposition(
    h_star: &TwoFactor,
    h: &DegreeBoundedSubgraph,
    dec: &AlternatingDecomposition,
) -> std::result::Result<(), String> {
    let diff = symmetric_difference(h_star.edges(), h.edges());
    let mut seen = EdgeSet::new();
    for t in &dec.trails {
        for e in t.edges() {
            if !seen.insert(e) {
                return Err(format!("edge {e} appears in two trails"));
            }
        }
        for (e, c) in t.edges().iter().zip(&t.colors) {
            if c.is_red() != h_star.edges().contains(e) {
                return Err(format!("edge {e} has the wrong color"));
            }
        }
    }
    if seen != diff {
        return Err("trails do not cover the difference graph exactly".into());
    }
    let h_vertices: BTreeSet<Vertex> = h.edges().iter().flat_map(|e| [e.u(), e.v()]).collect();
    let shared = |v: Vertex| h_star.support().contains(&v) && h_vertices.contains(&v);
    for t in &dec.trails {
        let k = t.colors.len();
        for i in 1..k {
            if shared(t.vertices[i]) && t.colors[i - 1] == t.colors[i] {
                return Err(format!("trail turns without alternating at shared vertex {}", t.vertices[i]));
            }
        }
        if t.is_closed() && shared(t.vertices[0]) && t.colors[0] == t.colors[k - 1] {
            return Err(format!("closed trail does not alternate at shared vertex {}", t.vertices[0]));
        }
        if !t.is_closed() {
            for v in [t.vertices[0], t.vertices[k]] {
                if h.degree(v) != 1 {
                    return Err(format!("open trail ends at {v}, which has degree {} in H", h.degree(v)));
                }
            }
        }
    }
    let open = dec.trails.iter().filter(|t| !t.is_closed()).count();
    if open != dec.open_count || 2 * open != h.deg1_count() {
        return Err(format!("{open} open trails for {} degree-1 vertices", h.deg1_count()));
    }
    let mut red_deg: BTreeMap<Vertex, (usize, usize)> = BTreeMap::new();
    for e in &diff {
        let red = h_star.edges().contains(e);
        for v in [e.u(), e.v()] {
            let slot = red_deg.entry(v).or_default();
            if red {
                slot.0 += 1;
            } else {
                slot.1 += 1;
            }
        }
    }
    for (v, (r, b)) in red_deg {
        let ok = match r + b {
            4 => r == 2 && b == 2,
            3 => r == 2 && b == 1,
            d => d <= 2,
        };
        if !ok {
            return Err(format!("vertex {v} has {r} red and {b} blue difference edges"));
        }
    }
    let balance: isize = dec.trails.iter().map(|t| t.profile().0 as isize - t.profile().1 as isize).sum();
    if balance != h_star.len() as isize - h.len() as isize {
        return Err(format!("trail balance {balance} differs from |H*| - |H|"));
    }
    Ok(())
}
