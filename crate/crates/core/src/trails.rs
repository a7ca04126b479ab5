//! Bounded-length trail enumeration and `(a, b)`-trail classification.
//!
//! A trail is a walk that never repeats an edge (vertices may repeat). Since
//! graphs are simple, a trail is determined by its vertex sequence, and that
//! sequence is what canonical forms compare:
//!
//! * an open trail is oriented to start at its smaller endpoint;
//! * a closed trail is rotated and oriented to the lexicographically smallest
//!   cyclic vertex sequence, written with its first vertex repeated at the end.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::error::{precondition, Error, Result};
use crate::graph::{Color, ColoredGraph, Edge, EdgeId, Graph, Vertex};

/// Default cap on the number of trails one enumeration may produce.
pub const DEFAULT_TRAIL_CAP: usize = 100_000_000;

/// A trail in canonical orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trail {
    vertices: Vec<Vertex>,
    edges: Vec<EdgeId>,
}

impl Trail {
    /// Builds a trail of `graph` from a vertex sequence and canonicalizes it.
    /// A closed trail lists its first vertex again at the end.
    pub fn from_vertices(graph: &Graph, vertices: &[Vertex]) -> Result<Trail> {
        if vertices.len() < 2 {
            return Err(precondition("a trail needs at least one edge"));
        }
        let mut edges = Vec::with_capacity(vertices.len() - 1);
        for w in vertices.windows(2) {
            let e = Edge::new(w[0], w[1])?;
            let id = graph.edge_id(e).ok_or_else(|| precondition(format!("edge {e} is not in the graph")))?;
            edges.push(id);
        }
        let mut sorted = edges.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(precondition("a trail may not repeat an edge"));
        }
        Ok(Trail::canonical(graph, vertices.to_vec()))
    }

    fn canonical(graph: &Graph, vertices: Vec<Vertex>) -> Trail {
        let vertices = canonical_sequence(&vertices);
        let edges = vertices
            .windows(2)
            .map(|w| graph.edge_id(Edge::of(w[0], w[1])).expect("trail edge present"))
            .collect();
        Trail { vertices, edges }
    }

    /// Vertex sequence in canonical orientation (length = edge count + 1).
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Edge ids, in traversal order.
    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn edges(&self, graph: &Graph) -> Vec<Edge> {
        self.edges.iter().map(|&id| graph.edge(id)).collect()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.first() == self.vertices.last()
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }

    /// `(red, blue)` edge counts.
    pub fn profile(&self, g: &ColoredGraph) -> (usize, usize) {
        let red = self.edges.iter().filter(|&&id| g.color(id).is_red()).count();
        (red, self.edges.len() - red)
    }

    /// Whether no vertex repeats (for closed trails, apart from the closing one).
    pub fn is_path_or_cycle(&self) -> bool {
        let body = if self.is_closed() { &self.vertices[..self.vertices.len() - 1] } else { &self.vertices[..] };
        let mut sorted = body.to_vec();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }
}

/// Canonical orientation of a vertex sequence as described in the module docs.
pub fn canonical_sequence(vertices: &[Vertex]) -> Vec<Vertex> {
    let k = vertices.len() - 1;
    if vertices[0] != vertices[k] {
        if vertices[0] < vertices[k] {
            return vertices.to_vec();
        }
        return vertices.iter().rev().copied().collect();
    }
    let cyc = &vertices[..k];
    let mut best: Option<Vec<Vertex>> = None;
    for start in 0..k {
        for reverse in [false, true] {
            let cand: Vec<Vertex> = (0..=k).map(|i| rotated(cyc, start, i, reverse)).collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap()
}

#[inline]
fn rotated(cyc: &[Vertex], start: usize, i: usize, reverse: bool) -> Vertex {
    let k = cyc.len();
    if reverse {
        cyc[(start + k - i % k) % k]
    } else {
        cyc[(start + i) % k]
    }
}

/// Whether the closed sequence `seq` (first vertex repeated at the end)
/// is already the canonical rotation and direction.
fn is_canonical_closed(seq: &[Vertex]) -> bool {
    let k = seq.len() - 1;
    let cyc = &seq[..k];
    let s = cyc[0];
    if cyc.iter().any(|&v| v < s) {
        return false;
    }
    for start in 0..k {
        if cyc[start] != s {
            continue;
        }
        for reverse in [false, true] {
            if start == 0 && !reverse {
                continue;
            }
            for i in 1..k {
                let c = rotated(cyc, start, i, reverse);
                match c.cmp(&cyc[i]) {
                    std::cmp::Ordering::Less => return false,
                    std::cmp::Ordering::Greater => break,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
    }
    true
}

struct Cap<'a> {
    limit: usize,
    found: &'a AtomicUsize,
}

impl Cap<'_> {
    fn bump(&self, by: usize) -> Result<()> {
        let total = self.found.fetch_add(by, Ordering::Relaxed) + by;
        if total > self.limit {
            Err(Error::TrailExplosion { cap: self.limit })
        } else {
            Ok(())
        }
    }
}

/// Every trail of `graph` with between 1 and `max_len - 1` edges, each once in
/// canonical orientation, sorted by vertex sequence.
pub fn enumerate_trails(graph: &Graph, max_len: usize, cap: usize) -> Result<Vec<Trail>> {
    if max_len < 2 {
        return Err(precondition(format!("trail length bound must be at least 2, got {max_len}")));
    }
    let found = AtomicUsize::new(0);
    let cap = Cap { limit: cap, found: &found };
    let per_start: Vec<Result<Vec<Trail>>> = (0..graph.n() as Vertex)
        .into_par_iter()
        .map_init(|| vec![false; graph.edge_count()], |used, s| trails_from(graph, s, max_len - 1, used, &cap))
        .collect();
    let mut out = Vec::new();
    for r in per_start {
        out.extend(r?);
    }
    Ok(out)
}

/// Depth-first search from `s`. Children are visited in ascending neighbour
/// order and trails are emitted in pre-order, so the output is already sorted
/// by vertex sequence.
fn trails_from(graph: &Graph, s: Vertex, max_edges: usize, used: &mut [bool], cap: &Cap<'_>) -> Result<Vec<Trail>> {
    let mut out = Vec::new();
    let mut verts = vec![s];
    let mut eids: Vec<EdgeId> = Vec::new();
    let mut next = vec![0usize];
    let mut pending = 0usize;
    loop {
        let depth = eids.len();
        let cur = verts[depth];
        let incs = graph.incidences(cur);
        let idx = next[depth];
        if depth < max_edges && idx < incs.len() {
            next[depth] += 1;
            let inc = incs[idx];
            if used[inc.edge as usize] {
                continue;
            }
            used[inc.edge as usize] = true;
            verts.push(inc.to);
            eids.push(inc.edge);
            next.push(0);
            let emit = if inc.to == s { depth + 1 >= 3 && is_canonical_closed(&verts) } else { s < inc.to };
            if emit {
                out.push(Trail { vertices: verts.clone(), edges: eids.clone() });
                pending += 1;
                if pending >= 4096 {
                    cap.bump(pending)?;
                    pending = 0;
                }
            }
        } else {
            if depth == 0 {
                break;
            }
            next.pop();
            verts.pop();
            let e = eids.pop().unwrap();
            used[e as usize] = false;
        }
    }
    cap.bump(pending)?;
    Ok(out)
}

/// `(a, b)` profile of a directed vertex sequence if it is an `(a, b)`-trail:
/// first edge blue, last edge red when `a ≥ 1`, and no two consecutive blue
/// edges meeting at a planted vertex (for closed sequences the wrap-around
/// pair included).
pub fn ab_profile_of_sequence(g: &ColoredGraph, vertices: &[Vertex]) -> Option<(usize, usize)> {
    let colors: Vec<Color> = vertices
        .windows(2)
        .map(|w| g.color_of(Edge::new(w[0], w[1]).ok()?))
        .collect::<Option<_>>()?;
    let k = colors.len();
    if k == 0 || colors[0] != Color::Blue {
        return None;
    }
    let a = colors.iter().filter(|c| c.is_red()).count();
    if a >= 1 && colors[k - 1] != Color::Red {
        return None;
    }
    for i in 1..k {
        if colors[i - 1] == Color::Blue && colors[i] == Color::Blue && g.in_support(vertices[i]) {
            return None;
        }
    }
    let closed = vertices[0] == vertices[k];
    if closed && colors[k - 1] == Color::Blue && g.in_support(vertices[0]) {
        return None;
    }
    Some((a, k - a))
}

/// All directed traversals of a trail: both directions, and for closed
/// trails every rotation.
pub fn traversals(trail: &Trail) -> Vec<Vec<Vertex>> {
    let v = trail.vertices();
    if !trail.is_closed() {
        return vec![v.to_vec(), v.iter().rev().copied().collect()];
    }
    let k = v.len() - 1;
    let cyc = &v[..k];
    let mut out = Vec::with_capacity(2 * k);
    for start in 0..k {
        for reverse in [false, true] {
            out.push((0..=k).map(|i| rotated(cyc, start, i, reverse)).collect());
        }
    }
    out
}

/// The `(a, b)` profile if some traversal of `trail` is an `(a, b)`-trail.
pub fn classify_ab_trail(g: &ColoredGraph, trail: &Trail) -> Option<(usize, usize)> {
    traversals(trail).iter().find_map(|seq| ab_profile_of_sequence(g, seq))
}

/// Number of `(a, b)`-trails starting at `from` (and ending at `to`, if
/// given), counting each directed traversal anchored at `from` once.
pub fn count_ab_trails(
    g: &ColoredGraph,
    a: usize,
    b: usize,
    from: Vertex,
    to: Option<Vertex>,
    max_len: usize,
    cap: usize,
) -> Result<u64> {
    if a + b >= max_len {
        return Err(precondition(format!("a + b = {} must be below the length bound {max_len}", a + b)));
    }
    if from as usize >= g.n() || to.is_some_and(|t| t as usize >= g.n()) {
        return Err(precondition("vertex out of range"));
    }
    if b == 0 {
        return Ok(0);
    }
    let mut st = AbSearch { g, a, b, from, to, cap, count: 0, used: vec![false; g.edges().len()] };
    st.dfs(from, None, 0, 0)?;
    Ok(st.count)
}

struct AbSearch<'a> {
    g: &'a ColoredGraph,
    a: usize,
    b: usize,
    from: Vertex,
    to: Option<Vertex>,
    cap: usize,
    count: u64,
    used: Vec<bool>,
}

impl AbSearch<'_> {
    fn dfs(&mut self, cur: Vertex, last: Option<Color>, reds: usize, blues: usize) -> Result<()> {
        let g = self.g;
        for inc in g.incidences(cur) {
            if self.used[inc.edge as usize] {
                continue;
            }
            let c = inc.color;
            if last.is_none() && c != Color::Blue {
                continue;
            }
            let (r, bl) = if c.is_red() { (reds + 1, blues) } else { (reds, blues + 1) };
            if r > self.a || bl > self.b {
                continue;
            }
            if c == Color::Blue && last == Some(Color::Blue) && g.in_support(cur) {
                continue;
            }
            if r == self.a && bl == self.b {
                let last_ok = self.a == 0 || c.is_red();
                let wrap_ok = !(inc.to == self.from && c == Color::Blue && g.in_support(self.from));
                if last_ok && wrap_ok && self.to.is_none_or(|t| t == inc.to) {
                    self.count += 1;
                    if self.count as usize > self.cap {
                        return Err(Error::TrailExplosion { cap: self.cap });
                    }
                }
                continue;
            }
            self.used[inc.edge as usize] = true;
            self.dfs(inc.to, Some(c), r, bl)?;
            self.used[inc.edge as usize] = false;
        }
        Ok(())
    }
}

/// Whether `graph` has a path between the endpoints of the open path `p`,
/// other than `p` itself, with at most `|p|` edges.
pub fn is_shortcutted(graph: &Graph, p: &Trail) -> Result<bool> {
    if p.is_closed() || !p.is_path_or_cycle() {
        return Err(precondition("is_shortcutted needs an open path without repeated vertices"));
    }
    let (s, t) = p.endpoints();
    Ok(has_alternative_path(graph, p.vertices(), s, t))
}

/// Simple `s`–`t` paths of length at most `|path| - 1`, searched with a
/// distance-to-`t` bound; true on the first one whose vertex sequence differs
/// from `path` in either direction.
fn has_alternative_path(graph: &Graph, path: &[Vertex], s: Vertex, t: Vertex) -> bool {
    let k = path.len() - 1;
    let dist = bounded_bfs(graph, t, k);
    let mut on_path = vec![false; graph.n()];
    let mut seq = vec![s];
    on_path[s as usize] = true;
    let rev: Vec<Vertex> = path.iter().rev().copied().collect();
    fn go(
        graph: &Graph,
        dist: &[usize],
        t: Vertex,
        k: usize,
        on_path: &mut [bool],
        seq: &mut Vec<Vertex>,
        path: &[Vertex],
        rev: &[Vertex],
    ) -> bool {
        let cur = *seq.last().unwrap();
        let depth = seq.len() - 1;
        for inc in graph.incidences(cur) {
            let w = inc.to;
            if on_path[w as usize] || depth + 1 + dist[w as usize] > k {
                continue;
            }
            seq.push(w);
            if w == t {
                if seq[..] != path[..] && seq[..] != rev[..] {
                    return true;
                }
            } else {
                on_path[w as usize] = true;
                if go(graph, dist, t, k, on_path, seq, path, rev) {
                    return true;
                }
                on_path[w as usize] = false;
            }
            seq.pop();
        }
        false
    }
    go(graph, &dist, t, k, &mut on_path, &mut seq, path, &rev)
}

/// Distances from `src` up to `radius`; farther vertices get `usize::MAX / 2`.
pub(crate) fn bounded_bfs(graph: &Graph, src: Vertex, radius: usize) -> Vec<usize> {
    let far = usize::MAX / 2;
    let mut dist = vec![far; graph.n()];
    dist[src as usize] = 0;
    let mut queue = std::collections::VecDeque::from([src]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x as usize];
        if d == radius {
            continue;
        }
        for inc in graph.incidences(x) {
            if dist[inc.to as usize] == far {
                dist[inc.to as usize] = d + 1;
                queue.push_back(inc.to);
            }
        }
    }
    dist
}
