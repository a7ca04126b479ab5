//! Vertices, edges, colored graphs and degree-bounded subgraphs.
//!
//! Vertices are dense 0-based ids. Every [`Edge`] is stored canonically with
//! `u < v`, so edge sets have unambiguous set semantics. Graphs keep their edges
//! sorted, and an edge's position in that order is its *edge id*: adjacency
//! lists and trails refer to edges by id.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{precondition, Error, Result};

pub type Vertex = u32;
pub type EdgeId = u32;
pub type EdgeSet = BTreeSet<Edge>;

/// An undirected edge with `u < v`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    u: Vertex,
    v: Vertex,
}

impl Edge {
    /// Builds the canonical edge between `a` and `b`; self-loops are rejected.
    pub fn new(a: Vertex, b: Vertex) -> Result<Edge> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge { u: a, v: b }),
            std::cmp::Ordering::Greater => Ok(Edge { u: b, v: a }),
            std::cmp::Ordering::Equal => Err(precondition(format!("self-loop at vertex {a}"))),
        }
    }

    /// Panicking constructor for literals in tests and fixtures.
    pub fn of(a: Vertex, b: Vertex) -> Edge {
        Edge::new(a, b).expect("edge endpoints must differ")
    }

    pub fn u(self) -> Vertex {
        self.u
    }

    pub fn v(self) -> Vertex {
        self.v
    }

    pub fn contains(self, x: Vertex) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint that is not `x`. `x` must be an endpoint.
    pub fn other(self, x: Vertex) -> Vertex {
        debug_assert!(self.contains(x));
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// Edge color: red edges belong to the planted 2-factor, blue ones only to the
/// background graph.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn is_red(self) -> bool {
        self == Color::Red
    }

    pub fn letter(self) -> char {
        match self {
            Color::Red => 'R',
            Color::Blue => 'B',
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub to: Vertex,
    pub edge: EdgeId,
}

/// Adjacency entry of a [`ColoredGraph`]; the color sits inline so that
/// enumeration never consults a side table.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ColoredIncidence {
    pub to: Vertex,
    pub edge: EdgeId,
    pub color: Color,
}

/// A simple undirected graph without colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<Incidence>>,
}

impl Graph {
    /// Builds a graph on `n` vertices. Duplicate edges collapse into one.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Graph> {
        let set: EdgeSet = edges.into_iter().collect();
        if let Some(e) = set.iter().find(|e| e.v() as usize >= n) {
            return Err(precondition(format!("edge {e} out of range for n = {n}")));
        }
        let edges: Vec<Edge> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            adj[e.u() as usize].push(Incidence { to: e.v(), edge: id as EdgeId });
            adj[e.v() as usize].push(Incidence { to: e.u(), edge: id as EdgeId });
        }
        for list in &mut adj {
            list.sort_by_key(|inc| inc.to);
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().copied().collect()
    }

    pub fn incidences(&self, v: Vertex) -> &[Incidence] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn edge_id(&self, e: Edge) -> Option<EdgeId> {
        self.edges.binary_search(&e).ok().map(|i| i as EdgeId)
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edge_id(e).is_some()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        Edge::new(a, b).map(|e| self.contains(e)).unwrap_or(false)
    }

    /// The graph with vertex `x` renamed to `perm[x]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Graph> {
        check_permutation(perm, self.n)?;
        Graph::new(self.n, self.edges.iter().map(|e| relabel_edge(*e, perm)))
    }
}

/// An observed graph whose edges are marked red (planted) or blue.
///
/// Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    graph: Graph,
    colors: Vec<Color>,
    adj: Vec<Vec<ColoredIncidence>>,
    in_support: Vec<bool>,
}

impl ColoredGraph {
    /// Builds a colored graph. An edge listed both red and blue becomes a
    /// single red edge.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Edge, Color)>) -> Result<ColoredGraph> {
        let mut merged: BTreeMap<Edge, Color> = BTreeMap::new();
        for (e, c) in edges {
            let slot = merged.entry(e).or_insert(c);
            if c.is_red() {
                *slot = Color::Red;
            }
        }
        let graph = Graph::new(n, merged.keys().copied())?;
        let colors: Vec<Color> = merged.values().copied().collect();
        Self::assemble(graph, colors)
    }

    /// Colors `graph` so that exactly the edges of `planted` are red.
    pub fn from_parts(graph: Graph, planted: &EdgeSet) -> Result<ColoredGraph> {
        if let Some(e) = planted.iter().find(|e| !graph.contains(**e)) {
            return Err(precondition(format!("planted edge {e} missing from the graph")));
        }
        let colors = graph
            .edges()
            .iter()
            .map(|e| if planted.contains(e) { Color::Red } else { Color::Blue })
            .collect();
        Self::assemble(graph, colors)
    }

    fn assemble(graph: Graph, colors: Vec<Color>) -> Result<ColoredGraph> {
        let n = graph.n();
        let mut red_degree = vec![0u32; n];
        for (e, c) in graph.edges().iter().zip(&colors) {
            if c.is_red() {
                red_degree[e.u() as usize] += 1;
                red_degree[e.v() as usize] += 1;
            }
        }
        if let Some(v) = red_degree.iter().position(|&d| d != 0 && d != 2) {
            return Err(precondition(format!(
                "red subgraph must have degree 0 or 2 everywhere; vertex {v} has red degree {}",
                red_degree[v]
            )));
        }
        let adj = (0..n as Vertex)
            .map(|v| {
                graph
                    .incidences(v)
                    .iter()
                    .map(|inc| ColoredIncidence { to: inc.to, edge: inc.edge, color: colors[inc.edge as usize] })
                    .collect()
            })
            .collect();
        let in_support = red_degree.iter().map(|&d| d == 2).collect();
        Ok(ColoredGraph { graph, colors, adj, in_support })
    }

    /// The uncolored view handed to estimators.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn edges(&self) -> &[Edge] {
        self.graph.edges()
    }

    pub fn color(&self, id: EdgeId) -> Color {
        self.colors[id as usize]
    }

    pub fn color_of(&self, e: Edge) -> Option<Color> {
        self.graph.edge_id(e).map(|id| self.color(id))
    }

    pub fn incidences(&self, v: Vertex) -> &[ColoredIncidence] {
        &self.adj[v as usize]
    }

    /// Whether `v` lies on the planted 2-factor.
    pub fn in_support(&self, v: Vertex) -> bool {
        self.in_support[v as usize]
    }

    pub fn support_size(&self) -> usize {
        self.in_support.iter().filter(|&&s| s).count()
    }

    pub fn planted_edges(&self) -> EdgeSet {
        self.edges_of(Color::Red)
    }

    pub fn unplanted_edges(&self) -> EdgeSet {
        self.edges_of(Color::Blue)
    }

    fn edges_of(&self, color: Color) -> EdgeSet {
        self.graph
            .edges()
            .iter()
            .zip(&self.colors)
            .filter(|(_, c)| **c == color)
            .map(|(e, _)| *e)
            .collect()
    }

    pub fn red_count(&self) -> usize {
        self.colors.iter().filter(|c| c.is_red()).count()
    }

    pub fn blue_count(&self) -> usize {
        self.colors.len() - self.red_count()
    }

    /// The red subgraph as a [`TwoFactor`].
    pub fn planted_two_factor(&self) -> Result<TwoFactor> {
        TwoFactor::from_edges(self.n(), self.planted_edges())
    }
}

/// A subgraph where every vertex has degree at most two: a vertex-disjoint
/// union of cycles and paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBoundedSubgraph {
    edges: EdgeSet,
    degree: Vec<u8>,
}

impl DegreeBoundedSubgraph {
    pub fn empty(n: usize) -> Self {
        DegreeBoundedSubgraph { edges: EdgeSet::new(), degree: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut h = Self::empty(n);
        for e in edges {
            if e.v() as usize >= n {
                return Err(precondition(format!("edge {e} out of range for n = {n}")));
            }
            h.toggle(e);
        }
        match h.degree.iter().position(|&d| d > 2) {
            Some(v) => Err(precondition(format!("vertex {v} has degree {} > 2", h.degree[v]))),
            None => Ok(h),
        }
    }

    pub fn n(&self) -> usize {
        self.degree.len()
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn into_edges(self) -> EdgeSet {
        self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    pub fn degree(&self, v: Vertex) -> u8 {
        self.degree[v as usize]
    }

    pub fn deg1_count(&self) -> usize {
        self.degree.iter().filter(|&&d| d == 1).count()
    }

    pub fn max_degree(&self) -> u8 {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    /// Adds `e` if absent, removes it if present. Callers are responsible for
    /// keeping degrees at most two; use [`Self::from_edges`] for checked input.
    pub(crate) fn toggle(&mut self, e: Edge) {
        let (u, v) = (e.u() as usize, e.v() as usize);
        if self.edges.remove(&e) {
            self.degree[u] -= 1;
            self.degree[v] -= 1;
        } else {
            self.edges.insert(e);
            self.degree[u] += 1;
            self.degree[v] += 1;
        }
    }

    /// Degree map recomputed from scratch agrees with the cached one.
    pub fn is_consistent(&self) -> bool {
        let mut deg = vec![0u8; self.degree.len()];
        for e in &self.edges {
            deg[e.u() as usize] += 1;
            deg[e.v() as usize] += 1;
        }
        deg == self.degree && deg.iter().all(|&d| d <= 2)
    }
}

/// A vertex-disjoint union of cycles (each of length at least three)
/// spanning its support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoFactor {
    n: usize,
    edges: EdgeSet,
    support: BTreeSet<Vertex>,
}

impl TwoFactor {
    /// Validates that every touched vertex has degree exactly two.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<TwoFactor> {
        let edges: EdgeSet = edges.into_iter().collect();
        let mut deg: BTreeMap<Vertex, u32> = BTreeMap::new();
        for e in &edges {
            if e.v() as usize >= n {
                return Err(precondition(format!("edge {e} out of range for n = {n}")));
            }
            *deg.entry(e.u()).or_default() += 1;
            *deg.entry(e.v()).or_default() += 1;
        }
        if let Some((v, d)) = deg.iter().find(|(_, &d)| d != 2) {
            return Err(precondition(format!("not a 2-factor: vertex {v} has degree {d}")));
        }
        // Simple graphs cannot hold 1- or 2-cycles, so degree 2 everywhere
        // already forces every cycle to have length at least three.
        let support = deg.into_keys().collect();
        Ok(TwoFactor { n, edges, support })
    }

    /// Builds a 2-factor from explicit vertex cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<Vertex>]) -> Result<TwoFactor> {
        let mut edges = EdgeSet::new();
        for cycle in cycles {
            if cycle.len() < 3 {
                return Err(precondition(format!("cycle of length {} < 3", cycle.len())));
            }
            for (i, &a) in cycle.iter().enumerate() {
                let b = cycle[(i + 1) % cycle.len()];
                edges.insert(Edge::new(a, b)?);
            }
        }
        let tf = TwoFactor::from_edges(n, edges)?;
        let listed: usize = cycles.iter().map(Vec::len).sum();
        if listed != tf.support.len() {
            return Err(precondition("cycles are not vertex-disjoint"));
        }
        Ok(tf)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn support(&self) -> &BTreeSet<Vertex> {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The cycles as vertex sequences, each starting at its smallest vertex
    /// and continuing towards the smaller of its two neighbours.
    pub fn cycles(&self) -> Vec<Vec<Vertex>> {
        let mut nbrs: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
        for e in &self.edges {
            nbrs.entry(e.u()).or_default().push(e.v());
            nbrs.entry(e.v()).or_default().push(e.u());
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in &self.support {
            if !seen.insert(start) {
                continue;
            }
            let first = *nbrs[&start].iter().min().unwrap();
            let mut cycle = vec![start];
            let (mut prev, mut cur) = (start, first);
            while cur != start {
                seen.insert(cur);
                cycle.push(cur);
                let ns = &nbrs[&cur];
                let next = if ns[0] == prev { ns[1] } else { ns[0] };
                prev = cur;
                cur = next;
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    pub fn relabel(&self, perm: &[Vertex]) -> Result<TwoFactor> {
        check_permutation(perm, self.n)?;
        TwoFactor::from_edges(self.n, self.edges.iter().map(|e| relabel_edge(*e, perm)))
    }
}

/// `(A \ B) ∪ (B \ A)`.
pub fn symmetric_difference(a: &EdgeSet, b: &EdgeSet) -> EdgeSet {
    a.symmetric_difference(b).copied().collect()
}

/// Fraction of misclassified edges, `|H* Δ Ĥ| / |H*|`.
pub fn risk(h_star: &TwoFactor, h_hat: &EdgeSet) -> Result<f64> {
    if h_star.is_empty() {
        return Err(Error::UndefinedRisk);
    }
    let diff = h_star.edges().symmetric_difference(h_hat).count();
    Ok(diff as f64 / h_star.len() as f64)
}

/// Shape of a valid degree-bounded edge set.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct StructureSummary {
    pub deg1_vertices: usize,
    pub cycles: usize,
    pub paths: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Valid(StructureSummary),
    /// The smallest vertex whose degree exceeds two.
    MaxDegreeViolation { vertex: Vertex, degree: usize },
}

impl Structure {
    pub fn is_valid(&self) -> bool {
        matches!(self, Structure::Valid(_))
    }
}

pub fn validate_structure(h: &EdgeSet) -> Structure {
    let mut nbrs: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for e in h {
        nbrs.entry(e.u()).or_default().push(e.v());
        nbrs.entry(e.v()).or_default().push(e.u());
    }
    if let Some((&v, ns)) = nbrs.iter().find(|(_, ns)| ns.len() > 2) {
        return Structure::MaxDegreeViolation { vertex: v, degree: ns.len() };
    }
    let deg1_vertices = nbrs.values().filter(|ns| ns.len() == 1).count();
    let mut seen = BTreeSet::new();
    let (mut cycles, mut paths) = (0, 0);
    for &start in nbrs.keys() {
        if seen.contains(&start) {
            continue;
        }
        let mut stack = vec![start];
        seen.insert(start);
        let mut has_leaf = false;
        while let Some(x) = stack.pop() {
            has_leaf |= nbrs[&x].len() == 1;
            for &y in &nbrs[&x] {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        if has_leaf {
            paths += 1;
        } else {
            cycles += 1;
        }
    }
    Structure::Valid(StructureSummary { deg1_vertices, cycles, paths })
}

pub fn relabel_edge(e: Edge, perm: &[Vertex]) -> Edge {
    Edge::of(perm[e.u() as usize], perm[e.v() as usize])
}

fn check_permutation(perm: &[Vertex], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(precondition("relabeling must cover every vertex"));
    }
    for &p in perm {
        let slot = seen.get_mut(p as usize).ok_or_else(|| precondition("relabeling out of range"))?;
        if std::mem::replace(slot, true) {
            return Err(precondition("relabeling is not a permutation"));
        }
    }
    Ok(())
}
