//! Balanced alternating cycles above the recovery threshold.
//!
//! The construction has three stages:
//!
//! 1. [`reserve_edges`] sets aside `⌊γn⌋` planted edges, pairwise at distance
//!    at least two in `H*`, whose endpoints leave the available set `A`.
//! 2. [`build_trees`] grows two-sided trees inside `A`: each side branches from
//!    a hub through non-shortcutted `(m*, m*)`-paths, and every explored hub
//!    prunes its radius-`2m*` ball from `A`.
//! 3. [`link_trees`] joins trees through reserved edges with five-edge
//!    connectors (hub, blue, reserved red, blue, reserved red, blue, hub), and
//!    [`extract_balanced_cycles`] maps directed cycles of the resulting link
//!    graph back to cycles of `G`.
//!
//! Every layer and connector has as many red as blue edges, as does a full
//! tree traversal together with its center edge and one connector, so the
//! cycles are balanced: `H* Δ C` is another 2-factor of the same size.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{precondition, Result};
use crate::graph::{Color, ColoredGraph, Edge, TwoFactor, Vertex};
use crate::sampler::planted_count;
use crate::trails::{is_shortcutted, Trail};

/// Reserved planted edges and the vertices left available for trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReservedEdgeSet {
    pub edges: Vec<Edge>,
    pub available: BTreeSet<Vertex>,
}

impl ReservedEdgeSet {
    /// The endpoint that faces a tree (the smaller one).
    pub fn tree_facing(e: Edge) -> Vertex {
        e.u()
    }

    /// The endpoint used to link to another reserved edge (the larger one).
    pub fn linking(e: Edge) -> Vertex {
        e.v()
    }
}

/// Reserves `⌊γn⌋` planted edges. Each pick is the smallest remaining edge;
/// it and every planted edge touching its endpoints or their planted
/// neighbours leave the pool, which costs at most five edges per pick.
pub fn reserve_edges(h_star: &TwoFactor, gamma: f64) -> Result<ReservedEdgeSet> {
    let n = h_star.n();
    let delta = h_star.support().len() as f64 / n as f64;
    if !(gamma >= 0.0) || gamma > delta / 5.0 + 1e-12 {
        return Err(precondition(format!("gamma = {gamma} exceeds delta / 5 = {}", delta / 5.0)));
    }
    let count = planted_count(n, gamma);
    let mut nbrs: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for e in h_star.edges() {
        nbrs.entry(e.u()).or_default().push(e.v());
        nbrs.entry(e.v()).or_default().push(e.u());
    }
    let mut pool: BTreeSet<Edge> = h_star.edges().clone();
    let mut edges = Vec::with_capacity(count);
    for _ in 0..count {
        let e = *pool.iter().next().ok_or_else(|| precondition("reserved-edge pool exhausted"))?;
        edges.push(e);
        let mut near: BTreeSet<Vertex> = [e.u(), e.v()].into();
        for x in [e.u(), e.v()] {
            near.extend(nbrs[&x].iter().copied());
        }
        for &x in &near {
            for &y in &nbrs[&x] {
                pool.remove(&Edge::of(x, y));
            }
        }
    }
    let used: BTreeSet<Vertex> = edges.iter().flat_map(|e| [e.u(), e.v()]).collect();
    let available = (0..n as Vertex).filter(|v| !used.contains(v)).collect();
    Ok(ReservedEdgeSet { edges, available })
}

/// One side of a two-sided tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeSide {
    pub root: Vertex,
    /// Hubs in discovery order, root first.
    pub hubs: Vec<Vertex>,
    /// For every non-root hub, the path layer from its parent hub to it.
    pub layers: BTreeMap<Vertex, Vec<Vertex>>,
}

impl TreeSide {
    pub fn hub_count(&self) -> usize {
        self.hubs.len()
    }

    /// Vertex sequence from `hub` up to the root.
    pub fn route_to_root(&self, hub: Vertex) -> Vec<Vertex> {
        let mut route = vec![hub];
        let mut cur = hub;
        while cur != self.root {
            let layer = &self.layers[&cur];
            route.extend(layer.iter().rev().skip(1));
            cur = layer[0];
        }
        route
    }

    /// Every vertex on some layer of this side.
    pub fn vertices(&self) -> BTreeSet<Vertex> {
        let mut vs: BTreeSet<Vertex> = [self.root].into();
        for layer in self.layers.values() {
            vs.extend(layer.iter().copied());
        }
        vs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSidedTree {
    /// Iteration of [`build_trees`] that produced the tree.
    pub iteration: usize,
    /// Planted center edge as `(left root, right root)`.
    pub center: (Vertex, Vertex),
    pub left: TreeSide,
    pub right: TreeSide,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeBuildResult {
    pub trees: Vec<TwoSidedTree>,
    /// No planted edge with both endpoints available was left.
    pub failed: bool,
    /// Iterations attempted (at most `⌊γn/ℓ⌋`).
    pub iterations: usize,
    /// `|A|` after each iteration.
    pub available_trace: Vec<usize>,
    /// For each iteration, the vertices pruned from `A` in it.
    pub pruned: Vec<BTreeSet<Vertex>>,
    pub available: BTreeSet<Vertex>,
}

/// Grows up to `⌊γn/ℓ⌋` two-sided trees whose sides each reach `2ℓ` hubs.
pub fn build_trees<R: Rng + ?Sized>(
    g: &ColoredGraph,
    available: &BTreeSet<Vertex>,
    m_star: usize,
    ell: usize,
    gamma: f64,
    rng: &mut R,
) -> Result<TreeBuildResult> {
    if m_star == 0 || ell == 0 || available.is_empty() {
        return Err(precondition("build_trees needs m* >= 1, ell >= 1 and a nonempty available set"));
    }
    let n = g.n();
    let mut avail = vec![false; n];
    for &v in available {
        avail[v as usize] = true;
    }
    let k = (gamma * n as f64 / ell as f64 + 1e-9).floor() as usize;
    let mut out = TreeBuildResult {
        trees: Vec::new(),
        failed: false,
        iterations: 0,
        available_trace: Vec::with_capacity(k),
        pruned: Vec::with_capacity(k),
        available: BTreeSet::new(),
    };
    let planted: Vec<Edge> = g.planted_edges().into_iter().collect();
    for _ in 0..k {
        let candidates: Vec<Edge> =
            planted.iter().copied().filter(|e| avail[e.u() as usize] && avail[e.v() as usize]).collect();
        if candidates.is_empty() {
            out.failed = true;
            break;
        }
        let iteration = out.iterations;
        out.iterations += 1;
        let c = candidates[rng.random_range(0..candidates.len())];
        let (u0, u1) = if rng.random::<bool>() { (c.u(), c.v()) } else { (c.v(), c.u()) };
        let mut pruned = BTreeSet::new();
        for x in [u0, u1] {
            avail[x as usize] = false;
            pruned.insert(x);
        }
        let left = grow_side(g, &mut avail, &mut pruned, u0, m_star, ell)?;
        if left.hub_count() >= 2 * ell {
            let right = grow_side(g, &mut avail, &mut pruned, u1, m_star, ell)?;
            if right.hub_count() >= 2 * ell {
                out.trees.push(TwoSidedTree { iteration, center: (u0, u1), left, right });
            }
        }
        out.available_trace.push(avail.iter().filter(|&&a| a).count());
        out.pruned.push(pruned);
    }
    out.available = (0..n as Vertex).filter(|&v| avail[v as usize]).collect();
    Ok(out)
}

fn grow_side(
    g: &ColoredGraph,
    avail: &mut [bool],
    pruned: &mut BTreeSet<Vertex>,
    root: Vertex,
    m_star: usize,
    ell: usize,
) -> Result<TreeSide> {
    let mut side = TreeSide { root, hubs: vec![root], layers: BTreeMap::new() };
    let mut queue = VecDeque::from([root]);
    let mut s = 1usize;
    while s < 2 * ell {
        let Some(u) = queue.pop_front() else { break };
        let children = descendants(g, avail, u, m_star)?;
        let snapshot = avail.to_vec();
        for v in ball_within(g, &snapshot, u, 2 * m_star) {
            avail[v as usize] = false;
            pruned.insert(v);
        }
        s += children.len();
        for (v, path) in children {
            side.hubs.push(v);
            side.layers.insert(v, path);
            queue.push_back(v);
        }
    }
    Ok(side)
}

/// Endpoints `v` of non-shortcutted `(m*, m*)`-paths from `u` whose vertices
/// other than `u` are all available, with the path to each.
pub fn descendants(g: &ColoredGraph, avail: &[bool], u: Vertex, m_star: usize) -> Result<Vec<(Vertex, Vec<Vertex>)>> {
    let mut paths: BTreeMap<Vertex, Vec<Vec<Vertex>>> = BTreeMap::new();
    let mut seq = vec![u];
    let mut on = BTreeSet::from([u]);
    collect_mm_paths(g, avail, m_star, &mut seq, &mut on, None, 0, 0, &mut paths);
    let mut out = Vec::new();
    for (v, ps) in paths {
        if ps.len() != 1 {
            // Two equal-length paths shortcut each other.
            continue;
        }
        let path = ps.into_iter().next().unwrap();
        let trail = Trail::from_vertices(g.graph(), &path)?;
        if !is_shortcutted(g.graph(), &trail)? {
            out.push((v, path));
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn collect_mm_paths(
    g: &ColoredGraph,
    avail: &[bool],
    m: usize,
    seq: &mut Vec<Vertex>,
    on: &mut BTreeSet<Vertex>,
    last: Option<Color>,
    reds: usize,
    blues: usize,
    out: &mut BTreeMap<Vertex, Vec<Vec<Vertex>>>,
) {
    let cur = *seq.last().unwrap();
    for inc in g.incidences(cur) {
        let w = inc.to;
        if on.contains(&w) || !avail[w as usize] {
            continue;
        }
        let c = inc.color;
        if last.is_none() && c != Color::Blue {
            continue;
        }
        if c == Color::Blue && last == Some(Color::Blue) && g.in_support(cur) {
            continue;
        }
        let (r, b) = if c.is_red() { (reds + 1, blues) } else { (reds, blues + 1) };
        if r > m || b > m {
            continue;
        }
        seq.push(w);
        if r == m && b == m {
            if c.is_red() {
                out.entry(w).or_default().push(seq.clone());
            }
        } else {
            on.insert(w);
            collect_mm_paths(g, avail, m, seq, on, Some(c), r, b, out);
            on.remove(&w);
        }
        seq.pop();
    }
}

/// Vertices reachable from `u` by a path of length at most `radius` whose
/// vertices other than `u` are all available in `avail`.
fn ball_within(g: &ColoredGraph, avail: &[bool], u: Vertex, radius: usize) -> Vec<Vertex> {
    let mut dist: BTreeMap<Vertex, usize> = BTreeMap::from([(u, 0)]);
    let mut queue = VecDeque::from([u]);
    let mut out = Vec::new();
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d == radius {
            continue;
        }
        for inc in g.incidences(x) {
            let w = inc.to;
            if avail[w as usize] && !dist.contains_key(&w) {
                dist.insert(w, d + 1);
                out.push(w);
                queue.push_back(w);
            }
        }
    }
    out
}

/// A reserved edge assigned to a tree side, with the hub joined by a blue
/// edge to its tree-facing endpoint.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Attachment {
    pub edge: Edge,
    pub hub: Vertex,
}

/// Arc `from → to`: side `R_from` links to side `L_to` by a blue edge between
/// the linking endpoints of `right` and `left`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct LinkArc {
    pub from: usize,
    pub to: usize,
    pub right: Attachment,
    pub left: Attachment,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkGraph {
    /// Indices of admitted trees.
    pub trees: Vec<usize>,
    /// Per admitted tree, its `d` left and `d` right attachments.
    pub attachments: BTreeMap<usize, (Vec<Attachment>, Vec<Attachment>)>,
    pub arcs: Vec<LinkArc>,
    pub left_half: Vec<Edge>,
    pub right_half: Vec<Edge>,
}

impl LinkGraph {
    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// Edges of the bipartite view: the red matching `(i, i)` for every
    /// admitted tree and a blue edge `(to, from)` (left copy, right copy) per arc.
    pub fn bipartite_blue_edges(&self) -> Vec<(usize, usize)> {
        self.arcs.iter().map(|a| (a.to, a.from)).collect()
    }
}

/// Splits `E*` at random, admits trees whose sides each reach `d` unmarked
/// reserved edges, and records the blue links between admitted trees.
pub fn link_trees<R: Rng + ?Sized>(
    g: &ColoredGraph,
    trees: &[TwoSidedTree],
    reserved: &ReservedEdgeSet,
    d: usize,
    rng: &mut R,
) -> Result<LinkGraph> {
    if reserved.edges.len() % 2 != 0 {
        return Err(precondition("the number of reserved edges must be even"));
    }
    if d == 0 {
        return Err(precondition("d must be at least 1"));
    }
    let mut shuffled = reserved.edges.clone();
    shuffled.shuffle(rng);
    let half = shuffled.len() / 2;
    let mut left_half = shuffled[..half].to_vec();
    let mut right_half = shuffled[half..].to_vec();
    left_half.sort_unstable();
    right_half.sort_unstable();
    link_with_partition(g, trees, left_half, right_half, d)
}

/// [`link_trees`] with a fixed partition of the reserved edges.
pub fn link_with_partition(
    g: &ColoredGraph,
    trees: &[TwoSidedTree],
    left_half: Vec<Edge>,
    right_half: Vec<Edge>,
    d: usize,
) -> Result<LinkGraph> {
    let mut marked: BTreeSet<Edge> = BTreeSet::new();
    let mut link = LinkGraph {
        trees: Vec::new(),
        attachments: BTreeMap::new(),
        arcs: Vec::new(),
        left_half: left_half.clone(),
        right_half: right_half.clone(),
    };
    for (i, t) in trees.iter().enumerate() {
        let l = connections(g, &t.left, &left_half, &marked, d);
        let r = connections(g, &t.right, &right_half, &marked, d);
        if l.len() >= d && r.len() >= d {
            let (l, r) = (l[..d].to_vec(), r[..d].to_vec());
            marked.extend(l.iter().chain(&r).map(|a| a.edge));
            link.trees.push(i);
            link.attachments.insert(i, (l, r));
        }
    }
    for &i in &link.trees {
        for &j in &link.trees {
            let rights = &link.attachments[&i].1;
            let lefts = &link.attachments[&j].0;
            let found = rights.iter().find_map(|ra| {
                lefts.iter().find_map(|la| {
                    let (x, y) = (ReservedEdgeSet::linking(ra.edge), ReservedEdgeSet::linking(la.edge));
                    (g.color_of(Edge::new(x, y).ok()?) == Some(Color::Blue)).then_some((*ra, *la))
                })
            });
            if let Some((right, left)) = found {
                link.arcs.push(LinkArc { from: i, to: j, right, left });
            }
        }
    }
    Ok(link)
}

/// Unmarked reserved edges (ascending) whose tree-facing endpoint has a blue
/// edge to a hub of `side`, each with the smallest such hub. Stops after `d`.
fn connections(g: &ColoredGraph, side: &TreeSide, half: &[Edge], marked: &BTreeSet<Edge>, d: usize) -> Vec<Attachment> {
    let hubs: BTreeSet<Vertex> = side.hubs.iter().copied().collect();
    let mut out = Vec::new();
    for &e in half {
        if out.len() == d {
            break;
        }
        if marked.contains(&e) {
            continue;
        }
        let t = ReservedEdgeSet::tree_facing(e);
        let hub = g
            .incidences(t)
            .iter()
            .filter(|inc| inc.color == Color::Blue && hubs.contains(&inc.to))
            .map(|inc| inc.to)
            .min();
        if let Some(hub) = hub {
            out.push(Attachment { edge: e, hub });
        }
    }
    out
}

/// A cycle of `G` listed without repeating its first vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedCycle {
    pub vertices: Vec<Vertex>,
    pub colors: Vec<Color>,
    /// Tree indices in visiting order.
    pub trees: Vec<usize>,
}

impl BalancedCycle {
    pub fn edges(&self) -> Vec<Edge> {
        let k = self.vertices.len();
        (0..k).map(|i| Edge::of(self.vertices[i], self.vertices[(i + 1) % k])).collect()
    }

    pub fn red_count(&self) -> usize {
        self.colors.iter().filter(|c| c.is_red()).count()
    }

    pub fn blue_count(&self) -> usize {
        self.colors.len() - self.red_count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleExtraction {
    pub cycles: Vec<BalancedCycle>,
    /// Link-graph cycles whose preimage failed validation.
    pub rejected: usize,
    /// Link-graph cycles examined.
    pub examined: usize,
}

/// Maps directed cycles of the link graph (at most `limit` of them) to cycles
/// of `G`, keeping those that are vertex-simple and balanced and whose
/// symmetric difference with `H*` is a 2-factor of the same size.
pub fn extract_balanced_cycles(
    link: &LinkGraph,
    trees: &[TwoSidedTree],
    g: &ColoredGraph,
    h_star: &TwoFactor,
    limit: usize,
) -> CycleExtraction {
    let mut out = CycleExtraction { cycles: Vec::new(), rejected: 0, examined: 0 };
    let mut succ: BTreeMap<usize, Vec<&LinkArc>> = BTreeMap::new();
    for a in &link.arcs {
        succ.entry(a.from).or_default().push(a);
    }
    let arc_cycles = directed_cycles(&link.trees, &succ, limit);
    for arcs in arc_cycles {
        out.examined += 1;
        match preimage(&arcs, trees, g) {
            Some(c) if validate_cycle(&c, g, h_star).is_ok() => out.cycles.push(c),
            _ => out.rejected += 1,
        }
    }
    out
}

/// Simple directed cycles, each listed once from its smallest node.
fn directed_cycles<'a>(
    nodes: &[usize],
    succ: &BTreeMap<usize, Vec<&'a LinkArc>>,
    limit: usize,
) -> Vec<Vec<&'a LinkArc>> {
    let mut out = Vec::new();
    for &s in nodes {
        let mut path: Vec<&LinkArc> = Vec::new();
        let mut on = BTreeSet::from([s]);
        dfs_cycles(s, s, succ, &mut path, &mut on, &mut out, limit);
        if out.len() >= limit {
            break;
        }
    }
    out
}

fn dfs_cycles<'a>(
    s: usize,
    cur: usize,
    succ: &BTreeMap<usize, Vec<&'a LinkArc>>,
    path: &mut Vec<&'a LinkArc>,
    on: &mut BTreeSet<usize>,
    out: &mut Vec<Vec<&'a LinkArc>>,
    limit: usize,
) {
    let Some(arcs) = succ.get(&cur) else { return };
    for &a in arcs {
        if out.len() >= limit {
            return;
        }
        if a.to == s {
            path.push(a);
            out.push(path.clone());
            path.pop();
        } else if a.to > s && !on.contains(&a.to) {
            on.insert(a.to);
            path.push(a);
            dfs_cycles(s, a.to, succ, path, on, out, limit);
            path.pop();
            on.remove(&a.to);
        }
    }
}

fn preimage(arcs: &[&LinkArc], trees: &[TwoSidedTree], g: &ColoredGraph) -> Option<BalancedCycle> {
    let k = arcs.len();
    let mut vertices = Vec::new();
    let mut order = Vec::with_capacity(k);
    for t in 0..k {
        let enter = arcs[(t + k - 1) % k].left;
        let exit = arcs[t].right;
        let i = arcs[t].from;
        order.push(i);
        let tree = &trees[i];
        // Entry hub up to the left root, across the center, down to the exit hub.
        vertices.extend(tree.left.route_to_root(enter.hub));
        let mut down = tree.right.route_to_root(exit.hub);
        down.reverse();
        vertices.extend(down);
        // Connector towards the next tree's left side.
        let next_left = arcs[t].left;
        vertices.push(ReservedEdgeSet::tree_facing(exit.edge));
        vertices.push(ReservedEdgeSet::linking(exit.edge));
        vertices.push(ReservedEdgeSet::linking(next_left.edge));
        vertices.push(ReservedEdgeSet::tree_facing(next_left.edge));
    }
    let m = vertices.len();
    let colors = (0..m)
        .map(|i| g.color_of(Edge::new(vertices[i], vertices[(i + 1) % m]).ok()?))
        .collect::<Option<Vec<Color>>>()?;
    Some(BalancedCycle { vertices, colors, trees: order })
}

/// Checks that `c` is a vertex-simple cycle of `g` with as many red as blue
/// edges and that `H* Δ C` is a 2-factor with `|H*|` edges.
pub fn validate_cycle(c: &BalancedCycle, g: &ColoredGraph, h_star: &TwoFactor) -> std::result::Result<(), String> {
    let k = c.vertices.len();
    if k < 3 {
        return Err("cycle too short".into());
    }
    let distinct: BTreeSet<Vertex> = c.vertices.iter().copied().collect();
    if distinct.len() != k {
        return Err("cycle repeats a vertex".into());
    }
    for (e, col) in c.edges().iter().zip(&c.colors) {
        if g.color_of(*e) != Some(*col) {
            return Err(format!("edge {e} is missing or miscolored"));
        }
    }
    if c.red_count() != c.blue_count() {
        return Err(format!("{} red against {} blue edges", c.red_count(), c.blue_count()));
    }
    let diff = crate::graph::symmetric_difference(h_star.edges(), &c.edges().into_iter().collect());
    match TwoFactor::from_edges(h_star.n(), diff) {
        Ok(tf) if tf.len() == h_star.len() => Ok(()),
        Ok(_) => Err("H* Δ C has a different size".into()),
        Err(e) => Err(format!("H* Δ C is not a 2-factor: {e}")),
    }
}

/// Red perfect matching on `k + k` nodes with each left–right pair joined by
/// a blue edge independently with probability `min(1, D/k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteLinkModel {
    pub k: usize,
    /// `blue[i]` lists the right nodes `j` joined to left node `i`.
    pub blue: Vec<Vec<usize>>,
}

pub fn sample_bipartite<R: Rng + ?Sized>(k: usize, mean_degree: f64, rng: &mut R) -> Result<BipartiteLinkModel> {
    if k == 0 || !(mean_degree >= 0.0) {
        return Err(precondition("need k >= 1 and a non-negative mean degree"));
    }
    let p = (mean_degree / k as f64).min(1.0);
    let blue = (0..k).map(|_| (0..k).filter(|_| rng.random::<f64>() < p).collect()).collect();
    Ok(BipartiteLinkModel { k, blue })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct AlternatingCycleStats {
    /// Alternating cycles found, up to the cap.
    pub count: u64,
    pub capped: bool,
    /// Edge length of the longest cycle found.
    pub longest: usize,
}

/// Alternating cycles of the bipartite model. A cycle alternates red
/// `(i_L, i_R)` and blue `(j_L, i_R)` edges, so it corresponds to a directed
/// cycle on `0..k` with an arc `i → j` for each blue edge `(j_L, i_R)`.
pub fn count_alternating_cycles(model: &BipartiteLinkModel, cap: u64) -> AlternatingCycleStats {
    let k = model.k;
    let mut succ = vec![Vec::new(); k];
    for (j, rights) in model.blue.iter().enumerate() {
        for &i in rights {
            succ[i].push(j);
        }
    }
    for s in &mut succ {
        s.sort_unstable();
    }
    let mut stats = AlternatingCycleStats { count: 0, capped: false, longest: 0 };
    let mut on = vec![false; k];
    for s in 0..k {
        on[s] = true;
        count_from(s, s, 1, &succ, &mut on, &mut stats, cap);
        on[s] = false;
        if stats.capped {
            break;
        }
    }
    stats
}

fn count_from(
    s: usize,
    cur: usize,
    len: usize,
    succ: &[Vec<usize>],
    on: &mut [bool],
    stats: &mut AlternatingCycleStats,
    cap: u64,
) {
    for &j in &succ[cur] {
        if stats.capped {
            return;
        }
        if j == s {
            stats.count += 1;
            stats.longest = stats.longest.max(2 * len);
            if stats.count >= cap {
                stats.capped = true;
            }
        } else if j > s && !on[j] {
            on[j] = true;
            count_from(s, j, len + 1, succ, on, stats, cap);
            on[j] = false;
        }
    }
}

/// Samples the bipartite model and counts its alternating cycles.
pub fn bipartite_alternating_cycles<R: Rng + ?Sized>(
    k: usize,
    mean_degree: f64,
    cap: u64,
    rng: &mut R,
) -> Result<AlternatingCycleStats> {
    let model = sample_bipartite(k, mean_degree, rng)?;
    Ok(count_alternating_cycles(&model, cap))
}

/// Theoretical tree size and degree parameters, reported but never enforced:
/// `ℓ = 2^14 ln(32e) α / (λ² γ²)` and `d = 2^11 ln(32e) α / (λ γ)`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct AsymptoticParams {
    pub ell: f64,
    pub d: f64,
}

pub fn asymptotic_params(lambda: f64, gamma: f64, alpha: f64) -> AsymptoticParams {
    let c = (32.0 * std::f64::consts::E).ln();
    AsymptoticParams {
        ell: 16384.0 * c * alpha / (lambda * lambda * gamma * gamma),
        d: 2048.0 * c * alpha / (lambda * gamma),
    }
}

/// Parameters of a full construction run.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct AdversaryConfig {
    pub gamma: f64,
    pub ell: usize,
    pub d: usize,
    pub m_star: usize,
    pub cycle_limit: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdversaryRun {
    pub reserved: ReservedEdgeSet,
    pub build: TreeBuildResult,
    pub link: LinkGraph,
    pub extraction: CycleExtraction,
}

/// Runs all three stages. An odd number of reserved edges is made even by
/// dropping the last one.
pub fn run_adversary<R: Rng + ?Sized>(
    g: &ColoredGraph,
    h_star: &TwoFactor,
    cfg: &AdversaryConfig,
    rng: &mut R,
) -> Result<AdversaryRun> {
    let mut reserved = reserve_edges(h_star, cfg.gamma)?;
    if reserved.edges.len() % 2 == 1 {
        // The dropped edge's endpoints stay out of A.
        reserved.edges.pop();
    }
    let build = build_trees(g, &reserved.available, cfg.m_star, cfg.ell, cfg.gamma, rng)?;
    let link = link_trees(g, &build.trees, &reserved, cfg.d, rng)?;
    let extraction = extract_balanced_cycles(&link, &build.trees, g, h_star, cfg.cycle_limit);
    Ok(AdversaryRun { reserved, build, link, extraction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn reserve_on_a_fifteen_cycle() {
        let h = TwoFactor::from_cycles(15, &[(0..15).collect()]).unwrap();
        let one = reserve_edges(&h, 1.0 / 15.0).unwrap();
        assert_eq!(one.edges.len(), 1);
        assert_eq!(one.available.len(), 13);
        let three = reserve_edges(&h, 0.2).unwrap();
        assert_eq!(three.edges.len(), 3);
        let ends: Vec<Vertex> = three.edges.iter().flat_map(|e| [e.u(), e.v()]).collect();
        for (i, &a) in ends.iter().enumerate() {
            for &b in &ends[i + 1..] {
                assert!(a != b);
                if three.edges.iter().all(|e| *e != Edge::of(a, b)) {
                    assert!(!h.edges().contains(&Edge::of(a, b)), "{a} and {b} adjacent in H*");
                }
            }
        }
        assert!(reserve_edges(&h, 0.25).is_err());
    }

    #[test]
    fn no_background_means_no_trees() {
        let h = TwoFactor::from_cycles(30, &[(0..30).collect()]).unwrap();
        let g = ColoredGraph::from_parts(crate::graph::Graph::new(30, h.edges().iter().copied()).unwrap(), h.edges())
            .unwrap();
        let res = reserve_edges(&h, 0.1).unwrap();
        let mut rng = rng_from_seed(1);
        let built = build_trees(&g, &res.available, 1, 1, 0.1, &mut rng).unwrap();
        assert!(built.trees.is_empty());
    }

    #[test]
    fn complete_bipartite_counts() {
        let model = BipartiteLinkModel { k: 8, blue: vec![(0..8).collect(); 8] };
        let stats = count_alternating_cycles(&model, u64::MAX);
        assert_eq!(stats.count, 16072);
        assert_eq!(stats.longest, 16);
        let mut rng = rng_from_seed(2);
        assert_eq!(bipartite_alternating_cycles(10, 0.0, 100, &mut rng).unwrap().count, 0);
    }

    #[test]
    fn asymptotic_params_constant() {
        let p = asymptotic_params(1.0, 1.0, 1.0);
        assert!((p.ell / 16384.0 - 4.4657).abs() < 1e-3);
        assert!((p.d / 2048.0 - 4.4657).abs() < 1e-3);
    }
}
