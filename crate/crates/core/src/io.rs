//! Plain-text edge lists.
//!
//! The first line is `n m`, followed by `m` lines `u v c` with `c` either `R`
//! (planted) or `B`. Writers always emit canonical form (`u < v`, edges
//! sorted), so loading and saving a canonical file is byte-for-byte stable.
//! Blank lines and lines starting with `#` are ignored on input.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Color, ColoredGraph, Edge, EdgeSet, TwoFactor, Vertex};

/// An edge list as read from disk, before any structural validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(Edge, Color)>,
}

impl EdgeList {
    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().map(|(e, _)| *e).collect()
    }
}

pub fn parse_edge_list(text: &str) -> Result<EdgeList> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(Error::Parse { line: hline, msg: "header must be `n m`".into() });
    }
    let n: usize = parse_num(parts[0], hline)?;
    let m: usize = parse_num(parts[1], hline)?;
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::Parse { line, msg: "edge lines must be `u v c`".into() });
        }
        let u: Vertex = parse_num(parts[0], line)?;
        let v: Vertex = parse_num(parts[1], line)?;
        let color = match parts[2] {
            "R" => Color::Red,
            "B" => Color::Blue,
            other => return Err(Error::Parse { line, msg: format!("unknown color `{other}`") }),
        };
        if u as usize >= n || v as usize >= n {
            return Err(Error::Parse { line, msg: format!("vertex out of range for n = {n}") });
        }
        let e = Edge::new(u, v).map_err(|_| Error::Parse { line, msg: "self-loop".into() })?;
        edges.push((e, color));
    }
    if edges.len() != m {
        return Err(Error::Parse { line: hline, msg: format!("header declares {m} edges, found {}", edges.len()) });
    }
    Ok(EdgeList { n, edges })
}

fn parse_num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse().map_err(|_| Error::Parse { line, msg: format!("expected a non-negative integer, got `{s}`") })
}

pub fn format_edges<'a>(n: usize, edges: impl IntoIterator<Item = (&'a Edge, Color)>) -> String {
    let mut sorted: Vec<(Edge, Color)> = edges.into_iter().map(|(e, c)| (*e, c)).collect();
    sorted.sort();
    let mut out = format!("{} {}\n", n, sorted.len());
    for (e, c) in sorted {
        let _ = writeln!(out, "{} {} {}", e.u(), e.v(), c.letter());
    }
    out
}

pub fn format_graph(g: &ColoredGraph) -> String {
    format_edges(g.n(), g.edges().iter().enumerate().map(|(i, e)| (e, g.color(i as u32))))
}

pub fn parse_graph(text: &str) -> Result<ColoredGraph> {
    let list = parse_edge_list(text)?;
    ColoredGraph::new(list.n, list.edges)
}

/// Writes a 2-factor with every edge colored `R`.
pub fn format_two_factor(h: &TwoFactor) -> String {
    format_edges(h.n(), h.edges().iter().map(|e| (e, Color::Red)))
}

pub fn parse_two_factor(text: &str) -> Result<TwoFactor> {
    let list = parse_edge_list(text)?;
    TwoFactor::from_edges(list.n, list.edge_set())
}

/// Writes an arbitrary edge set, red where `red` says so and blue otherwise.
pub fn format_edge_set(n: usize, edges: &EdgeSet, red: impl Fn(&Edge) -> bool) -> String {
    format_edges(n, edges.iter().map(|e| (e, if red(e) { Color::Red } else { Color::Blue })))
}
