//! Exhaustive search over small nat-mode graphs.
//!
//! Connected unlabelled shapes are grown one edge at a time from the single
//! edge and the self-loop: every connected graph with `m >= 2` edges loses an
//! edge (a self-loop, an edge on an undirected cycle, or a pendant edge) and
//! stays connected, so each shape is reached from some shape with `m - 1`
//! edges. Shapes are filtered by girth as they grow, since removing edges
//! never shortens a loop. Each shape then receives every positive labelling
//! of each weight, and whole graphs are multisets of labelled components.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::canon::{canonical_connected, canonical_graph, iso_key, IsoKey, Triples};
use crate::extremal::{acyclic_bound, loop_bound, BoundError, BoundParams};
use crate::graph::{Edge, Graph};
use crate::paths::count_k_paths;
use crate::semiring::Mode;
use crate::tsv::write_graph;

/// At most this many argmax graphs are kept in a report.
pub const ARGMAX_KEEP: usize = 64;

/// Which loops the enumerated graphs may contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopFilter {
    /// Every loop has length at least this.
    MinGirth(usize),
    Acyclic,
}

impl LoopFilter {
    /// Whether a loop of length `len` is allowed.
    fn admits(self, len: usize) -> bool {
        match self {
            LoopFilter::MinGirth(g) => len >= g,
            LoopFilter::Acyclic => false,
        }
    }
}

/// A connected labelled graph on `0..vertices` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Class {
    weight: u64,
    vertices: usize,
    edges: Triples<u32>,
}

/// Connected shapes with up to `max_edges` edges, indexed by edge count.
fn connected_shapes(
    max_edges: usize,
    max_vertices: usize,
    filter: LoopFilter,
) -> Vec<Vec<(usize, Triples<u32>)>> {
    let mut levels: Vec<Vec<(usize, Triples<u32>)>> = vec![Vec::new()];
    if max_edges == 0 {
        return levels;
    }
    let mut first = Vec::new();
    if filter.admits(1) {
        first.push((1, vec![(0, 0, 1)]));
    }
    if max_vertices >= 2 {
        first.push((2, vec![(0, 1, 1)]));
    }
    levels.push(first);
    for _ in 2..=max_edges {
        let grown: BTreeSet<(usize, Triples<u32>)> = levels
            .last()
            .unwrap()
            .par_iter()
            .flat_map_iter(|(n, edges)| extensions(*n, edges, max_vertices, filter))
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        levels.push(grown.into_iter().collect());
    }
    levels
}

/// Canonical shapes obtained by adding one edge to `(n, edges)`.
fn extensions(
    n: usize,
    edges: &[(usize, usize, u32)],
    max_vertices: usize,
    filter: LoopFilter,
) -> Vec<(usize, Triples<u32>)> {
    let mut out = Vec::new();
    let mut adj = vec![Vec::new(); n];
    for &(s, t, _) in edges {
        adj[s].push(t);
    }
    let push = |out: &mut Vec<(usize, Triples<u32>)>, n: usize, s: usize, t: usize| {
        let mut e = edges.to_vec();
        e.push((s, t, 1));
        out.push((n, canonical_connected(n, &e)));
    };
    let dist: Vec<Vec<Option<usize>>> = (0..n).map(|v| distances_from(&adj, v)).collect();
    for s in 0..n {
        for (t, from_t) in dist.iter().enumerate() {
            if adj[s].contains(&t) {
                continue;
            }
            // the new edge s -> t closes loops of length 1 + dist(t, s)
            if let Some(d) = from_t[s] {
                if !filter.admits(d + 1) {
                    continue;
                }
            }
            push(&mut out, n, s, t);
        }
    }
    if n < max_vertices {
        for v in 0..n {
            push(&mut out, n + 1, v, n);
            push(&mut out, n + 1, n, v);
        }
    }
    out
}

fn distances_from(adj: &[Vec<usize>], from: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[from] = Some(0);
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        for &w in &adj[u] {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Ordered compositions of `total` into `parts` positive integers.
fn compositions(total: u64, parts: usize) -> Vec<Vec<u32>> {
    fn go(left: u64, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let max = left.saturating_sub(parts as u64 - 1);
        for x in 1..=max {
            cur.push(x as u32);
            go(left - x, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, &mut Vec::new(), &mut out);
    out
}

/// Every labelled connected class with weight at most `weight`.
fn connected_classes(weight: u64, max_vertices: usize, filter: LoopFilter) -> Vec<Class> {
    let shapes = connected_shapes(weight as usize, max_vertices, filter);
    let mut classes: Vec<Class> = shapes
        .par_iter()
        .enumerate()
        .flat_map_iter(|(m, level)| level.iter().map(move |shape| (m, shape)))
        .flat_map_iter(|(m, (n, edges))| {
            let mut found = BTreeSet::new();
            for w in m as u64..=weight {
                for labels in compositions(w, m) {
                    let labelled: Triples<u32> = edges
                        .iter()
                        .zip(&labels)
                        .map(|(&(s, t, _), &l)| (s, t, l))
                        .collect();
                    found.insert(Class {
                        weight: w,
                        vertices: *n,
                        edges: canonical_connected(*n, &labelled),
                    });
                }
            }
            found
        })
        .collect();
    classes.sort();
    classes.dedup();
    classes
}

/// Lazily enumerated multisets of connected classes with total weight `N`.
///
/// Yields one graph per isomorphism class: components are drawn in
/// non-increasing class order, and a graph's decomposition into connected
/// classes is unique.
pub struct GraphStream {
    classes: Vec<Class>,
    weight: u64,
    max_vertices: usize,
    chosen: Vec<usize>,
    /// Per depth, one past the highest class index still to try.
    frontier: Vec<usize>,
    weight_sum: u64,
    vertex_sum: usize,
}

impl GraphStream {
    fn new(weight: u64, max_vertices: usize, filter: LoopFilter) -> Self {
        let classes = connected_classes(weight, max_vertices, filter);
        let top = classes.len();
        GraphStream {
            classes,
            weight,
            max_vertices,
            chosen: Vec::new(),
            frontier: vec![top],
            weight_sum: 0,
            vertex_sum: 0,
        }
    }

    /// Number of connected classes the stream combines.
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    fn pop(&mut self) -> bool {
        self.frontier.pop();
        match self.chosen.pop() {
            Some(i) => {
                self.weight_sum -= self.classes[i].weight;
                self.vertex_sum -= self.classes[i].vertices;
                true
            }
            None => false,
        }
    }

    fn build(&self) -> Graph {
        let mut edges = Vec::new();
        let mut offset = 0;
        for &i in &self.chosen {
            let c = &self.classes[i];
            edges.extend(
                c.edges
                    .iter()
                    .map(|&(s, t, l)| Edge::new(s + offset, t + offset, u64::from(l))),
            );
            offset += c.vertices;
        }
        Graph::from_edges(Mode::Nat, edges).expect("components are valid graphs")
    }
}

impl Iterator for GraphStream {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        loop {
            if self.frontier.is_empty() {
                return None;
            }
            if self.weight_sum == self.weight {
                self.pop();
                continue;
            }
            let depth = self.chosen.len();
            let top = self.frontier[depth];
            let room_w = self.weight - self.weight_sum;
            let room_v = self.max_vertices - self.vertex_sum;
            let pick = (0..top)
                .rev()
                .find(|&i| self.classes[i].weight <= room_w && self.classes[i].vertices <= room_v);
            match pick {
                Some(i) => {
                    self.frontier[depth] = i;
                    self.chosen.push(i);
                    self.frontier.push(i + 1);
                    self.weight_sum += self.classes[i].weight;
                    self.vertex_sum += self.classes[i].vertices;
                    if self.weight_sum == self.weight {
                        return Some(self.build());
                    }
                }
                None => {
                    if !self.pop() {
                        self.frontier.clear();
                    }
                }
            }
        }
    }
}

/// Every nat-mode graph of weight `N` with girth at least `k`, no isolated
/// vertices and at most `max_vertices` vertices, once per isomorphism class.
pub fn enumerate_graphs(
    weight: u64,
    k: u64,
    max_vertices: usize,
) -> Result<GraphStream, BoundError> {
    let p = BoundParams::new(weight, k)?;
    Ok(GraphStream::new(
        weight,
        max_vertices,
        LoopFilter::MinGirth(p.k as usize),
    ))
}

/// As [`enumerate_graphs`] but restricted to acyclic graphs.
pub fn enumerate_acyclic_graphs(
    weight: u64,
    max_vertices: usize,
) -> Result<GraphStream, BoundError> {
    BoundParams::new(weight, 1)?;
    Ok(GraphStream::new(weight, max_vertices, LoopFilter::Acyclic))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub acyclic: bool,
    pub max_vertices: usize,
}

impl VerifyOptions {
    /// Vertex cap `2N`, enough for every graph of weight `N`.
    pub fn full(weight: u64) -> Self {
        VerifyOptions {
            acyclic: false,
            max_vertices: 2 * weight as usize,
        }
    }

    /// Vertex cap `N + 1`.
    pub fn fast(weight: u64) -> Self {
        VerifyOptions {
            acyclic: false,
            max_vertices: weight as usize + 1,
        }
    }

    pub fn acyclic(self) -> Self {
        VerifyOptions {
            acyclic: true,
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub weight: u64,
    pub k: u64,
    pub acyclic: bool,
    pub max_vertices: usize,
    pub graphs_examined: u64,
    pub max_count: BigUint,
    pub bound: BigUint,
    /// How many examined graphs attain `max_count`.
    pub argmax_count: u64,
    /// The first [`ARGMAX_KEEP`] maximizers by `(vertices, edges, canonical form)`.
    pub argmax_graphs: Vec<Graph>,
    pub bound_matched: bool,
}

impl VerifyReport {
    pub fn exceeds_bound(&self) -> bool {
        self.max_count > self.bound
    }

    /// The kept maximizers as TSV blocks separated by blank lines.
    pub fn argmax_tsv(&self) -> String {
        self.argmax_graphs
            .iter()
            .map(write_graph)
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "N: {}", self.weight)?;
        writeln!(f, "k: {}", self.k)?;
        writeln!(f, "acyclic: {}", self.acyclic)?;
        writeln!(f, "max_vertices: {}", self.max_vertices)?;
        writeln!(f, "graphs_examined: {}", self.graphs_examined)?;
        writeln!(f, "max_count: {}", self.max_count)?;
        writeln!(f, "bound: {}", self.bound)?;
        writeln!(f, "argmax_count: {}", self.argmax_count)?;
        writeln!(f, "argmax_kept: {}", self.argmax_graphs.len())?;
        write!(f, "bound_matched: {}", self.bound_matched)
    }
}

type RankKey = (usize, usize, IsoKey);

#[derive(Default)]
struct Tally {
    examined: u64,
    max: Option<BigUint>,
    argmax_count: u64,
    argmax: Vec<(RankKey, Graph)>,
}

impl Tally {
    fn add(mut self, count: BigUint, g: Graph) -> Self {
        self.examined += 1;
        match self.max.as_ref().map(|m| count.cmp(m)) {
            Some(std::cmp::Ordering::Less) => return self,
            Some(std::cmp::Ordering::Equal) => self.argmax_count += 1,
            _ => {
                self.max = Some(count);
                self.argmax_count = 1;
                self.argmax.clear();
            }
        }
        let c = canonical_graph(&g);
        self.argmax
            .push(((c.vertex_count(), c.edge_count(), iso_key(&c)), c));
        if self.argmax.len() > 2 * ARGMAX_KEEP {
            self.trim();
        }
        self
    }

    fn trim(&mut self) {
        self.argmax.sort_by(|a, b| a.0.cmp(&b.0));
        self.argmax.truncate(ARGMAX_KEEP);
    }

    fn merge(mut self, mut other: Self) -> Self {
        let examined = self.examined + other.examined;
        let ord = match (&self.max, &other.max) {
            (_, None) => std::cmp::Ordering::Greater,
            (None, _) => std::cmp::Ordering::Less,
            (Some(a), Some(b)) => a.cmp(b),
        };
        let mut out = match ord {
            std::cmp::Ordering::Greater => self,
            std::cmp::Ordering::Less => other,
            std::cmp::Ordering::Equal => {
                self.argmax_count += other.argmax_count;
                self.argmax.append(&mut other.argmax);
                self
            }
        };
        out.examined = examined;
        out.trim();
        out
    }
}

/// Exhausts the stream, comparing the largest `k`-path count with the bound.
/// `progress` is called with the running total every 100 000 graphs.
pub fn verify_with(
    weight: u64,
    k: u64,
    opts: VerifyOptions,
    progress: Option<&(dyn Fn(u64) + Sync)>,
) -> Result<VerifyReport, BoundError> {
    let (stream, bound) = if opts.acyclic {
        (
            enumerate_acyclic_graphs(weight, opts.max_vertices)?,
            acyclic_bound(weight, k)?,
        )
    } else {
        (
            enumerate_graphs(weight, k, opts.max_vertices)?,
            loop_bound(weight, k)?,
        )
    };
    let seen = std::sync::atomic::AtomicU64::new(0);
    let tally = stream
        .par_bridge()
        .fold(Tally::default, |t, g| {
            if let Some(report) = progress {
                let n = seen.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
                if n.is_multiple_of(100_000) {
                    report(n);
                }
            }
            let count = count_k_paths(&g, k as usize)
                .to_integer()
                .expect("nat graphs have integral counts");
            t.add(count, g)
        })
        .reduce(Tally::default, Tally::merge);
    let max_count = tally.max.unwrap_or_default();
    Ok(VerifyReport {
        weight,
        k,
        acyclic: opts.acyclic,
        max_vertices: opts.max_vertices,
        graphs_examined: tally.examined,
        bound_matched: max_count == bound,
        max_count,
        bound,
        argmax_count: tally.argmax_count,
        argmax_graphs: tally.argmax.into_iter().map(|(_, g)| g).collect(),
    })
}

/// Checks `max ct^k = k·P(N, k)` over graphs with girth at least `k`.
pub fn verify_bound(weight: u64, k: u64) -> Result<VerifyReport, BoundError> {
    verify_with(weight, k, VerifyOptions::full(weight), None)
}

/// Checks `max ct^k = P(N, k)` over acyclic graphs.
pub fn verify_acyclic_bound(weight: u64, k: u64) -> Result<VerifyReport, BoundError> {
    verify_with(weight, k, VerifyOptions::full(weight).acyclic(), None)
}
