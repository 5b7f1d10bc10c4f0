//! Seeded random graphs for property tests and benchmarks.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Edge, Graph};
use crate::semiring::{Label, Mode};

/// Which loops a random graph may contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Loops {
    Any,
    /// No loop shorter than this.
    AtLeast(usize),
    None,
}

impl Loops {
    fn admits(self, len: usize) -> bool {
        match self {
            Loops::Any => true,
            Loops::AtLeast(k) => len >= k,
            Loops::None => false,
        }
    }
}

/// Adds up to `edges` random unit edges on `0..vertices`, skipping any that
/// would repeat an edge or create a forbidden loop.
fn random_shape<R: Rng + ?Sized>(
    rng: &mut R,
    vertices: usize,
    edges: usize,
    loops: Loops,
) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (0..vertices)
        .flat_map(|s| (0..vertices).map(move |t| (s, t)))
        .collect();
    pairs.shuffle(rng);
    let mut adj = vec![Vec::new(); vertices];
    let mut chosen = Vec::new();
    for (s, t) in pairs {
        if chosen.len() == edges {
            break;
        }
        let closes = distance(&adj, t, s).map(|d| d + 1);
        if closes.is_some_and(|len| !loops.admits(len)) {
            continue;
        }
        adj[s].push(t);
        chosen.push((s, t));
    }
    chosen
}

fn distance(adj: &[Vec<usize>], from: usize, to: usize) -> Option<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            return Some(dist[u]);
        }
        for &w in &adj[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Nat graph on up to `vertices` vertices with up to `edges` edges and labels
/// drawn from `1..=max_label`. Isolated vertices are dropped.
pub fn random_graph<R: Rng + ?Sized>(
    rng: &mut R,
    vertices: usize,
    edges: usize,
    max_label: u64,
    loops: Loops,
) -> Graph {
    let es = random_shape(rng, vertices, edges, loops)
        .into_iter()
        .map(|(s, t)| Edge::new(s, t, rng.gen_range(1..=max_label)))
        .collect();
    Graph::from_edges(Mode::Nat, es).expect("distinct pairs")
}

/// Nat graph with exactly `edges` edges (fewer if the loop constraint leaves
/// no room) whose labels sum to `weight`.
pub fn random_weighted_graph<R: Rng + ?Sized>(
    rng: &mut R,
    weight: u64,
    vertices: usize,
    edges: usize,
    loops: Loops,
) -> Graph {
    let shape = random_shape(rng, vertices, edges.min(weight as usize), loops);
    let mut labels = vec![1u64; shape.len()];
    if !labels.is_empty() {
        for _ in 0..weight - labels.len() as u64 {
            let i = rng.gen_range(0..labels.len());
            labels[i] += 1;
        }
    }
    let es = shape
        .into_iter()
        .zip(labels)
        .map(|((s, t), l)| Edge::new(s, t, l))
        .collect();
    Graph::from_edges(Mode::Nat, es).expect("distinct pairs")
}

/// Rat-mode copy of `g` with each label scaled by a random factor `p/q`,
/// `p, q` in `1..=max`.
pub fn perturb_rational<R: Rng + ?Sized>(rng: &mut R, g: &Graph, max: u64) -> Graph {
    let es = g
        .edges()
        .iter()
        .map(|e| {
            let f = Label::ratio(rng.gen_range(1..=max), rng.gen_range(1..=max));
            Edge::new(e.src, e.tgt, e.label.clone() * f)
        })
        .collect();
    Graph::new(Mode::Rat, g.vertices().iter().copied(), es).expect("same shape")
}

/// Rat graph with labels `p/q`, `p, q` in `1..=max`.
pub fn random_rational_graph<R: Rng + ?Sized>(
    rng: &mut R,
    vertices: usize,
    edges: usize,
    max: u64,
) -> Graph {
    let g = random_graph(rng, vertices, edges, 1, Loops::Any);
    perturb_rational(rng, &g, max)
}
