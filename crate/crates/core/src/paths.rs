//! Paths, k-contents, girth and the loop-extraction constructions.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::graph::{EdgeId, Graph, VertexId};
use crate::semiring::Label;

/// Default cap on the number of paths [`enumerate_k_paths`] will produce.
pub const DEFAULT_PATH_LIMIT: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("a path needs at least one edge")]
    Empty,
    #[error("edge {0} is not in the graph")]
    UnknownEdge(EdgeId),
    #[error("edges at positions {0} and {next} do not chain", next = .0 + 1)]
    Broken(usize),
    #[error("position {index} is out of range for a path of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("more than {limit} paths")]
    LimitExceeded { limit: usize },
    #[error("the permutation is the identity")]
    IdentityPermutation,
    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("the permuted sequence breaks chaining at position {0}")]
    PermutedNotPath(usize),
}

/// A non-empty sequence of chained edges of some graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    edges: Vec<EdgeId>,
}

impl Path {
    /// Checks that `edges` exist in `g` and chain head to tail.
    pub fn new(g: &Graph, edges: Vec<EdgeId>) -> Result<Self, PathError> {
        validate(g, &edges)?;
        Ok(Path { edges })
    }

    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.edges
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self, g: &Graph) -> VertexId {
        g.edge(self.edges[0]).src
    }

    pub fn target(&self, g: &Graph) -> VertexId {
        g.edge(*self.edges.last().unwrap()).tgt
    }

    pub fn is_loop(&self, g: &Graph) -> bool {
        self.source(g) == self.target(g)
    }

    /// Re-checks the path against `g`.
    pub fn validate(&self, g: &Graph) -> Result<(), PathError> {
        validate(g, &self.edges)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

fn validate(g: &Graph, edges: &[EdgeId]) -> Result<(), PathError> {
    if edges.is_empty() {
        return Err(PathError::Empty);
    }
    if let Some(&bad) = edges.iter().find(|&&e| e >= g.edge_count()) {
        return Err(PathError::UnknownEdge(bad));
    }
    match edges
        .windows(2)
        .position(|w| g.edge(w[0]).tgt != g.edge(w[1]).src)
    {
        Some(i) => Err(PathError::Broken(i)),
        None => Ok(()),
    }
}

/// Sum over all `k`-paths of the product of their labels.
///
/// Runs `k` relaxation rounds over a per-vertex vector of partial contents.
/// For `k = 0` the vertices themselves are the paths, so the result is the
/// vertex count.
pub fn count_k_paths(g: &Graph, k: usize) -> Label {
    if k == 0 {
        return Label::from(g.vertex_count() as u64);
    }
    ending_contents(g, k)
        .pop()
        .expect("k + 1 rounds")
        .into_iter()
        .sum()
}

/// `table[a][i]`: total content of the `a`-paths ending at the vertex with
/// dense index `i`, for `a` in `0..=len`. Length zero contributes one.
pub(crate) fn ending_contents(g: &Graph, len: usize) -> Vec<Vec<Label>> {
    relax(g, len, |e| (g.dense(g.edge(e).src), g.dense(g.edge(e).tgt)))
}

/// `table[b][i]`: total content of the `b`-paths starting at vertex `i`.
pub(crate) fn starting_contents(g: &Graph, len: usize) -> Vec<Vec<Label>> {
    relax(g, len, |e| (g.dense(g.edge(e).tgt), g.dense(g.edge(e).src)))
}

fn relax(g: &Graph, len: usize, ends: impl Fn(EdgeId) -> (usize, usize)) -> Vec<Vec<Label>> {
    let n = g.vertex_count();
    let mut table = Vec::with_capacity(len + 1);
    table.push(vec![Label::one(); n]);
    for round in 0..len {
        let prev: &Vec<Label> = &table[round];
        let mut next = vec![Label::zero(); n];
        for (id, e) in g.edges().iter().enumerate() {
            let (from, to) = ends(id);
            if !prev[from].is_zero() {
                next[to] += &prev[from] * &e.label;
            }
        }
        table.push(next);
    }
    table
}

/// Every `k`-path, in lexicographic order of edge ids.
pub fn enumerate_k_paths(g: &Graph, k: usize) -> Result<Vec<Path>, PathError> {
    enumerate_k_paths_limited(g, k, DEFAULT_PATH_LIMIT)
}

pub fn enumerate_k_paths_limited(
    g: &Graph,
    k: usize,
    limit: usize,
) -> Result<Vec<Path>, PathError> {
    let mut out = Vec::new();
    if k == 0 {
        return Ok(out);
    }
    let mut current = Vec::with_capacity(k);
    for e in 0..g.edge_count() {
        current.push(e);
        extend(g, k, limit, &mut current, &mut out)?;
        current.pop();
    }
    Ok(out)
}

fn extend(
    g: &Graph,
    k: usize,
    limit: usize,
    current: &mut Vec<EdgeId>,
    out: &mut Vec<Path>,
) -> Result<(), PathError> {
    if current.len() == k {
        if out.len() == limit {
            return Err(PathError::LimitExceeded { limit });
        }
        out.push(Path {
            edges: current.clone(),
        });
        return Ok(());
    }
    let at = g.edge(*current.last().unwrap()).tgt;
    for &next in g.out_edges(at) {
        current.push(next);
        extend(g, k, limit, current, out)?;
        current.pop();
    }
    Ok(())
}

/// Product of the labels along `p`.
pub fn path_content(g: &Graph, p: &Path) -> Result<Label, PathError> {
    p.validate(g)?;
    Ok(p.edges.iter().map(|&e| &g.edge(e).label).product())
}

/// Product of the labels along `p` except the one at `index` (0-based).
pub fn exclusive_content(g: &Graph, p: &Path, index: usize) -> Result<Label, PathError> {
    p.validate(g)?;
    if index >= p.len() {
        return Err(PathError::IndexOutOfRange {
            index,
            len: p.len(),
        });
    }
    Ok(p.edges
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != index)
        .map(|(_, &e)| &g.edge(e).label)
        .product())
}

/// Length of the shortest directed cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    /// Whether no loop is shorter than `k`.
    pub fn at_least(self, k: usize) -> bool {
        match self {
            Girth::Finite(g) => g >= k,
            Girth::Infinite => true,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Girth::Finite(_))
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("inf"),
        }
    }
}

/// Shortest directed cycle, by a breadth-first search from every vertex.
pub fn girth(g: &Graph) -> Girth {
    let n = g.vertex_count();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();

    for root in 0..n {
        if g.in_edges_dense(root).is_empty() || g.out_edges_dense(root).is_empty() {
            continue;
        }
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        queue.clear();
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            // a cycle through root found at depth d has length d + 1
            if best.is_some_and(|b| dist[u] + 1 >= b) {
                break;
            }
            for &e in g.out_edges_dense(u) {
                let w = g.dense(g.edge(e).tgt);
                if w == root {
                    let len = dist[u] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    best.map_or(Girth::Infinite, Girth::Finite)
}

/// True iff `g` has no loop shorter than `k`.
pub fn check_no_short_loops(g: &Graph, k: usize) -> bool {
    girth(g).at_least(k)
}

/// Extracts a loop from a path that repeats an edge or a target vertex.
///
/// With a repeated edge at positions `i < j` the loop is `p[i..j]`; otherwise
/// with equal targets at `i < j` it is `p[i+1..=j]`. The earliest repetition
/// wins. Any loop returned is shorter than `p`.
pub fn find_loop_from_repetition(g: &Graph, p: &Path) -> Result<Option<Path>, PathError> {
    p.validate(g)?;
    let e = &p.edges;
    for j in 1..e.len() {
        if let Some(i) = (0..j).find(|&i| e[i] == e[j]) {
            return Ok(Some(Path {
                edges: e[i..j].to_vec(),
            }));
        }
    }
    for j in 1..e.len() {
        let tj = g.edge(e[j]).tgt;
        if let Some(i) = (0..j).find(|&i| g.edge(e[i]).tgt == tj) {
            return Ok(Some(Path {
                edges: e[i + 1..=j].to_vec(),
            }));
        }
    }
    Ok(None)
}

/// Builds a loop from a path whose edges can be rearranged into another path.
///
/// `sigma` is a permutation of the positions `0..p.len()`; the rearranged
/// sequence has `p[sigma[i]]` at position `i` and must itself chain. Taking
/// the first moved position `j` (so `sigma[j] > j`), the rearranged sequence
/// runs from `p[sigma[j]]` to `p[j]`; when `sigma[j] = j + 1` that stretch
/// already closes up, otherwise it is closed with `p[j+1..sigma[j]]`.
pub fn permutation_loop_witness(g: &Graph, p: &Path, sigma: &[usize]) -> Result<Path, PathError> {
    p.validate(g)?;
    let n = p.len();
    let mut inverse = vec![usize::MAX; n];
    if sigma.len() != n {
        return Err(PathError::NotAPermutation(n));
    }
    for (i, &s) in sigma.iter().enumerate() {
        if s >= n || inverse[s] != usize::MAX {
            return Err(PathError::NotAPermutation(n));
        }
        inverse[s] = i;
    }
    let permuted: Vec<EdgeId> = sigma.iter().map(|&s| p.edges[s]).collect();
    if let Some(i) = permuted
        .windows(2)
        .position(|w| g.edge(w[0]).tgt != g.edge(w[1]).src)
    {
        return Err(PathError::PermutedNotPath(i));
    }
    let j = (0..n)
        .find(|&i| sigma[i] != i)
        .ok_or(PathError::IdentityPermutation)?;
    debug_assert!(sigma[j] > j && inverse[j] > j);

    // positions j..=inverse[j] of the rearranged path carry p[sigma[j]] .. p[j]
    let mut edges = permuted[j..=inverse[j]].to_vec();
    if sigma[j] > j + 1 {
        edges.extend_from_slice(&p.edges[j + 1..sigma[j]]);
    }
    let witness = Path::new(g, edges)?;
    debug_assert!(witness.is_loop(g));
    Ok(witness)
}
