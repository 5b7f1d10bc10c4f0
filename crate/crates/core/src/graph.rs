//! Labelled directed graphs.
//!
//! A [`Graph`] has at most one edge per ordered pair of vertices; edge
//! multiplicity is carried by the label instead. Self-loops are allowed.
//! Values are immutable once built and every transformation returns a new
//! graph that went through the same validation as the original.

use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::semiring::{Label, Mode};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edges {first} and {second} both run {src} -> {tgt}")]
    RepeatedEdge {
        first: EdgeId,
        second: EdgeId,
        src: VertexId,
        tgt: VertexId,
    },
    #[error("edge {edge} touches vertex {vertex}, which is not in the vertex set")]
    UnknownVertex { edge: EdgeId, vertex: VertexId },
    #[error("edge {edge} has label zero")]
    ZeroLabel { edge: EdgeId },
    #[error("edge {edge} has non-integer label {label} in nat mode")]
    NonIntegerLabel { edge: EdgeId, label: Label },
    #[error("operation requires a nat-mode graph")]
    NotNatMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: VertexId,
    pub tgt: VertexId,
    pub label: Label,
}

impl Edge {
    pub fn new(src: VertexId, tgt: VertexId, label: impl Into<Label>) -> Self {
        Edge {
            src,
            tgt,
            label: label.into(),
        }
    }
}

/// A finite labelled directed graph. Edge ids are positions in [`Graph::edges`].
#[derive(Debug, Clone)]
pub struct Graph {
    mode: Mode,
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    // adjacency by dense vertex index, edge ids ascending
    out_adj: Vec<Vec<EdgeId>>,
    in_adj: Vec<Vec<EdgeId>>,
}

impl Graph {
    /// Builds a graph on the given vertex set.
    pub fn new(
        mode: Mode,
        vertices: impl IntoIterator<Item = VertexId>,
        edges: Vec<Edge>,
    ) -> Result<Self, GraphError> {
        let vertices: Vec<VertexId> = vertices
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index = |v: VertexId| vertices.binary_search(&v).ok();

        let mut out_adj = vec![Vec::<EdgeId>::new(); vertices.len()];
        let mut in_adj = vec![Vec::new(); vertices.len()];
        for (id, e) in edges.iter().enumerate() {
            if e.label.is_zero() {
                return Err(GraphError::ZeroLabel { edge: id });
            }
            if !mode.admits(&e.label) {
                return Err(GraphError::NonIntegerLabel {
                    edge: id,
                    label: e.label.clone(),
                });
            }
            let s = index(e.src).ok_or(GraphError::UnknownVertex {
                edge: id,
                vertex: e.src,
            })?;
            let t = index(e.tgt).ok_or(GraphError::UnknownVertex {
                edge: id,
                vertex: e.tgt,
            })?;
            if let Some(&first) = out_adj[s].iter().find(|&&f| edges[f].tgt == e.tgt) {
                return Err(GraphError::RepeatedEdge {
                    first,
                    second: id,
                    src: e.src,
                    tgt: e.tgt,
                });
            }
            out_adj[s].push(id);
            in_adj[t].push(id);
        }

        Ok(Graph {
            mode,
            vertices,
            edges,
            out_adj,
            in_adj,
        })
    }

    /// Builds a graph whose vertex set is exactly the edge endpoints.
    pub fn from_edges(mode: Mode, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let vertices: Vec<VertexId> = edges.iter().flat_map(|e| [e.src, e.tgt]).collect();
        Graph::new(mode, vertices, edges)
    }

    pub fn empty(mode: Mode) -> Self {
        Graph::new(mode, [], Vec::new()).expect("empty graph is valid")
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Sorted vertex ids.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Dense index of a vertex, in `0..vertex_count()`.
    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.index_of(v).is_some()
    }

    /// Ids of edges leaving `v`, ascending.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        self.index_of(v).map_or(&[], |i| &self.out_adj[i])
    }

    /// Ids of edges entering `v`, ascending.
    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        self.index_of(v).map_or(&[], |i| &self.in_adj[i])
    }

    /// Edge ids leaving the vertex with the given dense index.
    pub(crate) fn out_edges_dense(&self, i: usize) -> &[EdgeId] {
        &self.out_adj[i]
    }

    pub(crate) fn in_edges_dense(&self, i: usize) -> &[EdgeId] {
        &self.in_adj[i]
    }

    pub(crate) fn dense(&self, v: VertexId) -> usize {
        self.index_of(v).expect("vertex belongs to graph")
    }

    pub fn find_edge(&self, src: VertexId, tgt: VertexId) -> Option<EdgeId> {
        self.out_edges(src)
            .iter()
            .copied()
            .find(|&e| self.edges[e].tgt == tgt)
    }

    /// Edges sorted by `(src, tgt)`; the uniqueness condition makes this a
    /// canonical listing of the labelled graph.
    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut edges = self.edges.clone();
        edges.sort_by_key(|e| (e.src, e.tgt));
        edges
    }

    /// Same graph with edges listed in `(src, tgt)` order.
    pub fn normalized(&self) -> Graph {
        Graph::new(
            self.mode,
            self.vertices.iter().copied(),
            self.sorted_edges(),
        )
        .expect("reordering preserves validity")
    }

    /// Reinterprets the labels in another mode.
    pub fn with_mode(&self, mode: Mode) -> Result<Graph, GraphError> {
        Graph::new(mode, self.vertices.iter().copied(), self.edges.clone())
    }

    /// Sum of all edge labels.
    pub fn weight(&self) -> Label {
        self.edges.iter().map(|e| &e.label).sum()
    }

    /// Reverses every edge.
    pub fn opposite(&self) -> Graph {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(e.tgt, e.src, e.label.clone()))
            .collect();
        Graph::new(self.mode, self.vertices.iter().copied(), edges)
            .expect("reversal preserves validity")
    }

    /// Connectivity of the underlying undirected graph. Vacuously true with
    /// at most one vertex.
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(i) = stack.pop() {
            let neighbours = self.out_adj[i]
                .iter()
                .map(|&e| self.edges[e].tgt)
                .chain(self.in_adj[i].iter().map(|&e| self.edges[e].src));
            for w in neighbours {
                let j = self.dense(w);
                if !seen[j] {
                    seen[j] = true;
                    reached += 1;
                    stack.push(j);
                }
            }
        }
        reached == n
    }

    /// Drops every vertex that no edge touches.
    pub fn prune_isolated(&self) -> Graph {
        Graph::from_edges(self.mode, self.edges.clone()).expect("pruning preserves validity")
    }

    /// Vertices incident to no edge.
    pub fn isolated_vertices(&self) -> Vec<VertexId> {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| self.out_adj[*i].is_empty() && self.in_adj[*i].is_empty())
            .map(|(_, &v)| v)
            .collect()
    }

    /// Replaces every edge of label `n` by `n` parallel unit edges.
    pub fn expand_to_multigraph(&self) -> Result<Multigraph, GraphError> {
        if self.mode != Mode::Nat {
            return Err(GraphError::NotNatMode);
        }
        let mut edges = Vec::new();
        for e in &self.edges {
            let n = e
                .label
                .to_integer()
                .and_then(|n| n.to_usize())
                .expect("nat labels are small integers");
            edges.extend(std::iter::repeat_n((e.src, e.tgt), n));
        }
        Ok(Multigraph {
            vertices: self.vertices.clone(),
            edges,
        })
    }

    /// Relabels vertices to `0..n` preserving their order.
    pub fn compacted(&self) -> Graph {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(self.dense(e.src), self.dense(e.tgt), e.label.clone()))
            .collect();
        Graph::new(self.mode, 0..self.vertex_count(), edges)
            .expect("relabelling preserves validity")
    }

    /// A new graph without edge `drop` and with `changes` applied to the
    /// remaining edges (ids refer to this graph), isolated vertices pruned.
    pub(crate) fn rewrite(
        &self,
        drop: EdgeId,
        changes: impl Fn(EdgeId, &Edge) -> Edge,
    ) -> Result<Graph, GraphError> {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(id, _)| *id != drop)
            .map(|(id, e)| changes(id, e))
            .collect();
        Graph::from_edges(self.mode, edges)
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.mode == other.mode
            && self.vertices == other.vertices
            && self.sorted_edges() == other.sorted_edges()
    }
}

impl Eq for Graph {}

impl Hash for Graph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.mode.hash(state);
        self.vertices.hash(state);
        self.sorted_edges().hash(state);
    }
}

/// Unlabelled multigraph view of a nat-mode graph. Parallel edges allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
}

impl Multigraph {
    /// Number of `k`-paths by explicit depth-first enumeration over the
    /// parallel edges. Exponential; meant for cross-checking small cases.
    pub fn count_k_paths_naive(&self, k: usize) -> u64 {
        if k == 0 {
            return self.vertices.len() as u64;
        }
        fn walk(mg: &Multigraph, at: VertexId, left: usize) -> u64 {
            if left == 0 {
                return 1;
            }
            mg.edges
                .iter()
                .filter(|(s, _)| *s == at)
                .map(|&(_, t)| walk(mg, t, left - 1))
                .sum()
        }
        self.edges.iter().map(|&(_, t)| walk(self, t, k - 1)).sum()
    }
}
