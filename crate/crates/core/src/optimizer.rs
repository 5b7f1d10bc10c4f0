//! Content-monotone rewriting towards the k-path maximizers.
//!
//! Three rewrites are available, each preserving the total weight:
//!
//! * **merge**: two edges that never lie on a common `k`-path are fused by
//!   deleting one and adding its label to the other. Keeping the edge with the
//!   larger exclusive-content sum never lowers the `k`-content.
//! * **shrink**: in a loop of length `m > k` the lightest edge is deleted and
//!   its label added to its successor, which now starts where the deleted edge
//!   started. For `k >= 2` this strictly raises the `k`-content.
//! * **balance**: a `k`-loop carries `k` times the product of its labels, so
//!   spreading the weight as evenly as possible maximizes it.
//!
//! [`optimize`] chains them: merge until every pair of edges shares a
//! `k`-path, close an open `k`-path into a loop, shrink down to a `k`-loop and
//! balance.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::graph::{Edge, EdgeId, Graph, GraphError, VertexId};
use crate::paths::{count_k_paths, ending_contents, girth, starting_contents, Girth};
use crate::semiring::{Label, Mode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OptimizeError {
    #[error("k must be at least 1")]
    ZeroLength,
    #[error("edge {0} is not in the graph")]
    UnknownEdge(EdgeId),
    #[error("cannot merge edge {0} with itself")]
    SameEdge(EdgeId),
    #[error("edges {0} and {1} lie on a common k-path")]
    ShareAPath(EdgeId, EdgeId),
    #[error("edge {keep} has a smaller exclusive-content sum than edge {drop}; swap them")]
    WrongOrientation { keep: EdgeId, drop: EdgeId },
    #[error("shrinking needs k >= 2")]
    ShrinkNeedsLengthTwo,
    #[error("expected a loop longer than k = {k}, found {shape}")]
    NotShrinkable { k: usize, shape: ShapeClass },
    #[error("expected a single directed cycle through every vertex")]
    NotALoop,
    #[error("weight {0} is not an integer")]
    NonIntegerWeight(Label),
    #[error("weight {weight} is too small to give {k} edges a positive integer label")]
    WeightBelowLength { weight: Label, k: usize },
    #[error("graph has a loop of length {girth}, shorter than k = {k}")]
    GirthViolated { girth: Girth, k: usize },
    #[error("nat-mode weight {0} is below 2")]
    WeightTooSmall(Label),
    #[error("graph has no path of length {0}")]
    NoKPaths(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("rewriting stalled: {0}")]
    Internal(String),
}

/// Why a graph is not one of the two maximizing shapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotExtremalReason {
    Empty,
    ShortLoop(Girth),
    /// Two edges with a common target.
    Lambda(EdgeId, EdgeId),
    /// Two edges with a common source.
    Vee(EdgeId, EdgeId),
    Disconnected,
    /// Two edges that no `k`-path contains together.
    Chirvasitu(EdgeId, EdgeId),
    WrongLength {
        edges: usize,
    },
}

impl fmt::Display for NotExtremalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotExtremalReason::Empty => f.write_str("no edges"),
            NotExtremalReason::ShortLoop(g) => write!(f, "loop of length {g} is too short"),
            NotExtremalReason::Lambda(e, e2) => write!(f, "edges {e} and {e2} share a target"),
            NotExtremalReason::Vee(e, e2) => write!(f, "edges {e} and {e2} share a source"),
            NotExtremalReason::Disconnected => f.write_str("not connected"),
            NotExtremalReason::Chirvasitu(e, e2) => {
                write!(f, "edges {e} and {e2} share no k-path")
            }
            NotExtremalReason::WrongLength { edges } => write!(f, "path with {edges} edges"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeClass {
    /// An open path of exactly `k` edges through `k + 1` vertices.
    OpenPath(usize),
    /// A directed cycle of `m` edges through `m` vertices, `k <= m <= 2k - 1`.
    Loop(usize),
    NotExtremal(NotExtremalReason),
}

impl fmt::Display for ShapeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeClass::OpenPath(k) => write!(f, "open path of length {k}"),
            ShapeClass::Loop(m) => write!(f, "loop of length {m}"),
            ShapeClass::NotExtremal(r) => write!(f, "not extremal ({r})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    Merge,
    Close,
    Shrink,
    Balance,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::Merge => "merge",
            StepKind::Close => "close",
            StepKind::Shrink => "shrink",
            StepKind::Balance => "balance",
        })
    }
}

impl FromStr for StepKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "merge" => Ok(StepKind::Merge),
            "close" => Ok(StepKind::Close),
            "shrink" => Ok(StepKind::Shrink),
            "balance" => Ok(StepKind::Balance),
            other => Err(format!("unknown step kind `{other}`")),
        }
    }
}

/// One rewrite. Edge ids refer to the graph before the step; for a merge the
/// kept edge comes first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub kind: StepKind,
    pub edges: Vec<EdgeId>,
    pub ct_before: Label,
    pub ct_after: Label,
    pub weight: Label,
    pub girth_after: Girth,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self.edges.iter().map(ToString::to_string).collect();
        write!(
            f,
            "kind={}\tedges={}\tct_before={}\tct_after={}\tweight={}\tgirth={}",
            self.kind,
            edges.join(","),
            self.ct_before,
            self.ct_after,
            self.weight,
            self.girth_after
        )
    }
}

impl FromStr for TraceStep {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let mut fields = std::collections::HashMap::new();
        for field in line.trim_end().split('\t') {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| format!("field `{field}` is not key=value"))?;
            fields.insert(key, value);
        }
        let get = |key: &str| {
            fields
                .get(key)
                .copied()
                .ok_or_else(|| format!("missing `{key}`"))
        };
        let label = |key: &str| -> Result<Label, String> {
            get(key)?.parse().map_err(|e| format!("{key}: {e}"))
        };
        let edges = match get("edges")? {
            "" => Vec::new(),
            list => list
                .split(',')
                .map(|e| e.parse().map_err(|_| format!("bad edge id `{e}`")))
                .collect::<Result<_, _>>()?,
        };
        let girth_after = match get("girth")? {
            "inf" => Girth::Infinite,
            g => Girth::Finite(g.parse().map_err(|_| format!("bad girth `{g}`"))?),
        };
        Ok(TraceStep {
            kind: get("kind")?.parse()?,
            edges,
            ct_before: label("ct_before")?,
            ct_after: label("ct_after")?,
            weight: label("weight")?,
            girth_after,
        })
    }
}

/// Ordered record of the rewrites applied by [`optimize`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn count(&self, kind: StepKind) -> usize {
        self.steps.iter().filter(|s| s.kind == kind).count()
    }

    /// Parses the line-per-step form produced by `Display`.
    pub fn parse(text: &str) -> Result<Trace, String> {
        let steps = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(str::parse)
            .collect::<Result<_, _>>()?;
        Ok(Trace { steps })
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            writeln!(f, "{step}")?;
        }
        Ok(())
    }
}

/// `together[e][f]`: some `k`-path contains both `e` and `f` (`e != f`).
///
/// Such a path is a prefix walk into `e`, a connecting walk from `e` to `f`
/// and a suffix walk out of `f`, with total length `k - 2` for the three
/// walks; existence of each is tracked by exact length.
pub fn shared_path_matrix(g: &Graph, k: usize) -> Vec<Vec<bool>> {
    let m = g.edge_count();
    let mut together = vec![vec![false; m]; m];
    if k < 2 || m < 2 {
        return together;
    }
    let n = g.vertex_count();
    let span = k - 2;
    let ends: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|e| (g.dense(e.src), g.dense(e.tgt)))
        .collect();

    // into[a][v]: a walk of length a ends at v; out_of[b][v]: one starts there
    let step = |prev: &Vec<bool>, forward: bool| {
        let mut next = vec![false; n];
        for &(s, t) in &ends {
            let (from, to) = if forward { (s, t) } else { (t, s) };
            if prev[from] {
                next[to] = true;
            }
        }
        next
    };
    let mut into = vec![vec![true; n]];
    let mut out_of = vec![vec![true; n]];
    for a in 0..span {
        into.push(step(&into[a], true));
        out_of.push(step(&out_of[a], false));
    }

    // between[u][d][w]: a walk of length d runs from u to w
    let between: Vec<Vec<Vec<bool>>> = (0..n)
        .map(|u| {
            let mut layers = Vec::with_capacity(span + 1);
            let mut start = vec![false; n];
            start[u] = true;
            layers.push(start);
            for d in 0..span {
                layers.push(step(&layers[d], true));
            }
            layers
        })
        .collect();

    for (e, &(se, te)) in ends.iter().enumerate() {
        for (f, &(sf, tf)) in ends.iter().enumerate() {
            if e == f {
                continue;
            }
            // e strictly before f
            let found = (0..=span).any(|a| {
                into[a][se]
                    && (0..=span - a).any(|d| between[te][d][sf] && out_of[span - a - d][tf])
            });
            if found {
                together[e][f] = true;
                together[f][e] = true;
            }
        }
    }
    together
}

/// First pair of distinct edges, in lexicographic id order, that no `k`-path
/// contains together.
pub fn chirvasitu_violation(g: &Graph, k: usize) -> Option<(EdgeId, EdgeId)> {
    let together = shared_path_matrix(g, k);
    let m = g.edge_count();
    (0..m)
        .flat_map(|e| (e + 1..m).map(move |f| (e, f)))
        .find(|&(e, f)| !together[e][f])
}

/// For every edge `e`: the sum over `k`-paths through `e` of the content with
/// that occurrence of `e` left out, counted once per occurrence.
pub fn exclusive_content_sums(g: &Graph, k: usize) -> Vec<Label> {
    if k == 0 {
        return vec![Label::zero(); g.edge_count()];
    }
    let before = ending_contents(g, k - 1);
    let after = starting_contents(g, k - 1);
    g.edges()
        .iter()
        .map(|e| {
            let (s, t) = (g.dense(e.src), g.dense(e.tgt));
            (0..k).map(|a| &before[a][s] * &after[k - 1 - a][t]).sum()
        })
        .collect()
}

/// Deletes `drop` and adds its label to `keep`.
///
/// The pair must share no `k`-path and `keep` must have the larger (or equal)
/// exclusive-content sum; under those conditions the `k`-content does not
/// drop. Vertices left without edges are removed.
pub fn merge_edges(
    g: &Graph,
    keep: EdgeId,
    drop: EdgeId,
    k: usize,
) -> Result<Graph, OptimizeError> {
    if k == 0 {
        return Err(OptimizeError::ZeroLength);
    }
    for id in [keep, drop] {
        if id >= g.edge_count() {
            return Err(OptimizeError::UnknownEdge(id));
        }
    }
    if keep == drop {
        return Err(OptimizeError::SameEdge(keep));
    }
    if shared_path_matrix(g, k)[keep][drop] {
        return Err(OptimizeError::ShareAPath(keep, drop));
    }
    let sums = exclusive_content_sums(g, k);
    if sums[keep] < sums[drop] {
        return Err(OptimizeError::WrongOrientation { keep, drop });
    }
    let extra = g.edge(drop).label.clone();
    Ok(g.rewrite(drop, |id, e| {
        if id == keep {
            Edge::new(e.src, e.tgt, &e.label + &extra)
        } else {
            e.clone()
        }
    })?)
}

/// Edges of a graph that is a single directed cycle through all its
/// vertices, starting from the smallest vertex id.
fn loop_order(g: &Graph) -> Option<Vec<EdgeId>> {
    let n = g.vertex_count();
    if n == 0 || g.edge_count() != n {
        return None;
    }
    if (0..n).any(|i| g.out_edges_dense(i).len() != 1 || g.in_edges_dense(i).len() != 1) {
        return None;
    }
    let start = g.vertices()[0];
    let mut order = Vec::with_capacity(n);
    let mut at = start;
    loop {
        let e = g.out_edges(at)[0];
        order.push(e);
        at = g.edge(e).tgt;
        if at == start {
            break;
        }
    }
    (order.len() == n).then_some(order)
}

/// Edges of a graph that is a single open path, from its source.
fn path_order(g: &Graph) -> Option<Vec<EdgeId>> {
    let n = g.vertex_count();
    if n < 2 || g.edge_count() != n - 1 {
        return None;
    }
    if (0..n).any(|i| g.out_edges_dense(i).len() > 1 || g.in_edges_dense(i).len() > 1) {
        return None;
    }
    let start = *g.vertices().iter().find(|&&v| g.in_edges(v).is_empty())?;
    let mut order = Vec::with_capacity(n - 1);
    let mut at = start;
    while let Some(&e) = g.out_edges(at).first() {
        order.push(e);
        at = g.edge(e).tgt;
    }
    (order.len() == n - 1).then_some(order)
}

fn first_pair_by(g: &Graph, key: impl Fn(&Edge) -> VertexId) -> Option<(EdgeId, EdgeId)> {
    let m = g.edge_count();
    (0..m)
        .flat_map(|e| (e + 1..m).map(move |f| (e, f)))
        .find(|&(e, f)| key(g.edge(e)) == key(g.edge(f)))
}

/// Matches `g` against the two families of maximizers: open `k`-paths and
/// loops of length between `k` and `2k - 1`.
pub fn classify_extremal_shape(g: &Graph, k: usize) -> ShapeClass {
    use NotExtremalReason::*;
    let not = ShapeClass::NotExtremal;
    if g.is_empty() {
        return not(Empty);
    }
    let gi = girth(g);
    if !gi.at_least(k) {
        return not(ShortLoop(gi));
    }
    if let Some((e, f)) = first_pair_by(g, |e| e.tgt) {
        return not(Lambda(e, f));
    }
    if let Some((e, f)) = first_pair_by(g, |e| e.src) {
        return not(Vee(e, f));
    }
    if !g.isolated_vertices().is_empty() || !g.is_connected() {
        return not(Disconnected);
    }
    if let Some((e, f)) = chirvasitu_violation(g, k) {
        return not(Chirvasitu(e, f));
    }
    // in- and out-degrees are at most one and g is connected
    let m = g.edge_count();
    if loop_order(g).is_some() {
        debug_assert!(k <= m && m < 2 * k);
        ShapeClass::Loop(m)
    } else if m == k {
        ShapeClass::OpenPath(k)
    } else {
        not(WrongLength { edges: m })
    }
}

/// Removes the lightest edge of a loop longer than `k` and adds its label to
/// the following edge, which is rerouted to start where the removed one did.
/// Among equally light edges the first one met walking the loop from its
/// smallest vertex is removed.
pub fn shrink_loop(g: &Graph, k: usize) -> Result<Graph, OptimizeError> {
    if k < 2 {
        return Err(OptimizeError::ShrinkNeedsLengthTwo);
    }
    match classify_extremal_shape(g, k) {
        ShapeClass::Loop(m) if m > k => {}
        shape => return Err(OptimizeError::NotShrinkable { k, shape }),
    }
    let (lightest, successor) = shrink_pair(g).expect("classified as a loop");
    let removed = g.edge(lightest).clone();
    Ok(g.rewrite(lightest, |id, e| {
        if id == successor {
            Edge::new(removed.src, e.tgt, &e.label + &removed.label)
        } else {
            e.clone()
        }
    })?)
}

fn shrink_pair(g: &Graph) -> Option<(EdgeId, EdgeId)> {
    let order = loop_order(g)?;
    let pos =
        (0..order.len()).min_by(|&a, &b| g.edge(order[a]).label.cmp(&g.edge(order[b]).label))?;
    Some((order[pos], order[(pos + 1) % order.len()]))
}

/// Spreads the weight of a `k`-loop as evenly as the mode allows.
///
/// In rat mode every label becomes `weight / k`. In nat mode `r` labels get
/// `n + 1` and the rest `n`, where `weight = n·k + r`; the larger labels go to
/// the edges that were already heaviest, so a balanced loop is left as is.
pub fn balance_labels(g: &Graph, mode: Mode) -> Result<Graph, OptimizeError> {
    let order = loop_order(g).ok_or(OptimizeError::NotALoop)?;
    let k = order.len();
    let weight = g.weight();
    let mut labels = vec![Label::zero(); g.edge_count()];
    match mode {
        Mode::Rat => {
            let even = weight.div_int(k as u64);
            labels.iter_mut().for_each(|l| *l = even.clone());
        }
        Mode::Nat => {
            let total = weight
                .to_integer()
                .ok_or_else(|| OptimizeError::NonIntegerWeight(weight.clone()))?;
            let (n, r) = total.div_rem(&BigUint::from(k));
            if n == BigUint::from(0u32) {
                return Err(OptimizeError::WeightBelowLength { weight, k });
            }
            let r = r.to_usize().expect("remainder below k");
            let mut by_weight = order.clone();
            // stable: ties keep loop order
            by_weight.sort_by(|&a, &b| g.edge(b).label.cmp(&g.edge(a).label));
            for (rank, &e) in by_weight.iter().enumerate() {
                let part = if rank < r { &n + 1u32 } else { n.clone() };
                labels[e] = Label::from(part);
            }
        }
    }
    let edges = g
        .edges()
        .iter()
        .zip(labels)
        .map(|(e, label)| Edge::new(e.src, e.tgt, label))
        .collect();
    Ok(Graph::new(mode, g.vertices().iter().copied(), edges)?)
}

/// Turns an open path into a loop by identifying its last vertex with its
/// first.
fn close_path(g: &Graph) -> Result<Graph, OptimizeError> {
    let order =
        path_order(g).ok_or_else(|| OptimizeError::Internal("expected an open path".into()))?;
    let first = g.edge(order[0]).src;
    let last = *order.last().unwrap();
    Ok(g.rewrite(usize::MAX, |id, e| {
        if id == last {
            Edge::new(e.src, first, e.label.clone())
        } else {
            e.clone()
        }
    })?)
}

/// Drives `g` to a balanced `k`-loop of the same weight, recording every
/// rewrite.
///
/// Requires no loop shorter than `k` and at least one `k`-path (none of the
/// rewrites can create one); in nat mode the weight must be at least 2.
pub fn optimize(g: &Graph, k: usize, mode: Mode) -> Result<(Graph, Trace), OptimizeError> {
    if k == 0 {
        return Err(OptimizeError::ZeroLength);
    }
    let gi = girth(g);
    if !gi.at_least(k) {
        return Err(OptimizeError::GirthViolated { girth: gi, k });
    }
    let mut current = g.with_mode(mode)?.prune_isolated();
    let weight = current.weight();
    if mode == Mode::Nat && weight < Label::from(2u64) {
        return Err(OptimizeError::WeightTooSmall(weight));
    }
    let mut ct = count_k_paths(&current, k);
    if ct.is_zero() {
        return Err(OptimizeError::NoKPaths(k));
    }

    let mut trace = Trace::default();
    let mut record = |kind, edges, before: &Label, next: &Graph, after: &Label| {
        trace.steps.push(TraceStep {
            kind,
            edges,
            ct_before: before.clone(),
            ct_after: after.clone(),
            weight: next.weight(),
            girth_after: girth(next),
        });
    };

    let budget = current.edge_count();
    let mut merges = 0;
    while let Some((e, f)) = chirvasitu_violation(&current, k) {
        merges += 1;
        if merges > budget {
            return Err(OptimizeError::Internal("merge budget exhausted".into()));
        }
        let sums = exclusive_content_sums(&current, k);
        let (keep, drop) = if sums[f] > sums[e] { (f, e) } else { (e, f) };
        let next = merge_edges(&current, keep, drop, k)?;
        let after = count_k_paths(&next, k);
        record(StepKind::Merge, vec![keep, drop], &ct, &next, &after);
        current = next;
        ct = after;
    }

    let mut shrinks = 0;
    loop {
        match classify_extremal_shape(&current, k) {
            ShapeClass::OpenPath(_) => {
                let next = close_path(&current)?;
                let after = count_k_paths(&next, k);
                let edges = path_order(&current).unwrap_or_default();
                record(StepKind::Close, edges, &ct, &next, &after);
                current = next;
                ct = after;
            }
            ShapeClass::Loop(m) if m > k => {
                shrinks += 1;
                if shrinks > budget {
                    return Err(OptimizeError::Internal("shrink budget exhausted".into()));
                }
                let (lightest, successor) = shrink_pair(&current).expect("loop");
                let next = shrink_loop(&current, k)?;
                let after = count_k_paths(&next, k);
                record(
                    StepKind::Shrink,
                    vec![lightest, successor],
                    &ct,
                    &next,
                    &after,
                );
                current = next;
                ct = after;
            }
            ShapeClass::Loop(_) => break,
            ShapeClass::NotExtremal(reason) => {
                return Err(OptimizeError::Internal(format!("after merging: {reason}")));
            }
        }
    }

    let balanced = balance_labels(&current, mode)?;
    let after = count_k_paths(&balanced, k);
    let all = loop_order(&current).unwrap_or_default();
    record(StepKind::Balance, all, &ct, &balanced, &after);
    Ok((balanced, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::{construct_extremal_loop, loop_bound};
    use crate::paths::{enumerate_k_paths, exclusive_content};

    fn nat(edges: &[(VertexId, VertexId, u64)]) -> Graph {
        Graph::from_edges(
            Mode::Nat,
            edges.iter().map(|&(s, t, l)| Edge::new(s, t, l)).collect(),
        )
        .unwrap()
    }

    fn cycle(labels: &[u64]) -> Graph {
        let k = labels.len();
        nat(&labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (i, (i + 1) % k, l))
            .collect::<Vec<_>>())
    }

    fn labels_in_loop_order(g: &Graph) -> Vec<Label> {
        loop_order(g)
            .unwrap()
            .into_iter()
            .map(|e| g.edge(e).label.clone())
            .collect()
    }

    fn l(n: u64) -> Label {
        Label::from(n)
    }

    /// Pairs sharing a k-path, read off an explicit enumeration.
    fn shared_by_enumeration(g: &Graph, k: usize) -> Vec<Vec<bool>> {
        let m = g.edge_count();
        let mut together = vec![vec![false; m]; m];
        for p in enumerate_k_paths(g, k).unwrap() {
            for &e in p.edge_ids() {
                for &f in p.edge_ids() {
                    if e != f {
                        together[e][f] = true;
                    }
                }
            }
        }
        together
    }

    /// Exclusive sums from explicit enumeration.
    fn exclusive_sums_by_enumeration(g: &Graph, k: usize) -> Vec<Label> {
        let mut sums = vec![Label::zero(); g.edge_count()];
        for p in enumerate_k_paths(g, k).unwrap() {
            for (j, &e) in p.edge_ids().iter().enumerate() {
                sums[e] += exclusive_content(g, &p, j).unwrap();
            }
        }
        sums
    }

    #[test]
    fn shared_path_matrix_matches_enumeration() {
        let graphs = [
            cycle(&[1, 1, 1, 1]),
            cycle(&[1, 2, 3, 1, 1]),
            nat(&[(0, 1, 1), (1, 2, 1), (2, 0, 1), (2, 3, 1), (4, 0, 1)]),
            nat(&[(0, 1, 1), (2, 1, 1), (1, 3, 1), (3, 4, 1)]),
            nat(&[(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 2, 2)]),
        ];
        for g in &graphs {
            for k in 1..=6 {
                assert_eq!(
                    shared_path_matrix(g, k),
                    shared_by_enumeration(g, k),
                    "{g:?} k={k}"
                );
                assert_eq!(
                    exclusive_content_sums(g, k),
                    exclusive_sums_by_enumeration(g, k)
                );
            }
        }
    }

    #[test]
    fn violation_examples() {
        // two edges into vertex 2
        let lambda = nat(&[(0, 2, 1), (1, 2, 1)]);
        assert_eq!(chirvasitu_violation(&lambda, 2), Some((0, 1)));
        assert_eq!(
            chirvasitu_violation(&construct_extremal_loop(7, 3).unwrap(), 3),
            None
        );
        let disjoint = nat(&[(0, 1, 2), (2, 3, 5)]);
        assert_eq!(chirvasitu_violation(&disjoint, 1), Some((0, 1)));
        // opposite edges of a 4-loop never share a 2-path
        assert_eq!(chirvasitu_violation(&cycle(&[1, 1, 1, 1]), 2), Some((0, 2)));
    }

    #[test]
    fn merge_of_disjoint_edges_keeps_content() {
        let g = nat(&[(0, 1, 2), (2, 3, 5)]);
        let merged = merge_edges(&g, 0, 1, 1).unwrap();
        assert_eq!(merged, nat(&[(0, 1, 7)]));
        assert_eq!(count_k_paths(&merged, 1), count_k_paths(&g, 1));
    }

    #[test]
    fn merge_into_loop_strictly_increases() {
        // 3-loop plus a detached edge 4->3, which lies on no 3-path at all
        let g = nat(&[(0, 1, 2), (1, 2, 2), (2, 0, 2), (4, 3, 1)]);
        let sums = exclusive_content_sums(&g, 3);
        assert_eq!(sums[3], Label::zero());
        assert!(sums[0] > Label::zero());
        let before = count_k_paths(&g, 3);
        let merged = merge_edges(&g, 0, 3, 3).unwrap();
        let after = count_k_paths(&merged, 3);
        assert_eq!((before.clone(), after.clone()), (l(24), l(36)));
        // the gain is label(drop) * (sum_keep - sum_drop)
        assert_eq!(after, &before + &(&l(1) * &sums[0]));
        assert_eq!(merged.vertex_count(), 3);
    }

    #[test]
    fn merge_with_zero_sums_is_neutral() {
        // k = 3 and no 3-paths at all
        let g = nat(&[(0, 1, 3), (2, 3, 4)]);
        let merged = merge_edges(&g, 1, 0, 3).unwrap();
        assert_eq!(count_k_paths(&merged, 3), Label::zero());
        assert_eq!(merged.weight(), g.weight());
    }

    #[test]
    fn merge_preconditions() {
        let g = nat(&[(0, 1, 2), (1, 2, 2), (2, 0, 2), (4, 3, 1)]);
        assert_eq!(merge_edges(&g, 0, 0, 3), Err(OptimizeError::SameEdge(0)));
        assert_eq!(merge_edges(&g, 0, 9, 3), Err(OptimizeError::UnknownEdge(9)));
        assert_eq!(
            merge_edges(&g, 0, 1, 3),
            Err(OptimizeError::ShareAPath(0, 1))
        );
        assert_eq!(
            merge_edges(&g, 3, 0, 3),
            Err(OptimizeError::WrongOrientation { keep: 3, drop: 0 })
        );
    }

    #[test]
    fn classification_examples() {
        let path3 = nat(&[(0, 1, 1), (1, 2, 1), (2, 3, 1)]);
        assert_eq!(classify_extremal_shape(&path3, 3), ShapeClass::OpenPath(3));
        assert_eq!(
            classify_extremal_shape(&cycle(&[1, 1, 1, 1]), 3),
            ShapeClass::Loop(4)
        );
        assert_eq!(
            classify_extremal_shape(&cycle(&[1, 1, 1, 1, 1]), 3),
            ShapeClass::Loop(5)
        );
        assert!(matches!(
            classify_extremal_shape(&cycle(&[1; 6]), 3),
            ShapeClass::NotExtremal(NotExtremalReason::Chirvasitu(_, _))
        ));
        assert!(matches!(
            classify_extremal_shape(&cycle(&[1; 4]), 2),
            ShapeClass::NotExtremal(_)
        ));
    }

    #[test]
    fn classification_reasons() {
        use NotExtremalReason::*;
        let shape = |g: &Graph, k| classify_extremal_shape(g, k);
        assert_eq!(
            shape(&Graph::empty(Mode::Nat), 2),
            ShapeClass::NotExtremal(Empty)
        );
        assert_eq!(
            shape(&cycle(&[1, 1]), 3),
            ShapeClass::NotExtremal(ShortLoop(Girth::Finite(2)))
        );
        assert_eq!(
            shape(&nat(&[(0, 2, 1), (1, 2, 1)]), 2),
            ShapeClass::NotExtremal(Lambda(0, 1))
        );
        assert_eq!(
            shape(&nat(&[(0, 1, 1), (0, 2, 1)]), 2),
            ShapeClass::NotExtremal(Vee(0, 1))
        );
        assert_eq!(
            shape(&nat(&[(0, 1, 1), (2, 3, 1)]), 2),
            ShapeClass::NotExtremal(Disconnected)
        );
        assert_eq!(
            shape(&nat(&[(0, 1, 1), (1, 2, 1), (2, 3, 1)]), 2),
            ShapeClass::NotExtremal(Chirvasitu(0, 2))
        );
        assert_eq!(
            shape(&nat(&[(0, 1, 1)]), 2),
            ShapeClass::NotExtremal(WrongLength { edges: 1 })
        );
        assert_eq!(shape(&nat(&[(0, 0, 4)]), 1), ShapeClass::Loop(1));
        assert_eq!(shape(&nat(&[(0, 1, 4)]), 1), ShapeClass::OpenPath(1));
    }

    #[test]
    fn shrink_examples() {
        let g = cycle(&[1, 2, 2]);
        let s = shrink_loop(&g, 2).unwrap();
        assert_eq!(labels_in_loop_order(&s), vec![l(3), l(2)]);
        assert_eq!((count_k_paths(&g, 2), count_k_paths(&s, 2)), (l(8), l(12)));
        assert_eq!(girth(&s), Girth::Finite(2));

        let g = cycle(&[1, 1, 1, 1]);
        let s = shrink_loop(&g, 3).unwrap();
        assert_eq!(labels_in_loop_order(&s), vec![l(2), l(1), l(1)]);
        assert_eq!((count_k_paths(&g, 3), count_k_paths(&s, 3)), (l(4), l(6)));

        assert!(matches!(
            shrink_loop(&cycle(&[1, 1, 1]), 3),
            Err(OptimizeError::NotShrinkable { k: 3, .. })
        ));
        assert_eq!(
            shrink_loop(&nat(&[(0, 0, 2)]), 1),
            Err(OptimizeError::ShrinkNeedsLengthTwo)
        );
    }

    #[test]
    fn shrink_picks_lightest_edge_from_smallest_vertex() {
        // loop 5 -> 3 -> 9 -> 5; walking from vertex 3 meets 3->9 first
        let g = nat(&[(5, 3, 1), (3, 9, 1), (9, 5, 4)]);
        let s = shrink_loop(&g, 2).unwrap();
        assert_eq!(s, nat(&[(5, 3, 1), (3, 5, 5)]));
    }

    #[test]
    fn balance_examples() {
        let g = cycle(&[4, 1]);
        let r = balance_labels(&g, Mode::Rat).unwrap();
        assert!(r.edges().iter().all(|e| e.label == Label::ratio(5, 2)));
        assert_eq!(
            (count_k_paths(&g, 2), count_k_paths(&r, 2)),
            (l(8), Label::ratio(25, 2))
        );

        let n = balance_labels(&g, Mode::Nat).unwrap();
        assert_eq!(labels_in_loop_order(&n), vec![l(3), l(2)]);
        assert_eq!(count_k_paths(&n, 2), l(12));

        let balanced = cycle(&[2, 3, 3]);
        assert_eq!(balance_labels(&balanced, Mode::Nat).unwrap(), balanced);

        assert_eq!(
            balance_labels(&nat(&[(0, 1, 1), (1, 2, 1)]), Mode::Nat),
            Err(OptimizeError::NotALoop)
        );
        let thin = Graph::from_edges(
            Mode::Rat,
            vec![Edge::new(0, 1, Label::ratio(1, 2)), Edge::new(1, 0, 1u64)],
        )
        .unwrap();
        assert!(matches!(
            balance_labels(&thin, Mode::Nat),
            Err(OptimizeError::NonIntegerWeight(_))
        ));
        let light = Graph::from_edges(
            Mode::Rat,
            vec![
                Edge::new(0, 1, Label::ratio(1, 2)),
                Edge::new(1, 0, Label::ratio(1, 2)),
            ],
        )
        .unwrap();
        assert!(matches!(
            balance_labels(&light, Mode::Nat),
            Err(OptimizeError::WeightBelowLength { k: 2, .. })
        ));
    }

    #[test]
    fn optimize_fixed_point() {
        for (n, k) in [(6, 3), (7, 3), (5, 2), (9, 4)] {
            let start = construct_extremal_loop(n, k).unwrap();
            let (end, trace) = optimize(&start, k as usize, Mode::Nat).unwrap();
            assert_eq!(end, start);
            assert_eq!(trace.steps.len(), 1);
            assert_eq!(trace.steps[0].kind, StepKind::Balance);
            assert_eq!(trace.steps[0].ct_before, trace.steps[0].ct_after);
        }
    }

    #[test]
    fn optimize_four_loop_to_two_loop() {
        let (end, trace) = optimize(&cycle(&[1, 1, 1, 1]), 2, Mode::Nat).unwrap();
        assert_eq!(labels_in_loop_order(&end), vec![l(2), l(2)]);
        assert_eq!(count_k_paths(&end, 2), l(8));
        assert_eq!(Label::from(loop_bound(4, 2).unwrap()), l(8));
        assert_eq!(trace.count(StepKind::Merge), 2);
        assert_eq!(trace.count(StepKind::Close), 1);
    }

    #[test]
    fn optimize_k1_collapses_to_self_loop() {
        let g = nat(&[(0, 1, 2), (2, 3, 1), (1, 2, 3)]);
        let (end, _) = optimize(&g, 1, Mode::Nat).unwrap();
        assert_eq!(end.edge_count(), 1);
        assert_eq!(count_k_paths(&end, 1), l(6));
        assert_eq!(classify_extremal_shape(&end, 1), ShapeClass::Loop(1));
    }

    #[test]
    fn optimize_preconditions() {
        assert!(matches!(
            optimize(&cycle(&[1, 1]), 3, Mode::Nat),
            Err(OptimizeError::GirthViolated { k: 3, .. })
        ));
        assert_eq!(
            optimize(&nat(&[(0, 1, 1), (2, 3, 1)]), 2, Mode::Nat),
            Err(OptimizeError::NoKPaths(2))
        );
        assert!(matches!(
            optimize(&nat(&[(0, 1, 1)]), 1, Mode::Nat),
            Err(OptimizeError::WeightTooSmall(_))
        ));
        assert_eq!(
            optimize(&cycle(&[1, 1]), 0, Mode::Nat),
            Err(OptimizeError::ZeroLength)
        );
    }

    #[test]
    fn trace_lines_round_trip() {
        let (_, trace) = optimize(&cycle(&[1, 2, 1, 3, 1]), 3, Mode::Rat).unwrap();
        let text = trace.to_string();
        assert_eq!(text.lines().count(), trace.steps.len());
        assert_eq!(Trace::parse(&text).unwrap(), trace);
        assert!(Trace::parse("kind=merge\tedges=1").is_err());
    }
}
