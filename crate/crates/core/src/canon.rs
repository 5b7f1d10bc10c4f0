//! Canonical forms of labelled digraphs up to vertex relabelling.
//!
//! Connected pieces are canonized by individualization-refinement: colour
//! classes are refined by the labelled in/out neighbourhoods until stable,
//! then the first non-trivial class is split on each of its vertices in turn.
//! Every discrete colouring reached is a candidate relabelling and the
//! lexicographically least sorted edge list wins. Components are canonized
//! separately and listed in sorted order.

use std::collections::BTreeMap;

use crate::graph::{Edge, Graph};
use crate::semiring::{Label, Mode};

/// Edge list `(src, tgt, label)` over vertices `0..n`.
pub(crate) type Triples<L> = Vec<(usize, usize, L)>;

/// An isomorphism invariant that determines the graph up to isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoKey {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize, Label)>,
}

impl IsoKey {
    /// The representative graph on vertices `0..vertex_count`.
    pub fn to_graph(&self, mode: Mode) -> Graph {
        let edges = self
            .edges
            .iter()
            .map(|(s, t, l)| Edge::new(*s, *t, l.clone()))
            .collect();
        Graph::new(mode, 0..self.vertex_count, edges).expect("canonical form is valid")
    }
}

/// Canonical key of `g`; equal keys iff the graphs are isomorphic.
pub fn iso_key(g: &Graph) -> IsoKey {
    // labels are replaced by their rank so the search works on small ints
    let distinct: Vec<Label> = {
        let mut ls: Vec<Label> = g.edges().iter().map(|e| e.label.clone()).collect();
        ls.sort();
        ls.dedup();
        ls
    };
    let rank = |l: &Label| distinct.binary_search(l).unwrap() as u32;
    let triples: Triples<u32> = g
        .edges()
        .iter()
        .map(|e| (g.dense(e.src), g.dense(e.tgt), rank(&e.label)))
        .collect();
    let (n, edges) = canonical_form(g.vertex_count(), &triples);
    IsoKey {
        vertex_count: n,
        edges: edges
            .into_iter()
            .map(|(s, t, r)| (s, t, distinct[r as usize].clone()))
            .collect(),
    }
}

/// Relabels `g` into its canonical representative.
pub fn canonical_graph(g: &Graph) -> Graph {
    iso_key(g).to_graph(g.mode())
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && iso_key(a) == iso_key(b)
}

/// Canonical edge list of an arbitrary graph: components canonized on their
/// own, ordered by `(size, edges)` and laid out consecutively.
pub(crate) fn canonical_form(n: usize, edges: &[(usize, usize, u32)]) -> (usize, Triples<u32>) {
    let comps = components(n, edges);
    if comps.len() <= 1 {
        return (n, canonical_connected(n, edges));
    }
    let mut pieces: Vec<(usize, Triples<u32>)> = comps
        .into_iter()
        .map(|vs| {
            let local: BTreeMap<usize, usize> =
                vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let sub: Triples<u32> = edges
                .iter()
                .filter(|(s, _, _)| local.contains_key(s))
                .map(|&(s, t, l)| (local[&s], local[&t], l))
                .collect();
            (vs.len(), canonical_connected(vs.len(), &sub))
        })
        .collect();
    pieces.sort();
    let mut out = Vec::with_capacity(edges.len());
    let mut offset = 0;
    for (size, sub) in pieces {
        out.extend(sub.into_iter().map(|(s, t, l)| (s + offset, t + offset, l)));
        offset += size;
    }
    (n, out)
}

fn components(n: usize, edges: &[(usize, usize, u32)]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for &(s, t, _) in edges {
        let (a, b) = (find(&mut parent, s), find(&mut parent, t));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    groups.into_values().collect()
}

/// A vertex's colour with its sorted labelled out- and in-neighbour colours.
type Signature = (usize, Vec<(u32, usize)>, Vec<(u32, usize)>);

struct Adjacency {
    out: Vec<Vec<(u32, usize)>>,
    inc: Vec<Vec<(u32, usize)>>,
}

/// Canonical sorted edge list of a graph treated as one piece.
pub(crate) fn canonical_connected(n: usize, edges: &[(usize, usize, u32)]) -> Triples<u32> {
    if n <= 1 {
        let mut e = edges.to_vec();
        e.sort();
        return e;
    }
    let mut adj = Adjacency {
        out: vec![Vec::new(); n],
        inc: vec![Vec::new(); n],
    };
    for &(s, t, l) in edges {
        adj.out[s].push((l, t));
        adj.inc[t].push((l, s));
    }
    let mut best: Option<Triples<u32>> = None;
    let mut colours = vec![0usize; n];
    refine(&adj, &mut colours);
    search(&adj, edges, colours, &mut best);
    best.expect("search reaches at least one leaf")
}

fn search(
    adj: &Adjacency,
    edges: &[(usize, usize, u32)],
    colours: Vec<usize>,
    best: &mut Option<Triples<u32>>,
) {
    let n = colours.len();
    let mut sizes = vec![0usize; n];
    for &c in &colours {
        sizes[c] += 1;
    }
    let Some(cell) = (0..n).find(|&c| sizes[c] > 1) else {
        let mut relabelled: Triples<u32> = edges
            .iter()
            .map(|&(s, t, l)| (colours[s], colours[t], l))
            .collect();
        relabelled.sort_unstable();
        if best.as_ref().is_none_or(|b| relabelled < *b) {
            *best = Some(relabelled);
        }
        return;
    };
    for v in (0..n).filter(|&v| colours[v] == cell) {
        // v takes the lower half of its cell
        let mut split: Vec<usize> = colours
            .iter()
            .enumerate()
            .map(|(u, &c)| 2 * c + usize::from(c == cell && u != v))
            .collect();
        compress(&mut split);
        refine(adj, &mut split);
        search(adj, edges, split, best);
    }
}

fn compress(colours: &mut [usize]) {
    let mut seen: Vec<usize> = colours.to_vec();
    seen.sort_unstable();
    seen.dedup();
    for c in colours.iter_mut() {
        *c = seen.binary_search(c).unwrap();
    }
}

/// Splits colour classes by labelled neighbourhood signatures until stable.
fn refine(adj: &Adjacency, colours: &mut [usize]) {
    let n = colours.len();
    let mut classes = {
        let mut c = colours.to_vec();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    loop {
        let signatures: Vec<Signature> = (0..n)
            .map(|v| {
                let mut out: Vec<(u32, usize)> =
                    adj.out[v].iter().map(|&(l, t)| (l, colours[t])).collect();
                let mut inc: Vec<(u32, usize)> =
                    adj.inc[v].iter().map(|&(l, s)| (l, colours[s])).collect();
                out.sort_unstable();
                inc.sort_unstable();
                (colours[v], out, inc)
            })
            .collect();
        let mut distinct: Vec<&Signature> = signatures.iter().collect();
        distinct.sort();
        distinct.dedup();
        for v in 0..n {
            colours[v] = distinct.binary_search(&&signatures[v]).unwrap();
        }
        if distinct.len() == classes {
            return;
        }
        classes = distinct.len();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(edges: &[(usize, usize, u64)]) -> Graph {
        Graph::from_edges(
            Mode::Nat,
            edges.iter().map(|&(s, t, l)| Edge::new(s, t, l)).collect(),
        )
        .unwrap()
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    /// Minimum over every vertex permutation.
    fn brute_force_min(g: &Graph) -> Vec<(usize, usize, Label)> {
        let g = g.compacted();
        permutations(g.vertex_count())
            .into_iter()
            .map(|perm| {
                let mut es: Vec<_> = g
                    .edges()
                    .iter()
                    .map(|e| (perm[e.src], perm[e.tgt], e.label.clone()))
                    .collect();
                es.sort();
                es
            })
            .min()
            .unwrap()
    }

    fn relabel(g: &Graph, map: &[usize]) -> Graph {
        let edges = g
            .edges()
            .iter()
            .map(|e| Edge::new(map[e.src], map[e.tgt], e.label.clone()))
            .collect();
        Graph::new(g.mode(), g.vertices().iter().map(|&v| map[v]), edges).unwrap()
    }

    #[test]
    fn relabelled_graphs_share_a_key() {
        let g = nat(&[
            (0, 1, 2),
            (1, 2, 1),
            (2, 0, 1),
            (2, 3, 3),
            (3, 3, 1),
            (4, 5, 1),
        ]);
        let perms: [&[usize]; 3] = [
            &[5, 4, 3, 2, 1, 0],
            &[1, 0, 3, 2, 5, 4],
            &[3, 5, 0, 1, 4, 2],
        ];
        for map in perms {
            assert_eq!(iso_key(&relabel(&g, map)), iso_key(&g));
        }
    }

    #[test]
    fn labels_and_directions_distinguish() {
        let a = nat(&[(0, 1, 1), (1, 2, 2)]);
        let b = nat(&[(0, 1, 2), (1, 2, 1)]);
        assert!(!are_isomorphic(&a, &b));
        let c = nat(&[(0, 1, 1), (2, 1, 2)]);
        assert!(!are_isomorphic(&a, &c));
        assert!(are_isomorphic(&b, &a.opposite()));
    }

    #[test]
    fn isolated_vertices_count() {
        let a = Graph::new(Mode::Nat, [0, 1, 2], vec![Edge::new(0, 1, 1u64)]).unwrap();
        let b = nat(&[(0, 1, 1)]);
        assert_ne!(iso_key(&a), iso_key(&b));
        assert_eq!(iso_key(&a).vertex_count, 3);
    }

    #[test]
    fn keys_agree_with_brute_force_isomorphism() {
        let graphs = [
            nat(&[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]),
            nat(&[
                (0, 1, 1),
                (1, 0, 1),
                (1, 2, 1),
                (2, 1, 1),
                (2, 0, 1),
                (0, 2, 1),
            ]),
            nat(&[(0, 1, 2), (1, 2, 1), (2, 0, 1), (0, 0, 1), (3, 1, 1)]),
            nat(&[(2, 0, 1), (2, 1, 1), (2, 3, 1), (3, 4, 2)]),
            nat(&[(0, 0, 3)]),
        ];
        for g in &graphs {
            let key = iso_key(g);
            assert_eq!(
                brute_force_min(&key.to_graph(Mode::Nat)),
                brute_force_min(g)
            );
            for perm in permutations(g.vertex_count()) {
                assert_eq!(iso_key(&relabel(g, &perm)), key, "{g:?}");
            }
        }
        for a in &graphs {
            for b in &graphs {
                assert_eq!(
                    iso_key(a) == iso_key(b),
                    brute_force_min(a) == brute_force_min(b)
                );
            }
        }
    }

    #[test]
    fn canonical_graph_is_a_fixed_point() {
        let g = nat(&[(7, 3, 1), (3, 9, 2), (9, 7, 1), (1, 2, 1)]);
        let c = canonical_graph(&g);
        assert!(are_isomorphic(&g, &c));
        assert_eq!(canonical_graph(&c), c);
    }
}
