//! Counting and maximizing paths of length `k` in labelled directed graphs
//! whose loops all have length at least `k`.
//!
//! Labels are exact non-negative rationals ([`semiring::Label`]). A graph is
//! either in `nat` mode (positive integer labels, read as edge multiplicities)
//! or `rat` mode (positive rational labels).

pub mod canon;
pub mod extremal;
pub mod graph;
pub mod optimizer;
pub mod oracle;
pub mod paths;
pub mod random;
pub mod semiring;
pub mod tsv;

pub use canon::{are_isomorphic, canonical_graph, iso_key, IsoKey};
pub use extremal::{
    acyclic_bound, construct_extremal_acyclic, construct_extremal_loop,
    construct_extremal_rational, loop_bound, semiring_bound, BoundError,
};
pub use graph::{Edge, EdgeId, Graph, GraphError, Multigraph, VertexId};
pub use optimizer::{optimize, ShapeClass, StepKind, Trace, TraceStep};
pub use oracle::{
    enumerate_graphs, verify_acyclic_bound, verify_bound, VerifyOptions, VerifyReport,
};
pub use paths::{count_k_paths, enumerate_k_paths, girth, Girth, Path, PathError};
pub use semiring::{Label, Mode};
