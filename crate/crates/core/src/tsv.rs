//! Tab-separated graph files.
//!
//! ```text
//! # mode: nat
//! # vertex: 7
//! 0    1    3
//! 1    0    1/2
//! ```
//!
//! One edge per line as `src<TAB>tgt<TAB>label`. Lines starting with `#` are
//! comments, except `# mode: nat|rat` and `# vertex: <id>` (declares a vertex
//! that may have no edges). Blank lines are ignored. Without a mode header the
//! mode is `nat` when every label is an integer and `rat` otherwise.

use std::fmt::Write as _;
use std::path::Path as FsPath;

use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError, VertexId};
use crate::semiring::{Label, Mode};

#[derive(Debug, Error)]
pub enum TsvError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> TsvError {
    TsvError::Syntax {
        line,
        message: message.into(),
    }
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "# mode: {}", g.mode()).unwrap();
    for v in g.isolated_vertices() {
        writeln!(out, "# vertex: {v}").unwrap();
    }
    for e in g.edges() {
        writeln!(out, "{}\t{}\t{}", e.src, e.tgt, e.label).unwrap();
    }
    out
}

pub fn read_graph(text: &str) -> Result<Graph, TsvError> {
    let mut mode = None;
    let mut declared = Vec::new();
    let mut edges = Vec::new();
    let mut edge_lines = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(comment) = line.trim_start().strip_prefix('#') {
            let comment = comment.trim();
            if let Some(value) = comment.strip_prefix("mode:") {
                if mode.is_some() {
                    return Err(syntax(lineno, "duplicate mode header"));
                }
                mode = Some(value.parse::<Mode>().map_err(|m| syntax(lineno, m))?);
            } else if let Some(value) = comment.strip_prefix("vertex:") {
                let v = value
                    .trim()
                    .parse::<VertexId>()
                    .map_err(|_| syntax(lineno, format!("bad vertex id `{}`", value.trim())))?;
                declared.push(v);
            }
            continue;
        }

        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(syntax(
                lineno,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        let vertex = |s: &str| {
            s.trim()
                .parse::<VertexId>()
                .map_err(|_| syntax(lineno, format!("bad vertex id `{s}`")))
        };
        let src = vertex(fields[0])?;
        let tgt = vertex(fields[1])?;
        let label: Label = fields[2]
            .parse()
            .map_err(|e| syntax(lineno, format!("bad label: {e}")))?;
        edges.push(Edge::new(src, tgt, label));
        edge_lines.push(lineno);
    }

    let mode = mode.unwrap_or_else(|| {
        if edges.iter().all(|e| e.label.is_integer()) {
            Mode::Nat
        } else {
            Mode::Rat
        }
    });
    let vertices: Vec<VertexId> = declared
        .into_iter()
        .chain(edges.iter().flat_map(|e| [e.src, e.tgt]))
        .collect();

    Graph::new(mode, vertices, edges).map_err(|err| {
        // point at the offending line where we can
        let edge = match &err {
            GraphError::RepeatedEdge { second, .. } => Some(*second),
            GraphError::ZeroLabel { edge } | GraphError::NonIntegerLabel { edge, .. } => {
                Some(*edge)
            }
            _ => None,
        };
        match edge {
            Some(id) => syntax(edge_lines[id], err.to_string()),
            None => TsvError::Graph(err),
        }
    })
}

pub fn load_graph(path: impl AsRef<FsPath>) -> Result<Graph, TsvError> {
    read_graph(&std::fs::read_to_string(path)?)
}

pub fn save_graph(path: impl AsRef<FsPath>, g: &Graph) -> Result<(), TsvError> {
    std::fs::write(path, write_graph(g))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_a_commented_file() {
        let g =
            read_graph("# mode: rat\n# a comment\n\n0\t1\t1/2\n1\t0\t3\n# vertex: 9\n").unwrap();
        assert_eq!(g.mode(), Mode::Rat);
        assert_eq!(g.vertices(), &[0, 1, 9]);
        assert_eq!(g.edge(0).label, Label::ratio(1, 2));
    }

    #[test]
    fn infers_mode_without_header() {
        assert_eq!(read_graph("0\t1\t2\n").unwrap().mode(), Mode::Nat);
        assert_eq!(read_graph("0\t1\t2/3\n").unwrap().mode(), Mode::Rat);
    }

    #[test]
    fn writer_output_is_stable() {
        let text = "# mode: nat\n# vertex: 4\n0\t1\t3\n1\t2\t2\n";
        let g = read_graph(text).unwrap();
        assert_eq!(write_graph(&g), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let line_of = |text: &str| match read_graph(text) {
            Err(TsvError::Syntax { line, .. }) => line,
            other => panic!("expected syntax error, got {other:?}"),
        };
        assert_eq!(line_of("0\t1\t1\n0\t1\n"), 2);
        assert_eq!(line_of("# mode: nat\n0\t1\tx\n"), 2);
        assert_eq!(line_of("# mode: nat\n0\t1\t1/2\n"), 2);
        assert_eq!(line_of("0\t1\t1\n\n0\t1\t2\n"), 3);
        assert_eq!(line_of("0\t1\t0\n"), 1);
        assert_eq!(line_of("# mode: both\n"), 1);
        assert_eq!(line_of("-1\t1\t1\n"), 1);
    }
}
