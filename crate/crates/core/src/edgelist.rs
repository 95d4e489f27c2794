//! Plain-text edge list format.
//!
//! One edge per line as two whitespace-separated decimal vertex ids. Lines
//! starting with `#` and blank lines are ignored. The vertex count is one
//! plus the largest id, unless an optional leading header line `n <count>`
//! overrides it.

use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EdgeListError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn parse_err(line: usize, message: impl Into<String>) -> EdgeListError {
    EdgeListError::Parse { line, message: message.into() }
}

pub fn parse_edge_list(text: &str) -> Result<Graph, EdgeListError> {
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut declared_n: Option<usize> = None;
    let mut saw_edge = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let first = fields.next().expect("nonempty line");
        if first == "n" {
            if saw_edge || declared_n.is_some() {
                return Err(parse_err(line_no, "header 'n <count>' must come first"));
            }
            let count = fields
                .next()
                .ok_or_else(|| parse_err(line_no, "header 'n' needs a count"))?;
            if fields.next().is_some() {
                return Err(parse_err(line_no, "header has trailing fields"));
            }
            declared_n = Some(
                count
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad vertex count '{count}'")))?,
            );
            continue;
        }
        let second = fields
            .next()
            .ok_or_else(|| parse_err(line_no, "expected two vertex ids"))?;
        if fields.next().is_some() {
            return Err(parse_err(line_no, "expected exactly two vertex ids"));
        }
        let u: VertexId = first
            .parse()
            .map_err(|_| parse_err(line_no, format!("bad vertex id '{first}'")))?;
        let v: VertexId = second
            .parse()
            .map_err(|_| parse_err(line_no, format!("bad vertex id '{second}'")))?;
        edges.push((u, v));
        saw_edge = true;
    }
    let n = declared_n
        .unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    Ok(Graph::new(n, &edges)?)
}

/// Serializes a graph in the same format, header included so that isolated
/// trailing vertices survive a round trip.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.vertex_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}
