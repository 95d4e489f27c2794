//! Series-parallel expression trees: parsing, realization as graphs, the
//! canonical form and the `alt` parameter, a vertex-cover dynamic program,
//! and recognition of melon graphs from plain graphs.
//!
//! A melon graph is a two-terminal graph obtained as the parallel
//! composition of internally vertex-disjoint source-sink paths; paths are
//! 1-melons and cycles are 2-melons. SP structure enters this toolkit only
//! through expressions or through melon recognition — there is no general
//! series-parallel recognition from edge lists.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexId};

/// A series-parallel expression: a single edge, or the series/parallel
/// composition of two smaller expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpTree {
    Leaf,
    Series(Box<SpTree>, Box<SpTree>),
    Parallel(Box<SpTree>, Box<SpTree>),
}

impl SpTree {
    pub fn series(left: SpTree, right: SpTree) -> SpTree {
        SpTree::Series(Box::new(left), Box::new(right))
    }

    pub fn parallel(left: SpTree, right: SpTree) -> SpTree {
        SpTree::Parallel(Box::new(left), Box::new(right))
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            SpTree::Leaf => 1,
            SpTree::Series(l, r) | SpTree::Parallel(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }
}

impl fmt::Display for SpTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpTree::Leaf => write!(f, "e"),
            SpTree::Series(l, r) => write!(f, "S({l},{r})"),
            SpTree::Parallel(l, r) => write!(f, "P({l},{r})"),
        }
    }
}

/// Parse failure, reporting a 1-based character offset into the input.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("syntax error at offset {offset}: {message}")]
pub struct SpParseError {
    pub offset: usize,
    pub message: String,
}

/// Parses the grammar `expr := "e" | "S(" expr "," expr ")" | "P(" expr ","
/// expr ")"`, with whitespace allowed between tokens. Round-trips through
/// the [`fmt::Display`] printer.
pub fn parse_sp(text: &str) -> Result<SpTree, SpParseError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let tree = parse_expr(bytes, &mut pos)?;
    skip_ws(bytes, &mut pos);
    if pos != bytes.len() {
        return Err(err_at(pos, "trailing input after expression"));
    }
    Ok(tree)
}

fn err_at(pos: usize, message: &str) -> SpParseError {
    SpParseError { offset: pos + 1, message: message.to_string() }
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn expect(bytes: &[u8], pos: &mut usize, ch: u8) -> Result<(), SpParseError> {
    skip_ws(bytes, pos);
    if *pos < bytes.len() && bytes[*pos] == ch {
        *pos += 1;
        Ok(())
    } else {
        Err(err_at(*pos, &format!("expected '{}'", ch as char)))
    }
}

fn parse_expr(bytes: &[u8], pos: &mut usize) -> Result<SpTree, SpParseError> {
    skip_ws(bytes, pos);
    match bytes.get(*pos) {
        Some(b'e') => {
            *pos += 1;
            Ok(SpTree::Leaf)
        }
        Some(kind @ (b'S' | b'P')) => {
            let kind = *kind;
            *pos += 1;
            expect(bytes, pos, b'(')?;
            let left = parse_expr(bytes, pos)?;
            expect(bytes, pos, b',')?;
            let right = parse_expr(bytes, pos)?;
            expect(bytes, pos, b')')?;
            Ok(if kind == b'S' {
                SpTree::series(left, right)
            } else {
                SpTree::parallel(left, right)
            })
        }
        _ => Err(err_at(*pos, "expected 'e', 'S(' or 'P('")),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RealizeError {
    #[error("parallel composition duplicates the edge ({0}, {1})")]
    MultiEdge(VertexId, VertexId),
}

/// Realizes an expression as a simple graph with source 0 and sink 1.
///
/// Junction vertices created by series compositions are numbered in
/// depth-first pre-order, which makes the numbering a pure function of the
/// expression text.
pub fn realize(sp: &SpTree) -> Result<(Graph, VertexId, VertexId), RealizeError> {
    let mut edges = Vec::new();
    let mut next = 2;
    collect_edges(sp, 0, 1, &mut next, &mut edges);
    let mut seen = BTreeSet::new();
    for &(a, b) in &edges {
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(RealizeError::MultiEdge(a.min(b), a.max(b)));
        }
    }
    let g = Graph::new(next, &edges).expect("realized edges are simple by construction");
    Ok((g, 0, 1))
}

fn collect_edges(
    sp: &SpTree,
    s: VertexId,
    t: VertexId,
    next: &mut VertexId,
    edges: &mut Vec<(VertexId, VertexId)>,
) {
    match sp {
        SpTree::Leaf => edges.push((s, t)),
        SpTree::Series(l, r) => {
            let mid = *next;
            *next += 1;
            collect_edges(l, s, mid, next, edges);
            collect_edges(r, mid, t, next, edges);
        }
        SpTree::Parallel(l, r) => {
            collect_edges(l, s, t, next, edges);
            collect_edges(r, s, t, next, edges);
        }
    }
}

/// Maximally merged form: no series node has a series child and no parallel
/// node has a parallel child, so internal levels strictly alternate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CanonicalSpTree {
    Leaf,
    Series(Vec<CanonicalSpTree>),
    Parallel(Vec<CanonicalSpTree>),
}

pub fn canonicalize(sp: &SpTree) -> CanonicalSpTree {
    match sp {
        SpTree::Leaf => CanonicalSpTree::Leaf,
        SpTree::Series(l, r) => CanonicalSpTree::Series(flatten(l, r, true)),
        SpTree::Parallel(l, r) => CanonicalSpTree::Parallel(flatten(l, r, false)),
    }
}

fn flatten(l: &SpTree, r: &SpTree, series: bool) -> Vec<CanonicalSpTree> {
    let mut children = Vec::new();
    for side in [l, r] {
        match (canonicalize(side), series) {
            (CanonicalSpTree::Series(mut inner), true) => children.append(&mut inner),
            (CanonicalSpTree::Parallel(mut inner), false) => children.append(&mut inner),
            (other, _) => children.push(other),
        }
    }
    children
}

/// Maximum number of series/parallel alternations on any root-to-leaf path
/// of the canonical decomposition. Melons have `alt <= 1`; pure series
/// chains have `alt = 0`.
pub fn alt(sp: &SpTree) -> usize {
    fn walk(t: &CanonicalSpTree, parent_series: Option<bool>) -> usize {
        let (children, series) = match t {
            CanonicalSpTree::Leaf => return 0,
            CanonicalSpTree::Series(ch) => (ch, true),
            CanonicalSpTree::Parallel(ch) => (ch, false),
        };
        let step = usize::from(parent_series.is_some_and(|p| p != series));
        step + children.iter().map(|c| walk(c, Some(series))).max().unwrap_or(0)
    }
    walk(&canonicalize(sp), None)
}

const INF: usize = usize::MAX / 4;

/// Vertex cover number of the realized graph, by dynamic programming over
/// the expression with four terminal states (source in the cover or not,
/// sink in the cover or not).
pub fn vc_sp(sp: &SpTree) -> Result<usize, RealizeError> {
    realize(sp)?; // reject multi-edge realizations up front
    let table = vc_states(sp);
    Ok(table.iter().flatten().copied().min().expect("nonempty table"))
}

/// `table[a][b]` = minimum cover size of the subgraph, counting the source
/// iff `a == 1` and the sink iff `b == 1`; `INF` marks infeasible states.
fn vc_states(sp: &SpTree) -> [[usize; 2]; 2] {
    match sp {
        SpTree::Leaf => [[INF, 1], [1, 2]],
        SpTree::Series(l, r) => {
            let (lt, rt) = (vc_states(l), vc_states(r));
            let mut out = [[INF; 2]; 2];
            for a in 0..2 {
                for b in 0..2 {
                    for mid in 0..2 {
                        // the merged junction vertex is counted once
                        let cost = lt[a][mid].saturating_add(rt[mid][b]).saturating_sub(mid);
                        out[a][b] = out[a][b].min(cost);
                    }
                }
            }
            out
        }
        SpTree::Parallel(l, r) => {
            let (lt, rt) = (vc_states(l), vc_states(r));
            let mut out = [[INF; 2]; 2];
            for a in 0..2 {
                for b in 0..2 {
                    // both terminals are shared, so subtract the double count
                    out[a][b] = lt[a][b].saturating_add(rt[a][b]).saturating_sub(a + b);
                }
            }
            out
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MelonStructureError {
    #[error("path {0} does not run from the source to the sink")]
    BadPathEndpoints(usize),
    #[error("two paths of length one would form a multi-edge")]
    TwoUnitPaths,
    #[error("vertex {0} appears in more than one path interior")]
    NotInternallyDisjoint(VertexId),
    #[error("vertex identifiers do not cover 0..n exactly")]
    BadNumbering,
    #[error("a melon needs at least one path")]
    Empty,
}

/// A melon graph presented by its source, sink and source-to-sink paths.
///
/// Paths are stored as full vertex sequences (source first, sink last) and
/// sorted by (length, smallest internal vertex id), which fixes a canonical
/// path order for strategies and reports. The parity partition indexes into
/// that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MelonStructure {
    source: VertexId,
    sink: VertexId,
    paths: Vec<Vec<VertexId>>,
    even_paths: Vec<usize>,
    odd_paths: Vec<usize>,
}

impl MelonStructure {
    pub fn new(
        source: VertexId,
        sink: VertexId,
        mut paths: Vec<Vec<VertexId>>,
    ) -> Result<MelonStructure, MelonStructureError> {
        if paths.is_empty() {
            return Err(MelonStructureError::Empty);
        }
        paths.sort_by_key(|p| (p.len(), p.iter().skip(1).rev().skip(1).min().copied()));
        let mut interior = BTreeSet::new();
        let mut unit_paths = 0;
        for (i, p) in paths.iter().enumerate() {
            if p.len() < 2 || p[0] != source || *p.last().unwrap() != sink {
                return Err(MelonStructureError::BadPathEndpoints(i));
            }
            if p.len() == 2 {
                unit_paths += 1;
            }
            for &v in &p[1..p.len() - 1] {
                if v == source || v == sink || !interior.insert(v) {
                    return Err(MelonStructureError::NotInternallyDisjoint(v));
                }
            }
        }
        if unit_paths > 1 {
            return Err(MelonStructureError::TwoUnitPaths);
        }
        let n = interior.len() + 2;
        let mut all: BTreeSet<VertexId> = interior;
        all.insert(source);
        all.insert(sink);
        if source == sink || all.len() != n || *all.iter().next_back().unwrap() != n - 1 {
            return Err(MelonStructureError::BadNumbering);
        }
        let (even_paths, odd_paths) = (0..paths.len()).partition(|&i| (paths[i].len() - 1) % 2 == 0);
        Ok(MelonStructure { source, sink, paths, even_paths, odd_paths })
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn sink(&self) -> VertexId {
        self.sink
    }

    /// Number of paths (`k` for a k-melon).
    pub fn k(&self) -> usize {
        self.paths.len()
    }

    /// Paths as full source-to-sink vertex sequences, in canonical order.
    pub fn paths(&self) -> &[Vec<VertexId>] {
        &self.paths
    }

    pub fn path(&self, i: usize) -> &[VertexId] {
        &self.paths[i]
    }

    /// Edge count of path `i`.
    pub fn path_len(&self, i: usize) -> usize {
        self.paths[i].len() - 1
    }

    pub fn lengths(&self) -> Vec<usize> {
        (0..self.k()).map(|i| self.path_len(i)).collect()
    }

    /// Indices of the even-length paths, ascending.
    pub fn even_paths(&self) -> &[usize] {
        &self.even_paths
    }

    /// Indices of the odd-length paths, ascending.
    pub fn odd_paths(&self) -> &[usize] {
        &self.odd_paths
    }

    pub fn vertex_count(&self) -> usize {
        2 + self.paths.iter().map(|p| p.len() - 2).sum::<usize>()
    }

    pub fn edge_count(&self) -> usize {
        self.paths.iter().map(|p| p.len() - 1).sum()
    }

    /// Rebuilds the melon as a [`Graph`], edges listed path by path from
    /// source to sink.
    pub fn to_graph(&self) -> Graph {
        let mut edges = Vec::with_capacity(self.edge_count());
        for p in &self.paths {
            for w in p.windows(2) {
                edges.push((w[0], w[1]));
            }
        }
        Graph::new(self.vertex_count(), &edges).expect("melon structure is a simple graph")
    }

    /// The unique path containing the edge `(u, v)`, if any.
    pub fn path_of_edge(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.paths.iter().position(|p| {
            p.windows(2)
                .any(|w| (w[0] == u && w[1] == v) || (w[0] == v && w[1] == u))
        })
    }
}

/// Recognizes paths (1-melons), cycles (2-melons) and proper k-melons from a
/// connected simple graph; returns `None` for anything else.
///
/// Deterministic choices: for `k >= 3` the source is the smaller-id vertex
/// of the two high-degree ones; for a path it is the smaller-id endpoint;
/// a cycle is split into its two arcs between vertices 0 and 1.
pub fn recognize_melon(g: &Graph) -> Result<Option<MelonStructure>, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let n = g.vertex_count();
    if n < 2 {
        return Ok(None);
    }
    let special: Vec<VertexId> = (0..n).filter(|&v| g.degree(v) != 2).collect();
    let structure = match special.as_slice() {
        [] => {
            // Every vertex has degree two: a single cycle through 0 and 1.
            let (s, t) = (0, 1);
            let mut arcs = Vec::new();
            for &first in g.neighbors(s) {
                if let Some(arc) = walk_chain(g, s, first, t) {
                    arcs.push(arc);
                }
            }
            if arcs.len() != 2 {
                return Ok(None);
            }
            MelonStructure::new(s, t, arcs).ok()
        }
        [a, b] if g.degree(*a) == 1 && g.degree(*b) == 1 => {
            let (s, t) = (*a.min(b), *a.max(b));
            walk_chain(g, s, g.neighbors(s)[0], t)
                .and_then(|p| MelonStructure::new(s, t, vec![p]).ok())
        }
        [a, b] if g.degree(*a) == g.degree(*b) && g.degree(*a) >= 3 => {
            let (s, t) = (*a.min(b), *a.max(b));
            let mut paths = Vec::with_capacity(g.degree(s));
            for &first in g.neighbors(s) {
                match walk_chain(g, s, first, t) {
                    Some(p) => paths.push(p),
                    None => return Ok(None),
                }
            }
            MelonStructure::new(s, t, paths).ok()
        }
        _ => None,
    };
    // A well-formed decomposition accounts for every vertex; anything else
    // (for example a chain running back into the source) was already
    // rejected by the walks or the structure validation.
    Ok(structure.filter(|m| m.vertex_count() == n))
}

/// Follows degree-2 vertices from `start`'s neighbor `first` until `target`;
/// `None` if the walk meets a vertex of other degree or returns to `start`.
fn walk_chain(
    g: &Graph,
    start: VertexId,
    first: VertexId,
    target: VertexId,
) -> Option<Vec<VertexId>> {
    let mut path = vec![start, first];
    let (mut prev, mut cur) = (start, first);
    while cur != target {
        if g.degree(cur) != 2 || cur == start {
            return None;
        }
        let next = *g.neighbors(cur).iter().find(|&&w| w != prev)?;
        path.push(next);
        prev = cur;
        cur = next;
    }
    Some(path)
}
