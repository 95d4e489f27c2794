//! Simple undirected graphs and the guard-game primitives on top of them:
//! vertex covers, guard configurations, and defense functions.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so everything here can be shared freely across threads.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Vertex identifiers are dense indices `0..n`.
pub type VertexId = usize;

/// Largest vertex count accepted by [`min_vertex_covers_bruteforce`].
pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop ({0}, {0})")]
    SelfLoop(VertexId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(VertexId, VertexId),
    #[error("edge ({0}, {1}) has an endpoint out of range for {2} vertices")]
    EndpointOutOfRange(VertexId, VertexId, usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("({0}, {1}) is not an edge of the graph")]
    NotAnEdge(VertexId, VertexId),
    #[error("vertex count {n} exceeds the brute-force limit {limit}")]
    LimitExceeded { n: usize, limit: usize },
}

/// Why a proposed defense function was rejected.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DefenseError {
    #[error("two guards both move to vertex {0}")]
    NotInjective(VertexId),
    #[error("guard on {0} cannot reach {1}: not in its closed neighborhood")]
    IllegalMove(VertexId, VertexId),
    #[error("no guard crosses the attacked edge ({0}, {1})")]
    EdgeNotProtected(VertexId, VertexId),
    #[error("defense domain differs from the occupied vertex set")]
    DomainMismatch,
}

/// A simple undirected graph with vertices `0..n`.
///
/// Edges keep their construction order so that reports and enumeration are
/// reproducible; the adjacency lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<VertexId>>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, duplicate
    /// edges and out-of-range endpoints.
    pub fn new(n: usize, edge_list: &[(VertexId, VertexId)]) -> Result<Graph, GraphError> {
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut seen = BTreeSet::new();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edge_list {
            if a >= n || b >= n {
                return Err(GraphError::EndpointOutOfRange(a, b, n));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
            edges.push(e);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph { n, edges, adjacency })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in construction order, normalized as `(min, max)` pairs.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n && v < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// `v ∈ N[u]`, the closed neighborhood of `u`.
    pub fn in_closed_neighborhood(&self, u: VertexId, v: VertexId) -> bool {
        u == v || self.has_edge(u, v)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// True iff every edge has at least one endpoint in `c`.
    pub fn is_vertex_cover(&self, c: &Configuration) -> bool {
        self.edges.iter().all(|&(a, b)| c.contains(a) || c.contains(b))
    }

    /// The unique 2-coloring of a connected bipartite graph, with the side
    /// containing vertex 0 listed first. Returns `None` when an odd cycle is
    /// found.
    pub fn bipartition(&self) -> Result<Option<(Vec<VertexId>, Vec<VertexId>)>, GraphError> {
        if self.n == 0 {
            return Ok(Some((Vec::new(), Vec::new())));
        }
        let mut color = vec![None; self.n];
        let mut queue = VecDeque::from([0]);
        color[0] = Some(false);
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                match color[w] {
                    None => {
                        color[w] = Some(!color[u].unwrap());
                        queue.push_back(w);
                    }
                    Some(cw) => {
                        if cw == color[u].unwrap() {
                            return Ok(None);
                        }
                    }
                }
            }
        }
        if color.iter().any(Option::is_none) {
            return Err(GraphError::Disconnected);
        }
        let side_a: Vec<_> = (0..self.n).filter(|&v| color[v] == Some(false)).collect();
        let side_b: Vec<_> = (0..self.n).filter(|&v| color[v] == Some(true)).collect();
        Ok(Some((side_a, side_b)))
    }
}

/// A guard placement: a set of occupied vertices, at most one guard per
/// vertex. Kept sorted, so the derived `Ord` is the lexicographic order on
/// vertex sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Configuration {
    occupied: Vec<VertexId>,
}

impl Configuration {
    pub fn new<I: IntoIterator<Item = VertexId>>(vertices: I) -> Configuration {
        let mut occupied: Vec<_> = vertices.into_iter().collect();
        occupied.sort_unstable();
        occupied.dedup();
        Configuration { occupied }
    }

    pub fn occupied(&self) -> &[VertexId] {
        &self.occupied
    }

    pub fn len(&self) -> usize {
        self.occupied.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupied.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.occupied.binary_search(&v).is_ok()
    }
}

impl FromIterator<VertexId> for Configuration {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Configuration {
        Configuration::new(iter)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.occupied.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// An attacked edge. Construction checks that the pair is an edge of the
/// graph, so a value of this type always denotes a legal attack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Attack {
    u: VertexId,
    v: VertexId,
}

impl Attack {
    pub fn new(g: &Graph, u: VertexId, v: VertexId) -> Result<Attack, GraphError> {
        if !g.has_edge(u, v) {
            return Err(GraphError::NotAnEdge(u, v));
        }
        Ok(Attack { u: u.min(v), v: u.max(v) })
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }
}

impl fmt::Display for Attack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// An injective map sending each guard to a vertex of its closed
/// neighborhood. Guards not mentioned explicitly are *not* implied to stay:
/// the domain must equal the occupied set, so identity moves are stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DefenseFunction {
    moves: BTreeMap<VertexId, VertexId>,
}

impl DefenseFunction {
    pub fn new() -> DefenseFunction {
        DefenseFunction::default()
    }

    /// Identity defense on an occupied set; individual moves are then
    /// overridden with [`DefenseFunction::set`].
    pub fn identity_on(c: &Configuration) -> DefenseFunction {
        DefenseFunction {
            moves: c.occupied().iter().map(|&v| (v, v)).collect(),
        }
    }

    pub fn from_moves<I: IntoIterator<Item = (VertexId, VertexId)>>(moves: I) -> DefenseFunction {
        DefenseFunction { moves: moves.into_iter().collect() }
    }

    pub fn set(&mut self, from: VertexId, to: VertexId) {
        self.moves.insert(from, to);
    }

    pub fn target(&self, from: VertexId) -> Option<VertexId> {
        self.moves.get(&from).copied()
    }

    pub fn moves(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.moves
    }

    /// The moves that actually displace a guard, in source order.
    pub fn proper_moves(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.moves.iter().filter(|(a, b)| a != b).map(|(&a, &b)| (a, b))
    }
}

impl fmt::Display for DefenseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, b)) in self.proper_moves().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}->{b}")?;
        }
        write!(f, "}}")
    }
}

/// Applies a defense function to a configuration under an attack.
///
/// Checks, in order: the domain equals the occupied set, every move stays in
/// the mover's closed neighborhood, the map is injective, and some guard
/// crosses the attacked edge. Guards move in parallel, so swapping the two
/// guards of a double-guarded edge is legal.
pub fn apply_defense(
    g: &Graph,
    c: &Configuration,
    d: &DefenseFunction,
    a: Attack,
) -> Result<Configuration, DefenseError> {
    if d.moves().len() != c.len() || !d.moves().keys().all(|&v| c.contains(v)) {
        return Err(DefenseError::DomainMismatch);
    }
    let mut targets = BTreeSet::new();
    for (&from, &to) in d.moves() {
        if !g.in_closed_neighborhood(from, to) {
            return Err(DefenseError::IllegalMove(from, to));
        }
        if !targets.insert(to) {
            return Err(DefenseError::NotInjective(to));
        }
    }
    let (u, v) = a.endpoints();
    let crosses = (c.contains(u) && d.target(u) == Some(v))
        || (c.contains(v) && d.target(v) == Some(u));
    if !crosses {
        return Err(DefenseError::EdgeNotProtected(u, v));
    }
    Ok(Configuration::new(targets))
}

/// All minimum vertex covers under the default size limit.
///
/// Returns the vertex cover number together with every cover of that size in
/// lexicographic order.
pub fn min_vertex_covers_bruteforce(
    g: &Graph,
) -> Result<(usize, Vec<Configuration>), GraphError> {
    min_vertex_covers_bruteforce_with_limit(g, DEFAULT_BRUTE_FORCE_LIMIT)
}

/// Same as [`min_vertex_covers_bruteforce`] with an explicit vertex-count
/// limit for callers that accept the blowup.
pub fn min_vertex_covers_bruteforce_with_limit(
    g: &Graph,
    limit: usize,
) -> Result<(usize, Vec<Configuration>), GraphError> {
    if g.vertex_count() > limit {
        return Err(GraphError::LimitExceeded { n: g.vertex_count(), limit });
    }
    for k in 0..=g.vertex_count() {
        let covers = covers_of_size(g, k);
        if !covers.is_empty() {
            return Ok((k, covers));
        }
    }
    unreachable!("the full vertex set is always a cover");
}

/// All vertex covers of exactly `k` vertices, in lexicographic order.
/// Shared with the game oracle; limits are enforced by callers.
pub(crate) fn covers_of_size(g: &Graph, k: usize) -> Vec<Configuration> {
    let n = g.vertex_count();
    // Edge-mask fast path: vertex v covers the edge set `mask[v]`.
    if g.edge_count() <= 128 {
        let mut mask = vec![0u128; n];
        for (i, &(a, b)) in g.edges().iter().enumerate() {
            mask[a] |= 1 << i;
            mask[b] |= 1 << i;
        }
        let full: u128 = if g.edge_count() == 128 {
            u128::MAX
        } else {
            (1u128 << g.edge_count()) - 1
        };
        crate::combo::k_subsets(n, k)
            .filter(|s| s.iter().fold(0u128, |acc, &v| acc | mask[v]) == full)
            .map(Configuration::new)
            .collect()
    } else {
        crate::combo::k_subsets(n, k)
            .map(Configuration::new)
            .filter(|c| g.is_vertex_cover(c))
            .collect()
    }
}
