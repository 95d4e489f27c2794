//! Deterministic generators: melons from path-length lists, and the `G_k`
//! family of biconnected series-parallel graphs whose eternal vertex cover
//! number exceeds the vertex cover number by at least `k`.

use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::sp::{realize, MelonStructure, SpTree};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("a melon needs at least one path")]
    EmptySpec,
    #[error("path lengths must be positive")]
    ZeroLength,
    #[error("two paths of length one would form a multi-edge")]
    TwoUnitPaths,
    #[error("the separation family is defined for k >= 2, got {0}")]
    KTooSmall(usize),
}

/// Path-length multiset describing a melon. At most one length may be 1,
/// otherwise the parallel composition would duplicate the source-sink edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MelonSpec {
    lengths: Vec<usize>,
}

impl MelonSpec {
    pub fn new(lengths: Vec<usize>) -> Result<MelonSpec, FamilyError> {
        if lengths.is_empty() {
            return Err(FamilyError::EmptySpec);
        }
        if lengths.contains(&0) {
            return Err(FamilyError::ZeroLength);
        }
        if lengths.iter().filter(|&&l| l == 1).count() > 1 {
            return Err(FamilyError::TwoUnitPaths);
        }
        Ok(MelonSpec { lengths })
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }
}

/// Builds the melon with the given path lengths under the canonical
/// numbering: source 0, sink 1, and the internal vertices of each path
/// (paths sorted by length, ties by input position) numbered consecutively
/// in source-to-sink order starting at 2.
pub fn melon_graph(spec: &MelonSpec) -> (Graph, MelonStructure) {
    let mut order: Vec<usize> = (0..spec.lengths.len()).collect();
    order.sort_by_key(|&i| (spec.lengths[i], i));
    let mut next: VertexId = 2;
    let mut paths = Vec::with_capacity(order.len());
    for &i in &order {
        let mut path = vec![0];
        for _ in 1..spec.lengths[i] {
            path.push(next);
            next += 1;
        }
        path.push(1);
        paths.push(path);
    }
    let structure = MelonStructure::new(0, 1, paths).expect("validated spec yields a melon");
    let graph = structure.to_graph();
    (graph, structure)
}

/// The series-parallel expression of a melon: a right-nested parallel of
/// right-nested series chains, one per path in canonical order. For
/// generator-produced melons, realizing the expression reproduces the exact
/// vertex numbering of [`melon_graph`].
pub fn sp_expression_of_melon(m: &MelonStructure) -> SpTree {
    let chain = |len: usize| {
        let mut t = SpTree::Leaf;
        for _ in 1..len {
            t = SpTree::series(SpTree::Leaf, t);
        }
        t
    };
    let mut paths = m.lengths().into_iter().rev().map(chain);
    let first = paths.next().expect("melons have at least one path");
    paths.fold(first, |acc, p| SpTree::parallel(p, acc))
}

/// Specification of the separation family member `G_k`, defined for
/// `k >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GkSpec {
    k: usize,
}

impl GkSpec {
    pub fn new(k: usize) -> Result<GkSpec, FamilyError> {
        if k < 2 {
            return Err(FamilyError::KTooSmall(k));
        }
        Ok(GkSpec { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Generated `G_k` instance: the graph, its series-parallel expression, the
/// hub vertices, and the two certified parameters.
#[derive(Debug, Clone)]
pub struct GkGraph {
    pub graph: Graph,
    pub tree: SpTree,
    /// The k high-degree hub vertices `s_1..s_k` (one per block), each
    /// joining a 2-path from the source to a private complete-bipartite
    /// block toward the sink.
    pub hubs: Vec<VertexId>,
    /// Vertex cover number, `k + 2`.
    pub expected_vc: usize,
    /// Certified lower bound on the eternal vertex cover number, `2k + 2`.
    pub evc_lower_bound: usize,
}

/// Builds `G_k`: the parallel composition of one `(k+3)`-melon of 2-paths
/// (a complete bipartite block between source and sink) with `k` copies of
/// that block placed behind a 2-path on the source side.
pub fn g_k(spec: &GkSpec) -> GkGraph {
    let k = spec.k();
    // block = the (k+3)-melon with every path of length 2
    let block = || {
        let two_path = || SpTree::series(SpTree::Leaf, SpTree::Leaf);
        let mut t = two_path();
        for _ in 1..k + 3 {
            t = SpTree::parallel(two_path(), t);
        }
        t
    };
    let hub_branch = || SpTree::series(SpTree::series(SpTree::Leaf, SpTree::Leaf), block());
    let mut tree = block();
    for _ in 0..k {
        tree = SpTree::parallel(hub_branch(), tree);
    }
    let (graph, _, _) = realize(&tree).expect("G_k is simple");

    // Pre-order junction numbering puts each hub first in its branch.
    let block_span = k + 5;
    let hubs: Vec<VertexId> = (0..k).map(|i| 2 + i * block_span).collect();
    let n = 2 + (k + 3) + k * (k + 5);
    debug_assert_eq!(graph.vertex_count(), n);
    debug_assert!(hubs.iter().all(|&h| graph.degree(h) == k + 4));

    GkGraph {
        graph,
        tree,
        hubs,
        expected_vc: k + 2,
        evc_lower_bound: 2 * k + 2,
    }
}
