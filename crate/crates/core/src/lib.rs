//! Toolkit for the eternal vertex cover game on melon and series-parallel
//! graphs.
//!
//! A melon graph is the parallel composition of internally vertex-disjoint
//! paths between a source and a sink. For this class the eternal vertex
//! cover number is computable in linear time by a case analysis on the path
//! parities, and each case comes with an explicit family of guard
//! configurations together with a defense function for every attack. This
//! crate implements:
//!
//! * [`graph`] — simple undirected graphs plus the game primitives
//!   (configurations, defense functions, brute-force vertex covers),
//! * [`sp`] — series-parallel expression trees, realization, the `alt`
//!   parameter, a vertex-cover DP, and melon recognition,
//! * [`melon`] — closed-form eternal vertex cover numbers for melons and the
//!   executable strategy classes behind them,
//! * [`oracle`] — an exact, assumption-free game solver (greatest fixed
//!   point over same-size vertex covers) used to cross-check everything,
//! * [`families`] — deterministic generators for melons and the `G_k`
//!   separation family,
//! * [`edgelist`] — the plain-text edge list format used by the CLI.

pub mod edgelist;
pub mod families;
pub mod graph;
pub mod melon;
pub mod oracle;
pub mod sp;

mod combo;

pub use graph::{
    apply_defense, min_vertex_covers_bruteforce, min_vertex_covers_bruteforce_with_limit, Attack,
    Configuration, DefenseError, DefenseFunction, Graph, GraphError, VertexId,
    DEFAULT_BRUTE_FORCE_LIMIT,
};
pub use melon::{
    classify, evc_melon, matching_through_edge, odd_path_matchings, path_rotation_class,
    strategy_class, CaseTag, EvcResult, MelonError, PathMatchings, StrategyClass,
};
pub use oracle::{
    can_shift, evc_exact, evc_exact_with_limit, safe_set, safe_set_with_limit, shift_witness,
    verify_class, verify_family, vertex_covers_of_size, OracleError, SafeSet, VerificationReport,
    DEFAULT_ORACLE_LIMIT,
};
pub use sp::{
    alt, canonicalize, parse_sp, realize, recognize_melon, vc_sp, CanonicalSpTree, MelonStructure,
    MelonStructureError, RealizeError, SpParseError, SpTree,
};
