//! Eternal vertex cover numbers and executable defense strategies for melon
//! graphs.
//!
//! Melons split into eight cases by path count and parity. For `k >= 3` the
//! eternal vertex cover number is `τ` for odd melons and for mixed melons
//! with a single even path, and `τ + 1` otherwise; paths and cycles are
//! handled by dedicated rotation classes. Every case carries an explicit
//! family of configurations ([`StrategyClass`]) closed under defense, and
//! [`StrategyClass::respond`] materializes the defense function for any
//! configuration/attack pair.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graph::{
    apply_defense, Attack, Configuration, DefenseError, DefenseFunction, Graph, VertexId,
};
use crate::sp::MelonStructure;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MelonError {
    #[error("operation does not apply to this melon case")]
    CaseMismatch,
    #[error("path has even length where an odd one is required")]
    EvenLengthPath,
    #[error("configuration is not a member of the strategy class")]
    ConfigurationNotInClass,
    #[error("({0}, {1}) is not an edge of the melon")]
    NotAnEdge(VertexId, VertexId),
    #[error("strategy class with {0} configurations exceeds the enumeration limit")]
    ClassTooLarge(u64),
    #[error("defense self-validation failed: {0}")]
    Defense(#[from] DefenseError),
}

/// Case dispatch for melons: total and mutually exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    SingleEdge,
    Path,
    Cycle,
    Odd,
    Even,
    MixedBoth,
    MixedOneOdd,
    MixedOneEven,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::SingleEdge => "single_edge",
            CaseTag::Path => "path",
            CaseTag::Cycle => "cycle",
            CaseTag::Odd => "odd",
            CaseTag::Even => "even",
            CaseTag::MixedBoth => "mixed_both",
            CaseTag::MixedOneOdd => "mixed_one_odd",
            CaseTag::MixedOneEven => "mixed_one_even",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The unique case of a melon: `k = 1` is a single edge or a path, `k = 2`
/// a cycle, and for `k >= 3` the parity split decides.
pub fn classify(m: &MelonStructure) -> CaseTag {
    match m.k() {
        1 => {
            if m.path_len(0) == 1 {
                CaseTag::SingleEdge
            } else {
                CaseTag::Path
            }
        }
        2 => CaseTag::Cycle,
        _ => {
            if m.odd_paths().is_empty() {
                CaseTag::Even
            } else if m.even_paths().is_empty() {
                CaseTag::Odd
            } else if m.odd_paths().len() == 1 {
                CaseTag::MixedOneOdd
            } else if m.even_paths().len() == 1 {
                CaseTag::MixedOneEven
            } else {
                CaseTag::MixedBoth
            }
        }
    }
}

/// Solver output: vertex cover number, eternal vertex cover number and the
/// size of the accompanying strategy class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvcResult {
    pub case: CaseTag,
    pub vc: usize,
    pub evc: usize,
    /// Number of configurations in the strategy class for this case;
    /// saturates at `u64::MAX` for astronomically large families.
    pub class_size: u64,
}

/// Eternal vertex cover number of a melon, in time linear in the graph.
///
/// For `k >= 3`: odd melons have `evc = vc = n/2`; even melons and mixed
/// melons with at least two even paths (or exactly one odd path) have
/// `evc = vc + 1`; mixed melons with a single even path have `evc = vc`.
/// Paths and cycles use the classical values `n - 1` and `ceil(n/2)`,
/// cross-checked against the exact game oracle by the test suite.
pub fn evc_melon(m: &MelonStructure) -> EvcResult {
    let case = classify(m);
    let n = m.vertex_count();
    let vc = melon_vc(&m.lengths());
    let evens = m.even_paths().len();
    let odds = m.odd_paths().len();
    let (evc, class_size) = match case {
        CaseTag::SingleEdge | CaseTag::Path => (n - 1, n as u64),
        CaseTag::Cycle => (n.div_ceil(2), if n % 2 == 0 { 2 } else { n as u64 }),
        CaseTag::Odd => {
            debug_assert_eq!(vc, n / 2);
            (vc, 2)
        }
        CaseTag::Even => (vc + 1, m.k() as u64),
        CaseTag::MixedBoth => (vc + 1, (evens as u64).saturating_mul(pow2_minus2(odds))),
        CaseTag::MixedOneOdd => (vc + 1, 2 * evens as u64),
        CaseTag::MixedOneEven => (vc, pow2_minus2(odds).saturating_add(2)),
    };
    EvcResult { case, vc, evc, class_size }
}

fn pow2_minus2(o: usize) -> u64 {
    if o >= 64 {
        u64::MAX
    } else {
        (1u64 << o) - 2
    }
}

/// Vertex cover number of a melon from its path lengths: pick the optimal
/// terminal states and sum per-path interior costs.
fn melon_vc(lengths: &[usize]) -> usize {
    let mut best = usize::MAX;
    'states: for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let mut total = a + b;
        for &l in lengths {
            match interior_cover_cost(l, a, b) {
                Some(c) => total += c,
                None => continue 'states,
            }
        }
        best = best.min(total);
    }
    best
}

/// Minimum number of interior vertices covering a length-`l` terminal path
/// given which endpoints are already in the cover; `None` if impossible.
fn interior_cover_cost(l: usize, a: usize, b: usize) -> Option<usize> {
    match (a, b) {
        (0, 0) if l == 1 => None,
        (0, 0) => Some(l.div_ceil(2)),
        (1, 1) => Some((l - 1) / 2),
        _ => Some(l / 2),
    }
}

/// The two complementary alternating matchings of an odd path: the perfect
/// one saturates every path vertex, the imperfect one misses exactly the two
/// endpoints. Together they partition the path's edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathMatchings {
    pub perfect: Vec<(VertexId, VertexId)>,
    pub imperfect: Vec<(VertexId, VertexId)>,
}

/// Splits an odd-length vertex sequence into its perfect and imperfect
/// alternating matchings. Edges are normalized `(min, max)` pairs in path
/// order.
pub fn odd_path_matchings(path: &[VertexId]) -> Result<PathMatchings, MelonError> {
    let l = path.len().checked_sub(1).ok_or(MelonError::EvenLengthPath)?;
    if l == 0 || l % 2 == 0 {
        return Err(MelonError::EvenLengthPath);
    }
    let edge = |i: usize| (path[i].min(path[i + 1]), path[i].max(path[i + 1]));
    let perfect = (0..l).step_by(2).map(edge).collect();
    let imperfect = (1..l).step_by(2).map(edge).collect();
    Ok(PathMatchings { perfect, imperfect })
}

/// A perfect matching of an all-odd melon containing the edge `(u, v)`.
///
/// If the edge lies in the perfect matching of its own path, that path
/// contributes its perfect matching and every other path its imperfect one;
/// otherwise the lowest-indexed other path contributes its perfect matching
/// instead. Requires every path length to be odd and `k >= 2`.
pub fn matching_through_edge(
    m: &MelonStructure,
    u: VertexId,
    v: VertexId,
) -> Result<Vec<(VertexId, VertexId)>, MelonError> {
    if m.k() < 2 || m.odd_paths().len() != m.k() {
        return Err(MelonError::CaseMismatch);
    }
    let p = m.path_of_edge(u, v).ok_or(MelonError::NotAnEdge(u, v))?;
    let e = (u.min(v), u.max(v));
    let own = odd_path_matchings(m.path(p))?;
    let perfect_donor = if own.perfect.contains(&e) {
        p
    } else {
        (0..m.k()).find(|&i| i != p).expect("k >= 2")
    };
    let mut matching = Vec::new();
    for i in 0..m.k() {
        let pm = odd_path_matchings(m.path(i))?;
        if i == perfect_donor {
            matching.extend(pm.perfect);
        } else {
            matching.extend(pm.imperfect);
        }
    }
    matching.sort_unstable();
    Ok(matching)
}

/// Which kind of family backs a strategy class.
#[derive(Debug, Clone, PartialEq, Eq)]
enum ClassKind {
    /// The two sides of the bipartition; guards rotate along a perfect
    /// matching through the attacked edge.
    OddBipartition,
    /// One external path, all others internal; `k` configurations.
    EvenExternal,
    /// External even path plus an s-path/t-path split of the odd paths.
    MixedBoth,
    /// External even path plus the single odd path anchored at `s` or `t`.
    MixedOneOdd,
    /// `U_s`, `U_t` and the interior families `U_S` for the single even
    /// path; all are minimum vertex covers.
    MixedOneEven,
    /// Single-hole rotations along a path (also covers the single edge).
    PathRotation,
    /// Maximum-independent-hole rotations around a cycle.
    CycleRotation { order: Vec<VertexId> },
}

/// A finite family of equal-size vertex covers together with a responder
/// that shifts any member to another member while protecting any attacked
/// edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyClass {
    case: CaseTag,
    kind: ClassKind,
    melon: MelonStructure,
    graph: Graph,
    configs: Vec<Configuration>,
    sorted: Vec<Configuration>,
}

/// Enumeration guard: classes larger than this are refused rather than
/// materialized.
const MAX_CLASS_SIZE: u64 = 1 << 20;

/// Builds the strategy class realizing the case analysis for `k >= 2`
/// melons. Cycles get a rotation class (which coincides with the
/// bipartition family on even cycles); single paths are served by
/// [`path_rotation_class`] instead and report `CaseMismatch` here.
pub fn strategy_class(m: &MelonStructure) -> Result<StrategyClass, MelonError> {
    if m.k() < 2 {
        return Err(MelonError::CaseMismatch);
    }
    build_class(m)
}

/// The dedicated rotation class for 1-melons (paths, including the single
/// edge): every cover with a single unguarded vertex, the forced move as the
/// responder.
pub fn path_rotation_class(m: &MelonStructure) -> Result<StrategyClass, MelonError> {
    if m.k() != 1 {
        return Err(MelonError::CaseMismatch);
    }
    build_class(m)
}

fn build_class(m: &MelonStructure) -> Result<StrategyClass, MelonError> {
    let case = classify(m);
    let result = evc_melon(m);
    if result.class_size > MAX_CLASS_SIZE {
        return Err(MelonError::ClassTooLarge(result.class_size));
    }
    let graph = m.to_graph();
    let (kind, configs) = match case {
        CaseTag::SingleEdge | CaseTag::Path => {
            let path = m.path(0);
            let configs = (0..path.len())
                .map(|hole| Configuration::new(path.iter().copied().filter(|&v| v != path[hole])))
                .collect();
            (ClassKind::PathRotation, configs)
        }
        CaseTag::Cycle => {
            // Cyclic order: first path source→sink, second path back.
            let mut order: Vec<VertexId> = m.path(0).to_vec();
            let back = m.path(1);
            order.extend(back[1..back.len() - 1].iter().rev());
            let configs = cycle_rotation_configs(&order);
            (ClassKind::CycleRotation { order }, configs)
        }
        CaseTag::Odd => {
            let (a, b) = graph
                .bipartition()
                .expect("melons are connected")
                .expect("odd melons are bipartite");
            (
                ClassKind::OddBipartition,
                vec![Configuration::new(a), Configuration::new(b)],
            )
        }
        CaseTag::Even => {
            let configs = (0..m.k())
                .map(|i| {
                    let mut verts = Vec::new();
                    for (j, p) in m.paths().iter().enumerate() {
                        if j == i {
                            verts.extend(external_guards(p));
                        } else {
                            verts.extend(internal_guards(p));
                        }
                    }
                    Configuration::new(verts)
                })
                .collect();
            (ClassKind::EvenExternal, configs)
        }
        CaseTag::MixedBoth => {
            let mut configs = Vec::new();
            for &pe in m.even_paths() {
                for mask in 1..(1u64 << m.odd_paths().len()) - 1 {
                    configs.push(mixed_both_config(m, pe, mask));
                }
            }
            (ClassKind::MixedBoth, configs)
        }
        CaseTag::MixedOneOdd => {
            let po = m.odd_paths()[0];
            let mut configs = Vec::new();
            for anchor_source in [true, false] {
                for &pe in m.even_paths() {
                    let mut verts: Vec<VertexId> = anchored_guards(m.path(po), anchor_source);
                    for &j in m.even_paths() {
                        if j == pe {
                            verts.extend(external_guards(m.path(j)));
                        } else {
                            verts.extend(internal_guards(m.path(j)));
                        }
                    }
                    configs.push(Configuration::new(verts));
                }
            }
            (ClassKind::MixedOneOdd, configs)
        }
        CaseTag::MixedOneEven => {
            let pe = m.even_paths()[0];
            let mut configs = Vec::new();
            for anchor_source in [true, false] {
                let mut verts = vec![if anchor_source { m.source() } else { m.sink() }];
                verts.extend(interior_odd_positions(m.path(pe)));
                for &po in m.odd_paths() {
                    verts.extend(anchored_guards(m.path(po), anchor_source));
                }
                configs.push(Configuration::new(verts));
            }
            for mask in 1..(1u64 << m.odd_paths().len()) - 1 {
                let mut verts: Vec<VertexId> = internal_guards(m.path(pe)).collect();
                for (bit, &po) in m.odd_paths().iter().enumerate() {
                    verts.extend(anchored_guards(m.path(po), mask >> bit & 1 == 1));
                }
                configs.push(Configuration::new(verts));
            }
            (ClassKind::MixedOneEven, configs)
        }
    };
    debug_assert_eq!(configs.len() as u64, result.class_size);
    debug_assert!(configs.iter().all(|c| c.len() == result.evc));
    let mut sorted = configs.clone();
    sorted.sort();
    Ok(StrategyClass { case, kind, melon: m.clone(), graph, configs, sorted })
}

/// Vertex at position `j` counted from the sink end of a source→sink path.
fn from_sink(path: &[VertexId], j: usize) -> VertexId {
    path[path.len() - 1 - j]
}

fn sink_position(path: &[VertexId], v: VertexId) -> Option<usize> {
    path.iter().position(|&x| x == v).map(|i| path.len() - 1 - i)
}

/// Vertices at positions of the given parity, counted from the sink.
fn parity_vertices(path: &[VertexId], odd: bool) -> impl Iterator<Item = VertexId> + '_ {
    let last = path.len() - 1;
    (0..=last)
        .filter(move |j| (j % 2 == 1) == odd)
        .map(move |j| from_sink(path, j))
}

/// Internal pattern of an even path: every second vertex starting at the
/// sink, terminals included.
fn internal_guards(path: &[VertexId]) -> impl Iterator<Item = VertexId> + '_ {
    parity_vertices(path, false)
}

/// External pattern of an even path: the odd positions plus both terminals.
fn external_guards(path: &[VertexId]) -> Vec<VertexId> {
    let mut v: Vec<VertexId> = parity_vertices(path, true).collect();
    v.push(path[0]);
    v.push(*path.last().unwrap());
    v
}

/// Odd positions of an even path — the external pattern without terminals.
fn interior_odd_positions(path: &[VertexId]) -> impl Iterator<Item = VertexId> + '_ {
    parity_vertices(path, true)
}

/// Guard pattern of an odd path anchored at the source (an s-path: odd
/// positions from the sink, source included) or at the sink (a t-path).
fn anchored_guards(path: &[VertexId], anchor_source: bool) -> Vec<VertexId> {
    parity_vertices(path, anchor_source).collect()
}

fn mixed_both_config(m: &MelonStructure, pe: usize, mask: u64) -> Configuration {
    let mut verts = Vec::new();
    for &j in m.even_paths() {
        if j == pe {
            verts.extend(external_guards(m.path(j)));
        } else {
            verts.extend(internal_guards(m.path(j)));
        }
    }
    for (bit, &po) in m.odd_paths().iter().enumerate() {
        verts.extend(anchored_guards(m.path(po), mask >> bit & 1 == 1));
    }
    Configuration::new(verts)
}

/// All maximum-size independent hole patterns around a cycle, as covers.
fn cycle_rotation_configs(order: &[VertexId]) -> Vec<Configuration> {
    let n = order.len();
    if n % 2 == 0 {
        [0usize, 1]
            .iter()
            .map(|&r| {
                Configuration::new(
                    (0..n).filter(|p| p % 2 != r % 2).map(|p| order[p]),
                )
            })
            .collect()
    } else {
        let holes = (n - 1) / 2;
        (0..n)
            .map(|r| {
                let hole_set: BTreeSet<usize> =
                    (0..holes).map(|i| (r + 2 * i) % n).collect();
                Configuration::new(
                    (0..n).filter(|p| !hole_set.contains(p)).map(|p| order[p]),
                )
            })
            .collect()
    }
}

impl StrategyClass {
    pub fn case(&self) -> CaseTag {
        self.case
    }

    pub fn melon(&self) -> &MelonStructure {
        &self.melon
    }

    /// The melon rebuilt as a graph; attacks passed to [`respond`] must be
    /// edges of this graph.
    ///
    /// [`respond`]: StrategyClass::respond
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn class_size(&self) -> u64 {
        self.configs.len() as u64
    }

    /// The configurations of the family, in the case's canonical order.
    pub fn enumerate(&self) -> &[Configuration] {
        &self.configs
    }

    pub fn contains(&self, c: &Configuration) -> bool {
        self.sorted.binary_search(c).is_ok()
    }

    /// The defense function protecting `a` from configuration `c`, with an
    /// image that is again a member of the family.
    ///
    /// The returned function is validated through [`apply_defense`] before
    /// being handed out, so transcription errors in the case analysis
    /// surface as [`MelonError::Defense`] instead of corrupt game states.
    pub fn respond(&self, c: &Configuration, a: Attack) -> Result<DefenseFunction, MelonError> {
        let idx = self
            .configs
            .iter()
            .position(|x| x == c)
            .ok_or(MelonError::ConfigurationNotInClass)?;
        let (u, v) = a.endpoints();
        if !self.graph.has_edge(u, v) {
            return Err(MelonError::NotAnEdge(u, v));
        }
        let mut d = DefenseFunction::identity_on(c);
        if c.contains(u) && c.contains(v) {
            // Double-guarded edge: swap the two guards, everyone else stays.
            d.set(u, v);
            d.set(v, u);
        } else {
            let (z, w) = if c.contains(u) { (u, v) } else { (v, u) };
            match &self.kind {
                ClassKind::OddBipartition => self.odd_moves(&mut d, c, u, v)?,
                ClassKind::EvenExternal => self.even_moves(&mut d, idx, z, w)?,
                ClassKind::MixedBoth => self.mixed_both_moves(&mut d, idx, z, w)?,
                ClassKind::MixedOneOdd => self.mixed_one_odd_moves(&mut d, idx, z, w)?,
                ClassKind::MixedOneEven => self.mixed_one_even_moves(&mut d, idx, z, w)?,
                ClassKind::PathRotation => {
                    rotation_moves(&mut d, self.melon.path(0), false, c, z, w)
                }
                ClassKind::CycleRotation { order } => {
                    rotation_moves(&mut d, order, true, c, z, w)
                }
            }
        }
        apply_defense(&self.graph, c, &d, a)?;
        Ok(d)
    }

    /// Odd melon: every guard shifts along its edge of a perfect matching
    /// through the attacked edge, flipping the bipartition side.
    fn odd_moves(
        &self,
        d: &mut DefenseFunction,
        c: &Configuration,
        u: VertexId,
        v: VertexId,
    ) -> Result<(), MelonError> {
        let matching = matching_through_edge(&self.melon, u, v)?;
        for &(a, b) in &matching {
            if c.contains(a) {
                d.set(a, b);
            } else {
                d.set(b, a);
            }
        }
        Ok(())
    }

    /// Even melon: reduce to the 2-melon formed by the external path and one
    /// internal path (the attacked one, or the lowest-indexed other path),
    /// and swap their roles.
    fn even_moves(
        &self,
        d: &mut DefenseFunction,
        idx: usize,
        z: VertexId,
        w: VertexId,
    ) -> Result<(), MelonError> {
        let m = &self.melon;
        let p = m.path_of_edge(z, w).expect("attack is a melon edge");
        let ext = idx;
        let int = if p == ext {
            (0..m.k()).find(|&j| j != ext).expect("k >= 2")
        } else {
            p
        };
        even_pair_moves(d, m.path(int), m.path(ext), z, w);
        Ok(())
    }

    fn mixed_both_moves(
        &self,
        d: &mut DefenseFunction,
        idx: usize,
        z: VertexId,
        w: VertexId,
    ) -> Result<(), MelonError> {
        let m = &self.melon;
        let odds = m.odd_paths();
        let family = (1usize << odds.len()) - 2;
        let pe = m.even_paths()[idx / family];
        let mask = (idx % family) as u64 + 1;
        let p = m.path_of_edge(z, w).expect("attack is a melon edge");
        if m.even_paths().contains(&p) {
            // Defend inside the even sub-melon; odd guards stay put.
            let int = if p == pe {
                *m.even_paths().iter().find(|&&j| j != pe).expect("two even paths")
            } else {
                p
            };
            even_pair_moves(d, m.path(int), m.path(pe), z, w);
        } else {
            let bit = odds.iter().position(|&j| j == p).expect("odd path");
            let attacked_is_spath = mask >> bit & 1 == 1;
            let partner_bit = (0..odds.len())
                .find(|&b| b != bit && (mask >> b & 1 == 1) != attacked_is_spath)
                .expect("proper nonempty subsets leave both kinds available");
            let (s_idx, t_idx) = if attacked_is_spath {
                (p, odds[partner_bit])
            } else {
                (odds[partner_bit], p)
            };
            odd_pair_moves(d, m.path(s_idx), m.path(t_idx), z, w);
        }
        Ok(())
    }

    fn mixed_one_odd_moves(
        &self,
        d: &mut DefenseFunction,
        idx: usize,
        z: VertexId,
        w: VertexId,
    ) -> Result<(), MelonError> {
        let m = &self.melon;
        let evens = m.even_paths();
        let anchor_source = idx / evens.len() == 0;
        let pe = evens[idx % evens.len()];
        let po = m.odd_paths()[0];
        let p = m.path_of_edge(z, w).expect("attack is a melon edge");
        if p != po {
            let int = if p == pe {
                *evens.iter().find(|&&j| j != pe).expect("two even paths")
            } else {
                p
            };
            even_pair_moves(d, m.path(int), m.path(pe), z, w);
            return Ok(());
        }
        // Attack on the unique odd path. Work in coordinates counted from
        // the anchor's opposite end, so the sink-anchored case mirrors the
        // source-anchored one.
        let path = m.path(po);
        let oriented = orient(path, anchor_source);
        let lo = path.len() - 1;
        let jz = oriented.pos(z).expect("guard endpoint lies on the path");
        if oriented.pos(w) == Some(jz + 1) {
            // Slide the odd-path guards one step outward; the anchor flips.
            for j in (1..lo).step_by(2) {
                d.set(oriented.at(j), oriented.at(j + 1));
            }
        } else {
            // Slide the odd-path guards inward and swap which even path is
            // external, rotating through the designated other even path.
            let pe2 = *evens.iter().find(|&&j| j != pe).expect("two even paths");
            for j in (1..=lo).step_by(2) {
                d.set(oriented.at(j), oriented.at(j - 1));
            }
            let ext = orient(m.path(pe), anchor_source);
            for j in (1..ext.len()).step_by(2) {
                d.set(ext.at(j), ext.at(j + 1));
            }
            let next_ext = orient(m.path(pe2), anchor_source);
            for j in (0..next_ext.len()).step_by(2) {
                d.set(next_ext.at(j), next_ext.at(j + 1));
            }
        }
        Ok(())
    }

    fn mixed_one_even_moves(
        &self,
        d: &mut DefenseFunction,
        idx: usize,
        z: VertexId,
        w: VertexId,
    ) -> Result<(), MelonError> {
        let m = &self.melon;
        let pe = m.even_paths()[0];
        let odds = m.odd_paths();
        let p = m.path_of_edge(z, w).expect("attack is a melon edge");
        if idx < 2 {
            // U_s or U_t: all odd paths share the anchor; rotate the even
            // path against one odd path (the attacked one if any).
            let anchor_source = idx == 0;
            let po = if p == pe { odds[0] } else { p };
            let epath = orient(m.path(pe), anchor_source);
            let opath = orient(m.path(po), anchor_source);
            let jz = if p == pe { epath.pos(z) } else { opath.pos(z) }
                .expect("guard endpoint lies on the attacked path");
            let jw = if p == pe { epath.pos(w) } else { opath.pos(w) }.expect("edge on path");
            let outward = jw == jz + 1;
            // On the even path, guards move with the forced direction; on
            // the odd path they move against it.
            let even_outward = if p == pe { outward } else { !outward };
            let lo = opath.len();
            if even_outward {
                for j in (1..epath.len()).step_by(2) {
                    d.set(epath.at(j), epath.at(j + 1));
                }
                for j in (1..=lo).step_by(2) {
                    d.set(opath.at(j), opath.at(j - 1));
                }
            } else {
                for j in (1..epath.len()).step_by(2) {
                    d.set(epath.at(j), epath.at(j - 1));
                }
                for j in (1..lo).step_by(2) {
                    d.set(opath.at(j), opath.at(j + 1));
                }
            }
        } else {
            let mask = (idx - 2) as u64 + 1;
            if p == pe {
                // Interior family: rotate the even path toward the forced
                // direction and relax the opposite-anchored odd paths.
                let epath = orient(m.path(pe), true);
                let jz = epath.pos(z).expect("guard on even path");
                let toward_source = epath.pos(w) == Some(jz + 1);
                if toward_source {
                    for j in (0..epath.len()).step_by(2) {
                        d.set(epath.at(j), epath.at(j + 1));
                    }
                    for (bit, &po) in odds.iter().enumerate() {
                        if mask >> bit & 1 == 0 {
                            let t = m.path(po);
                            for j in (2..t.len() - 1).step_by(2) {
                                d.set(from_sink(t, j), from_sink(t, j - 1));
                            }
                        }
                    }
                } else {
                    for j in (2..=epath.len()).step_by(2) {
                        d.set(epath.at(j), epath.at(j - 1));
                    }
                    for (bit, &po) in odds.iter().enumerate() {
                        if mask >> bit & 1 == 1 {
                            let s = m.path(po);
                            for j in (1..s.len() - 1).step_by(2) {
                                d.set(from_sink(s, j), from_sink(s, j + 1));
                            }
                        }
                    }
                }
            } else {
                // Attack on an odd path: pair it with the lowest-indexed
                // odd path of the opposite anchor and swap the two.
                let bit = odds.iter().position(|&j| j == p).expect("odd path");
                let attacked_is_spath = mask >> bit & 1 == 1;
                let partner_bit = (0..odds.len())
                    .find(|&b| b != bit && (mask >> b & 1 == 1) != attacked_is_spath)
                    .expect("proper nonempty subsets leave both kinds available");
                let (s_idx, t_idx) = if attacked_is_spath {
                    (p, odds[partner_bit])
                } else {
                    (odds[partner_bit], p)
                };
                odd_pair_moves(d, m.path(s_idx), m.path(t_idx), z, w);
            }
        }
        Ok(())
    }
}

/// A path viewed with position 0 at the sink (`from_sink`) or at the source,
/// used to write one defense per mirror-symmetric pair of cases.
struct Oriented<'a> {
    path: &'a [VertexId],
    from_sink: bool,
}

fn orient(path: &[VertexId], from_sink: bool) -> Oriented<'_> {
    Oriented { path, from_sink }
}

impl Oriented<'_> {
    /// Edge length of the path.
    fn len(&self) -> usize {
        self.path.len() - 1
    }

    fn at(&self, j: usize) -> VertexId {
        if self.from_sink {
            self.path[self.path.len() - 1 - j]
        } else {
            self.path[j]
        }
    }

    fn pos(&self, v: VertexId) -> Option<usize> {
        let i = self.path.iter().position(|&x| x == v)?;
        Some(if self.from_sink { self.path.len() - 1 - i } else { i })
    }
}

/// Defense on the even 2-melon formed by an internal and an external path:
/// both flip roles, following the forced shift of the guard on `z` to `w`.
fn even_pair_moves(
    d: &mut DefenseFunction,
    int: &[VertexId],
    ext: &[VertexId],
    z: VertexId,
    w: VertexId,
) {
    let li = int.len() - 1;
    let le = ext.len() - 1;
    let on_int = edge_on(int, z, w);
    let (jz, jw) = if on_int {
        (
            sink_position(int, z).expect("z on internal path"),
            sink_position(int, w).expect("w on internal path"),
        )
    } else {
        (
            sink_position(ext, z).expect("z on external path"),
            sink_position(ext, w).expect("w on external path"),
        )
    };
    let case_toward_source = if on_int { jw == jz + 1 } else { jw + 1 == jz };
    if case_toward_source {
        // internal guards step toward the source, external ones toward the
        // sink; the source guard stays
        for j in (0..li).step_by(2) {
            d.set(from_sink(int, j), from_sink(int, j + 1));
        }
        for j in (1..le).step_by(2) {
            d.set(from_sink(ext, j), from_sink(ext, j - 1));
        }
    } else {
        for j in (2..=li).step_by(2) {
            d.set(from_sink(int, j), from_sink(int, j - 1));
        }
        for j in (1..le).step_by(2) {
            d.set(from_sink(ext, j), from_sink(ext, j + 1));
        }
    }
}

/// Defense on the odd 2-melon formed by an s-path and a t-path: both flip
/// anchors, following the forced shift of the guard on `z` to `w`.
fn odd_pair_moves(
    d: &mut DefenseFunction,
    spath: &[VertexId],
    tpath: &[VertexId],
    z: VertexId,
    w: VertexId,
) {
    let ls = spath.len() - 1;
    let lt = tpath.len() - 1;
    let on_s = edge_on(spath, z, w);
    let (jz, jw) = if on_s {
        (
            sink_position(spath, z).expect("z on s-path"),
            sink_position(spath, w).expect("w on s-path"),
        )
    } else {
        (
            sink_position(tpath, z).expect("z on t-path"),
            sink_position(tpath, w).expect("w on t-path"),
        )
    };
    let case_toward_source = if on_s { jw == jz + 1 } else { jw + 1 == jz };
    if case_toward_source {
        // s-path guards step toward the source (source stays), t-path
        // guards toward the sink (sink stays)
        for j in (1..ls).step_by(2) {
            d.set(from_sink(spath, j), from_sink(spath, j + 1));
        }
        for j in (2..lt).step_by(2) {
            d.set(from_sink(tpath, j), from_sink(tpath, j - 1));
        }
    } else {
        for j in (1..=ls).step_by(2) {
            d.set(from_sink(spath, j), from_sink(spath, j - 1));
        }
        for j in (0..lt).step_by(2) {
            d.set(from_sink(tpath, j), from_sink(tpath, j + 1));
        }
    }
}

fn edge_on(path: &[VertexId], a: VertexId, b: VertexId) -> bool {
    path.windows(2)
        .any(|win| (win[0] == a && win[1] == b) || (win[0] == b && win[1] == a))
}

/// Rotation defense along a path or cycle: the forced guard fills the hole,
/// and a cascade of one-step shifts re-separates any adjacent holes left
/// behind. Hole sets stay independent, so the image is again a cover of the
/// same size.
fn rotation_moves(
    d: &mut DefenseFunction,
    order: &[VertexId],
    cyclic: bool,
    c: &Configuration,
    z: VertexId,
    w: VertexId,
) {
    let n = order.len() as isize;
    let pos = |v: VertexId| order.iter().position(|&x| x == v).expect("vertex on order") as isize;
    let mut holes: BTreeSet<isize> = (0..n)
        .filter(|&p| !c.contains(order[p as usize]))
        .collect();
    let pz = pos(z);
    let pw = pos(w);
    let dir: isize = if cyclic {
        if (pz + 1).rem_euclid(n) == pw {
            1
        } else {
            -1
        }
    } else if pw == pz + 1 {
        1
    } else {
        -1
    };
    d.set(z, w);
    holes.remove(&pw);
    holes.insert(pz);
    let mut vacated = pz;
    loop {
        let behind = vacated - dir;
        let behind = if cyclic { behind.rem_euclid(n) } else { behind };
        if behind < 0 || behind >= n || !holes.contains(&behind) {
            break;
        }
        let src = behind - dir;
        let src = if cyclic { src.rem_euclid(n) } else { src };
        if src < 0 || src >= n {
            break;
        }
        d.set(order[src as usize], order[behind as usize]);
        holes.remove(&behind);
        holes.insert(src);
        vacated = src;
    }
}
