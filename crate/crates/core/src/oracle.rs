//! Exact, assumption-free solver for the eternal vertex cover game on small
//! graphs.
//!
//! The defender state space is the set of all size-`k` vertex covers. A
//! configuration can answer an attack by shifting to another configuration
//! iff a perfect matching exists between the two guard sets in the
//! closed-neighborhood compatibility graph, with the forced crossing pair
//! included. The greatest family closed under such shifts for every edge is
//! computed as a greatest fixed point with a deletion worklist; its
//! emptiness decides whether `k` guards suffice.

use thiserror::Error;

use crate::graph::{
    covers_of_size, Attack, Configuration, DefenseFunction, Graph, GraphError, VertexId,
    DEFAULT_BRUTE_FORCE_LIMIT,
};
use crate::melon::StrategyClass;

/// Default vertex-count cap for [`safe_set`] and [`evc_exact`]; larger
/// instances need the explicit override variants.
pub const DEFAULT_ORACLE_LIMIT: usize = 16;

/// Hard internal caps of the bitmask representation.
const MAX_VERTICES: usize = 128;
const MAX_GUARDS: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("vertex count {n} exceeds the limit {limit}")]
    LimitExceeded { n: usize, limit: usize },
    #[error("guard count {0} exceeds the supported maximum {MAX_GUARDS}")]
    TooManyGuards(usize),
    #[error("configurations have different sizes")]
    SizeMismatch,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A family of same-size vertex covers closed under defended shifts: the
/// unique maximal eternal vertex cover class at guard count `k`, possibly
/// empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafeSet {
    k: usize,
    configs: Vec<Configuration>,
}

impl SafeSet {
    pub fn guard_count(&self) -> usize {
        self.k
    }

    /// Members in lexicographic order.
    pub fn configs(&self) -> &[Configuration] {
        &self.configs
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn contains(&self, c: &Configuration) -> bool {
        self.configs.binary_search(c).is_ok()
    }
}

/// All vertex covers with exactly `k` vertices, lexicographically sorted.
pub fn vertex_covers_of_size(g: &Graph, k: usize) -> Result<Vec<Configuration>, OracleError> {
    vertex_covers_of_size_with_limit(g, k, DEFAULT_BRUTE_FORCE_LIMIT)
}

pub fn vertex_covers_of_size_with_limit(
    g: &Graph,
    k: usize,
    limit: usize,
) -> Result<Vec<Configuration>, OracleError> {
    if g.vertex_count() > limit {
        return Err(OracleError::LimitExceeded { n: g.vertex_count(), limit });
    }
    Ok(covers_of_size(g, k))
}

/// Closed neighborhoods as vertex bitmasks.
fn closed_masks(g: &Graph) -> Vec<u128> {
    (0..g.vertex_count())
        .map(|v| {
            g.neighbors(v)
                .iter()
                .fold(1u128 << v, |acc, &w| acc | 1 << w)
        })
        .collect()
}

fn config_mask(c: &Configuration) -> u128 {
    c.occupied().iter().fold(0u128, |acc, &v| acc | 1 << v)
}

/// Kuhn's augmenting-path matching over compact row masks; true iff every
/// row can be matched to a distinct column.
fn perfect_matching(rows: &[u64], match_right: &mut [usize]) -> bool {
    match_right.iter_mut().for_each(|m| *m = usize::MAX);
    for i in 0..rows.len() {
        let mut visited = 0u64;
        if !augment(rows, i, &mut visited, match_right) {
            return false;
        }
    }
    true
}

fn augment(rows: &[u64], i: usize, visited: &mut u64, match_right: &mut [usize]) -> bool {
    let mut cand = rows[i] & !*visited;
    while cand != 0 {
        let j = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        *visited |= 1 << j;
        if match_right[j] == usize::MAX || augment(rows, match_right[j], visited, match_right) {
            match_right[j] = i;
            return true;
        }
    }
    false
}

/// One orientation of the shift test: guard `from` (in `c`) is forced onto
/// `to` (in `c2`); the remaining guards must biject into the rest of `c2`
/// along closed neighborhoods. Returns the matched pairs on success.
fn forced_shift(
    closed: &[u128],
    c: &Configuration,
    c2_mask: u128,
    from: VertexId,
    to: VertexId,
) -> Option<Vec<(VertexId, VertexId)>> {
    let lefts: Vec<VertexId> = c.occupied().iter().copied().filter(|&x| x != from).collect();
    let rights_mask = c2_mask & !(1u128 << to);
    let rights: Vec<VertexId> = (0..closed.len() as VertexId)
        .filter(|&v| rights_mask >> v & 1 == 1)
        .collect();
    if lefts.len() != rights.len() {
        return None;
    }
    let rows: Vec<u64> = lefts
        .iter()
        .map(|&l| {
            rights
                .iter()
                .enumerate()
                .fold(0u64, |acc, (j, &r)| acc | u64::from(closed[l] >> r & 1 == 1) << j)
        })
        .collect();
    let mut match_right = vec![usize::MAX; rights.len()];
    if !perfect_matching(&rows, &mut match_right) {
        return None;
    }
    let mut pairs = vec![(from, to)];
    for (j, &i) in match_right.iter().enumerate() {
        pairs.push((lefts[i], rights[j]));
    }
    Some(pairs)
}

fn shift_pairs(
    closed: &[u128],
    c: &Configuration,
    c2: &Configuration,
    u: VertexId,
    v: VertexId,
) -> Option<Vec<(VertexId, VertexId)>> {
    let c2_mask = config_mask(c2);
    if c.contains(u) && c2.contains(v) {
        if let Some(pairs) = forced_shift(closed, c, c2_mask, u, v) {
            return Some(pairs);
        }
    }
    if c.contains(v) && c2.contains(u) {
        return forced_shift(closed, c, c2_mask, v, u);
    }
    None
}

fn check_shift_sizes(g: &Graph, c: &Configuration, c2: &Configuration) -> Result<(), OracleError> {
    if c.len() != c2.len() {
        return Err(OracleError::SizeMismatch);
    }
    if g.vertex_count() > MAX_VERTICES {
        return Err(OracleError::LimitExceeded { n: g.vertex_count(), limit: MAX_VERTICES });
    }
    if c.len() > MAX_GUARDS {
        return Err(OracleError::TooManyGuards(c.len()));
    }
    Ok(())
}

/// Whether `c` can shift to `c2` while protecting the attacked edge: some
/// injective closed-neighborhood map from `c` onto `c2` moves a guard
/// across the edge. Either crossing orientation suffices.
pub fn can_shift(
    g: &Graph,
    c: &Configuration,
    c2: &Configuration,
    a: Attack,
) -> Result<bool, OracleError> {
    Ok(shift_witness(g, c, c2, a)?.is_some())
}

/// Like [`can_shift`], but reconstructs a concrete defense function from
/// the matching when the shift is feasible.
pub fn shift_witness(
    g: &Graph,
    c: &Configuration,
    c2: &Configuration,
    a: Attack,
) -> Result<Option<DefenseFunction>, OracleError> {
    check_shift_sizes(g, c, c2)?;
    let closed = closed_masks(g);
    let (u, v) = a.endpoints();
    Ok(shift_pairs(&closed, c, c2, u, v).map(DefenseFunction::from_moves))
}

/// The greatest family of size-`k` vertex covers closed under defended
/// shifts, under the default vertex-count limit.
pub fn safe_set(g: &Graph, k: usize) -> Result<SafeSet, OracleError> {
    safe_set_with_limit(g, k, DEFAULT_ORACLE_LIMIT)
}

/// Greatest fixed point: start from all size-`k` covers and delete any
/// configuration with an undefendable edge until stable. Deletions are
/// propagated with a worklist keyed by the configuration whose removal
/// invalidated a stored witness; the result does not depend on the order.
pub fn safe_set_with_limit(g: &Graph, k: usize, max_n: usize) -> Result<SafeSet, OracleError> {
    let n = g.vertex_count();
    if n > max_n || n > MAX_VERTICES {
        return Err(OracleError::LimitExceeded { n, limit: max_n.min(MAX_VERTICES) });
    }
    if k > MAX_GUARDS {
        return Err(OracleError::TooManyGuards(k));
    }
    let configs = covers_of_size(g, k);
    let closed = closed_masks(g);
    let edges = g.edges();
    let m = configs.len();
    let e = edges.len();

    let mut alive = vec![true; m];
    // witness[ci * e + ei] = config index currently defending edge ei from
    // configs[ci]; dependents[w] = (ci, ei) pairs relying on w.
    let mut witness = vec![usize::MAX; m * e];
    let mut dependents: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
    let mut dead_queue: Vec<usize> = Vec::new();

    let find_witness = |alive: &[bool], ci: usize, ei: usize| -> Option<usize> {
        let (u, v) = edges[ei];
        (0..m).find(|&cj| alive[cj] && shift_pairs(&closed, &configs[ci], &configs[cj], u, v).is_some())
    };

    for ci in 0..m {
        for ei in 0..e {
            match find_witness(&alive, ci, ei) {
                Some(cj) => {
                    witness[ci * e + ei] = cj;
                    dependents[cj].push((ci, ei));
                }
                None => {
                    if alive[ci] {
                        alive[ci] = false;
                        dead_queue.push(ci);
                    }
                    break;
                }
            }
        }
    }

    while let Some(dead) = dead_queue.pop() {
        for (ci, ei) in std::mem::take(&mut dependents[dead]) {
            if !alive[ci] || witness[ci * e + ei] != dead {
                continue;
            }
            match find_witness(&alive, ci, ei) {
                Some(cj) => {
                    witness[ci * e + ei] = cj;
                    dependents[cj].push((ci, ei));
                }
                None => {
                    alive[ci] = false;
                    dead_queue.push(ci);
                }
            }
        }
    }

    let survivors = configs
        .into_iter()
        .zip(&alive)
        .filter_map(|(c, &a)| a.then_some(c))
        .collect();
    Ok(SafeSet { k, configs: survivors })
}

/// Exact eternal vertex cover number with its maximal witness family, under
/// the default limit.
pub fn evc_exact(g: &Graph) -> Result<(usize, SafeSet), OracleError> {
    evc_exact_with_limit(g, DEFAULT_ORACLE_LIMIT)
}

/// Scans guard counts from the vertex cover number upward; the search is
/// bounded because twice the cover number always suffices.
pub fn evc_exact_with_limit(g: &Graph, max_n: usize) -> Result<(usize, SafeSet), OracleError> {
    if !g.is_connected() {
        return Err(OracleError::Graph(GraphError::Disconnected));
    }
    let (tau, _) = crate::graph::min_vertex_covers_bruteforce_with_limit(g, max_n)
        .map_err(|e| match e {
            GraphError::LimitExceeded { n, limit } => OracleError::LimitExceeded { n, limit },
            other => OracleError::Graph(other),
        })?;
    for k in tau..=(2 * tau).min(g.vertex_count()) {
        let set = safe_set_with_limit(g, k, max_n)?;
        if !set.is_empty() {
            return Ok((k, set));
        }
    }
    unreachable!("a safe family exists at twice the vertex cover number");
}

/// One closure violation found by a verifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub config: Configuration,
    pub edge: (VertexId, VertexId),
    pub reason: String,
}

/// Outcome of a closure check over a family of configurations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub checked: usize,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the raw closure property of an arbitrary family: every member
/// must reach some member while protecting every edge. No responders
/// involved; failures are data, not errors.
pub fn verify_family(g: &Graph, configs: &[Configuration]) -> VerificationReport {
    let closed = closed_masks(g);
    let mut failures = Vec::new();
    let mut checked = 0;
    for c in configs {
        for &(u, v) in g.edges() {
            checked += 1;
            if !g.is_vertex_cover(c) {
                failures.push(Failure {
                    config: c.clone(),
                    edge: (u, v),
                    reason: "configuration is not a vertex cover".into(),
                });
                continue;
            }
            let defended = configs
                .iter()
                .any(|c2| shift_pairs(&closed, c, c2, u, v).is_some());
            if !defended {
                failures.push(Failure {
                    config: c.clone(),
                    edge: (u, v),
                    reason: "no member of the family defends this attack".into(),
                });
            }
        }
    }
    VerificationReport { checked, failures }
}

/// Verifies a strategy class against the literal closure definition: for
/// every configuration and every edge, the responder's defense must
/// validate, land inside the class, and — independently — some feasible
/// shift within the class must exist (separating responder bugs from class
/// bugs).
pub fn verify_class(g: &Graph, sc: &StrategyClass) -> VerificationReport {
    let closed = closed_masks(g);
    let mut failures = Vec::new();
    let mut checked = 0;
    let configs = sc.enumerate();
    for c in configs {
        for &(u, v) in g.edges() {
            checked += 1;
            let attack = match Attack::new(g, u, v) {
                Ok(a) => a,
                Err(e) => {
                    failures.push(Failure { config: c.clone(), edge: (u, v), reason: e.to_string() });
                    continue;
                }
            };
            match sc.respond(c, attack) {
                Ok(d) => match crate::graph::apply_defense(g, c, &d, attack) {
                    Ok(image) => {
                        if !sc.contains(&image) {
                            failures.push(Failure {
                                config: c.clone(),
                                edge: (u, v),
                                reason: format!("defense image {image} left the class"),
                            });
                        }
                    }
                    Err(e) => failures.push(Failure {
                        config: c.clone(),
                        edge: (u, v),
                        reason: format!("responder produced an invalid defense: {e}"),
                    }),
                },
                Err(e) => failures.push(Failure {
                    config: c.clone(),
                    edge: (u, v),
                    reason: format!("responder failed: {e}"),
                }),
            }
            let feasible = configs
                .iter()
                .any(|c2| shift_pairs(&closed, c, c2, u, v).is_some());
            if !feasible {
                failures.push(Failure {
                    config: c.clone(),
                    edge: (u, v),
                    reason: "no feasible shift stays within the class".into(),
                });
            }
        }
    }
    VerificationReport { checked, failures }
}
