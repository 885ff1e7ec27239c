//! Maximising induced copies of a pattern: exhaustively over a small family, or
//! by hill climbing on the 4-path count from a given start.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::canon::{canonical_small, CanonicalForm, MAX_CANON_VERTICES};
use crate::count::{count_p4, count_p4_through, directed_path_length, for_each_combination, for_each_p4};
use crate::enumerate::{
    enumerate_family, labeled_sweep_fold, Backend, Constraint, MAX_FAMILY_VERTICES,
    MAX_SWEEP_VERTICES,
};
use crate::error::{Error, Result};
use crate::graph::{OrientedGraph, PairState, VertexSet};
use crate::small::SmallGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub n: usize,
    pub constraint: Constraint,
    pub max_count: u64,
    /// Canonical representatives in canonical order (exhaustive), or the final graph (local).
    pub maximizers: Vec<OrientedGraph>,
    pub exhaustive: bool,
    /// Labelled graphs represented by the search (exhaustive) or candidate moves evaluated (local).
    pub examined: u64,
    pub accepted_moves: usize,
}

/// Pattern counter on small graphs.
enum Target {
    P4,
    General { k: usize, arcs: usize, form: CanonicalForm },
}

impl Target {
    fn new(h: &OrientedGraph) -> Result<Self> {
        if directed_path_length(h) == Some(4) {
            return Ok(Target::P4);
        }
        if h.n() > MAX_CANON_VERTICES {
            return Err(Error::Unsupported(format!("pattern on {} vertices", h.n())));
        }
        let s = SmallGraph::from_graph(h)?;
        Ok(Target::General {
            k: h.n(),
            arcs: h.arc_count(),
            form: canonical_small(&s),
        })
    }

    fn count(&self, g: &SmallGraph) -> u64 {
        match self {
            Target::P4 => g.p4_count(),
            Target::General { k, arcs, form } => {
                let mut count = 0;
                for_each_combination(g.n(), *k, |idx| {
                    let s = g.relabel_subset(idx);
                    if s.arc_count() == *arcs && canonical_small(&s) == *form {
                        count += 1;
                    }
                });
                count
            }
        }
    }
}

/// Exact maximum over the family; the labelled sweep for `n <= 6`, orderly
/// classes above.
pub fn exhaustive_max(n: usize, constraint: Constraint, target: &OrientedGraph) -> Result<SearchReport> {
    let backend = if n <= MAX_SWEEP_VERTICES {
        Backend::LabeledSweep
    } else {
        Backend::Orderly
    };
    exhaustive_max_with(n, constraint, target, backend)
}

pub fn exhaustive_max_with(
    n: usize,
    constraint: Constraint,
    target: &OrientedGraph,
    backend: Backend,
) -> Result<SearchReport> {
    if target.n() > n {
        return Err(Error::SizeMismatch(format!(
            "pattern on {} vertices in graphs on {n}",
            target.n()
        )));
    }
    let t = Target::new(target)?;
    let (max_count, codes, examined) = match backend {
        Backend::LabeledSweep => {
            let ((max, codes), examined) = labeled_sweep_fold(
                n,
                constraint,
                || (0u64, BTreeSet::new()),
                |(mut max, mut codes), g| {
                    let c = t.count(g);
                    if c > max {
                        max = c;
                        codes.clear();
                    }
                    if c == max {
                        codes.insert(canonical_small(g).code);
                    }
                    (max, codes)
                },
                merge_best,
            )?;
            (max, codes, examined)
        }
        Backend::Orderly => {
            if n > MAX_FAMILY_VERTICES {
                return Err(Error::Unsupported(format!("exhaustive search on {n} vertices")));
            }
            let family = enumerate_family(n, constraint)?;
            let (max, codes) = family
                .members()
                .par_iter()
                .fold(
                    || (0u64, BTreeSet::new()),
                    |(mut max, mut codes), m| {
                        let c = t.count(&m.small());
                        if c > max {
                            max = c;
                            codes.clear();
                        }
                        if c == max {
                            codes.insert(m.code);
                        }
                        (max, codes)
                    },
                )
                .reduce(|| (0u64, BTreeSet::new()), merge_best);
            (max, codes, family.labeled_total())
        }
    };
    Ok(SearchReport {
        n,
        constraint,
        max_count,
        maximizers: codes
            .into_iter()
            .map(|code| CanonicalForm { n, code }.graph())
            .collect(),
        exhaustive: true,
        examined,
        accepted_moves: 0,
    })
}

fn merge_best(a: (u64, BTreeSet<u64>), b: (u64, BTreeSet<u64>)) -> (u64, BTreeSet<u64>) {
    match a.0.cmp(&b.0) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            let (max, mut codes) = a;
            codes.extend(b.1);
            (max, codes)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoveSet {
    /// Delete `y` and add a twin of `x`.
    pub clone_delete: bool,
    /// Change the state of one vertex pair.
    pub rewire_pair: bool,
}

impl Default for MoveSet {
    fn default() -> Self {
        MoveSet {
            clone_delete: true,
            rewire_pair: false,
        }
    }
}

/// A move that changes the 4-path count by `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    CloneDelete { delete: usize, clone: usize },
    Rewire { u: usize, v: usize, state: PairState },
}

/// Participation of every vertex and every vertex pair in induced 4-paths.
pub struct Participation {
    pub vertex: Vec<u64>,
    pair: Vec<u64>,
    n: usize,
}

impl Participation {
    pub fn of(g: &OrientedGraph) -> Self {
        let n = g.n();
        let mut vertex = vec![0; n];
        let mut pair = vec![0; n * n];
        for_each_p4(g, |q| {
            for i in 0..4 {
                vertex[q[i]] += 1;
                for j in 0..4 {
                    if i != j {
                        pair[q[i] * n + q[j]] += 1;
                    }
                }
            }
        });
        Participation { vertex, pair, n }
    }

    pub fn pair(&self, u: usize, v: usize) -> u64 {
        self.pair[u * self.n + v]
    }

    /// Change from deleting `y` and cloning `x`: the only copies lost are those
    /// through `y`, the only ones gained use the clone but not `x` (twins are
    /// non-adjacent with equal neighbourhoods, so never both on one 4-path).
    pub fn clone_delete_delta(&self, y: usize, x: usize) -> i64 {
        self.vertex[x] as i64 - self.vertex[y] as i64 - self.pair(x, y) as i64
    }
}

/// Best-improvement hill climbing on the 4-path count with strictly improving
/// moves only; stops at a local optimum or after `budget` accepted moves.
pub fn local_search(
    start: &OrientedGraph,
    constraint: Constraint,
    moves: MoveSet,
    budget: usize,
) -> Result<SearchReport> {
    if !constraint.admits_graph(start) {
        return Err(Error::InvalidStart(format!(
            "start graph is not {}",
            constraint.name()
        )));
    }
    let mut g = start.clone();
    let mut count = count_p4(&g);
    let mut examined = 0u64;
    let mut accepted = 0;
    while accepted < budget {
        let (best, evaluated) = best_move(&g, constraint, moves)?;
        examined += evaluated;
        let Some((mv, delta)) = best else { break };
        let next = apply_move(&g, mv)?;
        let observed = count_p4(&next);
        assert_eq!(
            observed as i64 - count as i64,
            delta,
            "predicted change disagrees with recount for {mv:?}"
        );
        g = next;
        count = observed;
        accepted += 1;
    }
    Ok(SearchReport {
        n: g.n(),
        constraint,
        max_count: count,
        maximizers: vec![g],
        exhaustive: false,
        examined,
        accepted_moves: accepted,
    })
}

pub fn apply_move(g: &OrientedGraph, mv: Move) -> Result<OrientedGraph> {
    match mv {
        Move::CloneDelete { delete, clone } => g.clone_vertex(clone)?.delete_vertex(delete),
        Move::Rewire { u, v, state } => {
            let mut h = g.clone();
            h.set_pair(u, v, state)?;
            Ok(h)
        }
    }
}

/// Strictly improving move with the largest gain (first in scan order on ties),
/// and the number of candidates evaluated.
pub fn best_move(
    g: &OrientedGraph,
    constraint: Constraint,
    moves: MoveSet,
) -> Result<(Option<(Move, i64)>, u64)> {
    let n = g.n();
    let part = Participation::of(g);
    let mut best: Option<(Move, i64)> = None;
    let mut evaluated = 0;
    let mut offer = |mv: Move, delta: i64| {
        if delta > 0 && best.map_or(true, |(_, d)| delta > d) {
            best = Some((mv, delta));
        }
    };
    if moves.clone_delete {
        // twins inherit x's neighbourhood, so T3-freeness is preserved
        for y in 0..n {
            for x in 0..n {
                if x != y {
                    evaluated += 1;
                    offer(Move::CloneDelete { delete: y, clone: x }, part.clone_delete_delta(y, x));
                }
            }
        }
    }
    if moves.rewire_pair {
        for u in 0..n {
            for v in u + 1..n {
                let now = g.pair(u, v);
                for state in [PairState::None, PairState::Forward, PairState::Backward] {
                    if state == now {
                        continue;
                    }
                    let mut h = g.clone();
                    h.set_pair(u, v, state)?;
                    if !constraint.admits_graph(&h) {
                        continue;
                    }
                    evaluated += 1;
                    let uv = VertexSet::new(n, [u, v])?;
                    let delta = count_p4_through(&h, &uv)? as i64 - part.pair(u, v) as i64;
                    offer(Move::Rewire { u, v, state }, delta);
                }
            }
        }
    }
    Ok((best, evaluated))
}

/// A vertex lying on the fewest induced 4-paths (smallest index on ties).
pub fn vertex_min_participation(g: &OrientedGraph) -> Result<(usize, u64)> {
    if g.n() < 4 {
        return Err(Error::SizeMismatch(format!(
            "participation needs at least 4 vertices, got {}",
            g.n()
        )));
    }
    let part = Participation::of(g);
    let (v, &c) = part
        .vertex
        .iter()
        .enumerate()
        .min_by_key(|&(v, c)| (*c, v))
        .expect("nonempty");
    Ok((v, c))
}
