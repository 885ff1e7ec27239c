//! Isomorph-free generation of oriented graphs.
//!
//! Two backends that must agree:
//!
//! * **labeled sweep**: run a ternary counter over all `3^C(n,2)` labelled
//!   graphs, filter by the constraint and deduplicate by canonical code;
//! * **orderly extension**: extend every class on `m` vertices by one vertex in
//!   all `3^m` ways and keep a child only when deleting its canonically-last
//!   vertex gives back the parent class (canonical deletion). Each class then
//!   has exactly one parent class, so deduplication is per parent.
//!
//! Both are parallel over contiguous blocks (counter prefixes or parents) and
//! merge in block order, so results do not depend on the worker count.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::canon::{automorphism_count, canonical_labeling, canonical_small, CanonicalForm};
use crate::error::{Error, Result};
use crate::graph::{pair_count, OrientedGraph};
use crate::small::SmallGraph;

/// Largest `n` for the labelled sweep (3^15 graphs at n = 6).
pub const MAX_SWEEP_VERTICES: usize = 6;
/// Largest `n` for the orderly backend.
pub const MAX_FAMILY_VERTICES: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    AllOriented,
    T3Free,
}

impl Constraint {
    #[inline]
    pub fn admits(self, g: &SmallGraph) -> bool {
        match self {
            Constraint::AllOriented => true,
            Constraint::T3Free => g.is_t3_free(),
        }
    }

    pub fn admits_graph(self, g: &OrientedGraph) -> bool {
        match self {
            Constraint::AllOriented => true,
            Constraint::T3Free => g.is_t3_free(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Constraint::AllOriented => "all-oriented",
            Constraint::T3Free => "t3-free",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    LabeledSweep,
    Orderly,
}

/// One representative per isomorphism class, sorted by canonical code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFamily {
    pub n: usize,
    pub constraint: Constraint,
    members: Vec<CanonicalForm>,
}

impl GraphFamily {
    pub fn members(&self) -> &[CanonicalForm] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn graphs(&self) -> Vec<OrientedGraph> {
        self.members.iter().map(|m| m.graph()).collect()
    }

    pub fn index_of(&self, form: &CanonicalForm) -> Option<usize> {
        self.members.binary_search(form).ok()
    }

    /// Number of labelled graphs represented, `sum n!/|Aut(H)|`.
    pub fn labeled_total(&self) -> u64 {
        let fact: u64 = (1..=self.n as u64).product();
        self.members
            .iter()
            .map(|m| fact / automorphism_count(&m.small()))
            .sum()
    }
}

pub fn enumerate_family(n: usize, constraint: Constraint) -> Result<GraphFamily> {
    enumerate_family_with(n, constraint, Backend::Orderly)
}

pub fn enumerate_family_with(
    n: usize,
    constraint: Constraint,
    backend: Backend,
) -> Result<GraphFamily> {
    let members = match backend {
        Backend::LabeledSweep => sweep_family(n, constraint)?,
        Backend::Orderly => orderly_family(n, constraint)?,
    };
    Ok(GraphFamily {
        n,
        constraint,
        members,
    })
}

fn sweep_family(n: usize, constraint: Constraint) -> Result<Vec<CanonicalForm>> {
    let (codes, _) = labeled_sweep_fold(
        n,
        constraint,
        BTreeSet::new,
        |mut acc, g| {
            acc.insert(canonical_small(g).code);
            acc
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    )?;
    Ok(codes
        .into_iter()
        .map(|code| CanonicalForm { n, code })
        .collect())
}

fn orderly_family(n: usize, constraint: Constraint) -> Result<Vec<CanonicalForm>> {
    if n > MAX_FAMILY_VERTICES {
        return Err(Error::Unsupported(format!(
            "enumeration on {n} vertices (max {MAX_FAMILY_VERTICES})"
        )));
    }
    if n == 0 {
        return Ok(vec![CanonicalForm { n: 0, code: 0 }]);
    }
    let mut level = vec![CanonicalForm { n: 1, code: 0 }];
    for m in 1..n {
        let mut children: Vec<u64> = level
            .par_iter()
            .map(|parent| extend_parent(parent, constraint))
            .flatten()
            .collect();
        children.sort_unstable();
        assert!(
            children.windows(2).all(|w| w[0] != w[1]),
            "canonical deletion produced a duplicate class on {} vertices",
            m + 1
        );
        level = children
            .into_iter()
            .map(|code| CanonicalForm { n: m + 1, code })
            .collect();
    }
    Ok(level)
}

/// Children of one parent class accepted by canonical deletion.
fn extend_parent(parent: &CanonicalForm, constraint: Constraint) -> Vec<u64> {
    let m = parent.n;
    let base = parent.small();
    let mut digits = vec![0u8; m];
    let mut accepted = BTreeSet::new();
    loop {
        let child = base.extend(&digits);
        if constraint.admits(&child) {
            let (code, order) = canonical_labeling(&child);
            let last = order[m];
            if !accepted.contains(&code)
                && (last == m || canonical_small(&child.delete(last)).code == parent.code)
            {
                accepted.insert(code);
            }
        }
        // odometer over the new vertex's pair digits
        let mut i = m;
        loop {
            if i == 0 {
                return accepted.into_iter().collect();
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < 3 {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Visits every labelled graph on `n` vertices satisfying `constraint`, in
/// ternary-counter order; returns the number visited.
pub fn labeled_sweep(
    n: usize,
    constraint: Constraint,
    mut visitor: impl FnMut(&SmallGraph),
) -> Result<u64> {
    check_sweep(n)?;
    let layout = SweepLayout::new(n);
    let mut count = 0;
    for block in 0..layout.blocks() {
        layout.run_block(block, |g| {
            if constraint.admits(g) {
                visitor(g);
                count += 1;
            }
        });
    }
    Ok(count)
}

/// Parallel fold over the labelled sweep. Blocks are contiguous counter ranges;
/// block results are merged left to right, so an associative `merge` gives a
/// result independent of scheduling.
pub fn labeled_sweep_fold<T, I, F, M>(
    n: usize,
    constraint: Constraint,
    identity: I,
    fold: F,
    merge: M,
) -> Result<(T, u64)>
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(T, &SmallGraph) -> T + Sync,
    M: Fn(T, T) -> T + Sync,
{
    check_sweep(n)?;
    let layout = SweepLayout::new(n);
    let parts: Vec<(T, u64)> = (0..layout.blocks())
        .into_par_iter()
        .map(|block| {
            let mut acc = Some(identity());
            let mut count = 0u64;
            layout.run_block(block, |g| {
                if constraint.admits(g) {
                    acc = Some(fold(acc.take().expect("accumulator"), g));
                    count += 1;
                }
            });
            (acc.expect("accumulator"), count)
        })
        .collect();
    let mut total = 0;
    let mut result = identity();
    for (part, count) in parts {
        result = merge(result, part);
        total += count;
    }
    Ok((result, total))
}

fn check_sweep(n: usize) -> Result<()> {
    if n > MAX_SWEEP_VERTICES {
        return Err(Error::Unsupported(format!(
            "labelled sweep on {n} vertices (max {MAX_SWEEP_VERTICES})"
        )));
    }
    Ok(())
}

/// Splits the counter into blocks by its leading (most significant) digits.
struct SweepLayout {
    n: usize,
    pairs: Vec<(usize, usize)>,
    prefix: usize,
}

impl SweepLayout {
    fn new(n: usize) -> Self {
        let mut pairs = Vec::with_capacity(pair_count(n));
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        let prefix = pairs.len().min(5);
        SweepLayout { n, pairs, prefix }
    }

    fn blocks(&self) -> usize {
        3usize.pow(self.prefix as u32)
    }

    fn run_block(&self, block: usize, mut visit: impl FnMut(&SmallGraph)) {
        let p = self.pairs.len();
        let mut digits = vec![0u8; p];
        let mut b = block;
        for k in (0..self.prefix).rev() {
            digits[k] = (b % 3) as u8;
            b /= 3;
        }
        let mut g = SmallGraph::empty(self.n);
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            g.set_pair_digit(i, j, digits[k]);
        }
        loop {
            visit(&g);
            let mut k = p;
            loop {
                if k == self.prefix {
                    return;
                }
                k -= 1;
                let (i, j) = self.pairs[k];
                digits[k] += 1;
                if digits[k] < 3 {
                    g.set_pair_digit(i, j, digits[k]);
                    break;
                }
                digits[k] = 0;
                g.set_pair_digit(i, j, 0);
            }
        }
    }
}
