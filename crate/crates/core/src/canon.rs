//! Canonical forms for small oriented graphs.
//!
//! The canonical code is the minimum ternary pair code over all relabellings
//! that respect an isomorphism-invariant ordered vertex partition (iterated
//! degree refinement). Isomorphic graphs produce the same partition up to the
//! isomorphism, hence the same set of candidate codes and the same minimum.
//! [`canonical_form_exhaustive`] minimises over all `n!` permutations instead
//! and is kept as an independent reference.

use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::small::{bits, SmallGraph};

/// Largest vertex count accepted by canonical labelling.
pub const MAX_CANON_VERTICES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    pub code: u64,
}

impl CanonicalForm {
    pub fn graph(&self) -> OrientedGraph {
        SmallGraph::from_code(self.n, self.code).to_graph()
    }

    pub fn small(&self) -> SmallGraph {
        SmallGraph::from_code(self.n, self.code)
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_CANON_VERTICES {
        return Err(Error::Unsupported(format!(
            "canonical form for {n} vertices (max {MAX_CANON_VERTICES})"
        )));
    }
    Ok(())
}

pub fn canonical_form(g: &OrientedGraph) -> Result<CanonicalForm> {
    check_size(g.n())?;
    Ok(canonical_small(&SmallGraph::from_graph(g)?))
}

pub fn are_isomorphic(g: &OrientedGraph, h: &OrientedGraph) -> Result<bool> {
    if g.n() != h.n() {
        check_size(g.n().max(h.n()))?;
        return Ok(false);
    }
    if g.arc_count() != h.arc_count() {
        check_size(g.n())?;
        return Ok(false);
    }
    Ok(canonical_form(g)? == canonical_form(h)?)
}

pub fn canonical_small(g: &SmallGraph) -> CanonicalForm {
    let (code, _) = canonical_labeling(g);
    CanonicalForm { n: g.n(), code }
}

/// Minimum code and an ordering attaining it (`order[p]` is the vertex placed at `p`).
pub fn canonical_labeling(g: &SmallGraph) -> (u64, Vec<usize>) {
    let n = g.n();
    if n <= 1 {
        return (0, (0..n).collect());
    }
    let cells = refine(g);
    let mut search = Search {
        g,
        cells: &cells,
        order: Vec::with_capacity(n),
        used: 0,
        best: u64::MAX,
        best_order: Vec::new(),
    };
    search.run(0);
    (search.best, search.best_order)
}

struct Search<'a> {
    g: &'a SmallGraph,
    cells: &'a [Vec<usize>],
    order: Vec<usize>,
    used: u16,
    best: u64,
    best_order: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, cell: usize) {
        if cell == self.cells.len() {
            let code = self.g.code_under(&self.order);
            if code < self.best {
                self.best = code;
                self.best_order = self.order.clone();
            }
            return;
        }
        let placed_in_cell = self.cells[cell]
            .iter()
            .filter(|&&v| self.used >> v & 1 == 1)
            .count();
        if placed_in_cell == self.cells[cell].len() {
            self.run(cell + 1);
            return;
        }
        for i in 0..self.cells[cell].len() {
            let v = self.cells[cell][i];
            if self.used >> v & 1 == 1 {
                continue;
            }
            self.used |= 1 << v;
            self.order.push(v);
            self.run(cell);
            self.order.pop();
            self.used &= !(1 << v);
        }
    }
}

/// Ordered partition of the vertices into refinement cells.
fn refine(g: &SmallGraph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut color: Vec<usize> = vec![0; n];
    let mut classes = 1;
    loop {
        let sigs: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut outs: Vec<usize> = bits(g.out_mask(v)).map(|u| color[u]).collect();
                let mut ins: Vec<usize> = bits(g.in_mask(v)).map(|u| color[u]).collect();
                outs.sort_unstable();
                ins.sort_unstable();
                (color[v], outs, ins)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = sigs
            .iter()
            .map(|s| distinct.binary_search(s).expect("present"))
            .collect();
        let done = distinct.len() == classes;
        color = next;
        classes = distinct.len();
        if done {
            break;
        }
    }
    let mut cells = vec![Vec::new(); classes];
    for v in 0..n {
        cells[color[v]].push(v);
    }
    cells
}

/// Reference canonical form: minimum code over every permutation.
pub fn canonical_form_exhaustive(g: &OrientedGraph) -> Result<CanonicalForm> {
    check_size(g.n())?;
    let s = SmallGraph::from_graph(g)?;
    let mut best = u64::MAX;
    for_each_permutation(g.n(), |order| {
        best = best.min(s.code_under(order));
    });
    if g.n() <= 1 {
        best = 0;
    }
    Ok(CanonicalForm { n: g.n(), code: best })
}

/// Number of automorphisms, by checking every permutation.
pub fn automorphism_count(g: &SmallGraph) -> u64 {
    let own = g.code();
    let mut count = 0;
    for_each_permutation(g.n(), |order| {
        if g.code_under(order) == own {
            count += 1;
        }
    });
    count
}

/// Calls `f` on every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}
