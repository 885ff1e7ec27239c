//! Copyable bitmask graphs on at most 16 vertices, used by the enumeration
//! sweeps, canonical labelling and flag computations.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{pair_count, OrientedGraph, PairState, MAX_CODE_VERTICES};

pub const SMALL_MAX: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SmallGraph {
    n: u8,
    out: [u16; SMALL_MAX],
    inn: [u16; SMALL_MAX],
}

impl SmallGraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= SMALL_MAX, "SmallGraph holds at most {SMALL_MAX} vertices");
        SmallGraph {
            n: n as u8,
            out: [0; SMALL_MAX],
            inn: [0; SMALL_MAX],
        }
    }

    pub fn from_graph(g: &OrientedGraph) -> Result<Self> {
        if g.n() > SMALL_MAX {
            return Err(Error::Unsupported(format!(
                "{} vertices in a small graph (max {SMALL_MAX})",
                g.n()
            )));
        }
        let mut s = Self::empty(g.n());
        for (u, v) in g.arcs() {
            s.set_arc(u, v);
        }
        Ok(s)
    }

    pub fn to_graph(&self) -> OrientedGraph {
        let mut g = OrientedGraph::empty(self.n());
        for u in 0..self.n() {
            for v in bits(self.out[u]) {
                g.add_arc(u, v).expect("small graph is oriented");
            }
        }
        g
    }

    /// Induced subgraph of a large graph on `verts` (at most 16), in the given order.
    pub fn induced_from(g: &OrientedGraph, verts: &[usize]) -> Self {
        let mut s = Self::empty(verts.len());
        for (a, &u) in verts.iter().enumerate() {
            for (b, &v) in verts.iter().enumerate().skip(a + 1) {
                if g.has_arc(u, v) {
                    s.set_arc(a, b);
                } else if g.has_arc(v, u) {
                    s.set_arc(b, a);
                }
            }
        }
        s
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Sets `u -> v`; the caller guarantees the pair was empty.
    #[inline]
    pub fn set_arc(&mut self, u: usize, v: usize) {
        self.out[u] |= 1 << v;
        self.inn[v] |= 1 << u;
    }

    #[inline]
    pub fn clear_pair(&mut self, u: usize, v: usize) {
        self.out[u] &= !(1 << v);
        self.out[v] &= !(1 << u);
        self.inn[u] &= !(1 << v);
        self.inn[v] &= !(1 << u);
    }

    #[inline]
    pub fn set_pair_digit(&mut self, i: usize, j: usize, digit: u8) {
        self.clear_pair(i, j);
        match digit {
            1 => self.set_arc(i, j),
            2 => self.set_arc(j, i),
            _ => {}
        }
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u] >> v & 1 == 1
    }

    #[inline]
    pub fn out_mask(&self, u: usize) -> u16 {
        self.out[u]
    }

    #[inline]
    pub fn in_mask(&self, u: usize) -> u16 {
        self.inn[u]
    }

    #[inline]
    pub fn adj_mask(&self, u: usize) -> u16 {
        self.out[u] | self.inn[u]
    }

    #[inline]
    pub fn digit(&self, u: usize, v: usize) -> u8 {
        // relative to u < v
        if self.has_arc(u, v) {
            if u < v {
                1
            } else {
                2
            }
        } else if self.has_arc(v, u) {
            if u < v {
                2
            } else {
                1
            }
        } else {
            0
        }
    }

    pub fn arc_count(&self) -> usize {
        self.out[..self.n()].iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn is_t3_free(&self) -> bool {
        (0..self.n()).all(|a| bits(self.out[a]).all(|b| self.out[a] & self.out[b] == 0))
    }

    /// Number of induced directed 4-paths, counted once per middle arc `b -> c`.
    pub fn p4_count(&self) -> u64 {
        let mut total = 0u64;
        for b in 0..self.n() {
            for c in bits(self.out[b]) {
                let first = self.inn[b] & !self.adj_mask(c);
                let last = self.out[c] & !self.adj_mask(b);
                if last == 0 {
                    continue;
                }
                for a in bits(first) {
                    total += (last & !self.adj_mask(a)).count_ones() as u64;
                }
            }
        }
        total
    }

    /// Ternary pair code, most significant digit first.
    pub fn code(&self) -> u64 {
        debug_assert!(self.n() <= MAX_CODE_VERTICES);
        let n = self.n();
        let mut code = 0u64;
        for i in 0..n {
            for j in i + 1..n {
                code = code * 3 + self.digit(i, j) as u64;
            }
        }
        code
    }

    /// Code of the relabelled graph in which vertex `order[p]` takes position `p`.
    pub fn code_under(&self, order: &[usize]) -> u64 {
        let n = self.n();
        let mut code = 0u64;
        for p in 0..n {
            let u = order[p];
            for &v in &order[p + 1..n] {
                let d = if self.has_arc(u, v) {
                    1
                } else if self.has_arc(v, u) {
                    2
                } else {
                    0
                };
                code = code * 3 + d;
            }
        }
        code
    }

    pub fn from_code(n: usize, code: u64) -> Self {
        let mut g = Self::empty(n);
        let pairs = pair_count(n);
        let mut c = code;
        let mut digits = [0u8; 120];
        for k in (0..pairs).rev() {
            digits[k] = (c % 3) as u8;
            c /= 3;
        }
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                g.set_pair_digit(i, j, digits[k]);
                k += 1;
            }
        }
        g
    }

    /// Relabelled graph in which vertex `order[p]` becomes `p`.
    pub fn relabel(&self, order: &[usize]) -> Self {
        let n = self.n();
        let mut g = Self::empty(n);
        for p in 0..n {
            for q in p + 1..n {
                g.set_pair_digit(p, q, pair_digit(self, order[p], order[q]));
            }
        }
        g
    }

    /// Graph with vertex `v` removed; later vertices shift down.
    pub fn delete(&self, v: usize) -> Self {
        let keep: Vec<usize> = (0..self.n()).filter(|&u| u != v).collect();
        self.relabel_subset(&keep)
    }

    /// Induced subgraph on `verts`, vertex `verts[p]` becoming `p`.
    pub fn relabel_subset(&self, verts: &[usize]) -> Self {
        let mut g = Self::empty(verts.len());
        for p in 0..verts.len() {
            for q in p + 1..verts.len() {
                g.set_pair_digit(p, q, pair_digit(self, verts[p], verts[q]));
            }
        }
        g
    }

    /// Adds a vertex whose pairs to `0..n` carry `digits` (digit for pair `{i, n}`,
    /// `1` meaning `i -> n`).
    pub fn extend(&self, digits: &[u8]) -> Self {
        let n = self.n();
        let mut g = *self;
        g.n += 1;
        for (i, &d) in digits.iter().enumerate().take(n) {
            g.set_pair_digit(i, n, d);
        }
        g
    }

    pub fn pair_state(&self, u: usize, v: usize) -> PairState {
        PairState::from_digit(self.digit(u, v)).expect("digit in range")
    }
}

/// Digit of the ordered pair `(u, v)` as if `u` were the lower index.
#[inline]
fn pair_digit(g: &SmallGraph, u: usize, v: usize) -> u8 {
    if g.has_arc(u, v) {
        1
    } else if g.has_arc(v, u) {
        2
    } else {
        0
    }
}

impl fmt::Debug for SmallGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SmallGraph({:?})", self.to_graph())
    }
}

/// Iterates the set bits of a mask.
#[inline]
pub fn bits(mask: u16) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let t = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(t)
        }
    })
}
