//! Oriented graphs: loop-free digraphs with at most one arc per vertex pair.
//!
//! Adjacency is stored as out- and in-neighbour bitsets so that the counting
//! kernels can work with word operations. The ternary pair encoding (one digit
//! per unordered pair, row-major) is the canonical external form; see
//! [`OrientedGraph::pair_code`] and [`crate::format`].

use std::fmt;

use crate::error::{Error, Result};

/// State of an unordered pair `{u, v}` with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairState {
    None = 0,
    /// Arc from the lower index to the higher one.
    Forward = 1,
    Backward = 2,
}

impl PairState {
    pub fn digit(self) -> u8 {
        self as u8
    }

    pub fn from_digit(d: u8) -> Option<Self> {
        match d {
            0 => Some(PairState::None),
            1 => Some(PairState::Forward),
            2 => Some(PairState::Backward),
            _ => None,
        }
    }
}

/// Index of the unordered pair `{i, j}`, `i < j`, in row-major order.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Largest `n` whose ternary pair code fits in a `u64` (3^36 < 2^64).
pub const MAX_CODE_VERTICES: usize = 9;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrientedGraph {
    n: usize,
    words: usize,
    out: Vec<u64>,
    inn: Vec<u64>,
}

impl OrientedGraph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        OrientedGraph {
            n,
            words,
            out: vec![0; n * words],
            inn: vec![0; n * words],
        }
    }

    /// Builds a graph from an arc list, rejecting loops, 2-cycles and bad indices.
    /// Repeated arcs are accepted once.
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in arcs {
            g.add_arc(u, v)?;
        }
        Ok(g)
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::OutOfRange(format!(
                "arc ({u},{v}) on {} vertices",
                self.n
            )));
        }
        if u == v {
            return Err(Error::Loop(u));
        }
        if self.has_arc(v, u) {
            return Err(Error::TwoCycle(u, v));
        }
        self.set_bit_out(u, v);
        Ok(())
    }

    fn set_bit_out(&mut self, u: usize, v: usize) {
        self.out[u * self.words + v / 64] |= 1 << (v % 64);
        self.inn[v * self.words + u / 64] |= 1 << (u % 64);
    }

    fn clear_pair(&mut self, u: usize, v: usize) {
        self.out[u * self.words + v / 64] &= !(1 << (v % 64));
        self.inn[v * self.words + u / 64] &= !(1 << (u % 64));
        self.out[v * self.words + u / 64] &= !(1 << (u % 64));
        self.inn[u * self.words + v / 64] &= !(1 << (v % 64));
    }

    /// Overwrites the state of pair `{u, v}`; `Forward` means `min -> max`.
    pub fn set_pair(&mut self, u: usize, v: usize, state: PairState) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::OutOfRange(format!("pair ({u},{v})")));
        }
        if u == v {
            return Err(Error::Loop(u));
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.clear_pair(a, b);
        match state {
            PairState::None => {}
            PairState::Forward => self.set_bit_out(a, b),
            PairState::Backward => self.set_bit_out(b, a),
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }

    /// State of `{u, v}` relative to the ordering `u < v`.
    pub fn pair(&self, u: usize, v: usize) -> PairState {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        if self.has_arc(a, b) {
            PairState::Forward
        } else if self.has_arc(b, a) {
            PairState::Backward
        } else {
            PairState::None
        }
    }

    #[inline]
    pub fn out_row(&self, u: usize) -> &[u64] {
        &self.out[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    pub fn in_row(&self, u: usize) -> &[u64] {
        &self.inn[u * self.words..(u + 1) * self.words]
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out_row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn in_degree(&self, u: usize) -> usize {
        self.in_row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn out_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.out_row(u))
    }

    pub fn in_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.in_row(u))
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| self.out_neighbors(u).map(move |v| (u, v)))
            .collect()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// The converse graph: every arc flipped.
    pub fn reverse(&self) -> Self {
        OrientedGraph {
            n: self.n,
            words: self.words,
            out: self.inn.clone(),
            inn: self.out.clone(),
        }
    }

    /// The image `π(G)`: arc `π(u) -> π(v)` for every arc `u -> v`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::SizeMismatch(format!(
                "permutation of length {} for {} vertices",
                perm.len(),
                self.n
            )));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::OutOfRange("not a permutation".into()));
            }
        }
        let mut g = Self::empty(self.n);
        for (u, v) in self.arcs() {
            g.set_bit_out(perm[u], perm[v]);
        }
        Ok(g)
    }

    /// Induced subgraph on `set`, relabelled `0..|set|` in increasing order.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<Self> {
        if set.universe() != self.n {
            return Err(Error::OutOfRange(format!(
                "vertex set over {} vertices used on a graph with {}",
                set.universe(),
                self.n
            )));
        }
        Ok(self.induced_on(set.members()))
    }

    /// Induced subgraph on an already validated, duplicate-free vertex list.
    pub(crate) fn induced_on(&self, verts: &[usize]) -> Self {
        let mut g = Self::empty(verts.len());
        for (a, &u) in verts.iter().enumerate() {
            for (b, &v) in verts.iter().enumerate() {
                if a != b && self.has_arc(u, v) {
                    g.set_bit_out(a, b);
                }
            }
        }
        g
    }

    /// Adds vertex `n` with exactly the in- and out-neighbourhood of `x`; `x` and its
    /// clone are non-adjacent.
    pub fn clone_vertex(&self, x: usize) -> Result<Self> {
        if x >= self.n {
            return Err(Error::OutOfRange(format!("vertex {x}")));
        }
        let mut g = Self::empty(self.n + 1);
        for (u, v) in self.arcs() {
            g.set_bit_out(u, v);
        }
        let c = self.n;
        for v in self.out_neighbors(x) {
            g.set_bit_out(c, v);
        }
        for u in self.in_neighbors(x) {
            g.set_bit_out(u, c);
        }
        Ok(g)
    }

    /// Removes `y`; vertices above `y` shift down by one.
    pub fn delete_vertex(&self, y: usize) -> Result<Self> {
        if y >= self.n {
            return Err(Error::OutOfRange(format!("vertex {y}")));
        }
        let keep: Vec<usize> = (0..self.n).filter(|&v| v != y).collect();
        Ok(self.induced_on(&keep))
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let mut g = Self::empty(self.n + other.n);
        for (u, v) in self.arcs() {
            g.set_bit_out(u, v);
        }
        for (u, v) in other.arcs() {
            g.set_bit_out(u + self.n, v + self.n);
        }
        g
    }

    /// No three vertices induce the transitive tournament. A transitive triple
    /// `a -> b -> c, a -> c` exists iff some arc `a -> b` has a common out-neighbour.
    pub fn is_t3_free(&self) -> bool {
        for a in 0..self.n {
            let oa = self.out_row(a);
            for b in self.out_neighbors(a) {
                let ob = self.out_row(b);
                if oa.iter().zip(ob).any(|(x, y)| x & y != 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Ternary pair code, first pair most significant. Only for `n <= 9`.
    pub fn pair_code(&self) -> Result<u64> {
        if self.n > MAX_CODE_VERTICES {
            return Err(Error::Unsupported(format!(
                "pair code for {} vertices (max {MAX_CODE_VERTICES})",
                self.n
            )));
        }
        let mut code = 0u64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                code = code * 3 + self.pair(i, j).digit() as u64;
            }
        }
        Ok(code)
    }

    pub fn from_pair_code(n: usize, code: u64) -> Result<Self> {
        if n > MAX_CODE_VERTICES {
            return Err(Error::Unsupported(format!("pair code for {n} vertices")));
        }
        let pairs = pair_count(n);
        if code >= 3u64.pow(pairs as u32) {
            return Err(Error::OutOfRange(format!("code {code} for {n} vertices")));
        }
        let mut digits = vec![0u8; pairs];
        let mut c = code;
        for d in digits.iter_mut().rev() {
            *d = (c % 3) as u8;
            c /= 3;
        }
        Self::from_pair_digits(n, &digits)
    }

    pub fn pair_digits(&self) -> Vec<u8> {
        let mut digits = Vec::with_capacity(pair_count(self.n));
        for i in 0..self.n {
            for j in i + 1..self.n {
                digits.push(self.pair(i, j).digit());
            }
        }
        digits
    }

    pub fn from_pair_digits(n: usize, digits: &[u8]) -> Result<Self> {
        if digits.len() != pair_count(n) {
            return Err(Error::SizeMismatch(format!(
                "{} pair digits for {n} vertices (expected {})",
                digits.len(),
                pair_count(n)
            )));
        }
        let mut g = Self::empty(n);
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                match PairState::from_digit(digits[k]) {
                    Some(PairState::None) => {}
                    Some(PairState::Forward) => g.set_bit_out(i, j),
                    Some(PairState::Backward) => g.set_bit_out(j, i),
                    None => {
                        return Err(Error::OutOfRange(format!("pair digit {}", digits[k])));
                    }
                }
                k += 1;
            }
        }
        Ok(g)
    }

    /// Directed path `0 -> 1 -> ... -> k-1`.
    pub fn directed_path(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::OutOfRange("directed path needs k >= 1".into()));
        }
        let arcs: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
        Self::from_arcs(k, &arcs)
    }

    /// Directed cycle `0 -> 1 -> ... -> k-1 -> 0`.
    pub fn directed_cycle(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::OutOfRange("directed cycle needs k >= 3".into()));
        }
        let arcs: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        Self::from_arcs(k, &arcs)
    }

    /// Transitive tournament with `i -> j` for all `i < j`.
    pub fn transitive_tournament(k: usize) -> Self {
        let mut g = Self::empty(k);
        for i in 0..k {
            for j in i + 1..k {
                g.set_bit_out(i, j);
            }
        }
        g
    }
}

impl fmt::Debug for OrientedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrientedGraph(n={}, arcs={:?})", self.n, self.arcs())
    }
}

pub(crate) fn iter_bits(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut bits = word;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            }
        })
    })
}

/// Sorted, duplicate-free set of vertices of a graph on `universe` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    members: Vec<usize>,
}

impl VertexSet {
    pub fn new(universe: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        if let Some(&bad) = members.iter().find(|&&v| v >= universe) {
            return Err(Error::OutOfRange(format!(
                "vertex {bad} not in 0..{universe}"
            )));
        }
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::OutOfRange("duplicate vertex in set".into()));
        }
        Ok(VertexSet { universe, members })
    }

    pub fn all(universe: usize) -> Self {
        VertexSet {
            universe,
            members: (0..universe).collect(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_arcs() {
        assert!(matches!(
            OrientedGraph::from_arcs(2, &[(0, 1), (1, 0)]),
            Err(Error::TwoCycle(1, 0))
        ));
        assert!(matches!(
            OrientedGraph::from_arcs(2, &[(1, 1)]),
            Err(Error::Loop(1))
        ));
        assert!(matches!(
            OrientedGraph::from_arcs(2, &[(0, 2)]),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn triangles() {
        let c3 = OrientedGraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let t3 = OrientedGraph::from_arcs(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(c3.is_t3_free());
        assert!(!t3.is_t3_free());
        assert_eq!(t3, OrientedGraph::transitive_tournament(3));
        assert_eq!(c3, OrientedGraph::directed_cycle(3).unwrap());
        assert!(OrientedGraph::directed_cycle(5).unwrap().is_t3_free());
    }

    #[test]
    fn path_and_cycle_constructors() {
        let p4 = OrientedGraph::directed_path(4).unwrap();
        assert_eq!(p4.n(), 4);
        assert_eq!(p4.arc_count(), 3);
        assert!(OrientedGraph::directed_path(0).is_err());
        assert!(OrientedGraph::directed_cycle(2).is_err());
    }

    #[test]
    fn reverse_is_an_involution() {
        let g = OrientedGraph::from_arcs(5, &[(0, 1), (3, 1), (4, 2), (2, 0)]).unwrap();
        assert_eq!(g.reverse().reverse(), g);
        assert!(g.reverse().has_arc(1, 3));
    }

    #[test]
    fn induced_subgraphs() {
        let t3 = OrientedGraph::transitive_tournament(3);
        let s = VertexSet::new(3, [0, 1]).unwrap();
        let e = t3.induced_subgraph(&s).unwrap();
        assert_eq!(e.arcs(), vec![(0, 1)]);
        assert_eq!(t3.induced_subgraph(&VertexSet::all(3)).unwrap(), t3);
        assert!(VertexSet::new(3, [0, 3]).is_err());
        assert!(VertexSet::new(3, [1, 1]).is_err());
    }

    #[test]
    fn clone_of_single_vertex() {
        let g = OrientedGraph::empty(1).clone_vertex(0).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.arc_count(), 0);
    }

    #[test]
    fn clone_copies_neighbourhood() {
        let c5 = OrientedGraph::directed_cycle(5).unwrap();
        let g = c5.clone_vertex(2).unwrap();
        assert!(g.has_arc(1, 5) && g.has_arc(5, 3));
        assert!(!g.adjacent(2, 5));
        assert!(g.is_t3_free());
    }

    #[test]
    fn pair_code_round_trip() {
        let g = OrientedGraph::from_arcs(4, &[(0, 1), (3, 0), (2, 3)]).unwrap();
        let code = g.pair_code().unwrap();
        assert_eq!(OrientedGraph::from_pair_code(4, code).unwrap(), g);
        // (0,1)=1 (0,2)=0 (0,3)=2 (1,2)=0 (1,3)=0 (2,3)=1
        assert_eq!(g.pair_digits(), vec![1, 0, 2, 0, 0, 1]);
    }

    #[test]
    fn large_graphs_use_multiple_words() {
        let mut g = OrientedGraph::empty(130);
        g.add_arc(0, 129).unwrap();
        g.add_arc(129, 64).unwrap();
        assert!(g.has_arc(0, 129) && g.has_arc(129, 64));
        assert_eq!(g.out_neighbors(129).collect::<Vec<_>>(), vec![64]);
        assert_eq!(g.in_neighbors(129).collect::<Vec<_>>(), vec![0]);
        assert!(g.pair_code().is_err());
    }
}
