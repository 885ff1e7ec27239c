//! Types, flags and the pair-density tensor on 6-vertex T3-free graphs.
//!
//! A type is a labelled 2-vertex graph (non-arc or arc `0 -> 1`). A flag is a
//! 4-vertex T3-free graph whose vertices 0 and 1 carry the type; two flags are
//! the same when they differ by swapping the unlabelled vertices 2 and 3.
//!
//! For a 6-vertex graph `H`, `p(F1, F2; H)` is the probability that a uniformly
//! random ordered pair of distinct vertices `(a, b)` together with a uniformly
//! random ordered split of the other four vertices into 2-sets `S1`, `S2` gives
//! flags `F1` on `{a, b} + S1` and `F2` on `{a, b} + S2` (zero unless `(a, b)`
//! induces the type). There are `30 * 6 = 180` such choices, so the tensor is
//! stored as integer counts over that denominator.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::canon::CanonicalForm;
use crate::count::for_each_combination;
use crate::enumerate::{enumerate_family, Constraint};
use crate::error::Result;
use crate::format::to_compact;
use crate::graph::OrientedGraph;
use crate::rational::Rational;
use crate::small::SmallGraph;

pub const TYPE_VERTICES: usize = 2;
pub const FLAG_VERTICES: usize = 4;
pub const TARGET_VERTICES: usize = 6;
/// Ordered type embeddings times ordered splits in a 6-vertex graph.
pub const PRODUCT_DENOMINATOR: u64 = 180;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagType {
    pub name: &'static str,
    /// Pair digit of the labelled vertices 0 and 1 (0 none, 1 arc `0 -> 1`).
    pub digit: u8,
}

impl FlagType {
    pub fn graph(&self) -> OrientedGraph {
        OrientedGraph::from_pair_digits(TYPE_VERTICES, &[self.digit]).expect("two vertices")
    }

    /// Compact code of the labelled type graph (`2:0`, `2:1`).
    pub fn code(&self) -> String {
        to_compact(&self.graph())
    }
}

pub fn types() -> Vec<FlagType> {
    vec![
        FlagType {
            name: "non-arc",
            digit: 0,
        },
        FlagType {
            name: "arc",
            digit: 1,
        },
    ]
}

/// A 4-vertex flag; vertices 0, 1 are labelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flag {
    pub graph: SmallGraph,
}

impl Flag {
    pub fn code(&self) -> u64 {
        self.graph.code()
    }
}

/// Representative code of a labelled 4-vertex graph up to swapping 2 and 3.
pub fn flag_code(g: &SmallGraph) -> u64 {
    g.code().min(g.code_under(&[0, 1, 3, 2]))
}

#[derive(Debug, Clone)]
pub struct FlagBasis {
    pub types: Vec<FlagType>,
    /// Flags per type, sorted by representative code.
    pub flags: Vec<Vec<Flag>>,
    /// 6-vertex T3-free classes.
    pub targets: Vec<CanonicalForm>,
    /// `[type][target]`: sparse ordered-pair counts `(i, j, count)`, `i, j` flag
    /// indices, over [`PRODUCT_DENOMINATOR`].
    products: Vec<Vec<Vec<(usize, usize, u32)>>>,
    index: Vec<HashMap<u64, usize>>,
}

pub fn build_basis() -> Result<FlagBasis> {
    let types = types();
    let mut flags = Vec::new();
    let mut index = Vec::new();
    for t in &types {
        let mut codes: Vec<u64> = Vec::new();
        for code in 0..3u64.pow(6) {
            let g = SmallGraph::from_code(FLAG_VERTICES, code);
            // pair (0, 1) is the most significant digit
            if g.digit(0, 1) == t.digit && g.is_t3_free() && flag_code(&g) == code {
                codes.push(code);
            }
        }
        codes.sort_unstable();
        index.push(codes.iter().enumerate().map(|(i, &c)| (c, i)).collect());
        flags.push(
            codes
                .into_iter()
                .map(|c| Flag {
                    graph: SmallGraph::from_code(FLAG_VERTICES, c),
                })
                .collect::<Vec<_>>(),
        );
    }
    let targets = enumerate_family(TARGET_VERTICES, Constraint::T3Free)?
        .members()
        .to_vec();
    let mut basis = FlagBasis {
        types,
        flags,
        targets,
        products: Vec::new(),
        index,
    };
    basis.products = (0..basis.types.len())
        .map(|t| {
            basis
                .targets
                .par_iter()
                .map(|h| basis.product_counts(t, &h.small()))
                .collect()
        })
        .collect();
    Ok(basis)
}

impl FlagBasis {
    /// Sparse counts of flag pairs over all 180 (embedding, split) choices in `h`.
    fn product_counts(&self, t: usize, h: &SmallGraph) -> Vec<(usize, usize, u32)> {
        let mut counts: HashMap<(usize, usize), u32> = HashMap::new();
        let n = h.n();
        for a in 0..n {
            for b in 0..n {
                if a == b || pair_digit(h, a, b) != self.types[t].digit {
                    continue;
                }
                let rest: Vec<usize> = (0..n).filter(|&v| v != a && v != b).collect();
                for_each_combination(rest.len(), 2, |idx| {
                    let s1 = [rest[idx[0]], rest[idx[1]]];
                    let s2: Vec<usize> = rest.iter().copied().filter(|v| !s1.contains(v)).collect();
                    let f1 = self.flag_of(t, h, [a, b, s1[0], s1[1]]);
                    let f2 = self.flag_of(t, h, [a, b, s2[0], s2[1]]);
                    *counts.entry((f1, f2)).or_insert(0) += 1;
                });
            }
        }
        let mut out: Vec<(usize, usize, u32)> = counts.into_iter().map(|((i, j), c)| (i, j, c)).collect();
        out.sort_unstable();
        out
    }

    fn flag_of(&self, t: usize, h: &SmallGraph, verts: [usize; 4]) -> usize {
        let g = h.relabel_subset(&verts);
        self.index[t][&flag_code(&g)]
    }

    /// Index of a labelled 4-vertex graph among the type's flags.
    pub fn flag_index(&self, t: usize, g: &SmallGraph) -> Option<usize> {
        self.index.get(t)?.get(&flag_code(g)).copied()
    }

    pub fn flag_count(&self, t: usize) -> usize {
        self.flags[t].len()
    }

    /// Ordered-pair counts for type `t` and target `h`, over [`PRODUCT_DENOMINATOR`].
    pub fn product_counts_of(&self, t: usize, h: usize) -> &[(usize, usize, u32)] {
        &self.products[t][h]
    }

    pub fn product_density_of_count(&self, count: u32) -> Rational {
        Rational::new(BigInt::from(count), BigInt::from(PRODUCT_DENOMINATOR))
    }

    pub fn product_density(&self, t: usize, h: usize, i: usize, j: usize) -> Rational {
        let c = self.products[t][h]
            .iter()
            .find(|&&(a, b, _)| a == i && b == j)
            .map_or(0, |&(_, _, c)| c);
        Rational::new(BigInt::from(c), BigInt::from(PRODUCT_DENOMINATOR))
    }

    pub fn product_matrix(&self, t: usize, h: usize) -> Vec<Vec<Rational>> {
        let k = self.flag_count(t);
        let mut m = vec![vec![Rational::from_integer(BigInt::from(0)); k]; k];
        for &(i, j, c) in &self.products[t][h] {
            m[i][j] = Rational::new(BigInt::from(c), BigInt::from(PRODUCT_DENOMINATOR));
        }
        m
    }

    /// `c_H`: induced 4-path density of each target.
    pub fn target_vector(&self) -> Vec<Rational> {
        self.targets
            .iter()
            .map(|h| Rational::new(BigInt::from(h.small().p4_count()), BigInt::from(15)))
            .collect()
    }
}

/// Digit of the ordered pair `(a, b)`: 1 when `a -> b`, 2 when `b -> a`.
fn pair_digit(g: &SmallGraph, a: usize, b: usize) -> u8 {
    if g.has_arc(a, b) {
        1
    } else if g.has_arc(b, a) {
        2
    } else {
        0
    }
}
