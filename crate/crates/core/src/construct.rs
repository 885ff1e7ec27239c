//! Blow-ups of a base graph: every base vertex becomes an independent class and
//! every base arc `u -> v` becomes all arcs from class `u` to class `v`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::rational::{factorial, pow, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupSpec {
    base: OrientedGraph,
    sizes: Vec<usize>,
}

impl BlowupSpec {
    pub fn new(base: OrientedGraph, sizes: Vec<usize>) -> Result<Self> {
        if sizes.len() != base.n() {
            return Err(Error::InvalidSpec(format!(
                "{} part sizes for a base on {} vertices",
                sizes.len(),
                base.n()
            )));
        }
        if let Some(i) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidSpec(format!("part {i} is empty")));
        }
        Ok(BlowupSpec { base, sizes })
    }

    pub fn base(&self) -> &OrientedGraph {
        &self.base
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IteratedSpec {
    pub base: OrientedGraph,
    pub n: usize,
}

impl IteratedSpec {
    pub fn new(base: OrientedGraph, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("iterated blow-up on 0 vertices".into()));
        }
        if base.n() < 2 {
            return Err(Error::InvalidSpec(
                "iterated blow-up needs a base on at least 2 vertices".into(),
            ));
        }
        Ok(IteratedSpec { base, n })
    }
}

pub fn blow_up(spec: &BlowupSpec) -> OrientedGraph {
    let total = spec.sizes.iter().sum();
    let mut g = OrientedGraph::empty(total);
    let mut start = Vec::with_capacity(spec.sizes.len());
    let mut acc = 0;
    for &s in &spec.sizes {
        start.push(acc);
        acc += s;
    }
    add_class_arcs(&mut g, &spec.base, &start, &spec.sizes);
    g
}

fn add_class_arcs(g: &mut OrientedGraph, base: &OrientedGraph, start: &[usize], sizes: &[usize]) {
    for (a, b) in base.arcs() {
        for u in start[a]..start[a] + sizes[a] {
            for v in start[b]..start[b] + sizes[b] {
                g.add_arc(u, v).expect("classes are disjoint");
            }
        }
    }
}

/// Class sizes `ceil(n/k)` first, then `floor(n/k)`; trailing classes are empty
/// when `n < k`.
pub fn balanced_sizes(n: usize, k: usize) -> Vec<usize> {
    let (q, r) = (n / k, n % k);
    (0..k).map(|i| q + usize::from(i < r)).collect()
}

pub fn balanced_blow_up(base: &OrientedGraph, n: usize) -> Result<OrientedGraph> {
    if n < base.n() || base.n() == 0 {
        return Err(Error::InvalidSpec(format!(
            "balanced blow-up of a {}-vertex base on {n} vertices",
            base.n()
        )));
    }
    Ok(blow_up(&BlowupSpec::new(base.clone(), balanced_sizes(n, base.n()))?))
}

/// Balanced blow-up, recursing inside every class with at least two vertices.
/// A class smaller than the base uses that many singleton classes on the first
/// base vertices.
pub fn iterated_balanced_blow_up(spec: &IteratedSpec) -> OrientedGraph {
    let mut g = OrientedGraph::empty(spec.n);
    fill_iterated(&mut g, &spec.base, 0, spec.n);
    g
}

fn fill_iterated(g: &mut OrientedGraph, base: &OrientedGraph, offset: usize, n: usize) {
    if n <= 1 {
        return;
    }
    let sizes = balanced_sizes(n, base.n());
    let mut start = Vec::with_capacity(sizes.len());
    let mut acc = offset;
    for &s in &sizes {
        start.push(acc);
        acc += s;
    }
    add_class_arcs(g, base, &start, &sizes);
    for (&s, &o) in sizes.iter().zip(&start) {
        fill_iterated(g, base, o, s);
    }
}

/// Induced P4 count of a C5 blow-up: `sum_i prod_{j != i} x_j`.
pub fn blowup_p4_count(sizes: &[u64]) -> Result<BigInt> {
    if sizes.len() != 5 {
        return Err(Error::InvalidSpec(format!(
            "{} part sizes, a C5 blow-up has 5",
            sizes.len()
        )));
    }
    if sizes.contains(&0) {
        return Err(Error::InvalidSpec("part sizes must be positive".into()));
    }
    let mut total = BigInt::zero();
    for i in 0..5 {
        let mut prod = BigInt::one();
        for (j, &x) in sizes.iter().enumerate() {
            if j != i {
                prod *= x;
            }
        }
        total += prod;
    }
    Ok(total)
}

/// `k!/(k+1)^(k-1)` for balanced blow-ups of `C_{k+1}`, and
/// `k!/((k+1)^(k-1) - 1)` for iterated ones.
pub fn conjectured_density(k: u64, iterated: bool) -> Result<Rational> {
    if k < 2 {
        return Err(Error::OutOfRange(format!("path length {k} (need k >= 2)")));
    }
    let mut den = pow(k + 1, (k - 1) as u32);
    if iterated {
        den -= 1;
    }
    Ok(Rational::new(factorial(k), den))
}

/// Base graphs by name: `c5`, `ck:<k>` (directed cycle), `path:<k>`.
pub fn named_base(name: &str) -> Result<OrientedGraph> {
    let name = name.trim().to_ascii_lowercase();
    let arg = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::InvalidSpec(format!("bad size in base `{name}`")))
    };
    match name.split_once(':') {
        None if name == "c5" => OrientedGraph::directed_cycle(5),
        Some(("ck", k)) => OrientedGraph::directed_cycle(arg(k)?),
        Some(("path", k)) => OrientedGraph::directed_path(arg(k)?),
        _ => Err(Error::InvalidSpec(format!(
            "unknown base `{name}` (expected c5, ck:<k> or path:<k>)"
        ))),
    }
}
