//! Closed-form bounds on the inducibility of directed paths `P_k`, with and
//! without the T3-free restriction.

use num_bigint::BigInt;

use crate::construct::{iterated_balanced_blow_up, IteratedSpec};
use crate::count::density;
use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::rational::{factorial, parse_rational, pow, Rational};

/// A bound quoted from an external computation, kept as its printed decimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotedBound {
    pub value: Rational,
    pub decimal: &'static str,
    pub source: &'static str,
}

const FLAG_ALGEBRA_UPPER: [(u64, &str); 3] = [(4, "0.19356"), (5, "0.092676"), (6, "0.04323")];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsRow {
    pub k: u64,
    /// Iterated balanced blow-ups of `C_{k+1}`: `k!/((k+1)^(k-1) - 1)`.
    pub lower_iterated: Rational,
    /// Iterated blow-ups of `P_k` itself: `k!/(k^k - k)`.
    pub lower_generic: Rational,
    /// Balanced blow-ups of `C_{k+1}`, conjecturally tight for T3-free graphs: `k!/(k+1)^(k-1)`.
    pub conj_t3free: Rational,
    /// Path-building bound for all oriented graphs: `k!/(k-1)^(k-1)`.
    pub upper_pg: Rational,
    /// Weighting bound for T3-free graphs: `k!/k^(k-1)`.
    pub upper_knv_t3free: Rational,
    /// Flag-algebra upper bound for all oriented graphs, where computed.
    pub upper_fa: Option<QuotedBound>,
}

impl BoundsRow {
    pub const FIELDS: [&'static str; 7] = [
        "k",
        "lower_iterated",
        "lower_generic",
        "conj_t3free",
        "upper_pg",
        "upper_knv_t3free",
        "upper_fa",
    ];
}

pub fn bounds_row(k: u64) -> Result<BoundsRow> {
    if k < 3 {
        return Err(Error::OutOfRange(format!("bounds need k >= 3, got {k}")));
    }
    if k > 60 {
        return Err(Error::OutOfRange(format!("k = {k} is beyond the tabulated range")));
    }
    let f = factorial(k);
    let e = (k - 1) as u32;
    let frac = |den: BigInt| Rational::new(f.clone(), den);
    let upper_fa = FLAG_ALGEBRA_UPPER
        .iter()
        .find(|(kk, _)| *kk == k)
        .map(|&(_, decimal)| QuotedBound {
            value: parse_rational(decimal).expect("constant decimal"),
            decimal,
            source: "flag-algebra computation, conclusion table",
        });
    Ok(BoundsRow {
        k,
        lower_iterated: frac(pow(k + 1, e) - 1),
        lower_generic: frac(pow(k, k as u32) - BigInt::from(k)),
        conj_t3free: frac(pow(k + 1, e)),
        upper_pg: frac(pow(k - 1, e)),
        upper_knv_t3free: frac(pow(k, e)),
        upper_fa,
    })
}

/// Density of `P_k` in the iterated balanced blow-up of `C_{k+1}` on `n` vertices.
pub fn empirical_floor(k: usize, n: usize) -> Result<Rational> {
    if k < 2 {
        return Err(Error::OutOfRange(format!("path length {k} (need k >= 2)")));
    }
    if k > n {
        return Err(Error::SizeMismatch(format!("P_{k} in a graph on {n} vertices")));
    }
    let base = OrientedGraph::directed_cycle(k + 1)?;
    let g = iterated_balanced_blow_up(&IteratedSpec::new(base, n)?);
    density(&g, &OrientedGraph::directed_path(k)?)
}
