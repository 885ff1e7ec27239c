//! Induced-copy counting and densities.
//!
//! Directed paths get dedicated kernels: a per-subset matcher on the pair
//! states, and for the 4-path a bitset kernel that enumerates the middle arc
//! `b -> c` and counts admissible end pairs `(a, d)`. Other patterns are counted
//! by enumerating vertex subsets and comparing canonical forms.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::canon::{canonical_small, CanonicalForm, MAX_CANON_VERTICES};
use crate::error::{Error, Result};
use crate::graph::{iter_bits, OrientedGraph, VertexSet};
use crate::rational::{binomial, Rational};
use crate::small::SmallGraph;

/// Induced copies of `h` in `g`.
pub fn count_induced(g: &OrientedGraph, h: &OrientedGraph) -> Result<u64> {
    if h.n() > g.n() {
        return Err(Error::SizeMismatch(format!(
            "pattern on {} vertices exceeds host on {}",
            h.n(),
            g.n()
        )));
    }
    if let Some(k) = directed_path_length(h) {
        return Ok(count_directed_paths(g, k));
    }
    if h.n() > MAX_CANON_VERTICES {
        return Err(Error::Unsupported(format!(
            "pattern on {} vertices (max {MAX_CANON_VERTICES})",
            h.n()
        )));
    }
    let target = canonical_small(&SmallGraph::from_graph(h)?);
    let arcs = h.arc_count();
    Ok(count_subsets(g, h.n(), |verts| {
        let s = SmallGraph::induced_from(g, verts);
        s.arc_count() == arcs && canonical_small(&s) == target
    }))
}

/// `d_H(G)`: induced copies divided by `C(|G|, |H|)`.
pub fn density(g: &OrientedGraph, h: &OrientedGraph) -> Result<Rational> {
    let count = count_induced(g, h)?;
    Ok(Rational::new(
        BigInt::from(count),
        binomial(g.n() as u64, h.n() as u64),
    ))
}

/// Returns `k` when `h` is (isomorphic to) the directed path on `k` vertices.
pub fn directed_path_length(h: &OrientedGraph) -> Option<usize> {
    let k = h.n();
    if k == 0 || h.arc_count() != k - 1 {
        return None;
    }
    let verts: Vec<usize> = (0..k).collect();
    is_directed_path_on(h, &verts).then_some(k)
}

/// Induced directed paths on `k` vertices.
pub fn count_directed_paths(g: &OrientedGraph, k: usize) -> u64 {
    match k {
        0 => 0,
        1 => g.n() as u64,
        2 => g.arc_count() as u64,
        4 => count_p4(g),
        _ => count_subsets(g, k, |verts| is_directed_path_on(g, verts)),
    }
}

/// True when `verts` (distinct) induce a directed path: `k - 1` arcs, in- and
/// out-degree at most one inside the set, and a walk from the unique source
/// that covers every vertex.
pub fn is_directed_path_on(g: &OrientedGraph, verts: &[usize]) -> bool {
    let k = verts.len();
    if k == 0 {
        return false;
    }
    let mut next = [usize::MAX; 64];
    let mut indeg = [0u8; 64];
    assert!(k <= 64, "path matcher supports at most 64 vertices");
    let mut arcs = 0;
    for a in 0..k {
        for b in 0..k {
            if a != b && g.has_arc(verts[a], verts[b]) {
                arcs += 1;
                if arcs >= k || next[a] != usize::MAX || indeg[b] != 0 {
                    return false;
                }
                next[a] = b;
                indeg[b] = 1;
            }
        }
    }
    if arcs != k - 1 {
        return false;
    }
    let Some(mut cur) = (0..k).find(|&a| indeg[a] == 0) else {
        return false;
    };
    let mut seen = 1;
    while next[cur] != usize::MAX {
        cur = next[cur];
        seen += 1;
    }
    seen == k
}

/// Pattern match of a 4-subset against the directed 4-path using the six pair states.
#[inline]
pub fn is_p4_quad(g: &OrientedGraph, q: [usize; 4]) -> bool {
    let mut indeg = [0u8; 4];
    let mut outdeg = [0u8; 4];
    let mut arcs = 0;
    for a in 0..4 {
        for b in a + 1..4 {
            if g.has_arc(q[a], q[b]) {
                outdeg[a] += 1;
                indeg[b] += 1;
                arcs += 1;
            } else if g.has_arc(q[b], q[a]) {
                outdeg[b] += 1;
                indeg[a] += 1;
                arcs += 1;
            }
        }
    }
    arcs == 3
        && indeg.iter().all(|&d| d <= 1)
        && outdeg.iter().all(|&d| d <= 1)
        && (0..4).any(|v| indeg[v] == 0 && outdeg[v] == 1)
}

/// Induced 4-paths via the middle-arc kernel.
pub fn count_p4(g: &OrientedGraph) -> u64 {
    let w = g.words();
    let adj = |v: usize, i: usize| g.out_row(v)[i] | g.in_row(v)[i];
    (0..g.n())
        .into_par_iter()
        .map(|b| {
            let mut total = 0u64;
            let mut first = vec![0u64; w];
            let mut last = vec![0u64; w];
            for c in g.out_neighbors(b) {
                let mut any_last = false;
                for i in 0..w {
                    first[i] = g.in_row(b)[i] & !adj(c, i);
                    last[i] = g.out_row(c)[i] & !adj(b, i);
                    any_last |= last[i] != 0;
                }
                if !any_last {
                    continue;
                }
                for a in iter_bits(&first) {
                    for i in 0..w {
                        total += (last[i] & !adj(a, i)).count_ones() as u64;
                    }
                }
            }
            total
        })
        .sum()
}

/// Calls `f` on every induced 4-path `a -> b -> c -> d`, once each.
pub fn for_each_p4(g: &OrientedGraph, mut f: impl FnMut([usize; 4])) {
    let w = g.words();
    let adj = |v: usize, i: usize| g.out_row(v)[i] | g.in_row(v)[i];
    let mut first = vec![0u64; w];
    let mut last = vec![0u64; w];
    let mut ends = vec![0u64; w];
    for b in 0..g.n() {
        for c in g.out_neighbors(b) {
            for i in 0..w {
                first[i] = g.in_row(b)[i] & !adj(c, i);
                last[i] = g.out_row(c)[i] & !adj(b, i);
            }
            for a in iter_bits(&first) {
                for i in 0..w {
                    ends[i] = last[i] & !adj(a, i);
                }
                for d in iter_bits(&ends) {
                    f([a, b, c, d]);
                }
            }
        }
    }
}

/// Induced 4-paths whose vertex set contains every vertex of `a`.
pub fn count_p4_through(g: &OrientedGraph, a: &VertexSet) -> Result<u64> {
    if a.universe() != g.n() {
        return Err(Error::OutOfRange(format!(
            "vertex set over {} vertices used on a graph with {}",
            a.universe(),
            g.n()
        )));
    }
    if a.len() > 4 {
        return Err(Error::SizeMismatch(format!(
            "{} required vertices for a 4-vertex pattern",
            a.len()
        )));
    }
    if a.is_empty() {
        return Ok(count_p4(g));
    }
    let fixed = a.members();
    let rest: Vec<usize> = (0..g.n()).filter(|v| !a.contains(*v)).collect();
    let need = 4 - fixed.len();
    let mut count = 0u64;
    let mut quad = [0usize; 4];
    quad[..fixed.len()].copy_from_slice(fixed);
    for_each_combination(rest.len(), need, |idx| {
        for (slot, &i) in idx.iter().enumerate() {
            quad[fixed.len() + slot] = rest[i];
        }
        if is_p4_quad(g, quad) {
            count += 1;
        }
    });
    Ok(count)
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Counts `k`-subsets accepted by `pred`, split by smallest element across workers.
fn count_subsets<F>(g: &OrientedGraph, k: usize, pred: F) -> u64
where
    F: Fn(&[usize]) -> bool + Sync,
{
    let n = g.n();
    if k == 0 {
        return 1;
    }
    if k > n {
        return 0;
    }
    (0..=n - k)
        .into_par_iter()
        .map(|first| {
            let mut verts = vec![first; k];
            let mut count = 0u64;
            for_each_combination(n - first - 1, k - 1, |idx| {
                for (slot, &i) in idx.iter().enumerate() {
                    verts[slot + 1] = first + 1 + i;
                }
                if pred(&verts) {
                    count += 1;
                }
            });
            count
        })
        .sum()
}

/// Number of `k`-subsets of `g` in each isomorphism class (sparse histogram, sorted by form).
pub fn subgraph_profile(g: &OrientedGraph, k: usize) -> Result<Vec<(CanonicalForm, u64)>> {
    if k > MAX_CANON_VERTICES {
        return Err(Error::Unsupported(format!("profile of {k}-vertex subgraphs")));
    }
    if k > g.n() {
        return Err(Error::SizeMismatch(format!("{k}-subsets of {} vertices", g.n())));
    }
    let mut forms = Vec::new();
    for_each_combination(g.n(), k, |idx| {
        forms.push(canonical_small(&SmallGraph::induced_from(g, idx)));
    });
    forms.sort_unstable();
    let mut out: Vec<(CanonicalForm, u64)> = Vec::new();
    for f in forms {
        match out.last_mut() {
            Some((last, c)) if *last == f => *c += 1,
            _ => out.push((f, 1)),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::are_isomorphic;

    fn c5() -> OrientedGraph {
        OrientedGraph::directed_cycle(5).unwrap()
    }

    fn p4() -> OrientedGraph {
        OrientedGraph::directed_path(4).unwrap()
    }

    /// C5 blown up with every class of size `l`, vertex `5 * i + w` in class `w`.
    fn c5_blowup(l: usize) -> OrientedGraph {
        let n = 5 * l;
        let mut g = OrientedGraph::empty(n);
        for u in 0..n {
            for v in 0..n {
                if (u % 5 + 1) % 5 == v % 5 {
                    g.add_arc(u, v).unwrap();
                }
            }
        }
        g
    }

    /// Independent oracle: canonical comparison over every subset.
    fn brute_count(g: &OrientedGraph, h: &OrientedGraph) -> u64 {
        let mut count = 0;
        for_each_combination(g.n(), h.n(), |idx| {
            if are_isomorphic(&g.induced_on(idx), h).unwrap() {
                count += 1;
            }
        });
        count
    }

    #[test]
    fn c5_counts() {
        assert_eq!(count_induced(&c5(), &p4()).unwrap(), 5);
        assert_eq!(density(&c5(), &p4()).unwrap(), Rational::from_integer(1.into()));
    }

    #[test]
    fn deleting_a_cycle_vertex_leaves_a_path() {
        for v in 0..5 {
            let sub = c5().delete_vertex(v).unwrap();
            assert!(are_isomorphic(&sub, &p4()).unwrap());
        }
    }

    #[test]
    fn tournament_has_no_p4() {
        assert_eq!(
            count_induced(&OrientedGraph::transitive_tournament(4), &p4()).unwrap(),
            0
        );
    }

    #[test]
    fn blowup_of_c5_on_ten_vertices() {
        let g = c5_blowup(2);
        assert_eq!(count_induced(&g, &p4()).unwrap(), 80);
        assert_eq!(brute_count(&g, &p4()), 80);
        assert_eq!(density(&g, &p4()).unwrap(), Rational::new(8.into(), 21.into()));
    }

    #[test]
    fn self_density_is_one() {
        let g = OrientedGraph::from_arcs(4, &[(0, 1), (2, 1), (3, 2)]).unwrap();
        assert_eq!(density(&g, &g).unwrap(), Rational::from_integer(1.into()));
    }

    #[test]
    fn size_mismatch() {
        assert!(matches!(
            count_induced(&p4(), &c5()),
            Err(Error::SizeMismatch(_))
        ));
        let a = VertexSet::new(5, [0, 1, 2, 3, 4]).unwrap();
        assert!(matches!(
            count_p4_through(&c5(), &a),
            Err(Error::SizeMismatch(_))
        ));
    }

    #[test]
    fn p4_through_vertices() {
        for v in 0..5 {
            let a = VertexSet::new(5, [v]).unwrap();
            assert_eq!(count_p4_through(&c5(), &a).unwrap(), 4);
        }
        let empty = VertexSet::new(5, []).unwrap();
        assert_eq!(count_p4_through(&c5(), &empty).unwrap(), 5);
    }

    #[test]
    fn p4_through_adjacent_parts_of_blowup() {
        // x in class 0, y in class 1
        let g = c5_blowup(2);
        let a = VertexSet::new(10, [0, 1]).unwrap();
        let mut oracle = 0;
        for_each_combination(10, 4, |idx| {
            if idx.contains(&0) && idx.contains(&1) && brute_count(&g.induced_on(idx), &p4()) == 1
            {
                oracle += 1;
            }
        });
        assert_eq!(count_p4_through(&g, &a).unwrap(), oracle);
        assert_eq!(oracle, 12);
    }

    #[test]
    fn general_patterns_use_canonical_path() {
        let c3 = OrientedGraph::directed_cycle(3).unwrap();
        let g = c5_blowup(2);
        assert_eq!(count_induced(&g, &c3).unwrap(), 0);
        let e2 = OrientedGraph::empty(2);
        // non-adjacent pairs: same class (5) + classes two apart (5 * 4)
        assert_eq!(count_induced(&g, &e2).unwrap(), 25);
        assert_eq!(brute_count(&g, &e2), 25);
    }

    #[test]
    fn path_kernels_agree_with_brute_force() {
        let g = c5_blowup(2).reverse();
        for k in 1..=6 {
            let pk = OrientedGraph::directed_path(k).unwrap();
            assert_eq!(count_induced(&g, &pk).unwrap(), brute_count(&g, &pk), "k={k}");
        }
    }

    #[test]
    fn listed_paths_are_distinct_induced_copies() {
        let g = c5_blowup(2);
        let mut quads = Vec::new();
        for_each_p4(&g, |q| {
            assert!(is_p4_quad(&g, q));
            let mut s = q;
            s.sort_unstable();
            quads.push(s);
        });
        quads.sort_unstable();
        quads.dedup();
        assert_eq!(quads.len() as u64, count_p4(&g));
    }

    #[test]
    fn combinations_enumerate_all() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |c| seen.push(c.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut count = 0;
        for_each_combination(3, 0, |_| count += 1);
        assert_eq!(count, 1);
        for_each_combination(2, 3, |_| panic!("k > n"));
    }
}
