//! The group criterion `W` and its ingredients.
//!
//! A candidate group is a pair of node sets `(S, T)`: `S` is the group and
//! `T` its linking pattern. `W` rewards link density from `S` into `T` and
//! penalizes links from `S` into the rest of the graph, with a size-balance
//! factor that suppresses degenerate very small or very large pairs. Link
//! counts are over ordered pairs `(u, v)` with `u ∈ S`, so the same
//! definition covers `S = T`, overlapping and disjoint pairs uniformly;
//! links with both endpoints outside `S` never contribute.

use crate::graph::{Graph, NodeSet};
use crate::scalar::Real;

/// Size-balance factor `2st / (s + t)`.
///
/// Panics if either size is zero.
pub fn mu<R: Real>(s: usize, t: usize) -> R {
    assert!(s >= 1 && t >= 1, "group sizes must be positive");
    R::ratio(2 * s * t, s + t)
}

/// Group type parameter: Jaccard similarity `|S ∩ T| / |S ∪ T|`.
///
/// Equals 1 iff `S = T` and 0 iff the sets are disjoint. Panics on empty
/// sets.
pub fn tau<R: Real>(s: &NodeSet, t: &NodeSet) -> R {
    assert!(!s.is_empty() && !t.is_empty(), "S and T must be nonempty");
    R::ratio(s.intersection_size(t), s.union_size(t))
}

/// Ordered-pair link counts `(L(S, T), L(S, T^C))`.
///
/// `L(S, T)` counts pairs `(u, v)` with `u ∈ S`, `v ∈ T` and `{u, v}` a
/// link; `L(S, T^C)` counts the pairs whose second endpoint falls outside
/// `T`. A link inside `S ∩ T` is counted once per orientation.
pub fn link_count(g: &Graph, s: &NodeSet, t: &NodeSet) -> (usize, usize) {
    let in_t = t.mask(g.node_count());
    let mut l_st = 0;
    let mut l_stc = 0;
    for u in s.iter() {
        for &v in g.neighbors(u) {
            if in_t[v] {
                l_st += 1;
            } else {
                l_stc += 1;
            }
        }
    }
    (l_st, l_stc)
}

/// Criterion value from the raw counts, with `n` the node count of the
/// current working graph. When `t = n` the complement term is defined as 0.
pub fn w_from_counts<R: Real>(s: usize, t: usize, l_st: usize, l_stc: usize, n: usize) -> R {
    let mu = mu::<R>(s, t);
    let inside = R::ratio(l_st, s * t);
    let outside = if t == n {
        R::zero()
    } else {
        R::ratio(l_stc, s * (n - t))
    };
    mu * (R::from_count(n) - mu) * (inside - outside)
}

/// Criterion `W(S, T)` computed from scratch on `g`.
pub fn criterion_w<R: Real>(g: &Graph, s: &NodeSet, t: &NodeSet) -> R {
    assert!(!s.is_empty() && !t.is_empty(), "S and T must be nonempty");
    let (l_st, l_stc) = link_count(g, s, t);
    w_from_counts(s.len(), t.len(), l_st, l_stc, g.node_count())
}
