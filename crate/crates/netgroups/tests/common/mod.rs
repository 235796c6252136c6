//! Shared helpers for integration and acceptance tests: an exhaustive
//! criterion oracle independent of the search implementation, benchmark
//! graph generators, and filesystem snapshots for determinism checks.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::path::Path;

use rand::Rng;

use netgroups::graph::Label;
use netgroups::seed::rng_at;
use netgroups::Graph;

/// Exhaustive maximum of the group criterion over all nonempty (S, T)
/// pairs, computed straight from the printed formula on raw adjacency
/// bitmasks. Deliberately independent of the crate's criterion/search path.
pub fn oracle_best_w(g: &Graph) -> f64 {
    let n = g.node_count();
    assert!(n <= 16, "exhaustive oracle is exponential in n");
    let adj: Vec<u32> = (0..n)
        .map(|u| g.neighbors(u).iter().fold(0u32, |m, &v| m | (1 << v)))
        .collect();
    let full: u32 = (1 << n) - 1;

    let mut best = f64::NEG_INFINITY;
    for s_mask in 1u32..=full {
        let s = s_mask.count_ones() as usize;
        for t_mask in 1u32..=full {
            let t = t_mask.count_ones() as usize;
            let mut l_st = 0u32;
            let mut l_stc = 0u32;
            let mut rest = s_mask;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                l_st += (adj[u] & t_mask).count_ones();
                l_stc += (adj[u] & !t_mask & full).count_ones();
            }
            let mu = 2.0 * (s * t) as f64 / (s + t) as f64;
            let outside = if t == n {
                0.0
            } else {
                f64::from(l_stc) / (s * (n - t)) as f64
            };
            let w = mu * (n as f64 - mu) * (f64::from(l_st) / (s * t) as f64 - outside);
            if w > best {
                best = w;
            }
        }
    }
    best
}

/// Planted-partition benchmark: `blocks` groups of `block_size` nodes, link
/// probability `p_in` within a block and `p_out` across blocks. Node labels
/// are `0..blocks*block_size` with block `b` holding the contiguous range
/// starting at `b * block_size`.
pub fn planted_partition(
    blocks: usize,
    block_size: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> Graph {
    let n = blocks * block_size;
    let mut rng = rng_at(seed, &[0xb10c]);
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let p = if u / block_size == v / block_size {
                p_in
            } else {
                p_out
            };
            if rng.gen_bool(p) {
                pairs.push((u, v));
            }
        }
    }
    Graph::from_pairs(n, &pairs)
}

/// Label set of one planted block.
pub fn block_labels(block: usize, block_size: usize) -> BTreeSet<Label> {
    ((block * block_size) as Label..((block + 1) * block_size) as Label).collect()
}

pub fn jaccard(a: &BTreeSet<Label>, b: &BTreeSet<Label>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.union(b).count();
    inter as f64 / union as f64
}

/// ER G(n, m) retried until it is a single connected component.
pub fn er_connected(n: usize, m: usize, seed: u64) -> Graph {
    for attempt in 0u64..1000 {
        let mut rng = rng_at(seed, &[attempt]);
        let g = netgroups::gen_er_gnm(n, m, &mut rng);
        if netgroups::graph::connected_components(&g).len() == 1 {
            return g;
        }
    }
    panic!("no connected G({n}, {m}) found in 1000 attempts");
}

/// Recursive snapshot of a directory: relative path -> file bytes.
pub fn dir_snapshot(root: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).expect("readable dir") {
            let entry = entry.expect("dir entry");
            let path = entry.path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                let rel = path
                    .strip_prefix(root)
                    .expect("under root")
                    .to_string_lossy()
                    .into_owned();
                out.insert(rel, std::fs::read(&path).expect("readable file"));
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}
