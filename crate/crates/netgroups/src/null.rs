//! Erdős–Rényi `G(n, m)` null model for group significance.
//!
//! A candidate group on a working graph is compared against the best
//! criterion value the same search finds on random graphs matched to the
//! working graph's node and link counts. The null distribution is estimated
//! by simulation; p-values use an add-one estimator so they are never zero.

use std::collections::HashSet;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extract::ExtractionConfig;
use crate::graph::{Graph, NodeId};
use crate::scalar::Real;
use crate::search::search_best_group;
use crate::seed::{derive_seed, rng_at};
use crate::Score;

/// Empirical distribution of best-W scores on matched ER graphs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullEstimate<R = Score> {
    /// Best criterion value per replica, in replica order.
    pub samples: Vec<R>,
    pub n: usize,
    pub m: usize,
    /// Restart count the replica searches ran with.
    pub restarts: usize,
}

/// Uniform simple graph with exactly `n` nodes and `m` links.
///
/// Nodes are labelled `0..n`. Panics if `m` exceeds `n(n-1)/2`.
pub fn gen_er_gnm<G: Rng>(n: usize, m: usize, rng: &mut G) -> Graph {
    let max_m = n * n.saturating_sub(1) / 2;
    assert!(m <= max_m, "m={m} exceeds the {max_m} possible links");
    let mut chosen: HashSet<(NodeId, NodeId)> = HashSet::with_capacity(m);
    let mut pairs: Vec<(NodeId, NodeId)> = Vec::with_capacity(m);
    while pairs.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let pair = (u.min(v), u.max(v));
        if chosen.insert(pair) {
            pairs.push(pair);
        }
    }
    Graph::from_pairs(n, &pairs)
}

/// Simulate the null: for each replica generate `G(n, m)` and record the
/// best criterion value `search_best_group` finds with `cfg.restarts`
/// restarts. Replica `j` derives its generators from `(seed, j)`, so the
/// estimate is reproducible and replicas can run in parallel.
pub fn estimate_null<R: Real>(
    n: usize,
    m: usize,
    cfg: &ExtractionConfig,
    seed: u64,
) -> Result<NullEstimate<R>> {
    if m == 0 {
        return Err(Error::NoLinks);
    }
    let samples: Vec<R> = (0..cfg.null_samples)
        .into_par_iter()
        .map(|j| {
            let mut er_rng = rng_at(seed, &[j as u64, 0]);
            let replica = gen_er_gnm(n, m, &mut er_rng);
            search_best_group::<R>(&replica, cfg, derive_seed(seed, &[j as u64, 1]))
                .map(|pair| pair.w)
        })
        .collect::<Result<_>>()?;
    Ok(NullEstimate {
        samples,
        n,
        m,
        restarts: cfg.restarts,
    })
}

/// Add-one empirical p-value: `(1 + #{samples >= observed}) / (K + 1)`.
///
/// Never zero, so significance at level `alpha` is attainable only when the
/// sample count exceeds `1/alpha - 1`. Panics on an empty estimate.
pub fn p_value<R: Real>(observed_w: R, est: &NullEstimate<R>) -> R {
    assert!(!est.samples.is_empty(), "null estimate must be nonempty");
    let ge = est.samples.iter().filter(|&&w| w >= observed_w).count();
    R::ratio(1 + ge, est.samples.len() + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_at;

    #[test]
    fn gnm_counts_are_exact() {
        let mut rng = rng_at(5, &[]);
        for &(n, m) in &[(3, 3), (5, 0), (10, 20), (8, 28)] {
            let g = gen_er_gnm(n, m, &mut rng);
            assert_eq!(g.node_count(), n);
            assert_eq!(g.link_count(), m);
            for v in 0..n {
                assert!(!g.has_link(v, v));
            }
        }
    }

    #[test]
    fn gnm_forced_cases() {
        let mut rng = rng_at(6, &[]);
        let tri = gen_er_gnm(3, 3, &mut rng);
        assert!(tri.has_link(0, 1) && tri.has_link(0, 2) && tri.has_link(1, 2));
        let empty = gen_er_gnm(5, 0, &mut rng);
        assert_eq!(empty.link_count(), 0);
    }

    #[test]
    fn gnm_is_uniform_over_two_link_graphs_on_four_nodes() {
        // 15 equally likely graphs; 1e5 draws keeps 5% relative error at >4 sigma
        let draws = 100_000;
        let mut counts = std::collections::HashMap::new();
        for i in 0..draws {
            let mut rng = rng_at(99, &[i]);
            let g = gen_er_gnm(4, 2, &mut rng);
            let key: Vec<(usize, usize)> = {
                let mut links = g.links();
                links.sort_unstable();
                links
            };
            *counts.entry(key).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 15);
        let expected = draws as f64 / 15.0;
        for (_, c) in counts {
            let rel = (c as f64 - expected).abs() / expected;
            assert!(rel < 0.05, "relative error {rel} exceeds 5%");
        }
    }

    #[test]
    fn null_on_forced_graph_is_constant() {
        // G(3,3) is always the triangle, whose best pair is S={v}, T=N(v):
        // mu(1,2) = 4/3, W = (4/3)(3 - 4/3)(2/2) = 20/9
        let cfg = ExtractionConfig {
            restarts: 6,
            null_samples: 8,
            ..ExtractionConfig::default()
        };
        let est: NullEstimate = estimate_null(3, 3, &cfg, 17).unwrap();
        assert_eq!(est.samples.len(), 8);
        for w in &est.samples {
            assert!((w - 20.0 / 9.0).abs() < 1e-9);
        }
    }

    #[test]
    fn null_single_sample_is_valid() {
        let cfg = ExtractionConfig {
            restarts: 2,
            null_samples: 1,
            ..ExtractionConfig::default()
        };
        let est: NullEstimate = estimate_null(6, 5, &cfg, 3).unwrap();
        assert_eq!(est.samples.len(), 1);
    }

    #[test]
    fn null_rejects_linkless_graph() {
        let cfg = ExtractionConfig::default();
        match estimate_null::<f64>(5, 0, &cfg, 1) {
            Err(Error::NoLinks) => {}
            other => panic!("expected NoLinks, got {other:?}"),
        }
    }

    #[test]
    fn p_value_examples() {
        let est = NullEstimate {
            samples: (1..=99).map(f64::from).collect(),
            n: 10,
            m: 10,
            restarts: 1,
        };
        // below every sample
        assert!((p_value(0.5, &est) - 1.0).abs() < 1e-12);
        // above every sample with K = 99
        assert!((p_value(1000.0, &est) - 0.01).abs() < 1e-12);
        // equal to the median of 99 samples: 50 samples are >= it
        assert!((p_value(50.0, &est) - 51.0 / 100.0).abs() < 1e-12);
    }

    #[test]
    fn p_value_is_monotone() {
        let est = NullEstimate {
            samples: vec![1.0, 2.0, 2.0, 5.0, 9.0],
            n: 4,
            m: 4,
            restarts: 1,
        };
        let mut last = p_value(-1.0, &est);
        for w in [0.0, 1.0, 2.0, 3.0, 5.0, 8.0, 9.0, 10.0] {
            let p = p_value(w, &est);
            assert!(p <= last);
            last = p;
        }
    }

    #[test]
    fn estimate_is_deterministic() {
        let cfg = ExtractionConfig {
            restarts: 4,
            null_samples: 6,
            ..ExtractionConfig::default()
        };
        let a: NullEstimate = estimate_null(12, 20, &cfg, 21).unwrap();
        let b: NullEstimate = estimate_null(12, 20, &cfg, 21).unwrap();
        assert_eq!(a, b);
    }
}
