//! Network sampling: degree-weighted random node selection (RD) and
//! breadth-first sampling (BF).
//!
//! Both methods select exactly `⌈fraction·n⌉` nodes and return the induced
//! subgraph on them. RD draws nodes sequentially without replacement, each
//! draw proportional to original degree among the not-yet-chosen nodes, so
//! the sample may be disconnected. BF accepts nodes in dequeue order from a
//! breadth-first traversal of a uniformly random start node, restarting on a
//! fresh unvisited node if a component is exhausted; the sample is connected
//! whenever the start component is large enough.

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, Graph, NodeId, NodeSet};
use crate::seed::rng_at;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleMethod {
    /// Random node selection weighted by degree.
    Rd,
    /// Breadth-first neighborhood of a random start node.
    Bf,
}

impl SampleMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SampleMethod::Rd => "rd",
            SampleMethod::Bf => "bf",
        }
    }

    /// Stable tag for seed derivation.
    pub fn tag(self) -> u64 {
        match self {
            SampleMethod::Rd => 1,
            SampleMethod::Bf => 2,
        }
    }
}

impl std::str::FromStr for SampleMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rd" => Ok(SampleMethod::Rd),
            "bf" => Ok(SampleMethod::Bf),
            other => Err(Error::InvalidConfig(format!(
                "unknown sampling method {other:?} (expected rd or bf)"
            ))),
        }
    }
}

impl std::fmt::Display for SampleMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub method: SampleMethod,
    /// Target fraction of the original nodes, in (0, 1].
    pub fraction: f64,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn new(method: SampleMethod, fraction: f64, seed: u64) -> Self {
        Self {
            method,
            fraction,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fraction > 0.0 && self.fraction <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "fraction must lie in (0, 1], got {}",
                self.fraction
            )));
        }
        Ok(())
    }
}

/// Target sample size `⌈fraction·n⌉`, computed with a small relative guard
/// so that fractions that are exact in decimal (0.15 of 20 nodes is 3) do
/// not round up through float error.
pub fn target_size(fraction: f64, n: usize) -> usize {
    let product = fraction * n as f64;
    let guard = product.max(1.0) * 1e-9;
    ((product - guard).ceil() as usize).clamp(1, n)
}

/// Prefix-sum tree over node weights for O(log n) weighted draws without
/// replacement.
struct Fenwick {
    tree: Vec<u64>,
}

impl Fenwick {
    fn new(weights: &[u64]) -> Self {
        let mut tree = vec![0u64; weights.len() + 1];
        for (i, &w) in weights.iter().enumerate() {
            let mut idx = i + 1;
            while idx < tree.len() {
                tree[idx] += w;
                idx += idx & idx.wrapping_neg();
            }
        }
        Self { tree }
    }

    fn decrease(&mut self, i: usize, by: u64) {
        let mut idx = i + 1;
        while idx < self.tree.len() {
            self.tree[idx] -= by;
            idx += idx & idx.wrapping_neg();
        }
    }

    /// Smallest index whose prefix sum exceeds `target`.
    fn find(&self, mut target: u64) -> usize {
        let mut pos = 0usize;
        let mut step = self.tree.len().next_power_of_two() / 2;
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= target {
                target -= self.tree[next];
                pos = next;
            }
            step /= 2;
        }
        pos // tree index is pos + 1, so the item index is pos
    }
}

/// Degree-weighted node selection. Errors if the remaining total degree hits
/// zero before the target size is reached (only possible when the graph has
/// isolated nodes).
pub fn sample_rd(g: &Graph, cfg: &SamplerConfig) -> Result<Graph> {
    cfg.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph("cannot sample an empty graph".into()));
    }
    let k = target_size(cfg.fraction, n);
    let weights: Vec<u64> = (0..n).map(|v| g.degree(v) as u64).collect();
    let mut total: u64 = weights.iter().sum();
    if total == 0 {
        return Err(Error::ZeroDegree("graph has no links".into()));
    }

    let mut rng = rng_at(cfg.seed, &[cfg.method.tag()]);
    let mut fenwick = Fenwick::new(&weights);
    let mut chosen = NodeSet::new();
    for _ in 0..k {
        if total == 0 {
            return Err(Error::ZeroDegree(format!(
                "only {} nodes carry degree, target is {k}",
                chosen.len()
            )));
        }
        let target = rng.gen_range(0..total);
        let v = fenwick.find(target);
        fenwick.decrease(v, weights[v]);
        total -= weights[v];
        chosen.insert(v);
    }
    Ok(induced_subgraph(g, &chosen))
}

/// Breadth-first sampling. Neighbors are enqueued in ascending internal id,
/// so all randomness comes from the start-node draws.
pub fn sample_bf(g: &Graph, cfg: &SamplerConfig) -> Result<Graph> {
    cfg.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph("cannot sample an empty graph".into()));
    }
    let k = target_size(cfg.fraction, n);
    let mut rng = rng_at(cfg.seed, &[cfg.method.tag()]);

    let mut visited = vec![false; n];
    let mut queue: VecDeque<NodeId> = VecDeque::new();
    let mut accepted = NodeSet::new();

    while accepted.len() < k {
        if queue.is_empty() {
            // start (or restart after exhausting a component) on a uniform
            // unvisited node
            let unvisited: Vec<NodeId> = (0..n).filter(|&v| !visited[v]).collect();
            let start = unvisited[rng.gen_range(0..unvisited.len())];
            visited[start] = true;
            queue.push_back(start);
        }
        let u = queue.pop_front().expect("queue refilled above");
        accepted.insert(u);
        for &v in g.neighbors(u) {
            if !visited[v] {
                visited[v] = true;
                queue.push_back(v);
            }
        }
    }
    Ok(induced_subgraph(g, &accepted))
}

/// Dispatch on `cfg.method`.
pub fn sample(g: &Graph, cfg: &SamplerConfig) -> Result<Graph> {
    match cfg.method {
        SampleMethod::Rd => sample_rd(g, cfg),
        SampleMethod::Bf => sample_bf(g, cfg),
    }
}
