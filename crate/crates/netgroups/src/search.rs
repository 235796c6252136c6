//! Random-restart hill climbing over `(S, T)` pairs.
//!
//! Each climb is steepest-ascent: every step evaluates all single-node
//! changes (add a node to S or T, remove one while keeping the set nonempty),
//! applies the best strictly improving move, and stops at a local maximum.
//! The per-move criterion is computed from incrementally maintained integer
//! link counts, so it is bit-identical to a from-scratch evaluation.
//!
//! Restarts alternate between a community-like initialization (`S = T` =
//! closed neighborhood of a random node) and a module-like one (`S = {v}`,
//! `T` = open neighborhood), and the best pair over all restarts wins; ties
//! keep the earliest restart. Each restart derives its own generator from a
//! seed and restart index, so searches are reproducible regardless of how
//! the restarts are scheduled across threads.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criterion::w_from_counts;
use crate::error::{Error, Result};
use crate::extract::ExtractionConfig;
use crate::graph::{Graph, NodeId, NodeSet};
use crate::scalar::Real;
use crate::seed::rng_at;
use crate::Score;

/// A candidate group `S` with its linking pattern `T` and cached statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupPair<R = Score> {
    pub s_nodes: NodeSetVec,
    pub t_nodes: NodeSetVec,
    /// Ordered-pair link count from `S` into `T`.
    pub links_st: usize,
    /// Ordered-pair link count from `S` into the complement of `T`.
    pub links_stc: usize,
    pub w: R,
    pub tau: R,
}

/// Sorted node-id list used inside [`GroupPair`] so the pair serializes
/// cleanly; convertible from/to [`NodeSet`].
pub type NodeSetVec = Vec<NodeId>;

impl<R: Real> GroupPair<R> {
    pub fn s_set(&self) -> NodeSet {
        self.s_nodes.iter().copied().collect()
    }

    pub fn t_set(&self) -> NodeSet {
        self.t_nodes.iter().copied().collect()
    }

    pub fn s_size(&self) -> usize {
        self.s_nodes.len()
    }

    pub fn t_size(&self) -> usize {
        self.t_nodes.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Move {
    ToggleS(NodeId),
    ToggleT(NodeId),
}

/// Incremental state of one climb.
///
/// `deg_s[v]` / `deg_t[v]` hold `|N(v) ∩ S|` / `|N(v) ∩ T|`, from which the
/// effect of any single-node change on the ordered-pair counts follows in
/// O(1); applying a move costs O(deg).
struct ClimbState<'g> {
    g: &'g Graph,
    in_s: Vec<bool>,
    in_t: Vec<bool>,
    s_size: usize,
    t_size: usize,
    deg_s: Vec<usize>,
    deg_t: Vec<usize>,
    l_st: usize,
    l_stc: usize,
}

impl<'g> ClimbState<'g> {
    fn new(g: &'g Graph, init_s: &NodeSet, init_t: &NodeSet) -> Self {
        assert!(
            !init_s.is_empty() && !init_t.is_empty(),
            "initial S and T must be nonempty"
        );
        let n = g.node_count();
        let in_s = init_s.mask(n);
        let in_t = init_t.mask(n);
        let mut deg_s = vec![0usize; n];
        let mut deg_t = vec![0usize; n];
        for u in init_s.iter() {
            for &v in g.neighbors(u) {
                deg_s[v] += 1;
            }
        }
        for u in init_t.iter() {
            for &v in g.neighbors(u) {
                deg_t[v] += 1;
            }
        }
        let mut l_st = 0;
        let mut l_stc = 0;
        for u in init_s.iter() {
            l_st += deg_t[u];
            l_stc += g.degree(u) - deg_t[u];
        }
        Self {
            g,
            in_s,
            in_t,
            s_size: init_s.len(),
            t_size: init_t.len(),
            deg_s,
            deg_t,
            l_st,
            l_stc,
        }
    }

    fn n(&self) -> usize {
        self.g.node_count()
    }

    fn current_w<R: Real>(&self) -> R {
        w_from_counts(self.s_size, self.t_size, self.l_st, self.l_stc, self.n())
    }

    /// Counts after `mv`, or None if the move would empty a set.
    fn predict(&self, mv: Move) -> Option<(usize, usize, usize, usize)> {
        match mv {
            Move::ToggleS(v) => {
                let gain_st = self.deg_t[v];
                let gain_stc = self.g.degree(v) - self.deg_t[v];
                if self.in_s[v] {
                    if self.s_size == 1 {
                        return None;
                    }
                    Some((
                        self.s_size - 1,
                        self.t_size,
                        self.l_st - gain_st,
                        self.l_stc - gain_stc,
                    ))
                } else {
                    Some((
                        self.s_size + 1,
                        self.t_size,
                        self.l_st + gain_st,
                        self.l_stc + gain_stc,
                    ))
                }
            }
            Move::ToggleT(v) => {
                let shift = self.deg_s[v];
                if self.in_t[v] {
                    if self.t_size == 1 {
                        return None;
                    }
                    Some((
                        self.s_size,
                        self.t_size - 1,
                        self.l_st - shift,
                        self.l_stc + shift,
                    ))
                } else {
                    Some((
                        self.s_size,
                        self.t_size + 1,
                        self.l_st + shift,
                        self.l_stc - shift,
                    ))
                }
            }
        }
    }

    fn apply(&mut self, mv: Move) {
        let (s, t, l_st, l_stc) = self.predict(mv).expect("applied move must be legal");
        match mv {
            Move::ToggleS(v) => {
                let delta: isize = if self.in_s[v] { -1 } else { 1 };
                self.in_s[v] = !self.in_s[v];
                for &w in self.g.neighbors(v) {
                    self.deg_s[w] = (self.deg_s[w] as isize + delta) as usize;
                }
            }
            Move::ToggleT(v) => {
                let delta: isize = if self.in_t[v] { -1 } else { 1 };
                self.in_t[v] = !self.in_t[v];
                for &w in self.g.neighbors(v) {
                    self.deg_t[w] = (self.deg_t[w] as isize + delta) as usize;
                }
            }
        }
        self.s_size = s;
        self.t_size = t;
        self.l_st = l_st;
        self.l_stc = l_stc;
    }

    /// One steepest-ascent step. Returns false at a local maximum.
    fn step<R: Real, G: Rng>(&mut self, rng: &mut G) -> bool {
        let current: R = self.current_w();
        let mut best: R = current;
        let mut chosen: Option<Move> = None;
        let mut ties = 0usize;
        for v in 0..self.n() {
            for mv in [Move::ToggleS(v), Move::ToggleT(v)] {
                let Some((s, t, l_st, l_stc)) = self.predict(mv) else {
                    continue;
                };
                let w: R = w_from_counts(s, t, l_st, l_stc, self.n());
                if w <= current {
                    continue;
                }
                if w > best {
                    best = w;
                    chosen = Some(mv);
                    ties = 1;
                } else if w == best {
                    // reservoir-sample uniformly among equally best moves
                    ties += 1;
                    if rng.gen_range(0..ties) == 0 {
                        chosen = Some(mv);
                    }
                }
            }
        }
        match chosen {
            Some(mv) => {
                self.apply(mv);
                true
            }
            None => false,
        }
    }

    fn into_pair<R: Real>(self) -> GroupPair<R> {
        let s_nodes: Vec<NodeId> = (0..self.n()).filter(|&v| self.in_s[v]).collect();
        let t_nodes: Vec<NodeId> = (0..self.n()).filter(|&v| self.in_t[v]).collect();
        let s_set: NodeSet = s_nodes.iter().copied().collect();
        let t_set: NodeSet = t_nodes.iter().copied().collect();
        let w = self.current_w();
        let tau = crate::criterion::tau(&s_set, &t_set);
        debug_assert!({
            let fresh: R = crate::criterion::criterion_w(self.g, &s_set, &t_set);
            fresh == w
        });
        GroupPair {
            s_nodes,
            t_nodes,
            links_st: self.l_st,
            links_stc: self.l_stc,
            w,
            tau,
        }
    }
}

/// Steepest-ascent local search from `(init_s, init_t)` to a local maximum
/// of the criterion. Ties between equally improving moves are broken
/// uniformly at random via `rng`.
pub fn hill_climb<R: Real, G: Rng>(
    g: &Graph,
    init_s: &NodeSet,
    init_t: &NodeSet,
    rng: &mut G,
) -> GroupPair<R> {
    let mut state = ClimbState::new(g, init_s, init_t);
    while state.step::<R, G>(rng) {}
    state.into_pair()
}

/// Best pair over `cfg.restarts` independent climbs.
///
/// Restart `i` seeds its generator from `(seed, i)`; even restarts start
/// community-like (`S = T = N[v]`), odd restarts module-like (`S = {v}`,
/// `T = N(v)`), with `v` drawn uniformly among nodes of positive degree.
/// Returns the maximal-W pair, keeping the earliest restart on ties.
pub fn search_best_group<R: Real>(
    g: &Graph,
    cfg: &ExtractionConfig,
    seed: u64,
) -> Result<GroupPair<R>> {
    if g.link_count() == 0 {
        return Err(Error::NoLinks);
    }
    let eligible: Vec<NodeId> = (0..g.node_count()).filter(|&v| g.degree(v) > 0).collect();

    let climbs: Vec<GroupPair<R>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_at(seed, &[i as u64]);
            let v = eligible[rng.gen_range(0..eligible.len())];
            let (init_s, init_t) = if i % 2 == 0 {
                let closed: NodeSet = g.neighbors(v).iter().copied().chain([v]).collect();
                (closed.clone(), closed)
            } else {
                let open: NodeSet = g.neighbors(v).iter().copied().collect();
                ([v].into_iter().collect(), open)
            };
            hill_climb(g, &init_s, &init_t, &mut rng)
        })
        .collect();

    Ok(climbs
        .into_iter()
        .reduce(|best, cand| if cand.w > best.w { cand } else { best })
        .expect("restarts >= 1"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{load_edge_list, LoadOptions};
    use std::io::Cursor;

    const TOL: f64 = 1e-9;

    fn load(text: &str) -> Graph {
        load_edge_list(Cursor::new(text), LoadOptions::default())
            .unwrap()
            .0
    }

    fn set(ids: &[usize]) -> NodeSet {
        ids.iter().copied().collect()
    }

    fn cfg(restarts: usize, seed: u64) -> ExtractionConfig {
        ExtractionConfig {
            restarts,
            seed,
            ..ExtractionConfig::default()
        }
    }

    /// Exhaustive maximum of the criterion over all nonempty (S, T) pairs,
    /// evaluated straight from the printed formula and raw adjacency,
    /// independent of the incremental search path. Only for n <= 12.
    fn brute_force_best_w(g: &Graph) -> f64 {
        let n = g.node_count();
        assert!(n <= 12, "exhaustive oracle is exponential in n");
        let mut best = f64::NEG_INFINITY;
        for s_mask in 1u32..(1 << n) {
            for t_mask in 1u32..(1 << n) {
                let s = s_mask.count_ones() as usize;
                let t = t_mask.count_ones() as usize;
                let mut l_st = 0usize;
                let mut l_stc = 0usize;
                for u in 0..n {
                    if s_mask & (1 << u) == 0 {
                        continue;
                    }
                    for &v in g.neighbors(u) {
                        if t_mask & (1 << v) != 0 {
                            l_st += 1;
                        } else {
                            l_stc += 1;
                        }
                    }
                }
                let mu = 2.0 * (s * t) as f64 / (s + t) as f64;
                let outside = if t == n {
                    0.0
                } else {
                    l_stc as f64 / (s * (n - t)) as f64
                };
                let w = mu * (n as f64 - mu) * (l_st as f64 / (s * t) as f64 - outside);
                if w > best {
                    best = w;
                }
            }
        }
        best
    }

    #[test]
    fn climb_escapes_negative_singleton_init() {
        // S = T = {node 0} starts at W = 1·3·(0 - 2/3) = -2; the climb must
        // strictly improve from there and stop at a positive local maximum
        let g = load("1 2\n1 3\n2 3\n3 4\n");
        let init = set(&[0]);
        let w0: f64 = crate::criterion::criterion_w(&g, &init, &init);
        assert!((w0 + 2.0).abs() < TOL);
        let mut rng = rng_at(1, &[]);
        let pair: GroupPair = hill_climb(&g, &init, &init, &mut rng);
        assert!(pair.w > 0.0);
        // this seed walks to the one-node module S={1}, T=N(1), a local
        // maximum at W = mu(1,2)(4 - mu) = 32/9
        assert_eq!(pair.s_nodes, vec![1]);
        assert_eq!(pair.t_nodes, vec![0, 2]);
        assert!((pair.w - 32.0 / 9.0).abs() < TOL);
        assert!(pair.tau.abs() < TOL);
    }

    #[test]
    fn climb_from_hub_module_init_holds_the_global_optimum() {
        // S = {hub}, T = N(hub) scores mu(1,3)(n - mu) = 1.5 * 2.5 = 3.75,
        // the global maximum on this graph per the exhaustive oracle
        let g = load("1 2\n1 3\n2 3\n3 4\n");
        let mut rng = rng_at(1, &[]);
        let hub = 2; // label 3, degree 3
        let pair: GroupPair = hill_climb(&g, &set(&[hub]), &set(&[0, 1, 3]), &mut rng);
        assert_eq!(pair.s_nodes, vec![hub]);
        assert_eq!(pair.t_nodes, vec![0, 1, 3]);
        assert!((pair.w - 3.75).abs() < TOL);
        assert!((pair.w - brute_force_best_w(&g)).abs() < TOL);
    }

    #[test]
    fn climb_grows_star_module() {
        let star = load("0 1\n0 2\n0 3\n");
        let mut rng = rng_at(2, &[]);
        let pair: GroupPair = hill_climb(&star, &set(&[1]), &set(&[0]), &mut rng);
        assert!((pair.w - 3.75).abs() < TOL);
        assert_eq!(pair.s_nodes, vec![1, 2, 3]);
        assert_eq!(pair.t_nodes, vec![0]);
        assert!(pair.tau.abs() < TOL);
    }

    #[test]
    fn climb_single_link_is_fixed_point() {
        let g = load("1 2\n");
        let mut rng = rng_at(3, &[]);
        let pair: GroupPair = hill_climb(&g, &set(&[0]), &set(&[1]), &mut rng);
        assert_eq!(pair.s_nodes, vec![0]);
        assert_eq!(pair.t_nodes, vec![1]);
        assert!((pair.w - 1.0).abs() < TOL);
    }

    #[test]
    fn climb_never_decreases_initial_w() {
        let g = load("1 2\n1 3\n2 3\n3 4\n4 5\n4 6\n5 6\n");
        for seed in 0..20 {
            let mut rng = rng_at(seed, &[]);
            let v = rng.gen_range(0..g.node_count());
            let init_s = set(&[v]);
            let init_t: NodeSet = g.neighbors(v).iter().copied().chain([v]).collect();
            let w0: f64 = crate::criterion::criterion_w(&g, &init_s, &init_t);
            let pair: GroupPair = hill_climb(&g, &init_s, &init_t, &mut rng);
            assert!(pair.w >= w0 - TOL);
        }
    }

    #[test]
    fn search_reaches_global_optimum_on_small_graphs() {
        // triangle-plus-pendant: the optimum is the hub module, W = 3.75
        let g = load("1 2\n1 3\n2 3\n3 4\n");
        let oracle = brute_force_best_w(&g);
        assert!((oracle - 3.75).abs() < TOL);
        let best: GroupPair = search_best_group(&g, &cfg(20, 7), 7).unwrap();
        assert!((best.w - oracle).abs() < TOL);

        // two disjoint triangles: the optimum is a one-node module inside a
        // triangle, W = mu(1,2)(6 - mu) = (4/3)(14/3) = 56/9; the triangle
        // community S = T scores only 6
        let two = load("1 2\n1 3\n2 3\n4 5\n4 6\n5 6\n");
        let oracle = brute_force_best_w(&two);
        assert!((oracle - 56.0 / 9.0).abs() < TOL);
        let best: GroupPair = search_best_group(&two, &cfg(20, 7), 7).unwrap();
        assert!((best.w - oracle).abs() < TOL);

        // star: leaves-vs-center module, symmetric optima at W = 3.75
        let star = load("0 1\n0 2\n0 3\n");
        let oracle = brute_force_best_w(&star);
        assert!((oracle - 3.75).abs() < TOL);
        let best: GroupPair = search_best_group(&star, &cfg(20, 7), 7).unwrap();
        assert!((best.w - oracle).abs() < TOL);
    }

    #[test]
    fn incremental_counts_match_scratch_after_every_move() {
        let g = load("1 2\n1 3\n2 3\n3 4\n4 5\n4 6\n5 6\n2 5\n3 6\n");
        for seed in 0..10u64 {
            let mut rng = rng_at(seed, &[]);
            let v = rng.gen_range(0..g.node_count());
            let init_s = set(&[v]);
            let init_t: NodeSet = g.neighbors(v).iter().copied().chain([v]).collect();
            let mut state = ClimbState::new(&g, &init_s, &init_t);
            loop {
                let moved = state.step::<f64, _>(&mut rng);
                let s_set: NodeSet = (0..state.n()).filter(|&u| state.in_s[u]).collect();
                let t_set: NodeSet = (0..state.n()).filter(|&u| state.in_t[u]).collect();
                let scratch: f64 = crate::criterion::criterion_w(&g, &s_set, &t_set);
                let incremental: f64 = state.current_w();
                assert!(
                    (incremental - scratch).abs() < 1e-9,
                    "seed {seed}: incremental {incremental} vs scratch {scratch}"
                );
                if !moved {
                    break;
                }
            }
        }
    }

    #[test]
    fn search_errors_without_links() {
        let g = Graph::from_pairs(4, &[]);
        match search_best_group::<f64>(&g, &cfg(5, 1), 1) {
            Err(Error::NoLinks) => {}
            other => panic!("expected NoLinks, got {other:?}"),
        }
    }

    #[test]
    fn search_is_deterministic() {
        let g = load("1 2\n1 3\n2 3\n3 4\n4 5\n4 6\n5 6\n2 5\n");
        let a: GroupPair = search_best_group(&g, &cfg(9, 11), 11).unwrap();
        let b: GroupPair = search_best_group(&g, &cfg(9, 11), 11).unwrap();
        assert_eq!(a, b);
    }
}
