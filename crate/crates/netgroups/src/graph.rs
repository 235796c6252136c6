//! Compact undirected simple graph with edge-list ingestion.
//!
//! Nodes carry dense internal ids `0..n` used for array-indexed adjacency;
//! the original integer labels of the source edge list are kept for
//! reporting. Graphs are immutable after construction: the mutation
//! primitives the extraction loop needs ([`remove_links_between`],
//! [`remove_isolated_nodes`]) return new graphs, so parallel searches never
//! observe partial mutation.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Dense internal node id, valid in `[0, n)` for the owning graph.
pub type NodeId = usize;

/// External node label as it appears in edge-list files.
pub type Label = i64;

/// A set of internal node ids, ordered for deterministic iteration.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NodeSet {
    members: BTreeSet<NodeId>,
}

impl NodeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, v: NodeId) -> bool {
        self.members.insert(v)
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.members.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.members.iter().copied()
    }

    pub fn intersection_size(&self, other: &NodeSet) -> usize {
        self.members.intersection(&other.members).count()
    }

    pub fn union_size(&self, other: &NodeSet) -> usize {
        self.members.union(&other.members).count()
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.members.is_disjoint(&other.members)
    }

    /// Membership mask over `[0, n)`. Panics if a member is out of range.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for v in self.iter() {
            assert!(v < n, "node id {v} out of range for graph of {n} nodes");
            mask[v] = true;
        }
        mask
    }
}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        Self {
            members: iter.into_iter().collect(),
        }
    }
}

impl From<BTreeSet<NodeId>> for NodeSet {
    fn from(members: BTreeSet<NodeId>) -> Self {
        Self { members }
    }
}

/// Undirected simple graph: no self-loops, no duplicate links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    /// Sorted neighbor lists, indexed by internal id.
    adjacency: Vec<Vec<NodeId>>,
    /// Internal id → external label.
    labels: Vec<Label>,
    link_count: usize,
}

impl Graph {
    /// Build a graph over `n` nodes from internal-id link pairs, labelling
    /// node `i` with `i`. Self-loops and duplicates panic: callers generating
    /// pairs (tests, the ER generator) are expected to produce simple graphs.
    pub fn from_pairs(n: usize, pairs: &[(NodeId, NodeId)]) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = HashSet::with_capacity(pairs.len());
        for &(u, v) in pairs {
            assert!(u < n && v < n, "link ({u}, {v}) out of range for n={n}");
            assert_ne!(u, v, "self-loop ({u}, {v})");
            assert!(
                seen.insert((u.min(v), u.max(v))),
                "duplicate link ({u}, {v})"
            );
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self {
            adjacency,
            labels: (0..n as Label).collect(),
            link_count: pairs.len(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn link_count(&self) -> usize {
        self.link_count
    }

    /// Degree of `v`. Panics if `v` is out of range.
    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    /// Sorted neighbors of `v`. Panics if `v` is out of range.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn has_link(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// External label of `v`. Panics if `v` is out of range.
    pub fn label(&self, v: NodeId) -> Label {
        self.labels[v]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn all_nodes(&self) -> NodeSet {
        (0..self.node_count()).collect()
    }

    /// Links as internal-id pairs with `u < v`, in ascending order.
    pub fn links(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::with_capacity(self.link_count);
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            for &v in nbrs {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Order-insensitive digest of the labelled structure: (n, m, sorted node
    /// labels, sorted label pairs). Serializing to an edge list and reloading
    /// preserves it as long as no node is isolated.
    pub fn fingerprint(&self) -> u64 {
        let mut labels = self.labels.clone();
        labels.sort_unstable();
        let mut pairs: Vec<(Label, Label)> = self
            .links()
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (self.labels[u], self.labels[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        pairs.sort_unstable();

        let mut h = Fnv1a::new();
        h.write_u64(self.node_count() as u64);
        h.write_u64(self.link_count as u64);
        for l in labels {
            h.write_u64(l as u64);
        }
        for (a, b) in pairs {
            h.write_u64(a as u64);
            h.write_u64(b as u64);
        }
        h.finish()
    }

    /// Write the graph as edge-list text: one `# ` comment line per entry of
    /// `comments`, then one `u v` label pair per link. Isolated nodes cannot
    /// be represented in this format and are silently omitted.
    pub fn write_edge_list<W: Write>(&self, mut w: W, comments: &[String]) -> std::io::Result<()> {
        for c in comments {
            writeln!(w, "# {c}")?;
        }
        for (u, v) in self.links() {
            writeln!(w, "{} {}", self.labels[u], self.labels[v])?;
        }
        Ok(())
    }

    pub fn to_edge_list_string(&self, comments: &[String]) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf, comments)
            .expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }
}

/// Options for [`load_edge_list`].
#[derive(Debug, Clone, Copy)]
pub struct LoadOptions {
    /// Recorded in [`LoadStats`]: whether a directed source was read as
    /// undirected. Loading always symmetrizes (a line `u v` and a line `v u`
    /// denote the same undirected link); the flag only documents the reading.
    pub treat_directed_as_undirected: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            treat_directed_as_undirected: true,
        }
    }
}

/// Per-load accounting of dropped and collapsed lines.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub lines: usize,
    pub comments: usize,
    pub blank: usize,
    pub self_loops_dropped: usize,
    pub duplicates_collapsed: usize,
    pub treat_directed_as_undirected: bool,
}

/// Parse edge-list text into a [`Graph`].
///
/// Lines starting with `#` are comments; blank lines are skipped. Every other
/// line must hold exactly two whitespace-separated integer labels. Self-loops
/// are dropped, duplicate links (in either orientation) collapse to one, and
/// labels are remapped to dense internal ids in first-seen order.
pub fn load_edge_list<R: BufRead>(reader: R, options: LoadOptions) -> Result<(Graph, LoadStats)> {
    let mut stats = LoadStats {
        treat_directed_as_undirected: options.treat_directed_as_undirected,
        ..LoadStats::default()
    };
    let mut ids: HashMap<Label, NodeId> = HashMap::new();
    let mut labels: Vec<Label> = Vec::new();
    let mut seen: HashSet<(NodeId, NodeId)> = HashSet::new();
    let mut pairs: Vec<(NodeId, NodeId)> = Vec::new();

    let mut intern = |label: Label, labels: &mut Vec<Label>| -> NodeId {
        *ids.entry(label).or_insert_with(|| {
            labels.push(label);
            labels.len() - 1
        })
    };

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        stats.lines += 1;
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            stats.comments += 1;
            continue;
        }
        if trimmed.is_empty() {
            stats.blank += 1;
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected two tokens, got {:?}", trimmed),
                })
            }
        };
        let parse = |tok: &str| -> Result<Label> {
            tok.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("non-integer token {tok:?}"),
            })
        };
        let (la, lb) = (parse(a)?, parse(b)?);
        if la == lb {
            stats.self_loops_dropped += 1;
            continue;
        }
        let u = intern(la, &mut labels);
        let v = intern(lb, &mut labels);
        if seen.insert((u.min(v), u.max(v))) {
            pairs.push((u, v));
        } else {
            stats.duplicates_collapsed += 1;
        }
    }

    if pairs.is_empty() {
        return Err(Error::EmptyGraph(
            "no links survive comment/self-loop/duplicate filtering".into(),
        ));
    }

    let n = labels.len();
    let mut adjacency = vec![Vec::new(); n];
    for &(u, v) in &pairs {
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }

    Ok((
        Graph {
            adjacency,
            labels,
            link_count: pairs.len(),
        },
        stats,
    ))
}

/// Subgraph induced by `nodes`: exactly those nodes and every link with both
/// endpoints among them. New internal ids follow ascending old ids; external
/// labels are preserved. Panics if a node id is out of range.
pub fn induced_subgraph(g: &Graph, nodes: &NodeSet) -> Graph {
    let n = g.node_count();
    let mask = nodes.mask(n);
    let mut remap = vec![usize::MAX; n];
    let mut labels = Vec::with_capacity(nodes.len());
    for (new_id, old_id) in nodes.iter().enumerate() {
        remap[old_id] = new_id;
        labels.push(g.label(old_id));
    }
    let mut adjacency = vec![Vec::new(); nodes.len()];
    let mut link_count = 0;
    for old_u in nodes.iter() {
        let new_u = remap[old_u];
        for &old_v in g.neighbors(old_u) {
            if mask[old_v] {
                adjacency[new_u].push(remap[old_v]);
                if old_u < old_v {
                    link_count += 1;
                }
            }
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    Graph {
        adjacency,
        labels,
        link_count,
    }
}

/// Remove every link with one endpoint in `s` and the other in `t`.
///
/// Returns the reduced graph (node set unchanged) and the removed links as
/// normalized `(min, max)` internal-id pairs. Panics if `s` or `t` is empty
/// or contains an out-of-range id.
pub fn remove_links_between(
    g: &Graph,
    s: &NodeSet,
    t: &NodeSet,
) -> (Graph, BTreeSet<(NodeId, NodeId)>) {
    assert!(!s.is_empty() && !t.is_empty(), "S and T must be nonempty");
    let n = g.node_count();
    let in_s = s.mask(n);
    let in_t = t.mask(n);

    let crosses = |u: NodeId, v: NodeId| (in_s[u] && in_t[v]) || (in_t[u] && in_s[v]);

    let mut removed = BTreeSet::new();
    let mut adjacency = Vec::with_capacity(n);
    for u in 0..n {
        let kept: Vec<NodeId> = g
            .neighbors(u)
            .iter()
            .copied()
            .filter(|&v| {
                if crosses(u, v) {
                    if u < v {
                        removed.insert((u, v));
                    }
                    false
                } else {
                    true
                }
            })
            .collect();
        adjacency.push(kept);
    }
    let link_count = g.link_count() - removed.len();
    (
        Graph {
            adjacency,
            labels: g.labels.clone(),
            link_count,
        },
        removed,
    )
}

/// Drop all degree-0 nodes, re-densifying the remaining ids (labels kept).
/// Returns the cleaned graph and the removed nodes as old internal ids.
pub fn remove_isolated_nodes(g: &Graph) -> (Graph, NodeSet) {
    let n = g.node_count();
    let keep: NodeSet = (0..n).filter(|&v| g.degree(v) > 0).collect();
    let removed: NodeSet = (0..n).filter(|&v| g.degree(v) == 0).collect();
    (induced_subgraph(g, &keep), removed)
}

/// Connected components as node sets; together they partition the node set.
/// Components are emitted in ascending order of their smallest member.
pub fn connected_components(g: &Graph) -> Vec<NodeSet> {
    let n = g.node_count();
    let mut visited = vec![false; n];
    let mut components = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut comp = NodeSet::new();
        visited[start] = true;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            comp.insert(u);
            for &v in g.neighbors(u) {
                if !visited[v] {
                    visited[v] = true;
                    queue.push_back(v);
                }
            }
        }
        components.push(comp);
    }
    components
}

struct Fnv1a(u64);

impl Fnv1a {
    fn new() -> Self {
        Self(0xcbf2_9ce4_8422_2325)
    }

    fn write_u64(&mut self, x: u64) {
        for byte in x.to_le_bytes() {
            self.0 ^= u64::from(byte);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    fn finish(&self) -> u64 {
        self.0
    }
}
