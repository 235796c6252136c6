//! Sequential extraction of statistically significant groups.
//!
//! One iteration: find the best `(S, T)` pair on the working graph, compare
//! its criterion value against the null distribution on matched `G(n, m)`
//! graphs, and if significant remove the `S`–`T` links and any nodes left
//! isolated, then repeat on what remains. Extraction stops at the first
//! insignificant candidate; the surviving working graph is the background.
//! Only links are removed, so a node may appear in several groups.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::{classify, GroupType};
use crate::error::{Error, Result};
use crate::graph::{remove_isolated_nodes, remove_links_between, Graph, Label, NodeSet};
use crate::null::{estimate_null, p_value};
use crate::scalar::Real;
use crate::search::{search_best_group, GroupPair};
use crate::seed::derive_seed;
use crate::Score;

// Seed-derivation tags separating the search stream from the null stream.
const SEARCH_STREAM: u64 = 1;
const NULL_STREAM: u64 = 2;

/// Knobs of the extraction loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtractionConfig {
    /// Hill-climb restarts per search.
    pub restarts: usize,
    /// ER replicas per null estimate.
    pub null_samples: usize,
    /// Significance level; a group is kept while `p < alpha`.
    pub alpha: f64,
    /// Master seed; every restart, replica and iteration derives from it.
    pub seed: u64,
    /// Stop after this many groups even while significant.
    pub max_groups: Option<usize>,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            null_samples: 100,
            alpha: 0.01,
            seed: 0,
            max_groups: None,
        }
    }
}

impl ExtractionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::InvalidConfig("restarts must be >= 1".into()));
        }
        if self.null_samples < 1 {
            return Err(Error::InvalidConfig("null_samples must be >= 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(
                "alpha must lie strictly between 0 and 1".into(),
            ));
        }
        Ok(())
    }
}

/// What the extraction ran on and with which settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub n: usize,
    pub m: usize,
    /// Hex digest of the labelled input graph; see [`Graph::fingerprint`].
    pub fingerprint: String,
    pub config: ExtractionConfig,
}

impl Provenance {
    pub fn of(g: &Graph, config: &ExtractionConfig) -> Self {
        Self {
            n: g.node_count(),
            m: g.link_count(),
            fingerprint: format!("{:016x}", g.fingerprint()),
            config: *config,
        }
    }
}

/// One significant group in external-label space.
///
/// Ids are converted to labels at record time because the working graph is
/// re-densified after every extraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractedGroup<R = Score> {
    #[serde(rename = "S")]
    pub s: Vec<Label>,
    #[serde(rename = "T")]
    pub t: Vec<Label>,
    pub links_st: usize,
    pub links_stc: usize,
    #[serde(rename = "W")]
    pub w: R,
    pub tau: R,
    #[serde(rename = "type")]
    pub group_type: GroupType,
    pub p_value: R,
    /// Links removed when the group was extracted, as normalized label pairs.
    pub removed_links: Vec<(Label, Label)>,
}

/// Ordered list of significant groups plus the residual background graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionResult<R = Score> {
    pub groups: Vec<ExtractedGroup<R>>,
    pub background: Graph,
    pub provenance: Provenance,
    /// Labels of nodes that were already isolated in the input.
    pub initial_isolated: Vec<Label>,
}

impl<R: Real + Serialize> ExtractionResult<R> {
    /// On-disk form; `background_edge_list` is the caller-chosen reference to
    /// the background file, usually a path relative to the groups file.
    pub fn to_groups_file(&self, background_edge_list: Option<String>) -> GroupsFile<R> {
        GroupsFile {
            schema: GROUPS_SCHEMA.to_string(),
            provenance: self.provenance.clone(),
            groups: self.groups.clone(),
            background_nodes: self.background.node_count(),
            background_links: self.background.link_count(),
            background_edge_list,
            initial_isolated: self.initial_isolated.clone(),
        }
    }
}

pub const GROUPS_SCHEMA: &str = "netgroups-groups-v1";

/// Serialized extraction result: provenance echo, the groups array, and a
/// reference to the background edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupsFile<R = Score> {
    pub schema: String,
    pub provenance: Provenance,
    pub groups: Vec<ExtractedGroup<R>>,
    pub background_nodes: usize,
    pub background_links: usize,
    pub background_edge_list: Option<String>,
    pub initial_isolated: Vec<Label>,
}

impl<R: Real + Serialize + for<'de> Deserialize<'de>> GroupsFile<R> {
    pub fn write_json(&self, path: &Path) -> Result<()> {
        let file = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(file, self)?;
        Ok(())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let file = BufReader::new(File::open(path)?);
        Ok(serde_json::from_reader(file)?)
    }
}

fn to_labels(g: &Graph, ids: &[usize]) -> Vec<Label> {
    let mut labels: Vec<Label> = ids.iter().map(|&v| g.label(v)).collect();
    labels.sort_unstable();
    labels
}

fn links_to_labels(g: &Graph, links: &BTreeSet<(usize, usize)>) -> Vec<(Label, Label)> {
    let mut out: Vec<(Label, Label)> = links
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (g.label(u), g.label(v));
            (a.min(b), a.max(b))
        })
        .collect();
    out.sort_unstable();
    out
}

/// Extract significant groups from `g` until the best remaining candidate is
/// no better than chance at level `cfg.alpha`.
///
/// The input is cleaned of isolated nodes first (they cannot be represented
/// in edge-list files and only dilute the criterion), and the node count
/// entering the criterion is re-evaluated on the shrinking working graph at
/// every iteration. An empty group list is a valid outcome.
pub fn extract_all<R: Real>(g: &Graph, cfg: &ExtractionConfig) -> Result<ExtractionResult<R>> {
    cfg.validate()?;
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph(
            "cannot extract from an empty graph".into(),
        ));
    }
    let provenance = Provenance::of(g, cfg);

    let (mut working, isolated) = remove_isolated_nodes(g);
    let initial_isolated = to_labels(g, &isolated.iter().collect::<Vec<_>>());
    let mut groups: Vec<ExtractedGroup<R>> = Vec::new();

    for iteration in 0u64.. {
        if working.link_count() == 0 {
            break;
        }
        if let Some(max) = cfg.max_groups {
            if groups.len() >= max {
                break;
            }
        }

        let best: GroupPair<R> = search_best_group(
            &working,
            cfg,
            derive_seed(cfg.seed, &[SEARCH_STREAM, iteration]),
        )?;
        let null = estimate_null::<R>(
            working.node_count(),
            working.link_count(),
            cfg,
            derive_seed(cfg.seed, &[NULL_STREAM, iteration]),
        )?;
        let p = p_value(best.w, &null);
        // a recordable group must beat the null and actually link S to T
        if p.to_f64().expect("p finite") >= cfg.alpha || best.links_st == 0 {
            break;
        }

        let s_set: NodeSet = best.s_set();
        let t_set: NodeSet = best.t_set();
        let (reduced, removed) = remove_links_between(&working, &s_set, &t_set);
        let (cleaned, _) = remove_isolated_nodes(&reduced);

        groups.push(ExtractedGroup {
            s: to_labels(&working, &best.s_nodes),
            t: to_labels(&working, &best.t_nodes),
            links_st: best.links_st,
            links_stc: best.links_stc,
            w: best.w,
            tau: best.tau,
            group_type: classify(&best),
            p_value: p,
            removed_links: links_to_labels(&working, &removed),
        });
        working = cleaned;
    }

    Ok(ExtractionResult {
        groups,
        background: working,
        provenance,
        initial_isolated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::graph::{load_edge_list, LoadOptions};
    use crate::null::gen_er_gnm;
    use crate::seed::rng_at;
    use num_traits::ToPrimitive;
    use rand::Rng;
    use std::io::Cursor;

    fn load(text: &str) -> Graph {
        load_edge_list(Cursor::new(text), LoadOptions::default())
            .unwrap()
            .0
    }

    fn fast_cfg(seed: u64) -> ExtractionConfig {
        ExtractionConfig {
            restarts: 8,
            null_samples: 20,
            alpha: 0.05,
            seed,
            max_groups: None,
        }
    }

    #[test]
    fn config_validation() {
        assert!(ExtractionConfig::default().validate().is_ok());
        let bad = ExtractionConfig {
            alpha: 1.0,
            ..ExtractionConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = ExtractionConfig {
            restarts: 0,
            ..ExtractionConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn empty_and_linkless_inputs() {
        let empty = Graph::from_pairs(0, &[]);
        assert!(matches!(
            extract_all::<f64>(&empty, &fast_cfg(1)),
            Err(Error::EmptyGraph(_))
        ));

        // nodes but no links: nothing to search, all nodes were isolated
        let loose = Graph::from_pairs(3, &[]);
        let result: ExtractionResult = extract_all(&loose, &fast_cfg(1)).unwrap();
        assert!(result.groups.is_empty());
        assert_eq!(result.background.node_count(), 0);
        assert_eq!(result.initial_isolated, vec![0, 1, 2]);
        let cov = crate::analysis::coverage(&result, &loose).unwrap();
        assert_eq!(cov.background_nodes_pct, 100.0);
        assert_eq!(cov.background_links_pct, 100.0);
    }

    #[test]
    fn triangle_null_matches_itself_so_nothing_is_extracted() {
        // the matched null G(3,3) is the triangle itself, so the observed
        // best W can never beat it
        let g = load("1 2\n1 3\n2 3\n");
        let result: ExtractionResult = extract_all(&g, &fast_cfg(5)).unwrap();
        assert!(result.groups.is_empty());
        assert_eq!(result.background.link_count(), 3);
    }

    #[test]
    fn planted_cliques_are_extracted_before_background() {
        // three 8-cliques joined in a ring by single bridges: the cliques
        // dominate any matched ER null (W ~ 110 vs ~ 45)
        let mut text = String::new();
        for base in [0, 10, 20] {
            for u in 0..8 {
                for v in (u + 1)..8 {
                    text.push_str(&format!("{} {}\n", base + u, base + v));
                }
            }
        }
        text.push_str("0 10\n10 20\n20 0\n");
        let g = load(&text);
        let result: ExtractionResult = extract_all(&g, &fast_cfg(7)).unwrap();
        assert!(
            result.groups.len() >= 2,
            "expected at least two cliques, got {}",
            result.groups.len()
        );
        let first = &result.groups[0];
        assert_eq!(first.group_type, GroupType::Community);
        assert_eq!(first.s.len(), 8);
        assert!(first.p_value.to_f64().unwrap() < fast_cfg(7).alpha);
    }

    #[test]
    fn planted_blocks_are_recovered_as_patterns() {
        // 2 blocks of 20, p_in 0.5, p_out 0.02: at this density the
        // criterion's optimum is a trimmed-core mixture whose pattern T is
        // the block itself, so block recovery shows up on T
        let mut rng = rng_at(0xb10c, &[]);
        let mut pairs = Vec::new();
        for u in 0..40usize {
            for v in (u + 1)..40 {
                let p = if u / 20 == v / 20 { 0.5 } else { 0.02 };
                if rng.gen_bool(p) {
                    pairs.push((u, v));
                }
            }
        }
        let g = Graph::from_pairs(40, &pairs);
        let cfg = ExtractionConfig {
            restarts: 20,
            null_samples: 40,
            alpha: 0.05,
            seed: 3,
            max_groups: Some(1),
        };
        let result: ExtractionResult = extract_all(&g, &cfg).unwrap();
        assert!(!result.groups.is_empty());
        let first = &result.groups[0];
        let t: BTreeSet<i64> = first.t.iter().copied().collect();
        let block0: BTreeSet<i64> = (0..20).collect();
        let block1: BTreeSet<i64> = (20..40).collect();
        let overlap = |a: &BTreeSet<i64>, b: &BTreeSet<i64>| {
            a.intersection(b).count() as f64 / a.union(b).count() as f64
        };
        let jaccard = overlap(&t, &block0).max(overlap(&t, &block1));
        assert!(jaccard >= 0.9, "pattern T missed both blocks: {jaccard}");
        assert!(
            first.s.len() < first.t.len(),
            "S should be the trimmed core"
        );
    }

    #[test]
    fn removed_plus_background_links_equal_original() {
        let mut rng = rng_at(40, &[]);
        let g = gen_er_gnm(30, 80, &mut rng);
        let result: ExtractionResult = extract_all(&g, &fast_cfg(9)).unwrap();
        let removed: usize = result.groups.iter().map(|g| g.removed_links.len()).sum();
        assert_eq!(removed + result.background.link_count(), g.link_count());
    }

    #[test]
    fn removed_link_sets_are_disjoint() {
        let mut text = String::new();
        for u in 0..6 {
            for v in (u + 1)..6 {
                text.push_str(&format!("{u} {v}\n"));
            }
        }
        text.push_str("0 20\n20 21\n");
        let g = load(&text);
        let result: ExtractionResult = extract_all(&g, &fast_cfg(3)).unwrap();
        let mut seen = BTreeSet::new();
        for group in &result.groups {
            for link in &group.removed_links {
                assert!(seen.insert(*link), "link {link:?} removed twice");
            }
        }
    }

    #[test]
    fn max_groups_caps_extraction() {
        let mut text = String::new();
        for base in [0, 10, 20] {
            for u in 0..5 {
                for v in (u + 1)..5 {
                    text.push_str(&format!("{} {}\n", base + u, base + v));
                }
            }
        }
        let g = load(&text);
        let cfg = ExtractionConfig {
            max_groups: Some(1),
            ..fast_cfg(11)
        };
        let result: ExtractionResult = extract_all(&g, &cfg).unwrap();
        assert_eq!(result.groups.len(), 1);
    }

    #[test]
    fn extraction_is_deterministic() {
        let mut rng = rng_at(41, &[]);
        let g = gen_er_gnm(25, 60, &mut rng);
        let a: ExtractionResult = extract_all(&g, &fast_cfg(13)).unwrap();
        let b: ExtractionResult = extract_all(&g, &fast_cfg(13)).unwrap();
        assert_eq!(a.groups, b.groups);
        assert_eq!(a.background, b.background);
    }

    #[test]
    fn initial_isolated_nodes_are_recorded_and_excluded() {
        let g = load("1 2\n2 3\n1 3\n1 4\n");
        let (reduced, _) =
            remove_links_between(&g, &[3].into_iter().collect(), &[0].into_iter().collect());
        // node with label 4 is now isolated
        let result: ExtractionResult = extract_all(&reduced, &fast_cfg(2)).unwrap();
        assert_eq!(result.initial_isolated, vec![4]);
        assert_eq!(result.provenance.n, 4);
    }

    #[test]
    fn groups_file_round_trips() {
        let mut text = String::new();
        for u in 0..6 {
            for v in (u + 1)..6 {
                text.push_str(&format!("{u} {v}\n"));
            }
        }
        text.push_str("3 9\n9 8\n");
        let g = load(&text);
        let result: ExtractionResult = extract_all(&g, &fast_cfg(21)).unwrap();
        let file = result.to_groups_file(Some("bg.edges".into()));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("groups.json");
        file.write_json(&path).unwrap();
        let back = GroupsFile::<f64>::read_json(&path).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.schema, GROUPS_SCHEMA);
    }
}
