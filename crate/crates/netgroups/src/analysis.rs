//! Group classification and the aggregate statistics reported per network:
//! group counts and mean sizes, per-type breakdowns, node/link coverage
//! including the unexplained background, criterion rescaling for sampled
//! networks, distribution histograms, and multi-run averaging.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extract::{ExtractedGroup, ExtractionResult, Provenance};
use crate::graph::{Graph, Label};
use crate::scalar::Real;
use crate::search::GroupPair;
use crate::Score;

/// Group taxonomy by the relation between `S` and `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupType {
    /// `S = T`: densely connected nodes (τ = 1).
    Community,
    /// `S ∩ T = ∅`: structurally equivalent nodes sharing neighbors (τ = 0).
    Module,
    /// Everything in between (0 < τ < 1).
    Mixture,
}

impl GroupType {
    pub fn as_str(self) -> &'static str {
        match self {
            GroupType::Community => "community",
            GroupType::Module => "module",
            GroupType::Mixture => "mixture",
        }
    }
}

/// Classify by exact set tests; τ is a ratio of integers, so no tolerance
/// is involved.
pub fn classify<R: Real>(pair: &GroupPair<R>) -> GroupType {
    if pair.s_nodes == pair.t_nodes {
        return GroupType::Community;
    }
    // sorted lists: disjointness by merge scan
    let (mut i, mut j) = (0, 0);
    while i < pair.s_nodes.len() && j < pair.t_nodes.len() {
        match pair.s_nodes[i].cmp(&pair.t_nodes[j]) {
            std::cmp::Ordering::Equal => return GroupType::Mixture,
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    GroupType::Module
}

/// Count and mean group size for one group type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypeSummary<R = Score> {
    pub count: R,
    /// Mean `s` over groups of this type; 0 when the type is absent
    /// (`count` doubles as the emptiness flag).
    pub mean_s: R,
}

/// Per-network aggregate over the extracted groups.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryReport<R = Score> {
    pub group_count: R,
    pub mean_s: R,
    pub mean_t: R,
    pub mean_tau: R,
    pub communities: TypeSummary<R>,
    pub mixtures: TypeSummary<R>,
    pub modules: TypeSummary<R>,
    /// True when no groups were extracted; all means above are then 0.
    pub empty: bool,
}

/// Percentage of nodes and links explained per group type, plus the
/// background left over after extraction. Node percentages count only
/// membership in `S` sets and may overlap across types; link percentages
/// partition the links exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport<R = Score> {
    pub community_nodes_pct: R,
    pub community_links_pct: R,
    pub mixture_nodes_pct: R,
    pub mixture_links_pct: R,
    pub module_nodes_pct: R,
    pub module_links_pct: R,
    pub background_nodes_pct: R,
    pub background_links_pct: R,
}

fn mean<R: Real, I: Iterator<Item = R>>(iter: I) -> R {
    let mut sum = R::zero();
    let mut count = 0usize;
    for v in iter {
        sum = sum + v;
        count += 1;
    }
    if count == 0 {
        R::zero()
    } else {
        sum / R::from_count(count)
    }
}

/// Arithmetic means over all extracted groups plus per-type breakdowns.
pub fn summarize_groups<R: Real>(groups: &[ExtractedGroup<R>]) -> SummaryReport<R> {
    let type_summary = |ty: GroupType| -> TypeSummary<R> {
        let of_type: Vec<&ExtractedGroup<R>> =
            groups.iter().filter(|g| g.group_type == ty).collect();
        TypeSummary {
            count: R::from_count(of_type.len()),
            mean_s: mean(of_type.iter().map(|g| R::from_count(g.s.len()))),
        }
    };
    SummaryReport {
        group_count: R::from_count(groups.len()),
        mean_s: mean(groups.iter().map(|g| R::from_count(g.s.len()))),
        mean_t: mean(groups.iter().map(|g| R::from_count(g.t.len()))),
        mean_tau: mean(groups.iter().map(|g| g.tau)),
        communities: type_summary(GroupType::Community),
        mixtures: type_summary(GroupType::Mixture),
        modules: type_summary(GroupType::Module),
        empty: groups.is_empty(),
    }
}

/// See [`summarize_groups`].
pub fn summarize<R: Real>(result: &ExtractionResult<R>) -> SummaryReport<R> {
    summarize_groups(&result.groups)
}

/// Node and link coverage of `groups` against the graph they were extracted
/// from. Fails with [`Error::ProvenanceMismatch`] if `original` is not that
/// graph.
pub fn coverage_groups<R: Real>(
    groups: &[ExtractedGroup<R>],
    provenance: &Provenance,
    original: &Graph,
) -> Result<CoverageReport<R>> {
    let fingerprint = format!("{:016x}", original.fingerprint());
    if fingerprint != provenance.fingerprint {
        return Err(Error::ProvenanceMismatch(format!(
            "graph fingerprint {fingerprint} != recorded {}",
            provenance.fingerprint
        )));
    }
    let n = original.node_count();
    let m = original.link_count();

    let nodes_of = |ty: GroupType| -> BTreeSet<Label> {
        groups
            .iter()
            .filter(|g| g.group_type == ty)
            .flat_map(|g| g.s.iter().copied())
            .collect()
    };
    let links_of = |ty: GroupType| -> BTreeSet<(Label, Label)> {
        groups
            .iter()
            .filter(|g| g.group_type == ty)
            .flat_map(|g| g.removed_links.iter().copied())
            .collect()
    };
    // a link-free graph (possible for sparse samples) is all background
    let node_pct = |set: &BTreeSet<Label>| {
        if n == 0 {
            R::zero()
        } else {
            R::ratio(set.len(), n) * R::from_count(100)
        }
    };
    let link_pct = |set: &BTreeSet<(Label, Label)>| {
        if m == 0 {
            R::zero()
        } else {
            R::ratio(set.len(), m) * R::from_count(100)
        }
    };
    let background_pct = |covered: usize, total: usize| {
        if total == 0 {
            R::from_count(100)
        } else {
            R::ratio(total - covered, total) * R::from_count(100)
        }
    };

    let all_s: BTreeSet<Label> = groups.iter().flat_map(|g| g.s.iter().copied()).collect();
    let all_removed: BTreeSet<(Label, Label)> = groups
        .iter()
        .flat_map(|g| g.removed_links.iter().copied())
        .collect();

    Ok(CoverageReport {
        community_nodes_pct: node_pct(&nodes_of(GroupType::Community)),
        community_links_pct: link_pct(&links_of(GroupType::Community)),
        mixture_nodes_pct: node_pct(&nodes_of(GroupType::Mixture)),
        mixture_links_pct: link_pct(&links_of(GroupType::Mixture)),
        module_nodes_pct: node_pct(&nodes_of(GroupType::Module)),
        module_links_pct: link_pct(&links_of(GroupType::Module)),
        background_nodes_pct: background_pct(all_s.len(), n),
        background_links_pct: background_pct(all_removed.len(), m),
    })
}

/// See [`coverage_groups`].
pub fn coverage<R: Real>(
    result: &ExtractionResult<R>,
    original: &Graph,
) -> Result<CoverageReport<R>> {
    coverage_groups(&result.groups, &result.provenance, original)
}

/// Divide each criterion value by the sampling fraction, undoing the size
/// dependence when comparing sampled against original networks. Panics if
/// `fraction` is not positive.
pub fn rescale_w<R: Real>(values: &[R], fraction: R) -> Vec<R> {
    assert!(fraction > R::zero(), "fraction must be positive");
    values.iter().map(|&v| v / fraction).collect()
}

/// Equal-width binned counts with a normalized density
/// (`Σ density·width = 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram<R = Score> {
    pub lo: R,
    pub hi: R,
    pub width: R,
    pub counts: Vec<usize>,
    pub density: Vec<R>,
    /// Out-of-range values folded into the edge bins.
    pub clamped: usize,
    pub total: usize,
    pub empty: bool,
}

impl<R: Real> Histogram<R> {
    pub fn bin_center(&self, i: usize) -> R {
        self.lo + self.width * (R::from_count(i) + R::from(0.5).unwrap())
    }
}

/// Bin `values` into `bins` equal-width bins over `[lo, hi]`. Out-of-range
/// values are clamped to the edge bins and counted. Panics unless
/// `bins >= 1` and `lo < hi`; an empty input yields a flagged all-zero
/// histogram.
pub fn histogram<R: Real>(values: &[R], bins: usize, range: (R, R)) -> Histogram<R> {
    let (lo, hi) = range;
    assert!(bins >= 1, "bins must be >= 1");
    assert!(lo < hi, "range must satisfy lo < hi");
    let width = (hi - lo) / R::from_count(bins);
    let mut counts = vec![0usize; bins];
    let mut clamped = 0usize;
    for &v in values {
        let idx = if v < lo {
            clamped += 1;
            0
        } else if v > hi {
            clamped += 1;
            bins - 1
        } else {
            (((v - lo) / width).floor().to_usize().unwrap_or(0)).min(bins - 1)
        };
        counts[idx] += 1;
    }
    let total = values.len();
    let density = if total == 0 {
        vec![R::zero(); bins]
    } else {
        let norm = R::from_count(total) * width;
        counts.iter().map(|&c| R::from_count(c) / norm).collect()
    };
    Histogram {
        lo,
        hi,
        width,
        counts,
        density,
        clamped,
        total,
        empty: total == 0,
    }
}

/// Field-wise arithmetic mean over per-run summaries; fractional counts are
/// expected. Errors on an empty list.
pub fn aggregate_summaries<R: Real>(reports: &[SummaryReport<R>]) -> Result<SummaryReport<R>> {
    if reports.is_empty() {
        return Err(Error::InvalidConfig("no reports to aggregate".into()));
    }
    let avg = |f: &dyn Fn(&SummaryReport<R>) -> R| mean(reports.iter().map(f));
    Ok(SummaryReport {
        group_count: avg(&|r| r.group_count),
        mean_s: avg(&|r| r.mean_s),
        mean_t: avg(&|r| r.mean_t),
        mean_tau: avg(&|r| r.mean_tau),
        communities: TypeSummary {
            count: avg(&|r| r.communities.count),
            mean_s: avg(&|r| r.communities.mean_s),
        },
        mixtures: TypeSummary {
            count: avg(&|r| r.mixtures.count),
            mean_s: avg(&|r| r.mixtures.mean_s),
        },
        modules: TypeSummary {
            count: avg(&|r| r.modules.count),
            mean_s: avg(&|r| r.modules.mean_s),
        },
        empty: reports.iter().all(|r| r.empty),
    })
}

/// Field-wise arithmetic mean over per-run coverage reports.
pub fn aggregate_coverages<R: Real>(reports: &[CoverageReport<R>]) -> Result<CoverageReport<R>> {
    if reports.is_empty() {
        return Err(Error::InvalidConfig("no reports to aggregate".into()));
    }
    let avg = |f: &dyn Fn(&CoverageReport<R>) -> R| mean(reports.iter().map(f));
    Ok(CoverageReport {
        community_nodes_pct: avg(&|r| r.community_nodes_pct),
        community_links_pct: avg(&|r| r.community_links_pct),
        mixture_nodes_pct: avg(&|r| r.mixture_nodes_pct),
        mixture_links_pct: avg(&|r| r.mixture_links_pct),
        module_nodes_pct: avg(&|r| r.module_nodes_pct),
        module_links_pct: avg(&|r| r.module_links_pct),
        background_nodes_pct: avg(&|r| r.background_nodes_pct),
        background_links_pct: avg(&|r| r.background_links_pct),
    })
}

/// Column names shared by the per-network and aggregated summary CSVs.
pub const SUMMARY_COLUMNS: &str = "groups,mean_s,mean_t,mean_tau,communities,community_mean_s,mixtures,mixture_mean_s,modules,module_mean_s";

/// Column names for coverage CSVs; percentages are emitted with one decimal.
pub const COVERAGE_COLUMNS: &str = "community_nodes_pct,community_links_pct,mixture_nodes_pct,mixture_links_pct,module_nodes_pct,module_links_pct,background_nodes_pct,background_links_pct";

/// The ten summary values in [`SUMMARY_COLUMNS`] order.
pub fn summary_values<R: Real>(r: &SummaryReport<R>) -> Vec<String> {
    vec![
        format!("{}", r.group_count),
        format!("{}", r.mean_s),
        format!("{}", r.mean_t),
        format!("{}", r.mean_tau),
        format!("{}", r.communities.count),
        format!("{}", r.communities.mean_s),
        format!("{}", r.mixtures.count),
        format!("{}", r.mixtures.mean_s),
        format!("{}", r.modules.count),
        format!("{}", r.modules.mean_s),
    ]
}

/// The eight coverage values in [`COVERAGE_COLUMNS`] order.
pub fn coverage_values<R: Real>(r: &CoverageReport<R>) -> Vec<String> {
    vec![
        format!("{:.1}", r.community_nodes_pct),
        format!("{:.1}", r.community_links_pct),
        format!("{:.1}", r.mixture_nodes_pct),
        format!("{:.1}", r.mixture_links_pct),
        format!("{:.1}", r.module_nodes_pct),
        format!("{:.1}", r.module_links_pct),
        format!("{:.1}", r.background_nodes_pct),
        format!("{:.1}", r.background_links_pct),
    ]
}

/// Two-column `bin_center,density` CSV body for a histogram.
pub fn histogram_rows<R: Real>(h: &Histogram<R>) -> Vec<String> {
    (0..h.counts.len())
        .map(|i| format!("{},{}", h.bin_center(i), h.density[i]))
        .collect()
}
