//! Sampling and node-group analysis for undirected simple networks.
//!
//! The crate has three layers:
//!
//! * [`graph`]: a compact immutable graph over dense internal ids with a
//!   mapping back to the external integer labels of the source edge list,
//!   plus the mutation primitives the extraction loop needs.
//! * [`mod@sample`]: degree-weighted random node selection (RD) and
//!   breadth-first sampling (BF) of a configured fraction of the nodes.
//! * [`criterion`], [`search`], [`null`], [`extract`]: the group criterion
//!   `W`, random-restart hill climbing over `(S, T)` pairs, an Erdős–Rényi
//!   `G(n, m)` null model, and the sequential extraction of statistically
//!   significant groups.
//!
//! [`analysis`] classifies extracted groups (communities, modules, mixtures),
//! computes summary and coverage statistics, and [`pipeline`] orchestrates
//! repeated sample → extract → summarize runs with deterministic seeding.
//!
//! All criterion arithmetic is generic over the scalar type through
//! [`scalar::Real`]; the pipeline and CLI use the [`Score`] alias (`f64`).

pub mod analysis;
pub mod criterion;
pub mod error;
pub mod extract;
pub mod graph;
pub mod null;
pub mod pipeline;
pub mod sample;
pub mod scalar;
pub mod search;
pub mod seed;

/// Default scalar used by the extraction pipeline and the CLI.
pub type Score = f64;

pub use analysis::{
    aggregate_coverages, aggregate_summaries, classify, coverage, histogram, rescale_w, summarize,
    CoverageReport, GroupType, Histogram, SummaryReport,
};
pub use criterion::{criterion_w, link_count, mu, tau, w_from_counts};
pub use error::{Error, Result};
pub use extract::{extract_all, ExtractedGroup, ExtractionConfig, ExtractionResult, GroupsFile};
pub use graph::{load_edge_list, Graph, LoadOptions, LoadStats, NodeSet};
pub use null::{estimate_null, gen_er_gnm, p_value, NullEstimate};
pub use pipeline::{run_pipeline, MethodAggregate, PipelineConfig, PipelineOutcome, RunRecord};
pub use sample::{sample, sample_bf, sample_rd, target_size, SampleMethod, SamplerConfig};
pub use scalar::Real;
pub use search::{hill_climb, search_best_group, GroupPair};
pub use seed::derive_seed;
