//! Repeated sample → extract → summarize runs with deterministic seeding
//! and file outputs.
//!
//! Each (method, run index) pair derives its own seed from the master seed,
//! so adding runs never perturbs earlier ones and runs can execute in
//! parallel while producing byte-identical outputs. Per-run artifacts are
//! written to their own directories; the aggregated CSVs are written once at
//! the end, ordered by method and run index. No timestamps or absolute paths
//! enter any output, so a rerun with the same inputs reproduces every file
//! exactly.

use std::fs;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    aggregate_coverages, aggregate_summaries, coverage, coverage_values, summarize, summary_values,
    CoverageReport, SummaryReport, COVERAGE_COLUMNS, SUMMARY_COLUMNS,
};
use crate::error::Result;
use crate::extract::{extract_all, ExtractionConfig, ExtractionResult};
use crate::graph::Graph;
use crate::sample::{sample, SampleMethod, SamplerConfig};
use crate::seed::derive_seed;
use crate::Score;

// Streams hanging off the per-run seed.
const SAMPLE_STREAM: u64 = 1;
const EXTRACT_STREAM: u64 = 2;

/// Full pipeline configuration; echoed verbatim into every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Network name used in report rows.
    pub network: String,
    pub methods: Vec<SampleMethod>,
    pub fraction: f64,
    pub runs: usize,
    /// Extraction knobs; the `seed` field is ignored, every run derives its
    /// own extraction seed from `master_seed`.
    pub extraction: ExtractionConfig,
    pub master_seed: u64,
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs < 1 {
            return Err(crate::Error::InvalidConfig("runs must be >= 1".into()));
        }
        if self.methods.is_empty() {
            return Err(crate::Error::InvalidConfig(
                "at least one sampling method required".into(),
            ));
        }
        if !(self.fraction > 0.0 && self.fraction <= 1.0) {
            return Err(crate::Error::InvalidConfig(format!(
                "fraction must lie in (0, 1], got {}",
                self.fraction
            )));
        }
        self.extraction.validate()
    }

    /// Seed for one (method, run) cell: `hash(master, method, run)`.
    pub fn run_seed(&self, method: SampleMethod, run: usize) -> u64 {
        derive_seed(self.master_seed, &[method.tag(), run as u64])
    }
}

/// Outcome of a single run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub method: SampleMethod,
    pub run: usize,
    pub seed: u64,
    /// "ok" or the error message of the failed stage.
    pub status: String,
    pub groups: usize,
    pub summary: Option<SummaryReport<Score>>,
    pub coverage: Option<CoverageReport<Score>>,
}

/// Aggregates over the successful runs of one method.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodAggregate {
    pub method: SampleMethod,
    pub runs_ok: usize,
    pub summary: SummaryReport<Score>,
    pub coverage: CoverageReport<Score>,
}

#[derive(Debug)]
pub struct PipelineOutcome {
    pub records: Vec<RunRecord>,
    pub aggregates: Vec<MethodAggregate>,
}

fn write_lines(path: &Path, comment: &str, header: &str, rows: &[String]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "# {comment}")?;
    writeln!(out, "{header}")?;
    for row in rows {
        writeln!(out, "{row}")?;
    }
    Ok(())
}

fn run_once(
    g: &Graph,
    cfg: &PipelineConfig,
    method: SampleMethod,
    run: usize,
    out_dir: &Path,
    echo: &str,
) -> RunRecord {
    let seed = cfg.run_seed(method, run);
    let mut record = RunRecord {
        method,
        run,
        seed,
        status: "ok".to_string(),
        groups: 0,
        summary: None,
        coverage: None,
    };

    let attempt = || -> Result<(SummaryReport<Score>, CoverageReport<Score>, usize)> {
        let run_dir = out_dir
            .join("runs")
            .join(method.as_str())
            .join(format!("run_{run:03}"));
        fs::create_dir_all(&run_dir)?;

        let sampler = SamplerConfig::new(method, cfg.fraction, derive_seed(seed, &[SAMPLE_STREAM]));
        let sampled = sample(g, &sampler)?;
        let comments = vec![
            format!(
                "sampled edge list: network={} method={} fraction={} run={} seed={}",
                cfg.network, method, cfg.fraction, run, sampler.seed
            ),
            format!(
                "source_nodes={} source_links={}",
                g.node_count(),
                g.link_count()
            ),
            format!("config: {echo}"),
        ];
        let mut file = BufWriter::new(File::create(run_dir.join("sample.edges"))?);
        sampled.write_edge_list(&mut file, &comments)?;
        file.flush()?;

        let extraction = ExtractionConfig {
            seed: derive_seed(seed, &[EXTRACT_STREAM]),
            ..cfg.extraction
        };
        let result: ExtractionResult<Score> = extract_all(&sampled, &extraction)?;

        let mut bg = BufWriter::new(File::create(run_dir.join("background.edges"))?);
        result
            .background
            .write_edge_list(&mut bg, &[format!("background: config: {echo}")])?;
        bg.flush()?;
        result
            .to_groups_file(Some("background.edges".to_string()))
            .write_json(&run_dir.join("groups.json"))?;

        let summary = summarize(&result);
        let cov = coverage(&result, &sampled)?;
        Ok((summary, cov, result.groups.len()))
    };

    match attempt() {
        Ok((summary, cov, groups)) => {
            record.groups = groups;
            record.summary = Some(summary);
            record.coverage = Some(cov);
        }
        Err(err) => record.status = err.to_string(),
    }
    record
}

/// Run the full pipeline on `g`, writing per-run artifacts and aggregated
/// CSVs under `out_dir`.
pub fn run_pipeline(g: &Graph, cfg: &PipelineConfig, out_dir: &Path) -> Result<PipelineOutcome> {
    cfg.validate()?;
    fs::create_dir_all(out_dir)?;
    let echo = serde_json::to_string(cfg)?;

    serde_json::to_writer_pretty(
        BufWriter::new(File::create(out_dir.join("pipeline_config.json"))?),
        cfg,
    )?;

    let mut records: Vec<RunRecord> = Vec::new();
    for &method in &cfg.methods {
        let method_records: Vec<RunRecord> = (0..cfg.runs)
            .into_par_iter()
            .map(|run| run_once(g, cfg, method, run, out_dir, &echo))
            .collect();
        records.extend(method_records);
    }

    let mut aggregates = Vec::new();
    for &method in &cfg.methods {
        let ok: Vec<&RunRecord> = records
            .iter()
            .filter(|r| r.method == method && r.status == "ok")
            .collect();
        if ok.is_empty() {
            continue;
        }
        let summaries: Vec<SummaryReport<Score>> = ok.iter().filter_map(|r| r.summary).collect();
        let coverages: Vec<CoverageReport<Score>> = ok.iter().filter_map(|r| r.coverage).collect();
        aggregates.push(MethodAggregate {
            method,
            runs_ok: ok.len(),
            summary: aggregate_summaries(&summaries)?,
            coverage: aggregate_coverages(&coverages)?,
        });
    }

    // runs.csv: one status row per run
    let rows: Vec<String> = records
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{}",
                cfg.network, r.method, r.run, r.seed, r.status, r.groups
            )
        })
        .collect();
    write_lines(
        &out_dir.join("runs.csv"),
        &format!("config: {echo}"),
        "network,method,run,seed,status,groups",
        &rows,
    )?;

    // per-run report rows (successful runs only)
    let rows: Vec<String> = records
        .iter()
        .filter_map(|r| {
            r.summary.as_ref().map(|s| {
                format!(
                    "{},{},{},{}",
                    cfg.network,
                    r.method,
                    r.run,
                    summary_values(s).join(",")
                )
            })
        })
        .collect();
    write_lines(
        &out_dir.join("per_run_summary.csv"),
        &format!("config: {echo}"),
        &format!("network,method,run,{SUMMARY_COLUMNS}"),
        &rows,
    )?;

    let rows: Vec<String> = records
        .iter()
        .filter_map(|r| {
            r.coverage.as_ref().map(|c| {
                format!(
                    "{},{},{},{}",
                    cfg.network,
                    r.method,
                    r.run,
                    coverage_values(c).join(",")
                )
            })
        })
        .collect();
    write_lines(
        &out_dir.join("per_run_coverage.csv"),
        &format!("config: {echo}"),
        &format!("network,method,run,{COVERAGE_COLUMNS}"),
        &rows,
    )?;

    // aggregated tables: one row per sampling method
    let rows: Vec<String> = aggregates
        .iter()
        .map(|a| {
            format!(
                "{},{},{},{}",
                cfg.network,
                a.method,
                a.runs_ok,
                summary_values(&a.summary).join(",")
            )
        })
        .collect();
    write_lines(
        &out_dir.join("summary_aggregate.csv"),
        &format!("config: {echo}"),
        &format!("network,method,runs,{SUMMARY_COLUMNS}"),
        &rows,
    )?;

    let rows: Vec<String> = aggregates
        .iter()
        .map(|a| {
            format!(
                "{},{},{},{}",
                cfg.network,
                a.method,
                a.runs_ok,
                coverage_values(&a.coverage).join(",")
            )
        })
        .collect();
    write_lines(
        &out_dir.join("coverage_aggregate.csv"),
        &format!("config: {echo}"),
        &format!("network,method,runs,{COVERAGE_COLUMNS}"),
        &rows,
    )?;

    // machine-readable companion to the aggregate CSVs
    serde_json::to_writer_pretty(
        BufWriter::new(File::create(out_dir.join("aggregates.json"))?),
        &aggregates,
    )?;

    Ok(PipelineOutcome {
        records,
        aggregates,
    })
}
