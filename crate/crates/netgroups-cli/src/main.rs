//! Command-line front end: sample networks, extract significant node groups,
//! compute report tables, and run the full multi-run pipeline.
//!
//! Exit codes: 0 success, 2 usage error, 3 I/O error, 4 data/computation
//! error.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use netgroups::analysis::{
    coverage_groups, coverage_values, histogram_rows, summarize_groups, summary_values,
    COVERAGE_COLUMNS, SUMMARY_COLUMNS,
};
use netgroups::{
    extract_all, histogram, load_edge_list, rescale_w, run_pipeline, sample, ExtractionConfig,
    ExtractionResult, Graph, GroupType, GroupsFile, LoadOptions, LoadStats, PipelineConfig,
    SampleMethod, SamplerConfig, Score,
};

// clap exits with 2 on usage errors; these cover the rest
const IO_EXIT: u8 = 3;
const COMPUTE_EXIT: u8 = 4;

#[derive(Debug)]
enum CliError {
    Io(String),
    Compute(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => IO_EXIT,
            CliError::Compute(_) => COMPUTE_EXIT,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(m) | CliError::Compute(m) => m,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<netgroups::Error> for CliError {
    fn from(e: netgroups::Error) -> Self {
        match e {
            netgroups::Error::Io(inner) => CliError::Io(inner.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn parse_fraction(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(format!("fraction must lie in (0, 1], got {v}"))
    }
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("alpha must lie strictly between 0 and 1, got {v}"))
    }
}

fn parse_positive(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|_| format!("{s:?} is not an integer"))?;
    if v >= 1 {
        Ok(v)
    } else {
        Err("value must be >= 1".to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "netgroups",
    version,
    about = "Sample networks and extract statistically significant node groups",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a network down to a fraction of its nodes
    Sample(SampleArgs),
    /// Extract significant groups from a network
    Extract(ExtractArgs),
    /// Summarize a groups file into report tables and histograms
    Analyze(AnalyzeArgs),
    /// Run sample -> extract -> summarize repeatedly and aggregate
    Pipeline(PipelineArgs),
}

#[derive(Args)]
struct ExtractionFlags {
    /// Hill-climb restarts per search
    #[arg(long, default_value_t = 20, value_parser = parse_positive, env = "NETGROUPS_RESTARTS")]
    restarts: usize,

    /// ER replicas per null estimate
    #[arg(long = "null-samples", default_value_t = 100, value_parser = parse_positive, env = "NETGROUPS_NULL_SAMPLES")]
    null_samples: usize,

    /// Significance level for keeping a group
    #[arg(long, default_value_t = 0.01, value_parser = parse_alpha, env = "NETGROUPS_ALPHA")]
    alpha: f64,

    /// Stop after this many groups
    #[arg(long = "max-groups", env = "NETGROUPS_MAX_GROUPS")]
    max_groups: Option<usize>,
}

impl ExtractionFlags {
    fn to_config(&self, seed: u64) -> ExtractionConfig {
        ExtractionConfig {
            restarts: self.restarts,
            null_samples: self.null_samples,
            alpha: self.alpha,
            seed,
            max_groups: self.max_groups,
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    /// Input edge list
    input: PathBuf,

    /// Output edge list for the sampled network
    #[arg(short, long, env = "NETGROUPS_OUTPUT")]
    output: PathBuf,

    /// Sampling method: rd (degree-weighted node selection) or bf (breadth-first)
    #[arg(long, env = "NETGROUPS_METHOD")]
    method: SampleMethod,

    /// Fraction of nodes to keep, in (0, 1]
    #[arg(long, default_value_t = 0.15, value_parser = parse_fraction, env = "NETGROUPS_FRACTION")]
    fraction: f64,

    /// Sampler seed
    #[arg(long, default_value_t = 0, env = "NETGROUPS_SEED")]
    seed: u64,
}

#[derive(Args)]
struct ExtractArgs {
    /// Input edge list
    input: PathBuf,

    /// Output groups file (JSON); the background edge list is written at
    /// `<output stem>.background.edges` unless --background overrides it
    #[arg(short, long, env = "NETGROUPS_OUTPUT")]
    output: PathBuf,

    /// Output path for the background edge list
    #[arg(long)]
    background: Option<PathBuf>,

    #[command(flatten)]
    extraction: ExtractionFlags,

    /// Extraction seed
    #[arg(long, default_value_t = 0, env = "NETGROUPS_SEED")]
    seed: u64,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// The edge list the groups were extracted from
    #[arg(long)]
    graph: PathBuf,

    /// Groups file produced by `extract`
    #[arg(long)]
    groups: PathBuf,

    /// Output directory for summary.csv, coverage.csv and histogram CSVs
    #[arg(short, long, env = "NETGROUPS_OUTPUT")]
    output: PathBuf,

    /// Divide criterion values by this sampling fraction before binning
    #[arg(long = "rescale-w", value_parser = parse_fraction, env = "NETGROUPS_RESCALE_W")]
    rescale_w: Option<f64>,

    /// Network name for report rows; defaults to the graph file stem
    #[arg(long, env = "NETGROUPS_NETWORK")]
    network: Option<String>,
}

#[derive(Args)]
struct PipelineArgs {
    /// Input edge list
    input: PathBuf,

    /// Output directory
    #[arg(short, long, env = "NETGROUPS_OUTPUT")]
    output: PathBuf,

    /// Sampling methods to run (comma-separated)
    #[arg(long, value_delimiter = ',', default_values = ["rd", "bf"], env = "NETGROUPS_METHOD")]
    method: Vec<SampleMethod>,

    /// Fraction of nodes to keep per sample, in (0, 1]
    #[arg(long, default_value_t = 0.15, value_parser = parse_fraction, env = "NETGROUPS_FRACTION")]
    fraction: f64,

    /// Sampling runs per method
    #[arg(long, default_value_t = 100, value_parser = parse_positive, env = "NETGROUPS_RUNS")]
    runs: usize,

    #[command(flatten)]
    extraction: ExtractionFlags,

    /// Master seed; every run derives its own seeds from it
    #[arg(long, default_value_t = 0, env = "NETGROUPS_SEED")]
    seed: u64,

    /// Network name for report rows; defaults to the input file stem
    #[arg(long, env = "NETGROUPS_NETWORK")]
    network: Option<String>,
}

fn load_graph(path: &Path) -> CliResult<(Graph, LoadStats)> {
    let file = File::open(path)
        .map_err(|e| CliError::Io(format!("cannot open {}: {e}", path.display())))?;
    Ok(load_edge_list(
        BufReader::new(file),
        LoadOptions::default(),
    )?)
}

fn network_name(explicit: &Option<String>, path: &Path) -> String {
    explicit.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "network".to_string())
    })
}

fn write_csv(path: &Path, comment: &str, header: &str, rows: &[String]) -> CliResult<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "# {comment}")?;
    writeln!(out, "{header}")?;
    for row in rows {
        writeln!(out, "{row}")?;
    }
    Ok(())
}

fn cmd_sample(args: &SampleArgs) -> CliResult<()> {
    let (graph, stats) = load_graph(&args.input)?;
    let cfg = SamplerConfig::new(args.method, args.fraction, args.seed);
    let sampled = sample(&graph, &cfg)?;

    let comments = vec![
        format!(
            "sampled edge list: method={} fraction={} seed={}",
            cfg.method, cfg.fraction, cfg.seed
        ),
        format!(
            "source_nodes={} source_links={} sampled_nodes={} sampled_links={}",
            graph.node_count(),
            graph.link_count(),
            sampled.node_count(),
            sampled.link_count()
        ),
        format!(
            "config: {}",
            serde_json::to_string(&cfg).expect("config serializes")
        ),
    ];
    let mut out = BufWriter::new(File::create(&args.output)?);
    sampled.write_edge_list(&mut out, &comments)?;
    out.flush()?;

    println!(
        "loaded {} nodes, {} links ({} duplicates collapsed, {} self-loops dropped)",
        graph.node_count(),
        graph.link_count(),
        stats.duplicates_collapsed,
        stats.self_loops_dropped
    );
    println!(
        "sampled {} nodes, {} links with {} -> {}",
        sampled.node_count(),
        sampled.link_count(),
        cfg.method,
        args.output.display()
    );
    Ok(())
}

fn cmd_extract(args: &ExtractArgs) -> CliResult<()> {
    let (graph, stats) = load_graph(&args.input)?;
    println!(
        "loaded {} nodes, {} links ({} duplicates collapsed, {} self-loops dropped)",
        graph.node_count(),
        graph.link_count(),
        stats.duplicates_collapsed,
        stats.self_loops_dropped
    );
    let cfg = args.extraction.to_config(args.seed);
    let result: ExtractionResult<Score> = extract_all(&graph, &cfg)?;

    let background_path = args.background.clone().unwrap_or_else(|| {
        let stem = args
            .output
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "groups".to_string());
        args.output
            .with_file_name(format!("{stem}.background.edges"))
    });
    let background_ref = background_path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned());

    let mut bg = BufWriter::new(File::create(&background_path)?);
    result.background.write_edge_list(
        &mut bg,
        &[format!(
            "background after extraction: config: {}",
            serde_json::to_string(&cfg).expect("config serializes")
        )],
    )?;
    bg.flush()?;

    result
        .to_groups_file(background_ref)
        .write_json(&args.output)?;

    let count = |ty: GroupType| result.groups.iter().filter(|g| g.group_type == ty).count();
    println!(
        "extracted {} groups ({} communities, {} mixtures, {} modules); background {} nodes, {} links",
        result.groups.len(),
        count(GroupType::Community),
        count(GroupType::Mixture),
        count(GroupType::Module),
        result.background.node_count(),
        result.background.link_count()
    );
    println!(
        "groups -> {}; background -> {}",
        args.output.display(),
        background_path.display()
    );
    Ok(())
}

fn cmd_analyze(args: &AnalyzeArgs) -> CliResult<()> {
    let (graph, _) = load_graph(&args.graph)?;
    let groups_file = GroupsFile::<Score>::read_json(&args.groups)?;
    let network = network_name(&args.network, &args.graph);

    let summary = summarize_groups(&groups_file.groups);
    let cov = coverage_groups(&groups_file.groups, &groups_file.provenance, &graph)?;

    std::fs::create_dir_all(&args.output)?;
    let echo = format!(
        "config: {}",
        serde_json::to_string(&serde_json::json!({
            "network": network,
            "rescale_w": args.rescale_w,
            "bins": 50,
            "provenance": groups_file.provenance,
        }))
        .expect("echo serializes")
    );

    write_csv(
        &args.output.join("summary.csv"),
        &echo,
        &format!("network,{SUMMARY_COLUMNS}"),
        &[format!(
            "{},{}",
            network,
            summary_values(&summary).join(",")
        )],
    )?;
    write_csv(
        &args.output.join("coverage.csv"),
        &echo,
        &format!("network,{COVERAGE_COLUMNS}"),
        &[format!("{},{}", network, coverage_values(&cov).join(","))],
    )?;

    let tau_values: Vec<Score> = groups_file.groups.iter().map(|g| g.tau).collect();
    let tau_hist = histogram(&tau_values, 50, (0.0, 1.0));
    write_csv(
        &args.output.join("tau_hist.csv"),
        &echo,
        "bin_center,density",
        &histogram_rows(&tau_hist),
    )?;

    let mut w_values: Vec<Score> = groups_file.groups.iter().map(|g| g.w).collect();
    if let Some(fraction) = args.rescale_w {
        w_values = rescale_w(&w_values, fraction);
    }
    let (lo, hi) = w_values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let range = if w_values.is_empty() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    };
    let w_hist = histogram(&w_values, 50, range);
    write_csv(
        &args.output.join("w_hist.csv"),
        &echo,
        "bin_center,density",
        &histogram_rows(&w_hist),
    )?;

    // machine-readable companion to the CSV tables
    let report = serde_json::json!({
        "network": network,
        "rescale_w": args.rescale_w,
        "provenance": groups_file.provenance,
        "summary": summary,
        "coverage": cov,
        "tau_histogram": tau_hist,
        "w_histogram": w_hist,
    });
    serde_json::to_writer_pretty(
        BufWriter::new(File::create(args.output.join("report.json"))?),
        &report,
    )
    .map_err(|e| CliError::Compute(e.to_string()))?;

    println!(
        "analyzed {} groups of {} -> {}",
        groups_file.groups.len(),
        network,
        args.output.display()
    );
    Ok(())
}

fn cmd_pipeline(args: &PipelineArgs) -> CliResult<()> {
    let (graph, _) = load_graph(&args.input)?;
    let cfg = PipelineConfig {
        network: network_name(&args.network, &args.input),
        methods: args.method.clone(),
        fraction: args.fraction,
        runs: args.runs,
        extraction: args.extraction.to_config(0),
        master_seed: args.seed,
    };
    let outcome = run_pipeline(&graph, &cfg, &args.output)?;

    for aggregate in &outcome.aggregates {
        println!(
            "{} {}: {} runs ok, mean groups {:.2}, mean tau {:.3}",
            cfg.network,
            aggregate.method,
            aggregate.runs_ok,
            aggregate.summary.group_count,
            aggregate.summary.mean_tau
        );
    }
    let failed = outcome.records.iter().filter(|r| r.status != "ok").count();
    if failed > 0 {
        println!("{failed} runs failed; see runs.csv");
    }
    println!("pipeline outputs -> {}", args.output.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sample(args) => cmd_sample(args),
        Command::Extract(args) => cmd_extract(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Pipeline(args) => cmd_pipeline(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}
