//! Command-line front end. `main.rs` only forwards to [`run`].

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::bowtie::{bowtie_decompose, strongly_connected_components, write_size_report, CoreRule};
use crate::centrality::{
    alpha_centrality, bonacich_centrality, eigenvector_centrality, total_portfolio_series, AdjacencyOptions,
    CentralityEngine, CentralityVector, Measure,
};
use crate::compare::{rank_nodes, ranked_value_table, write_jaccard_curves, write_ranked_table};
use crate::error::{Error, Result};
use crate::graph::{header_writer, load_edge_list_files, LoadOptions, NodeValues, WeightedDigraph};
use crate::influence::{influence_index_with, InfluenceOptions};
use crate::reduce::{coverage_report, reduce_network};
use crate::solver::SolverConfig;
use crate::synth::{generate, BowTieSpec};
use crate::validate::validate;

/// Cores larger than this make the influence index slow.
const INFLUENCE_CORE_WARNING: usize = 30;

#[derive(Debug, Parser)]
#[command(name = "bowtie", version, about = "Bow-tie decomposition and centralities for weighted digraphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Worker threads (default: available parallelism). 1 gives byte-reproducible output.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Load graphs even if weights fall outside [0, 1] or columns sum above 1.
    #[arg(long, global = true)]
    pub allow_invalid: bool,
    /// Allow a single node without a self-loop as the core when no cycle exists.
    #[arg(long, global = true)]
    pub allow_trivial_core: bool,
    /// Seed for generators.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Relative residual tolerance of the resolvent solver.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Edge list CSV with columns source,target,weight.
    #[arg(long)]
    pub edges: PathBuf,
    /// Node value CSV with columns node,value (missing nodes get 0).
    #[arg(long)]
    pub values: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print bow-tie class sizes, optionally writing per-node classes.
    Decompose {
        #[command(flatten)]
        input: InputArgs,
        /// Write `node,class` rows here.
        #[arg(long)]
        classes: Option<PathBuf>,
    },
    /// Check column sums, weight ranges and the leak condition; exit 1 on failure.
    Validate {
        #[command(flatten)]
        input: InputArgs,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Compute one centrality measure and write `node,score`.
    Centrality {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "access")]
        measure: Measure,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        /// Baselines use W instead of the 0/1 adjacency.
        #[arg(long)]
        weighted: bool,
        /// Baselines use the transposed adjacency.
        #[arg(long)]
        transpose: bool,
        /// Baselines treat every edge as undirected.
        #[arg(long)]
        undirected: bool,
        /// Only the K highest-scoring nodes, in rank order.
        #[arg(long)]
        top: Option<usize>,
        /// Fixed number of decimals (default: shortest round-trip representation).
        #[arg(long)]
        precision: Option<usize>,
        /// Give up on the influence index after this many seconds.
        #[arg(long)]
        influence_timeout: Option<f64>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Truncated Jaccard curves between the rankings of several measures.
    Compare {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_delimiter = ',', default_value = "access,corrected,bowtie,influence")]
        measures: Vec<Measure>,
        /// Rank only nodes with a positive score.
        #[arg(long)]
        positive_only: bool,
        /// Also write a ranked value table (`measure,rank,node,score`) here.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        top: Option<usize>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Keep IN, the core and OUT nodes with value >= threshold; print coverage as JSON.
    Reduce {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        threshold: f64,
        #[arg(long)]
        out_edges: PathBuf,
        #[arg(long)]
        out_values: PathBuf,
        /// Write `node,old_index,new_index` here.
        #[arg(long)]
        mapping: Option<PathBuf>,
    },
    /// Generate a synthetic bow-tie network.
    Generate {
        /// JSON generator spec; omitted fields take defaults.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        out_edges: PathBuf,
        #[arg(long)]
        out_values: PathBuf,
        /// Write the planted `node,class` rows here.
        #[arg(long)]
        classes: Option<PathBuf>,
    },
    /// Decompose, reduce, score, compare and rank in one run driven by a JSON config.
    Report {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportInput {
    pub edges: PathBuf,
    pub values: Option<PathBuf>,
}

fn default_report_measures() -> Vec<Measure> {
    vec![Measure::Access, Measure::Corrected, Measure::Bowtie, Measure::Influence]
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportConfig {
    pub input: ReportInput,
    /// OUT value threshold of the reduction.
    pub threshold: f64,
    #[serde(default = "default_report_measures")]
    pub measures: Vec<Measure>,
    pub output_dir: PathBuf,
    /// Rows per measure in the ranked table (default all).
    #[serde(default)]
    pub top: Option<usize>,
    #[serde(default)]
    pub precision: Option<usize>,
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Err(e) = configure_threads(cli.global.threads) {
        eprintln!("error: {e}");
        return 2;
    }
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn configure_threads(threads: Option<usize>) -> std::result::Result<(), String> {
    let Some(n) = threads else {
        return Ok(());
    };
    if n == 0 {
        return Err("--threads must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())?;
    faer::set_global_parallelism(if n == 1 { faer::Par::Seq } else { faer::Par::rayon(n) });
    Ok(())
}

impl GlobalArgs {
    fn solver(&self) -> SolverConfig {
        match self.tol {
            Some(t) => SolverConfig::default().with_tolerance(t),
            None => SolverConfig::default(),
        }
    }

    fn load(&self, edges: &Path, values: Option<&Path>) -> Result<(WeightedDigraph, NodeValues)> {
        load_edge_list_files(
            edges,
            values,
            LoadOptions {
                allow_invalid: self.allow_invalid,
            },
        )
    }

    fn engine<'g>(&self, graph: &'g WeightedDigraph) -> Result<CentralityEngine<'g>> {
        if self.allow_invalid {
            Ok(CentralityEngine::new_unchecked(
                graph,
                strongly_connected_components(graph),
                self.solver(),
            ))
        } else {
            CentralityEngine::new(graph, self.solver())
        }
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Parameters for measures beyond the four value-weighted ones.
#[derive(Debug, Clone, Copy, Default)]
struct MeasureParams {
    alpha: f64,
    beta: f64,
    adjacency: AdjacencyOptions,
    influence_timeout: Option<Duration>,
}

fn compute(engine: &CentralityEngine<'_>, v: &NodeValues, measure: Measure, p: MeasureParams) -> Result<CentralityVector> {
    let graph = engine.graph();
    let config = *engine.config();
    match measure {
        Measure::Access => engine.access(v),
        Measure::Corrected => engine.corrected(v),
        Measure::Bowtie => engine.bowtie(v),
        Measure::Influence => {
            let largest = engine
                .partition()
                .largest()
                .map_or(0, |s| engine.partition().members(s).len());
            if largest > INFLUENCE_CORE_WARNING {
                log::warn!(
                    "influence index on a strongly connected component of {largest} nodes may take very long"
                );
            }
            let opts = InfluenceOptions {
                time_budget: p.influence_timeout,
            };
            influence_index_with(graph, v, engine.partition(), opts)
        }
        Measure::Eigenvector => Ok(eigenvector_centrality(graph, p.adjacency, config)?.centrality),
        Measure::Alpha => alpha_centrality(graph, p.alpha, &vec![1.0; graph.node_count()], p.adjacency, config),
        Measure::Hubbell => engine.hubbell(v.as_slice()),
        Measure::BonacichAb => bonacich_centrality(graph, p.alpha, p.beta, None, p.adjacency, config),
        Measure::PortfolioDir => engine.direct_portfolio(v),
        Measure::PortfolioTot => total_portfolio_series(graph, v, config),
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let g = &cli.global;
    match &cli.command {
        Command::Decompose { input, classes } => {
            let (graph, _) = g.load(&input.edges, input.values.as_deref())?;
            let partition = strongly_connected_components(&graph);
            let d = bowtie_decompose(&graph, &partition, CoreRule::LargestScc, g.allow_trivial_core)?;
            if let Some(path) = classes {
                d.write_classes(&graph, create(path)?)?;
            }
            write_size_report(&d, output(None)?)?;
            Ok(0)
        }
        Command::Validate { input, json } => {
            let (graph, _) = g.load(&input.edges, input.values.as_deref())?;
            let report = validate(&graph);
            let mut out = output(None)?;
            if *json {
                serde_json::to_writer_pretty(&mut out, &report)?;
                writeln!(out)?;
            } else {
                writeln!(out, "nodes: {}, edges: {}", graph.node_count(), graph.edge_count())?;
                writeln!(out, "spectral radius estimate: {:.6}", report.spectral_radius_estimate)?;
                for (node, excess) in &report.column_sum_violations {
                    writeln!(out, "column sum violation: {} exceeds 1 by {excess:e}", graph.label(*node))?;
                }
                for w in &report.weight_range_violations {
                    writeln!(out, "weight out of range: {w}")?;
                }
                for p in report.perron_failures() {
                    let labels: Vec<&str> = report_members(&graph, p.scc);
                    writeln!(out, "perron violation: component {{{}}} has no leaking node", labels.join(","))?;
                }
                writeln!(out, "{}", if report.passed() { "ok" } else { "FAILED" })?;
            }
            out.flush()?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Centrality {
            input,
            measure,
            alpha,
            beta,
            weighted,
            transpose,
            undirected,
            top,
            precision,
            influence_timeout,
            output: path,
        } => {
            let (graph, values) = g.load(&input.edges, input.values.as_deref())?;
            let engine = g.engine(&graph)?;
            let params = MeasureParams {
                alpha: *alpha,
                beta: *beta,
                adjacency: AdjacencyOptions {
                    weighted: *weighted,
                    transpose: *transpose,
                    undirected: *undirected,
                },
                influence_timeout: influence_timeout.map(Duration::from_secs_f64),
            };
            let c = compute(&engine, &values, *measure, params)?;
            let out = output(path.as_deref())?;
            match top {
                None => c.write_csv(&graph, out, *precision)?,
                Some(k) => {
                    let ranking = rank_nodes(&c, false)?;
                    let mut w = header_writer(out)?;
                    w.write_record(["node", "score"])?;
                    for (node, score) in ranking.order.iter().zip(&ranking.scores).take(*k) {
                        w.write_record([graph.label(*node), &crate::centrality::format_score(*score, *precision)])?;
                    }
                    w.flush()?;
                }
            }
            Ok(0)
        }
        Command::Compare {
            input,
            measures,
            positive_only,
            table,
            top,
            output: path,
        } => {
            let (graph, values) = g.load(&input.edges, input.values.as_deref())?;
            let engine = g.engine(&graph)?;
            let rankings = measures
                .iter()
                .map(|&m| rank_nodes(&compute(&engine, &values, m, MeasureParams::default())?, *positive_only))
                .collect::<Result<Vec<_>>>()?;
            write_jaccard_curves(&rankings, output(path.as_deref())?)?;
            if let Some(t) = table {
                write_ranked_table(&graph, &ranked_value_table(&rankings, *top), create(t)?, None)?;
            }
            Ok(0)
        }
        Command::Reduce {
            input,
            threshold,
            out_edges,
            out_values,
            mapping,
        } => {
            let (graph, values) = g.load(&input.edges, input.values.as_deref())?;
            let partition = strongly_connected_components(&graph);
            let d = bowtie_decompose(&graph, &partition, CoreRule::LargestScc, g.allow_trivial_core)?;
            let reduced = reduce_network(&graph, &values, &d, *threshold)?;
            reduced.graph.write_edge_list(create(out_edges)?)?;
            reduced.values.write_csv(&reduced.graph, create(out_values)?)?;
            if let Some(m) = mapping {
                reduced.write_mapping(create(m)?)?;
            }
            let mut out = output(None)?;
            serde_json::to_writer_pretty(&mut out, &coverage_report(&values, &reduced.values))?;
            writeln!(out)?;
            out.flush()?;
            Ok(0)
        }
        Command::Generate {
            spec,
            out_edges,
            out_values,
            classes,
        } => {
            let mut s: BowTieSpec = match spec {
                Some(p) => serde_json::from_reader(io::BufReader::new(File::open(p)?))?,
                None => BowTieSpec::default(),
            };
            if let Some(seed) = g.seed {
                s.seed = seed;
            }
            let net = generate(&s)?;
            net.graph.write_edge_list(create(out_edges)?)?;
            net.values.write_csv(&net.graph, create(out_values)?)?;
            if let Some(c) = classes {
                let mut w = header_writer(create(c)?)?;
                w.write_record(["node", "class"])?;
                for (label, class) in net.graph.labels().iter().zip(&net.planted) {
                    w.write_record([label.as_str(), class.as_str()])?;
                }
                w.flush()?;
            }
            Ok(0)
        }
        Command::Report { config } => {
            let cfg: ReportConfig = serde_json::from_reader(io::BufReader::new(File::open(config)?))?;
            let base = config.parent().unwrap_or(Path::new("."));
            report(g, &cfg, base)?;
            Ok(0)
        }
    }
}

fn report_members(graph: &WeightedDigraph, scc: crate::bowtie::SccId) -> Vec<&str> {
    strongly_connected_components(graph)
        .members(scc)
        .iter()
        .map(|&n| graph.label(n))
        .collect()
}

/// Relative paths in a report config resolve against the config file's directory.
fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn report(g: &GlobalArgs, cfg: &ReportConfig, base: &Path) -> Result<()> {
    if cfg.measures.is_empty() {
        return Err(Error::Config("report needs at least one measure".into()));
    }
    let dir = resolve(base, &cfg.output_dir);
    fs::create_dir_all(&dir)?;
    let edges = resolve(base, &cfg.input.edges);
    let values = cfg.input.values.as_ref().map(|v| resolve(base, v));
    let (graph, v) = g.load(&edges, values.as_deref())?;

    let partition = strongly_connected_components(&graph);
    let d = bowtie_decompose(&graph, &partition, CoreRule::LargestScc, g.allow_trivial_core)?;
    d.write_classes(&graph, create(&dir.join("classes.csv"))?)?;
    write_size_report(&d, create(&dir.join("sizes.csv"))?)?;

    let reduced = reduce_network(&graph, &v, &d, cfg.threshold)?;
    reduced.graph.write_edge_list(create(&dir.join("reduced_edges.csv"))?)?;
    reduced.values.write_csv(&reduced.graph, create(&dir.join("reduced_values.csv"))?)?;
    reduced.write_mapping(create(&dir.join("mapping.csv"))?)?;
    let mut cov = create(&dir.join("coverage.json"))?;
    serde_json::to_writer_pretty(&mut cov, &coverage_report(&v, &reduced.values))?;
    writeln!(cov)?;
    cov.flush()?;

    let engine = g.engine(&reduced.graph)?;
    let mut rankings = Vec::with_capacity(cfg.measures.len());
    for &m in &cfg.measures {
        let c = compute(&engine, &reduced.values, m, MeasureParams::default())?;
        c.write_csv(&reduced.graph, create(&dir.join(format!("centrality_{m}.csv")))?, cfg.precision)?;
        rankings.push(rank_nodes(&c, false)?);
    }
    write_jaccard_curves(&rankings, create(&dir.join("jaccard.csv"))?)?;
    write_ranked_table(
        &reduced.graph,
        &ranked_value_table(&rankings, cfg.top),
        create(&dir.join("ranked.csv"))?,
        cfg.precision,
    )?;
    Ok(())
}
