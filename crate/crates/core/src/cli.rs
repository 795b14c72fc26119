//! Command-line front end.
//!
//! Exit codes: 0 success, 2 validation error, 3 I/O error, 4 degenerate
//! statistics under `--strict`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::density::{EdgeRanking, Metric};
use crate::error::{Error, Result};
use crate::graph::{
    global_efficiency, local_efficiency, spread_condition_holds, threshold, weighted_density,
    weighted_efficiency, BinaryGraph, Coords, WeightedGraph,
};
use crate::io::{
    load_dataset, load_graph_json, load_node_signals, read_matrix_csv, render_graph,
    report_pipeline, standardize_weights, weighted_from_association, ExportFormat, GraphView,
    LoadedGraph, Manifest, NegativePolicy, ReportOptions,
};
use crate::modularity::greedy_modularity;
use crate::spn::{
    differential_spn_with, mean_spn_with, node_differential_spn_with, SpnResult, StudyDataset,
};
use crate::stats::Correction;
use crate::sweep::{edges_sweep, randomness_sweep, SweepResult, Topology};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_DEGENERATE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "spnet",
    version,
    about = "Statistical parametric networks and density-aware topology"
)]
pub struct Cli {
    /// Treat degenerate statistics (zero residual variance) as errors.
    #[arg(long, global = true)]
    pub strict: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Summary networks from a study manifest.
    #[command(subcommand)]
    Spn(SpnCommand),
    /// Weighted and thresholded metrics of a single graph.
    Metrics(MetricsArgs),
    /// Density-integrated metric of a weighted graph.
    DensityProfile(ProfileArgs),
    /// Modularity simulations.
    #[command(subcommand)]
    Simulate(SimulateCommand),
    /// Full reporting pipeline over a study manifest.
    Report(ReportArgs),
}

#[derive(Debug, Subcommand)]
pub enum SpnCommand {
    /// Mean SPN per condition.
    Mean {
        #[command(flatten)]
        study: StudyArgs,
        /// Condition label or index; all conditions when omitted.
        #[arg(long)]
        condition: Option<String>,
    },
    /// Upweighted and downweighted differential SPNs.
    Diff {
        #[command(flatten)]
        study: StudyArgs,
    },
    /// Node-level differential SPNs from the manifest's signal table.
    NodeDiff {
        #[command(flatten)]
        study: StudyArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum SimulateCommand {
    /// Module count against rewiring steps of a ring lattice.
    Rewire {
        #[arg(long, default_value_t = 112)]
        nodes: usize,
        #[arg(long, default_value_t = 600)]
        edges: usize,
        /// Comma-separated rewiring steps.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0,50,100,150,200,250,300,350,400,450,500"
        )]
        grid: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        replicates: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Module count against edge count.
    Edges {
        #[arg(long, default_value_t = 112)]
        nodes: usize,
        /// Comma-separated edge counts.
        #[arg(long, value_delimiter = ',', default_value = "100,600,1100,1600,2100")]
        grid: Vec<usize>,
        #[arg(long, value_parser = parse_topology, default_value = "random")]
        topology: Topology,
        #[arg(long, default_value_t = 100)]
        replicates: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, default_value = "spnet-out")]
    pub out_dir: PathBuf,
    #[arg(long, value_parser = parse_format, default_value = "json")]
    pub format: ExportFormat,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// FDR base rate; defaults to the manifest option (0.05).
    #[arg(long)]
    pub base_rate: Option<f64>,
    #[arg(long, value_parser = parse_correction, default_value = "fdr")]
    pub correction: Correction,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Association matrix (.csv) or graph document (.json).
    #[arg(long)]
    pub graph: PathBuf,
    /// Use absolute values of negative associations.
    #[arg(long)]
    pub abs: bool,
    /// Min-max standardize positive weights.
    #[arg(long)]
    pub standardize: bool,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// Also threshold at this value and report binary metrics.
    #[arg(long)]
    pub tau: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long, value_parser = parse_metric, default_value = "global_efficiency")]
    pub metric: Metric,
    /// Comma-separated edge counts; every k from 1 to the positive-edge count by default.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<usize>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub study: StudyArgs,
    #[arg(long, value_parser = parse_metric, default_value = "global_efficiency")]
    pub metric: Metric,
    #[arg(long)]
    pub abs: bool,
    #[arg(long)]
    pub standardize: bool,
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<usize>>,
}

fn parse_format(s: &str) -> Result<ExportFormat> {
    s.parse()
}

fn parse_metric(s: &str) -> Result<Metric> {
    s.parse()
}

fn parse_topology(s: &str) -> Result<Topology> {
    s.parse()
}

fn parse_correction(s: &str) -> Result<Correction> {
    match s {
        "fdr" => Ok(Correction::Fdr),
        "none" => Ok(Correction::None),
        other => Err(Error::Validation(format!("unknown correction `{other}`"))),
    }
}

/// Collects files and log lines for one run.
struct Run {
    out_dir: PathBuf,
    log: String,
    degenerate: usize,
}

impl Run {
    fn new(command: &str, out_dir: &Path) -> Result<Self> {
        fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
        Ok(Self {
            out_dir: out_dir.to_path_buf(),
            log: format!("spnet {command}\n"),
            degenerate: 0,
        })
    }

    fn config(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.log, "config {key} = {value}");
    }

    fn note(&mut self, line: impl std::fmt::Display) {
        let _ = writeln!(self.log, "{line}");
    }

    fn write(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.out_dir.join(name);
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        let _ = writeln!(self.log, "wrote {name}");
        println!("{}", path.display());
        Ok(())
    }

    fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.write(name, &s)
    }

    fn finish(mut self, strict: bool) -> Result<i32> {
        let code = if self.degenerate > 0 {
            let msg = format!(
                "warning: {} degenerate fits (zero residual variance)",
                self.degenerate
            );
            eprintln!("{msg}");
            self.note(&msg);
            if strict {
                EXIT_DEGENERATE
            } else {
                EXIT_OK
            }
        } else {
            EXIT_OK
        };
        self.note(format!("exit {code}"));
        let path = self.out_dir.join("run.log");
        fs::write(&path, &self.log).map_err(|e| Error::io(&path, e))?;
        Ok(code)
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            }
        }
    }
}

pub fn run(cli: Cli) -> i32 {
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Spn(SpnCommand::Mean { study, condition }) => {
            spn_mean(study, condition.as_deref(), cli.strict)
        }
        Command::Spn(SpnCommand::Diff { study }) => spn_diff(study, cli.strict),
        Command::Spn(SpnCommand::NodeDiff { study }) => spn_node_diff(study, cli.strict),
        Command::Metrics(args) => metrics(args, cli.strict),
        Command::DensityProfile(args) => density_profile(args, cli.strict),
        Command::Simulate(SimulateCommand::Rewire {
            nodes,
            edges,
            grid,
            replicates,
            output,
        }) => {
            let mut run = Run::new("simulate rewire", &output.out_dir)?;
            run.config("nodes", nodes);
            run.config("edges", edges);
            run.config("grid", join(grid));
            run.config("replicates", replicates);
            run.config("seed", output.seed);
            let sweep = randomness_sweep(*nodes, *edges, grid, *replicates, output.seed)?;
            write_sweep(&mut run, "rewire_sweep", &sweep, output.format)?;
            run.finish(cli.strict)
        }
        Command::Simulate(SimulateCommand::Edges {
            nodes,
            grid,
            topology,
            replicates,
            output,
        }) => {
            let mut run = Run::new("simulate edges", &output.out_dir)?;
            let name = match topology {
                Topology::Lattice => "lattice",
                Topology::Random => "random",
            };
            run.config("nodes", nodes);
            run.config("grid", join(grid));
            run.config("topology", name);
            run.config("replicates", replicates);
            run.config("seed", output.seed);
            let sweep = edges_sweep(*nodes, grid, *topology, *replicates, output.seed)?;
            write_sweep(
                &mut run,
                &format!("edges_sweep_{name}"),
                &sweep,
                output.format,
            )?;
            run.finish(cli.strict)
        }
        Command::Report(args) => report(args, cli.strict),
    }
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn write_sweep(run: &mut Run, stem: &str, sweep: &SweepResult, format: ExportFormat) -> Result<()> {
    run.write(&format!("{stem}.csv"), &sweep.to_csv_string()?)?;
    if format == ExportFormat::Json {
        run.write_json(&format!("{stem}.json"), sweep)?;
    }
    for row in &sweep.rows {
        run.note(format!(
            "parameter {} mean_modules {} sd_modules {}",
            row.parameter, row.mean_modules, row.sd_modules
        ));
    }
    Ok(())
}

fn open_study(study: &StudyArgs, run: &mut Run) -> Result<(Manifest, f64)> {
    let manifest = Manifest::from_path(&study.manifest)?;
    let base_rate = study.base_rate.unwrap_or(manifest.options.base_rate);
    if !(base_rate > 0.0 && base_rate < 1.0) {
        return Err(Error::Validation(format!(
            "base rate must lie in (0, 1), got {base_rate}"
        )));
    }
    run.config("manifest", study.manifest.display());
    run.config("base_rate", base_rate);
    run.config(
        "correction",
        match study.correction {
            Correction::Fdr => "fdr",
            Correction::None => "none",
        },
    );
    run.config("format", study.output.format.extension());
    run.config("seed", study.output.seed);
    Ok((manifest, base_rate))
}

fn write_spn(
    run: &mut Run,
    stem: &str,
    spn: &SpnResult,
    coords: Option<&[Coords]>,
    format: ExportFormat,
) -> Result<()> {
    run.degenerate = run.degenerate.max(spn.degenerate_fits);
    run.note(format!(
        "{stem}: {} hypotheses, {} rejected, {} members, {} unsigned",
        spn.hypotheses.len(),
        spn.correction.rejected_count(),
        spn.members().len(),
        spn.unsigned_significant.len()
    ));
    let name = format!("{stem}.{}", format.extension());
    match format {
        ExportFormat::Json => run.write_json(&name, spn),
        _ => {
            let view = GraphView::Binary {
                graph: &spn.network,
                coords,
            };
            run.write(&name, &render_graph(view, format)?)
        }
    }
}

fn resolve_condition(data: &StudyDataset, wanted: &str) -> Result<usize> {
    if let Some(i) = data.condition_labels().iter().position(|c| c == wanted) {
        return Ok(i);
    }
    match wanted.parse::<usize>() {
        Ok(i) if i < data.n_conditions() => Ok(i),
        _ => Err(Error::Validation(format!("unknown condition `{wanted}`"))),
    }
}

fn spn_mean(study: &StudyArgs, condition: Option<&str>, strict: bool) -> Result<i32> {
    let mut run = Run::new("spn mean", &study.output.out_dir)?;
    let (_, base_rate) = open_study(study, &mut run)?;
    let data = load_dataset(&study.manifest)?;
    let conditions: Vec<usize> = match condition {
        Some(c) => vec![resolve_condition(&data, c)?],
        None => (0..data.n_conditions()).collect(),
    };
    for c in conditions {
        run.config("condition", &data.condition_labels()[c]);
        let spn = mean_spn_with(&data, c, base_rate, study.correction)?;
        write_spn(
            &mut run,
            &format!("mean_spn_{c}"),
            &spn,
            data.node_coords(),
            study.output.format,
        )?;
    }
    run.finish(strict)
}

fn spn_diff(study: &StudyArgs, strict: bool) -> Result<i32> {
    let mut run = Run::new("spn diff", &study.output.out_dir)?;
    let (_, base_rate) = open_study(study, &mut run)?;
    let data = load_dataset(&study.manifest)?;
    let (plus, minus) = differential_spn_with(&data, base_rate, study.correction)?;
    let coords = data.node_coords();
    write_spn(
        &mut run,
        "diff_spn_plus",
        &plus,
        coords,
        study.output.format,
    )?;
    write_spn(
        &mut run,
        "diff_spn_minus",
        &minus,
        coords,
        study.output.format,
    )?;
    run.finish(strict)
}

fn spn_node_diff(study: &StudyArgs, strict: bool) -> Result<i32> {
    let mut run = Run::new("spn node-diff", &study.output.out_dir)?;
    let (_, base_rate) = open_study(study, &mut run)?;
    let data = load_node_signals(&study.manifest)?;
    let (up, down) = node_differential_spn_with(&data, base_rate, study.correction)?;
    for (stem, spn) in [("node_spn_plus", &up), ("node_spn_minus", &down)] {
        run.degenerate = run.degenerate.max(spn.degenerate_fits);
        run.note(format!("{stem}: {} flagged nodes", spn.flagged_nodes.len()));
    }
    match study.output.format {
        ExportFormat::Json => {
            run.write_json("node_spn_plus.json", &up)?;
            run.write_json("node_spn_minus.json", &down)?;
        }
        ExportFormat::Csv => {
            let mut text = String::from("node,label,direction\n");
            for (spn, dir) in [(&up, "up"), (&down, "down")] {
                for &v in &spn.flagged_nodes {
                    let _ = writeln!(text, "{v},{},{dir}", data.node_labels()[v]);
                }
            }
            run.write("node_spn.csv", &text)?;
        }
        ExportFormat::Dot => {
            let mut text = String::from("graph G {\n");
            for (v, label) in data.node_labels().iter().enumerate() {
                let flag = if up.flagged_nodes.contains(&v) {
                    "up"
                } else if down.flagged_nodes.contains(&v) {
                    "down"
                } else {
                    "none"
                };
                let _ = writeln!(
                    text,
                    "  \"{}\" [flag=\"{flag}\"];",
                    label.replace('"', "\\\"")
                );
            }
            text.push_str("}\n");
            run.write("node_spn.dot", &text)?;
        }
    }
    run.finish(strict)
}

fn load_input(input: &GraphInput) -> Result<LoadedGraph> {
    let is_json = input
        .graph
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let loaded = if is_json {
        load_graph_json(&input.graph)?
    } else {
        let m = read_matrix_csv(&input.graph)?;
        let policy = if input.abs {
            NegativePolicy::Absolute
        } else {
            NegativePolicy::Reject
        };
        LoadedGraph::Weighted(weighted_from_association(&m, policy)?)
    };
    match loaded {
        LoadedGraph::Weighted(g) if input.standardize => {
            Ok(LoadedGraph::Weighted(standardize_weights(&g)?))
        }
        other => Ok(other),
    }
}

fn record_input(run: &mut Run, input: &GraphInput) {
    run.config("graph", input.graph.display());
    run.config("abs", input.abs);
    run.config("standardize", input.standardize);
}

#[derive(Serialize)]
struct BinaryMetrics {
    edges: usize,
    global_efficiency: f64,
    local_efficiency: f64,
    modules: Option<usize>,
    modularity_q: Option<f64>,
}

impl BinaryMetrics {
    fn of(g: &BinaryGraph) -> Result<Self> {
        let partition = if g.edge_count() > 0 {
            Some(greedy_modularity(g)?)
        } else {
            None
        };
        Ok(Self {
            edges: g.edge_count(),
            global_efficiency: global_efficiency(g)?,
            local_efficiency: local_efficiency(g)?,
            modules: partition.as_ref().map(|p| p.module_count),
            modularity_q: partition.map(|p| p.q),
        })
    }
}

#[derive(Serialize)]
struct WeightedMetrics {
    nodes: usize,
    positive_edges: usize,
    weighted_density: f64,
    weighted_efficiency: f64,
    spread_condition: Option<bool>,
}

impl WeightedMetrics {
    fn of(g: &WeightedGraph) -> Result<Self> {
        Ok(Self {
            nodes: g.n(),
            positive_edges: g.positive_edge_count(),
            weighted_density: weighted_density(g)?,
            weighted_efficiency: weighted_efficiency(g)?,
            spread_condition: if g.positive_edge_count() > 0 {
                Some(spread_condition_holds(g)?)
            } else {
                None
            },
        })
    }
}

#[derive(Serialize)]
struct MetricsReport {
    weighted: Option<WeightedMetrics>,
    tau: Option<f64>,
    binary: Option<BinaryMetrics>,
}

fn metrics(args: &MetricsArgs, strict: bool) -> Result<i32> {
    let mut run = Run::new("metrics", &args.output.out_dir)?;
    record_input(&mut run, &args.input);
    if let Some(t) = args.tau {
        run.config("tau", t);
    }
    let report = match load_input(&args.input)? {
        LoadedGraph::Weighted(g) => MetricsReport {
            weighted: Some(WeightedMetrics::of(&g)?),
            tau: args.tau,
            binary: match args.tau {
                Some(t) => Some(BinaryMetrics::of(&threshold(g.weights(), t)?)?),
                None => None,
            },
        },
        LoadedGraph::Binary(g, _) => MetricsReport {
            weighted: None,
            tau: None,
            binary: Some(BinaryMetrics::of(&g)?),
        },
    };
    run.write_json("metrics.json", &report)?;
    run.finish(strict)
}

fn density_profile(args: &ProfileArgs, strict: bool) -> Result<i32> {
    let mut run = Run::new("density-profile", &args.output.out_dir)?;
    record_input(&mut run, &args.input);
    run.config("metric", args.metric);
    if let Some(grid) = &args.grid {
        run.config("grid", join(grid));
    }
    let LoadedGraph::Weighted(g) = load_input(&args.input)? else {
        return Err(Error::Validation(
            "density profiles need a weighted graph".into(),
        ));
    };
    let metric = args.metric;
    let profile =
        EdgeRanking::of(&g).profile(|b| metric.evaluate(b), args.grid.as_deref(), None)?;
    run.note(format!("integrated {}", profile.integrated));
    match args.output.format {
        ExportFormat::Json => run.write_json("profile.json", &profile)?,
        _ => {
            let mut text = String::from("k,value,weight\n");
            for ((k, v), w) in profile
                .densities
                .iter()
                .zip(&profile.values)
                .zip(&profile.weights)
            {
                let _ = writeln!(text, "{k},{v},{w}");
            }
            run.write("profile.csv", &text)?;
        }
    }
    run.finish(strict)
}

fn report(args: &ReportArgs, strict: bool) -> Result<i32> {
    let mut run = Run::new("report", &args.study.output.out_dir)?;
    let (manifest, base_rate) = open_study(&args.study, &mut run)?;
    let abs = args.abs || manifest.options.abs;
    let standardize = args.standardize || manifest.options.standardize;
    let grid = args.grid.clone().or(manifest.options.density_grid.clone());
    run.config("metric", args.metric);
    run.config("abs", abs);
    run.config("standardize", standardize);
    if let Some(g) = &grid {
        run.config("grid", join(g));
    }
    let data = load_dataset(&args.study.manifest)?;
    let options = ReportOptions {
        base_rate,
        correction: args.study.correction,
        metric: args.metric,
        density_grid: grid,
        negative_policy: if abs {
            NegativePolicy::Absolute
        } else {
            NegativePolicy::Reject
        },
        standardize,
    };
    let bundle = report_pipeline(&data, &options)?;
    run.degenerate = bundle.degenerate_fits();
    for path in bundle.write_to(&run.out_dir, data.node_coords())? {
        let name = path
            .file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned();
        run.note(format!("wrote {name}"));
        println!("{}", path.display());
    }
    run.finish(strict)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_subcommands() {
        let cli = Cli::try_parse_from([
            "spnet",
            "simulate",
            "edges",
            "--topology",
            "lattice",
            "--grid",
            "10,20",
            "--out-dir",
            "x",
        ])
        .unwrap();
        match cli.command {
            Command::Simulate(SimulateCommand::Edges { topology, grid, .. }) => {
                assert_eq!(topology, Topology::Lattice);
                assert_eq!(grid, vec![10, 20]);
            }
            other => panic!("unexpected {other:?}"),
        }
        let cli = Cli::try_parse_from(["spnet", "--strict", "spn", "diff", "--manifest", "m.json"])
            .unwrap();
        assert!(cli.strict);
    }

    #[test]
    fn bad_arguments_are_validation_errors() {
        assert_eq!(
            run_from_args(["spnet", "simulate", "edges", "--topology", "ring"]),
            EXIT_VALIDATION
        );
        assert_eq!(run_from_args(["spnet", "bogus"]), EXIT_VALIDATION);
    }
}
