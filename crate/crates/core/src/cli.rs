//! The `normdyn` command-line interface.
//!
//! Exit codes: 0 on success, 1 for usage or configuration errors, 2 for I/O
//! failures.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::config::{parse_config, preset, ConfigDocument, PRESET_NAMES};
use crate::engine::{self, derive_seed, ScenarioConfig, Trajectory};
use crate::error::{Error, Result};
use crate::graph::{self, Graph};
use crate::metrics::{summarize, DEFAULT_CLUSTER_GAP};
use crate::sweep::{boundary_report, run_sweep, SweepResult, SweepSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "normdyn", version, about = "Opinion–action coevolution simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one simulation and write trajectory.csv and summary.json.
    Run {
        /// Preset name (see `normdyn presets`).
        preset: Option<String>,
        /// Preset name or path to a JSON scenario document.
        #[arg(long)]
        config: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Stop early once no value moves by this much in a step.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_CLUSTER_GAP)]
        cluster_gap: f64,
    },
    /// Run a parameter sweep and write sweep.csv and boundary_report.json.
    Sweep {
        preset: Option<String>,
        #[arg(long)]
        config: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Worker threads.
        #[arg(short = 'j', long = "jobs", default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        tol: Option<f64>,
        /// Mean-discrepancy threshold for the boundary report.
        #[arg(long, default_value_t = 0.01)]
        threshold: f64,
    },
    /// Generate a network and write it as an edge list.
    Netgen {
        #[command(subcommand)]
        topology: NetSpec,
        #[arg(long, global = true, default_value_t = 0)]
        seed: u64,
        #[arg(long, global = true, default_value = "graph.edges")]
        out: PathBuf,
    },
    /// List the built-in presets.
    Presets,
}

#[derive(Debug, Subcommand)]
enum NetSpec {
    /// Complete graph K_n.
    Complete { n: usize },
    /// Watts–Strogatz small world SW(n, k, p).
    Sw { n: usize, k: usize, p: f64 },
    /// Barabási–Albert scale free SF(n, m0, m).
    Sf { n: usize, m0: usize, m: usize },
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_io() {
                EXIT_IO
            } else {
                EXIT_CONFIG
            }
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run {
            preset,
            config,
            seed,
            out,
            tol,
            cluster_gap,
        } => {
            let mut cfg = match load(preset, config, seed)? {
                ConfigDocument::Scenario(c) => c,
                ConfigDocument::Sweep(_) => {
                    return Err(Error::config("`run` needs a scenario; use `sweep` for sweep documents"))
                }
            };
            if let Some(tol) = tol {
                cfg.convergence_tol = tol;
            }
            cmd_run(&cfg, &out, cluster_gap)
        }
        Command::Sweep {
            preset,
            config,
            seed,
            out,
            jobs,
            tol,
            threshold,
        } => {
            let mut spec = match load(preset, config, seed)? {
                ConfigDocument::Sweep(s) => s,
                ConfigDocument::Scenario(_) => {
                    return Err(Error::config("`sweep` needs a sweep document (one with a `base` key)"))
                }
            };
            if let Some(tol) = tol {
                spec.base.convergence_tol = tol;
            }
            cmd_sweep(&spec, &out, jobs, threshold)
        }
        Command::Netgen { topology, seed, out } => cmd_netgen(&topology, seed, &out),
        Command::Presets => {
            for name in PRESET_NAMES {
                println!("{name}");
            }
            Ok(())
        }
    }
}

/// Resolves a preset name or config path. An explicit seed overrides the
/// document's; presets otherwise use seed 0.
fn load(positional: Option<String>, config: Option<String>, seed: Option<u64>) -> Result<ConfigDocument> {
    let source = match (positional, config) {
        (Some(_), Some(_)) => return Err(Error::config("give either a preset or --config, not both")),
        (Some(s), None) | (None, Some(s)) => s,
        (None, None) => return Err(Error::config("missing preset or --config")),
    };
    let doc = match preset(&source, seed.unwrap_or(0)) {
        Some(doc) => doc,
        None => {
            let path = Path::new(&source);
            if !path.exists() {
                return Err(Error::config(format!(
                    "{source:?} is neither a preset ({}) nor an existing file",
                    PRESET_NAMES.join(", ")
                )));
            }
            parse_config(File::open(path)?)?
        }
    };
    Ok(match seed {
        Some(s) => doc.with_seed(s),
        None => doc,
    })
}

/// Reals are written with 17 significant digits so that re-reading them is exact.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes the long-format trajectory table `step,agent,opinion,action,discrepancy`.
pub fn write_trajectory_csv<W: Write>(trajectory: &Trajectory, mut sink: W) -> Result<()> {
    writeln!(sink, "step,agent,opinion,action,discrepancy")?;
    for (t, ((xs, ys), ds)) in trajectory
        .opinions
        .iter()
        .zip(&trajectory.actions)
        .zip(&trajectory.discrepancies)
        .enumerate()
    {
        for (i, ((x, y), d)) in xs.iter().zip(ys).zip(ds).enumerate() {
            writeln!(sink, "{t},{i},{},{},{}", format_real(*x), format_real(*y), format_real(*d))?;
        }
    }
    sink.flush()?;
    Ok(())
}

/// Writes `epsilon,phi,mean_D,std_D,runs`, one row per grid cell.
pub fn write_sweep_csv<W: Write>(result: &SweepResult, mut sink: W) -> Result<()> {
    writeln!(sink, "epsilon,phi,mean_D,std_D,runs")?;
    for c in &result.cells {
        writeln!(
            sink,
            "{},{},{},{},{}",
            format_real(c.epsilon),
            format_real(c.phi),
            format_real(c.mean_d),
            format_real(c.std_d),
            c.runs
        )?;
    }
    sink.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value).map_err(std::io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn graph_info(graph: &Graph) -> serde_json::Value {
    json!({
        "nodes": graph.node_count(),
        "edges": graph.edge_count(),
        "max_degree": graph.max_degree(),
        "components": graph.component_count(),
    })
}

pub fn cmd_run(config: &ScenarioConfig, out: &Path, cluster_gap: f64) -> Result<()> {
    let scenario = engine::build_population(config)?;
    let mut trajectory = engine::run_scenario(&scenario, config.horizon, config.convergence_tol)?;
    trajectory.metadata.config = Some(config.clone());
    trajectory.metadata.seed = Some(config.seed);
    let summary = summarize(&trajectory, cluster_gap)?;

    fs::create_dir_all(out)?;
    write_trajectory_csv(&trajectory, BufWriter::new(File::create(out.join("trajectory.csv"))?))?;
    if !config.topology.is_complete() {
        graph::write_edge_list(&scenario.graph, BufWriter::new(File::create(out.join("graph.edges"))?))?;
    }
    write_json(
        &out.join("summary.json"),
        &json!({
            "config": config,
            "seed": config.seed,
            "stop_reason": trajectory.metadata.stop_reason,
            "steps": trajectory.metadata.steps,
            "graph": graph_info(&scenario.graph),
            "innovator_count": trajectory.metadata.innovator_count,
            "cluster_gap": cluster_gap,
            "summary": summary,
        }),
    )?;
    println!("{}", summary.digest());
    Ok(())
}

pub fn cmd_sweep(spec: &SweepSpec, out: &Path, jobs: usize, threshold: f64) -> Result<()> {
    let result = run_sweep(spec, jobs)?;
    let report = boundary_report(&result, threshold);
    fs::create_dir_all(out)?;
    write_sweep_csv(&result, BufWriter::new(File::create(out.join("sweep.csv"))?))?;
    write_json(
        &out.join("boundary_report.json"),
        &json!({
            "spec": spec,
            "seed": spec.seed,
            "report": report,
        }),
    )?;
    println!(
        "cells={} above={} (misclassified {}) below={} (misclassified {}) consistency={:.4}",
        result.cells.len(),
        report.above.cells,
        report.misclassified_above,
        report.below.cells,
        report.misclassified_below,
        report.consistency_fraction
    );
    Ok(())
}

fn cmd_netgen(spec: &NetSpec, seed: u64, out: &Path) -> Result<()> {
    let topology_seed = derive_seed(seed, "topology", &[]);
    let graph = match *spec {
        NetSpec::Complete { n } => graph::complete_graph(n)?,
        NetSpec::Sw { n, k, p } => {
            engine::Topology::SmallWorld { k, p }.build(n, topology_seed)?
        }
        NetSpec::Sf { n, m0, m } => engine::Topology::ScaleFree { m0, m }.build(n, topology_seed)?,
    };
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    graph::write_edge_list(&graph, BufWriter::new(File::create(out)?))?;
    println!(
        "nodes={} edges={} max_degree={} components={}",
        graph.node_count(),
        graph.edge_count(),
        graph.max_degree(),
        graph.component_count()
    );
    Ok(())
}
