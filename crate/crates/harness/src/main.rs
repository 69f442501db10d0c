//! Command-line front end: generate instances, build spanners, verify hop
//! stretch, run experiment ladders, and render SVG previews.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hopspan::gen::{generate_instance, GenParams};
use hopspan::render::render_svg;
use hopspan::suite::{
    build_spanner, default_verify_mode, mode_label, run_suite, to_csv, ExperimentSpec,
};
use hopspan_core::error::{Error, Result};
use hopspan_core::graph::verify_hop_spanner;
use hopspan_core::{Instance, IntersectionGraph, Spanner};

#[derive(Parser)]
#[command(name = "hopspan", version, about = "bounded-hop spanners of geometric intersection graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a deterministic instance file.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// Defaults to HOPSPAN_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Build a spanner from an instance file.
    Build {
        #[arg(long)]
        construction: String,
        /// Level for the leveled constructions (string-III, fat-II).
        #[arg(long)]
        k: Option<u32>,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a spanner against its instance; exit 0 only when it passes.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        spanner: PathBuf,
        /// Override the declared stretch.
        #[arg(long)]
        t: Option<u64>,
    },
    /// Run an experiment ladder from a JSON spec and write a CSV.
    Bench {
        #[arg(long)]
        spec: PathBuf,
        /// Overrides the output_csv given in the experiment file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Render a 2-d instance and its spanner to SVG.
    Render {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        spanner: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn env_seed() -> u64 {
    std::env::var("HOPSPAN_SEED")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(0)
}

fn load_spanner(path: &PathBuf) -> Result<Spanner> {
    Spanner::from_json(&std::fs::read_to_string(path)?)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen { family, n, seed, output } => {
            let seed = seed.unwrap_or_else(env_seed);
            let inst = generate_instance(&family, n, &GenParams::new(), seed)?;
            inst.save(&output)?;
            println!(
                "wrote {} ({} objects, family {family}, seed {seed})",
                output.display(),
                inst.objects.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Build { construction, k, input, output } => {
            let inst = Instance::load(&input)?;
            let set = inst.to_set()?;
            let g = IntersectionGraph::from_objects(&set);
            let spanner = build_spanner(&construction, k, &set, &g)?;
            std::fs::write(&output, spanner.to_json())?;
            println!(
                "wrote {} ({} of {} graph edges kept, t={})",
                output.display(),
                spanner.edge_count(),
                g.m(),
                spanner.t
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { input, spanner, t } => {
            let inst = Instance::load(&input)?;
            let set = inst.to_set()?;
            let g = IntersectionGraph::from_objects(&set);
            let spanner = load_spanner(&spanner)?;
            let mode = default_verify_mode(g.n(), env_seed());
            let report = verify_hop_spanner(&g, &spanner, t, mode)?;
            println!(
                "ok={} t={} checked_edges={} max_required_hops={} mode={}",
                report.ok,
                report.t,
                report.checked_edges,
                report.max_required_hops,
                mode_label(mode)
            );
            if report.ok {
                Ok(ExitCode::SUCCESS)
            } else {
                for (u, v) in report.failed_edges.iter().take(8) {
                    eprintln!("edge ({u}, {v}) has no {}-hop path", report.t);
                }
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Bench { spec, output } => {
            let spec = ExperimentSpec::load(&spec)?;
            let path = output
                .or_else(|| spec.output_csv.clone().map(PathBuf::from))
                .ok_or_else(|| {
                    Error::Input("no CSV destination: pass -o or set output_csv".into())
                })?;
            let rows = run_suite(&spec)?;
            std::fs::write(&path, to_csv(&rows))?;
            let failures = rows.iter().filter(|r| !r.verified_ok).count();
            println!(
                "wrote {} ({} rows, {} failures)",
                path.display(),
                rows.len(),
                failures
            );
            Ok(if failures == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Render { input, spanner, output } => {
            let inst = Instance::load(&input)?;
            let spanner = load_spanner(&spanner)?;
            let svg = render_svg(&inst, &spanner)?;
            std::fs::write(&output, svg)?;
            println!("wrote {}", output.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
