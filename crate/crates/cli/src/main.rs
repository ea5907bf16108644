mod commands;
mod output;
mod scenario;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;
use snl_core::{Error, Result};

use output::{emit_error, error_report, render, write_out, Format, Report};
use scenario::Params;

/// Stable norms on the torus, canyon metrics and lattice-polygon bounds.
#[derive(Parser, Debug)]
#[command(name = "snl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write the output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON file with default parameters; flags override it
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    #[command(flatten)]
    params: Params,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Lattice classes sorted by norm
    NormEnumerate,
    /// Geodesic graph of the first k classes
    GraphBuild,
    /// ζ, ε̃ and Θ of the geodesic graph
    GraphEpsilon,
    /// Marked length spectrum of a canyon graph
    CanyonSpectrum,
    /// Stable norm estimates of a canyon graph
    StableNorm,
    /// Least area of a convex lattice k-gon
    PolygonMinArea,
    /// Least interior count of a centrally symmetric lattice 2m-gon
    PolygonSymm,
    /// Multiplicity profile of a norm
    Multiplicity,
    /// Norm attaining the multiplicity bound for m
    Sharpness,
    /// Canyon stable norms for k = 2..k against the norm
    Convergence,
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("SNL_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Error::Validation(format!("SNL_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Validation(format!("cannot start {n} worker threads: {e}")))
}

fn run(command: Command, p: &Params) -> Result<Report> {
    match command {
        Command::NormEnumerate => commands::norm_enumerate(p),
        Command::GraphBuild => commands::graph_build(p),
        Command::GraphEpsilon => commands::graph_epsilon(p),
        Command::CanyonSpectrum => commands::canyon_spectrum(p),
        Command::StableNorm => commands::stable_norm(p),
        Command::PolygonMinArea => commands::polygon_min_area(p),
        Command::PolygonSymm => commands::polygon_symm(p),
        Command::Multiplicity => commands::multiplicity(p),
        Command::Sharpness => commands::sharpness(p),
        Command::Convergence => commands::convergence(p),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            emit_error(2, &json!({"error": {"kind": "usage", "message": first}}))
        }
    };
    let result = configure_threads()
        .and_then(|_| cli.params.clone().with_scenario(cli.scenario.as_ref()))
        .and_then(|p| run(cli.command, &p));
    match result {
        Ok(report) => {
            if let Err(e) = write_out(&render(&report, cli.format), cli.out.as_deref()) {
                emit_error(1, &json!({"error": {"kind": "io", "message": e.to_string()}}));
            }
        }
        Err(e) => {
            let (code, body) = error_report(&e);
            emit_error(code, &body)
        }
    }
}
