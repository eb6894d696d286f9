//! Command-line frontend: reproduces the two reference figures, answers
//! bound-membership queries, traces individual frontiers, and runs the
//! hybrid-coding simulator and covering/packing experiments.

mod svg;
mod tasks;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "srcbcast",
    about = "Distortion-region bounds and simulations for source broadcast",
    version
)]
struct Cli {
    /// Output directory for emitted files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Data file format for frontiers.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Also emit an SVG plot where optional.
    #[arg(long, global = true)]
    svg: bool,

    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Sweep density (grid points per parameter axis).
    #[arg(long, global = true)]
    density: Option<usize>,

    /// Tau-chain grid size for outer-bound sweeps.
    #[arg(long, global = true, default_value_t = 4096)]
    tau_grid: usize,

    /// Alpha grid size for side-information outer bounds.
    #[arg(long, global = true, default_value_t = 9)]
    alpha_grid: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Gaussian source over a Gaussian broadcast channel: inner/outer
    /// frontiers, trivial corner, SVG overlay, and a containment report.
    Figure3 {
        #[arg(long, default_value_t = 50.0)]
        power: f64,
        /// Noise variances, weakest receiver first.
        #[arg(long, default_value = "10,1", value_parser = parse_pair)]
        noise: (f64, f64),
        #[arg(long, default_value_t = 1.0)]
        source_var: f64,
        #[arg(long, default_value_t = 2.0)]
        bandwidth: f64,
    },
    /// Binary source over a binary broadcast channel: the three coding
    /// baselines, outer bounds, trivial corners, SVG, containment report.
    Figure4 {
        /// Crossover probabilities, weakest receiver first.
        #[arg(long, default_value = "0.18,0.12", value_parser = parse_pair)]
        crossover: (f64, f64),
        #[arg(long, default_value_t = 2.0)]
        bandwidth: f64,
    },
    /// Query a single distortion point against a named bound.
    Member {
        /// One of: gauss-outer, gauss-wz-outer, gauss-trivial, bin-outer,
        /// bin-wz-outer, bin-trivial.
        #[arg(long)]
        bound: String,
        #[arg(long, value_parser = parse_pair)]
        point: (f64, f64),
        #[arg(long, default_value_t = 50.0)]
        power: f64,
        #[arg(long, default_value = "10,1", value_parser = parse_pair)]
        noise: (f64, f64),
        #[arg(long, default_value_t = 1.0)]
        source_var: f64,
        #[arg(long, default_value = "0.18,0.12", value_parser = parse_pair)]
        crossover: (f64, f64),
        #[arg(long, default_value_t = 2.0)]
        bandwidth: f64,
        /// Side-information qualities (beta), strongest degradation first.
        #[arg(long, value_parser = parse_pair)]
        beta: Option<(f64, f64)>,
    },
    /// Trace one named frontier to a data file.
    Frontier {
        /// One of: gauss-inner, gauss-outer, gauss-wz-outer, csc, ldc,
        /// separate, bin-outer, bin-wz-outer, discrete.
        #[arg(long)]
        which: String,
        #[arg(long, default_value_t = 50.0)]
        power: f64,
        #[arg(long, default_value = "10,1", value_parser = parse_pair)]
        noise: (f64, f64),
        #[arg(long, default_value_t = 1.0)]
        source_var: f64,
        #[arg(long, default_value = "0.18,0.12", value_parser = parse_pair)]
        crossover: (f64, f64),
        #[arg(long, default_value_t = 2.0)]
        bandwidth: f64,
        #[arg(long, value_parser = parse_pair)]
        beta: Option<(f64, f64)>,
        /// Instance description JSON for the discrete search.
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Candidate budget for the discrete search.
        #[arg(long, default_value_t = 2000)]
        budget: usize,
    },
    /// Run the hybrid-coding simulator from a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a covering/packing rate ladder from a JSON config.
    Lemma {
        #[arg(long)]
        config: PathBuf,
    },
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected two comma-separated numbers, got '{s}'"));
    }
    let a = parts[0].trim().parse::<f64>().map_err(|e| e.to_string())?;
    let b = parts[1].trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = tasks::Common {
        out: cli.out,
        json: cli.format == Format::Json,
        svg: cli.svg,
        seed: cli.seed,
        density: cli.density,
        tau_grid: cli.tau_grid,
        alpha_grid: cli.alpha_grid,
    };
    let outcome: Result<bool> = match cli.command {
        Command::Figure3 { power, noise, source_var, bandwidth } => {
            tasks::figure3(&common, power, noise, source_var, bandwidth)
        }
        Command::Figure4 { crossover, bandwidth } => {
            tasks::figure4(&common, crossover, bandwidth)
        }
        Command::Member {
            bound,
            point,
            power,
            noise,
            source_var,
            crossover,
            bandwidth,
            beta,
        } => tasks::member(
            &common, &bound, point, power, noise, source_var, crossover, bandwidth, beta,
        ),
        Command::Frontier {
            which,
            power,
            noise,
            source_var,
            crossover,
            bandwidth,
            beta,
            instance,
            budget,
        } => tasks::frontier(
            &common, &which, power, noise, source_var, crossover, bandwidth, beta,
            instance.as_deref(), budget,
        ),
        Command::Simulate { config } => tasks::simulate(&common, &config),
        Command::Lemma { config } => tasks::lemma(&common, &config),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            let payload = serde_json::json!({ "error": format!("{err:#}") });
            println!("{payload}");
            ExitCode::from(1)
        }
    }
}
