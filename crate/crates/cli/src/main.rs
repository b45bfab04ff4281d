//! `meroconv`: batch computations on the example registry, with structured
//! reports on stdout or in a file.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "meroconv", version, about = "Convergence of meromorphic maps into projective space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum Command {
    /// List the built-in examples.
    Examples,
    /// Divide out the common factor of a representation.
    Reduce { target: String },
    /// Closed form of the k-th iterate of a self-map.
    Iterate { target: String },
    /// Algebraic and topological degree of a map.
    Degree { target: String },
    /// Convergence level of a family.
    Classify { target: String },
    /// Fubini-Study area of a one-variable member over a disk.
    Area { target: String },
    /// Mixed Monge-Ampère masses of a member on the family domain.
    Mass { target: String },
    /// Residue check for (z1^k, z2^k) on a ball of C^2.
    King,
    /// Mass of ln(|z1|² + |z1 - ε|² + |z2|² + |z3|^k) on the ball of radius 1/2.
    Rash,
    /// Label a modulus grid of a chart by the limits of the iterates.
    FatouScan {
        #[arg(default_value = "deg2")]
        target: String,
    },
    /// Radial volume series of the quadratic example.
    GammaVolumes,
    /// Probe the bubble fiber of a family over a point.
    Bubble { target: String },
    /// Sampled distance between the pullbacks of two hyperplanes.
    Separation {
        target: String,
        /// Indices into the hyperplane panel (coordinate hyperplanes first).
        #[arg(long, default_value = "0,1")]
        pair: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

/// Options shared by all commands; echoed into every report.
#[derive(Args, Debug, Clone, Serialize)]
pub struct RunConfig {
    /// Largest k used (family members, iterates).
    #[arg(long, global = true)]
    pub kmax: Option<u64>,
    /// A single k.
    #[arg(long, global = true)]
    pub k: Option<u64>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// `fast`, `default`, `fine`, or `key=value` pairs over
    /// panels, nodes, angular, samples.
    #[arg(long, global = true)]
    pub budget: Option<String>,
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    #[arg(long, global = true)]
    pub chart: Option<usize>,
    /// `ROWSxCOLS`, e.g. `200x200`.
    #[arg(long, global = true)]
    pub grid: Option<String>,
    #[arg(long, global = true)]
    pub radius: Option<f64>,
    /// Order of the mixed mass.
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Comma-separated complex coordinates, e.g. `0.5,0+0.1i`.
    #[arg(long, global = true)]
    pub point: Option<String>,
    /// Worker threads; all available cores by default.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.config.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli.command, &cli.config) {
        Ok(outcome) => match report::emit(&cli.command, &cli.config, &outcome) {
            Ok(()) => ExitCode::from(if outcome.inconclusive { 1 } else { 0 }),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
