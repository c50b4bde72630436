//! Thin front end over the library's configuration-driven runner.

use std::path::PathBuf;

use clap::Parser;
use gqfi::cli::{run, CliOptions};

/// Fisher-information runs for seeded, lossy interferometers: evaluate,
/// verify, optimize, or sweep a scenario described by a TOML document.
#[derive(Parser, Debug)]
#[command(name = "gqfi", version)]
struct Args {
    /// Path to a run document (TOML)
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output CSV path (default: derived from the config or figure id)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Fock cutoff override for photon-counting runs
    #[arg(long)]
    cutoff: Option<usize>,

    /// Cap on the second squeeze parameter during optimization
    #[arg(long)]
    r2_cap: Option<f64>,

    /// Worker thread count (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,

    /// Run one of the bundled figure specs by id instead of --config
    #[arg(long)]
    seed_figures: Option<String>,
}

fn main() {
    let args = Args::parse();
    let opts = CliOptions {
        config: args.config,
        out: args.out,
        cutoff: args.cutoff,
        r2_cap: args.r2_cap,
        jobs: args.jobs,
        seed_figures: args.seed_figures,
    };
    std::process::exit(run(&opts));
}
