//! `spm` — saddle-point searches with the spring pair method, plus dimer and
//! gentlest-ascent baselines, landscape enumeration, and minimum-energy-path
//! reconstruction.

mod commands;
mod config;
mod problem;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{RawConfig, RunConfig};

#[derive(Parser)]
#[command(
    name = "spm",
    about = "Spring pair method saddle-point search toolkit",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one walker (spm, dimer, or gad) and export trace and result files.
    Run(CommonArgs),
    /// Explore minima and connecting saddles of a cluster landscape.
    Landscape(CommonArgs),
    /// Reconstruct the minimum energy path through a computed saddle.
    Mep(MepArgs),
    /// Run spm, dimer, and gad from the same start; emit a side-by-side CSV.
    Compare(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Configuration file (overlays the preset when both are given).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named preset: v1, v2, lj7, lp-dis-ddqc, lp-ddqc-lq.
    #[arg(long)]
    preset: Option<String>,
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed override for walker re-perturbation and landscape trials.
    #[arg(long)]
    seed: Option<u64>,
    /// Scale field presets up to the full published resolution.
    #[arg(long)]
    full_resolution: bool,
}

#[derive(Args)]
struct MepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Result JSON of a converged, index-1-verified saddle.
    #[arg(long)]
    saddle: PathBuf,
}

fn resolve_config(args: &CommonArgs) -> Result<RunConfig, anyhow::Error> {
    let mut cfg = match &args.preset {
        Some(name) => RunConfig::preset(name)
            .ok_or_else(|| anyhow::anyhow!("unknown preset {name:?} (v1, v2, lj7, lp-dis-ddqc, lp-ddqc-lq)"))?,
        None => RunConfig::preset_v1(),
    };
    if args.full_resolution {
        cfg.apply_full_resolution();
    }
    if let Some(path) = &args.config {
        let raw = RawConfig::parse_file(path)?;
        cfg.apply(&raw)?;
    }
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    if let Some(seed) = args.seed {
        cfg.spm.reperturb_seed = seed;
        cfg.enumeration.search.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(args) => resolve_config(args).and_then(|cfg| commands::cmd_run(&cfg)),
        Command::Landscape(args) => {
            resolve_config(args).and_then(|cfg| commands::cmd_landscape(&cfg))
        }
        Command::Mep(args) => {
            resolve_config(&args.common).and_then(|cfg| commands::cmd_mep(&cfg, &args.saddle))
        }
        Command::Compare(args) => resolve_config(args).and_then(|cfg| commands::cmd_compare(&cfg)),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
