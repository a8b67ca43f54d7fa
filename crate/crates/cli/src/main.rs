//! Command-line front end: scans, oracle checks, and report generation on
//! top of the `kreinlab` library.
//!
//! Exit codes: 0 on success, 2 on parameter/configuration errors, 3 when a
//! truncation guard refuses the requested computation.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::RunError;
use output::OutputDir;

#[derive(Parser)]
#[command(
    name = "kreinlab",
    version,
    about = "Mode-grid scans and truncated-Fock-space checks for covariantly quantized gauge fields",
    after_help = "Configuration comes from --config (TOML, nested sections per module) \
plus repeatable --set key.path=value overrides; overrides win. \
Identical configuration and seed produce byte-identical output files."
)]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Override one configuration key, e.g. --set grid.kmin=1e-4 (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Output directory for CSV / JSON-lines files.
    #[arg(long, global = true, default_value = "out", value_name = "DIR")]
    out: PathBuf,

    /// Random seed (overrides the config file).
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Worker threads for scan points (overrides the config file; 0 = auto).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time-like mode number and vacuum overlap vs the UV cutoff.
    ScanNumber,
    /// Vacuum overlap decay as mode shells accumulate.
    Overlap,
    /// Factorized closed forms against the dense tensor-product oracle.
    OracleCheck,
    /// Unphysical-photon algebra, physical sector, gauge-charge identities.
    GaugeCheck,
    /// Mode-sum vs closed-form commutator distribution.
    PjCheck,
    /// Spectral Maxwell evolution with conservation reporting.
    RsEvolve,
    /// Weyl form of the canonical commutation relations on a lattice ring.
    Weyl,
    /// Trace obstruction, commutator powers, occupation classes.
    CcrReport,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let mut cfg = match config::load(cli.config.as_deref(), &cli.set) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(threads) = cli.threads {
        cfg.threads = threads;
    }
    if cfg.threads > 0 {
        // ignore failure: the global pool can only be set once per process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global();
    }

    let out = match OutputDir::create(&cli.out) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: cannot create output directory: {e}");
            return ExitCode::from(2);
        }
    };

    let result = match cli.command {
        Command::ScanNumber => commands::scan_number(&cfg, &out),
        Command::Overlap => commands::overlap(&cfg, &out),
        Command::OracleCheck => commands::oracle_check(&cfg, &out),
        Command::GaugeCheck => commands::gauge_check(&cfg, &out),
        Command::PjCheck => commands::pj_check(&cfg, &out),
        Command::RsEvolve => commands::rs_evolve(&cfg, &out),
        Command::Weyl => commands::weyl(&cfg, &out),
        Command::CcrReport => commands::ccr_report(&cfg, &out),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ RunError::Guard(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
