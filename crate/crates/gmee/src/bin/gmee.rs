//! Command-line front end for config-driven experiments.
//!
//! Exit codes: 0 success, 1 usage error, 2 config error, 3 runtime error.

use clap::{Parser, Subcommand};
use gmee::analysis::complexity_counts;
use gmee::config::parse_config;
use gmee::filters::AlgorithmSpec;
use gmee::runner::execute;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "gmee",
    about = "Error-entropy adaptive filtering experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute an experiment config and write its artifacts
    Run {
        /// path to a TOML experiment config
        config: PathBuf,
    },
    /// Parse and validate a config without running it
    Validate {
        /// path to a TOML experiment config
        config: PathBuf,
    },
    /// List the available algorithms and their parameters
    ListAlgorithms,
    /// Print per-iteration operation counts for the given dimensions
    Complexity {
        /// filter length
        #[arg(long = "M")]
        m: usize,
        /// window length
        #[arg(long = "L")]
        l: usize,
        /// codebook size
        #[arg(long = "H")]
        h: usize,
    },
}

fn load_config(path: &PathBuf) -> Result<gmee::config::ExperimentConfig, ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(2)
    })?;
    parse_config(&text).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are successes, everything else is usage
            let code = if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
            let _ = e.print();
            return code;
        }
    };

    match cli.command {
        Command::Run { config } => {
            let config = match load_config(&config) {
                Ok(c) => c,
                Err(code) => return code,
            };
            match execute(&config) {
                Ok(report) => {
                    println!("config fingerprint: {}", report.config_fingerprint);
                    for artifact in &report.artifacts {
                        println!("wrote {}", artifact.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(3)
                }
            }
        }
        Command::Validate { config } => match load_config(&config) {
            Ok(c) => {
                println!("ok: valid `{}` experiment", c.kind);
                ExitCode::SUCCESS
            }
            Err(code) => code,
        },
        Command::ListAlgorithms => {
            println!("lms    eta");
            println!("lmf    eta");
            println!("gmcc   eta, shape (default 4), lambda (default 1)");
            println!("rls    forgetting (default 0.999), delta (default 1e4)");
            println!("mee    eta, beta, window");
            println!("gmee   eta, alpha, beta, window");
            println!("qgmee  eta, alpha, beta, window, gamma");
            debug_assert_eq!(AlgorithmSpec::ALL_NAMES.len(), 7);
            ExitCode::SUCCESS
        }
        Command::Complexity { m, l, h } => {
            println!("algorithm,multiplications,additions,exponentiations");
            for algo in ["lms", "lmf", "gmcc", "gmee", "qgmee"] {
                match complexity_counts(algo, m, l, h) {
                    Ok(c) => println!("{algo},{},{},{}", c.mults, c.adds, c.exps),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(1);
                    }
                }
            }
            ExitCode::SUCCESS
        }
    }
}
