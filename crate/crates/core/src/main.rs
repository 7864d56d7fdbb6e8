use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tangent_lab::xcli::{self, Experiment};

#[derive(Parser)]
#[command(name = "tangent-lab", version, about = "Run tangent-groupoid numerical experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Overrides `seed` from the config.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        quiet: bool,
    },
    /// Check a config file against the schema without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        quiet: bool,
    },
    /// List the known experiments.
    ListExperiments,
}

fn main() -> ExitCode {
    let code = match Cli::parse().command {
        Command::Run {
            config,
            output,
            seed,
            quiet,
        } => match xcli::run(&config, output.as_deref(), seed) {
            Ok((outcome, artifacts)) => {
                if !quiet {
                    for c in &outcome.checks {
                        let cmp = match c.comparator {
                            xcli::Comparator::AtMost => "<=",
                            xcli::Comparator::AtLeast => ">=",
                        };
                        println!(
                            "{} {}: {:e} {cmp} {:e}",
                            if c.pass { "PASS" } else { "FAIL" },
                            c.invariant,
                            c.value,
                            c.tolerance
                        );
                    }
                    println!("artifacts in {}", artifacts.dir.display());
                }
                if outcome.pass() {
                    xcli::EXIT_PASS
                } else {
                    xcli::EXIT_TOLERANCE
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                xcli::exit_code(&e)
            }
        },
        Command::Validate { config, quiet } => match xcli::validate(&config) {
            Ok(issues) if issues.is_empty() => {
                if !quiet {
                    println!("ok: no issues");
                }
                xcli::EXIT_PASS
            }
            Ok(issues) => {
                if !quiet {
                    for i in &issues {
                        println!("{i}");
                    }
                }
                xcli::EXIT_CONFIG
            }
            Err(e) => {
                eprintln!("error: {e}");
                xcli::exit_code(&e)
            }
        },
        Command::ListExperiments => {
            for e in Experiment::ALL {
                println!("{:<20} {}", e.name(), e.description());
            }
            xcli::EXIT_PASS
        }
    };
    ExitCode::from(code as u8)
}
