use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use teleport_core::cli::{self, DemoAngles, Tolerances};
use teleport_core::Error;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(
    name = "teleport",
    version,
    about = "Teleportation simulator with non-maximally entangled resources"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Also compare against the tripartite computation (dim <= 4).
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named qubit setup.
    Demo {
        #[arg(long)]
        preset: String,
        #[arg(long, allow_hyphen_values = true)]
        theta1: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        theta2: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        theta3: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of sampled measurement shots printed to stderr.
        #[arg(long, default_value_t = 5)]
        shots: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized property sweep.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(json: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, format!("{json}\n"))
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, (u8, String)> {
    let config_err = |e: Error| (EXIT_CONFIG, e.to_string());
    let defaults = Tolerances::from_env().map_err(config_err)?;
    match cli.command {
        Command::Run {
            config,
            oracle,
            out,
        } => {
            let text = std::fs::read_to_string(&config).map_err(|e| {
                (
                    EXIT_CONFIG,
                    format!("cannot read {}: {e}", config.display()),
                )
            })?;
            let mut cfg = cli::parse_config_with(&text, defaults).map_err(config_err)?;
            cfg.oracle |= oracle;
            let report = cli::run_experiment(&cfg).map_err(config_err)?;
            eprint!("{}", cli::summary_table(&report));
            emit(&report.to_json(), out.as_ref()).map_err(|e| (EXIT_CONFIG, e))?;
            Ok(report.passed())
        }
        Command::Demo {
            preset,
            theta1,
            theta2,
            theta3,
            seed,
            shots,
            out,
        } => {
            let angles = DemoAngles {
                theta1,
                theta2,
                theta3,
            };
            let mut cfg = cli::demo_config(&preset, angles, seed).map_err(config_err)?;
            cfg.tolerances = Some(defaults);
            cli::resolve(&cfg).map_err(config_err)?;
            let report = cli::run_experiment(&cfg).map_err(config_err)?;
            for line in cli::demo_samples(&cfg, shots).map_err(config_err)? {
                eprintln!("{line}");
            }
            eprint!("{}", cli::summary_table(&report));
            emit(&report.to_json(), out.as_ref()).map_err(|e| (EXIT_CONFIG, e))?;
            Ok(report.passed())
        }
        Command::Verify {
            n,
            trials,
            seed,
            out,
        } => {
            let report = cli::run_verification(n, trials, seed, defaults).map_err(config_err)?;
            eprintln!(
                "verify n={n} trials={trials}: oracle {:?}  recovery {:.3e}  key {:.3e}  => {}",
                report.max_oracle_defect,
                report.max_recovery_error,
                report.max_key_unitarity_defect,
                if report.passed { "PASS" } else { "FAIL" }
            );
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            emit(&json, out.as_ref()).map_err(|e| (EXIT_CONFIG, e))?;
            Ok(report.passed)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERIFY_FAILED),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
