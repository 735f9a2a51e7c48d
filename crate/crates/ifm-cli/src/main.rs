use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ifm_cli::commands;
use ifm_cli::report::Format;
use ifm_cli::verify;
use ifm_cli::CliError;

/// Interaction-free measurement as channel discrimination: sweeps,
/// optimal input states, discrimination reports, and self-verification.
#[derive(Parser)]
#[command(name = "ifm", version, about, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the optimal loss rates and error minimum over the cycle count
    PlossSweep {
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long, default_value_t = 100)]
        n_max: u32,
        #[arg(long, default_value_t = 1)]
        n_step: u32,
        /// Transparency amplitudes, comma separated, each in [0, 1)
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<f64>,
        /// Prior probability that the object is present
        #[arg(long, default_value_t = 0.5)]
        q: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Write to this path instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the zero-error boundary a*(N) where k1 = 1
    Boundary {
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long, default_value_t = 100)]
        n_max: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare exact optimal losses with the 1/N leading term over a
    /// geometric ladder of N
    Asymptotics {
        #[arg(long, default_value_t = 0.5)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        #[arg(long, default_value_t = 4096)]
        n_max: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the optimal input states for one parameter point
    Optimize {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 0.5)]
        q: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full discrimination report (JSON) for one input state
    Discriminate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 0.5)]
        q: f64,
        /// Input amplitudes as re,im,re,im on the |1>, |2> basis
        #[arg(long)]
        state: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every cross-check oracle suite;
    /// exit code 3 if any suite fails
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .map_err(|e| CliError::Invalid(format!("cannot create {}: {e}", path.display())))?;
            f.write_all(text.as_bytes())
                .map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::PlossSweep {
            n_min,
            n_max,
            n_step,
            a,
            q,
            format,
            out,
        } => {
            let text = commands::ploss_sweep(n_min, n_max, n_step, &a, q, format)?;
            emit(&text, out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Boundary {
            n_min,
            n_max,
            format,
            out,
        } => {
            let text = commands::boundary(n_min, n_max, format)?;
            emit(&text, out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Asymptotics {
            a,
            q,
            n_max,
            format,
            out,
        } => {
            let text = commands::asymptotics_table(a, q, n_max, format)?;
            emit(&text, out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Optimize {
            n,
            a,
            q,
            format,
            out,
        } => {
            let text = commands::optimize(n, a, q, format)?;
            emit(&text, out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Discriminate {
            n,
            a,
            q,
            state,
            out,
        } => {
            let raw = commands::parse_state_flag(&state)?;
            let (text, renormalized) = commands::discriminate(n, a, q, raw)?;
            if renormalized {
                eprintln!(
                    "warning: input state norm differed from 1 by more than 1e-6; renormalized"
                );
            }
            emit(&text, out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { seed, out } => {
            let results = verify::run_all(seed);
            let text = verify::render_report(&results);
            emit(&text, out.as_ref())?;
            if results.iter().all(|r| r.pass) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(3))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
