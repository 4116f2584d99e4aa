use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qfho::commands::{self, Options};
use qfho::{Error, Scenario};

/// Forced quantum harmonic oscillator: classical parameters, propagator and
/// grid-solver comparisons.
///
/// Exit status: 0 on success, 1 on usage or configuration errors, 2 on
/// physics-domain failures (caustic, boundary contact, coarse grid, failed
/// comparison).
#[derive(Parser)]
#[command(name = "qfho", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file.
    #[arg(long)]
    config: PathBuf,
    /// Directory for CSV output; created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Reserved; every computation is deterministic.
    #[arg(long)]
    #[allow(dead_code)]
    seed: Option<u64>,
    /// Suppress the summary line.
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate λ, π, S and write trajectory.csv.
    Trajectory(Common),
    /// Evaluate the propagator on q × q′ and write kernel.csv.
    Kernel {
        #[command(flatten)]
        common: Common,
        /// Comma-separated output positions.
        #[arg(
            long = "q",
            value_delimiter = ',',
            allow_negative_numbers = true,
            required = true
        )]
        q: Vec<f64>,
        /// Comma-separated source positions.
        #[arg(
            long = "q-prime",
            value_delimiter = ',',
            allow_negative_numbers = true,
            required = true
        )]
        q_prime: Vec<f64>,
        /// Elapsed time; defaults to schedule.t_end.
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
    },
    /// Evolve the packet with the propagator and the grid solver and compare.
    Compare(Common),
    /// Tabulate the phase-space map M, ξ and det M.
    Heisenberg(Common),
}

fn run(command: &Command) -> Result<(String, bool), Error> {
    let common = match command {
        Command::Trajectory(c) | Command::Compare(c) | Command::Heisenberg(c) => c,
        Command::Kernel { common, .. } => common,
    };
    let scenario = Scenario::load(&common.config)?;
    let options = Options {
        out_dir: common.out.clone(),
    };
    let summary = match command {
        Command::Trajectory(_) => commands::run_trajectory(&scenario, &options)?,
        Command::Kernel { q, q_prime, t, .. } => {
            commands::run_kernel(&scenario, q, q_prime, *t, &options)?
        }
        Command::Compare(_) => commands::run_compare(&scenario, &options)?,
        Command::Heisenberg(_) => commands::run_heisenberg(&scenario, &options)?,
    };
    Ok((summary, common.quiet))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli.command) {
        Ok((summary, quiet)) => {
            if !quiet {
                println!("{summary}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
