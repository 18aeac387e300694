//! `kitten`: sweeps, optimizers and figure data for heralded photon
//! subtraction from multimode squeezed vacuum.

mod commands;
mod config;

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kitten_core::experiments::Objective;
use kitten_core::Error;

use commands::{LoArgs, Output, SweepArgs};
use config::{Common, Settings};

#[derive(Debug, Parser)]
#[command(
    name = "kitten",
    version,
    about = "Non-mode-selective photon subtraction from multimode squeezed vacuum"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Negativity,
    Fidelity,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample supermodes and the filter-adapted parallel/perpendicular modes
    Basis {
        /// Modes of each family to emit
        #[arg(long, default_value_t = 4)]
        count: usize,
    },
    /// Filter overlap matrix
    Gamma,
    /// Heralded Wigner function on a phase-space grid
    Wigner {
        /// Points per phase-space axis
        #[arg(long)]
        phase_points: Option<usize>,
    },
    /// Wigner negativity of the heralded state
    Negativity,
    /// Fidelity of the heralded state with the target kitten
    Fidelity,
    /// Negativity over a grid of Schmidt numbers and LO widths
    Sweep {
        /// Comma-separated Schmidt numbers
        #[arg(long, value_delimiter = ',')]
        k_values: Option<Vec<f64>>,
        #[arg(long)]
        lo_min_nm: Option<f64>,
        #[arg(long)]
        lo_max_nm: Option<f64>,
        #[arg(long)]
        lo_points: Option<usize>,
    },
    /// Best LO width for the chosen objective
    OptimizeLo {
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Negativity)]
        objective: ObjectiveArg,
        #[arg(long)]
        lo_min_nm: Option<f64>,
        #[arg(long)]
        lo_max_nm: Option<f64>,
    },
    /// Widest filter (and its best LO) reaching a target fidelity
    Design {
        #[arg(long)]
        target_f: Option<f64>,
    },
    /// Purity of the heralded photon
    Purity,
}

/// Command failure, mapped onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    Argument(String),
    Precision(String),
    Unreachable(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Argument(_) => 2,
            Failure::Precision(_) => 3,
            Failure::Unreachable(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Argument(m)
            | Failure::Precision(m)
            | Failure::Unreachable(m)
            | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let m = e.to_string();
        match e {
            Error::Precision { .. } => Failure::Precision(m),
            Error::Unreachable { .. } => Failure::Unreachable(m),
            _ => Failure::Argument(m),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let settings = Settings::resolve(&cli.common)?;
    let output = match cli.command {
        Command::Basis { count } => commands::basis(&settings, count),
        Command::Gamma => commands::gamma(&settings),
        Command::Wigner { phase_points } => commands::wigner(&settings, phase_points),
        Command::Negativity => commands::negativity(&settings),
        Command::Fidelity => commands::fidelity(&settings),
        Command::Sweep {
            k_values,
            lo_min_nm,
            lo_max_nm,
            lo_points,
        } => commands::sweep(
            &settings,
            SweepArgs {
                k_values,
                lo_min_nm,
                lo_max_nm,
                lo_points,
            },
        ),
        Command::OptimizeLo {
            objective,
            lo_min_nm,
            lo_max_nm,
        } => commands::optimize_lo(
            &settings,
            LoArgs {
                objective: match objective {
                    ObjectiveArg::Negativity => Objective::Negativity,
                    ObjectiveArg::Fidelity => Objective::Fidelity,
                },
                lo_min_nm,
                lo_max_nm,
            },
        ),
        Command::Design { target_f } => commands::design(&settings, target_f),
        Command::Purity => commands::purity(&settings),
    }?;
    emit(&settings, output)
}

fn emit(settings: &Settings, output: Output) -> Result<(), Failure> {
    match &settings.out {
        Some(path) => output
            .table
            .write_to(io::BufWriter::new(fs::File::create(path)?))?,
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            output.table.write_to(&mut lock)?;
            lock.flush()?;
        }
    }
    match (&settings.plot, output.figure) {
        (Some(path), Some(svg)) => fs::write(path, svg)?,
        (Some(_), None) => eprintln!("warning: this command has no figure; --plot ignored"),
        _ => {}
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
