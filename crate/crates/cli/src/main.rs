//! `flowcat`: build, analyze, compare and export flows described by
//! decomposition documents.
//!
//! Exit codes: 0 success or verdict true, 1 verdict false, 2 input error,
//! 3 search budget exceeded.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::Failure;

#[derive(Parser)]
#[command(name = "flowcat", version, about = "Finite flows, globe attachments and T-homotopy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Iso,
    THomotopy,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build a flow and print its states, path count and path-count matrix.
    Build { input: PathBuf },
    /// Print per-state invariants and a deadlock / reachability report.
    Analyze {
        input: PathBuf,
        /// Designated initial states (defaults to the states nothing enters).
        #[arg(long = "init", value_delimiter = ',')]
        init: Option<Vec<String>>,
        /// Designated final states (defaults to the states nothing leaves).
        #[arg(long = "final", value_delimiter = ',')]
        final_states: Option<Vec<String>>,
    },
    /// Decide isomorphism or T-homotopy equivalence from X to Y.
    Compare {
        x: PathBuf,
        y: PathBuf,
        #[arg(long, value_enum, default_value = "iso")]
        mode: Mode,
    },
    /// Export the underlying graph (dot) or the flow itself (json).
    Export {
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build { input } => commands::build(&input),
        Command::Analyze { input, init, final_states } => commands::analyze(&input, init, final_states),
        Command::Compare { x, y, mode } => match mode {
            Mode::Iso => commands::compare_iso(&x, &y),
            Mode::THomotopy => commands::compare_t_homotopy(&x, &y),
        },
        Command::Export { input, format } => match format {
            Format::Dot => commands::export_dot(&input),
            Format::Json => commands::export_json(&input),
        },
    };
    match result {
        Ok(outcome) => {
            print!("{}", outcome.output);
            ExitCode::from(if outcome.verdict { 0 } else { 1 })
        }
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}
