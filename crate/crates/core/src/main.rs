use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vessiot::cli::{analyze, Flags};
use vessiot::linalg::DEFAULT_SEED;

#[derive(Parser)]
#[command(name = "vessiot", version, about = "Involution analysis of first-order PDE systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse a system file and print the report.
    Analyze {
        file: PathBuf,
        /// Machine-readable report.
        #[arg(long, conflicts_with = "text")]
        json: bool,
        /// Human-readable report (default).
        #[arg(long)]
        text: bool,
        /// Stop the construction after step J.
        #[arg(long, value_name = "J")]
        step: Option<usize>,
        /// Do not merge unknowns identified by the cross-derivative symmetry.
        #[arg(long)]
        no_contract: bool,
        /// Seed for the random evaluation points of the rank computations.
        #[arg(long, value_name = "N", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Analyze {
        file,
        json,
        text: _,
        step,
        no_contract,
        seed,
    } = cli.command;
    let source = match std::fs::read_to_string(&file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    let flags = Flags {
        contract: !no_contract,
        step,
        seed,
    };
    match analyze(&source, &flags) {
        Ok(r) => {
            if json {
                println!("{}", r.to_json());
            } else {
                print!("{}", r.to_text());
            }
            ExitCode::from(r.verdict.exit_code as u8)
        }
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
