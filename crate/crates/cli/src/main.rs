use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use relfocus::ErrorKind;

mod commands;
mod report;

/// Finds the finest independent partition of a relation's attributes and
/// splits the relation into its prime factors.
#[derive(Parser)]
#[command(name = "relfocus", version)]
struct Cli {
    /// Print the JSON report on stdout instead of the text summary
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the focus and write one CSV per factor
    Factorize {
        input: PathBuf,
        /// Directory for the factor CSVs; nothing is written without it
        #[arg(long)]
        out: Option<PathBuf>,
        /// Confirm independence by materializing the join
        #[arg(long)]
        paranoid: bool,
        /// Only search for mincors of at most K blocks
        #[arg(long, value_name = "K", value_parser = clap::value_parser!(u64).range(2..))]
        max_mincor_size: Option<u64>,
    },
    /// List the minimal correlated block sets of a partition
    Mincors {
        input: PathBuf,
        /// Partition such as '[["A","B"],["C"]]'; defaults to singletons
        #[arg(long)]
        partition: Option<String>,
    },
    /// Show every step of the iteration from the singleton partition
    AlphaTrace { input: PathBuf },
    /// Test whether a partition is independent
    Check {
        input: PathBuf,
        #[arg(long)]
        partition: String,
        #[arg(long)]
        paranoid: bool,
    },
    /// Brute-force focus by enumerating every partition (at most 12 attributes)
    Oracle { input: PathBuf },
    /// Generate a random or planted relation
    Gen {
        #[arg(long)]
        seed: u64,
        /// e.g. '{"kind":"planted","blocks":[{"attributes":2,"tuples":3}]}'
        #[arg(long)]
        spec: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    // clap's own usage exit code (2) is reserved for guard refusals
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Factorize {
            input,
            out,
            paranoid,
            max_mincor_size,
        } => commands::factorize(
            input,
            out.as_deref(),
            *paranoid,
            max_mincor_size.map(|k| k as usize),
        ),
        Command::Mincors { input, partition } => commands::mincors(input, partition.as_deref()),
        Command::AlphaTrace { input } => commands::alpha_trace(input),
        Command::Check {
            input,
            partition,
            paranoid,
        } => commands::check(input, partition, *paranoid),
        Command::Oracle { input } => commands::oracle(input),
        Command::Gen { seed, spec, out } => commands::gen(*seed, spec, out),
    };
    match result {
        Ok(outcome) => {
            if cli.json {
                println!("{}", outcome.json);
            } else {
                print!("{}", outcome.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("relfocus: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Input => 1,
                ErrorKind::Guard => 2,
                ErrorKind::Invariant => 3,
            })
        }
    }
}
