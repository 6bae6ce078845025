//! `modsat` — solve instances, generate datasets, benchmark suites, and run
//! the heuristic-search loops from one binary.

mod commands;
mod config;

use clap::{Parser, Subcommand};

use commands::UsageError;

#[derive(Parser)]
#[command(
    name = "modsat",
    version,
    about = "Modular CDCL SAT solver and heuristic search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a DIMACS CNF file and print an s/v result.
    Solve(commands::solve::Args),
    /// Generate a dataset of CNF instances plus its manifest.
    Gen(commands::gen::Args),
    /// Evaluate a heuristic suite over a dataset and report PAR-2.
    Bench(commands::bench::Args),
    /// Random search over the solver configuration space.
    Tune(commands::tune::Args),
    /// Screen hook slots on a compact subset and keep the best four.
    Presearch(commands::presearch::Args),
    /// (1+λ) evolutionary search over the retained slots.
    Evolve(commands::evolve::Args),
    /// LLM-driven heuristic discovery loop.
    Discover(commands::discover::Args),
    /// Unsupervised prompt-template optimization.
    PromptOpt(commands::prompt_opt::Args),
    /// Summarize recorded runs; optionally emit cactus-plot data.
    Report(commands::report::Args),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let outcome = match cli.command {
        Command::Solve(args) => commands::solve::run(args),
        Command::Gen(args) => commands::gen::run(args),
        Command::Bench(args) => commands::bench::run(args),
        Command::Tune(args) => commands::tune::run(args),
        Command::Presearch(args) => commands::presearch::run(args),
        Command::Evolve(args) => commands::evolve::run(args),
        Command::Discover(args) => commands::discover::run(args),
        Command::PromptOpt(args) => commands::prompt_opt::run(args),
        Command::Report(args) => commands::report::run(args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = if e.is::<UsageError>() { 1 } else { 2 };
            std::process::exit(code);
        }
    }
}
