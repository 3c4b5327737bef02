mod commands;
mod config;
mod dot;
mod verify;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{Failure, GlobalOpts};

#[derive(Parser, Debug)]
#[command(name = "tcov", version, about = "Census, homology and loci of moduli complexes of Z/p-covers of tropical curves")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate the cells of every dimension.
    Census(commands::CensusArgs),
    /// Rational Betti numbers of the complex.
    Homology(commands::HomologyArgs),
    /// Membership in one of the five nested loci.
    Loci(commands::LociArgs),
    /// Run the cross-checks against the closed forms and the property suite.
    Verify(verify::VerifyArgs),
    /// Write cells, the complex, or the genus-2 expectation table.
    Export(commands::ExportArgs),
}

/// Genus and prime shared by most subcommands.
#[derive(Args, Debug, Clone, Copy)]
pub struct Target {
    #[arg(long, short = 'g')]
    pub genus: u32,
    #[arg(long, short = 'p')]
    pub prime: u32,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Census(a) => commands::census(&cli.global, a),
        Command::Homology(a) => commands::homology(&cli.global, a),
        Command::Loci(a) => commands::loci(&cli.global, a),
        Command::Verify(a) => verify::run(&cli.global, a),
        Command::Export(a) => commands::export(&cli.global, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let failure = Failure::classify(&e);
            eprintln!("error: {e:#}");
            ExitCode::from(failure as u8)
        }
    }
}
