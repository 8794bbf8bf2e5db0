use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lscat_cli::commands::{self, CliError, Outcome, DEFAULT_SEED, EXIT_USAGE};

#[derive(Parser)]
#[command(
    name = "lscat",
    version,
    about = "Cup-length, category bounds and degree-one map criteria"
)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a space record (file path or catalogue name).
    Show { space: String },
    /// Poincaré polynomial, cup-length, bound ledger and duality check.
    Invariants { space: String },
    /// Cup-length by closed formula and by ideal-power search.
    CupLength { space: String },
    /// Validate a map file and check injectivity of the induced homomorphism.
    CheckMap {
        map: String,
        /// Space files the map may refer to by name.
        #[arg(long = "space")]
        spaces: Vec<String>,
    },
    /// Run every criterion for a putative degree +-1 map M -> N.
    #[command(name = "degree1-report")]
    Degree1Report {
        #[arg(short = 'm')]
        domain: String,
        #[arg(short = 'n')]
        range: String,
        #[arg(long)]
        map: Option<String>,
    },
    /// Recompute the SO(n) table, the G2 criterion and the torus bound.
    VerifyPaper,
    /// List catalogue entries, or print one as a space file.
    Catalogue {
        #[arg(long)]
        export: Option<String>,
    },
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Show { space } => commands::show(space),
        Command::Invariants { space } => commands::invariants(space),
        Command::CupLength { space } => commands::cup_length(space),
        Command::CheckMap { map, spaces } => commands::check_map(map, spaces),
        Command::Degree1Report { domain, range, map } => commands::degree1_report(domain, range, map.as_deref()),
        Command::VerifyPaper => commands::verify_paper(cli.seed),
        Command::Catalogue { export } => commands::catalogue(export.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json value"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
