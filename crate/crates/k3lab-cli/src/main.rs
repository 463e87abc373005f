use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use k3lab::suite::{all_clear, check_matrix, parse_matrix, render_json, render_text, run_suite, Selection, SuiteOptions};

#[derive(Parser)]
#[command(name = "k3lab", version, about = "Exact checks for three families of elliptic K3 surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print its report.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Restrict to one family.
        #[arg(long, value_parser = ["1", "2", "3", "3b"])]
        family: Option<String>,
        /// Truncation order of the period series.
        #[arg(long, default_value_t = 12)]
        order: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Decide membership of a 4x4 integer matrix in PO(A) and PO+(A).
    Monodromy {
        #[arg(long, value_parser = ["1", "2", "3"])]
        family: String,
        /// File holding 16 integers, row by row.
        #[arg(long)]
        check_matrix: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    All,
    Polytope,
    Fibration,
    Lattice,
    Periods,
    Pfaffian,
    Monodromy,
}

impl From<Suite> for Selection {
    fn from(s: Suite) -> Self {
        match s {
            Suite::All => Selection::All,
            Suite::Polytope => Selection::Polytope,
            Suite::Fibration => Selection::Fibration,
            Suite::Lattice => Selection::Lattice,
            Suite::Periods => Selection::Periods,
            Suite::Pfaffian => Selection::Pfaffian,
            Suite::Monodromy => Selection::Monodromy,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    let mut opts = SuiteOptions::default();
    match cli.command {
        Command::Verify { suite, family, order, format } => {
            opts.family = family;
            opts.order = order;
            let reports = run_suite(suite.into(), &opts);
            match format {
                Format::Json => print!("{}", render_json(&reports)),
                Format::Text => print!("{}", render_text(&reports)),
            }
            Ok(if all_clear(&reports) { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Monodromy { family, check_matrix: path } => {
            let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let g = parse_matrix(&text).map_err(|e| anyhow!(e))?;
            let verdict = check_matrix(&opts, &family, &g).map_err(|e| anyhow!(e))?;
            print!("{}", render_json(&verdict));
            Ok(ExitCode::SUCCESS)
        }
    }
}
