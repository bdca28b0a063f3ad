use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod render;

#[derive(Parser, Debug)]
#[command(
    name = "gcdeq",
    version,
    about = "Exact splitting-type densities, local gcd equivalence and prime scans for low-degree fields"
)]
pub struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,

    /// Also print decimal approximations next to exact fractions.
    #[arg(long, global = true)]
    pub decimal: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Structured,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List catalog entries, or describe one.
    Catalog { name: Option<String> },

    /// Density table of an entry's stabilizer or of a named subgroup.
    Densities {
        group: String,
        /// Named subgroup (see `catalog <GROUP>`); defaults to the stabilizer.
        subfield: Option<String>,
    },

    /// Joint density table over several subgroups of one entry.
    Joint {
        group: String,
        #[arg(required = true, num_args = 1..)]
        subfields: Vec<String>,
    },

    /// Splitting type and gcd for every conjugacy class.
    GcdProfile {
        group: String,
        subfield: Option<String>,
    },

    /// Compare two subgroups of one entry for gcd and arithmetic equivalence.
    Equiv {
        group: String,
        left: String,
        right: String,
    },

    /// Inert densities in the direct product of two entries.
    ProductAnalysis {
        left: String,
        right: String,
        #[arg(long, default_value = "stabilizer")]
        left_subfield: String,
        #[arg(long, default_value = "stabilizer")]
        right_subfield: String,
    },

    /// Check that gcd equivalent equal-index subgroups are conjugate.
    Rigidity {
        #[arg(long, default_value_t = 5)]
        max_degree: usize,
        /// Also show the gcd separations between entries of different degree.
        #[arg(long)]
        cross_degree: bool,
    },

    /// Census of primes up to a bound by factorization pattern.
    Scan {
        /// Polynomial text, `[a0, a1, ...]`, or `@file`.
        polynomial: String,
        #[arg(long, default_value_t = 100_000)]
        bound: u64,
        /// Write the report file here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },

    /// Compare two polynomials (or two saved reports) prime by prime.
    Compare {
        left: String,
        right: String,
        #[arg(long, default_value_t = 100_000)]
        bound: u64,
        /// Treat the arguments as report files written by `scan --out`.
        #[arg(long)]
        reports: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },

    /// Run the reproduction suite; exit 1 if any check fails.
    VerifyPaper {
        /// Bound for the empirical checks (defaults to their nominal bounds).
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Replace a catalog entry by a wrong group (negative control).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.output);
            ExitCode::from(outcome.exit_code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
