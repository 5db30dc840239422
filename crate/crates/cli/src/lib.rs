//! Command-line front end for `fibnorm`: every library operation plus
//! regeneration of the published tables and running-percentage data.

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod report;

pub use report::{Format, Report, Status};

#[derive(Debug, Parser)]
#[command(name = "fibnorm", version, about = "Pisano periods and Fibonacci digit statistics")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Residue steps allowed per scan
    #[arg(long, global = true, env = "FIBNORM_BUDGET", default_value_t = fibnorm::budget::DEFAULT_BUDGET)]
    pub budget: u64,
    /// No progress or timing on stderr
    #[arg(long, short, global = true)]
    pub quiet: bool,
    /// Worker threads for range commands (default: all cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pisano period of one modulus or an inclusive range `a..b`
    Pisano {
        range: String,
        /// Factor and combine prime-power periods (default)
        #[arg(long, conflicts_with_all = ["direct", "both"])]
        fast: bool,
        /// Iterate until (0, 1) recurs
        #[arg(long, conflicts_with = "both")]
        direct: bool,
        /// Run both methods and compare
        #[arg(long)]
        both: bool,
    },
    /// Recompute one of the published tables: 1, 2, 4, 5, 6 or 7
    Table {
        id: u32,
        /// Bases for table 6
        #[arg(long, value_delimiter = ',')]
        bases: Option<Vec<u32>>,
        /// Deepest place searched (tables 5 and 6)
        #[arg(long)]
        max_place: Option<u32>,
        /// Base for table 7
        #[arg(long, default_value_t = 3)]
        base: u32,
        /// Deepest place for table 7
        #[arg(long, default_value_t = 11)]
        places: u32,
    },
    /// Zeros per Pisano period for one modulus or a range
    Omega { range: String },
    /// One period of the digit in the base^place position
    Phi { base: u32, place: u32 },
    /// Digit counts over one place period
    Freq { base: u32, place: u32 },
    /// Smallest place from which every searched place is uniform
    Upsilon { base: u32, max_place: u32 },
    /// Multiplicity of every residue in one period mod m
    Residues { m: u64 },
    /// Compare residue counts mod 5^x 2^y with the predicted pattern
    Jacobson { x: u32, y: u32 },
    /// First t digits of the concatenated Fibonacci expansion
    Concat {
        base: u32,
        #[arg(long, default_value_t = 100)]
        t: u64,
    },
    /// Frequencies of every length-k string in the first t digits
    Normality { base: u32, k: usize, t: u64 },
    /// Running percentages per place and digit, as plotted
    Figure1 {
        base: u32,
        #[arg(long, default_value_t = 11)]
        places: u32,
    },
}

/// Runs one parsed command line to a report.
pub fn run(cli: &Cli, budget: &fibnorm::Budget) -> Report {
    commands::dispatch(&cli.command, budget)
}
