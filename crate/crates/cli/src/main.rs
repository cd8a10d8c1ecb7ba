use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod report;

use report::{Outcome, Verdict};

#[derive(Parser, Debug)]
#[command(name = "heegaard", version, about = "Curve arrangements, Heegaard diagrams and Morse bookkeeping")]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Print the machine-readable report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the step trace as JSON lines to this file.
    #[arg(long, global = true, value_name = "PATH")]
    trace: Option<PathBuf>,
    /// Tietze move budget for presentation work.
    #[arg(long, global = true, default_value_t = heegaard_core::presentation::DEFAULT_TIETZE_BUDGET)]
    max_tietze: usize,
    /// Worker threads when the input is a directory.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Write the resulting arrangement, diagram or program here.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Check a `.arr`, `.hd` or `.morse` file.
    Validate { input: PathBuf },
    /// Crossings, algebraic pairing and geometric degree of an arrangement.
    Invariants { input: PathBuf },
    /// Remove bigons until the arrangement is in minimal position.
    Reduce { input: PathBuf },
    /// Fundamental group presentation of a diagram, Tietze-simplified.
    Pi1 { input: PathBuf },
    /// Pairing matrix and first homology of a diagram.
    Homology { input: PathBuf },
    /// Cancellation certificate and per-pair geometric check.
    Cancel { input: PathBuf },
    /// Destabilize repeatedly toward the genus-0 diagram.
    ReduceDiagram { input: PathBuf },
    #[command(subcommand)]
    Morse(MorseCommand),
}

#[derive(Subcommand, Debug, Clone)]
pub enum MorseCommand {
    /// Move every critical point to the level of its index.
    SelfIndex { input: PathBuf },
    /// Euler characteristic of a closed program.
    Chi { input: PathBuf },
    /// Cancel a hinted (0, 1) or (2, 3) pair.
    Cancel { input: PathBuf, first: String, second: String },
    /// Heegaard diagram of the middle level, then full reduction.
    ToHeegaard {
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        theta: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcomes = commands::run(&cli.command, &cli.opts);
    let mut worst = Verdict::Ok;
    for o in &outcomes {
        print(o, &cli.opts);
        worst = worst.max(o.report.verdict);
    }
    ExitCode::from(worst.exit_code())
}

fn print(o: &Outcome, opts: &Options) {
    if opts.json {
        println!("{}", serde_json::to_string(&o.report).expect("reports serialize"));
        return;
    }
    if !o.human.is_empty() {
        print!("{}", o.human);
    }
    for e in &o.report.errors {
        eprintln!("error: {e}");
    }
    for w in &o.report.warnings {
        eprintln!("warning: {w}");
    }
}
