//! `mubar`: Milnor invariants, Orr coordinates and HOMFLYPT cross-checks for pure braids.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use milnor::ErrorKind;

use report::{CliError, Format};

#[derive(Parser, Debug)]
#[command(name = "mubar", version, about = "Milnor invariants of pure braids")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Also write the output to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Lift the default size caps on k and on index length.
    #[arg(long, global = true)]
    no_caps: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct BraidArgs {
    /// Braid word such as "s1^-1 s2 s1^-1 s2 s1^-1 s2"; empty for the trivial braid.
    #[arg(long, allow_hyphen_values = true)]
    braid: String,
    /// Number of strands.
    #[arg(long)]
    strands: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Via {
    Magnus,
    Homflypt,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum HeuristicArg {
    First,
    Greedy,
}

impl From<HeuristicArg> for milnor::homflypt::Heuristic {
    fn from(h: HeuristicArg) -> Self {
        match h {
            HeuristicArg::First => milnor::homflypt::Heuristic::FirstFound,
            HeuristicArg::Greedy => milnor::homflypt::Heuristic::Greedy,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Witt ranks N_h and the kernel ranks qN_h - N_{h+1}.
    Witt {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        max: usize,
    },
    /// Longitudes of a pure braid and their lower central series degrees.
    Longitudes {
        #[command(flatten)]
        braid: BraidArgs,
        /// Degree cap for the lower central series check.
        #[arg(long, default_value_t = 6)]
        cap: usize,
    },
    /// The invariant μ_I through the Magnus expansion, the HOMFLYPT route, or both.
    Mu {
        #[command(flatten)]
        braid: BraidArgs,
        /// Index sequence, e.g. 123 or 1,2,3.
        #[arg(long)]
        index: String,
        #[arg(long, value_enum, default_value_t = Via::Magnus)]
        via: Via,
        #[arg(long, value_enum, default_value_t = HeuristicArg::Greedy)]
        heuristic: HeuristicArg,
    },
    /// Residue, kernel coordinates, H3 class and tree combination at level k.
    Orr {
        #[command(flatten)]
        braid: BraidArgs,
        #[arg(long)]
        k: usize,
    },
    /// A basis of H_3 of the nilpotent quotient 𝔏/𝔏_{≥k}.
    H3 {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        k: usize,
    },
    /// Tree combination whose η image is the Milnor residue.
    KontsevichTree {
        #[command(flatten)]
        braid: BraidArgs,
        #[arg(long)]
        k: usize,
    },
    /// HOMFLYPT polynomial of a braid closure or a PD code.
    Homfly {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "pd")]
        braid: Option<String>,
        #[arg(long, required_unless_present = "pd")]
        strands: Option<usize>,
        /// PD code such as "X[1,2,3,4;+] ...".
        #[arg(long, conflicts_with_all = ["braid", "strands"])]
        pd: Option<String>,
        #[arg(long, value_enum, default_value_t = HeuristicArg::Greedy)]
        heuristic: HeuristicArg,
    },
    /// Compare both μ routes and both H3 constructions on seeded random braids.
    Crosscheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Maximal number of commutator factors in each random word.
        #[arg(long, default_value_t = 2)]
        factors: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(rep) => {
            let text = rep.render(cli.format);
            print!("{text}");
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if rep.consistent {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: internal consistency check failed");
                ExitCode::from(4)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &CliError) -> u8 {
    match e {
        CliError::Usage(_) => 2,
        CliError::Core(c) => match c.kind() {
            ErrorKind::Input => 2,
            ErrorKind::Precondition => 3,
            ErrorKind::Internal => 4,
        },
    }
}
