//! `spinlogic`: compile circuits and polynomials into Ising models and check
//! them by exhaustive enumeration.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use spinlogic::BigRational;

pub type Num = BigRational;

#[derive(Parser)]
#[command(
    name = "spinlogic",
    version,
    about = "Penalty-gadget compiler for diagonal spin Hamiltonians"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    #[value(name = "1-2x")]
    OneMinusTwoX,
    #[value(name = "2x-1")]
    TwoXMinusOne,
}

impl From<ConventionArg> for spinlogic::Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::OneMinusTwoX => spinlogic::Convention::OneMinusTwoX,
            ConventionArg::TwoXMinusOne => spinlogic::Convention::TwoXMinusOne,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[value(name = "2local")]
    TwoLocal,
    #[value(name = "klocal")]
    KLocal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolyFormat {
    Bool,
    Spin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    /// Smallest largest coefficient, then smallest sum.
    Max,
    Sum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Parity,
    TwoMediator,
}

#[derive(Subcommand)]
pub enum Command {
    /// Lower a netlist to an Ising-model file.
    Compile {
        netlist: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long, value_enum, default_value = "2local")]
        mode: ModeArg,
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
        /// Enumerate the result and compare it with the circuit.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Check catalogue gadgets exhaustively.
    Verify {
        /// Gadget name, or `all`.
        #[arg(long, default_value = "all")]
        gadget: String,
        /// Catalogue file to read instead of the built-in one.
        #[arg(long)]
        catalogue: Option<PathBuf>,
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
        #[arg(long, value_enum, default_value = "bool")]
        format: PolyFormat,
    },
    /// Search for a penalty polynomial realising a relation.
    Synthesize {
        /// Truth table over the logical slots, output slot last.
        #[arg(long)]
        relation: PathBuf,
        #[arg(long, default_value_t = 0)]
        mediators: usize,
        #[arg(long, default_value = "1")]
        gap: String,
        #[arg(long, value_enum, default_value = "max")]
        objective: ObjectiveArg,
        #[arg(long, value_enum, default_value = "bool")]
        format: PolyFormat,
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
        /// Name used in the catalogue output.
        #[arg(long, default_value = "synthesized")]
        name: String,
        /// Write the gadget as a one-entry catalogue file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reduce a polynomial, spin product or level table to two-local form.
    Reduce {
        /// Polynomial file.
        input: Option<PathBuf>,
        /// Reduce J s_0 ... s_{k-1} for this k.
        #[arg(long, conflicts_with_all = ["input", "levels"])]
        sigma: Option<usize>,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        j: String,
        #[arg(long, value_enum, default_value = "parity")]
        variant: VariantArg,
        /// Diagonal shift added to the spin product (polynomial file).
        #[arg(long)]
        shift: Option<PathBuf>,
        /// File with one target energy per assignment.
        #[arg(long, conflicts_with = "input")]
        levels: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
        /// Check the restricted landscape against the target.
        #[arg(long)]
        verify: bool,
    },
    /// Enumerate the spectrum of a model or polynomial file.
    Spectrum {
        input: PathBuf,
        /// Logical qubits, comma separated; defaults to the file's roles.
        #[arg(long, value_delimiter = ',')]
        logical: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value = "text")]
        format: TableFormat,
        /// Also write the table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        cap: Option<usize>,
        /// Spin convention of a bare spin polynomial file.
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
    },
    /// Draw a Karnaugh map and a sum-of-products cover of a truth vector.
    Kmap {
        input: PathBuf,
        #[arg(long)]
        rows: Option<usize>,
        /// Variable names, comma separated.
        #[arg(long, value_delimiter = ',')]
        names: Option<Vec<String>>,
    },
    /// Find the ground states of a model, optionally clamping wires.
    Solve {
        model: PathBuf,
        /// `wire=value` or `qubit=value`.
        #[arg(long = "clamp")]
        clamps: Vec<String>,
        #[arg(long)]
        weight: Option<String>,
        #[arg(long)]
        cap: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config::Config::from_env() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    match commands::run(cli.command, &cfg) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
