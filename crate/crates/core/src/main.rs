use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use filtra::cliio::{self, Command, Options, ReesDirection, TStructure, TensorKind};
use filtra::exactla::BaseRing;
use filtra::specseq::Convention;
use filtra::{par, Error};

/// Filtered and graded chain complexes, Rees modules and their spectral sequences.
///
/// Conventions: `t` has weight −1 and filtrations decrease (`X_n → X_{n−1}`).
/// Under the other common dictionary (`t` in weight +1, increasing
/// filtrations) negate every weight and level index. Worker threads come from
/// `FILTRA_THREADS`; output does not depend on it.
#[derive(Parser, Debug)]
#[command(name = "filtra", version)]
struct Cli {
    /// Base change inputs to z, q or fp:<p>; also the ring of `demo`.
    #[arg(long, global = true, value_parser = parse_ring)]
    ring: Option<BaseRing>,
    /// Weights of a constant tail written out in reports and checks.
    #[arg(long, global = true, default_value_t = 4)]
    tail_depth: u32,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Associated graded of a filtered complex or Rees module.
    Gr { input: PathBuf },
    /// Underlying complex of a filtered complex or Rees module.
    Underlying { input: PathBuf },
    /// Translate between filtered complexes and Rees modules.
    Rees {
        #[arg(value_enum)]
        direction: Direction,
        input: PathBuf,
    },
    /// Day tensor (graded, filtered) or derived tensor over R[t] (rees).
    Tensor {
        #[arg(value_enum)]
        kind: Kind,
        left: PathBuf,
        right: PathBuf,
    },
    /// Truncation for the standard or Beilinson t-structure.
    Truncate {
        #[arg(value_enum)]
        kind: Structure,
        input: PathBuf,
        /// Connectivity bound.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        degree: i64,
    },
    /// Page `E_R` of the spectral sequence of a filtration.
    Ss {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        pages: usize,
        #[arg(long, value_enum, default_value_t = Conv::Homological)]
        convention: Conv,
    },
    /// Run the invariant suite on an input; exits 2 if any check fails.
    Check { input: PathBuf },
    /// Homology by degree, weight or level.
    Homology { input: PathBuf },
    /// Worked examples.
    Demo,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Direction {
    To,
    From,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Graded,
    Filtered,
    Rees,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Structure {
    Standard,
    Beilinson,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Conv {
    Homological,
    Serre,
}

fn parse_ring(s: &str) -> Result<BaseRing, String> {
    BaseRing::parse(s).map_err(|e| e.to_string())
}

fn command(cmd: Cmd) -> Command {
    match cmd {
        Cmd::Gr { input } => Command::Gr { input },
        Cmd::Underlying { input } => Command::Underlying { input },
        Cmd::Rees { direction, input } => Command::Rees {
            direction: match direction {
                Direction::To => ReesDirection::To,
                Direction::From => ReesDirection::From,
            },
            input,
        },
        Cmd::Tensor { kind, left, right } => Command::Tensor {
            kind: match kind {
                Kind::Graded => TensorKind::Graded,
                Kind::Filtered => TensorKind::Filtered,
                Kind::Rees => TensorKind::Rees,
            },
            left,
            right,
        },
        Cmd::Truncate { kind, input, degree } => Command::Truncate {
            kind: match kind {
                Structure::Standard => TStructure::Standard,
                Structure::Beilinson => TStructure::Beilinson,
            },
            degree,
            input,
        },
        Cmd::Ss { input, pages, convention } => Command::Ss {
            input,
            pages,
            convention: match convention {
                Conv::Homological => Convention::Homological,
                Conv::Serre => Convention::Serre,
            },
        },
        Cmd::Check { input } => Command::Check { input },
        Cmd::Homology { input } => Command::Homology { input },
        Cmd::Demo => Command::Demo,
    }
}

fn main() -> ExitCode {
    par::init_from_env();
    let cli = Cli::parse();
    let opts = Options { ring: cli.ring, tail_depth: cli.tail_depth };
    let (text, code) = match cliio::run(&command(cli.command), &opts) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            (out.text, if out.success { 0 } else { 2 })
        }
        Err(e) => {
            eprint!("{}", cliio::error_document(&e));
            return ExitCode::from(1);
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprint!("{}", cliio::error_document(&e));
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
