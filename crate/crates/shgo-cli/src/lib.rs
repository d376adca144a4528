//! Library surface behind the `shgo` binary: the argument schema and the
//! compute / verify / bench drivers, factored as a library so integration
//! tests exercise the exact production code paths in-process.
//!
//! Exit-code contract: 0 success, 1 computation failure (including failed
//! verification and benchmark disagreement), 2 usage errors.

pub mod bench;
pub mod compute;
pub mod synth;
pub mod tolerances;
pub mod verify;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "shgo",
    version,
    about = "Molecular integrals over solid harmonic Gaussians: compute, verify, benchmark"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute an integral tensor for a molecule + basis and write it as a
    /// self-describing binary tensor file.
    Compute(ComputeArgs),
    /// Run the deterministic cross-validation suites.
    Verify(VerifyArgs),
    /// Time both engines on synthetic tasks and emit CSV.
    Bench(BenchArgs),
}

#[derive(clap::Args, Debug)]
pub struct ComputeArgs {
    /// XYZ molecule file; the comment line may carry `units=angstrom|bohr`
    /// (default angstrom).
    #[arg(long)]
    pub molecule: PathBuf,
    /// Basis set text file.
    #[arg(long)]
    pub basis: PathBuf,
    /// Which integrals to compute.
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Which engine computes them.
    #[arg(long, value_enum)]
    pub engine: EngineChoice,
    /// Output tensor path.
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads (default: one per core).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Disable primitive-pair screening.
    #[arg(long)]
    pub no_screening: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Overlap,
    Nuclear,
    Eri,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Overlap => "overlap",
            Kind::Nuclear => "nuclear",
            Kind::Eri => "eri",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineChoice {
    /// Solid-harmonic engine (rotated-frame coupling pipeline).
    Shgo,
    /// Cartesian-Gaussian reference engine (Hermite recurrences).
    Cgto,
}

impl EngineChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            EngineChoice::Shgo => "shgo",
            EngineChoice::Cgto => "cgto",
        }
    }
}

#[derive(clap::Args, Debug)]
pub struct VerifyArgs {
    /// quick: seconds-scale smoke suite; full: the complete cross-validation.
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Seed for every randomized case; the report is byte-identical per
    /// (suite, seed, lmax).
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Override the angular-momentum cap of the randomized checks.
    #[arg(long)]
    pub lmax: Option<usize>,
    /// Debug hook: corrupt one engine value to exercise the failure path.
    #[arg(long, hide = true)]
    pub corrupt: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Quick,
    Full,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Quick => "quick",
            Suite::Full => "full",
        }
    }
}

#[derive(clap::Args, Debug)]
pub struct BenchArgs {
    /// Integral kind to benchmark.
    #[arg(long, value_enum)]
    pub kind: BenchKind,
    /// Highest angular momentum (inclusive).
    #[arg(long)]
    pub lmax: usize,
    /// Primitives per shell.
    #[arg(long)]
    pub nprim: usize,
    /// Timing repetitions per row; the median is reported alongside min/max.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(5..))]
    pub reps: u32,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads (default 1 for stable ratios; > 1 additionally reports
    /// thread scaling of the assembly path).
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchKind {
    Nuclear,
    Eri,
}

impl BenchKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BenchKind::Nuclear => "nuclear",
            BenchKind::Eri => "eri",
        }
    }
}

/// Dispatches a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match &cli.command {
        Command::Compute(args) => match compute::cmd_compute(args) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        },
        Command::Verify(args) => {
            if let Some(l) = args.lmax {
                if l > shgo_core::io::L_MAX {
                    eprintln!(
                        "usage error: --lmax {l} exceeds the supported maximum {}",
                        shgo_core::io::L_MAX
                    );
                    return 2;
                }
            }
            verify::cmd_verify(args)
        }
        Command::Bench(args) => {
            if args.lmax > shgo_core::io::L_MAX {
                eprintln!(
                    "usage error: --lmax {} exceeds the supported maximum {}",
                    args.lmax,
                    shgo_core::io::L_MAX
                );
                return 2;
            }
            if args.nprim == 0 {
                eprintln!("usage error: --nprim must be at least 1");
                return 2;
            }
            match bench::cmd_bench(args) {
                Ok(code) => code,
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
    }
}
