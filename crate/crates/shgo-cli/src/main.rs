//! `shgo` — compute molecular integral tensors over real solid harmonic
//! Gaussians, cross-validate the fast engine against a Cartesian reference
//! and against direct quadrature, and benchmark both paths.

use clap::Parser;

fn main() {
    // Diagnostics go to standard error under SHGO_LOG (e.g. SHGO_LOG=debug);
    // reports and CSV on standard output stay deterministic.
    env_logger::Builder::from_env(env_logger::Env::new().filter("SHGO_LOG")).init();
    let cli = shgo_cli::Cli::parse();
    std::process::exit(shgo_cli::run(&cli));
}
