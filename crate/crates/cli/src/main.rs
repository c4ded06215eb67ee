//! `mandeldecor` command-line tool.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::*;

#[derive(Parser, Debug)]
#[command(name = "mandeldecor", version, about = "Decorated Mandelbrot sets and parabolic window asymptotics")]
struct Cli {
    /// Flat TOML file with settings for the subcommand; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Render the Mandelbrot set.
    RenderMandel(RenderMandelArgs),
    /// Render the Julia set of P_c.
    RenderJulia(RenderJuliaArgs),
    /// Render the decorated Mandelbrot set M(sigma).
    RenderDecorated(RenderDecoratedArgs),
    /// Render a zoom around a window center s_n.
    ZoomCopy(ZoomCopyArgs),
    /// Find the window centers s_n near a parabolic parameter (CSV).
    FindCenters(FindCentersArgs),
    /// Detect parabolic data and fit A0/B0 (TOML).
    FitConstants(FitConstantsArgs),
    /// Gate transit counts against eps (CSV).
    PhaseLaw(PhaseLawArgs),
    /// Fit the reciprocal center law to a center CSV.
    CenterLaw(CenterLawArgs),
    /// Reproduce the three panels of the decorated-set figure.
    Figure1(Figure1Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file = cli.config.as_deref();
    let result = match &cli.command {
        Command::RenderMandel(a) => render_mandel(a, file),
        Command::RenderJulia(a) => render_julia(a, file),
        Command::RenderDecorated(a) => render_decorated(a, file),
        Command::ZoomCopy(a) => zoom_copy(a, file),
        Command::FindCenters(a) => find_centers(a, file),
        Command::FitConstants(a) => fit_constants(a, file),
        Command::PhaseLaw(a) => phase_law(a, file),
        Command::CenterLaw(a) => center_law(a, file),
        Command::Figure1(a) => figure1(a, file),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
