//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::range::Range;

#[derive(Debug, Parser)]
#[command(
    name = "blender",
    version,
    about = "Certify blender-horseshoes of G(x,y,z) = (y, mu + y^2 + kappa y z + eta z^2, xi z + y)"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalOpts {
    /// Aperture of the u and uu cones.
    #[arg(long, global = true)]
    pub theta: Option<f64>,
    /// Aperture of the s cone, 0 < vartheta < 2 sqrt(5).
    #[arg(long, global = true)]
    pub vartheta: Option<f64>,
    /// Branch-and-bound subdivision depth limit.
    #[arg(long, global = true)]
    pub max_depth: Option<u32>,
    /// Worker threads for box and sweep runs.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Seed for sampled diagnostics.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// key = value file with any of the options above.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check BH1-BH6 at one parameter point.
    Verify(VerifyArgs),
    /// Check BH1-BH6 over a parameter box.
    CertifyBox(BoxArgs),
    /// Certify a perturbation radius for kappa and eta over a (xi, mu) box.
    CertifyEpsilon(EpsilonArgs),
    /// Grid of point or box checks, written as CSV.
    Sweep(SweepArgs),
    /// Nested-disc witness of a point of a flat uu-disc with bounded orbit.
    Disc(DiscArgs),
    /// Width growth of a strip of flat uu-discs until it crosses W^s(P).
    Strip(StripArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the JSON report to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Print the JSON report instead of the summary.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub xi: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub kappa: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub eta: f64,
    /// Interval arithmetic instead of plain binary64.
    #[arg(long)]
    pub rigorous: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BoxArgs {
    #[arg(long, allow_hyphen_values = true, default_value = "1.18:1.19")]
    pub xi: Range,
    #[arg(long, allow_hyphen_values = true, default_value = "-10:-9")]
    pub mu: Range,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub kappa: Range,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub eta: Range,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EpsilonArgs {
    #[arg(long, allow_hyphen_values = true, default_value = "1.18:1.19")]
    pub xi: Range,
    #[arg(long, allow_hyphen_values = true, default_value = "-10:-9")]
    pub mu: Range,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    /// One check per grid point.
    Point,
    /// One box certification per grid cell.
    Box,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Range,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Range,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub kappa: Range,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub eta: Range,
    #[arg(long, value_enum, default_value_t = SweepMode::Point)]
    pub mode: SweepMode,
    /// Interval arithmetic for point checks.
    #[arg(long)]
    pub rigorous: bool,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_cells: usize,
}

#[derive(Debug, Args)]
pub struct DiscArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.185)]
    pub xi: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = -9.5)]
    pub mu: f64,
    /// Height of the flat disc z = z0.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub z0: f64,
    #[arg(long, default_value_t = 30)]
    pub iters: usize,
    #[arg(long, default_value_t = blender_core::discs::DEFAULT_NODES)]
    pub nodes: usize,
    /// Directory for the CSV files.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StripArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.185)]
    pub xi: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = -9.5)]
    pub mu: f64,
    /// Heights of the member discs, lo:hi.
    #[arg(long, allow_hyphen_values = true, default_value = "-1:1")]
    pub z: Range,
    #[arg(long, default_value_t = blender_core::discs::DEFAULT_STRIP_MEMBERS)]
    pub members: usize,
    #[arg(long, default_value_t = 25)]
    pub iters: usize,
    #[arg(long, default_value_t = blender_core::discs::DEFAULT_NODES)]
    pub nodes: usize,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn grammar_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn negative_values_parse() {
        let c = Cli::try_parse_from(["blender", "verify", "--xi", "1.185", "--mu", "-9.5"]).unwrap();
        match c.command {
            Command::Verify(v) => assert_eq!(v.mu, -9.5),
            _ => panic!(),
        }
        let c = Cli::try_parse_from(["blender", "certify-box", "--mu", "-10:-9.5", "--max-depth", "8"]).unwrap();
        assert_eq!(c.global.max_depth, Some(8));
        match c.command {
            Command::CertifyBox(b) => assert_eq!((b.mu.lo, b.mu.hi), (-10.0, -9.5)),
            _ => panic!(),
        }
    }

    #[test]
    fn bad_range_is_rejected() {
        assert!(Cli::try_parse_from(["blender", "certify-box", "--xi", "1.19:1.18"]).is_err());
    }
}
