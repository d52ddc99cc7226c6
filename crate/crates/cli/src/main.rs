//! Command-line interface: reproducible spectra, wavefunction samples,
//! numerical-oracle runs, analytic/numeric comparisons and limit tables as
//! CSV or JSON.
//!
//! Exit codes: 0 success, 2 invalid parameters, 3 no bound levels,
//! 4 oracle failure. Output is assembled in memory and written in one shot,
//! so failed runs never leave partial files behind.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;
use std::process::ExitCode;

mod output;
mod run;

use run::Request;

#[derive(Parser)]
#[command(
    name = "dirac-bound",
    version,
    about = "Bound states of the Dirac equation with 1/r-singular vector potentials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PotentialArg {
    Hulthen,
    Eckart,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    Pos,
    Neg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleArg {
    Fd,
    ShootExact,
    ShootApprox,
}

#[derive(Args)]
struct CommonArgs {
    /// Potential family
    #[arg(value_enum)]
    potential: PotentialArg,
    /// Fermion mass (energy units, hbar = c = 1)
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    /// Screening parameter (inverse length)
    #[arg(long)]
    lambda: f64,
    /// Potential strength (energy); 0 < |v0| <= lambda
    #[arg(long, allow_negative_numbers = true)]
    v0: f64,
    /// Spin-orbit integer, nonzero
    #[arg(long, allow_negative_numbers = true)]
    kappa: i32,
    /// Energy branch
    #[arg(long, value_enum, default_value = "pos")]
    branch: BranchArg,
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Output path (standard output when omitted)
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Relative tolerance for numerical solvers
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Bound-level table for one branch
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Normalized spinor components of one level on a radial grid
    Wavefunction {
        #[command(flatten)]
        common: CommonArgs,
        /// Formula index of the level
        #[arg(long)]
        level: u32,
        /// Radial grid as rmin:rmax:npts (defaults to an auto range)
        #[arg(long)]
        grid: Option<String>,
    },
    /// Numerical spectrum from one of the solvers
    Oracle {
        #[command(flatten)]
        common: CommonArgs,
        /// Which solver to run
        #[arg(long, value_enum, default_value = "fd")]
        oracle: OracleArg,
    },
    /// Closed form vs both solvers, level by level
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated screening values replacing --lambda
        #[arg(long, value_delimiter = ',')]
        sweep_lambda: Option<Vec<f64>>,
    },
    /// Nonrelativistic and Coulomb-limit tables
    Limit {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated screening values for the Coulomb-limit sweep
        #[arg(long, value_delimiter = ',')]
        sweep_lambda: Option<Vec<f64>>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let request = Request::from_command(cli.command);
    match run::run(&request) {
        Ok(rendered) => {
            if let Some(path) = &request.out {
                if let Err(e) = std::fs::write(path, rendered) {
                    eprintln!("error[Io]: cannot write {}: {e}", path.display());
                    return ExitCode::from(4);
                }
            } else {
                print!("{rendered}");
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            let mut line = String::new();
            let _ = write!(line, "error[{}]: {}", err.category(), err);
            eprintln!("{line}");
            ExitCode::from(err.exit_code())
        }
    }
}
