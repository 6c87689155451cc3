//! `bmpoisson`: moment tables, labelling counts, convergence series and
//! operator checks.

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bm_poisson::Error;

#[derive(Parser, Debug)]
#[command(name = "bmpoisson", version, about = "Moments of bm-Poisson operators over symmetric cones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pretty,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Series {
    /// `|labellings| / v(ρ)^b` for one partition
    Ratio,
    /// finite-index moment evaluated at `--lambda`
    Moment,
    /// estimate of the volume characteristic `γ_m`
    Gamma,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Limit moments m_p(λ) as exact polynomials.
    Moments {
        /// Cone descriptor such as orthant:2, lorentz:1 or psd:2; repeatable.
        #[arg(long, required = true)]
        cone: Vec<String>,
        /// A single order `N` or an inclusive range `a..b`.
        #[arg(long, default_value = "1..6")]
        p: String,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
        /// Annotate each entry against the published tables.
        #[arg(long, visible_alias = "compare-paper")]
        compare_reference: bool,
    },
    /// Labelling counts of partitions at one index.
    Count {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        rho: String,
        /// A partition such as "{{1,4},{2},{3}}"; repeatable.
        #[arg(long, conflicts_with = "all")]
        partition: Vec<String>,
        /// Every noncrossing pair/inner-singleton partition of [N].
        #[arg(long)]
        all: Option<usize>,
        /// Also run the brute-force scan over label sequences.
        #[arg(long)]
        naive: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// A quantity along the index schedule, with its limit and error.
    Converge {
        #[arg(long)]
        cone: String,
        #[arg(long, value_enum, default_value_t = Series::Ratio)]
        series: Series,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, default_value = "{{1,4},{2,3}}")]
        partition: String,
        #[arg(long, default_value_t = 4)]
        p: usize,
        #[arg(long, default_value = "0")]
        lambda: String,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// The one-site moments a_p(λ), their two-atom measure and transforms.
    Appendix {
        #[arg(long, default_value_t = 6)]
        p_max: usize,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        lambda: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.5")]
        x: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
    },
    /// Vacuum moment of the sum operator on the Fock model.
    FockMoment {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        rho: String,
        #[arg(long)]
        p: usize,
        /// λ as a decimal or, with --exact, a rational like 3/2.
        #[arg(long, default_value = "1")]
        lambda: String,
        /// Exact rational value; needs a rational interval volume.
        #[arg(long)]
        exact: bool,
        /// Print the whole polynomial in λ.
        #[arg(long)]
        poly: bool,
        #[arg(long, default_value_t = 4096)]
        max_sites: u128,
    },
    /// Commutation relations and bm-independence on the Fock model.
    FockCheck {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        rho: String,
        #[arg(long, default_value_t = 64)]
        max_sites: u128,
    },
}

/// Failure of a command, mapped onto the exit code.
#[derive(Debug)]
pub enum Failure {
    Lib(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OracleMismatch(m) => Failure::Mismatch(m),
            e => Failure::Lib(e),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::Infeasible { .. }) => 2,
            Failure::Mismatch(_) => 3,
            Failure::Lib(_) => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Moments { cone, p, format, compare_reference } => {
            commands::moments(&cone, &p, format, compare_reference)
        }
        Command::Count { cone, rho, partition, all, naive, format } => {
            commands::count(&cone, &rho, &partition, all, naive, format)
        }
        Command::Converge { cone, series, steps, partition, p, lambda, m, format } => {
            commands::converge(&cone, series, steps, &partition, p, &lambda, m, format)
        }
        Command::Appendix { p_max, lambda, x, format } => commands::appendix(p_max, &lambda, &x, format),
        Command::FockMoment { cone, rho, p, lambda, exact, poly, max_sites } => {
            commands::fock_moment(&cone, &rho, p, &lambda, exact, poly, max_sites)
        }
        Command::FockCheck { cone, rho, max_sites } => commands::fock_check(&cone, &rho, max_sites),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Mismatch(m) => eprintln!("mismatch: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
