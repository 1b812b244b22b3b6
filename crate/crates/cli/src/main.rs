mod commands;
mod output;
mod reproduce;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Exit codes.
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_UNDETERMINED: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "gosset",
    version,
    about = "Manifolds and algebraic fibrations from the right-angled Gosset polytopes"
)]
pub struct Cli {
    /// Directory caching built polytopes.
    #[arg(long, env = "GOSSET_CACHE_DIR", global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,
    /// Run single-threaded.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Polytope combinatorics.
    Polytope {
        #[command(subcommand)]
        action: PolytopeAction,
    },
    /// Colouring files.
    Colouring {
        #[command(subcommand)]
        action: ColouringAction,
    },
    /// Euler characteristic, Betti numbers, cusps and volume of Mⁿ.
    Manifold {
        n: usize,
        #[arg(long)]
        colouring: Option<PathBuf>,
        /// Sum over every colour subset instead of one per symmetry orbit.
        #[arg(long)]
        full_sum: bool,
    },
    /// Orbits of states.
    Orbit {
        #[command(subcommand)]
        action: OrbitAction,
    },
    /// Cusp census and the restriction of the diagonal map to each cusp.
    Cusps {
        n: usize,
        #[arg(long)]
        colouring: Option<PathBuf>,
        #[arg(long)]
        state: Option<PathBuf>,
    },
    /// Volumes of M³..M⁸.
    Volumes,
    /// Re-derive every published number and report pass/fail.
    #[command(name = "reproduce-paper")]
    Reproduce {
        /// Skip the n = 8 Betti sum and orbit check.
        #[arg(long)]
        skip_heavy: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum PolytopeAction {
    /// Counts, degree, face vector, χ and independence number.
    Info { n: usize },
}

#[derive(Subcommand, Debug)]
pub enum ColouringAction {
    /// Check a colouring file against the polytope.
    Validate { n: usize, file: PathBuf },
    /// Print the built-in colouring as JSON.
    Show { n: usize },
}

#[derive(Subcommand, Debug)]
pub enum OrbitAction {
    /// Legality of the orbit of a state.
    Check {
        n: usize,
        #[arg(long)]
        colouring: Option<PathBuf>,
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long, default_value_t = gosset::complex::DEFAULT_PI1_BUDGET)]
        pi1_budget: u64,
        /// Print the Euler characteristic double count.
        #[arg(long)]
        euler_check: bool,
        /// Also count states up to isomorphism.
        #[arg(long)]
        state_classes: bool,
        /// Include the per-state class table in JSON output.
        #[arg(long)]
        per_state: bool,
    },
    /// Check the orbits of seeded random states.
    Search {
        n: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = gosset::complex::DEFAULT_PI1_BUDGET)]
        pi1_budget: u64,
    },
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return EXIT_IO;
        }
        if let Some(gosset::Error::Io(_)) = cause.downcast_ref::<gosset::Error>() {
            return EXIT_IO;
        }
    }
    EXIT_VALIDATION
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
