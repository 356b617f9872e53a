//! Command-line front end for the tangentia solver: reads arrangement or
//! family specifications, runs the solvers, and emits solution sets,
//! count bounds, and region grids in machine-readable formats.
//!
//! Exit codes: 0 success, 1 malformed input or parameters, 2 degenerate
//! sphere configuration, 3 vanishing family discriminant, 4 verification
//! mismatch.

mod commands;
mod schema;

use std::fmt::Display;
use std::path::PathBuf;
use std::process;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tangentia::families::FamilyError;
use tangentia::formulation::FormulationError;
use tangentia::solver::{SolverError, TrackerConfig};

/// Environment variable consulted when `--seed` is absent.
pub const SEED_ENV: &str = "TANGENTIA_SEED";

#[derive(Parser)]
#[command(
    name = "tangentia",
    version,
    about = "Common tangent lines to 2n-2 spheres in R^n and quadrics in P^n",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalOpts,
}

#[derive(Args)]
struct GlobalOpts {
    /// Seed for every random choice; falls back to TANGENTIA_SEED, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest residual a certified solution may carry.
    #[arg(long = "tol-residual", global = true, value_name = "EPS")]
    tol_residual: Option<f64>,
    /// Projective distance below which endpoints merge into one solution.
    #[arg(long = "tol-dedup", global = true, value_name = "EPS")]
    tol_dedup: Option<f64>,
    /// Imaginary-part threshold for classifying a line as real.
    #[arg(long = "tol-reality", global = true, value_name = "EPS")]
    tol_reality: Option<f64>,
    /// Affine patch of direction space: "random" or "index:<i>".
    #[arg(long, global = true, default_value = "random", value_parser = parse_patch)]
    patch: PatchArg,
    /// Output format (default: json, except `region` which is CSV).
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Write the data artifact here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a sphere arrangement read from an arrangement JSON file.
    Solve {
        /// Arrangement file: {"n": ..., "spheres": [{"center": [...], "radius": ...}, ...]}.
        input: PathBuf,
    },
    /// Enumerate a closed-form family of arrangements.
    Family {
        /// Which family to enumerate.
        #[arg(value_enum)]
        name: FamilyName,
        /// Ambient dimension.
        #[arg(long)]
        n: usize,
        /// Family shape parameter (tetra-axes and perturbed only).
        #[arg(long)]
        a: Option<f64>,
        /// Common sphere radius.
        #[arg(long)]
        r: f64,
        /// Also track the arrangement numerically and report the worst
        /// matching distance against the closed form.
        #[arg(long = "verify-homotopy")]
        verify_homotopy: bool,
    },
    /// Classify an (a, r) parameter grid of the tetra-axes family by
    /// discriminant vanishing and solution reality (CSV output).
    Region {
        /// Ambient dimension (at least 4).
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        a_min: f64,
        #[arg(long, default_value_t = 4.0)]
        a_max: f64,
        #[arg(long, default_value_t = 100)]
        a_steps: usize,
        #[arg(long, default_value_t = 1.0)]
        r_min: f64,
        #[arg(long, default_value_t = 2.0)]
        r_max: f64,
        #[arg(long, default_value_t = 100)]
        r_steps: usize,
    },
    /// Print the sphere bound, quadric bound, and Grassmannian degree.
    Bound {
        /// Ambient dimension, between 3 and 16.
        n: usize,
    },
    /// Re-check a solutions file against its arrangement: residuals,
    /// moment constraints, reality flags, and conjugate pairing.
    Verify {
        /// Arrangement JSON the solutions claim to solve.
        arrangement: PathBuf,
        /// Solutions JSON produced by `solve`, `family`, or `quadrics`.
        solutions: PathBuf,
    },
    /// Solve 2n-2 general quadrics in P^n read from a quadrics JSON file.
    Quadrics {
        /// Quadrics file: {"n": ..., "quadrics": [{"matrix": [[...], ...]}, ...]}.
        input: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    /// Tetrahedron vertices plus axis spheres at ±a·e_j (n ≥ 4).
    TetraAxes,
    /// Crosspolytope vertices ±e_j, equal radii (n ≥ 3).
    Crosspolytope,
    /// Crosspolytope with one vertex moved to a·e_2 (n ≥ 3).
    Perturbed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

/// Dehomogenization chart for the direction coordinates.
#[derive(Clone, Debug)]
enum PatchArg {
    /// Seeded random complex functional (excludes nothing generically).
    Random,
    /// Coordinate chart v_i = 1.
    Index(usize),
}

fn parse_patch(s: &str) -> Result<PatchArg, String> {
    if s == "random" {
        return Ok(PatchArg::Random);
    }
    if let Some(rest) = s.strip_prefix("index:") {
        return rest
            .parse::<usize>()
            .map(PatchArg::Index)
            .map_err(|_| format!("invalid patch index {rest:?}"));
    }
    Err(format!("expected \"random\" or \"index:<i>\", got {s:?}"))
}

/// Everything a command needs besides its own arguments: resolved
/// tracker configuration, patch choice, output format, and destination.
struct RunManifest {
    config: TrackerConfig,
    patch: PatchArg,
    format: Option<OutputFormat>,
    out: Option<PathBuf>,
}

impl RunManifest {
    fn from_opts(g: &GlobalOpts) -> Result<Self, CliError> {
        let defaults = TrackerConfig::default();
        let config = TrackerConfig {
            seed: resolve_seed(g.seed)?,
            residual_tol: g.tol_residual.unwrap_or(defaults.residual_tol),
            dedup_tol: g.tol_dedup.unwrap_or(defaults.dedup_tol),
            reality_tol: g.tol_reality.unwrap_or(defaults.reality_tol),
            ..defaults
        };
        Ok(RunManifest {
            config,
            patch: g.patch.clone(),
            format: g.format,
            out: g.out.clone(),
        })
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::input(format!(
                "{SEED_ENV} must be an unsigned 64-bit integer, got {v:?}"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(CliError::input(format!("{SEED_ENV}: {e}"))),
    }
}

/// An error already mapped to its process exit code.
pub struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn new(code: i32, message: impl Display) -> Self {
        CliError {
            code,
            message: message.to_string(),
        }
    }

    /// Malformed input file, parameter, or environment (exit 1).
    pub fn input(message: impl Display) -> Self {
        Self::new(1, message)
    }

    /// Geometrically degenerate configuration (exit 2).
    pub fn degenerate(message: impl Display) -> Self {
        Self::new(2, message)
    }

    /// Vanishing discriminant of a closed-form family (exit 3).
    pub fn discriminant(message: impl Display) -> Self {
        Self::new(3, message)
    }

    /// Verification mismatch (exit 4).
    pub fn mismatch(message: impl Display) -> Self {
        Self::new(4, message)
    }

    /// Exit 4 after the report has already been printed.
    pub fn silent_mismatch() -> Self {
        CliError {
            code: 4,
            message: String::new(),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match &e {
            SolverError::Formulation(FormulationError::AffinelyDependentCenters { .. }) => {
                Self::new(
                    2,
                    format!(
                        "{e}\nhint: use the `family` subcommand to enumerate symmetric \
                         arrangements in closed form"
                    ),
                )
            }
            SolverError::Formulation(FormulationError::DegenerateArrangement { .. })
            | SolverError::UnresolvedCluster { .. }
            | SolverError::NonFiniteSolutionSet { .. } => Self::degenerate(e),
            _ => Self::input(e),
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::DiscriminantVanishes { .. }
            | FamilyError::DegenerateRadius(_)
            | FamilyError::ZeroCoordinateRoot(_) => Self::discriminant(e),
            FamilyError::Solver(inner) => Self::from(inner),
            _ => Self::input(e),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let manifest = RunManifest::from_opts(&cli.global)?;
    match cli.command {
        Command::Solve { input } => commands::cmd_solve(&input, &manifest),
        Command::Family {
            name,
            n,
            a,
            r,
            verify_homotopy,
        } => commands::cmd_family(name, n, a, r, verify_homotopy, &manifest),
        Command::Region {
            n,
            a_min,
            a_max,
            a_steps,
            r_min,
            r_max,
            r_steps,
        } => commands::cmd_region(n, a_min, a_max, a_steps, r_min, r_max, r_steps, &manifest),
        Command::Bound { n } => commands::cmd_bound(n, &manifest),
        Command::Verify {
            arrangement,
            solutions,
        } => commands::cmd_verify(&arrangement, &solutions, &manifest),
        Command::Quadrics { input } => commands::cmd_quadrics(&input, &manifest),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    process::exit(0);
                }
                _ => {
                    eprint!("{e}");
                    process::exit(1);
                }
            }
        }
    };
    if let Err(e) = run(cli) {
        if !e.message.is_empty() {
            eprintln!("error: {}", e.message);
        }
        process::exit(e.code);
    }
}
