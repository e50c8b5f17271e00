use clap::{Parser, Subcommand};
use gsv::commands::{self, Outcome};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "gsv",
    version,
    about = "Finite group structures, valuations, and block approximation"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a structure file and validate the axioms.
    CheckStructure { file: PathBuf },
    /// Quotient a structure by a normal subgroup.
    Quotient {
        file: PathBuf,
        /// Subgroup members, comma-separated element indices.
        #[arg(long, value_delimiter = ',', required = true)]
        by: Vec<usize>,
    },
    /// Fiber product of two morphisms over a common target.
    FiberProduct { first: PathBuf, second: PathBuf },
    /// Check a square of morphisms for the pullback property.
    CartesianCheck {
        p: PathBuf,
        q: PathBuf,
        alpha: PathBuf,
        phi: PathBuf,
    },
    /// Compute and validate a special partition.
    Partition {
        file: PathBuf,
        /// Points forced to become block bases.
        #[arg(long, value_delimiter = ',')]
        pins: Vec<usize>,
    },
    /// Extend a group surjection to a structure epimorphism.
    ExtendEpi {
        file: PathBuf,
        /// Morphism file between bare structures carrying the group map.
        map: PathBuf,
        #[arg(long, value_delimiter = ',')]
        pins: Vec<usize>,
    },
    /// Complete a cover to a cartesian square with finite bottom row.
    CompleteCartesian { file: PathBuf },
    /// Solve an embedding problem.
    SolveEmbedding {
        file: PathBuf,
        /// `direct` or `factored`.
        #[arg(long, default_value = "direct")]
        route: String,
    },
    /// Build a cover over a base structure from explicit lifted subgroups.
    BuildCover { file: PathBuf },
    /// Valuation of a rational, optionally against a patch expression.
    ValQuery {
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        value: String,
        #[arg(long)]
        expr: Option<String>,
    },
    /// Sharply lift an approximate root.
    HenselLift {
        #[arg(long)]
        prime: u64,
        /// Coefficients from degree zero up; comma-lists for one parameter.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// The approximate root.
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        /// Parameter center, comma-separated.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        base: String,
        /// Parameter point; defaults to `--base`.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(long, default_value_t = 0)]
        eps: i64,
        #[arg(long, default_value_t = 8)]
        prec: u32,
    },
    /// Split a valuation neighborhood into one standard ball per prime part.
    BallPartition {
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        #[arg(long)]
        primes: String,
        /// `coeff,e..;coeff,e..:bound`, repeatable.
        #[arg(long = "atom", allow_hyphen_values = true)]
        atoms: Vec<String>,
        #[arg(long, default_value_t = 100)]
        samples: u32,
    },
    /// Solve a block approximation problem given as JSON.
    BlockApprox { file: PathBuf },
    /// Re-check a file of emitted certificates.
    Verify { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::CheckStructure { file } => commands::check_structure(file),
        Cmd::Quotient { file, by } => commands::quotient(file, by),
        Cmd::FiberProduct { first, second } => commands::fiber_product_cmd(first, second),
        Cmd::CartesianCheck { p, q, alpha, phi } => commands::cartesian_check(p, q, alpha, phi),
        Cmd::Partition { file, pins } => commands::partition(file, pins),
        Cmd::ExtendEpi { file, map, pins } => commands::extend_epi(file, map, pins),
        Cmd::CompleteCartesian { file } => commands::complete_cartesian(file),
        Cmd::SolveEmbedding { file, route } => commands::solve_embedding(file, route),
        Cmd::BuildCover { file } => commands::build_cover(file),
        Cmd::ValQuery { prime, value, expr } => {
            commands::val_query(*prime, value, expr.as_deref())
        }
        Cmd::HenselLift {
            prime,
            poly,
            start,
            base,
            at,
            eps,
            prec,
        } => commands::hensel_lift(*prime, poly, start, base, at.as_deref(), *eps, *prec),
        Cmd::BallPartition {
            center,
            primes,
            atoms,
            samples,
        } => commands::ball_partition_cmd(center, primes, atoms, *samples),
        Cmd::BlockApprox { file } => commands::block_approx(file),
        Cmd::Verify { file } => commands::verify_file(file),
    };
    match result {
        Ok(Outcome::Pass(record)) => {
            println!("{record}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Fail(record)) => {
            println!("{record}");
            ExitCode::from(1)
        }
        Err(failure) => {
            eprintln!("gsv: {}", failure.0);
            ExitCode::from(2)
        }
    }
}
