//! Command-line front end for the series solver: problem classification,
//! high-precision evaluation, coefficient dumps, growth profiles, apriori
//! term-count estimates, and a self-check corpus.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use frobeval_core::Error;

/// Series solutions of p(z) psi'' + q(z) psi' + r(z) psi = 0 about z = 0,
/// with apriori estimates of coefficient growth and term counts.
///
/// Problem files are JSON, either explicit polynomials
/// {"p": [...], "q": [...], "r": [...]} with exact rational or decimal
/// coefficient strings (lowest order first), or a potential in normal form
/// {"canonical": {"nu_plus": "1", "nu_minus": "0", "v": ["0","0","1"]}}.
/// Pass "-" to read the file from stdin. Complex command-line values are
/// written re,im; both parts accept rationals like 7/3 and decimals.
#[derive(Parser)]
#[command(name = "frobeval", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit one JSON envelope {schema_version, command, result} instead of
    /// text or CSV.
    #[arg(long, global = true)]
    json: bool,

    /// Omit wall-clock timing from reports so identical invocations produce
    /// byte-identical output.
    #[arg(long, global = true)]
    reproducible: bool,

    /// Worker threads for independent grid points (profiles only).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Report the origin type, indicial roots and recursion case.
    Classify {
        /// Problem file (JSON), or - for stdin.
        file: PathBuf,
    },
    /// Evaluate a solution and its derivative at a point.
    Solve {
        /// Problem file (JSON), or - for stdin.
        file: PathBuf,
        /// Evaluation point, re[,im].
        #[arg(long)]
        at: String,
        /// Decimal digits requested in the result.
        #[arg(long, default_value_t = 50)]
        precision: u32,
        /// Which expansion to use at a singular origin: nu1, nu2 or log.
        #[arg(long)]
        solution: Option<String>,
        /// Initial data a0;a1 for an ordinary origin (default 1;1).
        #[arg(long)]
        init: Option<String>,
        /// Intermediate continuation points z1;z2;..., visited in order
        /// before --at. The first point is reached directly from the origin.
        #[arg(long)]
        path: Option<String>,
    },
    /// Stream series coefficients as CSV.
    Coeffs {
        /// Problem file (JSON), or - for stdin.
        file: PathBuf,
        /// Number of coefficient pairs to emit.
        #[arg(long)]
        count: usize,
        /// Which expansion to use at a singular origin: nu1, nu2 or log.
        #[arg(long)]
        solution: Option<String>,
        /// Initial data a0;a1 for an ordinary origin (default 1;1).
        #[arg(long)]
        init: Option<String>,
        /// Decimal digits per coefficient when exact output is impossible
        /// (irrational indicial root).
        #[arg(long, default_value_t = 50)]
        precision: u32,
    },
    /// Predict the coefficient peak and the series length needed at a point.
    ///
    /// Works on normal-form problems only. The point and the reported term
    /// count live in the squared variable, whose power series carries one
    /// term per two powers of the original variable.
    Estimate {
        /// Problem file (JSON) with a canonical block, or - for stdin.
        file: PathBuf,
        /// Evaluation point in the squared variable; real, positive.
        #[arg(long)]
        at: String,
        /// Decimal digits the evaluation should reach.
        #[arg(long, default_value_t = 50)]
        precision: u32,
        /// Which expansion the estimate is for: nu1 or nu2.
        #[arg(long, default_value = "nu2")]
        solution: String,
    },
    /// Tabulate the coefficient growth profile S(u) as CSV.
    Profile {
        /// Problem file (JSON) with a canonical block, or - for stdin.
        file: PathBuf,
        /// Log-radius grid lo:hi:count (count evenly spaced points).
        #[arg(long)]
        u: String,
        /// Tabulate against the problem's own variable instead of its square.
        #[arg(long)]
        y_variable: bool,
    },
    /// Emit the coin-toss distribution comparison table as CSV.
    DemoBinomial {
        /// Number of coin tosses.
        #[arg(long)]
        n: u32,
    },
    /// Run the built-in self-check corpus; nonzero exit on any failure.
    Validate,
}

/// Exit-code contract: 0 ok, 2 parse/validation, 3 unsupported
/// classification, 4 convergence or numeric failure.
fn exit_code(e: &Error) -> u8 {
    use Error::*;
    match e {
        InvalidInput(_)
        | Parse { .. }
        | InvalidPrecision
        | NonFiniteMagnitude(_)
        | GridNotIncreasing(_)
        | GridTooShort { .. }
        | ExtrapolationOutOfRange { .. } => 2,
        IrregularSingularPoint
        | WrongClassification { .. }
        | InvalidShift { .. }
        | IndicialNotReal
        | NoSuchSolution(_)
        | CenterEvaluationUnsupported
        | LogSeriesUnsupported => 3,
        RecursionBreakdown { .. }
        | OutsideConvergenceDisc { .. }
        | Divergence { .. }
        | StepNearSingularity { .. }
        | NonConvex { .. }
        | PathObstruction { .. }
        | PhaseScanFailed { .. }
        | ProfileNotConvex { .. }
        | MbarNotMonotone { .. }
        | CriterionUnreachable => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = commands::Ctx {
        json: cli.json,
        reproducible: cli.reproducible,
        jobs: cli.jobs.max(1),
    };
    let outcome = match &cli.command {
        Command::Classify { file } => commands::classify(&ctx, file),
        Command::Solve { file, at, precision, solution, init, path } => commands::solve(
            &ctx,
            file,
            at,
            *precision,
            solution.as_deref(),
            init.as_deref(),
            path.as_deref(),
        ),
        Command::Coeffs { file, count, solution, init, precision } => {
            commands::coeffs(&ctx, file, *count, solution.as_deref(), init.as_deref(), *precision)
        }
        Command::Estimate { file, at, precision, solution } => {
            commands::estimate(&ctx, file, at, *precision, solution)
        }
        Command::Profile { file, u, y_variable } => {
            commands::profile(&ctx, file, u, *y_variable)
        }
        Command::DemoBinomial { n } => commands::demo_binomial(&ctx, *n),
        Command::Validate => return commands::validate(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
