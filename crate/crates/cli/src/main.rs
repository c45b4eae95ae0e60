use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use conical_census::{CensusTask, Strategy};
use conical_cli::acceptance;
use conical_cli::commands::{self, Failure, Format};
use conical_core::algebra::CoefficientMode;
use conical_core::spaces::{Flavor, Twist};

#[derive(Parser)]
#[command(name = "conical", version, about = "Cohomology of spaces of nonsingular hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Coefficients {
    Rational,
    Integral,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Table,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    BorelMoore,
    Ordinary,
}

#[derive(Clone, Copy, ValueEnum)]
enum TwistArg {
    Trivial,
    Sign,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Enumerate,
    Sieve,
}

#[derive(Subcommand)]
enum Command {
    /// Run the spectral-sequence pipeline on a built-in case or a spec file.
    Compute {
        #[arg(long)]
        case: Option<String>,
        #[arg(long, value_enum, default_value = "rational")]
        coefficients: Coefficients,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// Evaluate a JSON space or link expression (prefix with @ to read a file).
    Spaces {
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value = "borel-moore")]
        flavor: FlavorArg,
        #[arg(long, value_enum, default_value = "trivial")]
        twist: TwistArg,
        #[arg(long, value_enum, default_value = "rational")]
        coefficients: Coefficients,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Count smooth hypersurfaces (or nondegenerate quadric triples) over F_q.
    Census {
        #[arg(long, default_value_t = 3)]
        d: u32,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        kmax: Option<u32>,
        #[arg(long, value_enum, default_value = "sieve")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Triples of ternary quadratic forms instead of hypersurfaces.
        #[arg(long)]
        vf: bool,
        /// For plane quartics, also fit a model to counts at q = 2 and 3.
        #[arg(long)]
        fit: bool,
    },
    /// Run the acceptance suite.
    Check {
        #[arg(long, conflicts_with = "criterion")]
        all: bool,
        #[arg(long)]
        criterion: Vec<u32>,
    },
}

fn mode(c: Coefficients) -> CoefficientMode {
    match c {
        Coefficients::Rational => CoefficientMode::Rational,
        Coefficients::Integral => CoefficientMode::Integral,
    }
}

fn format(f: OutputFormat) -> Format {
    match f {
        OutputFormat::Table => Format::Table,
        OutputFormat::Json => Format::Json,
    }
}

fn check(all: bool, criteria: Vec<u32>) -> Result<String, Failure> {
    let ids: Vec<u32> = if all || criteria.is_empty() {
        acceptance::CRITERIA.iter().map(|(id, _)| *id).collect()
    } else {
        criteria
    };
    let mut failed = 0;
    for id in ids {
        let outcome = acceptance::run_criterion(id)
            .ok_or_else(|| Failure { code: commands::EXIT_USAGE, message: format!("no criterion {id}") })?;
        let _ = writeln!(std::io::stdout(), "{outcome}");
        failed += usize::from(!outcome.passed);
    }
    if failed > 0 {
        return Err(Failure { code: commands::EXIT_COMPUTATION, message: format!("{failed} criteria failed") });
    }
    Ok(String::new())
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Compute { case, coefficients, format: f, spec } => {
            commands::compute_case(case.as_deref(), spec.as_deref(), mode(coefficients), format(f))
        }
        Command::Spaces { expr, flavor, twist, coefficients, format: f } => {
            let text = match expr.strip_prefix('@') {
                Some(path) => std::fs::read_to_string(path)
                    .map_err(|e| Failure { code: commands::EXIT_USAGE, message: format!("{path}: {e}") })?,
                None => expr,
            };
            let flavor = match flavor {
                FlavorArg::BorelMoore => Flavor::BorelMoore,
                FlavorArg::Ordinary => Flavor::Ordinary,
            };
            let twist = match twist {
                TwistArg::Trivial => Twist::Trivial,
                TwistArg::Sign => Twist::Sign,
            };
            commands::evaluate_expr(&text, flavor, twist, mode(coefficients), format(f))
        }
        Command::Census { d, n, q, kmax, strategy, threads, vf, fit } => {
            let strategy = match strategy {
                StrategyArg::Enumerate => Strategy::Enumerate,
                StrategyArg::Sieve => Strategy::Sieve,
            };
            let mut task = if vf { CensusTask::vector_fields(q, strategy) } else { CensusTask::new(d, n, q, strategy) };
            task.k_max = kmax;
            task.threads = threads;
            commands::run_census(&task, fit)
        }
        Command::Check { all, criterion } => check(all, criterion),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            if !out.is_empty() {
                let mut stdout = std::io::stdout().lock();
                let end = if out.ends_with('\n') { "" } else { "\n" };
                let _ = write!(stdout, "{out}{end}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
