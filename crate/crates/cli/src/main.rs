use clap::{Parser, Subcommand, ValueEnum};
use mcomb_core::mincomb::MinCombError;
use mcomb_core::oracle::DEFAULT_MAX_ITER;
use mcomb_core::report::{self, AnalyzeOptions, Format, OracleConfig, DEFAULT_MAX_MONOMIALS};
use mcomb_core::{PointSet, WeightTable};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Minimal combinations of rational point sets and critical points of the
/// moment map on degree-d forms in n variables.
#[derive(Parser, Debug)]
#[command(name = "mcomb", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate minimal combinations of monomial weights and build f_β for each.
    Analyze {
        #[arg(long = "vars", short = 'n')]
        vars: usize,
        #[arg(long = "degree", short = 'd')]
        degree: u32,
        /// Keep only β with non-increasing coordinates.
        #[arg(long)]
        weyl_only: bool,
        /// Keep only β in the relative interior of the weight polytope.
        #[arg(long)]
        interior_only: bool,
        /// Largest subset size to enumerate (default: number of variables).
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Omit the timestamp so repeated runs are byte-identical.
        #[arg(long)]
        reproducible: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_MONOMIALS)]
        max_monomials: u128,
    },
    /// Minimal combinations of a point set read from a JSON file.
    Mincomb {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        /// Cross-check every β against the floating-point nearest-point solver.
        #[arg(long)]
        oracle: bool,
        /// Relative duality-gap tolerance for --oracle.
        #[arg(long, default_value_t = 1e-15)]
        tol: f64,
        /// Iteration cap for --oracle; hitting it exits with status 2.
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the weight table (or, with --point-set, the weights as a point-set file).
    Weights {
        #[arg(long = "vars", short = 'n')]
        vars: usize,
        #[arg(long = "degree", short = 'd')]
        degree: u32,
        #[arg(long)]
        point_set: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Json,
    Table,
    Latex,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Json => Format::Json,
            OutputFormat::Table => Format::Table,
            OutputFormat::Latex => Format::Latex,
        }
    }
}

enum Failure {
    Usage(String),
    Oracle(String),
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze {
            vars,
            degree,
            weyl_only,
            interior_only,
            k_max,
            format,
            out,
            reproducible,
            max_monomials,
        } => {
            let opts = AnalyzeOptions {
                weyl_only,
                interior_only,
                k_max,
                reproducible,
                max_monomials,
                ..AnalyzeOptions::new(vars, degree)
            };
            let rep = report::analyze(&opts).map_err(|e| Failure::Usage(e.to_string()))?;
            emit(&report::render(&rep, format.into()), out.as_deref())
        }
        Command::Mincomb {
            input,
            format,
            oracle,
            tol,
            max_iter,
            k_max,
            out,
        } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", input.display())))?;
            let points = PointSet::from_json(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
            let cfg = oracle.then_some(OracleConfig { tol, max_iter });
            let records = report::run_mincomb(&points, k_max, cfg).map_err(|e| match e {
                MinCombError::OracleFailed { .. } => Failure::Oracle(e.to_string()),
                other => Failure::Usage(other.to_string()),
            })?;
            emit(
                &report::render_mincomb(&records, format.into()),
                out.as_deref(),
            )
        }
        Command::Weights {
            vars,
            degree,
            point_set,
            out,
        } => {
            if vars == 0 {
                return Err(Failure::Usage("need at least one variable".into()));
            }
            let table = WeightTable::new(vars, degree);
            let mut text = if point_set {
                serde_json::to_string_pretty(&table.point_set())
            } else {
                serde_json::to_string_pretty(&table)
            }
            .expect("weights serialize");
            text.push('\n');
            emit(&text, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Oracle(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
