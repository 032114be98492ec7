use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use radiuslab::{DimRange, EvalConfig, HarnessError, OutputFormat, RunConfig, SharpnessConfig, SuiteReport};
use radiuslab_core::bounds::{parse_bound_list, BoundSpec, DEFAULT_TOL_REL};
use radiuslab_core::ensembles::EnsembleKind;
use radiuslab_core::radius::SweepConfig;

#[derive(Parser)]
#[command(
    name = "radiuslab",
    version,
    about = "Check numerical-radius inequalities on random matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate bounds over an ensemble and report slack statistics.
    Verify {
        /// Comma-separated ids such as `kittaneh03,power_mean@0.25`, or `all` / `lemmas`.
        #[arg(long, default_value = "all")]
        bounds: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Check that one bound's right side never exceeds another's.
    Compare {
        #[arg(long)]
        tighter: BoundSpec,
        #[arg(long)]
        looser: BoundSpec,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Search for inputs that make a bound as tight as possible.
    Sharpness {
        #[arg(long)]
        bound: BoundSpec,
        #[arg(long, default_value_t = 64)]
        starts: usize,
        #[arg(long, default_value_t = 500)]
        steps: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Evaluate bounds on a matrix stored as JSON.
    Eval {
        #[arg(long)]
        matrix: PathBuf,
        /// Second operand for pair bounds; the adjoint of the matrix by default.
        #[arg(long)]
        other: Option<PathBuf>,
        #[arg(long, default_value = "all")]
        bounds: String,
        #[command(flatten)]
        numeric: NumericArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct NumericArgs {
    /// Relative slack tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL_REL)]
    tol: f64,
    /// Coarse θ grid size of the radius sweep.
    #[arg(long, default_value_t = SweepConfig::default().coarse_grid)]
    grid: usize,
    #[arg(long, default_value_t = SweepConfig::default().refine_tol)]
    refine_tol: f64,
}

impl NumericArgs {
    fn sweep(&self) -> SweepConfig {
        SweepConfig {
            coarse_grid: self.grid,
            refine_tol: self.refine_tol,
            ..SweepConfig::default()
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value = "ginibre")]
    ensemble: EnsembleKind,
    /// Ensemble of the second operand; defaults to --ensemble.
    #[arg(long)]
    pair_ensemble: Option<EnsembleKind>,
    /// `N` or an inclusive range `LO-HI`.
    #[arg(long, default_value = "2-16")]
    dim: DimRange,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    numeric: NumericArgs,
    #[command(flatten)]
    output: OutputArgs,
}

impl RunArgs {
    fn config(&self, bounds: Vec<BoundSpec>) -> RunConfig {
        RunConfig {
            bounds,
            ensemble: self.ensemble,
            pair_ensemble: self.pair_ensemble,
            dims: self.dim,
            scale: self.scale,
            trials: self.trials,
            seed: self.seed,
            tol_rel: self.numeric.tol,
            sweep: self.numeric.sweep(),
            output_path: self.output.out.clone(),
            output_format: self.output.format,
        }
    }
}

fn run(command: Command) -> Result<SuiteReport, HarnessError> {
    let (report, output) = match command {
        Command::Verify { bounds, run } => {
            let config = run.config(parse_bound_list(&bounds)?);
            (radiuslab::verify(&config)?, run.output)
        }
        Command::Compare { tighter, looser, run } => {
            let config = run.config(vec![tighter, looser]);
            (radiuslab::compare(&config, tighter, looser)?, run.output)
        }
        Command::Sharpness {
            bound,
            starts,
            steps,
            run,
        } => {
            let search = SharpnessConfig {
                starts,
                steps,
                ..SharpnessConfig::default()
            };
            (
                radiuslab::sharpness(&run.config(vec![bound]), bound, &search)?,
                run.output,
            )
        }
        Command::Eval {
            matrix,
            other,
            bounds,
            numeric,
            output,
        } => {
            let config = EvalConfig {
                matrix_path: matrix,
                other_path: other,
                bounds: parse_bound_list(&bounds)?,
                tol_rel: numeric.tol,
                sweep: numeric.sweep(),
            };
            (radiuslab::eval(&config)?, output)
        }
    };
    report.write(output.out.as_deref(), output.format)?;
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            for line in report.summary_lines() {
                eprintln!("{line}");
            }
            if report.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
