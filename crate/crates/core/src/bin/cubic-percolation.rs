use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cubic_percolation::certificate::verify_threshold;
use cubic_percolation::runner::{self, ExperimentConfig, RunOptions};
use cubic_percolation::stats::{parse_probability, plan, Direction};
use cubic_percolation::transfer::{
    transfer_matrix_with, Convention, Exclusion, Orientation, PathLength, TransferMatrix,
};
use cubic_percolation::Error;

#[derive(Parser)]
#[command(
    version,
    about = "Certified confidence intervals for cubic-lattice percolation thresholds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run (or resume) the experiment described by a key=value config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads [default: $CUBIC_PERCOLATION_WORKERS or core count]
        #[arg(long)]
        workers: Option<usize>,
        /// Mark the seed range as a final run in this ledger file.
        #[arg(long)]
        final_ledger: Option<PathBuf>,
    },
    /// Print the success threshold needed for a given number of trials.
    Plan {
        #[arg(long)]
        direction: DirectionArg,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value = "0.999999")]
        alpha: String,
        /// Certification probability [default: 3/100 lower, 0.8639 upper]
        #[arg(long)]
        p0: Option<String>,
    },
    /// Combine finished lower and upper record files into an interval.
    Report {
        #[arg(long)]
        lower: PathBuf,
        #[arg(long)]
        upper: PathBuf,
        #[arg(long, default_value = "0.999999")]
        alpha: String,
    },
    /// Enumerate minimal paths and print the k-step count matrix.
    TransferMatrix {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ExclusionArg::Independent)]
        exclusion: ExclusionArg,
        #[arg(long, value_enum, default_value_t = LengthArg::NewBlocks)]
        length: LengthArg,
        #[arg(long, value_enum, default_value_t = OrientationArg::EndByStart)]
        orientation: OrientationArg,
    },
    /// Check the exact root bound for the six-step matrix.
    VerifyThreshold {
        /// Enumerate the matrix (default convention) instead of using the
        /// printed one.
        #[arg(long)]
        enumerate: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Lower,
    Upper,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExclusionArg {
    Independent,
    Minimal,
}

#[derive(Clone, Copy, ValueEnum)]
enum LengthArg {
    NewBlocks,
    TotalSteps,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    EndByStart,
    StartByEnd,
}

/// Ok(true) = success, Ok(false) = certification failed.
fn execute(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Run {
            config,
            workers,
            final_ledger,
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            let outcome = runner::run_experiment(
                &cfg,
                &RunOptions {
                    workers,
                    final_ledger,
                },
            )?;
            let plan = cfg.plan()?;
            println!(
                "{} {} scale={} p={} seeds={}..={}",
                cfg.mode,
                cfg.kind,
                cfg.scale,
                cubic_percolation::stats::render_decimal(&cfg.p),
                cfg.seeds().start(),
                cfg.seeds().end()
            );
            println!("successes: {}/{}", outcome.successes, cfg.trials);
            println!(
                "plan threshold: {} ({})",
                plan.threshold,
                if plan.passes(outcome.successes) {
                    "met"
                } else {
                    "not met"
                }
            );
            println!("records: {}", cfg.output.display());
            Ok(true)
        }
        Command::Plan {
            direction,
            trials,
            alpha,
            p0,
        } => {
            let direction = match direction {
                DirectionArg::Lower => Direction::Lower,
                DirectionArg::Upper => Direction::Upper,
            };
            let p0 = match p0 {
                Some(text) => parse_probability(&text)?,
                None => direction.reference_constant().rational(),
            };
            let alpha = parse_probability(&alpha)?;
            print!("{}", plan(direction, trials, &alpha, &p0)?.render());
            Ok(true)
        }
        Command::Report {
            lower,
            upper,
            alpha,
        } => {
            let alpha = parse_probability(&alpha)?;
            let report = runner::report(&lower, &upper, &alpha)?;
            print!("{}", report.render());
            Ok(report.verdict.fully_certified())
        }
        Command::TransferMatrix {
            k,
            exclusion,
            length,
            orientation,
        } => {
            let convention = Convention {
                exclusion: match exclusion {
                    ExclusionArg::Independent => Exclusion::Independent,
                    ExclusionArg::Minimal => Exclusion::Minimal,
                },
                length: match length {
                    LengthArg::NewBlocks => PathLength::NewBlocks,
                    LengthArg::TotalSteps => PathLength::TotalSteps,
                },
                orientation: match orientation {
                    OrientationArg::EndByStart => Orientation::EndByStart,
                    OrientationArg::StartByEnd => Orientation::StartByEnd,
                },
            };
            print!("{}", transfer_matrix_with(k, convention)?.render());
            Ok(true)
        }
        Command::VerifyThreshold { enumerate } => {
            let m = if enumerate {
                transfer_matrix_with(6, Convention::default())?
            } else {
                TransferMatrix::reference()
            };
            print!("{}", m.render());
            match verify_threshold(&m) {
                Ok(cert) => {
                    print!("{}", cert.render());
                    Ok(true)
                }
                Err(Error::CertificationFailed(msg)) => {
                    println!("certification failed: {msg}");
                    Ok(false)
                }
                Err(e) => Err(e),
            }
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
