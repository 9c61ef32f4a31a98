use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gf_core::axioms::run_axiom_suite;
use gf_symexpr::ZeroPolicy;
use gfc::{resolve, run_pipeline, show, Mode, Outcome, PipelineOptions, ShowWhat};

const INPUT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "gfc", version, about = "Verify generalized Cartan equations on metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyMode {
    N1,
    N2vacuum,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Symbolic,
    Numeric,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Connection,
    Curvature,
    Spinor,
    Gfcoords,
}

#[derive(Subcommand)]
enum Command {
    /// Randomized check of the generalized-form algebra.
    Axioms {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Run a verification pipeline on a catalog metric or a `.gmet` file.
    Verify {
        #[arg(long)]
        metric: String,
        #[arg(long, value_enum, default_value_t = VerifyMode::All)]
        mode: VerifyMode,
        #[arg(long, value_enum, default_value_t = PolicyArg::Symbolic)]
        policy: PolicyArg,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// seed for sampling and for the axiom suite in `all` mode
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// number of axiom trials in `all` mode
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// leave wall times out of the report
        #[arg(long)]
        no_timing: bool,
    },
    /// Print a derived object of a metric.
    Show {
        #[arg(long)]
        metric: String,
        #[arg(long, value_enum)]
        what: What,
    },
    /// List the bundled metrics and their expected classification.
    Catalog,
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(INPUT_ERROR)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Axioms { seed, trials } => {
            let report = run_axiom_suite(seed, trials);
            println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("json"));
            ExitCode::from(if report.all_passed() { 0 } else { 1 })
        }
        Command::Verify {
            metric,
            mode,
            policy,
            samples,
            tol,
            seed,
            trials,
            out,
            no_timing,
        } => {
            let spec = match resolve(&metric) {
                Ok(s) => s,
                Err(e) => return input_error(e),
            };
            let policy = match policy {
                PolicyArg::Symbolic => ZeroPolicy::SymbolicOnly,
                PolicyArg::Numeric => ZeroPolicy::WithSampling { seed, samples, tol },
            };
            let mode = match mode {
                VerifyMode::N1 => Mode::N1,
                VerifyMode::N2vacuum => Mode::N2Vacuum,
                VerifyMode::All => Mode::All,
            };
            let opts = PipelineOptions {
                policy,
                seed,
                axiom_trials: trials,
            };
            let report = match run_pipeline(&spec, mode, &opts) {
                Ok(r) => r,
                Err(e) => return input_error(e),
            };
            let text = serde_json::to_string_pretty(&report.to_json(!no_timing)).expect("json") + "\n";
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &text) {
                        return input_error(format!("cannot write {}: {e}", path.display()));
                    }
                    print!("{}", report.summary());
                }
                None => print!("{text}"),
            }
            if report.outcome() == Outcome::Inconclusive {
                for c in report.checks.iter().filter(|c| c.inconclusive) {
                    eprintln!("unresolved in {}: {}", c.check_id, c.residual_summary);
                }
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Show { metric, what } => {
            let spec = match resolve(&metric) {
                Ok(s) => s,
                Err(e) => return input_error(e),
            };
            let what = match what {
                What::Connection => ShowWhat::Connection,
                What::Curvature => ShowWhat::Curvature,
                What::Spinor => ShowWhat::Spinor,
                What::Gfcoords => ShowWhat::GfCoords,
            };
            match show(&spec, what, &ZeroPolicy::SymbolicOnly) {
                Ok(text) => {
                    print!("{text}");
                    ExitCode::SUCCESS
                }
                Err(e) => input_error(e),
            }
        }
        Command::Catalog => {
            for name in gfc::catalog::names() {
                match gfc::catalog::load(name).expect("bundled") {
                    Ok(spec) => println!("{name:<22} {}", spec.expect),
                    Err(e) => println!("{name:<22} invalid: {e}"),
                }
            }
            ExitCode::SUCCESS
        }
    }
}
