use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qew_core::config::RunConfig;
use qew_core::runner;
use qew_core::table::{format_float, Table};
use qew_core::verify::{self, VerifyOptions};
use qew_core::{Execution, QewError};

#[derive(Parser)]
#[command(name = "qew", version, about = "Electron wavepacket / quantized light-mode interaction runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One interaction; writes a single result row.
    Simulate(Common),
    /// One row per value of `sweep.parameter`.
    Sweep(Common),
    /// Phase-dependent emission against the spontaneous floor as Γ varies.
    Fig3a(Common),
    /// Extinction map over waist size and drift length.
    Fig3b(Common),
    /// Smith-Purcell spectral density over frequency and angle.
    SmithPurcell(Common),
    /// Runs the built-in check suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Multiply every tolerance by this factor.
        #[arg(long, default_value_t = 1.0)]
        tolerance_scale: f64,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    workers: Option<usize>,
}

enum Failure {
    Qew(QewError),
    Io(String),
    Checks,
}

impl From<QewError> for Failure {
    fn from(e: QewError) -> Self {
        Failure::Qew(e)
    }
}

fn execution(workers: Option<usize>) -> Result<Execution, Failure> {
    match workers {
        Some(0) => Err(QewError::Config("--workers must be at least 1".into()).into()),
        Some(1) => Ok(Execution::Sequential),
        Some(n) => {
            #[cfg(feature = "parallel")]
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::Io(format!("thread pool: {e}")))?;
            #[cfg(not(feature = "parallel"))]
            log::warn!("built without parallel support; ignoring --workers {n}");
            Ok(Execution::Parallel)
        }
        None => Ok(Execution::Parallel),
    }
}

fn load(common: &Common) -> Result<RunConfig, Failure> {
    Ok(match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    })
}

fn emit(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn summary(table: &Table) -> String {
    let mut out = String::new();
    for row in &table.rows {
        for (name, value) in table.columns.iter().zip(row) {
            out.push_str(&format!("{name:>14} = {}\n", format_float(*value)));
        }
    }
    out
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (common, tolerance_scale) = match &cli.command {
        Command::Simulate(c) | Command::Sweep(c) | Command::Fig3a(c) | Command::Fig3b(c) | Command::SmithPurcell(c) => {
            (c, None)
        }
        Command::Verify { common, tolerance_scale } => (common, Some(*tolerance_scale)),
    };
    let exec = execution(common.workers)?;
    let cfg = load(common)?;
    let output = common.output.clone().or_else(|| cfg.output_path.clone());

    if let Some(scale) = tolerance_scale {
        let checks = verify::run_all(&VerifyOptions {
            tolerance_scale: scale,
            exec,
        });
        let report = verify::render(&checks);
        print!("{report}");
        if let Some(p) = &output {
            emit(&report, Some(p))?;
        }
        return if checks.iter().all(|c| c.passed()) {
            Ok(())
        } else {
            Err(Failure::Checks)
        };
    }

    let table = match &cli.command {
        Command::Simulate(_) => runner::simulate(&cfg, exec)?,
        Command::Sweep(_) => runner::sweep(&cfg, exec)?,
        Command::Fig3a(_) => runner::fig3a(&cfg, exec)?,
        Command::Fig3b(_) => runner::fig3b(&cfg)?,
        Command::SmithPurcell(_) => runner::smith_purcell(&cfg)?,
        Command::Verify { .. } => unreachable!(),
    };
    emit(&table.render(&cfg.canonical_lines()), output.as_deref())?;
    if matches!(cli.command, Command::Simulate(_)) {
        let text = summary(&table);
        if output.is_some() {
            print!("{text}");
        } else {
            eprint!("{text}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let default_level = if matches!(cli.command, Command::Verify { .. }) { "error" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(default_level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Qew(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
