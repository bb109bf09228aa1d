//! `paultrap`: mode evolution, stability charts, state sampling and
//! verification suites for the 3D Paul trap.
//!
//! Exit codes: 0 success, 1 configuration or I/O error, 2 numerical failure,
//! 3 selection-rule violation, 4 failed verification.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use paultrap::{Error, Result};

use config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "paultrap", version, about = "Exact number states of the 3D Paul trap")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON run configuration (a trap object or {"trap": ..., ...}).
    #[arg(long)]
    config: PathBuf,
    /// Output directory [default: out].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate the radial and axial modes and write their trajectories.
    Evolve {
        #[command(flatten)]
        common: Common,
        /// End of the integration span [default: t_start + one drive period].
        #[arg(long)]
        t_end: Option<f64>,
        /// Stored samples per mode [default: 2001].
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Classify Floquet stability over a two-parameter sweep.
    Stability {
        #[command(flatten)]
        common: Common,
        /// "p1min:p1max:n1,p2min:p2max:n2".
        #[arg(long, allow_hyphen_values = true)]
        sweep: Option<String>,
        /// mathieu (p1 = a_r, p2 = q_r) or voltage (p1 = Vdc, p2 = Vac).
        #[arg(long)]
        sweep_kind: Option<String>,
    },
    /// Sample a state on a grid at the given times.
    Sample {
        #[command(flatten)]
        common: Common,
        /// "z:n", "cart:nx,ny,nz" or "cyl:nr,lz,nz".
        #[arg(long)]
        state: Option<String>,
        /// "min:max:count[,...]", one entry per axis.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// "t1,t2,...".
        #[arg(long, allow_hyphen_values = true)]
        times: Option<String>,
    },
    /// Run a verification suite and write a JSON report.
    Verify {
        #[command(flatten)]
        common: Common,
        /// full, residual, ladder, eigen, norm, identity or injected-fault.
        #[arg(long)]
        suite: Option<String>,
        /// "t1,t2,...".
        #[arg(long, allow_hyphen_values = true)]
        times: Option<String>,
    },
    /// Write the allowed polar/cylindrical quantum-number lattice.
    Lattice {
        /// Output directory [default: out].
        #[arg(long)]
        out: Option<PathBuf>,
        /// Highest level n + m.
        #[arg(long, default_value_t = 10)]
        max_level: usize,
    },
}

fn load(common: &Common) -> Result<(RunConfig, PathBuf)> {
    let run = RunConfig::from_path(&common.config)?;
    let out = commands::out_dir(common.out.clone(), Some(&run));
    Ok((run, out))
}

fn set_threads() -> Result<()> {
    let Ok(v) = std::env::var("PAULTRAP_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("PAULTRAP_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<bool> {
    set_threads()?;
    match cli.command {
        Command::Evolve { common, t_end, samples } => {
            let (mut run, out) = load(&common)?;
            run.t_end = t_end.or(run.t_end);
            run.samples = samples.or(run.samples);
            commands::evolve(&run, &out)
        }
        Command::Stability { common, sweep, sweep_kind } => {
            let (mut run, out) = load(&common)?;
            run.sweep = sweep.or(run.sweep);
            run.sweep_kind = sweep_kind.or(run.sweep_kind);
            commands::stability(&run, &out)
        }
        Command::Sample { common, state, grid, times } => {
            let (mut run, out) = load(&common)?;
            run.state = state.or(run.state);
            run.grid = grid.or(run.grid);
            run.times = times.or(run.times);
            commands::sample(&run, &out)
        }
        Command::Verify { common, suite, times } => {
            let (mut run, out) = load(&common)?;
            run.suite = suite.or(run.suite);
            run.times = times.or(run.times);
            commands::verify(&run, &out)
        }
        Command::Lattice { out, max_level } => commands::lattice(max_level, &commands::out_dir(out, None)),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SelectionRule { .. } => 3,
        e if e.is_numerical() => 2,
        _ => 1,
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
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(4),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
