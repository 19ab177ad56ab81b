//! Command-line front end for the TR-SLL toolkit: configuration, dataset
//! and report formats, and orchestration of the `trsll-core` analyses.
//!
//! Exit codes: 0 success, 2 config error, 3 data error, 4 numeric failure.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod artifacts;
pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod frame_doc;
pub mod hsa_io;
pub mod output;

pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "trsll", version, about = "Design and analysis toolkit for TR-SLL soft grippers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output directory (default `trsll-out`).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Seed recorded in every artifact.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Which artifacts to write.
    #[arg(long, global = true, value_enum, default_value = "all")]
    pub format: output::Format,

    /// Override a config key, e.g. `--set grasp.r_h_mm=17.14`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Flat-layer stiffness over a thickness range.
    SweepFlat,
    /// TR-SLL stiffness over a triangle-count range.
    SweepTriangles,
    /// Fit E and G to a flat-layer stiffness table.
    Calibrate,
    /// HSA grid, heat map, extrema, and c_tau curves.
    Hsa,
    /// One c_tau curve and the fingertip normal-force profile.
    Ctau,
    /// Pull-test prediction line.
    PredictPull,
    /// Payload capacity over a set of normal forces.
    Payload,
    /// Object size check against the gripper envelope.
    FitCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::SweepFlat => "sweep-flat",
            Command::SweepTriangles => "sweep-triangles",
            Command::Calibrate => "calibrate",
            Command::Hsa => "hsa",
            Command::Ctau => "ctau",
            Command::PredictPull => "predict-pull",
            Command::Payload => "payload",
            Command::FitCheck => "fit-check",
        }
    }
}

/// Runs one invocation and returns the files written.
pub fn execute(cli: &Cli) -> Result<Vec<PathBuf>> {
    let file = config::load(cli.config.as_deref(), &cli.overrides)?;
    let run = config::RunConfig::new(cli.command.name(), file, cli.out.clone(), cli.seed, cli.workers)?;
    let emit = output::Emitter::new(&run, cli.format)?;
    let mut ctx = commands::Ctx::new(run, emit)?;
    match cli.command {
        Command::SweepFlat => commands::sweep_flat(&mut ctx)?,
        Command::SweepTriangles => commands::sweep_triangles(&mut ctx)?,
        Command::Calibrate => commands::calibrate(&mut ctx)?,
        Command::Hsa => commands::hsa(&mut ctx)?,
        Command::Ctau => commands::ctau(&mut ctx)?,
        Command::PredictPull => commands::predict_pull(&mut ctx)?,
        Command::Payload => commands::payload(&mut ctx)?,
        Command::FitCheck => commands::fit_check(&mut ctx)?,
    }
    Ok(ctx.emit.written().to_vec())
}

/// Parses arguments, runs, and maps the outcome to an exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            0
        }
        Err(e) => {
            log::error!("{e}");
            e.exit_code()
        }
    }
}
