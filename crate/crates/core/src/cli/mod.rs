//! Command-line front end.
//!
//! Every subcommand is a thin wrapper over the library: parse flags into a
//! [`RunConfig`], load and derive the trial data, call into the estimator or
//! the evaluation code, and write plain CSV/JSON files. Fitting writes
//! `run.json` next to the per-subject parameter files so later commands can
//! rebuild the same folds.

mod commands;
mod files;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::evalsim::{Shape, DEFAULT_SIMS};
use crate::model::{ComponentMask, ModelKind};
use crate::trial::DEFAULT_FOLDS;

pub use commands::{
    cmd_ablate, cmd_evaluate, cmd_export_features, cmd_fit, cmd_predict, cmd_simulate, cmd_synth,
};
pub use files::{load_params, load_run_record, params_path, RunRecord, PARAMS_DIR, RUN_FILE};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "QDT_CHOICE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "qdt-choice", version, about = "Fit and evaluate QDT and CPT choice models on sure-vs-gamble data")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Cross-validated fits per subject; writes <out>/params/<subject>.json
    Fit(FitArgs),
    /// Held-out predictions for every trial; writes <out>/predictions.csv
    Predict(ReportArgs),
    /// Accuracy, calibration and factor histograms from a fitted run
    Evaluate(ReportArgs),
    /// Monte-Carlo similarity between simulated and observed choices
    Simulate(SimulateArgs),
    /// Accuracy with and without catch trials in training
    Ablate(FitArgs),
    /// Synthetic subjects with known parameters
    Synth(SynthArgs),
    /// Flat feature matrix for external models
    ExportFeatures(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Qdt,
    Cpt,
}

#[derive(Debug, Args)]
struct ModelFlags {
    #[arg(long, value_enum, default_value = "qdt")]
    model: ModelArg,
    /// Comma-separated subset of time_frame,memory,need (QDT only; default all)
    #[arg(long, value_name = "LIST")]
    components: Option<String>,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    model: ModelFlags,
    #[arg(long, default_value_t = DEFAULT_FOLDS)]
    folds: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    reg_weight: f64,
    /// Leave catch trials out of the training folds
    #[arg(long)]
    no_catch_training: bool,
    /// Include the tanh scale in the L1 penalty
    #[arg(long)]
    regularize_scale: bool,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(long)]
    data: PathBuf,
    /// Directory of a previous `fit` run; reports are written here too
    #[arg(long)]
    out: PathBuf,
    /// Score fair trials only
    #[arg(long)]
    fair_only: bool,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SIMS)]
    n_sims: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long)]
    out: PathBuf,
    /// dataset1 or dataset2
    #[arg(long, default_value = "dataset1")]
    shape: String,
    #[arg(long, default_value_t = 1)]
    subjects: usize,
    #[command(flatten)]
    model: ModelFlags,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Fit,
    Predict,
    Evaluate,
    Simulate,
    Ablate,
    Synth,
    ExportFeatures,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub data_path: PathBuf,
    pub output_dir: PathBuf,
    pub model: ModelKind,
    pub n_folds: usize,
    pub seed: u64,
    pub reg_weight: f64,
    pub n_sims: usize,
    pub include_catch_in_training: bool,
    pub regularize_scale: bool,
    pub fair_only: bool,
    pub shape: Shape,
    pub n_subjects: usize,
}

impl RunConfig {
    pub fn new(command: CommandKind, data_path: PathBuf, output_dir: PathBuf) -> Self {
        RunConfig {
            command,
            data_path,
            output_dir,
            model: ModelKind::Qdt(ComponentMask::ALL),
            n_folds: DEFAULT_FOLDS,
            seed: 42,
            reg_weight: 1.0,
            n_sims: DEFAULT_SIMS,
            include_catch_in_training: true,
            regularize_scale: false,
            fair_only: false,
            shape: Shape::Dataset1,
            n_subjects: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_folds < 2 {
            return Err(Error::Config(format!(
                "--folds must be at least 2, got {}",
                self.n_folds
            )));
        }
        if !(self.reg_weight >= 0.0 && self.reg_weight.is_finite()) {
            return Err(Error::Config(format!(
                "--reg-weight must be a non-negative number, got {}",
                self.reg_weight
            )));
        }
        if self.n_sims == 0 {
            return Err(Error::Config("--n-sims must be at least 1".into()));
        }
        if self.n_subjects == 0 {
            return Err(Error::InvalidDescriptor("--subjects must be at least 1".into()));
        }
        Ok(())
    }

    /// Executes the configured command.
    pub fn execute(&self) -> Result<()> {
        self.validate()?;
        match self.command {
            CommandKind::Fit => cmd_fit(self),
            CommandKind::Predict => cmd_predict(self),
            CommandKind::Evaluate => cmd_evaluate(self),
            CommandKind::Simulate => cmd_simulate(self),
            CommandKind::Ablate => cmd_ablate(self),
            CommandKind::Synth => cmd_synth(self),
            CommandKind::ExportFeatures => cmd_export_features(self),
        }
    }
}

fn model_kind(flags: &ModelFlags) -> Result<ModelKind> {
    match flags.model {
        ModelArg::Cpt => {
            if flags.components.is_some() {
                eprintln!("warning: --components is ignored for --model cpt");
            }
            Ok(ModelKind::Cpt)
        }
        ModelArg::Qdt => match &flags.components {
            None => Ok(ModelKind::Qdt(ComponentMask::ALL)),
            Some(list) => Ok(ModelKind::Qdt(list.parse()?)),
        },
    }
}

fn config_from_cli(cli: Cli) -> Result<RunConfig> {
    let config = match cli.command {
        Cmd::Fit(a) => fit_config(CommandKind::Fit, a)?,
        Cmd::Ablate(a) => fit_config(CommandKind::Ablate, a)?,
        Cmd::Predict(a) => report_config(CommandKind::Predict, a),
        Cmd::Evaluate(a) => report_config(CommandKind::Evaluate, a),
        Cmd::Simulate(a) => RunConfig {
            n_sims: a.n_sims,
            seed: a.seed,
            ..RunConfig::new(CommandKind::Simulate, a.data, a.out)
        },
        Cmd::Synth(a) => RunConfig {
            model: model_kind(&a.model)?,
            shape: a.shape.parse()?,
            n_subjects: a.subjects,
            seed: a.seed,
            ..RunConfig::new(CommandKind::Synth, PathBuf::new(), a.out)
        },
        Cmd::ExportFeatures(a) => RunConfig::new(CommandKind::ExportFeatures, a.data, a.out),
    };
    Ok(config)
}

fn fit_config(command: CommandKind, a: FitArgs) -> Result<RunConfig> {
    Ok(RunConfig {
        model: model_kind(&a.model)?,
        n_folds: a.folds,
        seed: a.seed,
        reg_weight: a.reg_weight,
        include_catch_in_training: !a.no_catch_training,
        regularize_scale: a.regularize_scale,
        ..RunConfig::new(command, a.data, a.out)
    })
}

fn report_config(command: CommandKind, a: ReportArgs) -> RunConfig {
    RunConfig {
        fair_only: a.fair_only,
        ..RunConfig::new(command, a.data, a.out)
    }
}

/// Sizes the global thread pool from `QDT_CHOICE_THREADS` when it is set.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    // a pool that already exists (e.g. in tests) is left alone
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code: 0 on success, 2 for data errors, 3 for usage and
/// configuration errors. Messages go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = configure_threads()
        .and_then(|()| config_from_cli(cli))
        .and_then(|config| config.execute());
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
