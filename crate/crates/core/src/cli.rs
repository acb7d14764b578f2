//! The `batchrl` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or model error, 3 failed
//! verification.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::curve::{render_svg, write_curve_csv, GrowingBatch};
use crate::domain::ControlParams;
use crate::envs;
use crate::error::Error;
use crate::learner::{learn, update_model};
use crate::oracle::{compare, value_iteration, ExplicitMDP};
use crate::persist::{self, format_report, ColumnMap, Verbosity};
use crate::sampling::{sample_experience, SelectionMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Marker printed by `predict` for states the model has never seen.
pub const UNKNOWN_STATE: &str = "unknown-state";

#[derive(Parser, Debug)]
#[command(name = "batchrl", version, about = "Batch Q-learning with experience replay")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample experience from a registered environment into a CSV file
    Sample(SampleArgs),
    /// Train a model on an experience file (continues from --model if given)
    Train(TrainArgs),
    /// Continue training an existing model on new experience
    Update(TrainArgs),
    /// Print the best action for each given state
    Predict(PredictArgs),
    /// Print a report of a saved model
    Report(ReportArgs),
    /// Run the growing-batch loop and write the learning curve
    Curve(CurveArgs),
    /// Compare a model with value iteration on an environment's exact model
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct ControlArgs {
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
}

impl ControlArgs {
    fn params(&self) -> Result<ControlParams, Error> {
        ControlParams::new(self.alpha, self.gamma, self.epsilon)
    }
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long)]
    env: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "random")]
    mode: SelectionMode,
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long = "s", default_value = "State")]
    state_col: String,
    #[arg(long = "a", default_value = "Action")]
    action_col: String,
    #[arg(long = "r", default_value = "Reward")]
    reward_col: String,
    #[arg(long = "s-new", default_value = "NextState")]
    next_state_col: String,
    #[command(flatten)]
    control: ControlArgs,
    #[arg(long, default_value_t = 1)]
    iter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    /// Comma-separated states; repeats are answered again
    #[arg(long, default_value = "")]
    states: String,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, default_value = "summary")]
    kind: Verbosity,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[arg(long)]
    env: String,
    #[arg(long)]
    rounds: usize,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    control: ControlArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Also render the curve as SVG
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    env: String,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    #[arg(long, default_value_t = 0.5)]
    tol: f64,
}

enum Failure {
    Error(Error),
    Exit(i32),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Error(Error::io("<stdout>", e))
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ZeroSamples
        | Error::ZeroIterations
        | Error::UnknownEnvironment(_)
        | Error::ModelRequired
        | Error::ParamOutOfRange { .. } => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Sample(args) => sample(args, out),
        Command::Train(args) => train(args, false, out),
        Command::Update(args) => train(args, true, out),
        Command::Predict(args) => predict(args, out),
        Command::Report(args) => report(args, out),
        Command::Curve(args) => curve(args, out),
        Command::Verify(args) => verify(args, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Exit(code)) => code,
        Err(Failure::Error(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn sample(args: SampleArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let env = envs::by_name(&args.env)?;
    let model = args.model.as_ref().map(persist::load_model).transpose()?;
    let control = match (&model, args.alpha, args.gamma, args.epsilon) {
        (_, None, None, None) => None,
        (m, alpha, gamma, epsilon) => {
            let base = m.as_ref().map(|m| m.control()).unwrap_or_default();
            Some(ControlParams::new(
                alpha.unwrap_or(base.alpha()),
                gamma.unwrap_or(base.gamma()),
                epsilon.unwrap_or(base.epsilon()),
            )?)
        }
    };
    let batch = sample_experience(args.n, env.as_ref(), args.mode, model.as_ref(), control, args.seed)?;
    persist::write_experience(&batch, &args.out)?;
    writeln!(out, "wrote {} tuples to {}", batch.len(), args.out.display())?;
    Ok(())
}

fn train(args: TrainArgs, require_model: bool, out: &mut dyn Write) -> Result<(), Failure> {
    let control = args.control.params()?;
    if args.iter == 0 {
        return Err(Error::ZeroIterations.into());
    }
    if require_model && args.model.is_none() {
        return Err(Error::ModelRequired.into());
    }
    let columns = ColumnMap {
        state: args.state_col,
        action: args.action_col,
        reward: args.reward_col,
        next_state: args.next_state_col,
    };
    let batch = persist::read_experience(&args.data, &columns)?;
    let model = match &args.model {
        Some(path) => update_model(&persist::load_model(path)?, &batch, control, args.iter, args.seed)?,
        None => learn(&batch, control, args.iter, args.seed, None)?,
    };
    persist::save_model(&model, &args.out)?;
    write!(out, "{}", format_report(&model, Verbosity::Summary))?;
    writeln!(out, "\nPolicy")?;
    write!(out, "{}", format_report(&model, Verbosity::Policy))?;
    Ok(())
}

fn predict(args: PredictArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let model = persist::load_model(&args.model)?;
    let mut unknown = false;
    for state in args.states.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match model.predict(state) {
            Ok(action) => writeln!(out, "{state},{action}")?,
            Err(_) => {
                unknown = true;
                writeln!(out, "{state},{UNKNOWN_STATE}")?;
            }
        }
    }
    if unknown {
        Err(Failure::Exit(EXIT_DATA))
    } else {
        Ok(())
    }
}

fn report(args: ReportArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let model = persist::load_model(&args.model)?;
    write!(out, "{}", format_report(&model, args.kind))?;
    Ok(())
}

fn curve(args: CurveArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let env = envs::by_name(&args.env)?;
    let control = args.control.params()?;
    if args.n == 0 {
        return Err(Error::ZeroSamples.into());
    }
    let (_, points) = GrowingBatch::new(args.rounds, args.n, control, args.seed).run(env.as_ref())?;
    write_curve_csv(&points, &args.out)?;
    if let Some(path) = &args.svg {
        std::fs::write(path, render_svg(&points)).map_err(|e| Error::io(path, e))?;
    }
    for p in &points {
        writeln!(out, "round {:>3}: total reward {}", p.round, p.total_reward)?;
    }
    Ok(())
}

fn verify(args: VerifyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let env = envs::by_name(&args.env)?;
    let model = persist::load_model(&args.model)?;
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(Error::ParamOutOfRange { name: "tol", value: args.tol }.into());
    }
    let mdp = ExplicitMDP::from_environment(env.as_ref())?;
    let reference = value_iteration(&mdp, args.gamma, 1e-9)?;
    let cmp = compare(model.q(), &reference, &mdp, 1e-9);
    writeln!(out, "pairs compared: {}", cmp.pairs_compared)?;
    writeln!(out, "max |Q - Q*|: {}", cmp.max_abs_diff)?;
    writeln!(
        out,
        "greedy policy agreement: {}/{} tie-free states",
        cmp.tie_free_states - cmp.policy_mismatches.len(),
        cmp.tie_free_states
    )?;
    for s in &cmp.policy_mismatches {
        writeln!(out, "  mismatch at {s}")?;
    }
    let pass = cmp.policies_agree() && cmp.max_abs_diff <= args.tol;
    writeln!(out, "verify: {}", if pass { "PASS" } else { "FAIL" })?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Exit(EXIT_VERIFY))
    }
}
