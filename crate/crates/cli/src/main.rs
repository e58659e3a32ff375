use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use su2phase_cli::dataset::emit;
use su2phase_cli::{
    angle_dist, interferometer_sweep, parse_experiment, parse_sweep, qpsi_run, qpsi_sweep, ExperimentFile,
    OutputFormat, StateSpec,
};

#[derive(Parser)]
#[command(name = "su2phase", version, about = "Quantum angle distributions, SU(2) interferometer statistics and phase inference")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Angle distribution P(φ) and its dB level on [-π, π].
    AngleDist {
        /// xnum:N or spinupx:2j; repeat for several curves.
        #[arg(long = "state", required = true)]
        states: Vec<StateSpec>,
        #[arg(long, default_value_t = 721)]
        points: usize,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Interferometer outcome probabilities P_m(Φ) on [-π, π].
    Interf {
        #[arg(long)]
        state: StateSpec,
        #[arg(long, default_value_t = 721)]
        phi_points: usize,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate a shot record and estimate Φ, or run a benchmark sweep.
    Qpsi(QpsiArgs),
}

#[derive(Args)]
struct QpsiArgs {
    /// Experiment JSON file.
    #[arg(long, conflicts_with_all = ["sweep", "state"])]
    config: Option<PathBuf>,
    /// Sweep JSON file; writes a benchmark table.
    #[arg(long, conflicts_with = "state")]
    sweep: Option<PathBuf>,
    #[arg(long, requires_all = ["phi_true", "n_shots", "seed"])]
    state: Option<StateSpec>,
    #[arg(long)]
    phi_true: Option<f64>,
    #[arg(long)]
    n_shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long)]
    refine_tol: Option<f64>,
    #[arg(long)]
    weighted: bool,
    /// Report (single run) or table (sweep) destination; stdout by default.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the sampled objective curve of a single run here.
    #[arg(long)]
    curve_out: Option<PathBuf>,
    /// Format of the sweep table and the objective curve.
    #[arg(long, value_enum, default_value_t)]
    format: OutputFormat,
}

fn command_line() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn configure_threads() -> Result<()> {
    let threads = match std::env::var("SU2PHASE_THREADS") {
        Ok(v) => v.trim().parse::<usize>().with_context(|| format!("SU2PHASE_THREADS={v:?} is not an integer"))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Builds an experiment from flags by round-tripping through the same
/// validation as the JSON file.
fn inline_experiment(args: &QpsiArgs, state: StateSpec) -> Result<ExperimentFile> {
    let mut doc = serde_json::json!({
        "state": state.to_string(),
        "phi_true": args.phi_true,
        "n_shots": args.n_shots,
        "seed": args.seed,
        "weighted": args.weighted,
    });
    if let Some(g) = args.grid_points {
        doc["grid_points"] = g.into();
    }
    if let Some(t) = args.refine_tol {
        doc["refine_tol"] = t.into();
    }
    let file: ExperimentFile = serde_json::from_value(doc).map_err(|e| anyhow!("invalid flags: {e}"))?;
    Ok(file)
}

fn run_qpsi(args: QpsiArgs, command: &str) -> Result<ExitCode> {
    if let Some(path) = &args.sweep {
        let file = parse_sweep(&read(path)?, &path.display().to_string())?;
        let table = qpsi_sweep(&file, command)?;
        emit(&table.render(args.format)?, args.out.as_deref())?;
        return Ok(ExitCode::SUCCESS);
    }
    let file = match (&args.config, args.state) {
        (Some(path), _) => parse_experiment(&read(path)?, &path.display().to_string())?,
        (None, Some(state)) => inline_experiment(&args, state)?,
        (None, None) => return Err(anyhow!("one of --config, --sweep or --state is required")),
    };
    let outcome = qpsi_run(&file, command)?;
    let mut json = serde_json::to_string_pretty(&outcome.report)?;
    json.push('\n');
    emit(&json, args.out.as_deref())?;
    if let Some(path) = &args.curve_out {
        emit(&outcome.curve.render(args.format)?, Some(path))?;
    }
    if outcome.degenerate() {
        eprintln!("warning: objective has a second minimum of equal depth; Phi_hat is ambiguous");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    configure_threads()?;
    let command = command_line();
    match cli.command {
        Command::AngleDist { states, points, format, out } => {
            emit(&angle_dist(&states, points, &command)?.render(format)?, out.as_deref())?;
        }
        Command::Interf { state, phi_points, format, out } => {
            emit(&interferometer_sweep(&state, phi_points, &command)?.render(format)?, out.as_deref())?;
        }
        Command::Qpsi(args) => return run_qpsi(args, &command),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            e.exit();
        }
        Err(e) => {
            // usage errors share exit code 1 with other failures; 2 is reserved for degeneracy
            let _ = e.print();
            return ExitCode::FAILURE;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
