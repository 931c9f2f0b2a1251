use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Parser, Subcommand};
use neuroloop::harness::{
    compute_metrics, export, parse_config, run_chirp_demo, run_closed_loop, run_open_loop, ExportFormat,
};
use neuroloop::Error;

#[derive(Parser)]
#[command(name = "neuroloop", version, about = "Seizure detection and model-free stimulation on a neural-mass patient")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate without stimulation.
    OpenLoop(RunArgs),
    /// Detector-gated model-free stimulation.
    ClosedLoop(RunArgs),
    /// Open loop, reporting detected maxima and the seizure flag.
    Detect(RunArgs),
    /// Differentiate and scan a noisy chirp.
    Chirp(RunArgs),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    OpenLoop,
    ClosedLoop,
    Detect,
    Chirp,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Scenario file(s). Several files form a sweep.
    #[arg(long, required = true, num_args = 1..)]
    config: Vec<PathBuf>,
    /// Overrides the seed in every config.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// `csv` or `csv+svg`.
    #[arg(long, default_value = "csv")]
    format: ExportFormat,
    /// Runs executed concurrently.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => return exit_clap(e),
    };
    let (mode, args) = match cli.command {
        Command::OpenLoop(a) => (Mode::OpenLoop, a),
        Command::ClosedLoop(a) => (Mode::ClosedLoop, a),
        Command::Detect(a) => (Mode::Detect, a),
        Command::Chirp(a) => (Mode::Chirp, a),
    };
    match execute(mode, &args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_clap(e: clap::Error) -> ExitCode {
    let code = e.exit_code();
    let _ = e.print();
    ExitCode::from(code as u8)
}

fn exit_code(e: &Error) -> u8 {
    if e.is_config_error() {
        2
    } else if matches!(e, Error::Divergence { .. }) {
        3
    } else {
        1
    }
}

fn out_dir(base: &Path, config: &Path, many: bool) -> PathBuf {
    if many {
        base.join(config.file_stem().unwrap_or_default())
    } else {
        base.to_path_buf()
    }
}

fn run_one(command: Mode, config: &Path, args: &RunArgs, many: bool) -> Result<String, Error> {
    let mut spec = parse_config(config)?;
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    let record = match command {
        Mode::OpenLoop | Mode::Detect => run_open_loop(&spec)?,
        Mode::ClosedLoop => run_closed_loop(&spec)?,
        Mode::Chirp => run_chirp_demo(&spec)?,
    };
    let dir = out_dir(&args.out, config, many);
    export(&record, &dir, args.format)?;
    let m = compute_metrics(&record, &spec);
    let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.4}"));
    let mut line = format!("{}: {} rows -> {}", config.display(), record.rows.len(), dir.display());
    match command {
        Mode::Detect | Mode::Chirp => {
            line += &format!(
                "\n  maxima {}  first flag {}  latency {}  false positives {}",
                m.event_count,
                opt(record.rows.iter().find(|r| r.flag).map(|r| r.t)),
                opt(m.detection_latency),
                m.false_positive_count
            );
        }
        Mode::ClosedLoop => {
            line += &format!(
                "\n  activation {}  rmse {}  u in [{:.3}, {:.3}]  chattering {}",
                opt(m.activation_time),
                opt(m.tracking_rmse),
                m.u_min_obs,
                m.u_max_obs,
                m.chattering_count
            );
        }
        Mode::OpenLoop => {
            line += &format!(
                "\n  latency {}  false positives {}  ptp pre {}  post {}",
                opt(m.detection_latency),
                m.false_positive_count,
                opt(m.ym_ptp_pre),
                opt(m.ym_ptp_post)
            );
        }
    }
    Ok(line)
}

fn execute(command: Mode, args: &RunArgs) -> Result<(), Error> {
    let many = args.config.len() > 1;
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<String, Error>>>> =
        Mutex::new((0..args.config.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..args.jobs.clamp(1, args.config.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(config) = args.config.get(i) else { break };
                let r = run_one(command, config, args, many);
                results.lock().expect("no poisoned runs")[i] = Some(r);
            });
        }
    });
    // report in config order; the first failure decides the exit code
    let mut first_err = None;
    for r in results.into_inner().expect("no poisoned runs").into_iter().flatten() {
        match r {
            Ok(line) => println!("{line}"),
            Err(e) => {
                if first_err.is_none() {
                    first_err = Some(e);
                } else {
                    eprintln!("error: {e}");
                }
            }
        }
    }
    first_err.map_or(Ok(()), Err)
}
