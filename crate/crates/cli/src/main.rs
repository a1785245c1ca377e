use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use log::info;

use xi_cli::config::JobConfig;
use xi_cli::pipeline::{bounds_table, run_chambers, run_contour, run_verify, Case};
use xi_cli::render::{contour_csv, contour_svg, to_json, write, Meta};
use xi_core::completion::CompletedContour;

const EXIT_VERIFY: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(
    name = "xi-contour",
    version,
    about = "Reduced discriminant contours and chamber counts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace the completed contour for every requested sign class.
    Contour(JobArgs),
    /// Count chambers per sign class and compare with the bound formulas.
    Chambers(JobArgs),
    /// Run every configured check; exits 1 if any fails.
    Verify {
        #[command(flatten)]
        job: JobArgs,
        /// Perturb the nullspace basis before running the checks.
        #[arg(long, hide = true)]
        corrupt_basis: bool,
    },
    /// Print the bound formulas for the given parameters.
    Bounds { n: usize, t: usize, d: usize },
}

#[derive(Args)]
struct JobArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output root (default: the config's `out`, else `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Half-width of the chamber window, overriding the config.
    #[arg(long)]
    window: Option<f64>,
    /// Zero-set grid resolution, overriding the config.
    #[arg(long)]
    grid: Option<usize>,
}

struct Job {
    case: Case,
    window: f64,
    dir: PathBuf,
    config: PathBuf,
    workers: usize,
    started: u64,
    clock: Instant,
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("xi-contour: {msg}");
    ExitCode::from(code)
}

fn load(args: &JobArgs, corrupt_basis: bool) -> Result<Job, ExitCode> {
    let mut cfg = JobConfig::from_path(&args.config).map_err(|e| fail(EXIT_CONFIG, e))?;
    if let Some(w) = args.window {
        if !(w.is_finite() && w > 0.0) {
            return Err(fail(
                EXIT_CONFIG,
                format!("--window must be positive, got {w}"),
            ));
        }
        cfg.window = w;
    }
    if let Some(g) = args.grid {
        if g < 8 {
            return Err(fail(
                EXIT_CONFIG,
                format!("--grid must be at least 8, got {g}"),
            ));
        }
        cfg.zeroset.grid = g;
    }
    if let Some(n) = args.workers {
        if n == 0 {
            return Err(fail(EXIT_CONFIG, "--workers must be positive"));
        }
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let window = cfg.window;
    let root = args
        .out
        .clone()
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| "out".into());
    let dir = root.join(&cfg.name);
    let case = Case::prepare(cfg, corrupt_basis).map_err(|e| fail(EXIT_CONFIG, e))?;
    Ok(Job {
        case,
        window,
        dir,
        config: args.config.clone(),
        workers: rayon::current_num_threads(),
        started: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        clock: Instant::now(),
    })
}

fn write_or_fail(path: &Path, contents: &str) -> Result<(), ExitCode> {
    write(path, contents).map_err(|e| fail(EXIT_VERIFY, format!("{}: {e}", path.display())))
}

fn write_contours(job: &Job, contours: &[CompletedContour]) -> Result<(), ExitCode> {
    for c in contours {
        write_or_fail(
            &job.dir.join(format!("{}.csv", c.sign)),
            &contour_csv(c, job.window),
        )?;
    }
    if !contours.is_empty() {
        write_or_fail(
            &job.dir.join("contour.svg"),
            &contour_svg(contours, job.window),
        )?;
    }
    Ok(())
}

fn finish<T: serde::Serialize>(job: &Job, command: &str, report: &T) -> Result<(), ExitCode> {
    write_or_fail(&job.dir.join("report.json"), &to_json(report))?;
    let meta = Meta {
        command,
        config: job.config.display().to_string(),
        version: env!("CARGO_PKG_VERSION"),
        workers: job.workers,
        started: job.started,
        elapsed_seconds: job.clock.elapsed().as_secs_f64(),
    };
    write_or_fail(&job.dir.join("report.meta.json"), &to_json(&meta))?;
    info!("wrote {}", job.dir.display());
    Ok(())
}

fn run(cli: Cli) -> Result<(), ExitCode> {
    match cli.command {
        Command::Contour(args) => {
            let job = load(&args, false)?;
            let out = run_contour(&job.case, job.window).map_err(|e| fail(EXIT_VERIFY, e))?;
            write_contours(&job, &out.contours)?;
            finish(&job, "contour", &out.report)
        }
        Command::Chambers(args) => {
            let job = load(&args, false)?;
            let out = run_chambers(&job.case, job.window).map_err(|e| fail(EXIT_VERIFY, e))?;
            write_contours(&job, &out.contours)?;
            finish(&job, "chambers", &out.report)?;
            for s in &out.report.signs {
                match (s.count, &s.error) {
                    (Some(c), _) => println!(
                        "{} {} chambers ({} bounded)",
                        s.sign,
                        c,
                        s.bounded.unwrap_or(0)
                    ),
                    (None, Some(e)) => println!("{} error: {e}", s.sign),
                    (None, None) => {}
                }
            }
            Ok(())
        }
        Command::Verify {
            job: args,
            corrupt_basis,
        } => {
            let job = load(&args, corrupt_basis)?;
            let report = run_verify(&job.case, job.window);
            for c in &report.checks {
                println!(
                    "{:<5} {}: {}",
                    format!("{:?}", c.status).to_uppercase(),
                    c.name,
                    c.detail
                );
            }
            finish(&job, "verify", &report)?;
            if report.passed {
                Ok(())
            } else {
                Err(fail(EXIT_VERIFY, "verification failed"))
            }
        }
        Command::Bounds { n, t, d } => {
            if n == 0 || d > n || t < d + 1 {
                return Err(fail(
                    EXIT_CONFIG,
                    format!("need 0 < n, d <= n and t >= d + 1, got n={n} t={t} d={d}"),
                ));
            }
            print!("{}", to_json(&bounds_table(n, t, d)));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}
