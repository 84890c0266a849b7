use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use odecurve::job::{summary, SampleRange, Task};
use odecurve::presets::{builtin_examples, preset};
use odecurve::{run_job, JobError, JobSpec};

#[derive(Parser)]
#[command(name = "odecurve", version, about = "Total curvature of ODE solution curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a job file and write report.json (and samples.csv when sampling).
    Run {
        job: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Override the job's quadrature tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Print a built-in job as TOML, or list them.
    Preset {
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
    /// Sample a job's curve on LO:HI:N and write samples.csv.
    Sample {
        job: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        range: SampleRange,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn configure_threads() -> Result<(), JobError> {
    let Ok(v) = std::env::var("ODECURVE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| JobError::Validation(format!("ODECURVE_THREADS: not a count: {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| JobError::Validation(format!("ODECURVE_THREADS: {e}")))
}

fn load(path: &Path) -> Result<JobSpec, JobError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| JobError::Validation(format!("{}: {e}", path.display())))?;
    JobSpec::from_toml(&text)
        .map_err(|e| JobError::Validation(format!("{}: {e}", path.display())))
}

/// Write via a temporary file in the target directory, then rename.
fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, JobError> {
    let io = |e: std::io::Error| JobError::Solver(format!("writing {name}: {e}"));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    std::io::Write::write_all(&mut tmp, contents.as_bytes()).map_err(io)?;
    let path = dir.join(name);
    tmp.persist(&path).map_err(|e| io(e.error))?;
    Ok(path)
}

fn run(cli: Cli) -> Result<i32, JobError> {
    configure_threads()?;
    match cli.command {
        Command::Run { job, out, tol } => {
            let mut spec = load(&job)?;
            if let Some(t) = tol {
                spec.tol = t;
                spec.validate()?;
            }
            let outcome = run_job(&spec)?;
            let report = write_atomic(&out, "report.json", &outcome.report.to_json())?;
            eprintln!("wrote {}", report.display());
            if let Some(csv) = &outcome.samples {
                let p = write_atomic(&out, "samples.csv", csv)?;
                eprintln!("wrote {}", p.display());
            }
            print!("{}", summary(&outcome.report));
            Ok(outcome.report.exit_code())
        }
        Command::Preset { name, list } => {
            if list || name.is_none() {
                for j in builtin_examples() {
                    let name = j.name.unwrap_or_default();
                    match j.note {
                        Some(n) => println!("{name:<18} {n}"),
                        None => println!("{name}"),
                    }
                }
                return Ok(0);
            }
            let name = name.expect("checked above");
            let j = preset(&name)
                .ok_or_else(|| JobError::Validation(format!("unknown preset {name:?}")))?;
            print!("{}", j.to_toml());
            Ok(0)
        }
        Command::Sample { job, range, out } => {
            let mut spec = load(&job)?;
            spec.tasks = vec![Task::Sample];
            spec.sample = Some(range);
            spec.validate()?;
            let outcome = run_job(&spec)?;
            let csv = outcome.samples.expect("sample task requested");
            let p = write_atomic(&out, "samples.csv", &csv)?;
            eprintln!("wrote {}", p.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
