mod args;
mod format;
mod job;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use prism_nematic::RationalMapSpec;
use prism_nematic::sweep::SpecTemplate;
use serde::de::DeserializeOwned;

use args::{Cli, Command, ElasticArgs, FamilyArgs};
use job::{execute, CliError, Job, Task};

fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{what}: cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{what}: {} is not valid: {e}", path.display())))
}

fn read_spec(path: &Path) -> Result<RationalMapSpec, CliError> {
    read_json(path, "--spec")
}

fn with_elastic(mut job: Job, e: &ElasticArgs) -> Job {
    job.k = Some(e.k);
    job.frank = e.frank();
    job
}

fn with_family(mut job: Job, f: &FamilyArgs) -> Result<Job, CliError> {
    job.family = f.family.clone();
    job.template = match &f.template {
        Some(p) => Some(read_json::<SpecTemplate>(p, "--template")?),
        None => None,
    };
    Ok(job)
}

/// Turns parsed arguments into a job.
fn to_job(command: Command) -> Result<Job, CliError> {
    Ok(match command {
        Command::Invariants(a) => Job {
            spec: Some(read_spec(&a.spec)?),
            tol: a.tol,
            out: a.out,
            ..Job::new(Task::Invariants)
        },
        Command::Bounds(a) => with_elastic(
            Job {
                prism: Some(a.prism),
                omega0: a.omega0,
                spec: a.spec.as_deref().map(read_spec).transpose()?,
                lp_constraints: Some(a.lp_constraints),
                out: a.out,
                ..Job::new(Task::Bounds)
            },
            &a.elastic,
        ),
        Command::Energy(a) => with_elastic(
            Job {
                prism: Some(a.prism),
                spec: Some(read_spec(&a.spec)?),
                tol: a.tol,
                out: a.out,
                ..Job::new(Task::Energy)
            },
            &a.elastic,
        ),
        Command::Sweep(a) => with_family(
            Job {
                prism: Some(a.prism),
                range: Some(a.range),
                steps: Some(a.steps),
                k: Some(a.k),
                tol: a.tol,
                out: a.out,
                ..Job::new(Task::Sweep)
            },
            &a.source,
        )?,
        Command::Minimize(a) => with_family(
            Job {
                prism: Some(a.prism),
                k: Some(a.k),
                tol: a.tol,
                out: a.out,
                ..Job::new(Task::Minimize)
            },
            &a.source,
        )?,
        Command::Field(a) => Job {
            prism: Some(a.prism),
            spec: Some(read_spec(&a.spec)?),
            grid: Some(a.grid),
            out: a.out,
            ..Job::new(Task::Field)
        },
        Command::Check(a) => Job {
            seed: Some(a.seed),
            count: Some(a.count),
            out: a.out,
            ..Job::new(Task::Check)
        },
        Command::Run(a) => read_json(&a.job, "--job")?,
    })
}

fn write_output(body: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, body)
            .map_err(|e| CliError::Input(format!("--out: cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<Vec<String>, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Input("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(format!("--threads: {e}")))?;
    }
    let job = to_job(cli.command)?;
    let outcome = execute(&job)?;
    write_output(&outcome.body, job.out.as_ref())?;
    Ok(outcome.failures)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            for f in failures {
                eprintln!("error: {f}");
            }
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
