//! `invforge`: construct invariants, run verification claims, and benchmark
//! determinant strategies from a JSON run configuration.

mod config;
mod runner;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{RunConfig, Task, CAP_ENV};

const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "invforge", version, about = "Vector invariants of finite classical groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the configured output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write Dickson invariants and generators to construct.txt.
    Construct(Common),
    /// Check one claim.
    Verify {
        #[arg(long)]
        claim: String,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate the stabilizer of the generators in GL(W)^n.
    Stabilizer(Common),
    /// Jacobian-criterion independence of the generators.
    Jacobian(Common),
    /// Time cofactor and Bareiss determinants.
    Bench(Common),
    /// Run every task listed in the configuration.
    Run(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, override_tasks) = match cli.command {
        Command::Construct(c) => (c, Some(vec!["construct".to_string()])),
        Command::Verify { claim, common } => (common, Some(vec![format!("verify:{claim}")])),
        Command::Stabilizer(c) => (c, Some(vec!["stabilizer".to_string()])),
        Command::Jacobian(c) => (c, Some(vec!["jacobian".to_string()])),
        Command::Bench(c) => (c, Some(vec!["bench".to_string()])),
        Command::Run(c) => (c, None),
    };
    match execute(&common, override_tasks) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("invforge: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn execute(common: &Common, override_tasks: Option<Vec<String>>) -> Result<u8, String> {
    let mut cfg = RunConfig::load(&common.config).map_err(|e| e.to_string())?;
    if let Some(tasks) = override_tasks {
        cfg.tasks = tasks;
    }
    let tasks: Vec<Task> = cfg.tasks().map_err(|e| e.to_string())?;
    if tasks.is_empty() {
        return Err("the task list is empty".into());
    }
    let cap_env = std::env::var(CAP_ENV).ok();
    let params = cfg.suite_params(common.seed, cap_env.as_deref()).map_err(|e| e.to_string())?;
    let outputs = runner::run_tasks(&tasks, &params);
    let dir = cfg.output_dir(common.out.as_deref());
    runner::write_outputs(&dir, &outputs).map_err(|e| format!("cannot write {}: {e}", dir.display()))?;
    for r in &outputs.reports {
        println!("{}", r.to_json_line());
    }
    Ok(runner::exit_code(&outputs.reports) as u8)
}
