use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use shellsim::cli::{run_with_threads, Command, RunConfig};
use shellsim::lab::Verdict;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Simulate,
    Couple,
    Ensemble,
    Verify,
    Certify,
    Spectrum,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Simulate => Command::Simulate,
            Cmd::Couple => Command::Couple,
            Cmd::Ensemble => Command::Ensemble,
            Cmd::Verify => Command::Verify,
            Cmd::Certify => Command::Certify,
            Cmd::Spectrum => Command::Spectrum,
        }
    }
}

/// Stochastic shell-model simulator and estimate checker.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    /// Command to run; defaults to `run.command` from the config.
    #[arg(value_enum)]
    command: Option<Cmd>,
    /// Config file (`section.key = value` lines). Built-in defaults if omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, env = "SHELL_SEED")]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of paths for ensemble commands.
    #[arg(long)]
    paths: Option<usize>,
    /// Worker threads; results do not depend on it.
    #[arg(long, env = "SHELL_THREADS")]
    threads: Option<usize>,
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match &args.config {
        Some(p) => RunConfig::load(p),
        None => Ok(RunConfig::default()),
    };
    let mut cfg = match cfg {
        Ok(c) => c,
        Err(e) => {
            eprintln!("shellsim: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(o) = args.out {
        cfg.output_dir = o;
    }
    if let Some(n) = args.paths {
        cfg.n_paths = n;
    }
    let cmd = args.command.map(Command::from).unwrap_or(cfg.command);

    match run_with_threads(&cfg, cmd, args.threads) {
        Ok(out) => {
            if !args.quiet {
                for c in &out.report.checks {
                    println!("{}", c.summary_line());
                }
                println!("{} -> {} ({} files)", cmd.name(), out.output_dir.display(), out.artifacts.len());
            }
            if out.failed() {
                let n = out.report.checks.iter().filter(|c| c.verdict == Verdict::Fail).count();
                eprintln!("shellsim: {n} check(s) failed");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("shellsim: {e}");
            ExitCode::from(2)
        }
    }
}
