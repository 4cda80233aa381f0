//! Config parsing and command orchestration behind the `shellsim` binary.

mod config;
mod run;

pub use config::{Command, ForcingSpec, JumpSpecKind, RunConfig, SigmaKind};
pub use run::{config_hash, run, run_with_threads, RunOutcome};
