//! Drives the library the way the `shellsim` binary does: parse a config,
//! run a command, read back the manifest.
//!
//!     cargo run --example config_run

use shellsim::cli::{run, Command, RunConfig};

const CONFIG: &str = r#"
model.variant = "goy"
model.shells = 8
epsilon = 0.02
sigma.kind = "additive"
jumps.kind = "additive_mark"
jumps.rate = 2.0
scheme.dt = 0.005
scheme.horizon = 0.5
scheme.record_stride = 20
run.n_paths = 16
run.samples = 1000
"#;

pub fn run_example() -> shellsim::Result<()> {
    let dir = std::env::temp_dir().join(format!("shellsim-config-run-{}", std::process::id()));
    let mut cfg: RunConfig = CONFIG.parse()?;
    cfg.output_dir = dir.clone();

    for cmd in [Command::Certify, Command::Ensemble, Command::Verify] {
        let out = run(&cfg, cmd)?;
        let fails = out.report.checks.iter().filter(|c| c.is_fail()).count();
        println!("{:<9} {} checks, {} failed, files {:?}", cmd.name(), out.report.checks.len(), fails, out.artifacts);
    }
    let manifest = std::fs::read_to_string(dir.join("manifest.json"))?;
    println!("{manifest}");
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> shellsim::Result<()> {
    run_example()
}
