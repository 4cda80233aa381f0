use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::json;
use sha2::{Digest, Sha256};

use super::config::{Command, RunConfig};
use crate::error::{Error, Result};
use crate::integrator::{simulate_coupled, simulate_path, Trajectory};
use crate::lab::{
    bdg_check, bilinear_bound_checks, check_energy1, check_energy_sup, check_weighted, conservation_check,
    contraction_check, deterministic_contraction, hypothesis_audit, isometry_suite, l4_chain, l4_interpolation_check,
    monotonicity_scan, orthogonality_check, run_ensemble, spectrum, weighted_difference, AuditNorm, CheckReport,
    Verdict, VerificationReport,
};
use crate::noise::{certify_constants, JumpFamily, MarkLaw, RngStream};

/// Time steps of the sampled martingale in the BDG check.
const BDG_STEPS: usize = 200;

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub command: Command,
    pub output_dir: PathBuf,
    /// Files written, relative to `output_dir`, in write order.
    pub artifacts: Vec<String>,
    /// Checks produced by the command, if any.
    pub report: VerificationReport,
}

impl RunOutcome {
    /// Whether any check failed; the CLI exits nonzero in that case.
    pub fn failed(&self) -> bool {
        self.report.has_fail()
    }
}

/// Hex SHA-256 of the canonical config text.
pub fn config_hash(cfg: &RunConfig) -> String {
    format!("{:x}", Sha256::digest(cfg.to_config_string().as_bytes()))
}

struct Out {
    dir: PathBuf,
    artifacts: Vec<String>,
}

impl Out {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), artifacts: Vec::new() })
    }

    fn write(&mut self, name: &str, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
        let mut w = BufWriter::new(File::create(self.dir.join(name))?);
        f(&mut w)?;
        w.flush()?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    fn json(&mut self, name: &str, value: &impl serde::Serialize) -> Result<()> {
        self.write(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            writeln!(w)?;
            Ok(())
        })
    }

    fn trajectory(&mut self, tag: &str, tr: &Trajectory) -> Result<()> {
        self.write(&format!("{tag}_{}.csv", tr.stream_id), |w| tr.write_csv(w))?;
        self.write(&format!("{tag}_jumps_{}.csv", tr.stream_id), |w| tr.write_jumps_csv(w))
    }

    fn manifest(&mut self, cfg: &RunConfig, cmd: Command) -> Result<()> {
        self.write("config.cfg", |w| Ok(w.write_all(cfg.to_config_string().as_bytes())?))?;
        let m = json!({
            "command": cmd.name(),
            "config_sha256": config_hash(cfg),
            "seed": cfg.seed,
            "version": env!("CARGO_PKG_VERSION"),
            "artifacts": self.artifacts,
        });
        self.json("manifest.json", &m)
    }
}

/// Runs `cmd` on a pool of `threads` workers (rayon's default when `None`).
/// The thread count never changes the outputs.
pub fn run_with_threads(cfg: &RunConfig, cmd: Command, threads: Option<usize>) -> Result<RunOutcome> {
    match threads {
        None => run(cfg, cmd),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(|| run(cfg, cmd)),
    }
}

/// Runs `cmd`, writing its artifacts and a manifest into `cfg.output_dir`.
/// A blow-up still writes the partial trajectory before the error returns.
pub fn run(cfg: &RunConfig, cmd: Command) -> Result<RunOutcome> {
    cfg.validate()?;
    let mut out = Out::new(&cfg.output_dir)?;
    let mut report = VerificationReport::default();
    let result = match cmd {
        Command::Simulate => simulate(cfg, &mut out),
        Command::Couple => couple(cfg, &mut out, &mut report),
        Command::Ensemble => ensemble(cfg, &mut out, &mut report),
        Command::Verify => verify(cfg, &mut out, &mut report),
        Command::Certify => certify(cfg, &mut out),
        Command::Spectrum => spectrum_csv(cfg, &mut out),
    };
    if let Err(Error::BlowUp { partial: Some(tr), .. }) = &result {
        out.trajectory("partial", tr)?;
    }
    out.manifest(cfg, cmd)?;
    result?;
    Ok(RunOutcome { command: cmd, output_dir: out.dir, artifacts: out.artifacts, report })
}

fn simulate(cfg: &RunConfig, out: &mut Out) -> Result<()> {
    let spec = cfg.ensemble_spec()?;
    let stream = spec.stream(0);
    let u0 = spec.init.sample(&stream);
    let exit = cfg.tau_thresholds.first().copied();
    let tr = simulate_path(&u0, &spec.model, &spec.noise, &spec.scheme, &stream, exit)?;
    out.trajectory("trajectory", &tr)
}

fn couple(cfg: &RunConfig, out: &mut Out, report: &mut VerificationReport) -> Result<()> {
    let spec = cfg.ensemble_spec()?;
    let offset = cfg.couple_offset()?;
    let u0 = spec.init.base.clone();
    let v0 = &u0 + &offset;
    let pair = simulate_coupled(&u0, &v0, &spec.model, &spec.noise, &spec.scheme, &spec.stream(0))?;
    out.trajectory("pair_u", &pair.first)?;
    out.trajectory("pair_v", &pair.second)?;
    let weighted = weighted_difference(&pair, spec.model.nu());
    let (check, series) = if spec.noise.is_silent() {
        let c = deterministic_contraction(&u0, &v0, &spec.model, &spec.scheme)?;
        let rows: Vec<_> = pair.first.grid.iter().zip(&weighted).map(|(t, w)| json!([t, w, 0.0])).collect();
        (c, rows)
    } else {
        let c = contraction_check(&spec, &offset)?;
        let rows: Vec<_> = c.times.iter().zip(&c.weighted_diff).map(|(t, m)| json!([t, m.mean, m.stderr])).collect();
        (c.check, rows)
    };
    out.json(
        "contraction.json",
        &json!({
            "check": check,
            "columns": ["t", "weighted_diff_mean", "weighted_diff_stderr"],
            "series": series,
        }),
    )?;
    report.push(check);
    Ok(())
}

fn ensemble(cfg: &RunConfig, out: &mut Out, report: &mut VerificationReport) -> Result<()> {
    let spec = cfg.ensemble_spec()?;
    let ens = run_ensemble(&spec)?;
    report.push(check_energy1(&spec, &ens)?);
    report.push(check_energy_sup(&spec, &ens)?);
    for &delta in &cfg.deltas {
        let (a, b) = check_weighted(&spec, &ens, delta)?;
        report.push(a);
        report.push(b);
    }
    for &level in &cfg.tau_thresholds {
        let exits: Vec<f64> = ens.paths.iter().filter_map(|p| p.exit_time(level)).collect();
        let frac = exits.len() as f64 / ens.paths.len() as f64;
        report.push(
            CheckReport::new("exit_fraction", frac, 1.0, 0.0, ens.paths.len(), Verdict::ReportOnly)
                .param("threshold", level)
                .param(
                    "mean_exit_time",
                    if exits.is_empty() { f64::NAN } else { exits.iter().sum::<f64>() / exits.len() as f64 },
                ),
        );
    }
    out.json("energy_report.json", report)
}

fn verify(cfg: &RunConfig, out: &mut Out, report: &mut VerificationReport) -> Result<()> {
    let model = cfg.model()?;
    let noise = cfg.noise()?;
    let ladder = cfg.ladder()?;
    let (n, seed) = (cfg.samples, cfg.seed);
    report.push(conservation_check(&model, ladder, n, seed));
    report.push(orthogonality_check(&model, ladder, n, seed));
    report.push(l4_interpolation_check(ladder, n, seed));
    report.extend(bilinear_bound_checks(&model, ladder, n, seed));
    let (m2, mfull) = monotonicity_scan(cfg.ball_radius, &model, &noise, ladder, n, seed)?;
    report.push(m2);
    report.push(mfull);
    let (chain, young) = l4_chain(&model, ladder, n, seed)?;
    report.push(chain);
    report.push(young);
    let jumps = if noise.jumps.is_additive() && noise.jumps.rate > 0.0 {
        noise.jumps.clone()
    } else {
        JumpFamily::additive_on_shell(ladder.shells(), 1, 1.0, MarkLaw::Gaussian { std: 1.0 }, 1.0)?
    };
    report.extend(isometry_suite(&jumps, cfg.horizon, n, seed)?);
    let mut gamma = vec![Complex64::new(0.0, 0.0); ladder.shells()];
    gamma[0] = Complex64::new(1.0, 0.0);
    report.push(bdg_check(&noise.q, ladder, &gamma, cfg.horizon, BDG_STEPS, n, seed)?);
    for mode in [AuditNorm::H, AuditNorm::V] {
        let (g, l) = hypothesis_audit(&noise, ladder, mode, n, seed)?;
        report.push(g);
        report.push(l);
    }
    out.json("verify_report.json", report)
}

fn certify(cfg: &RunConfig, out: &mut Out) -> Result<()> {
    let noise = cfg.noise()?;
    let mut rng = RngStream::new(cfg.seed, 0);
    let rep = certify_constants(&noise, cfg.ladder()?, cfg.samples, &mut rng)?;
    out.json("certification.json", &rep)
}

fn spectrum_csv(cfg: &RunConfig, out: &mut Out) -> Result<()> {
    let spec = cfg.ensemble_spec()?;
    let ens = run_ensemble(&spec)?;
    let rows = spectrum(&ens, 0.5 * cfg.horizon)?;
    out.write("spectrum.csv", |w| {
        writeln!(w, "k,e2_mean,e2_stderr")?;
        for (k, m, se) in rows {
            writeln!(w, "{k:.16e},{m:.16e},{se:.16e}")?;
        }
        Ok(())
    })
}
