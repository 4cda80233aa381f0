//! Galerkin truncations on one shared noise path, and the shrinking
//! deviation from the noiseless path as epsilon goes to zero.
//!
//!     cargo run --release --example galerkin_scaling

use shellsim::integrator::SchemeConfig;
use shellsim::lab::{epsilon_scaling, galerkin_trend, EnsembleSpec, InitialLaw};
use shellsim::noise::{JumpFamily, MarkLaw, NoiseConfig, QSpectrum, SigmaFamily};
use shellsim::shell::{Model, WaveLadder};

pub fn run_example() -> shellsim::Result<()> {
    let n = 24;
    let ladder = WaveLadder::new(1.0, n)?;
    let spec = EnsembleSpec {
        model: Model::goy(1.0)?,
        noise: NoiseConfig::new(
            0.01,
            QSpectrum::new(1.0, 1.0)?,
            SigmaFamily::additive_uniform(1.0, n),
            JumpFamily::additive_on_shell(n, 1, 0.5, MarkLaw::Gaussian { std: 1.0 }, 2.0)?,
            n,
        )?,
        scheme: SchemeConfig::imex(1e-3, 0.5)?.with_record_stride(50),
        // fast spectral decay, so truncation errors shrink with N
        init: InitialLaw::deterministic(InitialLaw::power_law(ladder, 1.0, 1.5)),
        n_paths: 20,
        seed: 4,
        exit_level: None,
    };
    println!("{}", galerkin_trend(&spec, &[8, 12, 16, 24])?.summary_line());

    let mut small = spec.clone();
    small.init = InitialLaw::deterministic(spec.init.base.resize(10)?);
    small.noise = NoiseConfig::new(
        0.01,
        spec.noise.q,
        SigmaFamily::additive_uniform(1.0, 10),
        JumpFamily::additive_on_shell(10, 1, 0.5, MarkLaw::Gaussian { std: 1.0 }, 2.0)?,
        10,
    )?;
    let rep = epsilon_scaling(&small, &[1e-2, 1e-3, 1e-4])?;
    println!("{}", rep.summary_line());
    println!("  sup-t mean deviation: {}", rep.params["sup_mean_deviation"]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> shellsim::Result<()> {
    run_example()
}
