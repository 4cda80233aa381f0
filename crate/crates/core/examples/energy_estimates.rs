//! Monte Carlo estimates of the energy bounds on an additive-noise
//! ensemble, plus the time-averaged spectrum.
//!
//!     cargo run --release --example energy_estimates

use shellsim::integrator::SchemeConfig;
use shellsim::lab::{
    check_energy1, check_energy_sup, check_weighted, run_ensemble, spectrum, EnsembleSpec, InitialLaw,
};
use shellsim::noise::{JumpFamily, NoiseConfig, QSpectrum, SigmaFamily};
use shellsim::shell::{Model, WaveLadder};

pub fn run_example() -> shellsim::Result<()> {
    let n = 10;
    let ladder = WaveLadder::new(1.0, n)?;
    let spec = EnsembleSpec {
        model: Model::sabra(1.0)?,
        noise: NoiseConfig::new(
            0.05,
            QSpectrum::new(1.0, 1.0)?,
            SigmaFamily::additive_uniform(1.0, n),
            JumpFamily::none(),
            n,
        )?,
        scheme: SchemeConfig::imex(1e-3, 1.0)?.with_record_stride(100),
        init: InitialLaw { base: InitialLaw::power_law(ladder, 1.0, 1.0), noise: 0.1 },
        n_paths: 100,
        seed: 9,
        exit_level: None,
    };
    let ens = run_ensemble(&spec)?;
    println!("{}", check_energy1(&spec, &ens)?.summary_line());
    println!("{}", check_energy_sup(&spec, &ens)?.summary_line());
    let (weighted, weighted_sup) = check_weighted(&spec, &ens, 1.0)?;
    println!("{}", weighted.summary_line());
    println!("{}", weighted_sup.summary_line());

    println!("k, E|u_n|^2, se");
    for (k, m, se) in spectrum(&ens, 0.5)? {
        println!("{k:>6}  {m:.3e}  {se:.1e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> shellsim::Result<()> {
    run_example()
}
