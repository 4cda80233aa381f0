//! Closed-form growth and Lipschitz constants of the built-in noise
//! families, checked against sampled ratios.
//!
//!     cargo run --example noise_certification

use shellsim::noise::{certify_constants, JumpFamily, MarkLaw, NoiseConfig, QSpectrum, RngStream, SigmaFamily};
use shellsim::shell::WaveLadder;

pub fn run_example() -> shellsim::Result<()> {
    let ladder = WaveLadder::new(1.0, 12)?;
    let q = QSpectrum::new(1.0, 1.0)?;
    let n = ladder.shells();
    let families = [
        (SigmaFamily::additive_uniform(0.5, n), JumpFamily::none()),
        (
            SigmaFamily::LinearMult { gain: 0.8 },
            JumpFamily::additive_on_shell(n, 2, 0.5, MarkLaw::Uniform { lo: -1.0, hi: 1.0 }, 3.0)?,
        ),
        (
            SigmaFamily::SaturatedMult { gain: 1.0 },
            JumpFamily::additive_on_shell(n, 1, 1.0, MarkLaw::Dirac { z0: 0.3 }, 5.0)?,
        ),
    ];
    for (sigma, jumps) in families {
        let cfg = NoiseConfig::new(0.01, q, sigma, jumps, n)?;
        let mut rng = RngStream::new(3, 0);
        let rep = certify_constants(&cfg, ladder, 2000, &mut rng)?;
        println!("{}", rep.families);
        println!(
            "  K = {:.4} (sampled ratio {:.4})  L = {:.4} (sampled ratio {:.4})  eps_max = {:.3}",
            cfg.k_cert,
            rep.max_growth_ratio,
            cfg.l_cert,
            rep.max_lipschitz_ratio,
            if cfg.l_cert > 0.0 { 1.0 / (2.0 * cfg.l_cert) } else { f64::INFINITY }
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> shellsim::Result<()> {
    run_example()
}
