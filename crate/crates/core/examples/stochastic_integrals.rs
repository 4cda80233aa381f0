//! Compensated Poisson integrals and a Wiener martingale: isometry,
//! zero mean, the first-moment bound and Doob's maximal inequality.
//!
//!     cargo run --release --example stochastic_integrals

use num_complex::Complex64;
use shellsim::lab::{bdg_check, isometry_suite};
use shellsim::noise::{JumpFamily, MarkLaw, QSpectrum};
use shellsim::shell::WaveLadder;

pub fn run_example() -> shellsim::Result<()> {
    for law in [MarkLaw::Gaussian { std: 1.0 }, MarkLaw::Uniform { lo: 0.0, hi: 2.0 }, MarkLaw::Dirac { z0: -0.5 }] {
        let fam = JumpFamily::additive_on_shell(4, 1, 1.0, law, 1.0)?;
        println!("marks: {}", law.name());
        for r in isometry_suite(&fam, 1.0, 20_000, 11)? {
            println!("  {}", r.summary_line());
        }
    }
    let ladder = WaveLadder::new(1.0, 4)?;
    let mut gamma = vec![Complex64::new(0.0, 0.0); 4];
    gamma[0] = Complex64::new(1.0, 0.0);
    gamma[2] = Complex64::new(0.0, 2.0);
    println!("{}", bdg_check(&QSpectrum::new(1.0, 1.0)?, ladder, &gamma, 1.0, 100, 5000, 12)?.summary_line());
    Ok(())
}

#[allow(dead_code)]
fn main() -> shellsim::Result<()> {
    run_example()
}
