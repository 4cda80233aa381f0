//! Local monotonicity of the drift on an ell^4 ball, with and without the
//! noise terms, for a few ball radii.
//!
//!     cargo run --release --example monotonicity

use shellsim::lab::{l4_interpolation_check, monotonicity_scan};
use shellsim::noise::{JumpFamily, NoiseConfig, QSpectrum, SigmaFamily};
use shellsim::shell::{Model, WaveLadder};

pub fn run_example() -> shellsim::Result<()> {
    let ladder = WaveLadder::new(1.0, 14)?;
    println!("{}", l4_interpolation_check(ladder, 2000, 1).summary_line());
    let sigma = SigmaFamily::LinearMult { gain: 1.0 };
    let base = NoiseConfig::new(0.0, QSpectrum::new(1.0, 1.0)?, sigma, JumpFamily::none(), 14)?;
    for nu in [0.5, 1.0] {
        let model = Model::sabra(nu)?;
        // a quarter of the admissible noise level
        let noise = base.with_epsilon(nu / (4.0 * base.l_cert));
        for r in [0.5, 1.0, 2.0] {
            let (algebraic, full) = monotonicity_scan(r, &model, &noise, ladder, 1000, 2)?;
            println!("nu = {nu}, r = {r}");
            println!("  {}", algebraic.summary_line());
            println!("  {}", full.summary_line());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> shellsim::Result<()> {
    run_example()
}
