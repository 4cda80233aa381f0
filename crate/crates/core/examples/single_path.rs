//! One path of the Sabra model under Wiener and jump noise, written as
//! CSV, with its energy budget.
//!
//!     cargo run --example single_path > path.csv

use shellsim::integrator::{simulate_path, SchemeConfig};
use shellsim::lab::InitialLaw;
use shellsim::noise::{JumpFamily, MarkLaw, NoiseConfig, QSpectrum, RngStream, SigmaFamily};
use shellsim::shell::{Forcing, Model, WaveLadder};

pub fn run_example() -> shellsim::Result<String> {
    let ladder = WaveLadder::new(1.0, 12)?;
    let forcing = Forcing::ConstantShell { shell: 1, amplitude: num_complex::Complex64::new(0.5, 0.0) };
    let model = Model::sabra(1.0)?.with_forcing(forcing);
    let noise = NoiseConfig::new(
        0.05,
        QSpectrum::new(1.0, 1.0)?,
        SigmaFamily::SaturatedMult { gain: 1.0 },
        JumpFamily::additive_on_shell(12, 1, 0.5, MarkLaw::Gaussian { std: 1.0 }, 4.0)?,
        12,
    )?;
    let scheme = SchemeConfig::imex(1e-3, 2.0)?.with_record_stride(50);
    let u0 = InitialLaw::power_law(ladder, 1.0, 1.0);
    let tr = simulate_path(&u0, &model, &noise, &scheme, &RngStream::new(42, 0), Some(5.0))?;

    eprintln!(
        "{} steps, {} jumps, |u(T)|^2 = {:.4}, int ||u||^2 = {:.4}, exit at {:?}",
        tr.steps(),
        tr.jump_events.len(),
        tr.energy.last().unwrap(),
        tr.dissipation.last().unwrap(),
        tr.tau_exit
    );
    Ok(tr.to_csv_string())
}

#[allow(dead_code)]
fn main() -> shellsim::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
