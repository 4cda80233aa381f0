//! GOY and Sabra nonlinearities on a random state: energy conservation,
//! the norm ladder and the operator bounds.
//!
//!     cargo run --example shell_operators

use num_complex::Complex64;
use shellsim::noise::{random_state, RngStream};
use shellsim::shell::{inner_h, Model, WaveLadder};

pub fn run_example() -> shellsim::Result<()> {
    let ladder = WaveLadder::new(1.0, 20)?;
    let mut rng = RngStream::new(7, 0);
    let u = random_state(ladder, 1.0, &mut rng);
    let n = u.norms();
    println!("|u| = {:.4}  ||u|| = {:.4}  |u|_l4 = {:.4}", n.h, n.v, n.l4);

    for model in [Model::goy(1.0)?, Model::sabra(1.0)?] {
        let b = model.apply_b(&u, &u)?;
        let bounds = model.bilinear_bounds();
        println!(
            "{:>5}: (B(u,u),u) = {:+.2e}  |B(u,u)| = {:.4} <= {:.4}",
            model.variant().name(),
            inner_h(&b, &u)?,
            b.h_norm(),
            bounds.c1 * n.v * n.h
        );
        // the drift's energy budget is pure dissipation
        println!("       (F(u),u) + nu ||u||^2 = {:+.2e}", inner_h(&model.drift(&u), &u)? + model.nu() * n.v * n.v);
    }

    // a single excited shell cannot feed itself
    let mut e = u.scale_real(0.0);
    e.set(3, Complex64::new(1.0, 0.0))?;
    println!("B(e_3, e_3) = 0: {}", Model::sabra(1.0)?.apply_b(&e, &e)?.h_norm() == 0.0);
    Ok(())
}

#[allow(dead_code)]
fn main() -> shellsim::Result<()> {
    run_example()
}
