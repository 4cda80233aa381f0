use num_complex::Complex64;

use super::rng::RngStream;
use crate::shell::{ShellState, WaveLadder};

/// Complex Gaussian shells with spectral slope `(k_1 / k_n)^beta`.
pub fn random_state(ladder: WaveLadder, beta: f64, rng: &mut RngStream) -> ShellState {
    let amps = (1..=ladder.shells())
        .map(|n| {
            let (a, b) = rng.next_normals();
            let w = 2f64.powf(-beta * (n as f64 - 1.0));
            Complex64::new(a * w, b * w)
        })
        .collect();
    ShellState::from_amplitudes(ladder, amps).expect("gaussian draws are finite")
}

/// Rescales `u` to the given H norm (zero stays zero).
pub fn with_h_norm(u: &ShellState, target: f64) -> ShellState {
    let h = u.h_norm();
    if h == 0.0 {
        return u.clone();
    }
    u.scale_real(target / h)
}

/// Rescales `u` to the given ell^4 norm (zero stays zero).
pub fn with_l4_norm(u: &ShellState, target: f64) -> ShellState {
    let l4 = u.l4_norm();
    if l4 == 0.0 {
        return u.clone();
    }
    u.scale_real(target / l4)
}

/// `10^(lo + (hi - lo) U)`.
pub fn log_uniform(rng: &mut RngStream, lo: f64, hi: f64) -> f64 {
    10f64.powf(lo + (hi - lo) * rng.next_uniform())
}

/// Spectral slopes cycled through by the samplers.
pub const SAMPLER_SLOPES: [f64; 3] = [0.5, 1.0, 1.5];
