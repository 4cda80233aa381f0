use num_complex::Complex64;

use super::families::{JumpFamily, QSpectrum};
use super::rng::{address, RngStream, LANE_JUMP_COUNT, LANE_JUMP_MARK, LANE_JUMP_TIME, LANE_WIENER};
use crate::error::{Error, Result};
use crate::shell::{ShellState, WaveLadder};

/// Poisson means above this are split into chunks for the inversion sampler.
const POISSON_CHUNK_MEAN: f64 = 20.0;

/// Inversion sampler for a Poisson variate with small mean.
fn poisson_inverse(mean: f64, u: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let mut k = 0u64;
    let mut p = (-mean).exp();
    let mut cdf = p;
    while u > cdf && k < 10_000 {
        k += 1;
        p *= mean / k as f64;
        cdf += p;
        if p == 0.0 {
            break;
        }
    }
    k
}

/// Poisson count addressed by `(step, LANE_JUMP_COUNT, chunk)`.
pub fn poisson_count(mean: f64, stream: &RngStream, step: u64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let chunks = (mean / POISSON_CHUNK_MEAN).ceil().max(1.0) as u32;
    let per = mean / chunks as f64;
    (0..chunks).map(|c| poisson_inverse(per, stream.uniforms_at(address(step, LANE_JUMP_COUNT, c)).0)).sum()
}

/// Complex Q-Wiener increment over `dt` at grid step `step`: independent
/// real and imaginary parts, each `N(0, q_n dt / 2)`.
pub fn wiener_increment(
    q: &QSpectrum,
    ladder: WaveLadder,
    dt: f64,
    stream: &RngStream,
    step: u64,
) -> Result<ShellState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("time step must be positive, got {dt}")));
    }
    let amps = (1..=ladder.shells())
        .map(|n| {
            let (a, b) = stream.normals_at(address(step, LANE_WIENER, n as u32));
            let s = (q.eigenvalue(n) * dt / 2.0).sqrt();
            Complex64::new(a * s, b * s)
        })
        .collect();
    ShellState::from_amplitudes(ladder, amps)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpDraw {
    pub time: f64,
    pub mark: f64,
}

/// Jumps of the compound-Poisson stream in `(t0, t0 + dt]`, sorted by time.
pub fn sample_jumps(fam: &JumpFamily, t0: f64, dt: f64, stream: &RngStream, step: u64) -> Result<Vec<JumpDraw>> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("time step must be positive, got {dt}")));
    }
    let count = poisson_count(fam.rate * dt, stream, step);
    let mut jumps: Vec<JumpDraw> = (0..count)
        .map(|j| {
            let j = j as u32;
            let (ut, _) = stream.uniforms_at(address(step, LANE_JUMP_TIME, j));
            let (m1, m2) = stream.uniforms_at(address(step, LANE_JUMP_MARK, j));
            JumpDraw {
                // (0,1) open uniform mapped onto (t0, t0 + dt]
                time: t0 + dt * (1.0 - ut),
                mark: fam.mark_law.sample(m1, m2),
            }
        })
        .collect();
    jumps.sort_by(|a, b| a.time.total_cmp(&b.time));
    Ok(jumps)
}

/// All noise consumed by one integrator step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepNoise {
    pub dw: ShellState,
    pub jumps: Vec<JumpDraw>,
}

impl StepNoise {
    pub fn draw(
        q: &QSpectrum,
        jumps: &JumpFamily,
        ladder: WaveLadder,
        t0: f64,
        dt: f64,
        stream: &RngStream,
        step: u64,
    ) -> Result<Self> {
        Ok(Self {
            dw: wiener_increment(q, ladder, dt, stream, step)?,
            jumps: sample_jumps(jumps, t0, dt, stream, step)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::families::MarkLaw;

    #[test]
    fn wiener_variance_matches_q_dt() {
        let ladder = WaveLadder::new(1.0, 4).unwrap();
        let q = QSpectrum::new(1.0, 1.0).unwrap(); // q_1 = 0.5
        let s = RngStream::new(11, 0);
        let n = 100_000u64;
        let mut acc = 0.0;
        for k in 0..n {
            acc += wiener_increment(&q, ladder, 0.01, &s, k).unwrap().get(1).norm_sqr();
        }
        let var = acc / n as f64;
        assert!((var - 0.005).abs() / 0.005 < 0.05, "var = {var}");
    }

    #[test]
    fn wiener_is_deterministic_and_rejects_bad_dt() {
        let ladder = WaveLadder::new(1.0, 6).unwrap();
        let q = QSpectrum::new(1.0, 1.0).unwrap();
        let s = RngStream::new(3, 9);
        let a = wiener_increment(&q, ladder, 0.1, &s, 17).unwrap();
        let b = wiener_increment(&q, ladder, 0.1, &s, 17).unwrap();
        assert_eq!(a, b);
        assert!(wiener_increment(&q, ladder, 0.0, &s, 0).is_err());
        assert!(wiener_increment(&q, ladder, -1.0, &s, 0).is_err());
        // draws are aligned by shell index across truncations
        let big = wiener_increment(&q, WaveLadder::new(1.0, 10).unwrap(), 0.1, &s, 17).unwrap();
        assert_eq!(&big.amplitudes()[..6], a.amplitudes());
    }

    #[test]
    fn zero_rate_never_jumps() {
        let fam = JumpFamily { rate: 0.0, ..JumpFamily::none() };
        let s = RngStream::new(1, 1);
        for k in 0..1000 {
            assert!(sample_jumps(&fam, 0.0, 1.0, &s, k).unwrap().is_empty());
        }
    }

    #[test]
    fn poisson_mean_and_window() {
        let fam = JumpFamily::additive_on_shell(4, 1, 1.0, MarkLaw::Dirac { z0: 1.0 }, 2.0).unwrap();
        let s = RngStream::new(5, 0);
        let n = 100_000u64;
        let mut total = 0usize;
        for k in 0..n {
            let t0 = k as f64;
            let js = sample_jumps(&fam, t0, 1.0, &s, k).unwrap();
            assert!(js.windows(2).all(|w| w[0].time <= w[1].time));
            assert!(js.iter().all(|j| j.time > t0 && j.time <= t0 + 1.0 && j.mark == 1.0));
            total += js.len();
        }
        let mean = total as f64 / n as f64;
        let se = (2.0 / n as f64).sqrt();
        assert!((mean - 2.0).abs() < 3.0 * se, "mean = {mean}");
    }

    #[test]
    fn large_means_are_chunked() {
        let s = RngStream::new(8, 0);
        let n = 20_000u64;
        let mean = (0..n).map(|k| poisson_count(75.0, &s, k) as f64).sum::<f64>() / n as f64;
        assert!((mean - 75.0).abs() < 4.0 * (75.0 / n as f64).sqrt(), "mean = {mean}");
    }
}
