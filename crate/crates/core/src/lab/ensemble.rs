use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::integrator::{simulate_coupled, simulate_path, PairTrajectory, SchemeConfig, Trajectory};
use crate::noise::{random_state, NoiseConfig, RngStream};
use crate::shell::{Model, ShellState, WaveLadder};

/// Tag of the derived stream that draws random initial data.
const INIT_TAG: u64 = 0x1217;

/// Largest tolerated fraction of blown-up paths.
pub const MAX_BLOW_UP_FRACTION: f64 = 0.01;

/// Initial data `u0 = base + noise * G` with `G` a Gaussian state of slope 1.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialLaw {
    pub base: ShellState,
    pub noise: f64,
}

impl InitialLaw {
    pub fn deterministic(u0: ShellState) -> Self {
        Self { base: u0, noise: 0.0 }
    }

    /// `amplitude (k_1 / k_n)^slope e^{i n}`.
    pub fn power_law(ladder: WaveLadder, amplitude: f64, slope: f64) -> ShellState {
        let amps = (1..=ladder.shells())
            .map(|n| Complex64::from_polar(amplitude * 2f64.powf(-slope * (n as f64 - 1.0)), n as f64))
            .collect();
        ShellState::from_amplitudes(ladder, amps).expect("finite amplitudes")
    }

    pub fn sample(&self, stream: &RngStream) -> ShellState {
        if self.noise == 0.0 {
            return self.base.clone();
        }
        let mut rng = stream.derive(INIT_TAG);
        let g = random_state(*self.base.ladder(), 1.0, &mut rng);
        &self.base + &g.scale_real(self.noise)
    }
}

/// Everything needed to run an ensemble of independent paths.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub model: Model,
    pub noise: NoiseConfig,
    pub scheme: SchemeConfig,
    pub init: InitialLaw,
    pub n_paths: usize,
    pub seed: u64,
    pub exit_level: Option<f64>,
}

impl EnsembleSpec {
    pub fn ladder(&self) -> WaveLadder {
        *self.init.base.ladder()
    }

    pub fn stream(&self, path: usize) -> RngStream {
        RngStream::new(self.seed, path as u64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    /// Surviving paths in path-index order.
    pub paths: Vec<Trajectory>,
    pub initial: Vec<ShellState>,
    /// Indices of excluded paths.
    pub blown_up: Vec<usize>,
    pub n_paths: usize,
}

fn check_blow_ups(blown_up: usize, n_paths: usize) -> Result<()> {
    if blown_up as f64 > MAX_BLOW_UP_FRACTION * n_paths as f64 {
        return Err(Error::TooManyBlowUps { blown_up, n_paths });
    }
    Ok(())
}

/// Runs paths `0..n_paths` in parallel, one stream per path; blown-up paths
/// are excluded (at most 1%).
pub fn run_ensemble(spec: &EnsembleSpec) -> Result<Ensemble> {
    if spec.n_paths == 0 {
        return Err(Error::Config("ensemble needs n_paths >= 1".into()));
    }
    let results: Vec<(ShellState, Result<Trajectory>)> = (0..spec.n_paths)
        .into_par_iter()
        .map(|i| {
            let s = spec.stream(i);
            let u0 = spec.init.sample(&s);
            let tr = simulate_path(&u0, &spec.model, &spec.noise, &spec.scheme, &s, spec.exit_level);
            (u0, tr)
        })
        .collect();
    let mut ens = Ensemble { paths: Vec::new(), initial: Vec::new(), blown_up: Vec::new(), n_paths: spec.n_paths };
    for (i, (u0, r)) in results.into_iter().enumerate() {
        match r {
            Ok(tr) => {
                ens.paths.push(tr);
                ens.initial.push(u0);
            }
            Err(Error::BlowUp { .. }) => ens.blown_up.push(i),
            Err(e) => return Err(e),
        }
    }
    check_blow_ups(ens.blown_up.len(), spec.n_paths)?;
    Ok(ens)
}

/// Coupled pairs `(u0_i, v0_i)` sharing the noise of path `i`.
pub fn run_coupled_ensemble(spec: &EnsembleSpec, v_offset: &ShellState) -> Result<(Vec<PairTrajectory>, Vec<usize>)> {
    if spec.n_paths == 0 {
        return Err(Error::Config("ensemble needs n_paths >= 1".into()));
    }
    let results: Vec<Result<PairTrajectory>> = (0..spec.n_paths)
        .into_par_iter()
        .map(|i| {
            let s = spec.stream(i);
            let u0 = spec.init.sample(&s);
            let v0 = &u0 + v_offset;
            simulate_coupled(&u0, &v0, &spec.model, &spec.noise, &spec.scheme, &s)
        })
        .collect();
    let mut pairs = Vec::new();
    let mut blown = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(p) => pairs.push(p),
            Err(Error::BlowUp { .. }) => blown.push(i),
            Err(e) => return Err(e),
        }
    }
    check_blow_ups(blown.len(), spec.n_paths)?;
    Ok((pairs, blown))
}

/// Per-shell `E|u_n|^2` averaged over snapshot times `>= t_from` and paths,
/// with the standard error of the per-path time averages.
pub fn spectrum(ens: &Ensemble, t_from: f64) -> Result<Vec<(f64, f64, f64)>> {
    let first = ens.paths.first().ok_or_else(|| Error::Domain("empty ensemble".into()))?;
    let ladder = *first.states[0].ladder();
    let per_path: Vec<Vec<f64>> = ens
        .paths
        .iter()
        .map(|tr| {
            let mut acc = vec![0.0; ladder.shells()];
            let mut count = 0usize;
            for (t, s) in tr.times.iter().zip(&tr.states) {
                if *t + 1e-12 >= t_from {
                    for (a, z) in acc.iter_mut().zip(s.amplitudes()) {
                        *a += z.norm_sqr();
                    }
                    count += 1;
                }
            }
            acc.iter().map(|a| a / count.max(1) as f64).collect()
        })
        .collect();
    Ok((0..ladder.shells())
        .map(|n| {
            let xs: Vec<f64> = per_path.iter().map(|p| p[n]).collect();
            let m = super::stats::MeanSe::of(&xs);
            (ladder.k(n as i64 + 1), m.mean, m.stderr)
        })
        .collect())
}
