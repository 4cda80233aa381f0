use num_complex::Complex64;

use super::trajectory::Quadrature;
use crate::error::{Error, Result};
use crate::noise::{JumpDraw, NoiseConfig, RngStream, StepNoise};
use crate::shell::{Model, ShellState, WaveLadder};

/// States with `|u|` above this are treated as blown up.
pub const BLOW_UP_NORM: f64 = 1e12;

/// Largest `dt nu k_N^2` accepted for the explicit scheme.
pub const EM_STABILITY_LIMIT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SchemeKind {
    EmExplicit,
    #[default]
    ImexDiag,
}

impl SchemeKind {
    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::EmExplicit => "em",
            SchemeKind::ImexDiag => "imex",
        }
    }

    /// Quadrature for the running dissipation integral.
    pub fn quadrature(self) -> Quadrature {
        match self {
            SchemeKind::EmExplicit => Quadrature::Trapezoid,
            SchemeKind::ImexDiag => Quadrature::RightEndpoint,
        }
    }
}

/// Uniform time grid `t_k = k dt`, `k = 0..=steps`, with `steps dt = T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub kind: SchemeKind,
    pub dt: f64,
    pub horizon: f64,
    pub record_stride: usize,
}

impl SchemeConfig {
    pub fn new(kind: SchemeKind, dt: f64, horizon: f64, record_stride: usize) -> Result<Self> {
        let cfg = Self { kind, dt, horizon, record_stride };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn imex(dt: f64, horizon: f64) -> Result<Self> {
        Self::new(SchemeKind::ImexDiag, dt, horizon, 1)
    }

    pub fn em(dt: f64, horizon: f64) -> Result<Self> {
        Self::new(SchemeKind::EmExplicit, dt, horizon, 1)
    }

    pub fn with_record_stride(mut self, record_stride: usize) -> Self {
        self.record_stride = record_stride.max(1);
        self
    }

    pub fn with_horizon(&self, horizon: f64) -> Result<Self> {
        Self::new(self.kind, self.dt, horizon, self.record_stride)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!("scheme.dt must be positive, got {}", self.dt)));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::Config(format!("scheme.horizon must be positive, got {}", self.horizon)));
        }
        if self.dt > self.horizon {
            return Err(Error::Config(format!("scheme.dt = {} exceeds horizon {}", self.dt, self.horizon)));
        }
        if self.record_stride == 0 {
            return Err(Error::Config("scheme.record_stride must be >= 1".into()));
        }
        let ratio = self.horizon / self.dt;
        if (ratio - ratio.round()).abs() > 1e-6 * ratio.max(1.0) {
            return Err(Error::Config(format!(
                "horizon {} is not an integer multiple of dt {}",
                self.horizon, self.dt
            )));
        }
        Ok(())
    }

    /// Explicit-scheme stability guard `dt nu k_N^2 <= 2`.
    pub fn check_stability(&self, nu: f64, ladder: WaveLadder) -> Result<()> {
        let kn = ladder.k_max();
        let x = self.dt * nu * kn * kn;
        if self.kind == SchemeKind::EmExplicit && x > EM_STABILITY_LIMIT {
            return Err(Error::Config(format!(
                "explicit scheme unstable: dt nu k_N^2 = {x:.3e} > {EM_STABILITY_LIMIT}; use scheme.kind = imex or a smaller dt"
            )));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }
}

/// One jump applied during a step: time, mark and `|eps g(u, z)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpEvent {
    pub time: f64,
    pub mark: f64,
    pub increment_norm: f64,
}

/// Draws the noise of grid step `k` (none when `epsilon = 0`).
pub fn draw_step_noise(
    noise: &NoiseConfig,
    ladder: WaveLadder,
    t: f64,
    dt: f64,
    stream: &RngStream,
    k: u64,
) -> Result<Option<StepNoise>> {
    if noise.is_silent() {
        return Ok(None);
    }
    StepNoise::draw(&noise.q, &noise.jumps, ladder, t, dt, stream, k).map(Some)
}

/// Advances `u` from `t` to `t + dt` with pre-drawn noise, returning the new
/// state and the jumps applied.
pub fn step_with_noise(
    u: &ShellState,
    t: f64,
    dt: f64,
    model: &Model,
    noise: &NoiseConfig,
    kind: SchemeKind,
    draw: Option<&StepNoise>,
) -> Result<(ShellState, Vec<JumpEvent>)> {
    let ladder = *u.ladder();
    let nu = model.nu();
    let mut f = model.forcing().eval(t, ladder);
    let mut out = ShellState::zeros(ladder);
    match kind {
        SchemeKind::EmExplicit => model.drift_into(u, &mut out),
        SchemeKind::ImexDiag => {
            model.apply_b_into(u, u, &mut out);
            out.amplitudes_mut().iter_mut().for_each(|z| *z = -*z);
        }
    }
    {
        let fa = f.amplitudes_mut();
        for ((o, &x), fx) in out.amplitudes_mut().iter_mut().zip(u.amplitudes()).zip(fa.iter()) {
            *o = x + (*o + fx) * dt;
        }
    }

    let mut events = Vec::new();
    if let Some(draw) = draw {
        if noise.epsilon > 0.0 {
            let se = noise.epsilon.sqrt();
            let sigma = noise.sigma.eval(t, u)?;
            for ((o, s), dw) in out.amplitudes_mut().iter_mut().zip(&sigma).zip(draw.dw.amplitudes()) {
                *o += s * dw * se;
            }
            if noise.jumps.rate > 0.0 {
                let eps = noise.epsilon;
                let comp = noise.jumps.compensator(u)?;
                for (o, c) in out.amplitudes_mut().iter_mut().zip(comp.amplitudes()) {
                    *o -= c * (eps * dt);
                }
                for &JumpDraw { time, mark } in &draw.jumps {
                    let g = noise.jumps.g_eval(u, mark)?;
                    for (o, gz) in out.amplitudes_mut().iter_mut().zip(g.amplitudes()) {
                        *o += gz * eps;
                    }
                    events.push(JumpEvent { time, mark, increment_norm: eps * g.h_norm() });
                }
            }
        }
    }

    if kind == SchemeKind::ImexDiag {
        for (i, o) in out.amplitudes_mut().iter_mut().enumerate() {
            let k = ladder.k(i as i64 + 1);
            *o /= Complex64::new(1.0 + nu * dt * k * k, 0.0);
        }
    }

    let norm = out.h_norm();
    if !out.is_finite() || !(norm <= BLOW_UP_NORM) {
        return Err(Error::BlowUp { t: t + dt, norm, partial: None });
    }
    Ok((out, events))
}

/// Advances `u` over grid step `k` (from `t = k dt`) with noise drawn from `stream`.
pub fn step(
    u: &ShellState,
    k: u64,
    model: &Model,
    noise: &NoiseConfig,
    scheme: &SchemeConfig,
    stream: &RngStream,
) -> Result<ShellState> {
    let t = k as f64 * scheme.dt;
    let draw = draw_step_noise(noise, *u.ladder(), t, scheme.dt, stream, k)?;
    Ok(step_with_noise(u, t, scheme.dt, model, noise, scheme.kind, draw.as_ref())?.0)
}
