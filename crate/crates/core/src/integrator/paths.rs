use super::scheme::{draw_step_noise, step_with_noise, SchemeConfig};
use super::trajectory::{PairTrajectory, Trajectory};
use crate::error::{Error, Result};
use crate::noise::{NoiseConfig, RngStream};
use crate::shell::{Model, ShellState};

fn check_inputs(u0: &ShellState, model: &Model, noise: &NoiseConfig, scheme: &SchemeConfig) -> Result<()> {
    scheme.validate()?;
    scheme.check_stability(model.nu(), *u0.ladder())?;
    noise.validate_families()?;
    noise.check_admissible(model.nu())?;
    if !u0.is_finite() {
        return Err(Error::Domain("initial state is not finite".into()));
    }
    Ok(())
}

fn attach(err: Error, partial: Trajectory) -> Error {
    match err {
        Error::BlowUp { t, norm, .. } => Error::BlowUp { t, norm, partial: Some(Box::new(partial)) },
        other => other,
    }
}

struct Runner {
    u: ShellState,
    f: ShellState,
    traj: Trajectory,
}

impl Runner {
    fn new(u0: &ShellState, model: &Model, scheme: &SchemeConfig, exit_level: Option<f64>, stream_id: u64) -> Self {
        let f = model.forcing().eval(0.0, *u0.ladder());
        let traj = Trajectory::start(u0, &f, exit_level, stream_id, scheme.kind.quadrature());
        Self { u: u0.clone(), f, traj }
    }

    fn advance(
        &mut self,
        k: usize,
        model: &Model,
        noise: &NoiseConfig,
        scheme: &SchemeConfig,
        draw: Option<&crate::noise::StepNoise>,
    ) -> Result<()> {
        let t = scheme.time(k);
        let (next, events) = step_with_noise(&self.u, t, scheme.dt, model, noise, scheme.kind, draw)?;
        let t1 = scheme.time(k + 1);
        let f1 = model.forcing().eval(t1, *next.ladder());
        let last = k + 1 == scheme.steps();
        let snap = (k + 1).is_multiple_of(scheme.record_stride) || last;
        self.traj.push(t1, &next, &self.u, &self.f, &f1, snap);
        self.traj.jump_events.extend(events);
        self.u = next;
        self.f = f1;
        Ok(())
    }
}

/// Integrates one path over the scheme's grid; `exit_level` sets the
/// threshold of the recorded exit time.
pub fn simulate_path(
    u0: &ShellState,
    model: &Model,
    noise: &NoiseConfig,
    scheme: &SchemeConfig,
    stream: &RngStream,
    exit_level: Option<f64>,
) -> Result<Trajectory> {
    check_inputs(u0, model, noise, scheme)?;
    let mut run = Runner::new(u0, model, scheme, exit_level, stream.stream_id());
    for k in 0..scheme.steps() {
        let draw = draw_step_noise(noise, *u0.ladder(), scheme.time(k), scheme.dt, stream, k as u64)?;
        if let Err(e) = run.advance(k, model, noise, scheme, draw.as_ref()) {
            return Err(attach(e, run.traj));
        }
    }
    Ok(run.traj)
}

/// Integrates `u0` and `v0` with identical noise draws.
pub fn simulate_coupled(
    u0: &ShellState,
    v0: &ShellState,
    model: &Model,
    noise: &NoiseConfig,
    scheme: &SchemeConfig,
    stream: &RngStream,
) -> Result<PairTrajectory> {
    u0.check_same_ladder(v0)?;
    check_inputs(u0, model, noise, scheme)?;
    check_inputs(v0, model, noise, scheme)?;
    let mut a = Runner::new(u0, model, scheme, None, stream.stream_id());
    let mut b = Runner::new(v0, model, scheme, None, stream.stream_id());
    let mut diff = vec![(u0 - v0).h_norm_sq()];
    for k in 0..scheme.steps() {
        let draw = draw_step_noise(noise, *u0.ladder(), scheme.time(k), scheme.dt, stream, k as u64)?;
        if let Err(e) = a.advance(k, model, noise, scheme, draw.as_ref()) {
            return Err(attach(e, a.traj));
        }
        if let Err(e) = b.advance(k, model, noise, scheme, draw.as_ref()) {
            return Err(attach(e, b.traj));
        }
        diff.push((&a.u - &b.u).h_norm_sq());
    }
    Ok(PairTrajectory { first: a.traj, second: b.traj, diff_energy: diff })
}

/// Galerkin truncations of `u0` (given on the largest dimension) integrated
/// with shell-aligned noise from the same stream.
pub fn galerkin_refine(
    u0: &ShellState,
    dims: &[usize],
    model: &Model,
    noise: &NoiseConfig,
    scheme: &SchemeConfig,
    stream: &RngStream,
) -> Result<Vec<Trajectory>> {
    if dims.is_empty() || dims.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain(format!("dims must be nonempty and nondecreasing, got {dims:?}")));
    }
    let top = *dims.last().expect("nonempty");
    if top != u0.len() {
        return Err(Error::Dimension(format!(
            "initial state has {} shells, largest Galerkin dimension is {top}",
            u0.len()
        )));
    }
    dims.iter().map(|&d| simulate_path(&u0.resize(d)?, model, noise, scheme, stream, None)).collect()
}

/// `sup_k |u^a(t_k) - u^b(t_k)|` over common snapshots, zero-padding the
/// shorter state.
pub fn sup_snapshot_distance(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    if a.times.len() != b.times.len() {
        return Err(Error::Dimension("trajectories have different snapshot grids".into()));
    }
    let n = a.states[0].len().max(b.states[0].len());
    let mut sup = 0.0f64;
    for (x, y) in a.states.iter().zip(&b.states) {
        let d = &x.resize(n)? - &y.resize(n)?;
        sup = sup.max(d.h_norm());
    }
    Ok(sup)
}
