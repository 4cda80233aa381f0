use std::io::Write;

use super::scheme::JumpEvent;
use crate::error::Result;
use crate::shell::{inner_h, ShellState};

/// Rule for the running time integrals of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quadrature {
    #[default]
    Trapezoid,
    /// `dt * g(t_{k+1})`, the rule consistent with an implicit treatment of
    /// the viscous term; the trapezoid over-counts stiff shells that the
    /// step damps to zero.
    RightEndpoint,
}

impl Quadrature {
    fn panel(self, dt: f64, left: f64, right: f64) -> f64 {
        match self {
            Quadrature::Trapezoid => 0.5 * dt * (left + right),
            Quadrature::RightEndpoint => dt * right,
        }
    }

    /// Cumulative integral of `values` on `grid`, starting at 0.
    pub fn cumulative(self, grid: &[f64], values: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(values.len());
        let mut acc = 0.0;
        for k in 0..values.len() {
            if k > 0 {
                acc += self.panel(grid[k] - grid[k - 1], values[k - 1], values[k]);
            }
            out.push(acc);
        }
        out
    }
}

/// A discrete path: snapshots every `record_stride` steps plus per-step
/// scalar series on the full grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Snapshot times.
    pub times: Vec<f64>,
    pub states: Vec<ShellState>,
    /// Full grid `t_k`.
    pub grid: Vec<f64>,
    /// `|u(t_k)|^2`.
    pub energy: Vec<f64>,
    /// `||u(t_k)||^2`.
    pub enstrophy: Vec<f64>,
    /// `|u(t_k)|_{l4}^4`.
    pub l4_pow4: Vec<f64>,
    /// `int_0^{t_k} ||u||^2 ds` under [`Trajectory::quadrature`].
    pub dissipation: Vec<f64>,
    /// Trapezoid `int_0^{t_k} (f, u) ds`.
    pub forcing_work: Vec<f64>,
    pub jump_events: Vec<JumpEvent>,
    pub exit_level: Option<f64>,
    /// First grid time with `|u|^2 + int ||u||^2 > exit_level`.
    pub tau_exit: Option<f64>,
    pub stream_id: u64,
    pub quadrature: Quadrature,
    snapshot_steps: Vec<usize>,
}

impl Trajectory {
    pub(crate) fn start(
        u0: &ShellState,
        f0: &ShellState,
        exit_level: Option<f64>,
        stream_id: u64,
        quadrature: Quadrature,
    ) -> Self {
        let mut t = Self {
            times: vec![0.0],
            states: vec![u0.clone()],
            grid: vec![0.0],
            energy: vec![u0.h_norm_sq()],
            enstrophy: vec![u0.v_norm_sq()],
            l4_pow4: vec![u0.l4_pow4()],
            dissipation: vec![0.0],
            forcing_work: vec![0.0],
            jump_events: Vec::new(),
            exit_level,
            tau_exit: None,
            stream_id,
            quadrature,
            snapshot_steps: vec![0],
        };
        t.forcing_work[0] = 0.0;
        t.check_exit(0, f0);
        t
    }

    fn check_exit(&mut self, k: usize, _f: &ShellState) {
        if let (Some(level), None) = (self.exit_level, self.tau_exit) {
            if self.energy[k] + self.dissipation[k] > level {
                self.tau_exit = Some(self.grid[k]);
            }
        }
    }

    /// Appends grid point `t` with state `u`; `f_prev`/`u_prev` are the
    /// forcing and state at the previous grid point, `f` the forcing at `t`.
    pub(crate) fn push(
        &mut self,
        t: f64,
        u: &ShellState,
        u_prev: &ShellState,
        f_prev: &ShellState,
        f: &ShellState,
        snapshot: bool,
    ) {
        let k = self.grid.len();
        let dt = t - self.grid[k - 1];
        let ens = u.v_norm_sq();
        self.grid.push(t);
        self.energy.push(u.h_norm_sq());
        self.l4_pow4.push(u.l4_pow4());
        self.dissipation.push(self.dissipation[k - 1] + self.quadrature.panel(dt, self.enstrophy[k - 1], ens));
        self.enstrophy.push(ens);
        let work = |g: &ShellState, v: &ShellState| inner_h(g, v).unwrap_or(0.0);
        self.forcing_work.push(self.forcing_work[k - 1] + 0.5 * dt * (work(f_prev, u_prev) + work(f, u)));
        if snapshot {
            self.times.push(t);
            self.states.push(u.clone());
            self.snapshot_steps.push(k);
        }
        self.check_exit(k, f);
    }

    /// Running integral of a per-grid series with the path's rule.
    pub fn integrate(&self, values: &[f64]) -> Vec<f64> {
        self.quadrature.cumulative(&self.grid, values)
    }

    pub fn final_state(&self) -> &ShellState {
        self.states.last().expect("trajectory has an initial state")
    }

    pub fn final_time(&self) -> f64 {
        *self.grid.last().expect("trajectory has an initial time")
    }

    pub fn steps(&self) -> usize {
        self.grid.len() - 1
    }

    /// Grid indices of the snapshots.
    pub fn snapshot_steps(&self) -> &[usize] {
        &self.snapshot_steps
    }

    /// `sup_{s <= t_k} |u(s)|^2` on the grid.
    pub fn running_max_energy(&self) -> Vec<f64> {
        let mut m = f64::NEG_INFINITY;
        self.energy
            .iter()
            .map(|&e| {
                m = m.max(e);
                m
            })
            .collect()
    }

    /// First grid time at which `|u|^2 + int_0^t ||u||^2 ds` exceeds `level`.
    pub fn exit_time(&self, level: f64) -> Option<f64> {
        self.energy.iter().zip(&self.dissipation).position(|(e, d)| e + d > level).map(|k| self.grid[k])
    }

    /// Residual of the deterministic energy balance
    /// `|u(t)|^2 + 2 nu int ||u||^2 - |u(0)|^2 - 2 int (f, u)` on the grid.
    pub fn energy_balance_residual(&self, nu: f64) -> Vec<f64> {
        (0..self.grid.len())
            .map(|k| self.energy[k] + 2.0 * nu * self.dissipation[k] - self.energy[0] - 2.0 * self.forcing_work[k])
            .collect()
    }

    pub fn csv_header(shells: usize) -> String {
        let mut h = String::from("t");
        for n in 1..=shells {
            h.push_str(&format!(",re_u{n},im_u{n}"));
        }
        h.push_str(",energy_h2,dissipation");
        h
    }

    /// Snapshot CSV with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let shells = self.states[0].len();
        writeln!(w, "{}", Self::csv_header(shells))?;
        for (i, (t, s)) in self.times.iter().zip(&self.states).enumerate() {
            let k = self.snapshot_steps[i];
            write!(w, "{t:.16e}")?;
            for z in s.amplitudes() {
                write!(w, ",{:.16e},{:.16e}", z.re, z.im)?;
            }
            writeln!(w, ",{:.16e},{:.16e}", self.energy[k], self.dissipation[k])?;
        }
        Ok(())
    }

    pub fn write_jumps_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,mark,increment_norm")?;
        for e in &self.jump_events {
            writeln!(w, "{:.16e},{:.16e},{:.16e}", e.time, e.mark, e.increment_norm)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv is ascii")
    }
}

/// Two paths driven by the same noise realisation, plus `|u - v|^2` on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PairTrajectory {
    pub first: Trajectory,
    pub second: Trajectory,
    pub diff_energy: Vec<f64>,
}

impl PairTrajectory {
    /// `sup_k |u(t_k) - v(t_k)|`.
    pub fn sup_diff(&self) -> f64 {
        self.diff_energy.iter().fold(0.0f64, |m, &d| m.max(d)).sqrt()
    }
}
