use serde::Serialize;

use super::families::{lq_norm_sq, JumpFamily, JumpKind, QSpectrum, SigmaFamily};
use crate::error::{Error, Result};
use crate::shell::ShellState;

/// Noise amplitude, covariance, coefficient families and the hypothesis
/// constants `K` (linear growth) and `L` (Lipschitz) they satisfy.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseConfig {
    pub epsilon: f64,
    pub q: QSpectrum,
    pub sigma: SigmaFamily,
    pub jumps: JumpFamily,
    pub k_cert: f64,
    pub l_cert: f64,
}

/// Closed-form constants of the built-in families. `exact` is set when both
/// families are additive (or jumps are off), in which case `k` is attained at `u = 0` and `l = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormConstants {
    pub k: f64,
    pub l: f64,
    pub exact: bool,
}

impl NoiseConfig {
    /// Builds a config whose certified constants are the closed-form bounds.
    pub fn new(epsilon: f64, q: QSpectrum, sigma: SigmaFamily, jumps: JumpFamily, shells: usize) -> Result<Self> {
        let mut cfg = Self { epsilon, q, sigma, jumps, k_cert: 0.0, l_cert: 0.0 };
        cfg.validate_families()?;
        let c = cfg.closed_form_constants(shells)?;
        cfg.k_cert = c.k;
        cfg.l_cert = c.l;
        Ok(cfg)
    }

    /// No noise at all (`epsilon = 0`).
    pub fn silent(shells: usize) -> Self {
        Self {
            epsilon: 0.0,
            q: QSpectrum { q0: 1.0, alpha: 1.0 },
            sigma: SigmaFamily::zero(shells),
            jumps: JumpFamily::none(),
            k_cert: 0.0,
            l_cert: 0.0,
        }
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        Self { epsilon, ..self.clone() }
    }

    pub fn validate_families(&self) -> Result<()> {
        self.q.validate()?;
        self.sigma.validate()?;
        self.jumps.validate()?;
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(Error::Config(format!("epsilon must be >= 0, got {}", self.epsilon)));
        }
        Ok(())
    }

    /// Admissibility `epsilon < nu / (2 L)` (any epsilon when `L = 0`).
    pub fn check_admissible(&self, nu: f64) -> Result<()> {
        if self.l_cert > 0.0 && self.epsilon >= nu / (2.0 * self.l_cert) {
            return Err(Error::Config(format!(
                "epsilon = {} violates the local-monotonicity range epsilon < nu/(2L) = {} (nu = {nu}, L = {})",
                self.epsilon,
                nu / (2.0 * self.l_cert),
                self.l_cert
            )));
        }
        Ok(())
    }

    pub fn is_silent(&self) -> bool {
        self.epsilon == 0.0
    }

    pub fn closed_form_constants(&self, shells: usize) -> Result<ClosedFormConstants> {
        let q1 = self.q.max();
        let (ks, ls) = match &self.sigma {
            SigmaFamily::Additive { base } => {
                if base.len() < shells {
                    return Err(Error::Dimension(format!(
                        "additive sigma defines {} shells, model has {shells}",
                        base.len()
                    )));
                }
                let k: f64 = base[..shells].iter().zip(self.q.values(shells)).map(|(s, q)| q * s * s).sum();
                (k, 0.0)
            }
            SigmaFamily::LinearMult { gain } => (gain * gain * q1, gain * gain * q1),
            // sup_x x^2 / ((1+x)^2 (1+x^2)) = 1/8 at x = 1; u/(1+|u|) is 1-Lipschitz
            SigmaFamily::SaturatedMult { gain } => (gain * gain * q1 / 8.0, gain * gain * q1),
        };
        let m2 = self.jumps.rate * self.jumps.mark_law.second_moment();
        let (kg, lg) = match &self.jumps.kind {
            JumpKind::AdditiveMark { direction } => {
                if direction.len() < shells {
                    return Err(Error::Dimension(format!(
                        "jump direction defines {} shells, model has {shells}",
                        direction.len()
                    )));
                }
                (m2 * direction[..shells].iter().map(|z| z.norm_sqr()).sum::<f64>(), 0.0)
            }
            JumpKind::SaturatedMultMark => (m2 / 8.0, m2),
        };
        Ok(ClosedFormConstants {
            k: ks + kg,
            l: ls + lg,
            exact: self.sigma.is_additive() && (self.jumps.is_additive() || self.jumps.rate == 0.0),
        })
    }

    /// `|sigma(t,u)|^2_{L_Q} + int |g(u,z)|^2 lambda(dz)`.
    pub fn growth_functional(&self, t: f64, u: &ShellState) -> Result<f64> {
        let q = self.q.values(u.len());
        Ok(lq_norm_sq(&self.sigma.eval(t, u)?, &q)? + self.jumps.second_moment(u)?)
    }

    /// `|sigma(t,u) - sigma(t,v)|^2_{L_Q} + int |g(u,z) - g(v,z)|^2 lambda(dz)`.
    pub fn lipschitz_functional(&self, t: f64, u: &ShellState, v: &ShellState) -> Result<f64> {
        u.check_same_ladder(v)?;
        let q = self.q.values(u.len());
        let su = self.sigma.eval(t, u)?;
        let sv = self.sigma.eval(t, v)?;
        let d: Vec<_> = su.iter().zip(&sv).map(|(a, b)| a - b).collect();
        Ok(lq_norm_sq(&d, &q)? + self.jumps.second_moment_diff(u, v)?)
    }

    /// Human-readable label of the family choice.
    pub fn label(&self) -> String {
        format!(
            "sigma={}, jumps={} ({}, rate {})",
            self.sigma.name(),
            self.jumps.name(),
            self.jumps.mark_law.name(),
            self.jumps.rate
        )
    }
}
