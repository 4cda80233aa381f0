use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::shell::{ShellState, WaveLadder};

/// Diagonal covariance `q_n = q0 * 2^(-alpha n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QSpectrum {
    pub q0: f64,
    pub alpha: f64,
}

impl QSpectrum {
    pub fn new(q0: f64, alpha: f64) -> Result<Self> {
        let q = Self { q0, alpha };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q0.is_finite() && self.q0 > 0.0) {
            return Err(Error::Config(format!("q0 must be positive, got {}", self.q0)));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::Config(format!("alpha must be positive, got {}", self.alpha)));
        }
        Ok(())
    }

    pub fn eigenvalue(&self, n: usize) -> f64 {
        self.q0 * 2f64.powf(-self.alpha * n as f64)
    }

    pub fn values(&self, shells: usize) -> Vec<f64> {
        (1..=shells).map(|n| self.eigenvalue(n)).collect()
    }

    /// Truncated trace `sum_{n<=N} q_n`.
    pub fn trace(&self, shells: usize) -> f64 {
        self.values(shells).iter().sum()
    }

    /// Largest eigenvalue (shell 1, since the spectrum decays).
    pub fn max(&self) -> f64 {
        self.eigenvalue(1)
    }
}

/// `sum_n q_n |sigma_n|^2`, the squared `L_Q` norm of a diagonal coefficient.
pub fn lq_norm_sq(sigma: &[Complex64], q: &[f64]) -> Result<f64> {
    if sigma.len() != q.len() {
        return Err(Error::Dimension(format!("sigma has {} entries but Q has {}", sigma.len(), q.len())));
    }
    Ok(sigma.iter().zip(q).map(|(s, qn)| qn * s.norm_sqr()).sum())
}

#[derive(Debug, Clone, PartialEq)]
pub enum SigmaFamily {
    /// `sigma_n = s_n`.
    Additive { base: Vec<f64> },
    /// `sigma_n = c u_n`.
    LinearMult { gain: f64 },
    /// `sigma_n = c u_n / (1 + |u|)`.
    SaturatedMult { gain: f64 },
}

impl SigmaFamily {
    pub fn additive_uniform(level: f64, shells: usize) -> Self {
        SigmaFamily::Additive { base: vec![level; shells] }
    }

    pub fn zero(shells: usize) -> Self {
        Self::additive_uniform(0.0, shells)
    }

    pub fn name(&self) -> &'static str {
        match self {
            SigmaFamily::Additive { .. } => "additive",
            SigmaFamily::LinearMult { .. } => "linear_mult",
            SigmaFamily::SaturatedMult { .. } => "saturated_mult",
        }
    }

    pub fn is_additive(&self) -> bool {
        matches!(self, SigmaFamily::Additive { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SigmaFamily::Additive { base } => {
                if base.iter().any(|s| !s.is_finite()) {
                    return Err(Error::Config("additive sigma base must be finite".into()));
                }
            }
            SigmaFamily::LinearMult { gain } | SigmaFamily::SaturatedMult { gain } => {
                if !gain.is_finite() {
                    return Err(Error::Config("sigma gain must be finite".into()));
                }
            }
        }
        Ok(())
    }

    /// Diagonal coefficient `sigma(t, u)`; the built-in families are autonomous.
    pub fn eval(&self, _t: f64, u: &ShellState) -> Result<Vec<Complex64>> {
        let n = u.len();
        Ok(match self {
            SigmaFamily::Additive { base } => {
                if base.len() < n {
                    return Err(Error::Dimension(format!(
                        "additive sigma defines {} shells, state has {n}",
                        base.len()
                    )));
                }
                base[..n].iter().map(|&s| Complex64::new(s, 0.0)).collect()
            }
            SigmaFamily::LinearMult { gain } => u.amplitudes().iter().map(|z| z * gain).collect(),
            SigmaFamily::SaturatedMult { gain } => {
                let f = gain / (1.0 + u.h_norm());
                u.amplitudes().iter().map(|z| z * f).collect()
            }
        })
    }
}

/// Law of the jump marks `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MarkLaw {
    Gaussian { std: f64 },
    Dirac { z0: f64 },
    Uniform { lo: f64, hi: f64 },
}

impl MarkLaw {
    pub fn name(&self) -> &'static str {
        match self {
            MarkLaw::Gaussian { .. } => "gaussian",
            MarkLaw::Dirac { .. } => "dirac",
            MarkLaw::Uniform { .. } => "uniform",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            MarkLaw::Gaussian { std } if !(std.is_finite() && std >= 0.0) => {
                Err(Error::Config(format!("gaussian mark std must be >= 0, got {std}")))
            }
            MarkLaw::Dirac { z0 } if !z0.is_finite() => Err(Error::Config("dirac mark must be finite".into())),
            MarkLaw::Uniform { lo, hi } if !(lo.is_finite() && hi.is_finite() && lo < hi) => {
                Err(Error::Config(format!("uniform marks need lo < hi, got ({lo}, {hi})")))
            }
            _ => Ok(()),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            MarkLaw::Gaussian { .. } => 0.0,
            MarkLaw::Dirac { z0 } => z0,
            MarkLaw::Uniform { lo, hi } => 0.5 * (lo + hi),
        }
    }

    pub fn second_moment(&self) -> f64 {
        match *self {
            MarkLaw::Gaussian { std } => std * std,
            MarkLaw::Dirac { z0 } => z0 * z0,
            MarkLaw::Uniform { lo, hi } => (lo * lo + lo * hi + hi * hi) / 3.0,
        }
    }

    /// `E|z|`.
    pub fn abs_mean(&self) -> f64 {
        match *self {
            MarkLaw::Gaussian { std } => std * (2.0 / std::f64::consts::PI).sqrt(),
            MarkLaw::Dirac { z0 } => z0.abs(),
            MarkLaw::Uniform { lo, hi } => {
                if lo >= 0.0 {
                    0.5 * (lo + hi)
                } else if hi <= 0.0 {
                    -0.5 * (lo + hi)
                } else {
                    (lo * lo + hi * hi) / (2.0 * (hi - lo))
                }
            }
        }
    }

    /// Transforms two open-interval uniforms into a mark.
    pub fn sample(&self, u1: f64, u2: f64) -> f64 {
        match *self {
            MarkLaw::Gaussian { std } => std * (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos(),
            MarkLaw::Dirac { z0 } => z0,
            MarkLaw::Uniform { lo, hi } => lo + (hi - lo) * u1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum JumpKind {
    /// `g(u, z) = z * gamma`.
    AdditiveMark { direction: Vec<Complex64> },
    /// `g(u, z) = z * u / (1 + |u|)`.
    SaturatedMultMark,
}

/// Compound-Poisson jump noise with total intensity `rate`.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpFamily {
    pub kind: JumpKind,
    pub mark_law: MarkLaw,
    pub rate: f64,
}

impl JumpFamily {
    pub fn none() -> Self {
        Self { kind: JumpKind::SaturatedMultMark, mark_law: MarkLaw::Dirac { z0: 0.0 }, rate: 0.0 }
    }

    /// Additive jumps along `amplitude * e_shell`.
    pub fn additive_on_shell(
        shells: usize,
        shell: usize,
        amplitude: f64,
        mark_law: MarkLaw,
        rate: f64,
    ) -> Result<Self> {
        if shell == 0 || shell > shells {
            return Err(Error::Config(format!("jump shell {shell} outside 1..={shells}")));
        }
        let mut direction = vec![Complex64::new(0.0, 0.0); shells];
        direction[shell - 1] = Complex64::new(amplitude, 0.0);
        Ok(Self { kind: JumpKind::AdditiveMark { direction }, mark_law, rate })
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            JumpKind::AdditiveMark { .. } => "additive_mark",
            JumpKind::SaturatedMultMark => "saturated_mult_mark",
        }
    }

    pub fn is_additive(&self) -> bool {
        matches!(self.kind, JumpKind::AdditiveMark { .. })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rate.is_finite() && self.rate >= 0.0) {
            return Err(Error::Config(format!("jump rate must be finite and >= 0, got {}", self.rate)));
        }
        if let JumpKind::AdditiveMark { direction } = &self.kind {
            if direction.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::Config("jump direction must be finite".into()));
            }
        }
        self.mark_law.validate()
    }

    fn direction_for(&self, ladder: WaveLadder) -> Result<ShellState> {
        match &self.kind {
            JumpKind::AdditiveMark { direction } => {
                let n = ladder.shells();
                if direction.len() < n {
                    return Err(Error::Dimension(format!(
                        "jump direction defines {} shells, state has {n}",
                        direction.len()
                    )));
                }
                ShellState::from_amplitudes(ladder, direction[..n].to_vec())
            }
            JumpKind::SaturatedMultMark => unreachable!("multiplicative jumps have no fixed direction"),
        }
    }

    /// `g(u, z)`.
    pub fn g_eval(&self, u: &ShellState, z: f64) -> Result<ShellState> {
        Ok(match &self.kind {
            JumpKind::AdditiveMark { .. } => self.direction_for(*u.ladder())?.scale_real(z),
            JumpKind::SaturatedMultMark => u.scale_real(z / (1.0 + u.h_norm())),
        })
    }

    /// `int_Z g(u, z) lambda(dz) = rate * E[z] * g(u, 1)`.
    pub fn compensator(&self, u: &ShellState) -> Result<ShellState> {
        self.g_eval(u, self.rate * self.mark_law.mean())
    }

    /// `int_Z |g(u, z)|^2 lambda(dz)`.
    pub fn second_moment(&self, u: &ShellState) -> Result<f64> {
        Ok(self.rate * self.mark_law.second_moment() * self.g_eval(u, 1.0)?.h_norm_sq())
    }

    /// `int_Z |g(u, z) - g(v, z)|^2 lambda(dz)`.
    pub fn second_moment_diff(&self, u: &ShellState, v: &ShellState) -> Result<f64> {
        let d = &self.g_eval(u, 1.0)? - &self.g_eval(v, 1.0)?;
        Ok(self.rate * self.mark_law.second_moment() * d.h_norm_sq())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(n: usize) -> WaveLadder {
        WaveLadder::new(1.0, n).unwrap()
    }

    #[test]
    fn sigma_examples() {
        let ladder = l(4);
        let add = SigmaFamily::additive_uniform(1.0, 4);
        let a = add.eval(0.0, &ShellState::zeros(ladder)).unwrap();
        let b = add.eval(3.0, &ShellState::unit(ladder, 2).unwrap()).unwrap();
        assert_eq!(a, b);

        let lin = SigmaFamily::LinearMult { gain: 2.0 };
        let s = lin.eval(0.0, &ShellState::unit(ladder, 1).unwrap()).unwrap();
        assert_eq!(s[0], Complex64::new(2.0, 0.0));
        assert!(s[1..].iter().all(|z| z.norm() == 0.0));

        let sat = SigmaFamily::SaturatedMult { gain: 1.0 };
        let s = sat.eval(0.0, &ShellState::unit(ladder, 1).unwrap().scale_real(3.0)).unwrap();
        assert_eq!(s[0], Complex64::new(0.75, 0.0));
        assert_eq!(s.len(), 4);

        let short = SigmaFamily::additive_uniform(1.0, 3);
        assert!(short.eval(0.0, &ShellState::zeros(ladder)).is_err());
    }

    #[test]
    fn lq_norm_examples() {
        let q = QSpectrum::new(1.0, 1.0).unwrap();
        assert_eq!(lq_norm_sq(&[Complex64::new(0.0, 0.0); 10], &q.values(10)).unwrap(), 0.0);
        let ones = vec![Complex64::new(1.0, 0.0); 10];
        let got = lq_norm_sq(&ones, &q.values(10)).unwrap();
        assert!((got - (1.0 - 2f64.powi(-10))).abs() < 1e-15);
        let mut e1 = vec![Complex64::new(0.0, 0.0); 10];
        e1[0] = Complex64::new(1.0, 0.0);
        assert_eq!(lq_norm_sq(&e1, &q.values(10)).unwrap(), 0.5);
        assert!(lq_norm_sq(&e1, &q.values(9)).is_err());
    }

    #[test]
    fn spectrum_validation() {
        assert!(QSpectrum::new(0.0, 1.0).is_err());
        assert!(QSpectrum::new(1.0, 0.0).is_err());
        assert!(QSpectrum::new(1.0, 1.0).unwrap().values(6).iter().all(|&q| q > 0.0));
    }

    #[test]
    fn g_examples() {
        let ladder = l(4);
        let fam = JumpFamily::additive_on_shell(4, 1, 1.0, MarkLaw::Dirac { z0: 1.0 }, 1.0).unwrap();
        let u = ShellState::unit(ladder, 3).unwrap();
        assert_eq!(fam.g_eval(&u, 0.0).unwrap(), ShellState::zeros(ladder));
        let g = fam.g_eval(&u, 2.5).unwrap();
        assert_eq!(g, ShellState::unit(ladder, 1).unwrap().scale_real(2.5));

        let sat = JumpFamily { kind: JumpKind::SaturatedMultMark, mark_law: MarkLaw::Dirac { z0: 1.0 }, rate: 1.0 };
        let g = sat.g_eval(&ShellState::unit(ladder, 1).unwrap(), 1.0).unwrap();
        assert_eq!(g, ShellState::unit(ladder, 1).unwrap().scale_real(0.5));
        let big = ShellState::unit(ladder, 2).unwrap().scale_real(1e6);
        assert!(sat.g_eval(&big, -3.0).unwrap().h_norm() <= 3.0);
    }

    #[test]
    fn compensator_examples() {
        let ladder = l(4);
        let u = ShellState::unit(ladder, 2).unwrap().scale_real(2.0);
        for kind in
            [JumpKind::AdditiveMark { direction: vec![Complex64::new(1.0, 0.0); 4] }, JumpKind::SaturatedMultMark]
        {
            let fam = JumpFamily { kind, mark_law: MarkLaw::Gaussian { std: 1.0 }, rate: 3.0 };
            assert_eq!(fam.compensator(&u).unwrap().h_norm(), 0.0);
        }
        let fam = JumpFamily::additive_on_shell(4, 1, 1.0, MarkLaw::Dirac { z0: 1.0 }, 2.0).unwrap();
        assert_eq!(fam.compensator(&u).unwrap(), ShellState::unit(ladder, 1).unwrap().scale_real(2.0));
        let fam = JumpFamily::additive_on_shell(4, 2, 1.0, MarkLaw::Uniform { lo: 0.0, hi: 1.0 }, 4.0).unwrap();
        assert_eq!(fam.compensator(&u).unwrap(), ShellState::unit(ladder, 2).unwrap().scale_real(2.0));
    }

    #[test]
    fn mark_moments() {
        let u = MarkLaw::Uniform { lo: -1.0, hi: 3.0 };
        assert_eq!(u.mean(), 1.0);
        assert!((u.second_moment() - 7.0 / 3.0).abs() < 1e-15);
        assert!((u.abs_mean() - 10.0 / 8.0).abs() < 1e-15);
        assert!(MarkLaw::Uniform { lo: 1.0, hi: 1.0 }.validate().is_err());
        assert!(MarkLaw::Gaussian { std: -1.0 }.validate().is_err());
    }
}
