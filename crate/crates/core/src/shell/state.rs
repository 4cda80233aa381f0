use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Smallest shell count for which every triad term of the nonlinearity can be nonzero.
pub const MIN_SHELLS: usize = 4;

/// Dyadic wave numbers `k_n = k0 * 2^n`, `n = 1..=N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveLadder {
    k0: f64,
    shells: usize,
}

impl WaveLadder {
    pub fn new(k0: f64, shells: usize) -> Result<Self> {
        if !(k0.is_finite() && k0 > 0.0) {
            return Err(Error::Domain(format!("k0 must be positive and finite, got {k0}")));
        }
        if shells < MIN_SHELLS {
            return Err(Error::Domain(format!("shell count must be at least {MIN_SHELLS}, got {shells}")));
        }
        if shells > 60 {
            return Err(Error::Domain(format!("shell count {shells} overflows the wave-number range")));
        }
        Ok(Self { k0, shells })
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn shells(&self) -> usize {
        self.shells
    }

    /// Wave number of 1-based shell `n`. Defined for any integer index so that
    /// triad coefficients can refer to virtual shells.
    pub fn k(&self, n: i64) -> f64 {
        self.k0 * 2f64.powi(n as i32)
    }

    pub fn k_max(&self) -> f64 {
        self.k(self.shells as i64)
    }

    pub fn wave_numbers(&self) -> Vec<f64> {
        (1..=self.shells as i64).map(|n| self.k(n)).collect()
    }

    /// Same base wave number with a different shell count.
    pub fn with_shells(&self, shells: usize) -> Result<Self> {
        Self::new(self.k0, shells)
    }
}

/// All norms of a shell state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    /// `|u|`, the H norm.
    pub h: f64,
    /// `||u||`, the V norm.
    pub v: f64,
    /// ell^4 norm.
    pub l4: f64,
}

/// Complex shell amplitudes `u_1..u_N`. Shells outside `1..=N` read as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellState {
    ladder: WaveLadder,
    amps: Vec<Complex64>,
}

impl ShellState {
    pub fn zeros(ladder: WaveLadder) -> Self {
        Self { ladder, amps: vec![Complex64::new(0.0, 0.0); ladder.shells()] }
    }

    pub fn from_amplitudes(ladder: WaveLadder, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != ladder.shells() {
            return Err(Error::Dimension(format!("expected {} amplitudes, got {}", ladder.shells(), amps.len())));
        }
        if let Some(n) = amps.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Domain(format!("non-finite amplitude at shell {}", n + 1)));
        }
        Ok(Self { ladder, amps })
    }

    /// Unit vector `e_n` (1-based).
    pub fn unit(ladder: WaveLadder, n: usize) -> Result<Self> {
        let mut s = Self::zeros(ladder);
        s.set(n, Complex64::new(1.0, 0.0))?;
        Ok(s)
    }

    pub fn ladder(&self) -> &WaveLadder {
        &self.ladder
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    /// Amplitude of 1-based shell `n`; zero for virtual shells.
    #[inline]
    pub fn get(&self, n: i64) -> Complex64 {
        if n >= 1 && (n as usize) <= self.amps.len() {
            self.amps[n as usize - 1]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn set(&mut self, n: usize, value: Complex64) -> Result<()> {
        if n == 0 || n > self.amps.len() {
            return Err(Error::Domain(format!("shell index {n} outside 1..={}", self.amps.len())));
        }
        self.amps[n - 1] = value;
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.amps.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn check_same_ladder(&self, other: &ShellState) -> Result<()> {
        if self.ladder != other.ladder {
            return Err(Error::Dimension(format!(
                "ladder mismatch: (k0 = {}, N = {}) vs (k0 = {}, N = {})",
                self.ladder.k0(),
                self.ladder.shells(),
                other.ladder.k0(),
                other.ladder.shells()
            )));
        }
        Ok(())
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        Self { ladder: self.ladder, amps: self.amps.iter().map(|z| z * alpha).collect() }
    }

    pub fn scale_real(&self, alpha: f64) -> Self {
        self.scale(Complex64::new(alpha, 0.0))
    }

    /// `self + alpha * other` (ladders must match).
    pub fn axpy(&self, alpha: f64, other: &ShellState) -> Result<Self> {
        self.check_same_ladder(other)?;
        Ok(Self { ladder: self.ladder, amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b * alpha).collect() })
    }

    /// Zero-padded or truncated copy on another ladder with the same `k0`.
    pub fn resize(&self, shells: usize) -> Result<Self> {
        let ladder = self.ladder.with_shells(shells)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); shells];
        let m = shells.min(self.amps.len());
        amps[..m].copy_from_slice(&self.amps[..m]);
        Ok(Self { ladder, amps })
    }

    pub fn h_norm_sq(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn h_norm(&self) -> f64 {
        self.h_norm_sq().sqrt()
    }

    pub fn v_norm_sq(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(i, z)| {
                let k = self.ladder.k(i as i64 + 1);
                k * k * z.norm_sqr()
            })
            .sum()
    }

    pub fn v_norm(&self) -> f64 {
        self.v_norm_sq().sqrt()
    }

    /// `sum |u_n|^4`.
    pub fn l4_pow4(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr() * z.norm_sqr()).sum()
    }

    pub fn l4_norm(&self) -> f64 {
        self.l4_pow4().powf(0.25)
    }

    /// Dual norm `(sum k_n^-2 |u_n|^2)^(1/2)`.
    pub fn v_dual_norm(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(i, z)| z.norm_sqr() / self.ladder.k(i as i64 + 1).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// `||A^{s/2} u||_p = (sum (k_n^s |u_n|)^p)^(1/p)`.
    pub fn wsp_norm(&self, s: f64, p: f64) -> f64 {
        if s == 0.0 && p == 2.0 {
            return self.h_norm();
        }
        if s == 1.0 && p == 2.0 {
            return self.v_norm();
        }
        self.amps
            .iter()
            .enumerate()
            .map(|(i, z)| (self.ladder.k(i as i64 + 1).powf(s) * z.norm()).powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }

    /// `sup_n k_n^s |u_n|`.
    pub fn ws_inf_norm(&self, s: f64) -> f64 {
        self.amps.iter().enumerate().map(|(i, z)| self.ladder.k(i as i64 + 1).powf(s) * z.norm()).fold(0.0, f64::max)
    }

    pub fn norms(&self) -> Norms {
        Norms { h: self.h_norm(), v: self.v_norm(), l4: self.l4_norm() }
    }
}

/// `(u, v)_H = Re sum u_n conj(v_n)`.
pub fn inner_h(u: &ShellState, v: &ShellState) -> Result<f64> {
    u.check_same_ladder(v)?;
    Ok(inner_unchecked(u, v))
}

#[inline]
pub(crate) fn inner_unchecked(u: &ShellState, v: &ShellState) -> f64 {
    u.amps.iter().zip(&v.amps).map(|(a, b)| a.re * b.re + a.im * b.im).sum()
}

/// Ladder-checked arithmetic for the operator code. Panics on mismatch, so
/// callers validate ladders first.
impl Add for &ShellState {
    type Output = ShellState;
    fn add(self, rhs: &ShellState) -> ShellState {
        assert_eq!(self.ladder, rhs.ladder, "ladder mismatch in addition");
        ShellState { ladder: self.ladder, amps: self.amps.iter().zip(&rhs.amps).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &ShellState {
    type Output = ShellState;
    fn sub(self, rhs: &ShellState) -> ShellState {
        assert_eq!(self.ladder, rhs.ladder, "ladder mismatch in subtraction");
        ShellState { ladder: self.ladder, amps: self.amps.iter().zip(&rhs.amps).map(|(a, b)| a - b).collect() }
    }
}

impl Mul<f64> for &ShellState {
    type Output = ShellState;
    fn mul(self, rhs: f64) -> ShellState {
        self.scale_real(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ladder_is_dyadic() {
        let l = WaveLadder::new(0.5, 6).unwrap();
        let k = l.wave_numbers();
        assert_eq!(k[0], 1.0);
        for w in k.windows(2) {
            assert_eq!(w[1] / w[0], 2.0);
        }
        assert!(WaveLadder::new(1.0, 3).is_err());
        assert!(WaveLadder::new(0.0, 8).is_err());
        assert!(WaveLadder::new(-1.0, 8).is_err());
    }

    #[test]
    fn virtual_shells_read_zero() {
        let l = WaveLadder::new(1.0, 4).unwrap();
        let u = ShellState::from_amplitudes(l, vec![c(1.0, 1.0); 4]).unwrap();
        assert_eq!(u.get(0), c(0.0, 0.0));
        assert_eq!(u.get(-1), c(0.0, 0.0));
        assert_eq!(u.get(5), c(0.0, 0.0));
        assert_eq!(u.get(4), c(1.0, 1.0));
    }

    #[test]
    fn rejects_non_finite() {
        let l = WaveLadder::new(1.0, 4).unwrap();
        let mut amps = vec![c(0.0, 0.0); 4];
        amps[2] = c(f64::NAN, 0.0);
        assert!(ShellState::from_amplitudes(l, amps).is_err());
    }

    #[test]
    fn inner_product_examples() {
        let l = WaveLadder::new(1.0, 4).unwrap();
        let e1 = ShellState::unit(l, 1).unwrap();
        assert_eq!(inner_h(&e1, &e1).unwrap(), 1.0);
        let ie1 = e1.scale(c(0.0, 1.0));
        assert_eq!(inner_h(&e1, &ie1).unwrap(), 0.0);
        let u = ShellState::from_amplitudes(l, vec![c(1.0, 1.0), c(0., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        let v = ShellState::from_amplitudes(l, vec![c(2.0, 0.0), c(0., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        assert_eq!(inner_h(&u, &v).unwrap(), 2.0);
        let other = ShellState::zeros(WaveLadder::new(1.0, 5).unwrap());
        assert!(matches!(inner_h(&u, &other), Err(Error::Dimension(_))));
    }

    #[test]
    fn norm_examples() {
        let l = WaveLadder::new(1.0, 4).unwrap();
        let z = ShellState::zeros(l);
        let n = z.norms();
        assert_eq!((n.h, n.v, n.l4), (0.0, 0.0, 0.0));
        assert_eq!(z.wsp_norm(1.5, 3.0), 0.0);

        let mut u = ShellState::unit(l, 1).unwrap();
        u.set(2, c(1.0, 0.0)).unwrap();
        assert_eq!(u.h_norm_sq(), 2.0);
        assert_eq!(u.v_norm_sq(), 20.0);
        assert_eq!(u.l4_pow4(), 2.0);
        assert_eq!(u.wsp_norm(1.0, 2.0), u.v_norm());
        assert_eq!(u.wsp_norm(0.0, 2.0), u.h_norm());
        // generic path agrees with the specialised one
        let generic: f64 = (4.0f64 + 16.0).sqrt();
        assert!((u.wsp_norm(1.0, 2.000_000_000_000_1) - generic).abs() < 1e-9);
        assert_eq!(u.ws_inf_norm(1.0), 4.0);
    }

    #[test]
    fn resize_pads_and_truncates() {
        let l = WaveLadder::new(1.0, 6).unwrap();
        let u = ShellState::from_amplitudes(l, (1..=6).map(|n| c(n as f64, 0.0)).collect()).unwrap();
        let small = u.resize(4).unwrap();
        assert_eq!(small.len(), 4);
        assert_eq!(small.get(4), c(4.0, 0.0));
        let big = small.resize(8).unwrap();
        assert_eq!(big.get(5), c(0.0, 0.0));
        assert_eq!(big.get(3), c(3.0, 0.0));
    }
}
