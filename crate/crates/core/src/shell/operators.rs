//! The linear operator `A`, the bilinear coupling `B` and the drift
//! `F(u) = -nu A u - B(u, u)`.
//!
//! `B` is stored as a short list of triad terms
//! `B_n(u, v) = i * sum_j c_j k_{n+s_j} U_{n+a_j} V_{n+b_j}`, where `U`, `V`
//! are `u`, `v` or their conjugates. Out-of-range shells read as zero, so the
//! same table serves every truncation level.

use num_complex::Complex64;

use super::forcing::Forcing;
use super::state::{inner_unchecked, ShellState};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Goy,
    Sabra,
}

impl Variant {
    pub fn default_triad(self) -> Triad {
        match self {
            Variant::Goy => Triad { a: -1.0, b: 0.5, c: 0.5 },
            Variant::Sabra => Triad { a: 1.0, b: -0.5, c: -0.5 },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Goy => "goy",
            Variant::Sabra => "sabra",
        }
    }
}

/// Triad coefficients; energy conservation needs `a + b + c = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triad {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Triad {
    pub fn validate(&self) -> Result<()> {
        let scale = self.a.abs() + self.b.abs() + self.c.abs();
        if !(self.a.is_finite() && self.b.is_finite() && self.c.is_finite()) {
            return Err(Error::Config("triad coefficients must be finite".into()));
        }
        if (self.a + self.b + self.c).abs() > 4.0 * f64::EPSILON * scale {
            return Err(Error::Config(format!(
                "triad must satisfy a + b + c = 0, got a = {}, b = {}, c = {}",
                self.a, self.b, self.c
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct TriadTerm {
    coef: f64,
    k_shift: i64,
    u_off: i64,
    u_conj: bool,
    v_off: i64,
    v_conj: bool,
}

fn triad_terms(variant: Variant, t: Triad) -> Vec<TriadTerm> {
    let term = |coef, k_shift, u_off, u_conj, v_off, v_conj| TriadTerm { coef, k_shift, u_off, u_conj, v_off, v_conj };
    match variant {
        // i k_n ( b/2 u*_{n+1} v*_{n-1} + a/2 (u*_{n+1} v*_{n+2} + u*_{n+2} v*_{n+1}) + c/4 u*_{n-1} v*_{n-2} )
        Variant::Goy => vec![
            term(t.b / 2.0, 0, 1, true, -1, true),
            term(t.a / 2.0, 0, 1, true, 2, true),
            term(t.a / 2.0, 0, 2, true, 1, true),
            term(t.c / 4.0, 0, -1, true, -2, true),
        ],
        // i ( a k_{n+1} u*_{n+1} v_{n+2} + b k_n u*_{n-1} v_{n+1}
        //   + a k_{n-1} u_{n-1} v_{n-2} + b k_{n-1} u_{n-2} v_{n-1} )
        // the last two split -c k_{n-1} u_{n-1} u_{n-2} using a + b = -c
        Variant::Sabra => vec![
            term(t.a, 1, 1, true, 2, false),
            term(t.b, 0, -1, true, 1, false),
            term(t.a, -1, -1, false, -2, false),
            term(t.b, -1, -2, false, -1, false),
        ],
    }
}

/// Operator-norm constants derived term by term from the triad table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearBounds {
    /// `|B(u,v)| <= c1 ||u|| |v|`
    pub c1: f64,
    /// `|B(u,v)| <= c2 |u| ||v||`
    pub c2: f64,
    /// `||B(u,v)||_{V'} <= c3 |u| |v|`
    pub c3: f64,
    /// `||B(u,v)|| <= c4 |u| |A v|`
    pub c4: f64,
}

/// Viscosity, triad structure and forcing of a shell model.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    nu: f64,
    variant: Variant,
    triad: Triad,
    terms: Vec<TriadTerm>,
    forcing: Forcing,
}

impl Model {
    pub fn new(variant: Variant, nu: f64) -> Result<Self> {
        Self::with_triad(variant, nu, variant.default_triad())
    }

    pub fn goy(nu: f64) -> Result<Self> {
        Self::new(Variant::Goy, nu)
    }

    pub fn sabra(nu: f64) -> Result<Self> {
        Self::new(Variant::Sabra, nu)
    }

    pub fn with_triad(variant: Variant, nu: f64, triad: Triad) -> Result<Self> {
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::Config(format!("viscosity must be positive, got {nu}")));
        }
        triad.validate()?;
        Ok(Self { nu, variant, triad, terms: triad_terms(variant, triad), forcing: Forcing::Zero })
    }

    pub fn with_forcing(mut self, forcing: Forcing) -> Self {
        self.forcing = forcing;
        self
    }

    pub fn with_nu(&self, nu: f64) -> Result<Self> {
        Ok(Self::with_triad(self.variant, nu, self.triad)?.with_forcing(self.forcing.clone()))
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn triad(&self) -> Triad {
        self.triad
    }

    pub fn forcing(&self) -> &Forcing {
        &self.forcing
    }

    pub fn bilinear_bounds(&self) -> BilinearBounds {
        let mut b = BilinearBounds { c1: 0.0, c2: 0.0, c3: 0.0, c4: 0.0 };
        for t in &self.terms {
            let c = t.coef.abs();
            b.c1 += c * 2f64.powi((t.k_shift - t.u_off) as i32);
            b.c2 += c * 2f64.powi((t.k_shift - t.v_off) as i32);
            b.c3 += c * 2f64.powi(t.k_shift as i32);
            b.c4 += c * 2f64.powi((t.k_shift - 2 * t.v_off) as i32);
        }
        b
    }

    /// `B(u, v)`.
    pub fn apply_b(&self, u: &ShellState, v: &ShellState) -> Result<ShellState> {
        u.check_same_ladder(v)?;
        let mut out = ShellState::zeros(*u.ladder());
        self.apply_b_into(u, v, &mut out);
        Ok(out)
    }

    pub(crate) fn apply_b_into(&self, u: &ShellState, v: &ShellState, out: &mut ShellState) {
        let ladder = *u.ladder();
        let n_shells = ladder.shells() as i64;
        let amps = out.amplitudes_mut();
        for n in 1..=n_shells {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in &self.terms {
                let mut uu = u.get(n + t.u_off);
                let mut vv = v.get(n + t.v_off);
                if uu.norm_sqr() == 0.0 || vv.norm_sqr() == 0.0 {
                    continue;
                }
                if t.u_conj {
                    uu = uu.conj();
                }
                if t.v_conj {
                    vv = vv.conj();
                }
                acc += uu * vv * (t.coef * ladder.k(n + t.k_shift));
            }
            // multiply by i
            amps[n as usize - 1] = Complex64::new(-acc.im, acc.re);
        }
    }

    /// `F(u) = -nu A u - B(u, u)`.
    pub fn drift(&self, u: &ShellState) -> ShellState {
        let mut out = ShellState::zeros(*u.ladder());
        self.drift_into(u, &mut out);
        out
    }

    pub(crate) fn drift_into(&self, u: &ShellState, out: &mut ShellState) {
        self.apply_b_into(u, u, out);
        let ladder = *u.ladder();
        for (i, (o, z)) in out.amplitudes_mut().iter_mut().zip(u.amplitudes()).enumerate() {
            let k = ladder.k(i as i64 + 1);
            *o = -(*o) - z * (self.nu * k * k);
        }
    }

    /// `|B(u,u) - B(v,v) - B(v,w) - B(w,v) - B(w,w)|` with `w = u - v`.
    pub fn bilinear_decomposition_residual(&self, u: &ShellState, v: &ShellState) -> Result<f64> {
        u.check_same_ladder(v)?;
        let w = u - v;
        let r = &(&(&(&self.apply_b(u, u)? - &self.apply_b(v, v)?) - &self.apply_b(v, &w)?) - &self.apply_b(&w, v)?)
            - &self.apply_b(&w, &w)?;
        Ok(r.h_norm())
    }
}

/// `(A u)_n = k_n^2 u_n`.
pub fn apply_a(u: &ShellState) -> ShellState {
    let ladder = *u.ladder();
    let mut out = u.clone();
    for (i, z) in out.amplitudes_mut().iter_mut().enumerate() {
        let k = ladder.k(i as i64 + 1);
        *z *= k * k;
    }
    out
}

/// Orthogonal projection onto shells `1..=m`.
pub fn project(u: &ShellState, m: usize) -> Result<ShellState> {
    if m == 0 || m > u.len() {
        return Err(Error::Domain(format!("projection level {m} outside 1..={}", u.len())));
    }
    let mut out = u.clone();
    out.amplitudes_mut()[m..].iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
    Ok(out)
}

/// `Re (B(u, u), u)`, zero up to rounding whenever `a + b + c = 0`.
pub fn energy_transfer(model: &Model, u: &ShellState) -> f64 {
    let mut b = ShellState::zeros(*u.ladder());
    model.apply_b_into(u, u, &mut b);
    inner_unchecked(&b, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shell::state::{inner_h, WaveLadder};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ladder(k0: f64, n: usize) -> WaveLadder {
        WaveLadder::new(k0, n).unwrap()
    }

    /// Direct transcription of the GOY component formula, used as an
    /// independent check of the term table.
    fn goy_reference(u: &ShellState, v: &ShellState) -> Vec<Complex64> {
        let l = *u.ladder();
        (1..=l.shells() as i64)
            .map(|n| {
                let us = |m: i64| u.get(m).conj();
                let vs = |m: i64| v.get(m).conj();
                let bracket = us(n + 1) * vs(n - 1) * 0.25 - (us(n + 1) * vs(n + 2) + us(n + 2) * vs(n + 1)) * 0.5
                    + us(n - 1) * vs(n - 2) * 0.125;
                c(0.0, l.k(n)) * bracket
            })
            .collect()
    }

    #[test]
    fn apply_a_examples() {
        let l = ladder(1.0, 4);
        assert_eq!(apply_a(&ShellState::zeros(l)), ShellState::zeros(l));
        let au = apply_a(&ShellState::unit(l, 1).unwrap());
        assert_eq!(au.get(1), c(4.0, 0.0));
        assert_eq!(au.get(2), c(0.0, 0.0));
        let l = ladder(0.5, 4);
        let u = ShellState::unit(l, 2).unwrap().scale(c(0.0, 1.0));
        assert_eq!(apply_a(&u).get(2), c(0.0, 4.0));
    }

    #[test]
    fn apply_b_examples() {
        let l = ladder(1.0, 6);
        let m = Model::goy(1.0).unwrap();
        let v = ShellState::unit(l, 3).unwrap();
        assert_eq!(m.apply_b(&ShellState::zeros(l), &v).unwrap(), ShellState::zeros(l));
        let e2 = ShellState::unit(l, 2).unwrap();
        assert_eq!(m.apply_b(&e2, &e2).unwrap(), ShellState::zeros(l));

        let mut v = ShellState::unit(l, 1).unwrap();
        v.set(3, c(1.0, 0.0)).unwrap();
        let b = m.apply_b(&e2, &v).unwrap();
        assert_eq!(b.get(1), c(0.0, -1.0));
        assert_eq!(b.get(2), c(0.0, 0.0));
        assert_eq!(b.get(3), c(0.0, 1.0));
        for n in 4..=6 {
            assert_eq!(b.get(n), c(0.0, 0.0));
        }
        assert_eq!(inner_h(&b, &v).unwrap(), 0.0);
    }

    #[test]
    fn goy_table_matches_component_formula() {
        let l = ladder(0.7, 9);
        let m = Model::goy(1.0).unwrap();
        let mk = |seed: f64| {
            ShellState::from_amplitudes(
                l,
                (1..=9).map(|n| c((seed * n as f64).sin(), (seed + n as f64).cos())).collect(),
            )
            .unwrap()
        };
        let (u, v) = (mk(1.3), mk(2.9));
        let got = m.apply_b(&u, &v).unwrap();
        for (g, r) in got.amplitudes().iter().zip(goy_reference(&u, &v)) {
            assert!((g - r).norm() < 1e-12 * (1.0 + r.norm()));
        }
    }

    #[test]
    fn sabra_diagonal_matches_equation_of_motion() {
        let l = ladder(1.0, 8);
        let t = Triad { a: 1.0, b: -0.5, c: -0.5 };
        let m = Model::with_triad(Variant::Sabra, 1.0, t).unwrap();
        let u = ShellState::from_amplitudes(l, (1..=8).map(|n| c(1.0 / n as f64, (n as f64).sin())).collect()).unwrap();
        let b = m.apply_b(&u, &u).unwrap();
        for n in 1..=8i64 {
            let expect = c(0.0, 1.0)
                * (u.get(n + 2) * u.get(n + 1).conj() * (t.a * l.k(n + 1))
                    + u.get(n + 1) * u.get(n - 1).conj() * (t.b * l.k(n))
                    - u.get(n - 1) * u.get(n - 2) * (t.c * l.k(n - 1)));
            assert!((b.get(n) - expect).norm() < 1e-12 * (1.0 + expect.norm()));
        }
    }

    #[test]
    fn drift_examples() {
        let l = ladder(1.0, 5);
        let m = Model::goy(1.0).unwrap();
        assert_eq!(m.drift(&ShellState::zeros(l)), ShellState::zeros(l));
        let f = m.drift(&ShellState::unit(l, 1).unwrap());
        assert_eq!(f.get(1), c(-4.0, 0.0));
        assert_eq!(f.h_norm_sq(), 16.0);
    }

    #[test]
    fn projection() {
        let l = ladder(1.0, 6);
        let u = ShellState::from_amplitudes(l, (1..=6).map(|n| c(n as f64, 1.0)).collect()).unwrap();
        assert_eq!(project(&u, 6).unwrap(), u);
        assert_eq!(project(&ShellState::unit(l, 3).unwrap(), 2).unwrap(), ShellState::zeros(l));
        assert!(project(&u, 0).is_err());
        assert!(project(&u, 7).is_err());
        let p = project(&u, 3).unwrap();
        assert_eq!(project(&p, 3).unwrap(), p);
    }

    #[test]
    fn decomposition_residual_degenerate_cases() {
        let l = ladder(1.0, 8);
        let m = Model::goy(1.0).unwrap();
        let u = ShellState::from_amplitudes(l, (1..=8).map(|n| c(n as f64, -1.0)).collect()).unwrap();
        assert_eq!(m.bilinear_decomposition_residual(&u, &u).unwrap(), 0.0);
        assert_eq!(m.bilinear_decomposition_residual(&u, &ShellState::zeros(l)).unwrap(), 0.0);
    }

    #[test]
    fn triad_validation() {
        assert!(Model::with_triad(Variant::Goy, 1.0, Triad { a: 1.0, b: 1.0, c: 1.0 }).is_err());
        assert!(Model::goy(0.0).is_err());
        assert!(Model::goy(-1.0).is_err());
    }

    #[test]
    fn goy_bounds_from_table() {
        let b = Model::goy(1.0).unwrap().bilinear_bounds();
        assert_eq!(b.c1, 0.75);
        assert_eq!(b.c2, 1.375);
        assert_eq!(b.c3, 1.375);
    }
}
