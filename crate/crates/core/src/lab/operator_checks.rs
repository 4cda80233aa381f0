use rayon::prelude::*;

use super::report::{CheckReport, Verdict};
use crate::noise::{log_uniform, random_state, with_h_norm, RngStream, SAMPLER_SLOPES};
use crate::shell::{apply_a, energy_transfer, inner_h, Model, ShellState, Variant, WaveLadder};

/// Tolerance of the conservation identity, relative to `k_N |u|^3`.
pub const CONSERVATION_TOL: f64 = 1e-12;

fn draw(ladder: WaveLadder, rng: &mut RngStream, i: usize) -> ShellState {
    let radius = log_uniform(rng, -2.0, 2.0);
    with_h_norm(&random_state(ladder, SAMPLER_SLOPES[i % SAMPLER_SLOPES.len()], rng), radius)
}

fn par_max<F>(n: usize, seed: u64, f: F) -> Vec<f64>
where
    F: Fn(&mut RngStream, usize) -> f64 + Sync,
{
    (0..n).into_par_iter().map(|i| f(&mut RngStream::new(seed, i as u64), i)).collect()
}

/// `|Re (B(u,u), u)| <= 1e-12 k_N |u|^3` on random states.
pub fn conservation_check(model: &Model, ladder: WaveLadder, n_samples: usize, seed: u64) -> CheckReport {
    let kn = ladder.k_max();
    let ratios = par_max(n_samples, seed, |rng, i| {
        let u = draw(ladder, rng, i);
        let scale = kn * u.h_norm().powi(3);
        if scale == 0.0 {
            0.0
        } else {
            energy_transfer(model, &u).abs() / scale
        }
    });
    let max = ratios.iter().cloned().fold(0.0, f64::max);
    let bad = ratios.iter().filter(|&&r| r > CONSERVATION_TOL).count();
    CheckReport::new("conservation", max, CONSERVATION_TOL, 0.0, n_samples, Verdict::from_pass(bad == 0))
        .param("shells", ladder.shells())
        .param("variant", model.variant().name())
        .param("violations", bad)
        .param("lhs_is", "max |Re(B(u,u),u)| / (k_N |u|^3)")
}

/// Whether `(B(u,v),v) = 0` is an identity for this triad: always for Sabra
/// with `a + b + c = 0`, and for GOY only when `b = c = -a/2`.
pub fn orthogonality_is_exact(model: &Model) -> bool {
    let t = model.triad();
    match model.variant() {
        Variant::Sabra => true,
        Variant::Goy => {
            let tol = 1e-12 * (t.a.abs() + t.b.abs() + t.c.abs());
            (t.b + 0.5 * t.a).abs() <= tol && (t.c + 0.5 * t.a).abs() <= tol
        }
    }
}

/// `(B(u, v), v) = 0` for independent random `u, v`.
pub fn orthogonality_check(model: &Model, ladder: WaveLadder, n_samples: usize, seed: u64) -> CheckReport {
    let kn = ladder.k_max();
    let ratios = par_max(n_samples, seed, |rng, i| {
        let u = draw(ladder, rng, i);
        let v = draw(ladder, rng, i + 1);
        let b = model.apply_b(&u, &v).expect("same ladder");
        let scale = kn * u.h_norm() * v.h_norm_sq();
        if scale == 0.0 {
            0.0
        } else {
            inner_h(&b, &v).expect("same ladder").abs() / scale
        }
    });
    let max = ratios.iter().cloned().fold(0.0, f64::max);
    let bad = ratios.iter().filter(|&&r| r > CONSERVATION_TOL).count();
    let verdict = if orthogonality_is_exact(model) { Verdict::from_pass(bad == 0) } else { Verdict::ReportOnly };
    CheckReport::new("orthogonality", max, CONSERVATION_TOL, 0.0, n_samples, verdict)
        .param("variant", model.variant().name())
        .param("triad", vec![model.triad().a, model.triad().b, model.triad().c])
        .param("violations", bad)
}

/// `|u|_{l4}^4 <= k_1^{-2} |u|^2 ||u||^2`, zero violations.
pub fn l4_interpolation_check(ladder: WaveLadder, n_samples: usize, seed: u64) -> CheckReport {
    let k1 = ladder.k(1);
    let ratios = par_max(n_samples, seed, |rng, i| {
        let u = draw(ladder, rng, i);
        let rhs = u.h_norm_sq() * u.v_norm_sq() / (k1 * k1);
        if rhs == 0.0 {
            0.0
        } else {
            u.l4_pow4() / rhs
        }
    });
    let max = ratios.iter().cloned().fold(0.0, f64::max);
    let bad = ratios.iter().filter(|&&r| r > 1.0).count();
    CheckReport::new("l4_interpolation", max, 1.0, 0.0, n_samples, Verdict::from_pass(bad == 0))
        .param("k1", k1)
        .param("violations", bad)
        .param("lhs_is", "max |u|_l4^4 k_1^2 / (|u|^2 ||u||^2)")
}

/// Sampled suprema of the four bilinear ratios against the constants
/// computed from the triad table.
pub fn bilinear_bound_checks(model: &Model, ladder: WaveLadder, n_samples: usize, seed: u64) -> Vec<CheckReport> {
    let c = model.bilinear_bounds();
    let rows: Vec<[f64; 4]> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(seed, i as u64);
            let u = draw(ladder, &mut rng, i);
            let v = draw(ladder, &mut rng, i + 1);
            let b = model.apply_b(&u, &v).expect("same ladder");
            let safe = |num: f64, den: f64| if den > 0.0 { num / den } else { 0.0 };
            [
                safe(b.h_norm(), u.v_norm() * v.h_norm()),
                safe(b.h_norm(), u.h_norm() * v.v_norm()),
                safe(b.v_dual_norm(), u.h_norm() * v.h_norm()),
                safe(b.v_norm(), u.h_norm() * apply_a(&v).h_norm()),
            ]
        })
        .collect();
    let names = ["bilinear_V_H", "bilinear_H_V", "bilinear_dual", "bilinear_DA"];
    let consts = [c.c1, c.c2, c.c3, c.c4];
    (0..4)
        .map(|j| {
            let max = rows.iter().map(|r| r[j]).fold(0.0, f64::max);
            let bad = rows.iter().filter(|r| r[j] > consts[j] * (1.0 + 1e-12)).count();
            CheckReport::new(names[j], max, consts[j], 0.0, n_samples, Verdict::from_pass(bad == 0))
                .param("variant", model.variant().name())
                .param("violations", bad)
        })
        .collect()
}
