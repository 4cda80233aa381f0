use rayon::prelude::*;
use serde_json::json;

use super::report::{CheckReport, Verdict};
use crate::error::Result;
use crate::noise::{log_uniform, random_state, with_h_norm, with_l4_norm, NoiseConfig, RngStream, SAMPLER_SLOPES};
use crate::shell::{inner_h, Model, ShellState, WaveLadder};

/// Relative round-off allowance for the algebraic margin.
pub const MARGIN_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicitySample {
    pub u: ShellState,
    pub v: ShellState,
    pub w: ShellState,
    /// `(F(u) - F(v), w)`.
    pub lhs_drift: f64,
    /// `(F(u) - F(v), w) + (nu/2)||w||^2 - (r^4/nu^3)|w|^2`.
    pub margin2: f64,
    /// `(F(u) - F(v), w) - (r^4/nu^3)|w|^2 + eps [noise difference terms]`.
    pub margin_full: f64,
    /// Sum of the absolute values of the terms of `margin2`.
    pub scale: f64,
}

pub fn monotonicity_sample(
    model: &Model,
    noise: &NoiseConfig,
    r: f64,
    u: &ShellState,
    v: &ShellState,
) -> Result<MonotonicitySample> {
    let w = u - v;
    let nu = model.nu();
    let lhs_drift = inner_h(&(&model.drift(u) - &model.drift(v)), &w)?;
    let visc = 0.5 * nu * w.v_norm_sq();
    let ball = r.powi(4) / nu.powi(3) * w.h_norm_sq();
    let noise_term = noise.epsilon * noise.lipschitz_functional(0.0, u, v)?;
    Ok(MonotonicitySample {
        lhs_drift,
        margin2: lhs_drift + visc - ball,
        margin_full: lhs_drift - ball + noise_term,
        scale: lhs_drift.abs() + visc + ball,
        u: u.clone(),
        v: v.clone(),
        w,
    })
}

/// `u` with log-uniform H norm in `[1e-2, 1e2]`, `v` rescaled to an ell^4
/// norm `r U^{1/4}` inside the ball.
pub fn sample_pair(ladder: WaveLadder, r: f64, rng: &mut RngStream, i: usize) -> (ShellState, ShellState) {
    let beta_u = SAMPLER_SLOPES[i % SAMPLER_SLOPES.len()];
    let beta_v = SAMPLER_SLOPES[(i / SAMPLER_SLOPES.len()) % SAMPLER_SLOPES.len()];
    let radius = log_uniform(rng, -2.0, 2.0);
    let u = with_h_norm(&random_state(ladder, beta_u, rng), radius);
    let v_radius = r * rng.next_uniform().powf(0.25);
    let v = with_l4_norm(&random_state(ladder, beta_v, rng), v_radius);
    (u, v)
}

fn state_json(s: &ShellState) -> serde_json::Value {
    json!(s.amplitudes().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
}

/// Samples `n_samples` pairs with `u` free and `v` in the ell^4 ball of
/// radius `r`. Returns the algebraic margin check and the full check with
/// noise terms. The latter is a verdict only when `eps < nu / (2L)` and
/// `||w|| >= |w|` (i.e. `k_1 >= 1`), otherwise a boundary probe.
pub fn monotonicity_scan(
    r: f64,
    model: &Model,
    noise: &NoiseConfig,
    ladder: WaveLadder,
    n_samples: usize,
    seed: u64,
) -> Result<(CheckReport, CheckReport)> {
    let samples: Vec<Result<MonotonicitySample>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(seed, i as u64);
            let (u, v) = sample_pair(ladder, r, &mut rng, i);
            monotonicity_sample(model, noise, r, &u, &v)
        })
        .collect();
    let mut worst2: Option<MonotonicitySample> = None;
    let mut worst_full: Option<MonotonicitySample> = None;
    let mut rel2_max = f64::NEG_INFINITY;
    let mut positive2 = 0usize;
    let mut positive_full = 0usize;
    for s in samples {
        let s = s?;
        let rel = if s.scale > 0.0 { s.margin2 / s.scale } else { 0.0 };
        if rel > MARGIN_REL_TOL {
            positive2 += 1;
        }
        if s.margin_full > 0.0 {
            positive_full += 1;
        }
        if rel > rel2_max {
            rel2_max = rel;
            worst2 = Some(s.clone());
        }
        if worst_full.as_ref().is_none_or(|w| s.margin_full > w.margin_full) {
            worst_full = Some(s);
        }
    }
    let nu = model.nu();
    let (w2, wf) = (worst2.expect("n_samples > 0"), worst_full.expect("n_samples > 0"));
    let mut r2 = CheckReport::new(
        "monotonicity_algebraic",
        rel2_max,
        MARGIN_REL_TOL,
        0.0,
        n_samples,
        Verdict::from_pass(positive2 == 0),
    )
    .param("r", r)
    .param("nu", nu)
    .param("shells", ladder.shells())
    .param("violations", positive2)
    .param("max_margin", w2.margin2)
    .param("lhs_is", "max margin / scale");
    if positive2 > 0 {
        r2 = r2.witness(json!({"u": state_json(&w2.u), "v": state_json(&w2.v), "margin": w2.margin2}));
    }
    let in_range = noise.l_cert == 0.0 || noise.epsilon < nu / (2.0 * noise.l_cert);
    let poincare = ladder.k(1) >= 1.0;
    let verdict = if in_range && poincare { Verdict::from_pass(positive_full == 0) } else { Verdict::ReportOnly };
    let mut rf = CheckReport::new("monotonicity_full", wf.margin_full, 0.0, 0.0, n_samples, verdict)
        .param("r", r)
        .param("nu", nu)
        .param("epsilon", noise.epsilon)
        .param("L", noise.l_cert)
        .param("positive_margins", positive_full)
        .param("admissible", in_range)
        .param("families", noise.label());
    if positive_full > 0 {
        rf = rf.witness(json!({"u": state_json(&wf.u), "v": state_json(&wf.v), "margin": wf.margin_full}));
    }
    Ok((r2, rf))
}

/// The two links of the ell^4 interpolation chain used for the local
/// monotonicity bound:
/// (a) `|(B(w,v),w)| <= |v|_{l4} |w|^{1/2} ||w||^{3/2}` (stated without a
///     constant; reported with the largest observed ratio), and
/// (b) `|v|_{l4} |w|^{1/2} ||w||^{3/2} <= (nu/2)||w||^2 + 27/(32 nu^3) |w|^2 |v|_{l4}^4`.
pub fn l4_chain(model: &Model, ladder: WaveLadder, n_samples: usize, seed: u64) -> Result<(CheckReport, CheckReport)> {
    let nu = model.nu();
    let rows: Vec<(f64, f64)> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(seed, i as u64);
            let (w, v) = sample_pair(ladder, 1.0, &mut rng, i);
            let bwv = model.apply_b(&w, &v).expect("same ladder");
            let lhs = inner_h(&bwv, &w).expect("same ladder").abs();
            let mid = v.l4_norm() * w.h_norm().sqrt() * w.v_norm().powf(1.5);
            let young = 0.5 * nu * w.v_norm_sq() + 27.0 / (32.0 * nu.powi(3)) * w.h_norm_sq() * v.l4_pow4();
            let ratio_a = if mid > 0.0 { lhs / mid } else { 0.0 };
            let ratio_b = if young > 0.0 { mid / young } else { 0.0 };
            (ratio_a, ratio_b)
        })
        .collect();
    let max_a = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let max_b = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let viol_a = rows.iter().filter(|r| r.0 > 1.0 + 1e-12).count();
    let viol_b = rows.iter().filter(|r| r.1 > 1.0 + 1e-12).count();
    let a = CheckReport::new("l4_chain_trilinear", max_a, 1.0, 0.0, n_samples, Verdict::ReportOnly)
        .param("violations", viol_a)
        .param("note", "inequality is stated without its constant; lhs is the largest observed ratio");
    let b = CheckReport::new("l4_chain_young", max_b, 1.0, 0.0, n_samples, Verdict::from_pass(viol_b == 0))
        .param("violations", viol_b)
        .param("nu", nu);
    Ok((a, b))
}
