use serde::Serialize;

use super::config::NoiseConfig;
use super::rng::RngStream;
use super::sampling::{log_uniform, random_state, with_h_norm, SAMPLER_SLOPES};
use crate::error::{Error, Result};
use crate::shell::{ShellState, WaveLadder};

/// Empirical suprema are inflated by this factor before being certified.
pub const SAFETY_FACTOR: f64 = 2.0;
pub const MIN_CERT_SAMPLES: usize = 1000;

/// Radii at which ratios are probed for unbounded growth.
const PROBE_RADII: [f64; 3] = [1e2, 1e4, 1e6];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationReport {
    #[serde(rename = "K_hat")]
    pub k_hat: f64,
    #[serde(rename = "L_hat")]
    pub l_hat: f64,
    #[serde(rename = "analytic_K")]
    pub analytic_k: Option<f64>,
    #[serde(rename = "analytic_L")]
    pub analytic_l: Option<f64>,
    /// Whether the analytic constants are attained (additive families) or
    /// only upper bounds.
    pub analytic_exact: bool,
    pub max_growth_ratio: f64,
    pub max_lipschitz_ratio: f64,
    pub safety_factor: f64,
    pub samples: usize,
    pub families: String,
}

/// Sampled suprema of the growth ratio `G(u) / (1 + |u|^2)` and the
/// Lipschitz ratio `D(u, v) / |u - v|^2`, with a large-radius probe that
/// rejects families whose ratios keep growing.
pub fn certify_ratios<G, D>(
    ladder: WaveLadder,
    samples: usize,
    rng: &mut RngStream,
    growth: G,
    diff: D,
) -> Result<(f64, f64)>
where
    G: Fn(&ShellState) -> Result<f64>,
    D: Fn(&ShellState, &ShellState) -> Result<f64>,
{
    if samples < MIN_CERT_SAMPLES {
        return Err(Error::Domain(format!("certification needs at least {MIN_CERT_SAMPLES} samples, got {samples}")));
    }
    let growth_ratio = |u: &ShellState| -> Result<f64> { Ok(growth(u)? / (1.0 + u.h_norm_sq())) };
    let lip_ratio = |u: &ShellState, v: &ShellState| -> Result<Option<f64>> {
        let d2 = (u - v).h_norm_sq();
        if d2 == 0.0 {
            return Ok(None);
        }
        Ok(Some(diff(u, v)? / d2))
    };

    let mut max_g = growth_ratio(&ShellState::zeros(ladder))?;
    let mut max_l = 0.0f64;
    for i in 0..samples {
        let beta = SAMPLER_SLOPES[i % SAMPLER_SLOPES.len()];
        let radius = log_uniform(rng, -3.0, 3.0);
        let u = with_h_norm(&random_state(ladder, beta, rng), radius);
        max_g = max_g.max(growth_ratio(&u)?);
        let step = log_uniform(rng, -4.0, 2.0);
        let v = &u + &with_h_norm(&random_state(ladder, beta, rng), step);
        if let Some(r) = lip_ratio(&u, &v)? {
            max_l = max_l.max(r);
        }
    }

    let dirs: Vec<ShellState> =
        (0..8).map(|i| with_h_norm(&random_state(ladder, SAMPLER_SLOPES[i % 3], rng), 1.0)).collect();
    let offsets: Vec<ShellState> =
        (0..8).map(|i| with_h_norm(&random_state(ladder, SAMPLER_SLOPES[i % 3], rng), 1.0)).collect();
    let mut g_probe = [0.0f64; PROBE_RADII.len()];
    let mut l_probe = [0.0f64; PROBE_RADII.len()];
    for (j, &rho) in PROBE_RADII.iter().enumerate() {
        for (d, e) in dirs.iter().zip(&offsets) {
            let u = d.scale_real(rho);
            g_probe[j] = g_probe[j].max(growth_ratio(&u)?);
            if let Some(r) = lip_ratio(&u, &(&u + e))? {
                l_probe[j] = l_probe[j].max(r);
            }
        }
    }
    let last = PROBE_RADII.len() - 1;
    for (name, probe) in [("growth", &g_probe), ("Lipschitz", &l_probe)] {
        if !probe.iter().all(|x| x.is_finite()) || probe[last] > 2.0 * probe[last - 1] + f64::MIN_POSITIVE {
            return Err(Error::Certification(format!(
                "{name} ratio diverges with |u|: {:?} at radii {:?}",
                probe, PROBE_RADII
            )));
        }
    }
    Ok((max_g.max(g_probe[last]), max_l.max(l_probe[last])))
}

/// Empirical hypothesis constants `(K_hat, L_hat)` for `cfg` on `ladder`.
pub fn certify_constants(
    cfg: &NoiseConfig,
    ladder: WaveLadder,
    samples: usize,
    rng: &mut RngStream,
) -> Result<CertificationReport> {
    let (max_g, max_l) = certify_ratios(
        ladder,
        samples,
        rng,
        |u| cfg.growth_functional(0.0, u),
        |u, v| cfg.lipschitz_functional(0.0, u, v),
    )?;
    let analytic = cfg.closed_form_constants(ladder.shells())?;
    let tol = 1.0 + 1e-9;
    if max_g > analytic.k * tol + 1e-300 || max_l > analytic.l * tol + 1e-300 {
        return Err(Error::Certification(format!(
            "empirical ratios (K {max_g}, L {max_l}) exceed closed-form constants (K {}, L {})",
            analytic.k, analytic.l
        )));
    }
    Ok(CertificationReport {
        k_hat: SAFETY_FACTOR * max_g,
        l_hat: SAFETY_FACTOR * max_l,
        analytic_k: Some(analytic.k),
        analytic_l: Some(analytic.l),
        analytic_exact: analytic.exact,
        max_growth_ratio: max_g,
        max_lipschitz_ratio: max_l,
        safety_factor: SAFETY_FACTOR,
        samples,
        families: cfg.label(),
    })
}
