use num_complex::Complex64;
use rayon::prelude::*;

use super::energy::Z_PASS;
use super::report::{CheckReport, Verdict};
use super::stats::MeanSe;
use crate::error::{Error, Result};
use crate::noise::{sample_jumps, wiener_increment, JumpFamily, JumpKind, QSpectrum, RngStream};
use crate::shell::WaveLadder;

/// Doob's constant for `p = 2`.
pub const BDG_CONSTANT: f64 = 4.0;

/// Moment checks of the compensated integral `I = int_0^T int_Z z gamma N~(dt,dz)`
/// for an additive jump family: the isometry `E|I|^2 = T rate E[z^2] |gamma|^2`,
/// zero mean of `(I, gamma)/|gamma|`, and `E|I| <= 2 T rate E|z| |gamma|`.
pub fn isometry_suite(fam: &JumpFamily, horizon: f64, n_paths: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let gamma = match &fam.kind {
        JumpKind::AdditiveMark { direction } => direction.clone(),
        _ => return Err(Error::Domain("isometry suite needs an additive-mark jump family".into())),
    };
    if !(horizon > 0.0) || n_paths < 2 {
        return Err(Error::Domain("isometry suite needs T > 0 and at least 2 paths".into()));
    }
    let g2: f64 = gamma.iter().map(|z| z.norm_sqr()).sum();
    let gn = g2.sqrt();
    let comp = fam.rate * horizon * fam.mark_law.mean();
    let rows: Vec<Result<(f64, f64, f64)>> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let s = RngStream::new(seed, i as u64);
            let jumps = sample_jumps(fam, 0.0, horizon, &s, 0)?;
            // I = (sum z_j - rate T E z) gamma
            let coef = jumps.iter().map(|j| j.mark).sum::<f64>() - comp;
            let norm = coef.abs() * gn;
            let proj = coef * gn;
            Ok((norm * norm, proj, norm))
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let sq = MeanSe::of(&rows.iter().map(|r| r.0).collect::<Vec<_>>());
    let mean = MeanSe::of(&rows.iter().map(|r| r.1).collect::<Vec<_>>());
    let abs = MeanSe::of(&rows.iter().map(|r| r.2).collect::<Vec<_>>());

    let expected = horizon * fam.rate * fam.mark_law.second_moment() * g2;
    let le1 = 2.0 * horizon * fam.rate * fam.mark_law.abs_mean() * gn;
    let common = |r: CheckReport| {
        r.param("rate", fam.rate)
            .param("horizon", horizon)
            .param("mark_law", fam.mark_law.name())
            .param("gamma_norm", gn)
    };
    Ok(vec![
        common(
            CheckReport::new(
                "ito_isometry",
                sq.mean,
                expected,
                sq.stderr,
                n_paths,
                Verdict::from_pass((sq.mean - expected).abs() <= Z_PASS * sq.stderr),
            )
            .param("relative_error", if expected > 0.0 { (sq.mean - expected) / expected } else { sq.mean }),
        ),
        common(CheckReport::new(
            "compensated_zero_mean",
            mean.mean,
            0.0,
            mean.stderr,
            n_paths,
            Verdict::from_pass(mean.mean.abs() <= Z_PASS * mean.stderr),
        )),
        common(CheckReport::new(
            "first_moment_bound",
            abs.mean,
            le1,
            abs.stderr,
            n_paths,
            Verdict::from_pass(le1 - abs.mean > -Z_PASS * abs.stderr),
        )),
    ])
}

/// `E sup_{t <= T} |M_t|^2 <= 4 E[M]_T` for `M_t = Re(W_t, gamma)` on a grid of `steps`.
pub fn bdg_check(
    q: &QSpectrum,
    ladder: WaveLadder,
    gamma: &[Complex64],
    horizon: f64,
    steps: usize,
    n_paths: usize,
    seed: u64,
) -> Result<CheckReport> {
    if gamma.len() != ladder.shells() {
        return Err(Error::Dimension("gamma length must match the ladder".into()));
    }
    let dt = horizon / steps as f64;
    let qv: f64 =
        gamma.iter().enumerate().map(|(i, g)| q.eigenvalue(i + 1) * g.norm_sqr() / 2.0).sum::<f64>() * horizon;
    let sups: Vec<Result<f64>> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let s = RngStream::new(seed, i as u64);
            let mut m = 0.0f64;
            let mut sup = 0.0f64;
            for k in 0..steps {
                let dw = wiener_increment(q, ladder, dt, &s, k as u64)?;
                m += dw.amplitudes().iter().zip(gamma).map(|(w, g)| w.re * g.re + w.im * g.im).sum::<f64>();
                sup = sup.max(m * m);
            }
            Ok(sup)
        })
        .collect();
    let sups = sups.into_iter().collect::<Result<Vec<_>>>()?;
    let m = MeanSe::of(&sups);
    let rhs = BDG_CONSTANT * qv;
    Ok(CheckReport::new(
        "bdg_wiener",
        m.mean,
        rhs,
        m.stderr,
        n_paths,
        Verdict::from_pass(rhs - m.mean > -Z_PASS * m.stderr),
    )
    .param("quadratic_variation", qv)
    .param("steps", steps)
    .param("constant", BDG_CONSTANT))
}
