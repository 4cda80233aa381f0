use super::energy::Z_PASS;
use super::ensemble::{run_coupled_ensemble, EnsembleSpec};
use super::report::{CheckReport, Verdict};
use super::stats::{cumulative_trapezoid, MeanSe};
use crate::error::{Error, Result};
use crate::integrator::{simulate_coupled, PairTrajectory, SchemeConfig, Trajectory};
use crate::noise::{NoiseConfig, RngStream};
use crate::shell::{Model, ShellState};

/// Tolerance on increases of the deterministic weighted difference.
pub const CONTRACTION_TOL: f64 = 1e-8;

/// `r(t_k) = (2 / nu^3) int_0^{t_k} |v|_{l4}^4 ds` (trapezoid on the grid).
pub fn r_weight(traj_v: &Trajectory, nu: f64) -> Vec<f64> {
    let c = 2.0 / nu.powi(3);
    cumulative_trapezoid(&traj_v.grid, &traj_v.l4_pow4).into_iter().map(|x| c * x).collect()
}

/// `e^{-r(t_k)} |w(t_k)|^2` with `r` built from the second path.
pub fn weighted_difference(pair: &PairTrajectory, nu: f64) -> Vec<f64> {
    r_weight(&pair.second, nu).iter().zip(&pair.diff_energy).map(|(r, d)| (-r).exp() * d).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionReport {
    pub times: Vec<f64>,
    /// MC estimate of `E[e^{-r(t)} |w(t)|^2]` per grid time.
    pub weighted_diff: Vec<MeanSe>,
    /// `E|w(0)|^2`.
    pub initial: f64,
    /// Weight of the first pair.
    pub r_path: Vec<f64>,
    pub check: CheckReport,
}

/// Deterministic coupled pair: the weighted difference must not increase
/// by more than `CONTRACTION_TOL` (relative to `max(1, |w(0)|^2)`).
pub fn deterministic_contraction(
    u0: &ShellState,
    v0: &ShellState,
    model: &Model,
    scheme: &SchemeConfig,
) -> Result<CheckReport> {
    let noise = NoiseConfig::silent(u0.len());
    let pair = simulate_coupled(u0, v0, model, &noise, scheme, &RngStream::new(0, 0))?;
    let seq = weighted_difference(&pair, model.nu());
    let w0 = seq[0];
    let tol = CONTRACTION_TOL * w0.max(1.0);
    let (mut worst, mut at) = (f64::NEG_INFINITY, 0.0);
    for (k, w) in seq.windows(2).enumerate() {
        if w[1] - w[0] > worst {
            worst = w[1] - w[0];
            at = pair.first.grid[k + 1];
        }
    }
    let max_value = seq.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ok = seq.len() < 2 || worst <= tol;
    Ok(CheckReport::new("contraction_deterministic", max_value, w0, 0.0, 1, Verdict::from_pass(ok))
        .param("max_increase", if seq.len() < 2 { 0.0 } else { worst })
        .param("t_max_increase", at)
        .param("tolerance", tol)
        .param("r_final", *r_weight(&pair.second, model.nu()).last().expect("nonempty"))
        .param("nu", model.nu())
        .param("dt", scheme.dt))
}

/// Coupled ensemble with `v0 = u0 + offset`: `E[e^{-r(t)} |w(t)|^2] <= E|w(0)|^2 + 3 se`
/// at every grid time.
pub fn contraction_check(spec: &EnsembleSpec, offset: &ShellState) -> Result<ContractionReport> {
    let nu = spec.model.nu();
    if spec.noise.l_cert > 0.0 && spec.noise.epsilon >= nu / spec.noise.l_cert {
        return Err(Error::Config(format!("contraction needs epsilon < nu / L = {}", nu / spec.noise.l_cert)));
    }
    let (pairs, blown) = run_coupled_ensemble(spec, offset)?;
    if pairs.is_empty() {
        return Err(Error::Domain("no surviving pairs".into()));
    }
    let series: Vec<Vec<f64>> = pairs.iter().map(|p| weighted_difference(p, nu)).collect();
    let initial = MeanSe::of(&series.iter().map(|s| s[0]).collect::<Vec<_>>()).mean;
    let times = pairs[0].first.grid.clone();
    let stats: Vec<MeanSe> =
        (0..times.len()).map(|k| MeanSe::of(&series.iter().map(|s| s[k]).collect::<Vec<_>>())).collect();
    let mut ok = true;
    let mut worst = 0usize;
    let mut worst_margin = f64::INFINITY;
    for (k, m) in stats.iter().enumerate() {
        let margin = initial + Z_PASS * m.stderr - m.mean;
        if !(margin >= 0.0) {
            ok = false;
        }
        if margin < worst_margin {
            worst_margin = margin;
            worst = k;
        }
    }
    let m = stats[worst];
    let check =
        CheckReport::new("contraction_stochastic", m.mean, initial, m.stderr, pairs.len(), Verdict::from_pass(ok))
            .param("t_worst", times[worst])
            .param("epsilon", spec.noise.epsilon)
            .param("L", spec.noise.l_cert)
            .param("nu", nu)
            .param("dt", spec.scheme.dt)
            .param("horizon", spec.scheme.horizon)
            .param("n_paths", spec.n_paths)
            .param("blown_up", blown.len())
            .param("families", spec.noise.label());
    Ok(ContractionReport { times, weighted_diff: stats, initial, r_path: r_weight(&pairs[0].second, nu), check })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::SchemeConfig;
    use crate::lab::ensemble::InitialLaw;
    use crate::noise::{JumpFamily, MarkLaw, QSpectrum, SigmaFamily};
    use crate::shell::WaveLadder;

    #[test]
    fn weight_examples() {
        let l = WaveLadder::new(1.0, 4).unwrap();
        let model = Model::goy(1.0).unwrap();
        let scheme = SchemeConfig::imex(0.1, 1.0).unwrap();
        let z = ShellState::zeros(l);
        let tr =
            crate::integrator::simulate_path(&z, &model, &NoiseConfig::silent(4), &scheme, &RngStream::new(0, 0), None)
                .unwrap();
        assert!(r_weight(&tr, 1.0).iter().all(|&r| r == 0.0));

        // a constant e_1 path: overwrite the series directly
        let mut c = tr.clone();
        c.l4_pow4.iter_mut().for_each(|x| *x = 1.0);
        let r1 = r_weight(&c, 1.0);
        for (r, t) in r1.iter().zip(&c.grid) {
            assert!((r - 2.0 * t).abs() < 1e-14);
        }
        let r2 = r_weight(&c, 2.0);
        for (a, b) in r1.iter().zip(&r2) {
            assert!((a - 8.0 * b).abs() < 1e-14);
        }
    }

    #[test]
    fn deterministic_pair_contracts() {
        let l = WaveLadder::new(1.0, 10).unwrap();
        let model = Model::goy(1.0).unwrap();
        let scheme = SchemeConfig::imex(1e-3, 1.0).unwrap();
        let u0 = ShellState::unit(l, 1).unwrap();
        let r = deterministic_contraction(&u0, &u0.scale_real(1.1), &model, &scheme).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        let same = deterministic_contraction(&u0, &u0, &model, &scheme).unwrap();
        assert_eq!(same.lhs, 0.0);
    }

    #[test]
    fn stochastic_pairs_contract() {
        let l = WaveLadder::new(1.0, 8).unwrap();
        let jumps = JumpFamily::additive_on_shell(8, 1, 1.0, MarkLaw::Gaussian { std: 1.0 }, 1.0).unwrap();
        let spec = EnsembleSpec {
            model: Model::sabra(1.0).unwrap(),
            noise: NoiseConfig::new(
                0.01,
                QSpectrum::new(1.0, 1.0).unwrap(),
                SigmaFamily::SaturatedMult { gain: 1.0 },
                jumps,
                8,
            )
            .unwrap(),
            scheme: SchemeConfig::imex(1e-2, 1.0).unwrap(),
            init: InitialLaw::deterministic(InitialLaw::power_law(l, 1.0, 1.0)),
            n_paths: 64,
            seed: 5,
            exit_level: None,
        };
        let offset = ShellState::unit(l, 2).unwrap().scale_real(0.1);
        let rep = contraction_check(&spec, &offset).unwrap();
        assert_eq!(rep.check.verdict, Verdict::Pass);
        assert!((rep.initial - 0.01).abs() < 1e-15);
        assert!(rep.r_path.windows(2).all(|w| w[1] >= w[0]) && rep.r_path[0] == 0.0);
    }
}
