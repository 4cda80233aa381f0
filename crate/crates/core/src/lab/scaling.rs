use serde_json::json;

use super::ensemble::{run_ensemble, EnsembleSpec};
use super::report::{CheckReport, Verdict};
use crate::error::{Error, Result};
use crate::integrator::{galerkin_refine, simulate_path, sup_snapshot_distance};
use crate::noise::RngStream;

/// `sup_t mean_i |u_{eps,i}(t) - u_0(t)|` for each `eps`, where `u_0` is the
/// noiseless path from the same initial state. Passes when the sequence
/// strictly decreases along `eps_list`.
pub fn epsilon_scaling(spec: &EnsembleSpec, eps_list: &[f64]) -> Result<CheckReport> {
    if eps_list.len() < 2 {
        return Err(Error::Domain("epsilon scaling needs at least two levels".into()));
    }
    let u0 = &spec.init.base;
    let silent = spec.noise.with_epsilon(0.0);
    let det = simulate_path(u0, &spec.model, &silent, &spec.scheme, &RngStream::new(spec.seed, 0), None)?;
    let mut sups = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let mut s = spec.clone();
        s.noise = spec.noise.with_epsilon(eps);
        s.init.noise = 0.0;
        let ens = run_ensemble(&s)?;
        let mut sup = 0.0f64;
        for (k, d) in det.states.iter().enumerate() {
            let mean = ens.paths.iter().map(|p| (&p.states[k] - d).h_norm()).sum::<f64>() / ens.paths.len() as f64;
            sup = sup.max(mean);
        }
        sups.push(sup);
    }
    let ok = sups.windows(2).all(|w| w[1] < w[0]);
    Ok(CheckReport::new("epsilon_scaling", sups[sups.len() - 1], sups[0], 0.0, spec.n_paths, Verdict::from_pass(ok))
        .param("epsilons", eps_list.to_vec())
        .param("sup_mean_deviation", sups.clone())
        .param("families", spec.noise.label()))
}

/// Cauchy trend of Galerkin truncations: the sup-in-time distance between
/// consecutive dimensions must strictly decrease.
pub fn galerkin_trend(spec: &EnsembleSpec, dims: &[usize]) -> Result<CheckReport> {
    if dims.len() < 3 {
        return Err(Error::Domain("Galerkin trend needs at least three dimensions".into()));
    }
    let top = *dims.last().expect("nonempty");
    let u0 = spec.init.base.resize(top)?;
    let runs = galerkin_refine(&u0, dims, &spec.model, &spec.noise, &spec.scheme, &RngStream::new(spec.seed, 0))?;
    let diffs = runs.windows(2).map(|w| sup_snapshot_distance(&w[0], &w[1])).collect::<Result<Vec<_>>>()?;
    let ok = diffs.windows(2).all(|w| w[1] < w[0]);
    Ok(CheckReport::new("galerkin_cauchy", diffs[diffs.len() - 1], diffs[0], 0.0, 1, Verdict::from_pass(ok))
        .param("dims", dims.to_vec())
        .param("sup_differences", diffs.clone())
        .witness(json!({"epsilon": spec.noise.epsilon})))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::SchemeConfig;
    use crate::lab::ensemble::InitialLaw;
    use crate::noise::{JumpFamily, NoiseConfig, QSpectrum, SigmaFamily};
    use crate::shell::{Model, WaveLadder};

    fn spec(n: usize) -> EnsembleSpec {
        let l = WaveLadder::new(1.0, n).unwrap();
        EnsembleSpec {
            model: Model::goy(1.0).unwrap(),
            noise: NoiseConfig::new(
                0.01,
                QSpectrum::new(1.0, 1.0).unwrap(),
                SigmaFamily::additive_uniform(1.0, n),
                JumpFamily::none(),
                n,
            )
            .unwrap(),
            scheme: SchemeConfig::imex(1e-2, 1.0).unwrap().with_record_stride(10),
            init: InitialLaw::deterministic(InitialLaw::power_law(l, 1.0, 1.0)),
            n_paths: 50,
            seed: 11,
            exit_level: None,
        }
    }

    #[test]
    fn deviation_shrinks_with_epsilon() {
        let r = epsilon_scaling(&spec(8), &[1e-2, 1e-3, 1e-4]).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    }

    #[test]
    fn galerkin_differences_shrink() {
        let r = galerkin_trend(&spec(24), &[8, 16, 24]).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    }
}
