use rayon::prelude::*;
use serde_json::json;

use super::report::{CheckReport, Verdict};
use crate::error::Result;
use crate::noise::{log_uniform, random_state, with_h_norm, NoiseConfig, RngStream, SAMPLER_SLOPES};
use crate::shell::{ShellState, WaveLadder};

/// Which norm the growth and Lipschitz ratios are taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditNorm {
    /// `K(1 + |u|^2)`, `L|u - v|^2`.
    H,
    /// `K(1 + ||u||^2)`, `L||u - v||^2`.
    V,
}

impl AuditNorm {
    pub fn name(self) -> &'static str {
        match self {
            AuditNorm::H => "H",
            AuditNorm::V => "V",
        }
    }

    fn sq(self, u: &ShellState) -> f64 {
        match self {
            AuditNorm::H => u.h_norm_sq(),
            AuditNorm::V => u.v_norm_sq(),
        }
    }
}

/// Growth and Lipschitz ratios on random states, compared with the
/// certified `K` and `L`. In the V norm the outcome is reported only.
pub fn hypothesis_audit(
    noise: &NoiseConfig,
    ladder: WaveLadder,
    mode: AuditNorm,
    n_samples: usize,
    seed: u64,
) -> Result<(CheckReport, CheckReport)> {
    let rows: Vec<Result<(f64, f64, ShellState)>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(seed, i as u64);
            let beta = SAMPLER_SLOPES[i % SAMPLER_SLOPES.len()];
            let u = if i == 0 {
                ShellState::zeros(ladder)
            } else {
                with_h_norm(&random_state(ladder, beta, &mut rng), log_uniform(&mut rng, -3.0, 3.0))
            };
            let d = with_h_norm(&random_state(ladder, beta, &mut rng), log_uniform(&mut rng, -4.0, 2.0));
            let v = &u + &d;
            let g = noise.growth_functional(0.0, &u)? / (1.0 + mode.sq(&u));
            let den = mode.sq(&d);
            let l = if den > 0.0 { noise.lipschitz_functional(0.0, &u, &v)? / den } else { 0.0 };
            Ok((g, l, u))
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let tol = 1.0 + 1e-9;
    let build = |name: &str, idx: usize, bound: f64| {
        let (mut max, mut arg) = (0.0f64, 0usize);
        for (i, r) in rows.iter().enumerate() {
            let x = if idx == 0 { r.0 } else { r.1 };
            if x > max {
                max = x;
                arg = i;
            }
        }
        let breaches = rows.iter().filter(|r| (if idx == 0 { r.0 } else { r.1 }) > bound * tol + 1e-300).count();
        let verdict = match mode {
            AuditNorm::H => Verdict::from_pass(breaches == 0),
            AuditNorm::V => Verdict::ReportOnly,
        };
        let mut rep = CheckReport::new(name, max, bound, 0.0, n_samples, verdict)
            .param("norm", mode.name())
            .param("breaches", breaches)
            .param("families", noise.label());
        if breaches > 0 {
            let u = &rows[arg].2;
            rep = rep.witness(json!({
                "u": u.amplitudes().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "ratio": max,
            }));
        }
        rep
    };
    Ok((
        build(&format!("growth_{}", mode.name()), 0, noise.k_cert),
        build(&format!("lipschitz_{}", mode.name()), 1, noise.l_cert),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{JumpFamily, QSpectrum, SigmaFamily};

    #[test]
    fn additive_ratio_peaks_at_k() {
        let q = QSpectrum::new(1.0, 1.0).unwrap();
        let n = NoiseConfig::new(0.01, q, SigmaFamily::additive_uniform(1.0, 8), JumpFamily::none(), 8).unwrap();
        let l = WaveLadder::new(1.0, 8).unwrap();
        let (g, lip) = hypothesis_audit(&n, l, AuditNorm::H, 500, 1).unwrap();
        assert_eq!(g.lhs, q.trace(8));
        assert_eq!(g.verdict, Verdict::Pass);
        assert_eq!(lip.lhs, 0.0);
    }

    #[test]
    fn zero_noise_has_zero_ratios() {
        let l = WaveLadder::new(1.0, 8).unwrap();
        let (g, lip) = hypothesis_audit(&NoiseConfig::silent(8), l, AuditNorm::V, 200, 1).unwrap();
        assert_eq!((g.lhs, lip.lhs), (0.0, 0.0));
        assert_eq!(g.verdict, Verdict::ReportOnly);
    }

    #[test]
    fn understated_constant_is_caught() {
        let q = QSpectrum::new(1.0, 1.0).unwrap();
        let mut n = NoiseConfig::new(0.01, q, SigmaFamily::LinearMult { gain: 2.0 }, JumpFamily::none(), 8).unwrap();
        n.l_cert *= 0.5;
        let l = WaveLadder::new(1.0, 8).unwrap();
        let (_, lip) = hypothesis_audit(&n, l, AuditNorm::H, 500, 1).unwrap();
        assert_eq!(lip.verdict, Verdict::Fail);
        assert_eq!(lip.witnesses.len(), 1);
    }
}
