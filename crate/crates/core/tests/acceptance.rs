//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use shellsim::cli::{run_with_threads, Command, RunConfig};
use shellsim::integrator::SchemeConfig;
use shellsim::lab::{
    check_energy1, check_weighted, conservation_check, contraction_check, deterministic_contraction, epsilon_scaling,
    galerkin_trend, isometry_suite, l4_interpolation_check, monotonicity_scan, run_ensemble, CheckReport, EnsembleSpec,
    InitialLaw, Verdict, Z_PASS,
};
use shellsim::noise::{JumpFamily, JumpKind, MarkLaw, NoiseConfig, QSpectrum, SigmaFamily};
use shellsim::shell::{Model, WaveLadder};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn require(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    require(elapsed.as_secs_f64() < limit_s, || format!("took {:.1}s, limit {limit_s}s", elapsed.as_secs_f64()))
}

fn passed(r: &CheckReport) -> Result<(), String> {
    require(r.verdict == Verdict::Pass, || r.summary_line())
}

fn q() -> QSpectrum {
    QSpectrum::new(1.0, 1.0).unwrap()
}

fn conservation() -> Outcome {
    let t = Instant::now();
    let ladder = WaveLadder::new(1.0, 24).unwrap();
    let mut worst = 0.0f64;
    for model in [Model::goy(1.0).unwrap(), Model::sabra(1.0).unwrap()] {
        let r = conservation_check(&model, ladder, 10_000, 101);
        passed(&r)?;
        worst = worst.max(r.lhs);
    }
    within(t.elapsed(), 5.0)?;
    Ok(format!("max |(B(u,u),u)|/(k_N|u|^3) = {worst:.2e} over 2 x 1e4 states, {:.2}s", t.elapsed().as_secs_f64()))
}

fn l4_lemma() -> Outcome {
    let t = Instant::now();
    let mut worst = 0.0f64;
    for k0 in [0.25, 1.0] {
        let r = l4_interpolation_check(WaveLadder::new(k0, 24).unwrap(), 100_000, 202);
        require(r.params["violations"] == 0, || r.summary_line())?;
        worst = worst.max(r.lhs);
    }
    within(t.elapsed(), 5.0)?;
    Ok(format!("max ratio {worst:.4}, zero violations over 2 x 1e5 states, {:.2}s", t.elapsed().as_secs_f64()))
}

fn monotonicity_algebraic() -> Outcome {
    let t = Instant::now();
    let ladder = WaveLadder::new(1.0, 16).unwrap();
    let silent = NoiseConfig::silent(16);
    let mut worst = f64::NEG_INFINITY;
    for nu in [0.5, 1.0] {
        for r in [0.5, 1.0, 2.0] {
            let model = Model::goy(nu).unwrap();
            let (m2, _) = monotonicity_scan(r, &model, &silent, ladder, 10_000, 303).unwrap();
            passed(&m2)?;
            worst = worst.max(m2.lhs);
        }
    }
    within(t.elapsed(), 30.0)?;
    Ok(format!("max margin/scale {worst:.3e} over 6 x 1e4 pairs, {:.2}s", t.elapsed().as_secs_f64()))
}

fn monotonicity_full() -> Outcome {
    let t = Instant::now();
    let n = 16;
    let ladder = WaveLadder::new(1.0, n).unwrap();
    let sat_jumps =
        JumpFamily { kind: JumpKind::SaturatedMultMark, mark_law: MarkLaw::Gaussian { std: 1.0 }, rate: 2.0 };
    let add_jumps = JumpFamily::additive_on_shell(n, 1, 1.0, MarkLaw::Uniform { lo: -1.0, hi: 2.0 }, 1.0).unwrap();
    let families = [
        (SigmaFamily::LinearMult { gain: 1.0 }, JumpFamily::none()),
        (SigmaFamily::SaturatedMult { gain: 2.0 }, add_jumps),
        (SigmaFamily::additive_uniform(1.0, n), sat_jumps.clone()),
        (SigmaFamily::LinearMult { gain: 0.5 }, sat_jumps),
    ];
    let mut worst = f64::NEG_INFINITY;
    for (sigma, jumps) in families {
        let base = NoiseConfig::new(0.0, q(), sigma, jumps, n).unwrap();
        let noise = base.with_epsilon(1.0 / (4.0 * base.l_cert));
        let model = Model::sabra(1.0).unwrap();
        let (_, full) = monotonicity_scan(1.0, &model, &noise, ladder, 10_000, 404).unwrap();
        passed(&full)?;
        worst = worst.max(full.lhs);
    }
    within(t.elapsed(), 60.0)?;
    Ok(format!(
        "largest margin {worst:.3e} (all negative) over 4 families x 1e4 pairs, {:.2}s",
        t.elapsed().as_secs_f64()
    ))
}

fn ito_isometry() -> Outcome {
    let t = Instant::now();
    let fam = JumpFamily::additive_on_shell(8, 1, 1.0, MarkLaw::Gaussian { std: 1.0 }, 1.0).unwrap();
    let reps = isometry_suite(&fam, 1.0, 100_000, 505).unwrap();
    let r = &reps[0];
    require((r.rhs - 1.0).abs() < 1e-15, || format!("expected second moment {}, want 1", r.rhs))?;
    require((r.lhs - 1.0).abs() <= Z_PASS * r.stderr, || r.summary_line())?;
    // I | N ~ N(0, N) with N ~ Poisson(1): Var I^2 = 3 E N^2 - 1 = 5
    let se = (5.0f64 / 1e5).sqrt();
    require((r.stderr / se - 1.0).abs() < 0.05, || format!("SE {:.3e}, expected about {se:.3e}", r.stderr))?;
    within(t.elapsed(), 60.0)?;
    Ok(format!(
        "E|I|^2 = {:.4} +- {:.4} (SE {:.2}%), {:.2}s",
        r.lhs,
        r.stderr,
        100.0 * r.stderr,
        t.elapsed().as_secs_f64()
    ))
}

fn energy_spec(n_paths: usize) -> EnsembleSpec {
    let n = 16;
    let ladder = WaveLadder::new(1.0, n).unwrap();
    EnsembleSpec {
        model: Model::goy(1.0).unwrap(),
        noise: NoiseConfig::new(0.01, q(), SigmaFamily::additive_uniform(1.0, n), JumpFamily::none(), n).unwrap(),
        scheme: SchemeConfig::imex(1e-3, 1.0).unwrap().with_record_stride(50),
        init: InitialLaw { base: InitialLaw::power_law(ladder, 1.0, 1.0), noise: 0.1 },
        n_paths,
        seed: 606,
        exit_level: None,
    }
}

fn margin_ok(r: &CheckReport) -> Result<(), String> {
    passed(r)?;
    require(r.slack > Z_PASS * r.stderr, || r.summary_line())
}

fn energy_plain() -> Outcome {
    let t = Instant::now();
    let spec = energy_spec(1000);
    let ens = run_ensemble(&spec).unwrap();
    let r = check_energy1(&spec, &ens).unwrap();
    margin_ok(&r)?;
    within(t.elapsed(), 300.0)?;
    Ok(format!(
        "worst slack {:.4e} vs 3 SE {:.2e} at t = {}, {:.1}s",
        r.slack,
        Z_PASS * r.stderr,
        r.params["t_worst"],
        t.elapsed().as_secs_f64()
    ))
}

fn energy_weighted() -> Outcome {
    let spec = energy_spec(1000);
    let ens = run_ensemble(&spec).unwrap();
    let (r, _) = check_weighted(&spec, &ens, 1.0).unwrap();
    margin_ok(&r)?;
    Ok(format!(
        "delta = 1: worst slack {:.4e} vs 3 SE {:.2e} at t = {}",
        r.slack,
        Z_PASS * r.stderr,
        r.params["t_worst"]
    ))
}

fn contraction() -> Outcome {
    let t = Instant::now();
    let n = 16;
    let ladder = WaveLadder::new(1.0, n).unwrap();
    let u0 = InitialLaw::power_law(ladder, 1.0, 1.0);
    let offset = InitialLaw::power_law(ladder, 0.3, 1.0).scale(Complex64::new(0.0, 1.0));
    let scheme = SchemeConfig::imex(1e-3, 1.0).unwrap().with_record_stride(50);
    let model = Model::goy(1.0).unwrap();
    let det = deterministic_contraction(&u0, &(&u0 + &offset), &model, &scheme).unwrap();
    passed(&det)?;

    let spec = EnsembleSpec {
        model,
        noise: NoiseConfig::new(
            0.01,
            q(),
            SigmaFamily::LinearMult { gain: 1.0 },
            JumpFamily::additive_on_shell(n, 1, 0.5, MarkLaw::Gaussian { std: 1.0 }, 2.0).unwrap(),
            n,
        )
        .unwrap(),
        scheme,
        init: InitialLaw::deterministic(u0),
        n_paths: 1000,
        seed: 808,
        exit_level: None,
    };
    let st = contraction_check(&spec, &offset).unwrap();
    passed(&st.check)?;
    let worst =
        st.weighted_diff.iter().map(|m| m.mean - st.initial - Z_PASS * m.stderr).fold(f64::NEG_INFINITY, f64::max);
    require(worst <= 0.0, || st.check.summary_line())?;
    within(t.elapsed(), 300.0)?;
    Ok(format!(
        "deterministic max increase {:.1e}; stochastic max(E - E|w0|^2 - 3SE) = {worst:.3e}, {:.1}s",
        det.params["max_increase"].as_f64().unwrap_or(0.0),
        t.elapsed().as_secs_f64()
    ))
}

fn determinism() -> Outcome {
    let mut cfg = RunConfig::parse(
        "model.shells = 12\nepsilon = 0.05\nsigma.kind = \"saturated_mult\"\njumps.kind = \"additive_mark\"\n\
         jumps.rate = 5.0\nscheme.dt = 0.002\nscheme.horizon = 0.5\nscheme.record_stride = 5\nrun.n_paths = 24\n",
    )
    .unwrap();
    let spec = cfg.ensemble_spec().unwrap();
    let mut outputs = Vec::new();
    for threads in [1, 2, 8] {
        let dir = tempfile::tempdir().unwrap();
        cfg.output_dir = dir.path().to_path_buf();
        run_with_threads(&cfg, Command::Simulate, Some(threads)).unwrap();
        let single = std::fs::read(dir.path().join("trajectory_0.csv")).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let ens = pool.install(|| run_ensemble(&spec)).unwrap();
        let all: Vec<u8> = ens.paths.iter().flat_map(|p| p.to_csv_string().into_bytes()).collect();
        outputs.push((single, all));
    }
    require(outputs.windows(2).all(|w| w[0] == w[1]), || "CSV bytes differ across thread counts".into())?;
    Ok(format!(
        "1/2/8 threads: identical single-path CSV ({} B) and {}-path ensemble CSVs ({} B)",
        outputs[0].0.len(),
        spec.n_paths,
        outputs[0].1.len()
    ))
}

fn smooth_spec(n: usize, n_paths: usize) -> EnsembleSpec {
    let ladder = WaveLadder::new(1.0, n).unwrap();
    EnsembleSpec {
        model: Model::goy(1.0).unwrap(),
        noise: NoiseConfig::new(
            0.01,
            q(),
            SigmaFamily::additive_uniform(1.0, n),
            JumpFamily::additive_on_shell(n, 1, 0.5, MarkLaw::Gaussian { std: 1.0 }, 2.0).unwrap(),
            n,
        )
        .unwrap(),
        scheme: SchemeConfig::imex(1e-3, 1.0).unwrap().with_record_stride(20),
        init: InitialLaw::deterministic(InitialLaw::power_law(ladder, 1.0, 1.5)),
        n_paths,
        seed: 1010,
        exit_level: None,
    }
}

fn galerkin() -> Outcome {
    let r = galerkin_trend(&smooth_spec(24, 1), &[8, 16, 24]).unwrap();
    passed(&r)?;
    Ok(format!("sup-t differences {}", r.params["sup_differences"]))
}

fn eps_scaling() -> Outcome {
    let r = epsilon_scaling(&smooth_spec(16, 200), &[1e-2, 1e-3, 1e-4]).unwrap();
    passed(&r)?;
    Ok(format!("sup-t mean deviations {}", r.params["sup_mean_deviation"]))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("conservation", conservation),
        ("l4 interpolation", l4_lemma),
        ("monotonicity (algebraic)", monotonicity_algebraic),
        ("monotonicity (with noise)", monotonicity_full),
        ("ito isometry", ito_isometry),
        ("energy estimate", energy_plain),
        ("weighted energy estimate", energy_weighted),
        ("contraction", contraction),
        ("pathwise determinism", determinism),
        ("galerkin cauchy trend", galerkin),
        ("epsilon scaling", eps_scaling),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match res {
            Ok(msg) => println!("criterion {:>2} {name:<26} PASS  {msg}", i + 1),
            Err(msg) => {
                failures += 1;
                println!("criterion {:>2} {name:<26} FAIL  {msg}", i + 1);
            }
        }
    }
    if failures > 0 {
        println!("{failures} criterion/criteria failed");
        std::process::exit(1);
    }
}
