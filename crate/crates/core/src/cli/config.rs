//! Run configuration: a flat file of `section.key = value` lines.
//!
//! Values use TOML syntax (quoted strings, `[..]` lists, `#` comments), so
//! the same text can be hashed into a manifest and read back unchanged.
//!
//! ```text
//! model.variant = "sabra"
//! model.shells = 16
//! epsilon = 0.01
//! sigma.kind = "saturated_mult"
//! jumps.kind = "additive_mark"
//! run.command = "verify"
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use toml::Value;

use crate::error::{Error, Result};
use crate::integrator::{SchemeConfig, SchemeKind};
use crate::lab::{EnsembleSpec, InitialLaw};
use crate::noise::{JumpFamily, JumpKind, MarkLaw, NoiseConfig, QSpectrum, SigmaFamily};
use crate::shell::{Forcing, Model, ShellState, Triad, Variant, WaveLadder};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Couple,
    Ensemble,
    Verify,
    Certify,
    Spectrum,
}

impl Command {
    pub const ALL: [Command; 6] =
        [Command::Simulate, Command::Couple, Command::Ensemble, Command::Verify, Command::Certify, Command::Spectrum];

    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Couple => "couple",
            Command::Ensemble => "ensemble",
            Command::Verify => "verify",
            Command::Certify => "certify",
            Command::Spectrum => "spectrum",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown command {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ForcingSpec {
    Zero,
    ConstantShell {
        shell: usize,
        amplitude: Complex64,
    },
    /// CSV rows `t, re_f1, im_f1, ...`, held constant until the next row.
    Table(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaKind {
    Zero,
    Additive,
    LinearMult,
    SaturatedMult,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpSpecKind {
    None,
    AdditiveMark,
    SaturatedMultMark,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub variant: Variant,
    pub shells: usize,
    pub k0: f64,
    pub nu: f64,
    /// Overrides the variant's default triad.
    pub triad: Option<Triad>,
    pub forcing: ForcingSpec,

    /// `u0_n = amplitude 2^{-slope (n-1)} e^{i n}`.
    pub init_amplitude: f64,
    pub init_slope: f64,
    /// Relative Gaussian perturbation of `u0` per path.
    pub init_noise: f64,
    /// Size of the offset `v0 - u0` for coupled runs.
    pub couple_scale: f64,

    pub epsilon: f64,
    pub q0: f64,
    pub alpha: f64,
    pub sigma_kind: SigmaKind,
    pub sigma_gain: f64,
    /// Uniform per-shell level of the additive coefficient.
    pub sigma_base: f64,
    pub jump_kind: JumpSpecKind,
    pub jump_rate: f64,
    pub mark_law: MarkLaw,
    pub jump_shell: usize,
    pub jump_gamma: f64,

    pub scheme: SchemeKind,
    pub dt: f64,
    pub horizon: f64,
    pub record_stride: usize,

    pub command: Command,
    pub seed: u64,
    pub n_paths: usize,
    pub output_dir: PathBuf,
    pub tau_thresholds: Vec<f64>,
    pub deltas: Vec<f64>,
    pub ball_radius: f64,
    /// Sample count for the sampling checks in `verify` and `certify`.
    pub samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            variant: Variant::Sabra,
            shells: 16,
            k0: 1.0,
            nu: 1.0,
            triad: None,
            forcing: ForcingSpec::Zero,
            init_amplitude: 1.0,
            init_slope: 1.0,
            init_noise: 0.0,
            couple_scale: 0.1,
            epsilon: 0.0,
            q0: 1.0,
            alpha: 1.0,
            sigma_kind: SigmaKind::Zero,
            sigma_gain: 1.0,
            sigma_base: 1.0,
            jump_kind: JumpSpecKind::None,
            jump_rate: 0.0,
            mark_law: MarkLaw::Gaussian { std: 1.0 },
            jump_shell: 1,
            jump_gamma: 1.0,
            scheme: SchemeKind::ImexDiag,
            dt: 1e-3,
            horizon: 1.0,
            record_stride: 100,
            command: Command::Verify,
            seed: 1,
            n_paths: 100,
            output_dir: PathBuf::from("out"),
            tau_thresholds: vec![10.0],
            deltas: vec![1.0],
            ball_radius: 1.0,
            samples: 10_000,
        }
    }
}

/// Reads keys out of the flattened table, recording every problem.
struct Reader {
    values: BTreeMap<String, Value>,
    errors: Vec<String>,
}

impl Reader {
    fn take<T>(&mut self, key: &str, default: T, conv: impl Fn(&Value) -> Option<T>, what: &str) -> T {
        match self.values.remove(key) {
            None => default,
            Some(v) => conv(&v).unwrap_or_else(|| {
                self.errors.push(format!("{key}: expected {what}, got {v}"));
                default
            }),
        }
    }

    fn f64(&mut self, key: &str, default: f64) -> f64 {
        self.take(key, default, as_f64, "a number")
    }

    fn usize(&mut self, key: &str, default: usize) -> usize {
        self.take(key, default, |v| v.as_integer().and_then(|i| usize::try_from(i).ok()), "a nonnegative integer")
    }

    fn string(&mut self, key: &str) -> Option<String> {
        self.take(key, None, |v| v.as_str().map(|s| Some(s.to_string())), "a quoted string")
    }

    fn list(&mut self, key: &str, default: Vec<f64>) -> Vec<f64> {
        self.take(key, default, |v| v.as_array().and_then(|a| a.iter().map(as_f64).collect()), "a list of numbers")
    }

    fn choice<T: Copy>(&mut self, key: &str, default: T, options: &[(&str, T)]) -> T {
        match self.string(key) {
            None => default,
            Some(s) => match options.iter().find(|(n, _)| *n == s) {
                Some((_, t)) => *t,
                None => {
                    let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
                    self.errors.push(format!("{key}: {s:?} is not one of {}", names.join(", ")));
                    default
                }
            },
        }
    }
}

fn as_f64(v: &Value) -> Option<f64> {
    v.as_float().or_else(|| v.as_integer().map(|i| i as f64))
}

fn flatten(prefix: &str, table: toml::Table, out: &mut BTreeMap<String, Value>) {
    for (k, v) in table {
        let key = if prefix.is_empty() { k } else { format!("{prefix}.{k}") };
        match v {
            Value::Table(t) => flatten(&key, t, out),
            other => {
                out.insert(key, other);
            }
        }
    }
}

const VARIANTS: [(&str, Variant); 2] = [("goy", Variant::Goy), ("sabra", Variant::Sabra)];
const SCHEMES: [(&str, SchemeKind); 2] = [("imex", SchemeKind::ImexDiag), ("em", SchemeKind::EmExplicit)];
const SIGMAS: [(&str, SigmaKind); 4] = [
    ("zero", SigmaKind::Zero),
    ("additive", SigmaKind::Additive),
    ("linear_mult", SigmaKind::LinearMult),
    ("saturated_mult", SigmaKind::SaturatedMult),
];
const JUMPS: [(&str, JumpSpecKind); 3] = [
    ("none", JumpSpecKind::None),
    ("additive_mark", JumpSpecKind::AdditiveMark),
    ("saturated_mult_mark", JumpSpecKind::SaturatedMultMark),
];

fn name_of<T: PartialEq + Copy>(options: &[(&'static str, T)], t: T) -> &'static str {
    options.iter().find(|(_, x)| *x == t).map(|(n, _)| *n).expect("listed option")
}

impl RunConfig {
    /// Parses and validates a config file. Relative table paths are taken
    /// relative to the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        if let ForcingSpec::Table(p) = &mut cfg.forcing {
            if p.is_relative() {
                *p = path.parent().unwrap_or(Path::new(".")).join(&p);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parses without the cross-field validation. All problems (syntax,
    /// types, unknown keys) are reported together.
    pub fn parse(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        let mut values = BTreeMap::new();
        flatten("", table, &mut values);
        let mut r = Reader { values, errors: Vec::new() };
        let d = RunConfig::default();

        let variant = r.choice("model.variant", d.variant, &VARIANTS);
        let shells = r.usize("model.shells", d.shells);
        let k0 = r.f64("model.k0", d.k0);
        let nu = r.f64("model.nu", d.nu);
        let triad = r.take(
            "model.triad",
            None,
            |v| {
                let xs: Vec<f64> = v.as_array()?.iter().map(as_f64).collect::<Option<_>>()?;
                (xs.len() == 3).then(|| Some(Triad { a: xs[0], b: xs[1], c: xs[2] }))
            },
            "a list [a, b, c]",
        );

        let forcing_kind = r.string("forcing.kind").unwrap_or_else(|| "zero".into());
        let f_shell = r.usize("forcing.shell", 1);
        let f_re = r.f64("forcing.re", 0.0);
        let f_im = r.f64("forcing.im", 0.0);
        let f_table = r.string("forcing.table");
        let forcing = match forcing_kind.as_str() {
            "zero" => ForcingSpec::Zero,
            "constant_shell" => ForcingSpec::ConstantShell { shell: f_shell, amplitude: Complex64::new(f_re, f_im) },
            "table" => match f_table {
                Some(p) => ForcingSpec::Table(PathBuf::from(p)),
                None => {
                    r.errors.push("forcing.table: required when forcing.kind = \"table\"".into());
                    ForcingSpec::Zero
                }
            },
            other => {
                r.errors.push(format!("forcing.kind: {other:?} is not one of zero, constant_shell, table"));
                ForcingSpec::Zero
            }
        };

        let init_amplitude = r.f64("init.amplitude", d.init_amplitude);
        let init_slope = r.f64("init.slope", d.init_slope);
        let init_noise = r.f64("init.noise", d.init_noise);
        let couple_scale = r.f64("init.couple_scale", d.couple_scale);

        let epsilon = r.f64("epsilon", d.epsilon);
        let q0 = r.f64("q0", d.q0);
        let alpha = r.f64("alpha", d.alpha);
        let sigma_kind = r.choice("sigma.kind", d.sigma_kind, &SIGMAS);
        let sigma_gain = r.f64("sigma.gain", d.sigma_gain);
        let sigma_base = r.f64("sigma.base", d.sigma_base);
        let jump_kind = r.choice("jumps.kind", d.jump_kind, &JUMPS);
        let jump_rate = r.f64("jumps.rate", d.jump_rate);
        let law = r.string("jumps.mark_law").unwrap_or_else(|| "gaussian".into());
        let z0 = r.f64("jumps.z0", 1.0);
        let mark_std = r.f64("jumps.mark_std", 1.0);
        let mark_lo = r.f64("jumps.mark_lo", -1.0);
        let mark_hi = r.f64("jumps.mark_hi", 1.0);
        let mark_law = match law.as_str() {
            "gaussian" => MarkLaw::Gaussian { std: mark_std },
            "dirac" => MarkLaw::Dirac { z0 },
            "uniform" => MarkLaw::Uniform { lo: mark_lo, hi: mark_hi },
            other => {
                r.errors.push(format!("jumps.mark_law: {other:?} is not one of gaussian, dirac, uniform"));
                d.mark_law
            }
        };
        let jump_shell = r.usize("jumps.shell", d.jump_shell);
        let jump_gamma = r.f64("jumps.gamma", d.jump_gamma);

        let scheme = r.choice("scheme.kind", d.scheme, &SCHEMES);
        let dt = r.f64("scheme.dt", d.dt);
        let horizon = r.f64("scheme.horizon", d.horizon);
        let record_stride = r.usize("scheme.record_stride", d.record_stride);

        let commands: Vec<(&str, Command)> = Command::ALL.iter().map(|c| (c.name(), *c)).collect();
        let command = r.choice("run.command", d.command, &commands);
        let seed =
            r.take("run.seed", d.seed, |v| v.as_integer().and_then(|i| u64::try_from(i).ok()), "a nonnegative integer");
        let n_paths = r.usize("run.n_paths", d.n_paths);
        let output_dir = r.string("run.output_dir").map(PathBuf::from).unwrap_or(d.output_dir);
        let tau_thresholds = r.list("run.tau_thresholds", d.tau_thresholds);
        let deltas = r.list("run.deltas", d.deltas);
        let ball_radius = r.f64("run.ball_radius", d.ball_radius);
        let samples = r.usize("run.samples", d.samples);

        let mut errors = r.errors;
        errors.extend(r.values.keys().map(|k| format!("{k}: unknown key")));
        if !errors.is_empty() {
            return Err(Error::Validation(errors));
        }
        Ok(Self {
            variant,
            shells,
            k0,
            nu,
            triad,
            forcing,
            init_amplitude,
            init_slope,
            init_noise,
            couple_scale,
            epsilon,
            q0,
            alpha,
            sigma_kind,
            sigma_gain,
            sigma_base,
            jump_kind,
            jump_rate,
            mark_law,
            jump_shell,
            jump_gamma,
            scheme,
            dt,
            horizon,
            record_stride,
            command,
            seed,
            n_paths,
            output_dir,
            tau_thresholds,
            deltas,
            ball_radius,
            samples,
        })
    }

    /// Every key with its value; parsing the result gives back `self`.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: Value| writeln!(s, "{k} = {v}").expect("string write");
        let f = |x: f64| Value::Float(x);
        let i = |x: usize| Value::Integer(x as i64);
        let st = |x: &str| Value::String(x.to_string());
        let list = |xs: &[f64]| Value::Array(xs.iter().map(|x| Value::Float(*x)).collect());

        put("model.variant", st(self.variant.name()));
        put("model.shells", i(self.shells));
        put("model.k0", f(self.k0));
        put("model.nu", f(self.nu));
        if let Some(t) = self.triad {
            put("model.triad", list(&[t.a, t.b, t.c]));
        }
        match &self.forcing {
            ForcingSpec::Zero => put("forcing.kind", st("zero")),
            ForcingSpec::ConstantShell { shell, amplitude } => {
                put("forcing.kind", st("constant_shell"));
                put("forcing.shell", i(*shell));
                put("forcing.re", f(amplitude.re));
                put("forcing.im", f(amplitude.im));
            }
            ForcingSpec::Table(p) => {
                put("forcing.kind", st("table"));
                put("forcing.table", st(&p.to_string_lossy()));
            }
        }
        put("init.amplitude", f(self.init_amplitude));
        put("init.slope", f(self.init_slope));
        put("init.noise", f(self.init_noise));
        put("init.couple_scale", f(self.couple_scale));
        put("epsilon", f(self.epsilon));
        put("q0", f(self.q0));
        put("alpha", f(self.alpha));
        put("sigma.kind", st(name_of(&SIGMAS, self.sigma_kind)));
        put("sigma.gain", f(self.sigma_gain));
        put("sigma.base", f(self.sigma_base));
        put("jumps.kind", st(name_of(&JUMPS, self.jump_kind)));
        put("jumps.rate", f(self.jump_rate));
        put("jumps.mark_law", st(self.mark_law.name()));
        match self.mark_law {
            MarkLaw::Gaussian { std } => put("jumps.mark_std", f(std)),
            MarkLaw::Dirac { z0 } => put("jumps.z0", f(z0)),
            MarkLaw::Uniform { lo, hi } => {
                put("jumps.mark_lo", f(lo));
                put("jumps.mark_hi", f(hi));
            }
        }
        put("jumps.shell", i(self.jump_shell));
        put("jumps.gamma", f(self.jump_gamma));
        put("scheme.kind", st(name_of(&SCHEMES, self.scheme)));
        put("scheme.dt", f(self.dt));
        put("scheme.horizon", f(self.horizon));
        put("scheme.record_stride", i(self.record_stride));
        put("run.command", st(self.command.name()));
        put("run.seed", Value::Integer(self.seed as i64));
        put("run.n_paths", i(self.n_paths));
        put("run.output_dir", st(&self.output_dir.to_string_lossy()));
        put("run.tau_thresholds", list(&self.tau_thresholds));
        put("run.deltas", list(&self.deltas));
        put("run.ball_radius", f(self.ball_radius));
        put("run.samples", i(self.samples));
        s
    }

    /// Cross-field checks; every violation is listed.
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        let mut note = |r: Result<()>| match r {
            Err(Error::Config(m)) => errs.push(m),
            Err(e) => errs.push(e.to_string()),
            Ok(()) => {}
        };
        if self.shells < 4 {
            note(Err(Error::Config(format!("model.shells must be >= 4, got {}", self.shells))));
        }
        if self.seed > i64::MAX as u64 {
            note(Err(Error::Config(format!("run.seed must be <= {}", i64::MAX))));
        }
        if self.output_dir.as_os_str().is_empty() {
            note(Err(Error::Config("run.output_dir must be nonempty".into())));
        }
        if self.n_paths == 0 {
            note(Err(Error::Config("run.n_paths must be >= 1".into())));
        }
        if self.samples == 0 {
            note(Err(Error::Config("run.samples must be >= 1".into())));
        }
        if !(self.ball_radius > 0.0 && self.ball_radius.is_finite()) {
            note(Err(Error::Config(format!("run.ball_radius must be positive, got {}", self.ball_radius))));
        }
        for (key, xs) in [("run.deltas", &self.deltas), ("run.tau_thresholds", &self.tau_thresholds)] {
            if xs.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
                note(Err(Error::Config(format!("{key} entries must be positive, got {xs:?}"))));
            }
        }
        for (key, x) in [
            ("init.amplitude", self.init_amplitude),
            ("init.noise", self.init_noise),
            ("init.couple_scale", self.couple_scale),
        ] {
            if !(x >= 0.0 && x.is_finite()) {
                note(Err(Error::Config(format!("{key} must be finite and >= 0, got {x}"))));
            }
        }
        if !self.init_slope.is_finite() {
            note(Err(Error::Config("init.slope must be finite".into())));
        }
        if let ForcingSpec::ConstantShell { shell, .. } = self.forcing {
            if shell == 0 || shell > self.shells {
                note(Err(Error::Config(format!("forcing.shell {shell} outside 1..={}", self.shells))));
            }
        }
        note(self.model_without_forcing().map(|_| ()));
        let scheme = self.scheme_config();
        note(scheme.as_ref().map(|_| ()).map_err(clone_err));
        if self.shells >= 4 {
            let ladder = self.ladder();
            note(ladder.as_ref().map(|_| ()).map_err(clone_err));
            if let (Ok(l), Ok(s)) = (&ladder, &scheme) {
                note(s.check_stability(self.nu, *l));
            }
            note(self.noise().and_then(|n| n.check_admissible(self.nu)));
        }
        if let ForcingSpec::Table(_) = self.forcing {
            note(self.forcing().map(|_| ()));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errs))
        }
    }

    pub fn ladder(&self) -> Result<WaveLadder> {
        WaveLadder::new(self.k0, self.shells)
    }

    pub fn forcing(&self) -> Result<Forcing> {
        Ok(match &self.forcing {
            ForcingSpec::Zero => Forcing::Zero,
            ForcingSpec::ConstantShell { shell, amplitude } => {
                Forcing::ConstantShell { shell: *shell, amplitude: *amplitude }
            }
            ForcingSpec::Table(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Config(format!("forcing.table {}: {e}", p.display())))?;
                Forcing::parse_table(&text)?
            }
        })
    }

    fn model_without_forcing(&self) -> Result<Model> {
        match self.triad {
            Some(t) => Model::with_triad(self.variant, self.nu, t),
            None => Model::new(self.variant, self.nu),
        }
    }

    pub fn model(&self) -> Result<Model> {
        Ok(self.model_without_forcing()?.with_forcing(self.forcing()?))
    }

    pub fn noise(&self) -> Result<NoiseConfig> {
        let n = self.shells;
        let q = QSpectrum::new(self.q0, self.alpha)?;
        let sigma = match self.sigma_kind {
            SigmaKind::Zero => SigmaFamily::zero(n),
            SigmaKind::Additive => SigmaFamily::additive_uniform(self.sigma_base, n),
            SigmaKind::LinearMult => SigmaFamily::LinearMult { gain: self.sigma_gain },
            SigmaKind::SaturatedMult => SigmaFamily::SaturatedMult { gain: self.sigma_gain },
        };
        let jumps = match self.jump_kind {
            JumpSpecKind::None => JumpFamily::none(),
            JumpSpecKind::AdditiveMark => {
                JumpFamily::additive_on_shell(n, self.jump_shell, self.jump_gamma, self.mark_law, self.jump_rate)?
            }
            JumpSpecKind::SaturatedMultMark => {
                JumpFamily { kind: JumpKind::SaturatedMultMark, mark_law: self.mark_law, rate: self.jump_rate }
            }
        };
        NoiseConfig::new(self.epsilon, q, sigma, jumps, n)
    }

    pub fn scheme_config(&self) -> Result<SchemeConfig> {
        SchemeConfig::new(self.scheme, self.dt, self.horizon, self.record_stride.max(1))
    }

    pub fn initial_state(&self) -> Result<ShellState> {
        Ok(InitialLaw::power_law(self.ladder()?, self.init_amplitude, self.init_slope))
    }

    /// `v0 - u0` for coupled runs: the same profile as `u0`, scaled and
    /// rotated by a quarter turn.
    pub fn couple_offset(&self) -> Result<ShellState> {
        let p = InitialLaw::power_law(self.ladder()?, self.couple_scale, self.init_slope);
        Ok(p.scale(Complex64::new(0.0, 1.0)))
    }

    pub fn ensemble_spec(&self) -> Result<EnsembleSpec> {
        Ok(EnsembleSpec {
            model: self.model()?,
            noise: self.noise()?,
            scheme: self.scheme_config()?,
            init: InitialLaw { base: self.initial_state()?, noise: self.init_noise },
            n_paths: self.n_paths,
            seed: self.seed,
            exit_level: None,
        })
    }
}

fn clone_err(e: &Error) -> Error {
    match e {
        Error::Config(m) => Error::Config(m.clone()),
        other => Error::Config(other.to_string()),
    }
}

impl FromStr for RunConfig {
    type Err = Error;

    /// Parses and validates.
    fn from_str(s: &str) -> Result<Self> {
        let cfg = Self::parse(s)?;
        cfg.validate()?;
        Ok(cfg)
    }
}
