use num_complex::Complex64;

use super::state::{ShellState, WaveLadder};
use crate::error::{Error, Result};

/// Which norm of `f` enters a time integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForcingNorm {
    H,
    VDual,
}

/// Deterministic forcing `f(t)`.
///
/// Tables are piecewise constant and right-continuous: row `i` holds on
/// `[t_i, t_{i+1})`, the first row extends back to `t = 0` and the last one
/// forward to infinity.
#[derive(Debug, Clone, Default, PartialEq)]
pub enum Forcing {
    #[default]
    Zero,
    ConstantShell {
        shell: usize,
        amplitude: Complex64,
    },
    Table {
        times: Vec<f64>,
        rows: Vec<Vec<Complex64>>,
    },
}

impl Forcing {
    pub fn table(times: Vec<f64>, rows: Vec<Vec<Complex64>>) -> Result<Self> {
        if times.is_empty() || times.len() != rows.len() {
            return Err(Error::Config(format!(
                "forcing table needs matching nonempty times/rows ({} vs {})",
                times.len(),
                rows.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config("forcing table times must be strictly increasing".into()));
        }
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::Config("forcing table rows have different widths".into()));
        }
        Ok(Forcing::Table { times, rows })
    }

    /// Parses rows `t, re_f1, im_f1, re_f2, im_f2, ...`; `#` starts a comment,
    /// a non-numeric first line is treated as a header.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut times = Vec::new();
        let mut rows = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parsed: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
            let values = match parsed {
                Ok(v) => v,
                Err(_) if times.is_empty() && rows.is_empty() && lineno == 0 => continue,
                Err(e) => return Err(Error::Config(format!("forcing table line {}: {e}", lineno + 1))),
            };
            if values.len() < 3 || values.len() % 2 == 0 {
                return Err(Error::Config(format!(
                    "forcing table line {}: expected t followed by (re, im) pairs",
                    lineno + 1
                )));
            }
            times.push(values[0]);
            rows.push(values[1..].chunks(2).map(|p| Complex64::new(p[0], p[1])).collect());
        }
        Self::table(times, rows)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Forcing::Zero => true,
            Forcing::ConstantShell { amplitude, .. } => amplitude.norm_sqr() == 0.0,
            Forcing::Table { rows, .. } => rows.iter().all(|r| r.iter().all(|z| z.norm_sqr() == 0.0)),
        }
    }

    /// Writes `f(t)` into `out` (shells beyond the table width are zero).
    pub fn eval_into(&self, t: f64, out: &mut ShellState) {
        let amps = out.amplitudes_mut();
        amps.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        match self {
            Forcing::Zero => {}
            Forcing::ConstantShell { shell, amplitude } => {
                if *shell >= 1 && *shell <= amps.len() {
                    amps[shell - 1] = *amplitude;
                }
            }
            Forcing::Table { times, rows } => {
                let row = &rows[Self::piece(times, t)];
                let m = row.len().min(amps.len());
                amps[..m].copy_from_slice(&row[..m]);
            }
        }
    }

    pub fn eval(&self, t: f64, ladder: WaveLadder) -> ShellState {
        let mut out = ShellState::zeros(ladder);
        self.eval_into(t, &mut out);
        out
    }

    fn piece(times: &[f64], t: f64) -> usize {
        // last i with times[i] <= t, clamped to 0
        times.partition_point(|&ti| ti <= t).saturating_sub(1)
    }

    /// Exact `int_0^t ||f(s)||^2 e^{-delta s} ds` for the piecewise-constant forcing.
    pub fn integral_sq(&self, t: f64, ladder: WaveLadder, norm: ForcingNorm, delta: f64) -> f64 {
        let sq = |s: &ShellState| match norm {
            ForcingNorm::H => s.h_norm_sq(),
            ForcingNorm::VDual => s.v_dual_norm().powi(2),
        };
        let weight = |a: f64, b: f64| {
            if delta == 0.0 {
                b - a
            } else {
                ((-delta * a).exp() - (-delta * b).exp()) / delta
            }
        };
        if t <= 0.0 {
            return 0.0;
        }
        match self {
            Forcing::Zero => 0.0,
            Forcing::ConstantShell { .. } => sq(&self.eval(0.0, ladder)) * weight(0.0, t),
            Forcing::Table { times, .. } => {
                let mut breaks: Vec<f64> = vec![0.0];
                breaks.extend(times.iter().copied().filter(|&ti| ti > 0.0 && ti < t));
                breaks.push(t);
                breaks.windows(2).map(|w| sq(&self.eval(w[0], ladder)) * weight(w[0], w[1])).sum()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_right_continuous() {
        let f = Forcing::parse_table("t,re1,im1\n0.0, 1.0, 0.0\n1.0, 2.0, 0.0\n").unwrap();
        let l = WaveLadder::new(1.0, 4).unwrap();
        assert_eq!(f.eval(0.5, l).get(1).re, 1.0);
        assert_eq!(f.eval(1.0, l).get(1).re, 2.0);
        assert_eq!(f.eval(0.999_999, l).get(1).re, 1.0);
        assert_eq!(f.eval(7.0, l).get(1).re, 2.0);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(Forcing::parse_table("0.0,1.0,0.0\n0.0,1.0,0.0\n").is_err());
        assert!(Forcing::parse_table("0.0,1.0\n").is_err());
        assert!(Forcing::parse_table("").is_err());
    }

    #[test]
    fn weighted_integral_closed_form() {
        let l = WaveLadder::new(1.0, 4).unwrap();
        let f = Forcing::ConstantShell { shell: 1, amplitude: Complex64::new(3.0, 4.0) };
        // |f|^2 = 25, int_0^T e^{-s} ds = 1 - e^{-T}
        let got = f.integral_sq(2.0, l, ForcingNorm::H, 1.0);
        assert!((got - 25.0 * (1.0 - (-2.0f64).exp())).abs() < 1e-12);
        // V' weight k_1^-2 = 1/4
        let got = f.integral_sq(2.0, l, ForcingNorm::VDual, 0.0);
        assert!((got - 25.0 / 4.0 * 2.0).abs() < 1e-12);
    }

    #[test]
    fn table_integral_sums_pieces() {
        let l = WaveLadder::new(1.0, 4).unwrap();
        let f = Forcing::parse_table("0.0,1.0,0.0\n1.0,2.0,0.0\n").unwrap();
        let got = f.integral_sq(1.5, l, ForcingNorm::H, 0.0);
        assert!((got - (1.0 + 4.0 * 0.5)).abs() < 1e-12);
    }
}
